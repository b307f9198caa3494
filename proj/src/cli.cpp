#include "kgcohort/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "kgcohort/backbone.hpp"
#include "kgcohort/cohort.hpp"
#include "kgcohort/corpus.hpp"
#include "kgcohort/dictionary.hpp"
#include "kgcohort/error.hpp"
#include "kgcohort/export.hpp"
#include "kgcohort/graph.hpp"
#include "kgcohort/matcher.hpp"
#include "kgcohort/report.hpp"
#include "kgcohort/synth.hpp"
#include "kgcohort/text.hpp"
#include "kgcohort/version.hpp"

namespace kgcohort::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw Error(Errc::IoError, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

Rational parse_fraction(std::string_view s) {
  auto bad = [&] { return Error(Errc::InvalidConfig, "not a fraction: '" + std::string(s) + "'"); };
  if (s.empty()) throw bad();
  if (s.find('/') != std::string_view::npos) {
    try {
      return Rational::parse(s);
    } catch (const Error&) {
      throw bad();
    }
  }
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    try {
      return Rational::parse(s);
    } catch (const Error&) {
      throw bad();
    }
  }
  std::string whole(s.substr(0, dot)), frac(s.substr(dot + 1));
  if (frac.empty() || frac.size() > 18 ||
      !std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw bad();
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  std::string den = "1" + std::string(frac.size(), '0');
  bool neg = whole[0] == '-';
  try {
    Rational w = Rational::parse(whole);
    Rational f = Rational::from_strings(frac, den);
    return neg ? w - f : w + f;
  } catch (const Error&) {
    throw bad();
  }
}

ojson RunConfig::to_json() const {
  ojson j;
  j["dictionary"] = dictionary;
  j["corpus"] = corpus;
  j["exclusions"] = exclusions;
  j["annotations"] = annotations;
  j["out"] = out;
  j["matches"] = matches;
  j["graph"] = graph;
  j["backbone"] = backbone;
  j["cohort"] = cohort;
  j["profile"] = profile;
  j["synth_out"] = synth_out;
  j["min_cooccur"] = min_cooccur;
  j["min_support"] = min_support;
  j["lenient"] = lenient;
  j["aggressive"] = aggressive;
  j["min_unique_terms"] = min_unique_terms;
  j["seed_terms"] = seed_terms;
  j["window"] = window;
  j["strict"] = strict;
  j["min_time"] = min_time;
  j["max_time"] = max_time;
  j["formats"] = formats;
  j["run_name"] = run_name;
  j["float_weights"] = float_weights;
  j["term"] = term;
  j["backbone_only"] = backbone_only;
  return j;
}

namespace {

// ---------------------------------------------------------------------------
// Paths and manifests

struct Paths {
  fs::path out;
  fs::path corpus, drug_mention, ingest_report;
  fs::path matches, audit;
  fs::path graph, backbone, backbone_summary;
  fs::path cohort, summary_txt, summary_json;
  fs::path synth_out, demo_dictionary;

  explicit Paths(const RunConfig& c) : out(c.out) {
    corpus = out / "corpus.jsonl";
    drug_mention = out / "drug_mention.txt";
    ingest_report = out / "ingest_report.json";
    matches = c.matches.empty() ? out / "matches.jsonl" : fs::path(c.matches);
    audit = out / "matches_audit.csv";
    graph = c.graph.empty() ? out / "graph.csv" : fs::path(c.graph);
    backbone = c.backbone.empty() ? out / "backbone.csv" : fs::path(c.backbone);
    backbone_summary = out / "backbone_summary.txt";
    cohort = c.cohort.empty() ? out / "cohort.csv" : fs::path(c.cohort);
    summary_txt = out / "summary.txt";
    summary_json = out / "summary.json";
    synth_out = c.synth_out.empty() ? out / "synth_corpus.jsonl" : fs::path(c.synth_out);
    demo_dictionary = out / "demo_dictionary.tsv";
  }
};

class Manifest {
 public:
  Manifest(std::string command, const RunConfig& cfg) : command_(std::move(command)), cfg_(cfg) {}

  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }

  void write(const fs::path& dir) const {
    ojson j;
    j["tool"] = "kgcohort";
    j["version"] = kVersion;
    j["command"] = command_;
    auto config = cfg_.to_json();
    j["config_sha256"] = sha256_hex(config.dump());
    j["config"] = std::move(config);
    j["inputs"] = digests(inputs_);
    j["outputs"] = digests(outputs_);
    write_file(dir / ("manifest_" + command_ + ".json"), j.dump(2) + "\n");
  }

 private:
  static ojson digests(std::vector<fs::path> paths) {
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    ojson j = ojson::object();
    for (const auto& p : paths) j[p.generic_string()] = sha256_hex(read_file(p));
    return j;
  }

  std::string command_;
  const RunConfig& cfg_;
  std::vector<fs::path> inputs_, outputs_;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw Error(Errc::InvalidConfig, std::string("missing --") + what);
  if (!fs::is_regular_file(path))
    throw Error(Errc::InvalidConfig, std::string(what) + " not found: " + path);
}

void require_existing(const fs::path& p, const char* stage) {
  if (!fs::is_regular_file(p))
    throw Error(Errc::InvalidConfig,
                p.string() + " not found; run the '" + stage + "' stage first");
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + p.string());
  return in;
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

std::vector<ExportFormat> extra_formats(const RunConfig& c) {
  std::vector<ExportFormat> out;
  for (const auto& f : c.formats) {
    auto fmt = parse_format(f);
    if (fmt != ExportFormat::Csv && std::find(out.begin(), out.end(), fmt) == out.end())
      out.push_back(fmt);
  }
  return out;
}

fs::path with_extension(const fs::path& p, ExportFormat f) {
  fs::path q = p;
  q.replace_extension(f == ExportFormat::GraphMl ? ".graphml" : ".json");
  return q;
}

std::optional<Timestamp> time_flag(const std::string& s, const char* name) {
  if (s.empty()) return std::nullopt;
  auto ts = parse_timestamp(s);
  if (!ts) throw Error(Errc::InvalidConfig, std::string(name) + " is not an ISO-8601 time");
  return ts;
}

Corpus read_ingested(const Paths& p) {
  require_existing(p.corpus, "ingest");
  auto in = open_in(p.corpus);
  return ingest(in, {true, std::nullopt, std::nullopt}).corpus;
}

// ---------------------------------------------------------------------------
// Stages

void stage_ingest(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("ingest", c);
  require_file(c.corpus, "corpus");
  m.input(c.corpus);

  IngestOptions opts;
  opts.strict = c.strict;
  opts.min_time = time_flag(c.min_time, "min_time");
  opts.max_time = time_flag(c.max_time, "max_time");
  auto in = open_in(c.corpus);
  auto result = ingest(in, opts);
  Corpus corpus = std::move(result.corpus);
  const auto posts_read = corpus.posts().size();

  std::set<std::string> excluded;
  if (!c.exclusions.empty()) {
    require_file(c.exclusions, "exclusions");
    m.input(c.exclusions);
    auto ex = open_in(c.exclusions);
    excluded = read_exclusions(ex);
    corpus = apply_exclusions(corpus, excluded);
  }
  const auto posts_after_exclusion = corpus.posts().size();

  ojson report;
  report["lines_read"] = result.report.lines_read;
  report["skipped"] = result.report.skipped;
  report["outside_window"] = result.report.outside_window;
  report["excluded_users"] = excluded.size();
  report["excluded_posts"] = posts_read - posts_after_exclusion;

  if (!c.seed_terms.empty()) {
    require_file(c.dictionary, "dictionary");
    m.input(c.dictionary);
    auto dict = Dictionary::load_file(c.dictionary);
    auto seed = SeedSpec::resolve(c.seed_terms, dict);
    auto selected = seed_select(corpus, dict, seed);
    report["drug_mention_users"] = selected.size();
    corpus = restrict_to_users(corpus, selected);
    write_file(p.drug_mention, render([&](std::ostream& os) {
                 for (const auto& u : selected) os << u << '\n';
               }));
    m.output(p.drug_mention);
  }
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "no posts left after selection");
  report["posts"] = corpus.posts().size();
  report["users"] = corpus.user_count();
  report["problems"] = result.report.problems;

  write_file(p.corpus, render([&](std::ostream& os) { corpus.write_jsonl(os); }));
  write_file(p.ingest_report, report.dump(2) + "\n");
  m.output(p.corpus);
  m.output(p.ingest_report);
  m.write(p.out);
  log << "ingest: " << corpus.posts().size() << " posts, " << corpus.user_count()
      << " users, " << result.report.skipped << " skipped\n";
}

void stage_match(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("match", c);
  require_file(c.dictionary, "dictionary");
  m.input(c.dictionary);
  m.input(p.corpus);
  auto dict = Dictionary::load_file(c.dictionary);
  auto corpus = read_ingested(p);
  auto table = match_corpus(corpus, dict, {1, c.workers});
  write_file(p.matches, render([&](std::ostream& os) { table.write_jsonl(os); }));
  write_file(p.audit, render([&](std::ostream& os) { table.write_audit_csv(os); }));
  m.output(p.matches);
  m.output(p.audit);
  m.write(p.out);
  std::size_t hits = std::count_if(table.records().begin(), table.records().end(),
                                   [](const auto& r) { return !r.terms.empty(); });
  log << "match: " << hits << " of " << table.records().size() << " posts matched\n";
}

MatchTable read_matches(const RunConfig& c, const Paths& p) {
  require_existing(p.matches, "match");
  auto in = open_in(p.matches);
  return MatchTable::read_jsonl(in, c.window);
}

void stage_graph(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("graph", c);
  m.input(p.matches);
  auto table = read_matches(c, p);
  auto proximity = build_proximity(table, {c.min_cooccur, c.min_support});
  auto distance = to_distance(proximity);
  write_file(p.graph, render([&](std::ostream& os) {
               export_graph(os, distance, nullptr, ExportFormat::Csv);
             }));
  m.output(p.graph);
  for (auto f : extra_formats(c)) {
    auto path = with_extension(p.graph, f);
    write_file(path, render([&](std::ostream& os) { export_graph(os, distance, nullptr, f); }));
    m.output(path);
  }
  m.write(p.out);
  log << "graph: " << distance.node_count() << " nodes, " << distance.edge_count()
      << " edges\n";
}

void stage_backbone(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("backbone", c);
  require_existing(p.graph, "graph");
  m.input(p.graph);
  auto in = open_in(p.graph);
  auto graph = import_graph(in, ExportFormat::Csv).graph;

  BackboneResult bb = c.float_weights
                          ? backbone_from_flags(extract_backbone_approx(graph, 1e-9, {c.workers}).is_metric)
                          : extract_backbone(graph, {c.workers});
  write_file(p.backbone, render([&](std::ostream& os) {
               export_graph(os, graph, &bb, ExportFormat::Csv);
             }));
  m.output(p.backbone);
  for (auto f : extra_formats(c)) {
    auto path = with_extension(p.backbone, f);
    write_file(path, render([&](std::ostream& os) { export_graph(os, graph, &bb, f); }));
    m.output(path);
  }
  auto line = backbone_summary_line(graph.node_count(), graph.edge_count(),
                                    bb.backbone_edges.size(), bb.tau());
  write_file(p.backbone_summary, line + "\n");
  m.output(p.backbone_summary);
  m.write(p.out);
  log << "backbone: " << line << '\n';
}

EdgeListFile read_backbone(const Paths& p) {
  require_existing(p.backbone, "backbone");
  auto in = open_in(p.backbone);
  auto file = import_graph(in, ExportFormat::Csv);
  if (!file.is_backbone)
    throw Error(Errc::FatalParse, p.backbone.string() + " has no is_backbone column");
  return file;
}

void stage_cohort(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("cohort", c);
  m.input(p.corpus);
  m.input(p.matches);
  m.input(p.backbone);
  auto corpus = read_ingested(p);
  auto table = read_matches(c, p);
  auto file = read_backbone(p);
  auto bb = backbone_from_flags(*file.is_backbone);
  auto proximity = to_proximity(file.graph);

  std::set<std::string> drug;
  const std::set<std::string>* drug_ptr = nullptr;
  if (!c.seed_terms.empty()) {
    require_existing(p.drug_mention, "ingest");
    m.input(p.drug_mention);
    auto in = open_in(p.drug_mention);
    drug = read_exclusions(in);
    drug_ptr = &drug;
  }
  CohortInputs inputs{corpus, table, proximity, file.graph, bb, drug_ptr};
  inputs.lenient = {parse_fraction(c.lenient), c.min_unique_terms};
  inputs.aggressive = {parse_fraction(c.aggressive), c.min_unique_terms};
  for (const auto* f : {&inputs.lenient, &inputs.aggressive})
    if (f->percentile.sign() < 0 || f->percentile > Rational(1))
      throw Error(Errc::InvalidConfig, "percentiles must lie in [0, 1]");
  auto report = build_cohort_report(inputs);

  write_file(p.cohort, render([&](std::ostream& os) { export_cohort(os, report, ExportFormat::Csv); }));
  m.output(p.cohort);
  for (auto f : extra_formats(c)) {
    if (f != ExportFormat::Json) continue;
    auto path = with_extension(p.cohort, f);
    write_file(path, render([&](std::ostream& os) { export_cohort(os, report, f); }));
    m.output(path);
  }
  m.write(p.out);
  log << "cohort: " << report.count(CohortFilter::Backbone) << " of "
      << report.count(CohortFilter::Raw) << " users are backbone contributors ("
      << percent(report.r_raw()) << ")\n";
}

void stage_report(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("report", c);
  require_existing(p.cohort, "cohort");
  m.input(p.cohort);
  m.input(p.backbone);
  auto cin = open_in(p.cohort);
  auto report = import_cohort(cin, ExportFormat::Csv);
  auto file = read_backbone(p);
  auto bb = backbone_from_flags(*file.is_backbone);

  std::vector<FilterValidation> validation;
  if (!c.annotations.empty()) {
    require_file(c.annotations, "annotations");
    m.input(c.annotations);
    auto ain = open_in(c.annotations);
    validation = validate_filters(report, read_annotations(ain));
  }
  std::vector<SummaryRow> rows{summarize(c.run_name, report, file.graph, bb)};
  auto overlaps = overlap(report);
  if (c.seed_terms.empty())
    std::erase_if(overlaps, [](const OverlapCell& o) {
      return o.a == CohortFilter::DrugMention || o.b == CohortFilter::DrugMention;
    });
  auto text = render([&](std::ostream& os) { write_summary_text(os, rows, overlaps, validation); });
  write_file(p.summary_txt, text);
  write_file(p.summary_json, summary_json(rows, overlaps, validation).dump(2) + "\n");
  m.output(p.summary_txt);
  m.output(p.summary_json);
  m.write(p.out);
  log << text;
}

std::string file_safe(std::string_view s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "term" : out;
}

void stage_ego(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("ego", c);
  if (c.term.empty()) throw Error(Errc::InvalidConfig, "missing --term");
  m.input(p.backbone);
  auto file = read_backbone(p);
  auto bb = backbone_from_flags(*file.is_backbone);

  std::string center = text::normalize(c.term);
  if (!c.dictionary.empty()) {
    require_file(c.dictionary, "dictionary");
    m.input(c.dictionary);
    auto dict = Dictionary::load_file(c.dictionary);
    if (auto id = dict.resolve(c.term)) center = dict.entry(*id).canonical;
  }
  auto sub = ego(file.graph, center, c.backbone_only ? &bb : nullptr);

  // Carry the backbone flags over to the ego edges.
  std::vector<bool> flags;
  for (const auto& e : sub.edges) {
    auto i = *file.graph.find_node(sub.nodes[e.i]);
    auto j = *file.graph.find_node(sub.nodes[e.j]);
    auto it = std::find_if(file.graph.edges.begin(), file.graph.edges.end(),
                           [&](const DistanceEdge& x) { return x.i == i && x.j == j; });
    flags.push_back(bb.is_metric[std::size_t(it - file.graph.edges.begin())]);
  }
  auto sub_bb = backbone_from_flags(flags);
  auto path = p.out / ("ego_" + file_safe(center) + (c.backbone_only ? "_backbone" : "") + ".graphml");
  write_file(path, render([&](std::ostream& os) { export_graph(os, sub, &sub_bb, ExportFormat::GraphMl); }));
  m.output(path);
  m.write(p.out);
  log << "ego: " << sub.node_count() << " nodes, " << sub.edge_count() << " edges -> "
      << path.generic_string() << '\n';
}

void stage_synth(const RunConfig& c, std::ostream& log) {
  Paths p(c);
  Manifest m("synth", c);
  require_file(c.profile, "profile");
  m.input(c.profile);
  synth::SynthProfile profile;
  try {
    profile = synth::SynthProfile::from_json(nlohmann::json::parse(read_file(c.profile)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidProfile, std::string("profile: ") + e.what());
  }
  Dictionary dict;
  if (c.dictionary.empty()) {
    dict = synth::demo_dictionary();
    write_file(p.demo_dictionary, render([&](std::ostream& os) { dict.write_tsv(os); }));
    m.output(p.demo_dictionary);
  } else {
    require_file(c.dictionary, "dictionary");
    m.input(c.dictionary);
    dict = Dictionary::load_file(c.dictionary);
  }
  auto corpus = synth::generate(profile, dict);
  write_file(p.synth_out, render([&](std::ostream& os) { corpus.write_jsonl(os); }));
  m.output(p.synth_out);
  m.write(p.out);
  log << "synth: " << corpus.posts().size() << " posts from " << corpus.user_count()
      << " users -> " << p.synth_out.generic_string() << '\n';
}

void stage_pipeline(const RunConfig& c, std::ostream& log) {
  stage_ingest(c, log);
  stage_match(c, log);
  stage_graph(c, log);
  stage_backbone(c, log);
  stage_cohort(c, log);
  stage_report(c, log);
  Paths p(c);
  Manifest m("pipeline", c);
  for (const auto& in : {c.dictionary, c.corpus, c.exclusions, c.annotations})
    if (!in.empty()) m.input(in);
  for (const auto& stage : {"ingest", "match", "graph", "backbone", "cohort", "report"})
    m.output(p.out / (std::string("manifest_") + stage + ".json"));
  m.write(p.out);
}

// ---------------------------------------------------------------------------
// Option binding: defaults < config file < flags

class Binder {
 public:
  Binder(CLI::App& app, RunConfig& cfg) : app_(app), cfg_(cfg) {}

  template <class T>
  void bind(const std::string& flag, const std::string& key, T& field, const std::string& help) {
    CLI::Option* opt = app_.add_option(flag, field, help);
    if constexpr (!std::is_same_v<T, std::vector<std::string>>) opt->capture_default_str();
    entries_.push_back({opt, key, [&field](const nlohmann::json& v) { field = v.get<T>(); }});
  }

  void bind_flag(const std::string& flag, const std::string& key, bool& field,
                 const std::string& help) {
    CLI::Option* opt = app_.add_flag(flag, field, help);
    entries_.push_back({opt, key, [&field](const nlohmann::json& v) { field = v.get<bool>(); }});
  }

  void apply_config_file(const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidConfig, "config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");
    std::set<std::string> known;
    for (auto& e : entries_) {
      known.insert(e.key);
      if (!j.contains(e.key) || e.option->count() > 0) continue;
      try {
        e.set(j.at(e.key));
      } catch (const nlohmann::json::exception& ex) {
        throw Error(Errc::InvalidConfig, "config field '" + e.key + "': " + ex.what());
      }
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!known.contains(it.key()))
        throw Error(Errc::InvalidConfig, "unknown config field '" + it.key() + "'");
  }

 private:
  struct Entry {
    CLI::Option* option;
    std::string key;
    std::function<void(const nlohmann::json&)> set;
  };
  CLI::App& app_;
  RunConfig& cfg_;
  std::vector<Entry> entries_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"kgcohort: co-occurrence knowledge graphs, metric backbones and "
               "backbone-contributor cohorts"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration; flags override its fields");

  Binder b(app, cfg);
  b.bind("--dictionary", "dictionary", cfg.dictionary, "Dictionary TSV (parent, synonym, category)");
  b.bind("--corpus", "corpus", cfg.corpus, "Input posts, JSON Lines");
  b.bind("--exclusions", "exclusions", cfg.exclusions, "User ids to exclude, one per line");
  b.bind("--annotations", "annotations", cfg.annotations, "Annotation CSV (user_id,label)");
  b.bind("--out", "out", cfg.out, "Output directory");
  b.bind("--matches", "matches", cfg.matches, "Matches file (default <out>/matches.jsonl)");
  b.bind("--graph", "graph", cfg.graph, "Edge list (default <out>/graph.csv)");
  b.bind("--backbone-file", "backbone", cfg.backbone, "Backbone edge list (default <out>/backbone.csv)");
  b.bind("--cohort", "cohort", cfg.cohort, "Cohort CSV (default <out>/cohort.csv)");
  b.bind("--profile", "profile", cfg.profile, "Synthetic corpus profile (JSON)");
  b.bind("--synth-out", "synth_out", cfg.synth_out, "Synthetic corpus output (default <out>/synth_corpus.jsonl)");
  b.bind("--min-cooccur", "min_cooccur", cfg.min_cooccur, "Keep pairs co-occurring in at least this many posts");
  b.bind("--min-support", "min_support", cfg.min_support, "Keep pairs with n_i + n_j - n_ij strictly above this");
  b.bind("--lenient", "lenient", cfg.lenient, "Lenient engagement percentile");
  b.bind("--aggressive", "aggressive", cfg.aggressive, "Aggressive engagement percentile");
  b.bind("--min-unique-terms", "min_unique_terms", cfg.min_unique_terms, "Distinct dictionary terms required by engagement filters");
  b.bind("--seed-term", "seed_terms", cfg.seed_terms, "Seed term for Drug Mention selection (repeatable)");
  b.bind("--window", "window", cfg.window, "Posts per co-occurrence window");
  b.bind_flag("--strict", "strict", cfg.strict, "Fail on the first malformed corpus line");
  b.bind("--min-time", "min_time", cfg.min_time, "Drop posts before this ISO-8601 time");
  b.bind("--max-time", "max_time", cfg.max_time, "Drop posts after this ISO-8601 time");
  b.bind("--format", "formats", cfg.formats, "Extra export formats: graphml, json (repeatable)");
  b.bind("--run-name", "run_name", cfg.run_name, "Row label in summaries");
  b.bind_flag("--float-weights", "float_weights", cfg.float_weights, "Approximate floating-point backbone (relative tolerance 1e-9)");
  b.bind("--term", "term", cfg.term, "Ego network center");
  b.bind_flag("--backbone", "backbone_only", cfg.backbone_only, "Ego network over backbone edges only");
  b.bind("--workers", "workers", cfg.workers, "Worker threads for matching and closure");

  using Stage = void (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Stage>> stages = {
      {"ingest", "Read posts, apply exclusions and seed selection", stage_ingest},
      {"match", "Match dictionary terms in every post", stage_match},
      {"graph", "Build the proximity/distance knowledge graph", stage_graph},
      {"backbone", "Compute the metric backbone", stage_backbone},
      {"cohort", "Select cohorts and engagement filters", stage_cohort},
      {"report", "Summary tables, overlaps and validation", stage_report},
      {"ego", "Export an ego network as GraphML", stage_ego},
      {"synth", "Generate a synthetic corpus", stage_synth},
      {"pipeline", "Run ingest, match, graph, backbone, cohort and report", stage_pipeline}};
  std::vector<std::pair<CLI::App*, Stage>> subs;
  for (const auto& [name, help, fn] : stages) subs.emplace_back(app.add_subcommand(name, help), fn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (!config_path.empty()) b.apply_config_file(config_path);
    if (cfg.window == 0) throw Error(Errc::InvalidConfig, "window must be at least 1");
    for (const auto* path : {&cfg.dictionary, &cfg.corpus, &cfg.exclusions, &cfg.annotations, &cfg.profile})
      if (!path->empty() && !fs::is_regular_file(*path))
        throw Error(Errc::InvalidConfig, "input not found: " + *path);
    for (auto& [sub, fn] : subs)
      if (sub->parsed()) fn(cfg, out);
  } catch (const Error& e) {
    ojson j;
    j["error"] = to_string(e.code());
    j["message"] = e.what();
    err << j.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    ojson j;
    j["error"] = "Internal";
    j["message"] = e.what();
    err << j.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace kgcohort::cli
