#include "kgcohort/export.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "kgcohort/csv.hpp"
#include "kgcohort/error.hpp"

namespace kgcohort {

ExportFormat parse_format(std::string_view text) {
  std::string name(text);
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (name == "csv") return ExportFormat::Csv;
  if (name == "graphml") return ExportFormat::GraphMl;
  if (name == "json") return ExportFormat::Json;
  throw Error(Errc::UnsupportedFormat, "unsupported format '" + std::string(text) + "'");
}

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::string> kEdgeColumns = {"term_i", "term_j", "n_i", "n_j", "n_ij",
                                               "p_num",  "p_den",  "d_num", "d_den"};
const std::vector<std::string> kBackboneColumns = {"is_backbone", "d_closure_num",
                                                   "d_closure_den"};
const std::vector<std::string> kCohortColumns = {
    "user_id",     "days_active", "post_count",           "word_count", "unique_matches",
    "drug_mention", "full_cohort", "backbone_contributor", "lenient",    "aggressive"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string double_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw Error(Errc::FatalParse, "expected boolean, got '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::FatalParse, "expected non-negative integer, got '" + s + "'");
  return v;
}

std::int64_t parse_i64(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::FatalParse, "expected integer, got '" + s + "'");
  return v;
}

Rational parse_rational(const std::string& num, const std::string& den) {
  try {
    return Rational::from_strings(num, den);
  } catch (const Error& e) {
    throw Error(Errc::FatalParse, e.what());
  }
}

struct EdgeRow {
  std::string a, b;
  std::optional<CoCounts> counts;
  Rational p, d;
  std::optional<bool> is_backbone;
  std::optional<Rational> closure;
};

std::vector<std::string> edge_fields(const DistanceGraph& g, const BackboneResult* bb,
                                     std::size_t k) {
  const auto& e = g.edges[k];
  Rational p = (e.d + Rational(1)).reciprocal();
  std::vector<std::string> f = {g.nodes[e.i], g.nodes[e.j]};
  if (e.counts) {
    f.push_back(std::to_string(e.counts->n_i));
    f.push_back(std::to_string(e.counts->n_j));
    f.push_back(std::to_string(e.counts->n_ij));
  } else {
    f.insert(f.end(), 3, "");
  }
  f.push_back(p.num_str());
  f.push_back(p.den_str());
  f.push_back(e.d.num_str());
  f.push_back(e.d.den_str());
  if (bb) {
    f.push_back(bool_str(bb->is_metric[k]));
    auto dc = bb->closure.node_count() ? bb->closure.distance(e.i, e.j) : std::nullopt;
    f.push_back(dc ? dc->num_str() : "");
    f.push_back(dc ? dc->den_str() : "");
  }
  return f;
}

void write_graphml(std::ostream& out, const DistanceGraph& g, const BackboneResult* bb) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"p\" for=\"edge\" attr.name=\"p\" attr.type=\"double\"/>\n"
         "  <key id=\"d\" for=\"edge\" attr.name=\"d\" attr.type=\"double\"/>\n"
         "  <key id=\"p_exact\" for=\"edge\" attr.name=\"p_exact\" attr.type=\"string\"/>\n"
         "  <key id=\"d_exact\" for=\"edge\" attr.name=\"d_exact\" attr.type=\"string\"/>\n";
  if (bb)
    out << "  <key id=\"is_backbone\" for=\"edge\" attr.name=\"is_backbone\" "
           "attr.type=\"boolean\"/>\n";
  out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (const auto& n : g.nodes) out << "    <node id=\"" << xml_escape(n) << "\"/>\n";
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    Rational p = (e.d + Rational(1)).reciprocal();
    out << "    <edge id=\"e" << k << "\" source=\"" << xml_escape(g.nodes[e.i])
        << "\" target=\"" << xml_escape(g.nodes[e.j]) << "\">\n"
        << "      <data key=\"p\">" << double_str(p.to_double()) << "</data>\n"
        << "      <data key=\"d\">" << double_str(e.d.to_double()) << "</data>\n"
        << "      <data key=\"p_exact\">" << p.str() << "</data>\n"
        << "      <data key=\"d_exact\">" << e.d.str() << "</data>\n";
    if (bb)
      out << "      <data key=\"is_backbone\">" << bool_str(bb->is_metric[k]) << "</data>\n";
    out << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

ojson edge_json(const std::vector<std::string>& columns, const std::vector<std::string>& f) {
  ojson j;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& name = columns[c];
    const auto& v = f[c];
    if (name == "term_i" || name == "term_j") {
      j[name] = v;
    } else if (name == "is_backbone") {
      j[name] = v == "true";
    } else if (name == "n_i" || name == "n_j" || name == "n_ij") {
      j[name] = v.empty() ? ojson(nullptr) : ojson(parse_u64(v));
    } else {
      // Rational parts stay strings: they may exceed 64 bits.
      j[name] = v.empty() ? ojson(nullptr) : ojson(v);
    }
  }
  return j;
}

EdgeListFile assemble(std::vector<EdgeRow> rows, bool with_backbone) {
  for (auto& r : rows) {
    if (r.a == r.b) throw Error(Errc::FatalParse, "self-loop on '" + r.a + "'");
    if (r.b < r.a) {
      std::swap(r.a, r.b);
      if (r.counts) std::swap(r.counts->n_i, r.counts->n_j);
    }
    if ((r.d + Rational(1)).reciprocal() != r.p)
      throw Error(Errc::FatalParse, "p and d disagree on edge ('" + r.a + "', '" + r.b + "')");
  }
  std::sort(rows.begin(), rows.end(),
            [](const EdgeRow& x, const EdgeRow& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

  std::vector<std::string> labels;
  for (const auto& r : rows) {
    labels.push_back(r.a);
    labels.push_back(r.b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto index = [&](const std::string& s) {
    return static_cast<std::uint32_t>(std::lower_bound(labels.begin(), labels.end(), s) -
                                      labels.begin());
  };

  EdgeListFile file;
  std::vector<DistanceEdge> edges;
  std::vector<bool> flags;
  std::vector<Rational> closure;
  for (auto& r : rows) {
    edges.push_back({index(r.a), index(r.b), r.d, r.counts});
    if (with_backbone) {
      flags.push_back(r.is_backbone.value_or(false));
      closure.push_back(r.closure.value_or(r.d));
    }
  }
  try {
    file.graph = DistanceGraph::make(std::move(labels), std::move(edges));
  } catch (const Error& e) {
    throw Error(Errc::FatalParse, e.what());
  }
  if (with_backbone) {
    file.is_backbone = std::move(flags);
    file.closure = std::move(closure);
  }
  return file;
}

std::optional<CoCounts> counts_from(const std::string& a, const std::string& b,
                                    const std::string& c) {
  if (a.empty() && b.empty() && c.empty()) return std::nullopt;
  return CoCounts{parse_u64(a), parse_u64(b), parse_u64(c)};
}

EdgeListFile import_csv(std::istream& in) {
  std::vector<std::string> header;
  if (!csv::read_row(in, header)) return {};
  bool with_backbone = false;
  if (header == kEdgeColumns) {
    with_backbone = false;
  } else {
    auto full = kEdgeColumns;
    full.insert(full.end(), kBackboneColumns.begin(), kBackboneColumns.end());
    if (header != full) throw Error(Errc::FatalParse, "unexpected edge-list header");
    with_backbone = true;
  }
  std::vector<EdgeRow> rows;
  std::vector<std::string> f;
  while (csv::read_row(in, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != header.size()) throw Error(Errc::FatalParse, "edge row has wrong column count");
    EdgeRow r;
    r.a = f[0];
    r.b = f[1];
    r.counts = counts_from(f[2], f[3], f[4]);
    r.p = parse_rational(f[5], f[6]);
    r.d = parse_rational(f[7], f[8]);
    if (with_backbone) {
      r.is_backbone = parse_bool(f[9]);
      if (!f[10].empty()) r.closure = parse_rational(f[10], f[11]);
    }
    rows.push_back(std::move(r));
  }
  return assemble(std::move(rows), with_backbone);
}

std::string json_str(const ojson& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

EdgeListFile import_json(std::istream& in) {
  ojson doc;
  try {
    doc = ojson::parse(in);
    std::vector<EdgeRow> rows;
    bool with_backbone = false;
    for (const auto& e : doc.at("edges")) {
      EdgeRow r;
      r.a = json_str(e, "term_i");
      r.b = json_str(e, "term_j");
      r.counts = counts_from(json_str(e, "n_i"), json_str(e, "n_j"), json_str(e, "n_ij"));
      r.p = parse_rational(json_str(e, "p_num"), json_str(e, "p_den"));
      r.d = parse_rational(json_str(e, "d_num"), json_str(e, "d_den"));
      if (e.contains("is_backbone")) {
        with_backbone = true;
        r.is_backbone = e.at("is_backbone").get<bool>();
        auto cn = json_str(e, "d_closure_num");
        if (!cn.empty()) r.closure = parse_rational(cn, json_str(e, "d_closure_den"));
      }
      rows.push_back(std::move(r));
    }
    auto file = assemble(std::move(rows), with_backbone);
    // Nodes without edges survive only in the JSON form.
    if (doc.contains("nodes")) {
      auto nodes = doc.at("nodes").get<std::vector<std::string>>();
      if (nodes.size() != file.graph.nodes.size()) {
        std::vector<DistanceEdge> edges;
        for (const auto& e : file.graph.edges) {
          auto a = std::find(nodes.begin(), nodes.end(), file.graph.nodes[e.i]);
          auto b = std::find(nodes.begin(), nodes.end(), file.graph.nodes[e.j]);
          if (a == nodes.end() || b == nodes.end())
            throw Error(Errc::FatalParse, "edge endpoint missing from node list");
          edges.push_back({std::uint32_t(a - nodes.begin()), std::uint32_t(b - nodes.begin()),
                           e.d, e.counts});
        }
        file.graph = DistanceGraph::make(std::move(nodes), std::move(edges));
      }
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::FatalParse, std::string("graph JSON: ") + e.what());
  }
}

std::vector<std::string> cohort_fields(const CohortMember& m) {
  return {m.stats.user_id,
          std::to_string(m.stats.days_active),
          std::to_string(m.stats.post_count),
          std::to_string(m.stats.word_count),
          std::to_string(m.stats.unique_matches),
          bool_str(m.drug_mention),
          bool_str(m.full_cohort),
          bool_str(m.backbone_contributor),
          bool_str(m.lenient),
          bool_str(m.aggressive)};
}

CohortMember member_from(const std::vector<std::string>& f) {
  CohortMember m;
  m.stats.user_id = f[0];
  m.stats.days_active = parse_i64(f[1]);
  m.stats.post_count = parse_u64(f[2]);
  m.stats.word_count = parse_u64(f[3]);
  m.stats.unique_matches = parse_u64(f[4]);
  m.drug_mention = parse_bool(f[5]);
  m.full_cohort = parse_bool(f[6]);
  m.backbone_contributor = parse_bool(f[7]);
  m.lenient = parse_bool(f[8]);
  m.aggressive = parse_bool(f[9]);
  return m;
}

CohortReport finish_cohort(std::vector<CohortMember> members) {
  std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
    return a.stats.user_id < b.stats.user_id;
  });
  CohortReport r;
  for (const auto& m : members) {
    r.total_posts += m.stats.post_count;
    if (m.full_cohort) r.full_cohort_posts += m.stats.post_count;
    if (m.backbone_contributor) r.contributor_posts += m.stats.post_count;
    if (m.lenient) r.lenient_posts += m.stats.post_count;
    if (m.aggressive) r.aggressive_posts += m.stats.post_count;
  }
  r.members = std::move(members);
  return r;
}

}  // namespace

void export_graph(std::ostream& out, const DistanceGraph& g, const BackboneResult* bb,
                  ExportFormat format) {
  if (bb && bb->is_metric.size() != g.edges.size())
    throw Error(Errc::DomainError, "backbone result does not belong to this graph");
  auto columns = kEdgeColumns;
  if (bb) columns.insert(columns.end(), kBackboneColumns.begin(), kBackboneColumns.end());
  switch (format) {
    case ExportFormat::Csv:
      csv::write_row(out, columns);
      for (std::size_t k = 0; k < g.edges.size(); ++k) csv::write_row(out, edge_fields(g, bb, k));
      return;
    case ExportFormat::GraphMl:
      write_graphml(out, g, bb);
      return;
    case ExportFormat::Json: {
      ojson doc;
      doc["nodes"] = g.nodes;
      auto& edges = doc["edges"] = ojson::array();
      for (std::size_t k = 0; k < g.edges.size(); ++k)
        edges.push_back(edge_json(columns, edge_fields(g, bb, k)));
      out << doc.dump(2) << '\n';
      return;
    }
  }
}

EdgeListFile import_graph(std::istream& in, ExportFormat format) {
  switch (format) {
    case ExportFormat::Csv: return import_csv(in);
    case ExportFormat::Json: return import_json(in);
    case ExportFormat::GraphMl: break;
  }
  throw Error(Errc::UnsupportedFormat, "GraphML is export-only");
}

BackboneResult backbone_from_flags(const std::vector<bool>& is_metric) {
  BackboneResult bb;
  bb.is_metric = is_metric;
  for (std::size_t k = 0; k < is_metric.size(); ++k)
    (is_metric[k] ? bb.backbone_edges : bb.semi_metric_edges).push_back(k);
  return bb;
}

void export_cohort(std::ostream& out, const CohortReport& report, ExportFormat format) {
  switch (format) {
    case ExportFormat::Csv:
      csv::write_row(out, kCohortColumns);
      for (const auto& m : report.members) csv::write_row(out, cohort_fields(m));
      return;
    case ExportFormat::Json: {
      ojson doc = ojson::array();
      for (const auto& m : report.members) {
        ojson j;
        j["user_id"] = m.stats.user_id;
        j["days_active"] = m.stats.days_active;
        j["post_count"] = m.stats.post_count;
        j["word_count"] = m.stats.word_count;
        j["unique_matches"] = m.stats.unique_matches;
        j["drug_mention"] = m.drug_mention;
        j["full_cohort"] = m.full_cohort;
        j["backbone_contributor"] = m.backbone_contributor;
        j["lenient"] = m.lenient;
        j["aggressive"] = m.aggressive;
        doc.push_back(std::move(j));
      }
      out << doc.dump(2) << '\n';
      return;
    }
    case ExportFormat::GraphMl:
      break;
  }
  throw Error(Errc::UnsupportedFormat, "cohorts export as csv or json");
}

CohortReport import_cohort(std::istream& in, ExportFormat format) {
  std::vector<CohortMember> members;
  if (format == ExportFormat::Csv) {
    std::vector<std::string> f;
    if (!csv::read_row(in, f) || f != kCohortColumns)
      throw Error(Errc::FatalParse, "unexpected cohort header");
    while (csv::read_row(in, f)) {
      if (f.size() == 1 && f[0].empty()) continue;
      if (f.size() != kCohortColumns.size())
        throw Error(Errc::FatalParse, "cohort row has wrong column count");
      members.push_back(member_from(f));
    }
    return finish_cohort(std::move(members));
  }
  if (format == ExportFormat::Json) {
    try {
      for (const auto& j : ojson::parse(in)) {
        std::vector<std::string> f;
        for (const auto& c : kCohortColumns) f.push_back(json_str(j, c.c_str()));
        members.push_back(member_from(f));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::FatalParse, std::string("cohort JSON: ") + e.what());
    }
    return finish_cohort(std::move(members));
  }
  throw Error(Errc::UnsupportedFormat, "cohorts import from csv or json");
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace kgcohort
