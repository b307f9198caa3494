#include "kgcohort/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>

#include "kgcohort/csv.hpp"
#include "kgcohort/error.hpp"

namespace kgcohort {

double normal_survival(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

ValidationResult two_proportion_test(std::uint64_t x1, std::uint64_t n1,
                                     std::uint64_t x2, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw Error(Errc::DomainError, "group size must be positive");
  if (x1 > n1 || x2 > n2) throw Error(Errc::DomainError, "count exceeds group size");
  ValidationResult r{x1, n1, x2, n2};
  r.rate1 = double(x1) / double(n1);
  r.rate2 = double(x2) / double(n2);
  double pooled = double(x1 + x2) / double(n1 + n2);
  double variance = pooled * (1.0 - pooled) * (1.0 / double(n1) + 1.0 / double(n2));
  if (variance <= 0.0) {
    r.z = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.z = (r.rate2 - r.rate1) / std::sqrt(variance);
  r.p_value = std::min(1.0, 2.0 * normal_survival(std::fabs(r.z)));
  return r;
}

std::vector<AnnotationRecord> read_annotations(std::istream& in) {
  std::vector<std::string> row;
  if (!csv::read_row(in, row) || row.size() < 2 || row[0] != "user_id" || row[1] != "label")
    throw Error(Errc::FatalParse, "annotation file must start with 'user_id,label'");
  std::vector<AnnotationRecord> out;
  std::set<std::string> seen;
  std::size_t line = 1;
  while (csv::read_row(in, row)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 2)
      throw Error(Errc::FatalParse, "annotation line " + std::to_string(line) + ": expected 2 columns");
    AnnotationRecord rec{row[0]};
    if (row[1] == "true_positive") rec.label = AnnotationLabel::TruePositive;
    else if (row[1] == "false_positive") rec.label = AnnotationLabel::FalsePositive;
    else
      throw Error(Errc::FatalParse, "annotation line " + std::to_string(line) +
                                        ": unknown label '" + row[1] + "'");
    if (!seen.insert(rec.user_id).second)
      throw Error(Errc::FatalParse, "user '" + rec.user_id + "' annotated twice");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<FilterValidation> validate_filters(const CohortReport& report,
                                               const std::vector<AnnotationRecord>& labels) {
  std::vector<FilterValidation> out;
  auto raw = report.users(CohortFilter::Raw);
  for (auto filter : {CohortFilter::Backbone, CohortFilter::Lenient, CohortFilter::Aggressive}) {
    auto retained = report.users(filter);
    std::uint64_t x1 = 0, n1 = 0, x2 = 0, n2 = 0;
    for (const auto& a : labels) {
      if (!raw.contains(a.user_id)) continue;
      bool fp = a.label == AnnotationLabel::FalsePositive;
      if (retained.contains(a.user_id)) {
        ++n1;
        x1 += fp;
      } else {
        ++n2;
        x2 += fp;
      }
    }
    if (n1 == 0 || n2 == 0) continue;
    FilterValidation v;
    v.filter = filter;
    v.retained_users = retained.size();
    v.not_retained_users = raw.size() - retained.size();
    v.test = two_proportion_test(x1, n1, x2, n2);
    out.push_back(v);
  }
  return out;
}

SummaryRow summarize(const std::string& run, const CohortReport& report,
                     std::size_t nodes, std::size_t edges, std::size_t backbone_edges) {
  SummaryRow row;
  row.run = run;
  row.nodes = nodes;
  row.edges = edges;
  row.backbone_edges = backbone_edges;
  if (edges > 0)
    row.tau = Rational(static_cast<std::int64_t>(backbone_edges), static_cast<std::int64_t>(edges));
  row.raw_cohort = report.count(CohortFilter::Raw);
  row.drug_mention = report.count(CohortFilter::DrugMention);
  row.full_cohort = report.count(CohortFilter::FullCohort);
  row.contributors = report.count(CohortFilter::Backbone);
  row.lenient = report.count(CohortFilter::Lenient);
  row.aggressive = report.count(CohortFilter::Aggressive);
  row.r_raw = report.r_raw();
  row.r_full = report.r_full();
  row.total_posts = report.total_posts;
  row.full_cohort_posts = report.full_cohort_posts;
  row.contributor_posts = report.contributor_posts;
  return row;
}

namespace {

std::optional<Rational> share(std::uint64_t part, std::uint64_t whole) {
  if (whole == 0) return std::nullopt;
  return Rational(static_cast<std::int64_t>(part), static_cast<std::int64_t>(whole));
}

std::string fmt_double(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

nlohmann::ordered_json rational_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return {{"num", r->num_str()}, {"den", r->den_str()}, {"value", r->to_double()}};
}

std::string with_percent(std::size_t count, const std::optional<Rational>& r) {
  return std::to_string(count) + " (" + percent(r) + ")";
}

}  // namespace

std::string percent(const std::optional<Rational>& value) {
  if (!value) return "n/a";
  return fmt_double("%.1f%%", 100.0 * value->to_double());
}

std::string backbone_summary_line(std::size_t nodes, std::size_t edges,
                                  std::size_t backbone_edges,
                                  const std::optional<Rational>& tau) {
  std::string line = "nodes=" + std::to_string(nodes) + " edges=" + std::to_string(edges) +
                     " backbone_edges=" + std::to_string(backbone_edges) + " tau=";
  line += tau ? tau->str() + " (" + percent(tau) + ")" : "n/a";
  return line;
}

void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows,
                        const std::vector<OverlapCell>& overlaps,
                        const std::vector<FilterValidation>& validation) {
  out << "Knowledge graph and cohorts\n";
  out << "run\tnodes\tedges\tbackbone_edges\ttau\traw_cohort\tfull_cohort (%)\t"
         "backbone_contributors (r_raw)\tr_full\tposts_full (%)\tposts_contributors (%)\t"
         "lenient\taggressive\n";
  for (const auto& r : rows) {
    out << r.run << '\t' << r.nodes << '\t' << r.edges << '\t' << r.backbone_edges << '\t'
        << (r.tau ? percent(r.tau) : "n/a") << '\t' << r.raw_cohort << '\t'
        << with_percent(r.full_cohort, share(r.full_cohort, r.raw_cohort)) << '\t'
        << with_percent(r.contributors, r.r_raw) << '\t' << percent(r.r_full) << '\t'
        << with_percent(r.full_cohort_posts, share(r.full_cohort_posts, r.total_posts)) << '\t'
        << with_percent(r.contributor_posts, share(r.contributor_posts, r.total_posts)) << '\t'
        << r.lenient << '\t' << r.aggressive << '\n';
  }
  if (!overlaps.empty()) {
    out << "\nFilter overlap\n";
    out << "a\tb\t|a|\t|b|\t|a&b|\t|a&b|/|a|\t|a&b|/|b|\n";
    for (const auto& c : overlaps) {
      auto frac = [](const std::optional<double>& f) {
        return f ? fmt_double("%.4f", *f) : std::string("n/a");
      };
      out << to_string(c.a) << '\t' << to_string(c.b) << '\t' << c.size_a << '\t' << c.size_b
          << '\t' << c.intersection << '\t' << frac(c.frac_of_a) << '\t' << frac(c.frac_of_b)
          << '\n';
    }
  }
  if (!validation.empty()) {
    out << "\nAnnotation validation (false-positive rate, retained vs not retained)\n";
    out << "filter\tretained_users\tnot_retained_users\tannotated_retained\t"
           "annotated_not_retained\tfp_rate_retained\tfp_rate_not_retained\tz\tp_value\n";
    for (const auto& v : validation) {
      out << to_string(v.filter) << '\t' << v.retained_users << '\t' << v.not_retained_users
          << '\t' << v.test.n1 << '\t' << v.test.n2 << '\t'
          << fmt_double("%.2f%%", 100.0 * v.test.rate1) << '\t'
          << fmt_double("%.2f%%", 100.0 * v.test.rate2) << '\t' << fmt_double("%.4f", v.test.z)
          << '\t' << fmt_double("%.3e", v.test.p_value) << '\n';
    }
  }
}

nlohmann::ordered_json summary_json(const std::vector<SummaryRow>& rows,
                                    const std::vector<OverlapCell>& overlaps,
                                    const std::vector<FilterValidation>& validation) {
  nlohmann::ordered_json doc;
  auto& jr = doc["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["run"] = r.run;
    j["nodes"] = r.nodes;
    j["edges"] = r.edges;
    j["backbone_edges"] = r.backbone_edges;
    j["tau"] = rational_json(r.tau);
    j["raw_cohort"] = r.raw_cohort;
    j["drug_mention"] = r.drug_mention;
    j["full_cohort"] = r.full_cohort;
    j["backbone_contributors"] = r.contributors;
    j["lenient"] = r.lenient;
    j["aggressive"] = r.aggressive;
    j["r_raw"] = rational_json(r.r_raw);
    j["r_full"] = rational_json(r.r_full);
    j["total_posts"] = r.total_posts;
    j["full_cohort_posts"] = r.full_cohort_posts;
    j["contributor_posts"] = r.contributor_posts;
    jr.push_back(std::move(j));
  }
  auto& jo = doc["overlap"] = nlohmann::ordered_json::array();
  for (const auto& c : overlaps) {
    nlohmann::ordered_json j;
    j["a"] = to_string(c.a);
    j["b"] = to_string(c.b);
    j["size_a"] = c.size_a;
    j["size_b"] = c.size_b;
    j["intersection"] = c.intersection;
    j["frac_of_a"] = c.frac_of_a ? nlohmann::ordered_json(*c.frac_of_a) : nullptr;
    j["frac_of_b"] = c.frac_of_b ? nlohmann::ordered_json(*c.frac_of_b) : nullptr;
    jo.push_back(std::move(j));
  }
  auto& jv = doc["validation"] = nlohmann::ordered_json::array();
  for (const auto& v : validation) {
    nlohmann::ordered_json j;
    j["filter"] = to_string(v.filter);
    j["retained_users"] = v.retained_users;
    j["not_retained_users"] = v.not_retained_users;
    j["x1"] = v.test.x1;
    j["n1"] = v.test.n1;
    j["x2"] = v.test.x2;
    j["n2"] = v.test.n2;
    j["fp_rate_retained"] = v.test.rate1;
    j["fp_rate_not_retained"] = v.test.rate2;
    j["z"] = v.test.z;
    j["p_value"] = v.test.p_value;
    jv.push_back(std::move(j));
  }
  return doc;
}

}  // namespace kgcohort
