#include "kgcohort/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "kgcohort/error.hpp"
#include "kgcohort/matcher.hpp"

namespace kgcohort {

using namespace std::chrono;

namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + n, out);
  return ec == std::errc() && ptr == s.data() + pos + n;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  int y = 0, mo = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, mo) ||
      !read_digits(s, 8, 2, d))
    return std::nullopt;
  year_month_day ymd{year{y}, month{unsigned(mo)}, day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp ts = sys_days{ymd};
  if (s.size() == 10) return ts;

  std::size_t pos = 10;
  if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
  ++pos;
  int hh = 0, mm = 0, ss = 0;
  if (!read_digits(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
      !read_digits(s, pos + 3, 2, mm))
    return std::nullopt;
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!read_digits(s, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
  }
  int millis = 0;
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
    ++pos;
    int digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (int k = digits; k < 3; ++k) millis *= 10;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  ts += hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};

  if (pos == s.size()) return ts;
  if ((s[pos] == 'Z' || s[pos] == 'z') && pos + 1 == s.size()) return ts;
  if (s[pos] == '+' || s[pos] == '-') {
    int oh = 0, om = 0;
    int sign = s[pos] == '+' ? 1 : -1;
    if (!read_digits(s, pos + 1, 2, oh)) return std::nullopt;
    std::size_t rest = pos + 3;
    if (rest < s.size() && s[rest] == ':') ++rest;
    if (rest + 2 != s.size() || !read_digits(s, rest, 2, om)) return std::nullopt;
    return ts - sign * (hours{oh} + minutes{om});
  }
  return std::nullopt;
}

std::string format_timestamp(Timestamp ts) {
  auto day_point = floor<days>(ts);
  year_month_day ymd{day_point};
  hh_mm_ss<milliseconds> tod{ts - day_point};
  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d",
                        int(ymd.year()), unsigned(ymd.month()),
                        unsigned(ymd.day()), int(tod.hours().count()),
                        int(tod.minutes().count()), int(tod.seconds().count()));
  std::string out(buf, std::size_t(n));
  if (auto ms = tod.subseconds().count(); ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03d", int(ms));
    out += buf;
  }
  out += 'Z';
  return out;
}

Corpus Corpus::from_posts(std::vector<Post> posts,
                          std::set<std::string> exclusions) {
  std::sort(posts.begin(), posts.end(), [](const Post& a, const Post& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.post_id < b.post_id;
  });
  Corpus c;
  {
    std::vector<std::string_view> ids;
    ids.reserve(posts.size());
    for (const auto& p : posts) ids.push_back(p.post_id);
    std::sort(ids.begin(), ids.end());
    auto dup = std::adjacent_find(ids.begin(), ids.end());
    if (dup != ids.end())
      throw Error(Errc::FatalParse, "duplicate post_id '" + std::string(*dup) + "'");
  }
  c.posts_ = std::move(posts);
  for (std::size_t i = 0; i < c.posts_.size(); ++i)
    c.timelines_[c.posts_[i].user_id].push_back(i);
  c.exclusions_ = std::move(exclusions);
  return c;
}

std::vector<std::string> Corpus::users() const {
  std::vector<std::string> out;
  out.reserve(timelines_.size());
  for (const auto& [user, _] : timelines_) out.push_back(user);
  return out;
}

void Corpus::write_jsonl(std::ostream& out) const {
  for (const auto& p : posts_) {
    nlohmann::ordered_json j;
    j["post_id"] = p.post_id;
    j["user_id"] = p.user_id;
    j["timestamp"] = format_timestamp(p.timestamp);
    j["platform"] = p.platform;
    j["text"] = p.text;
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
        << '\n';
  }
}

namespace {

std::string id_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing ") + key);
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return it->dump();
  throw std::invalid_argument(std::string(key) + " must be a string");
}

std::string string_field(const nlohmann::json& j, const char* key,
                         bool null_ok) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing ") + key);
  if (it->is_null() && null_ok) return {};
  if (!it->is_string())
    throw std::invalid_argument(std::string(key) + " must be a string");
  return it->get<std::string>();
}

Post parse_post(const std::string& line) {
  auto j = nlohmann::json::parse(line);
  if (!j.is_object()) throw std::invalid_argument("not a JSON object");
  Post p;
  p.post_id = id_field(j, "post_id");
  p.user_id = id_field(j, "user_id");
  auto ts = parse_timestamp(string_field(j, "timestamp", false));
  if (!ts) throw std::invalid_argument("unparseable timestamp");
  p.timestamp = *ts;
  p.platform = string_field(j, "platform", true);
  p.text = string_field(j, "text", true);
  if (p.post_id.empty()) throw std::invalid_argument("empty post_id");
  if (p.user_id.empty()) throw std::invalid_argument("empty user_id");
  return p;
}

}  // namespace

IngestResult ingest(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  auto& report = result.report;
  std::vector<Post> posts;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;

  auto reject = [&](const std::string& why) {
    std::string msg = "line " + std::to_string(line_no) + ": " + why;
    if (options.strict) throw Error(Errc::FatalParse, msg);
    ++report.skipped;
    if (report.problems.size() < 100) report.problems.push_back(std::move(msg));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++report.lines_read;
    Post post;
    try {
      post = parse_post(line);
    } catch (const std::exception& e) {
      reject(e.what());
      continue;
    }
    if (seen.contains(post.post_id)) {
      reject("duplicate post_id '" + post.post_id + "'");
      continue;
    }
    seen.insert(post.post_id);
    if ((options.min_time && post.timestamp < *options.min_time) ||
        (options.max_time && post.timestamp > *options.max_time)) {
      ++report.outside_window;
      continue;
    }
    posts.push_back(std::move(post));
  }
  if (posts.empty()) throw Error(Errc::EmptyCorpus, "corpus contains no posts");
  result.corpus = Corpus::from_posts(std::move(posts));
  return result;
}

Corpus apply_exclusions(const Corpus& corpus,
                        const std::set<std::string>& excluded) {
  std::vector<Post> kept;
  kept.reserve(corpus.posts().size());
  for (const auto& p : corpus.posts())
    if (!excluded.contains(p.user_id)) kept.push_back(p);
  std::set<std::string> all = corpus.exclusions();
  all.insert(excluded.begin(), excluded.end());
  return Corpus::from_posts(std::move(kept), std::move(all));
}

Corpus restrict_to_users(const Corpus& corpus,
                         const std::set<std::string>& users) {
  std::vector<Post> kept;
  for (const auto& p : corpus.posts())
    if (users.contains(p.user_id)) kept.push_back(p);
  return Corpus::from_posts(std::move(kept), corpus.exclusions());
}

std::set<std::string> read_exclusions(std::istream& in) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    out.insert(line.substr(first, last - first + 1));
  }
  return out;
}

SeedSpec SeedSpec::resolve(const std::vector<std::string>& surfaces,
                           const Dictionary& dict) {
  SeedSpec spec;
  for (const auto& s : surfaces) {
    auto id = dict.resolve(s);
    if (!id)
      throw Error(Errc::UnresolvedSeedTerm,
                  "seed term '" + s + "' is not in the dictionary");
    spec.seed_terms.insert(*id);
  }
  if (spec.seed_terms.empty())
    throw Error(Errc::UnresolvedSeedTerm, "seed term list is empty");
  return spec;
}

std::set<std::string> seed_select(const Corpus& corpus, const Dictionary& dict,
                                  const SeedSpec& seed) {
  TermMatcher matcher(dict);
  std::set<std::string> selected;
  for (const auto& [user, timeline] : corpus.timelines()) {
    for (auto idx : timeline) {
      auto terms = matcher.match_text(corpus.posts()[idx].text);
      bool hit = std::any_of(terms.begin(), terms.end(), [&](TermId t) {
        return seed.seed_terms.contains(t);
      });
      if (hit) {
        selected.insert(user);
        break;
      }
    }
  }
  return selected;
}

}  // namespace kgcohort
