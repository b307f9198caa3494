#include "kgcohort/synth.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <random>
#include <vector>

#include "kgcohort/error.hpp"

namespace kgcohort::synth {

namespace {

using Rng = std::mt19937_64;

constexpr std::array<const char*, 48> kFiller = {
    "today",  "feeling", "really", "just",   "the",    "and",   "with",   "after",
    "again",  "better",  "worse",  "doctor", "said",   "week",  "night",  "morning",
    "started", "stopped", "still",  "some",   "more",   "less",  "think",  "maybe",
    "anyone", "else",    "have",   "been",   "taking", "since", "about",  "this",
    "that",   "for",     "now",    "long",   "day",    "tired", "good",   "bad",
    "help",   "please",  "thanks", "love",   "life",   "new",   "old",    "home"};

constexpr std::array<const char*, 15> kSyllables = {"ba", "de", "fi", "go", "ku",
                                                    "la", "me", "ni", "po", "ru",
                                                    "sa", "te", "vo", "xi", "za"};

std::uint64_t draw_count(Rng& rng, double mean, double dispersion) {
  if (mean <= 0.0) return 0;
  if (dispersion <= 0.0) return std::poisson_distribution<std::uint64_t>(mean)(rng);
  // Gamma-Poisson mixture with shape `dispersion` and the requested mean.
  double lambda = std::gamma_distribution<double>(dispersion, mean / dispersion)(rng);
  if (lambda <= 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(lambda)(rng);
}

std::uint64_t uniform(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

bool bernoulli(Rng& rng, const Rational& p) {
  if (p.sign() <= 0) return false;
  if (p >= Rational(1)) return true;
  auto den = static_cast<std::uint64_t>(p.small_den());
  return uniform(rng, den) < static_cast<std::uint64_t>(p.small_num());
}

/// k distinct picks from `pool`.
std::vector<std::uint32_t> sample(Rng& rng, const std::vector<std::uint32_t>& pool,
                                  std::uint64_t k) {
  std::vector<std::uint32_t> picked(pool);
  k = std::min<std::uint64_t>(k, picked.size());
  for (std::uint64_t i = 0; i < k; ++i)
    std::swap(picked[i], picked[i + uniform(rng, picked.size() - i)]);
  picked.resize(k);
  return picked;
}

std::string render_surface(Rng& rng, const std::string& surface) {
  switch (uniform(rng, 4)) {
    case 1: {
      std::string s = surface;
      if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = char(s[0] - 'a' + 'A');
      return s;
    }
    case 2:
      return "#" + surface;
    default:
      return surface;
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidProfile, what);
}

CountDistribution read_counts(const nlohmann::json& j, const char* key,
                              CountDistribution fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  CountDistribution d = fallback;
  if (v.is_number()) {
    d.mean = v.get<double>();
    d.dispersion = 0.0;
  } else {
    d.mean = v.at("mean").get<double>();
    d.dispersion = v.value("dispersion", 0.0);
  }
  return d;
}

void validate(const SynthProfile& p, const Dictionary& dict) {
  check(p.n_users > 0, "n_users must be positive");
  check(p.posts_per_user.mean >= 1.0, "posts_per_user.mean must be at least 1");
  check(p.terms_per_post.mean > 0.0, "terms_per_post.mean must be positive");
  check(p.focus.sign() >= 0 && p.focus <= Rational(1), "focus must lie in [0, 1]");
  check(!p.focus.is_big(), "focus denominator too large");
  check(p.n_topic_clusters > 0, "n_topic_clusters must be positive");
  check(p.cluster_terms >= p.n_topic_clusters, "cluster_terms must be >= n_topic_clusters");
  check(!dict.empty(), "dictionary is empty");
  check(p.cluster_terms <= dict.size(), "cluster_terms exceeds dictionary size");
  check(parse_timestamp(p.start_date).has_value(), "start_date is not a date");
}

}  // namespace

SynthProfile SynthProfile::from_json(const nlohmann::json& j) {
  SynthProfile p;
  try {
    if (!j.is_object()) throw Error(Errc::InvalidProfile, "profile must be a JSON object");
    p.n_users = j.value("n_users", p.n_users);
    p.posts_per_user = read_counts(j, "posts_per_user", p.posts_per_user);
    p.terms_per_post = read_counts(j, "terms_per_post", p.terms_per_post);
    if (j.contains("focus")) {
      const auto& f = j.at("focus");
      if (f.is_string()) {
        p.focus = Rational::parse(f.get<std::string>());
      } else {
        // Decimal focus values are read to 1e-6 resolution.
        double v = f.get<double>();
        check(v >= 0.0 && v <= 1.0, "focus must lie in [0, 1]");
        p.focus = Rational(static_cast<std::int64_t>(std::llround(v * 1e6)), 1000000);
      }
    }
    p.n_topic_clusters = j.value("n_topic_clusters", p.n_topic_clusters);
    p.cluster_terms = j.value("cluster_terms", p.cluster_terms);
    p.rng_seed = j.value("rng_seed", p.rng_seed);
    p.platform = j.value("platform", p.platform);
    p.start_date = j.value("start_date", p.start_date);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidProfile, std::string("profile: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidProfile) throw;
    throw Error(Errc::InvalidProfile, e.what());
  }
  return p;
}

nlohmann::ordered_json SynthProfile::to_json() const {
  nlohmann::ordered_json j;
  j["n_users"] = n_users;
  j["posts_per_user"] = {{"mean", posts_per_user.mean},
                         {"dispersion", posts_per_user.dispersion}};
  j["focus"] = focus.str();
  j["n_topic_clusters"] = n_topic_clusters;
  j["cluster_terms"] = cluster_terms;
  j["terms_per_post"] = {{"mean", terms_per_post.mean},
                         {"dispersion", terms_per_post.dispersion}};
  j["rng_seed"] = rng_seed;
  j["platform"] = platform;
  j["start_date"] = start_date;
  return j;
}

Corpus generate(const SynthProfile& profile, const Dictionary& dict) {
  validate(profile, dict);
  Rng rng(profile.rng_seed);

  std::vector<std::uint32_t> all(dict.size());
  for (std::uint32_t t = 0; t < all.size(); ++t) all[t] = t;

  // Clusters partition a seeded selection of `cluster_terms` terms.
  auto chosen = sample(rng, all, profile.cluster_terms);
  std::vector<std::vector<std::uint32_t>> clusters(profile.n_topic_clusters);
  for (std::size_t k = 0; k < chosen.size(); ++k)
    clusters[k % clusters.size()].push_back(chosen[k]);

  const Timestamp start = *parse_timestamp(profile.start_date);
  const int width = std::max<int>(4, int(std::to_string(profile.n_users).size()));

  std::vector<Post> posts;
  for (std::uint64_t u = 0; u < profile.n_users; ++u) {
    std::string digits = std::to_string(u);
    std::string user = "u" + std::string(std::size_t(width) - std::min<std::size_t>(digits.size(), std::size_t(width)), '0') + digits;
    const auto& home = clusters[uniform(rng, clusters.size())];
    auto n_posts = 1 + draw_count(rng, profile.posts_per_user.mean - 1.0,
                                  profile.posts_per_user.dispersion);
    auto when = start + std::chrono::days(uniform(rng, 730)) +
                std::chrono::seconds(uniform(rng, 86400));
    for (std::uint64_t k = 0; k < n_posts; ++k) {
      auto n_terms = draw_count(rng, profile.terms_per_post.mean,
                                profile.terms_per_post.dispersion);
      const auto& pool = bernoulli(rng, profile.focus) ? home : all;
      auto terms = sample(rng, pool, n_terms);

      std::vector<std::string> words;
      auto filler = 3 + uniform(rng, 6);
      for (std::uint64_t w = 0; w < filler; ++w) words.push_back(kFiller[uniform(rng, kFiller.size())]);
      for (auto t : terms) {
        const auto& surfaces = dict.entries()[t].surfaces;
        auto rendered = render_surface(rng, surfaces[uniform(rng, surfaces.size())]);
        words.insert(words.begin() + std::ptrdiff_t(uniform(rng, words.size() + 1)), std::move(rendered));
      }
      std::string text;
      for (const auto& w : words) {
        if (!text.empty()) text += ' ';
        text += w;
      }

      Post post;
      post.post_id = user + "_p" + std::to_string(k);
      post.user_id = user;
      post.timestamp = std::chrono::floor<std::chrono::milliseconds>(when);
      post.platform = profile.platform;
      post.text = std::move(text);
      posts.push_back(std::move(post));
      when += std::chrono::hours(1 + uniform(rng, 24 * 14));
    }
  }
  return Corpus::from_posts(std::move(posts));
}

Dictionary demo_dictionary() {
  struct Group {
    const char* category;
    const char* suffix;
    int count;
  };
  constexpr Group groups[] = {{"drug", "zole", 40},
                              {"medical_term", "itis", 40},
                              {"allergen", "gen", 10},
                              {"natural_product", "wort", 10}};
  std::vector<DictionaryRow> rows;
  int k = 0;
  for (const auto& g : groups) {
    for (int n = 0; n < g.count; ++n, ++k) {
      std::string a = kSyllables[k % 15], b = kSyllables[(k / 15 + k) % 15];
      std::string name = a + b + g.suffix;
      rows.push_back({name, name, g.category});
      if (std::string_view(g.category) == "drug")
        rows.push_back({name, b + a + "rax", g.category});
    }
  }
  return Dictionary::from_rows(rows);
}

}  // namespace kgcohort::synth
