#include <doctest.h>

#include <sstream>

#include "kgcohort/error.hpp"
#include "kgcohort/matcher.hpp"
#include "kgcohort/synth.hpp"

using namespace kgcohort;

TEST_SUITE("synth") {
  TEST_CASE("demo dictionary") {
    auto d = synth::demo_dictionary();
    CHECK(d.size() == 100);
    std::map<TermCategory, int> per;
    for (const auto& e : d.entries()) ++per[e.category];
    CHECK(per[TermCategory::Drug] == 40);
    CHECK(per[TermCategory::MedicalTerm] == 40);
    CHECK(per[TermCategory::Allergen] == 10);
    CHECK(per[TermCategory::NaturalProduct] == 10);
  }

  TEST_CASE("same seed gives identical corpora") {
    auto d = synth::demo_dictionary();
    synth::SynthProfile p;
    p.n_users = 50;
    std::ostringstream a, b, c;
    synth::generate(p, d).write_jsonl(a);
    synth::generate(p, d).write_jsonl(b);
    p.rng_seed = 2;
    synth::generate(p, d).write_jsonl(c);
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
  }

  TEST_CASE("output ingests cleanly") {
    synth::SynthProfile p;
    p.n_users = 80;
    std::ostringstream out;
    synth::generate(p, synth::demo_dictionary()).write_jsonl(out);
    std::istringstream in(out.str());
    auto r = ingest(in, {true, std::nullopt, std::nullopt});
    CHECK(r.report.skipped == 0);
    CHECK(r.corpus.user_count() == 80);
  }

  TEST_CASE("full focus with one cluster stays inside the cluster") {
    auto d = synth::demo_dictionary();
    synth::SynthProfile p;
    p.n_users = 100;
    p.focus = Rational(1);
    p.n_topic_clusters = 1;
    p.cluster_terms = 12;
    p.terms_per_post = {3.0, 0.0};
    auto corpus = synth::generate(p, d);
    auto t = match_corpus(corpus, d);
    std::set<TermId> seen;
    for (const auto& r : t.records()) seen.insert(r.terms.begin(), r.terms.end());
    CHECK(seen.size() == 12);
  }

  TEST_CASE("zero focus spreads over the dictionary") {
    auto d = synth::demo_dictionary();
    synth::SynthProfile p;
    p.n_users = 400;
    p.focus = Rational(0);
    auto t = match_corpus(synth::generate(p, d), d);
    std::set<TermId> seen;
    for (const auto& r : t.records()) seen.insert(r.terms.begin(), r.terms.end());
    CHECK(seen.size() > 90);
  }

  TEST_CASE("profile json") {
    auto p = synth::SynthProfile::from_json(nlohmann::json::parse(
        R"({"n_users": 10, "focus": "9/10", "posts_per_user": {"mean": 3, "dispersion": 2}, "rng_seed": 4})"));
    CHECK(p.n_users == 10);
    CHECK(p.focus == Rational(9, 10));
    CHECK(p.posts_per_user.dispersion == 2.0);
    auto q = synth::SynthProfile::from_json(nlohmann::json::parse(R"({"focus": 0.2})"));
    CHECK(q.focus == Rational(1, 5));
    auto again = synth::SynthProfile::from_json(nlohmann::json::parse(p.to_json().dump()));
    CHECK(again.focus == p.focus);
    CHECK(again.rng_seed == 4);

    auto invalid = [](const char* text) {
      try {
        synth::generate(synth::SynthProfile::from_json(nlohmann::json::parse(text)),
                        synth::demo_dictionary());
      } catch (const Error& e) {
        return e.code() == Errc::InvalidProfile;
      }
      return false;
    };
    CHECK(invalid(R"({"focus": 1.5})"));
    CHECK(invalid(R"({"focus": "3/2"})"));
    CHECK(invalid(R"({"n_users": 0})"));
    CHECK(invalid(R"({"n_users": "many"})"));
    CHECK(invalid(R"({"cluster_terms": 1000})"));
    CHECK(invalid(R"([1])"));
    CHECK_THROWS_AS(synth::generate({}, Dictionary{}), Error);
  }
}
