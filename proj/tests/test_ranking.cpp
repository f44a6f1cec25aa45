#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "termite/errors.hpp"
#include "termite/ranking.hpp"

using namespace termite;

namespace {

NGramCandidate cand(std::vector<std::string> lemmas, std::uint64_t freq) {
  std::vector<PosTag> tags(lemmas.size(), PosTag::NOUN);
  return {std::move(lemmas), std::move(tags), freq};
}

CorpusStats stats_of(std::uint64_t total,
                     std::initializer_list<std::pair<const char*, std::uint64_t>> freqs) {
  CorpusStats s;
  s.total_words = total;
  s.n_values = {1, 2, 3};
  for (const auto& [k, v] : freqs) s.freq[k].count = v;
  return s;
}

}  // namespace

TEST_SUITE("ranking") {

TEST_CASE("equal rates score zero") {
  CHECK(zscore(5, 100, 50, 1000) == 0.0);
}

TEST_CASE("the specific-heavy example matches the high-precision value") {
  double z = zscore(10, 1000, 1, 100000);
  CHECK(z == doctest::Approx(30.122623708878803).epsilon(1e-12));
}

TEST_CASE("sign follows the rate difference") {
  CHECK(zscore(0, 1000, 100, 1000) < 0.0);
  CHECK(zscore(0, 1000, 100, 1000) ==
        doctest::Approx(-10.259783520851541).epsilon(1e-12));
  CHECK(zscore(100, 1000, 0, 1000) > 0.0);
}

TEST_CASE("a double-zero numerator needs smoothing") {
  CHECK_THROWS_AS(zscore(0, 100, 0, 1000, 0.0), DataError);
  CHECK(zscore(0, 100, 0, 1000, 0.5) != 0.0);
  CHECK(std::isfinite(zscore(0, 100, 0, 1000, 0.5)));
}

TEST_CASE("a saturated pooled rate is rejected") {
  CHECK_THROWS_AS(zscore(100, 100, 1000, 1000, 0.0), DataError);
}

TEST_CASE("rank_terms orders by z then frequency then name") {
  CorpusStats specific = stats_of(1000, {{"rare", 10}, {"commun", 10}, {"b", 5}, {"a", 5}});
  CorpusStats generic = stats_of(100000, {{"rare", 1}, {"commun", 800}, {"b", 7}, {"a", 7}});
  std::vector<NGramCandidate> cands = {cand({"commun"}, 10), cand({"rare"}, 10), cand({"b"}, 5),
                                       cand({"a"}, 5)};
  auto ranked = rank_terms(cands, specific, generic);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].ngram == "rare");
  // a and b share identical statistics; ties resolve by name
  CHECK(ranked[1].ngram == "a");
  CHECK(ranked[2].ngram == "b");
  CHECK(ranked[3].ngram == "commun");
  for (std::size_t i = 1; i < ranked.size(); ++i) CHECK(ranked[i - 1].z >= ranked[i].z);
  CHECK(ranked[0].b0 == 1000);
  CHECK(ranked[0].b1 == 100000);
}

TEST_CASE("absence from the generic corpus keeps a1 zero but smooths the score") {
  CorpusStats specific = stats_of(1000, {{"neuf", 4}});
  CorpusStats generic = stats_of(100000, {});
  std::vector<NGramCandidate> cands = {cand({"neuf"}, 4)};
  auto ranked = rank_terms(cands, specific, generic, {0.5});
  REQUIRE(ranked.size() == 1);
  CHECK(ranked[0].a1 == 0);
  CHECK(std::isfinite(ranked[0].z));
  // score equals the smoothed direct evaluation
  CHECK(ranked[0].z == doctest::Approx(zscore(4, 1000, 0.5, 100000, 0)).epsilon(1e-12));
}

TEST_CASE("rank errors name the offending n-gram") {
  CorpusStats specific = stats_of(100, {{"tout", 100}});
  CorpusStats generic = stats_of(100, {{"tout", 100}});
  std::vector<NGramCandidate> cands = {cand({"tout"}, 100)};
  CHECK_THROWS_WITH_AS(rank_terms(cands, specific, generic, {0.0}), doctest::Contains("tout"),
                       DataError);
}

TEST_CASE("serialization prints six decimals with ranks from one") {
  CorpusStats specific = stats_of(1000, {{"mur", 10}});
  CorpusStats generic = stats_of(100000, {{"mur", 1}});
  std::vector<NGramCandidate> cands = {cand({"mur"}, 10)};
  auto ranked = rank_terms(cands, specific, generic);
  std::string text = serialize_ranked(ranked);
  CHECK(text == "rank\tngram\ta0\ta1\tz\n1\tmur\t10\t1\t30.122624\n");
}

}  // TEST_SUITE
