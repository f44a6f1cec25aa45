#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "termite/errors.hpp"
#include "termite/evidence.hpp"

using namespace termite;

namespace {

const std::filesystem::path kFixtures = TERMITE_FIXTURES_DIR;

std::vector<SearchResult> results_of(std::initializer_list<std::pair<const char*, const char*>>
                                         title_snippet) {
  std::vector<SearchResult> out;
  int i = 0;
  for (const auto& [t, s] : title_snippet) {
    out.push_back({t, s, "https://example.test/" + std::to_string(i++)});
  }
  return out;
}

NGramCandidate cand(std::vector<std::string> lemmas, std::uint64_t freq = 2) {
  std::vector<PosTag> tags(lemmas.size(), PosTag::NOUN);
  return {std::move(lemmas), std::move(tags), freq};
}

}  // namespace

TEST_SUITE("evidence") {

TEST_CASE("occurrences sum across titles and snippets") {
  auto rs = results_of({{"Le mur porteur", "rien"},
                        {"autre", "mur porteur et mur porteur"},
                        {"x", "y"}});
  CHECK(count_exact_matches("mur porteur", rs) == 3);
  CHECK(count_results_containing("mur porteur", rs) == 2);
}

TEST_CASE("no results means zero matches") {
  CHECK(count_exact_matches("mur", {}) == 0);
}

TEST_CASE("matching respects word boundaries") {
  auto rs = results_of({{"murmure", "le murmure du mur"}});
  CHECK(count_exact_matches("mur", rs) == 1);
  auto accented = results_of({{"muré", "mur muré"}});
  CHECK(count_exact_matches("mur", accented) == 1);
  auto plural = results_of({{"cartes", "carte"}});
  CHECK(count_exact_matches("carte", plural) == 1);
}

TEST_CASE("matching folds case but keeps diacritics significant") {
  auto rs = results_of({{"CARTE DE CRÉDIT", "Carte De Crédit ici"}});
  CHECK(count_exact_matches("carte de crédit", rs) == 2);
  auto stripped = results_of({{"carte de credit", ""}});
  CHECK(count_exact_matches("carte de crédit", stripped) == 0);
}

TEST_CASE("occurrences never overlap") {
  auto rs = results_of({{"a a a", ""}});
  CHECK(count_exact_matches("a a", rs) == 1);
}

TEST_CASE("hyphens and punctuation are boundaries") {
  auto rs = results_of({{"camion-benne", "un camion benne."}});
  CHECK(count_exact_matches("camion benne", rs) == 1);
  CHECK(count_exact_matches("benne", rs) == 2);
}

TEST_CASE("cache lines round-trip") {
  CacheEntry e{"mur porteur", "fixture", "", 3,
               {{"t", "s", "https://example.test/"}}};
  CacheEntry back = parse_cache_line(serialize_cache_line(e), "t", 1);
  CHECK(back.query == e.query);
  CHECK(back.provider_id == e.provider_id);
  CHECK(back.match_count == e.match_count);
  REQUIRE(back.results.size() == 1);
  CHECK(back.results[0] == e.results[0]);
  CHECK_THROWS_AS(parse_cache_line("{not json", "t", 3), DataError);
}

TEST_CASE("the cache persists entries to disk") {
  auto path = std::filesystem::temp_directory_path() / "termite_cache_test.jsonl";
  std::filesystem::remove(path);
  {
    EvidenceCache cache(path);
    cache.put({"q1", "fixture", "", 5, {}});
    cache.put({"q2", "fixture", "", 7, {}});
    CHECK(cache.size() == 2);
  }
  EvidenceCache reloaded(path);
  CHECK(reloaded.size() == 2);
  REQUIRE(reloaded.find("fixture", "q1") != nullptr);
  CHECK(reloaded.find("fixture", "q1")->match_count == 5);
  CHECK(reloaded.find("other", "q1") == nullptr);
  CHECK(reloaded.find_any("q2") != nullptr);
  std::filesystem::remove(path);
}

TEST_CASE("the fixture provider serves canned results deterministically") {
  FixtureProvider provider(kFixtures / "search_results.jsonl");
  CHECK(provider.id() == "fixture");
  CHECK_FALSE(provider.live());
  auto first = provider.search("mur porteur");
  auto second = provider.search("mur porteur");
  CHECK_FALSE(first.empty());
  CHECK(first == second);
  CHECK(provider.search("no such phrase").empty());
}

TEST_CASE("pruning keeps at and above the threshold") {
  // counts are recomputed from stored results, so craft snippets with the
  // desired number of occurrences
  auto mk = [](const std::string& phrase, int times) {
    std::string snippet;
    for (int i = 0; i < times; ++i) snippet += phrase + ", ";
    return CacheEntry{phrase, "fixture", "", 0, {{"", snippet, "u"}}};
  };
  EvidenceCache counted;
  counted.put(mk("haut", 12));
  counted.put(mk("bas", 9));
  counted.put(mk("limite", 10));
  std::vector<NGramCandidate> cands = {cand({"haut"}), cand({"bas"}), cand({"limite"})};
  PruneOutcome out = prune_by_evidence(cands, nullptr, &counted, {10, MatchMode::OCCURRENCES, 2});
  REQUIRE(out.kept.size() == 2);
  CHECK(out.kept[0].joined() == "haut");
  CHECK(out.kept[1].joined() == "limite");
  REQUIRE(out.dropped.size() == 1);
  CHECK(out.dropped[0].joined() == "bas");
  CHECK(out.unresolved.empty());
  REQUIRE(out.records.size() == 3);
  CHECK(out.records[0].match_count == 12);
  CHECK(out.records[1].match_count == 9);
  CHECK(out.records[2].match_count == 10);
}

TEST_CASE("every candidate lands in exactly one bucket") {
  FixtureProvider provider(kFixtures / "search_results.jsonl");
  std::vector<NGramCandidate> cands = {cand({"mur", "porteur"}), cand({"sa", "carte"}),
                                       cand({"pas", "connu"})};
  PruneOutcome out = prune_by_evidence(cands, &provider, nullptr, {10, MatchMode::OCCURRENCES, 2});
  CHECK(out.kept.size() + out.dropped.size() + out.unresolved.size() == cands.size());
  CHECK(out.records.size() == cands.size());
  for (const auto& r : out.records) CHECK(r.resolved);
}

TEST_CASE("a missing provider leaves uncached candidates unresolved") {
  EvidenceCache cache;
  cache.put({"connu", "fixture", "", 0, {{"connu partout connu", "connu", "u"}}});
  std::vector<NGramCandidate> cands = {cand({"connu"}), cand({"inconnu"})};
  PruneOutcome out = prune_by_evidence(cands, nullptr, &cache, {2, MatchMode::OCCURRENCES, 2});
  REQUIRE(out.unresolved.size() == 1);
  CHECK(out.unresolved[0].joined() == "inconnu");
  CHECK(out.kept.size() == 1);
  REQUIRE(out.records.size() == 2);
  CHECK_FALSE(out.records[1].resolved);
}

TEST_CASE("the cache is consulted before the provider") {
  // cache carries a synthetic entry that the fixture would answer differently
  EvidenceCache cache;
  cache.put({"mur porteur", "fixture", "", 0, {}});
  FixtureProvider provider(kFixtures / "search_results.jsonl");
  std::vector<NGramCandidate> cands = {cand({"mur", "porteur"})};
  PruneOutcome out = prune_by_evidence(cands, &provider, &cache, {1, MatchMode::OCCURRENCES, 2});
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].match_count == 0);
  CHECK(out.dropped.size() == 1);
}

TEST_CASE("kept sets shrink as the threshold grows") {
  FixtureProvider provider(kFixtures / "search_results.jsonl");
  std::vector<NGramCandidate> cands = {
      cand({"mur", "porteur"}),   cand({"carte", "de", "crédit"}), cand({"salle", "de", "bain"}),
      cand({"sa", "carte"}),      cand({"camion", "benne"}),       cand({"être"}),
      cand({"gros", "œuvre"}),    cand({"absence", "de", "remise"}),
  };
  std::size_t prev = cands.size() + 1;
  for (std::uint64_t t = 1; t <= 50; ++t) {
    PruneOutcome out =
        prune_by_evidence(cands, &provider, nullptr, {t, MatchMode::OCCURRENCES, 4});
    CHECK(out.kept.size() <= prev);
    prev = out.kept.size();
  }
}

TEST_CASE("pruning twice with one cache gives identical outcomes") {
  FixtureProvider provider(kFixtures / "search_results.jsonl");
  std::vector<NGramCandidate> cands = {cand({"mur", "porteur"}), cand({"être"}),
                                       cand({"sa", "carte"})};
  EvidenceCache cache;
  PruneOutcome a = prune_by_evidence(cands, &provider, &cache, {10, MatchMode::OCCURRENCES, 2});
  PruneOutcome b = prune_by_evidence(cands, nullptr, &cache, {10, MatchMode::OCCURRENCES, 2});
  CHECK(a.kept == b.kept);
  CHECK(a.dropped == b.dropped);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].match_count == b.records[i].match_count);
  }
}

TEST_CASE("results-containing mode counts results not occurrences") {
  EvidenceCache cache;
  std::string phrase = "mur porteur";
  cache.put({phrase, "fixture", "", 0,
             {{"mur porteur mur porteur", "", "u"}, {"", "mur porteur", "u"}, {"", "", "u"}}});
  std::vector<NGramCandidate> cands = {cand({"mur", "porteur"})};
  PruneOutcome occ = prune_by_evidence(cands, nullptr, &cache, {1, MatchMode::OCCURRENCES, 1});
  PruneOutcome res =
      prune_by_evidence(cands, nullptr, &cache, {1, MatchMode::RESULTS_CONTAINING, 1});
  CHECK(occ.records[0].match_count == 3);
  CHECK(res.records[0].match_count == 2);
}

}  // TEST_SUITE
