#include <doctest.h>

#include <vector>

#include "termite/errors.hpp"
#include "termite/patterns.hpp"

using namespace termite;

namespace {

NGramCandidate cand(std::vector<std::string> lemmas, std::vector<PosTag> tags,
                    std::uint64_t freq = 2) {
  return {std::move(lemmas), std::move(tags), freq};
}

}  // namespace

TEST_SUITE("patterns") {

TEST_CASE("the default set holds exactly the eleven sequences") {
  PatternSet p = default_patterns();
  CHECK(p.size() == 11);
  CHECK(p.contains({PosTag::NOUN}));
  CHECK(p.contains({PosTag::VERB}));
  CHECK(p.contains({PosTag::ADJ}));
  CHECK(p.contains({PosTag::NOUN, PosTag::NOUN}));
  CHECK(p.contains({PosTag::ADJ, PosTag::NOUN}));
  CHECK(p.contains({PosTag::PREP, PosTag::NOUN}));
  CHECK(p.contains({PosTag::VERB, PosTag::NOUN}));
  CHECK(p.contains({PosTag::NOUN, PosTag::NOUN, PosTag::NOUN}));
  CHECK(p.contains({PosTag::PREP, PosTag::NOUN, PosTag::NOUN}));
  CHECK(p.contains({PosTag::NOUN, PosTag::PREP, PosTag::NOUN}));
  CHECK(p.contains({PosTag::VERB, PosTag::NOUN, PosTag::NOUN}));
}

TEST_CASE("rejected sequences stay out") {
  PatternSet p = default_patterns();
  CHECK_FALSE(p.contains({PosTag::VERB, PosTag::PREP, PosTag::NOUN}));
  CHECK_FALSE(p.contains({PosTag::DET, PosTag::NOUN}));
  CHECK_FALSE(p.contains({PosTag::NOUN, PosTag::ADJ}));
}

TEST_CASE("filter keeps exactly the matching candidates") {
  std::vector<NGramCandidate> cands = {
      cand({"carte", "de", "crédit"}, {PosTag::NOUN, PosTag::PREP, PosTag::NOUN}),
      cand({"créditer", "sa", "carte"}, {PosTag::VERB, PosTag::PREP, PosTag::NOUN}),
      cand({"mur", "porteur"}, {PosTag::NOUN, PosTag::NOUN}, 5),
      cand({"le", "mur"}, {PosTag::DET, PosTag::NOUN}),
  };
  auto kept = filter_by_patterns(cands, default_patterns());
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].joined() == "carte de crédit");
  CHECK(kept[1].joined() == "mur porteur");
  CHECK(kept[1].frequency == 5);  // unchanged
}

TEST_CASE("filtering twice changes nothing") {
  std::vector<NGramCandidate> cands = {
      cand({"mur"}, {PosTag::NOUN}),
      cand({"le"}, {PosTag::DET}),
  };
  auto once = filter_by_patterns(cands, default_patterns());
  auto twice = filter_by_patterns(once, default_patterns());
  CHECK(once == twice);
}

TEST_CASE("pattern files parse hyphen-separated rows") {
  PatternSet p = parse_patterns("# keep\nNOUN\nNOUN-PREP-NOUN\n", "t");
  CHECK(p.size() == 2);
  CHECK(p.contains({PosTag::NOUN, PosTag::PREP, PosTag::NOUN}));
  CHECK_FALSE(p.contains({PosTag::VERB}));
}

TEST_CASE("pattern files reject bad rows") {
  CHECK_THROWS_AS(parse_patterns("", "t"), DataError);
  CHECK_THROWS_AS(parse_patterns("# only comments\n", "t"), DataError);
  CHECK_THROWS_AS(parse_patterns("NOUN-XYZ\n", "t"), DataError);
  CHECK_THROWS_AS(parse_patterns("NOUN-NOUN-NOUN-NOUN\n", "t"), DataError);
}

TEST_CASE("serialization round-trips the default set") {
  PatternSet p = default_patterns();
  PatternSet back = parse_patterns(serialize_patterns(p), "t");
  CHECK(back.patterns == p.patterns);
}

}  // TEST_SUITE
