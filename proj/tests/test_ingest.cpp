#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "termite/errors.hpp"
#include "termite/ingest.hpp"
#include "termite/util.hpp"

using namespace termite;

namespace {

std::string norm(const std::string& text, NormalizationConfig rules = {}) {
  return normalize_text({"doc", text}, rules);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("normalize strips removal characters and numerals") {
  CHECK(norm("Le mur / la cloison (2019).") == "Le mur la cloison <SENT>");
}

TEST_CASE("normalize is the identity on clean text") {
  CHECK(norm("mur") == "mur");
  CHECK(norm("mur porteur") == "mur porteur");
}

TEST_CASE("normalize rejects empty and invalid input") {
  CHECK_THROWS_AS(norm(""), DataError);
  CHECK_THROWS_AS(norm("   \n "), DataError);
  CHECK_THROWS_AS(norm("\xC3("), DataError);
  CHECK_THROWS_WITH(norm(""), doctest::Contains("doc"));
}

TEST_CASE("normalize is idempotent") {
  NormalizationConfig rules = NormalizationConfig::french_default();
  rules.entities = {"Batimax"};
  for (const char* s : {"Le mur / la cloison (2019).", "Batimax ouvre le 12/03/2019.",
                        "Trois camions; quatre grues. Fin.", "a  b   c."}) {
    std::string once = norm(s, rules);
    CHECK(norm(once, rules) == once);
  }
}

TEST_CASE("no output token carries a removal character or is numeric") {
  std::string s = norm("a/b (c) [d] {e}; f: g* #h 12 3,5 x2019");
  for (const auto& tok : tokenize(s)) {
    for (char c : std::string("/()[]{};:*#")) {
      CHECK(tok.find(c) == std::string::npos);
    }
    CHECK(tok.find_first_not_of("0123456789.,") != std::string::npos);
  }
  CHECK(tokenize(s).size() == 9);  // x2019 survives, pure numbers do not
}

TEST_CASE("sentence-final periods become boundary markers") {
  CHECK(norm("Fin. Suite") == "Fin <SENT> Suite");
  CHECK(norm("Fin... Suite") == "Fin <SENT> Suite");
  CHECK(norm("Fin .") == "Fin <SENT>");
}

TEST_CASE("dates collapse to the NORM marker") {
  CHECK(norm("ouvre le 12/03/2019 ici") == "ouvre le <NORM> ici");
  CHECK(norm("le 15.04.2019 et le 1-2-19") == "le <NORM> et le <NORM>");
}

TEST_CASE("entities collapse to the NORM marker case-insensitively") {
  NormalizationConfig rules;
  rules.entities = {"Batimax"};
  CHECK(norm("chantier BATIMAX ouvre", rules) == "chantier <NORM> ouvre");
  CHECK(norm("batimax.", rules) == "<NORM> <SENT>");
  // whole-word rule: no match inside a longer word
  CHECK(norm("Batimaxx reste", rules) == "Batimaxx reste");
}

TEST_CASE("multiword entities normalize even when split by removal characters") {
  NormalizationConfig rules;
  rules.entities = {"grand chantier"};
  CHECK(norm("le grand/chantier ouvre", rules) == "le <NORM> ouvre");
}

TEST_CASE("number words are dropped after folding") {
  NormalizationConfig rules = NormalizationConfig::french_default();
  CHECK(norm("Trois camions et deux grues", rules) == "camions et grues");
  // "un"/"une" double as articles and stay
  CHECK(norm("un mur et une cloison", rules) == "un mur et une cloison");
}

TEST_CASE("tokenize splits on whitespace and drops empties") {
  CHECK(tokenize("mur porteur <SENT>") ==
        std::vector<std::string>{"mur", "porteur", "<SENT>"});
  CHECK(tokenize("a  b") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("carte de crédit") == std::vector<std::string>{"carte", "de", "crédit"});
  CHECK(tokenize("  ").empty());
}

TEST_CASE("token count equals maximal non-whitespace runs") {
  for (const char* s : {"a b c", " a\t\tb ", "x", "", "  ", "un\ndeux\ntrois"}) {
    std::string_view sv = s;
    std::size_t runs = 0;
    bool in_run = false;
    for (char c : sv) {
      bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
      if (!ws && !in_run) ++runs;
      in_run = !ws;
    }
    CHECK(tokenize(sv).size() == runs);
  }
}

TEST_CASE("ingest_tagged maps lines to tokens") {
  auto p = temp_file("termite_tagged.tsv", "mur\tNOUN\tmur\nde\tPREP\tde\n\nMurs\tNOUN\tMur\n");
  TaggedDocument doc = ingest_tagged(p, TaggedFormat::TSV);
  REQUIRE(doc.tokens.size() == 4);
  CHECK(doc.tokens[0] == TaggedToken{"mur", "mur", PosTag::NOUN, false});
  CHECK(doc.tokens[1].pos == PosTag::PREP);
  CHECK(doc.tokens[2].is_boundary);
  CHECK(doc.tokens[2].pos == PosTag::SENT);
  CHECK(doc.tokens[3].lemma == "mur");  // lemmas fold
  CHECK(doc.id == "termite_tagged.tsv");
}

TEST_CASE("ingest_tagged reports malformed lines by number") {
  auto p = temp_file("termite_bad.tsv", "mur\tNOUN\tmur\nmur\tNOUN\n");
  CHECK_THROWS_WITH_AS(ingest_tagged(p, TaggedFormat::TSV), doctest::Contains("2"), DataError);
}

TEST_CASE("ingest_tagged maps unknown pos strings to OTHER") {
  auto p = temp_file("termite_unk.tsv", "mur\tXYZ\tmur\n");
  TaggedDocument doc = ingest_tagged(p, TaggedFormat::TSV);
  CHECK(doc.tokens.at(0).pos == PosTag::OTHER);
}

TEST_CASE("serialize_tagged round-trips canonical input byte-exactly") {
  std::string canonical = "mur\tNOUN\tmur\nde\tPREP\tde\n\nporteur\tADJ\tporteur\n";
  auto p = temp_file("termite_rt.tsv", canonical);
  CHECK(serialize_tagged(ingest_tagged(p, TaggedFormat::TSV)) == canonical);
}

TEST_CASE("lexicon lookups are case-insensitive") {
  Lexicon lex;
  lex.add("mur", PosTag::NOUN, "mur");
  REQUIRE(lex.find("MUR") != nullptr);
  CHECK(lex.find("MUR")->lemma == "mur");
  CHECK(lex.find("absent") == nullptr);
}

TEST_CASE("lexicon files skip comment lines") {
  auto p = temp_file("termite_lex.tsv", "# header\nmur\tNOUN\tmur\nMurs\tNOUN\tmur\n");
  Lexicon lex = Lexicon::from_file(p);
  CHECK(lex.size() == 2);
  REQUIRE(lex.find("murs") != nullptr);
  CHECK(lex.find("murs")->lemma == "mur");
}

TEST_CASE("tag_tokens applies the miss policy") {
  Lexicon lex;
  lex.add("mur", PosTag::NOUN, "mur");
  std::vector<std::string> toks = {"Mur", "xyzzy", "<SENT>", "<NORM>"};
  TaggedDocument doc = tag_tokens(toks, lex, "d");
  REQUIRE(doc.tokens.size() == 4);
  CHECK(doc.tokens[0].lemma == "mur");
  CHECK(doc.tokens[0].pos == PosTag::NOUN);
  CHECK(doc.tokens[1].pos == PosTag::OTHER);
  CHECK(doc.tokens[1].lemma == "xyzzy");
  CHECK(doc.tokens[2].is_boundary);
  CHECK(is_marker(doc.tokens[3]));
  CHECK_FALSE(is_marker(doc.tokens[0]));
}

}  // TEST_SUITE
