#include "termite/ingest.hpp"

#include <algorithm>
#include <regex>

#include "termite/errors.hpp"
#include "termite/text.hpp"
#include "termite/util.hpp"

namespace termite {

bool is_marker(const TaggedToken& t) { return t.is_boundary || t.surface == kNormMarker; }

NormalizationConfig NormalizationConfig::french_default() {
  NormalizationConfig c;
  c.number_words = {"deux",     "trois",    "quatre",   "cinq",     "six",      "sept",
                    "huit",     "neuf",     "dix",      "onze",     "douze",    "treize",
                    "quatorze", "quinze",   "seize",    "vingt",    "trente",   "quarante",
                    "cinquante", "soixante", "cent",    "cents",    "mille"};
  return c;
}

namespace {

// Replaces whole-word occurrences of needle (already folded) with the
// ⟨NORM⟩ marker. Folding preserves byte lengths, so offsets into the
// folded copy index the original directly. '<' and '>' are excluded from
// boundaries so marker tokens are never rewritten.
std::string replace_entity(const std::string& s, const std::string& needle) {
  if (needle.empty()) return s;
  std::string folded = fold_french(s);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  std::uint32_t prev = ' ';
  while (i < folded.size()) {
    bool at_boundary = !is_word_cp(prev) && prev != '<' && prev != '>';
    if (at_boundary && folded.compare(i, needle.size(), needle) == 0) {
      std::size_t end = i + needle.size();
      std::uint32_t next = ' ';
      if (end < folded.size()) {
        std::size_t nlen;
        next = utf8_decode(folded, end, nlen);
      }
      if (!is_word_cp(next) && next != '<' && next != '>') {
        out += " ";
        out += kNormMarker;
        out += " ";
        i = end;
        prev = '>';
        continue;
      }
    }
    std::size_t len;
    prev = utf8_decode(folded, i, len);
    out.append(s, i, len);
    i += len;
  }
  return out;
}

std::string replace_entities(std::string s, const std::vector<std::string>& entities) {
  for (const auto& e : entities) {
    std::string needle = fold_french(e);
    if (!needle.empty()) s = replace_entity(s, needle);
  }
  return s;
}

std::string replace_dates(const std::string& s) {
  static const std::regex kDateRe(R"(\b\d{1,2}[/.\-]\d{1,2}[/.\-]\d{2,4}\b)");
  std::string marker = " ";
  marker += kNormMarker;
  marker += " ";
  return std::regex_replace(s, kDateRe, marker);
}

bool is_numeric_token(std::string_view tok) {
  bool any = false;
  for (char c : tok) {
    if (c == '.' || c == ',') continue;
    if (c < '0' || c > '9') return false;
    any = true;
  }
  return any;
}

}  // namespace

std::string normalize_text(const RawDocument& raw, const NormalizationConfig& rules) {
  if (!utf8_valid(raw.text)) throw DataError("invalid UTF-8 in document " + raw.id);
  if (trim(raw.text).empty()) throw DataError("empty document " + raw.id);

  std::string s = raw.text;
  if (rules.normalize_dates) s = replace_dates(s);
  s = replace_entities(std::move(s), rules.entities);

  std::vector<std::string> number_words;
  number_words.reserve(rules.number_words.size());
  for (const auto& w : rules.number_words) number_words.push_back(fold_french(w));

  std::vector<std::string> kept;
  for (const auto& tok : split_ws(s)) {
    if (tok == kSentMarker || tok == kNormMarker) {
      kept.push_back(tok);
      continue;
    }
    std::string spaced = tok;
    for (char& c : spaced) {
      if (rules.removal_chars.find(c) != std::string::npos) c = ' ';
    }
    for (const auto& sub : split_ws(spaced)) {
      std::string core = sub;
      bool sentence_end = false;
      while (!core.empty() && core.back() == '.') {
        core.pop_back();
        sentence_end = true;
      }
      if (!core.empty() && !is_numeric_token(core)) {
        std::string folded = fold_french(core);
        if (std::find(number_words.begin(), number_words.end(), folded) == number_words.end()) {
          kept.push_back(core);
        }
      }
      if (sentence_end) kept.push_back(std::string(kSentMarker));
    }
  }

  // Entities split by removal characters in the raw text rejoin here, so
  // one more pass keeps normalize_text idempotent.
  std::string joined = replace_entities(join(kept, " "), rules.entities);
  return join(split_ws(joined), " ");
}

std::vector<std::string> tokenize(std::string_view text) { return split_ws(text); }

TaggedDocument ingest_tagged(const std::filesystem::path& path, TaggedFormat format,
                             const TagMap& tags) {
  (void)format;  // TSV is the only member
  TaggedDocument doc;
  doc.id = path.filename().string();
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) {
      doc.tokens.push_back({std::string(kSentMarker), "", PosTag::SENT, true});
      continue;
    }
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 3) {
      throw DataError(path.string() + ": line " + std::to_string(i + 1) +
                      ": expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    doc.tokens.push_back({fields[0], fold_french(fields[2]), tags.resolve(fields[1]), false});
  }
  return doc;
}

std::string serialize_tagged(const TaggedDocument& doc) {
  std::string out;
  for (const auto& t : doc.tokens) {
    if (t.is_boundary) {
      out += '\n';
      continue;
    }
    out += t.surface;
    out += '\t';
    out += to_string(t.pos);
    out += '\t';
    out += t.lemma;
    out += '\n';
  }
  return out;
}

Lexicon Lexicon::from_file(const std::filesystem::path& path, const TagMap& tags) {
  Lexicon lex;
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 3) {
      throw DataError(path.string() + ": line " + std::to_string(i + 1) +
                      ": expected 3 tab-separated fields");
    }
    lex.add(fields[0], tags.resolve(fields[1]), fold_french(fields[2]));
  }
  return lex;
}

void Lexicon::add(std::string_view word, PosTag pos, std::string lemma) {
  entries_[fold_french(word)] = Entry{pos, std::move(lemma)};
}

const Lexicon::Entry* Lexicon::find(std::string_view word) const {
  auto it = entries_.find(fold_french(word));
  return it == entries_.end() ? nullptr : &it->second;
}

TaggedDocument tag_tokens(std::span<const std::string> tokens, const Lexicon& lexicon,
                          std::string id) {
  TaggedDocument doc;
  doc.id = std::move(id);
  doc.tokens.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (tok == kSentMarker) {
      doc.tokens.push_back({std::string(kSentMarker), "", PosTag::SENT, true});
    } else if (tok == kNormMarker) {
      doc.tokens.push_back({std::string(kNormMarker), std::string(kNormMarker), PosTag::OTHER, false});
    } else if (const auto* e = lexicon.find(tok)) {
      doc.tokens.push_back({tok, e->lemma, e->pos, false});
    } else {
      doc.tokens.push_back({tok, fold_french(tok), PosTag::OTHER, false});
    }
  }
  return doc;
}

}  // namespace termite
