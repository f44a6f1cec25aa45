#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "termite/tags.hpp"

namespace termite {

/// Reserved marker tokens. ⟨SENT⟩ closes a sentence, ⟨NORM⟩ replaces a
/// normalized entity or date. Both survive tokenization as single tokens
/// and block n-gram windows downstream.
inline constexpr std::string_view kSentMarker = "<SENT>";
inline constexpr std::string_view kNormMarker = "<NORM>";

struct RawDocument {
  std::string id;
  std::string text;
};

struct TaggedToken {
  std::string surface;
  std::string lemma;
  PosTag pos = PosTag::OTHER;
  bool is_boundary = false;

  bool operator==(const TaggedToken&) const = default;
};

struct TaggedDocument {
  std::string id;
  std::vector<TaggedToken> tokens;
};

/// True for sentence boundaries and ⟨NORM⟩ placeholders; n-gram windows
/// never include or cross a marker.
bool is_marker(const TaggedToken& t);

struct NormalizationConfig {
  /// Characters replaced by whitespace inside tokens.
  std::string removal_chars = "/()[]{};:*#";
  /// Number words dropped after case folding. "un"/"une" are left out of
  /// the default list because they double as articles.
  std::vector<std::string> number_words;
  /// Entity names rewritten to ⟨NORM⟩, matched case-insensitively on
  /// whole words. May contain spaces.
  std::vector<std::string> entities;
  /// Rewrite d/m/y-shaped digit groups to ⟨NORM⟩.
  bool normalize_dates = true;

  static NormalizationConfig french_default();
};

/// Cleans one document: dates and entities become ⟨NORM⟩, removal-set
/// characters split tokens, digit tokens and number words are dropped,
/// token-final periods become ⟨SENT⟩. Idempotent; preserves case.
/// Throws DataError on invalid UTF-8 or empty text, naming the document.
std::string normalize_text(const RawDocument& raw, const NormalizationConfig& rules);

/// Whitespace split; empty tokens dropped, order preserved.
std::vector<std::string> tokenize(std::string_view text);

enum class TaggedFormat { TSV };

/// Reads "surface⟨TAB⟩pos⟨TAB⟩lemma" lines; a blank line is a sentence
/// boundary. Lemmas are case-folded; pos strings resolve through tags.
/// Document id is the file name.
TaggedDocument ingest_tagged(const std::filesystem::path& path, TaggedFormat format,
                             const TagMap& tags = TagMap::french_default());

/// Inverse of ingest_tagged for canonical input: tags serialize to their
/// canonical names, boundaries to blank lines.
std::string serialize_tagged(const TaggedDocument& doc);

/// Word → (pos, lemma) table keyed by folded surface.
class Lexicon {
 public:
  /// "word⟨TAB⟩pos⟨TAB⟩lemma" lines; '#' lines are comments.
  static Lexicon from_file(const std::filesystem::path& path,
                           const TagMap& tags = TagMap::french_default());

  void add(std::string_view word, PosTag pos, std::string lemma);

  struct Entry {
    PosTag pos;
    std::string lemma;
  };
  const Entry* find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Entry> entries_;
};

/// Tags normalized tokens through a lexicon. Misses become OTHER with the
/// folded surface as lemma; markers pass through as boundary/placeholder
/// tokens.
TaggedDocument tag_tokens(std::span<const std::string> tokens, const Lexicon& lexicon,
                          std::string id);

}  // namespace termite
