#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace termite {

/// Closed POS alphabet. External tagger tags are mapped into this set via
/// TagMap; PatternSet entries are sequences over it.
enum class PosTag {
  NOUN,
  VERB,
  ADJ,
  PREP,
  DET,
  PRON,
  ADV,
  NUM,
  PUNCT,
  SENT,
  OTHER,
};

std::string_view to_string(PosTag t);

/// Parses a canonical tag name. Returns nullopt for anything outside the
/// closed alphabet.
std::optional<PosTag> parse_tag(std::string_view name);

/// Maps tagger-native tag strings to the closed alphabet. Lookup order:
/// exact entry, then the prefix before the first ':' (TreeTagger subtypes
/// like "VER:pres"), then OTHER.
class TagMap {
 public:
  /// Identity entries for the 11 canonical names plus common French
  /// TreeTagger tags (NOM, VER, ADJ, PRP, DET, PRO, ADV, NUM, PUN, ...).
  static TagMap french_default();

  /// Empty table: only canonical names resolve, everything else is OTHER.
  static TagMap canonical_only();

  void set(std::string native, PosTag tag);
  PosTag resolve(std::string_view native) const;

  const std::map<std::string, PosTag>& entries() const { return entries_; }

 private:
  std::map<std::string, PosTag> entries_;
};

}  // namespace termite
