#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "termite/ngrams.hpp"
#include "termite/tags.hpp"

namespace termite {

/// Exact tag sequences retained by the linguistic filter. Lengths 1..3.
struct PatternSet {
  std::set<std::vector<PosTag>> patterns;

  bool contains(const std::vector<PosTag>& p) const { return patterns.count(p) > 0; }
  std::size_t size() const { return patterns.size(); }
};

/// The 11 knowledge-model sequences: NOUN, VERB, ADJ, NOUN-NOUN,
/// ADJ-NOUN, PREP-NOUN, VERB-NOUN, NOUN-NOUN-NOUN, PREP-NOUN-NOUN,
/// NOUN-PREP-NOUN, VERB-NOUN-NOUN.
PatternSet default_patterns();

/// Keeps exactly the candidates whose pos_pattern is in the set.
/// Frequencies and order are unchanged.
std::vector<NGramCandidate> filter_by_patterns(std::span<const NGramCandidate> candidates,
                                               const PatternSet& patterns);

/// One pattern per line, tags hyphen-separated ("NOUN-PREP-NOUN");
/// '#' lines are comments. Rejects empty sets, lengths outside 1..3 and
/// unknown tags.
PatternSet load_patterns(const std::filesystem::path& path);
PatternSet parse_patterns(const std::string& text, const std::string& origin);
std::string serialize_patterns(const PatternSet& patterns);

}  // namespace termite
