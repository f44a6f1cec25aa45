#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "termite/ingest.hpp"
#include "termite/tags.hpp"

namespace termite {

struct NGramCandidate {
  std::vector<std::string> lemmas;     // 1..3 entries, never markers
  std::vector<PosTag> pos_pattern;     // same length as lemmas
  std::uint64_t frequency = 0;

  std::string joined() const;          // lemmas joined by ' '
  std::string pattern_string() const;  // tags joined by ' '

  bool operator==(const NGramCandidate&) const = default;
};

struct StatsEntry {
  std::uint64_t count = 0;
  /// Observed tag sequences (space-joined) with their occurrence counts.
  /// Empty for stats loaded from files that carry no tag column.
  std::map<std::string, std::uint64_t> tag_votes;
};

/// Frequency table for one corpus; holds the a and b symbols of the
/// ranking formula.
struct CorpusStats {
  std::uint64_t total_words = 0;  // non-marker tokens
  std::set<int> n_values;
  std::map<std::string, StatsEntry> freq;  // key: lemmas joined by ' '

  std::uint64_t count_of(const std::string& joined) const;
};

/// Un-thresholded window counts. Windows never include markers; a marker
/// splits its sentence into independent runs. Throws DataError on an
/// empty corpus (total word count of zero).
CorpusStats corpus_stats(std::span<const TaggedDocument> docs, const std::set<int>& n_values);

/// Shard-parallel corpus_stats; agrees exactly with the serial count.
CorpusStats corpus_stats_parallel(std::span<const TaggedDocument> docs,
                                  const std::set<int>& n_values, unsigned threads);

/// Pointwise sum. Inputs must share n_values.
CorpusStats merge_stats(const CorpusStats& a, const CorpusStats& b);

/// Candidates at or above min_frequency, sorted by (n, lemmas). Each
/// pos_pattern is the majority vote over observed tag sequences, ties
/// broken by the lexicographically smallest sequence.
std::vector<NGramCandidate> candidates_from(const CorpusStats& stats, std::uint64_t min_frequency);

/// corpus_stats + candidates_from, except an empty corpus yields an empty
/// candidate list instead of an error.
std::vector<NGramCandidate> extract_ngrams(std::span<const TaggedDocument> docs,
                                           const std::set<int>& n_values,
                                           std::uint64_t min_frequency);

/// TSV rows "n⟨TAB⟩lemmas⟨TAB⟩tags⟨TAB⟩frequency" (space-joined columns),
/// preceded by "total_words⟨TAB⟩N"; rows sorted by (n, lemmas). '#' lines
/// are comments. Stats rows without tag information use "-".
std::string serialize_stats(const CorpusStats& stats);
CorpusStats parse_stats(const std::string& text, const std::string& origin);

std::string serialize_candidates(std::span<const NGramCandidate> candidates,
                                 std::uint64_t total_words);
struct CandidateFile {
  std::vector<NGramCandidate> candidates;
  std::uint64_t total_words = 0;
};
CandidateFile parse_candidates(const std::string& text, const std::string& origin);

}  // namespace termite
