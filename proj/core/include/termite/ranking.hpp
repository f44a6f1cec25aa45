#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "termite/ngrams.hpp"

namespace termite {

/// Keyness of one n-gram: specific-corpus frequency a0 out of b0 words
/// against generic-corpus frequency a1 out of b1 words.
struct RankedTerm {
  std::string ngram;
  std::string pattern;  // space-joined tags, carried from the candidate
  std::uint64_t a0 = 0;
  std::uint64_t a1 = 0;
  std::uint64_t b0 = 0;
  std::uint64_t b1 = 0;
  double z = 0.0;
};

/// Z = (p1 - p2) / sqrt(p (1-p) (1/b0 + 1/b1)) with p1 = a0/b0,
/// p2 = a1/b1, p = (a0+a1)/(b0+b1). When a0 = a1 = 0 and smoothing > 0,
/// both counts are raised by the smoothing constant first. Degenerate
/// pooled rates (p = 0 or p = 1) throw DataError.
double zscore(double a0, double b0, double a1, double b1, double smoothing = 0.0);

struct RankOptions {
  /// Added to a1 when the n-gram is absent from the generic corpus;
  /// keeps p2 off the undefined boundary while preserving a1 = 0 in the
  /// output row.
  double smoothing = 0.5;
};

/// Scores every candidate (a0 = candidate frequency, b0/b1 = corpus
/// sizes, a1 = generic frequency) and sorts by descending z, then
/// descending a0, then ngram. Errors name the offending n-gram.
std::vector<RankedTerm> rank_terms(std::span<const NGramCandidate> candidates,
                                   const CorpusStats& specific, const CorpusStats& generic,
                                   const RankOptions& options = {});

/// TSV "rank⟨TAB⟩ngram⟨TAB⟩a0⟨TAB⟩a1⟨TAB⟩z" with z printed to six
/// decimal places; ranks start at 1.
std::string serialize_ranked(std::span<const RankedTerm> terms);

}  // namespace termite
