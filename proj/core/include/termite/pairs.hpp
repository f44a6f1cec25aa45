#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace termite {

enum class PairLabel { POSITIVE, NEGATIVE };

struct TermPair {
  std::string x;  // hyponym candidate
  std::string y;  // hypernym candidate
  PairLabel label = PairLabel::POSITIVE;
  std::string source;

  bool operator==(const TermPair&) const = default;
};

enum class PairFormat { BLESS, EVALUTION, VOCAGEN_CSV };

std::string_view to_string(PairFormat f);
std::optional<PairFormat> parse_pair_format(std::string_view name);

struct LoadedPairs {
  std::vector<TermPair> pairs;
  std::uint64_t dropped_rows = 0;  // non-hypernymy relations, random controls
  std::uint64_t duplicates = 0;    // repeated (x,y); first occurrence kept
};

/// BLESS rows are "concept⟨TAB⟩class⟨TAB⟩relation⟨TAB⟩relatum" (or the
/// compact "x-rel-y"); hyper → POSITIVE, coord/mero/attri/event →
/// NEGATIVE, random controls dropped. EVALution rows are
/// "x⟨TAB⟩relation⟨TAB⟩y"; IsA → POSITIVE, everything else dropped.
/// VOCAGEN_CSV is "x,y,label" with a header. Rows with x = y and
/// malformed rows fail with their row number.
LoadedPairs load_pairs(const std::filesystem::path& path, PairFormat format);
LoadedPairs parse_pairs(const std::string& text, PairFormat format, const std::string& origin);

/// Canonical CSV: "x,y,label" header, rows sorted by (x, y).
std::string serialize_pairs(std::span<const TermPair> pairs);

/// Exclusion file: one "x,y" row per line (no header). Returns the kept
/// pairs; excluded is the number removed.
struct ExclusionResult {
  std::vector<TermPair> pairs;
  std::uint64_t excluded = 0;
};
std::set<std::pair<std::string, std::string>> load_exclusions(const std::filesystem::path& path);
ExclusionResult apply_exclusions(std::span<const TermPair> pairs,
                                 const std::set<std::pair<std::string, std::string>>& excluded);

/// Balanced negative sampling: every distinct positive hypernym h gets a
/// fixed quota of fresh (w, h) couples, w drawn seeded from the positive
/// vocabulary, never reproducing a positive pair. Quotas sum to
/// |positives|; the division remainder goes to the hypernyms with the
/// most positives (ties by name). Shortfalls redistribute to hypernyms
/// with eligible words left; an unreachable balance throws DataError
/// reporting the achievable count.
std::vector<TermPair> generate_negatives(std::span<const TermPair> positives, std::uint64_t seed);

/// Stratified k-fold assignment. Pairs are sorted, shuffled per label
/// class from one seeded stream, and dealt round-robin with a cursor
/// that runs across classes, so fold sizes differ by at most one
/// globally and per label.
struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  std::map<std::pair<std::string, std::string>, int> assignments;

  int fold_of(const TermPair& p) const;
  std::vector<std::size_t> fold_sizes() const;
  std::uint64_t fingerprint() const;
};

FoldPlan kfold_split(std::span<const TermPair> pairs, int k, std::uint64_t seed);

/// Minimal CSV row parser: commas split fields, double quotes wrap
/// fields, doubled quotes escape.
std::vector<std::string> parse_csv_row(const std::string& line);
std::string csv_field(const std::string& value);

}  // namespace termite
