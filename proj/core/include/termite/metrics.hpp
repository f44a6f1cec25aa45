#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace termite {

/// Positive-class metrics on the 0-100 scale.
struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// P = TP/(TP+FP) (0 when the classifier predicts nothing positive),
/// R = TP/(TP+FN), F1 their harmonic mean (0 when both are 0). The gold
/// sequence must contain a positive or recall is undefined (DataError).
Prf prf(std::span<const int> predictions, std::span<const int> gold);
Prf prf_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

/// Mean and population standard deviation.
std::pair<double, double> mean_sd(std::span<const double> values);

/// Expert verdict on one candidate term, in increasing relevance order.
enum class Verdict {
  IRRELEVANT = 0,
  RELEVANT_OUT_OF_DOMAIN = 1,
  RELEVANT_IN_DOMAIN = 2,
};

std::optional<Verdict> parse_verdict(std::string_view digit);

struct Judgment {
  std::string ngram;
  std::string annotator;
  Verdict verdict = Verdict::IRRELEVANT;
};

struct KappaResult {
  double kappa = 0;
  double observed_agreement = 0;
};

/// Three-category Cohen's kappa: A0 = exact-match fraction, Ae = sum of
/// products of per-category marginals, kappa = (A0-Ae)/(1-Ae), with
/// A0 = 1 mapping to kappa = 1. Sequences must align item by item.
KappaResult cohen_kappa(std::span<const Verdict> a, std::span<const Verdict> b);

enum class MergeMode { STRICT, FLEXIBLE };

struct MergeOutcome {
  /// (ngram, correct) sorted by ngram.
  std::vector<std::pair<std::string, bool>> per_ngram;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double accuracy = 0;
  double error_rate = 0;
};

/// STRICT: both experts said in-domain. FLEXIBLE: both said relevant and
/// at least one said in-domain. The two judgment lists must cover the
/// same ngrams exactly; the error message lists any difference.
MergeOutcome merge_judgments(std::span<const Judgment> a, std::span<const Judgment> b,
                             MergeMode mode);

/// Judgment TSV rows "ngram⟨TAB⟩annotator⟨TAB⟩verdict" with verdict in
/// {0,1,2}; '#' lines are comments. An empty verdict column means the
/// row was never filled in and is an error.
std::vector<Judgment> parse_judgments(const std::string& text, const std::string& origin);
std::string serialize_judgments(std::span<const Judgment> judgments);

/// Cross-validation summary: per-fold positive-class metrics plus their
/// means and population SDs, and the number of pairs excluded for
/// missing vectors.
struct EvalReport {
  std::vector<Prf> per_fold;
  double mean_p = 0, sd_p = 0;
  double mean_r = 0, sd_r = 0;
  double mean_f1 = 0, sd_f1 = 0;
  std::uint64_t excluded = 0;

  /// Fills the mean/sd fields from per_fold.
  void finalize();
};

}  // namespace termite
