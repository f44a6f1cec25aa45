#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace termite {

enum class Composition { CONCAT, DIFF, SUM, PRODUCT };

std::string_view to_string(Composition c);
std::optional<Composition> parse_composition(std::string_view name);

/// CONCAT → x followed by y (2d); DIFF → y-x; SUM → y+x;
/// PRODUCT → elementwise y*x. Lengths must agree.
Eigen::VectorXd compose(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Composition method);

struct PairFeatures {
  std::string x_term;
  std::string y_term;
  Eigen::VectorXd features;
  Composition composition = Composition::CONCAT;
};

/// Immutable word → vector table loaded from fastText-style text files
/// (optionally gzipped). All vectors share one dimension.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  /// Accepts an optional "count dim" first line; data lines are
  /// "word v1 ... vd". A filter keeps only listed words (raw or folded
  /// form). Dimension mismatches fail with the line number; duplicate
  /// words keep the first occurrence and are counted.
  static EmbeddingStore load(const std::filesystem::path& path,
                             const std::set<std::string>* vocab_filter = nullptr);

  static EmbeddingStore from_entries(
      std::vector<std::pair<std::string, Eigen::VectorXd>> entries);

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  std::size_t duplicates_skipped() const { return duplicates_; }

  /// Exact lookup, then case-folded.
  const Eigen::VectorXd* find(const std::string& word) const;

  /// Single words map to their vector. Multiword terms (split on spaces
  /// and apostrophes) map to the mean of in-vocabulary constituents,
  /// skipping stop prepositions unless that empties the term. Returns
  /// nullopt when nothing is in vocabulary (MISSING).
  std::optional<Eigen::VectorXd> term_vector(const std::string& term) const;

  std::optional<PairFeatures> pair_features(const std::string& x_term, const std::string& y_term,
                                            Composition method) const;

  /// Content hash over (dim, size, sorted word/value bytes); stored in
  /// model metadata so a model remembers which vectors trained it.
  std::uint64_t fingerprint() const;

 private:
  void insert(std::string word, Eigen::VectorXd values);

  int dim_ = 0;
  std::size_t duplicates_ = 0;
  std::map<std::string, Eigen::VectorXd> vectors_;
  std::map<std::string, std::string> folded_alias_;
};

/// Constituent split used by term_vector: spaces, then apostrophes.
std::vector<std::string> term_constituents(const std::string& term);

}  // namespace termite
