#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "termite/embeddings.hpp"
#include "termite/metrics.hpp"
#include "termite/pairs.hpp"

namespace termite {

enum class Algorithm { LOGREG, MLP };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct TrainConfig {
  Algorithm algorithm = Algorithm::MLP;
  Composition composition = Composition::CONCAT;
  std::vector<int> hidden_layers = {100, 100};  // LOGREG ignores this
  int batch_size = 32;
  int max_epochs = 100;
  double early_stop_tolerance = 1e-4;
  int early_stop_patience = 5;
  /// Share of training data carved out (stratified, seeded) as the
  /// early-stopping validation slice; 0 disables early stopping.
  double validation_fraction = 0.15;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  bool standardize = false;
};

/// Feed-forward net: hidden ReLU layers then one logit. LOGREG is the
/// no-hidden-layer case. Weight matrices are (out x in).
struct ClassifierModel {
  Algorithm algorithm = Algorithm::LOGREG;
  Composition composition = Composition::CONCAT;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd feature_mean;   // standardization; empty when unused
  Eigen::VectorXd feature_scale;
  std::uint64_t embedding_fingerprint = 0;
  TrainConfig config;
  int epochs_run = 0;
  double final_loss = 0;  // training loss of the last completed epoch

  int input_dim() const { return weights.empty() ? 0 : static_cast<int>(weights.front().cols()); }
};

/// Mini-batch training with an adaptive-moment optimizer and
/// binary-cross-entropy loss on the logit. All randomness (init, the
/// validation split, epoch shuffles) comes from one generator seeded
/// with config.seed, so equal inputs give byte-identical models.
/// Validation loss drives early stopping: epochs that fail to improve
/// the best loss by the tolerance count toward patience, and the best
/// weights are restored on stop. Throws DataError on single-class
/// labels or a NaN loss (naming the epoch).
ClassifierModel train(std::span<const PairFeatures> features, std::span<const int> labels,
                      const TrainConfig& config);

struct Prediction {
  int label = 0;
  double probability = 0.5;
};

Prediction predict(const ClassifierModel& model, const PairFeatures& features);
Prediction predict_vector(const ClassifierModel& model, const Eigen::VectorXd& features);

/// Mean loss of the model on columns of X with targets y; used by
/// training, evaluation and the finite-difference gradient check.
double evaluate_loss(const ClassifierModel& model, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& y);

struct Gradients {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

/// Analytic gradients of evaluate_loss at the model's current weights.
Gradients loss_gradients(const ClassifierModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y);

/// Versioned container: magic "TMDL", format version, JSON metadata,
/// raw little-endian weight payload. Round-trips bit-exactly.
std::string serialize_model(const ClassifierModel& model);
ClassifierModel parse_model(const std::string& bytes, const std::string& origin);
void save_model(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_model(const std::filesystem::path& path);

/// Per-fold train/test under a shared fold plan. Pairs without vectors
/// for both terms are excluded and counted. Fold errors (single-class
/// folds included) are rethrown naming the fold.
EvalReport cross_validate(std::span<const TermPair> pairs, const EmbeddingStore& store,
                          const TrainConfig& config, const FoldPlan& folds);

struct GridDataset {
  std::string name;
  std::vector<TermPair> pairs;
};

struct GridEmbedding {
  std::string name;
  const EmbeddingStore* store = nullptr;
};

struct GridCell {
  std::string dataset;
  std::string embedding;
  Algorithm algorithm = Algorithm::LOGREG;
  Composition composition = Composition::CONCAT;
  EvalReport report;
  std::uint64_t fold_fingerprint = 0;
  std::string error;  // cell failed; report is empty
};

/// Runs dataset x embedding x algorithm x composition. Every cell on a
/// dataset shares one fold plan. Cells run concurrently up to `threads`;
/// failures are recorded, not fatal. Results sort by mean F1 descending
/// with failed cells last, ties keeping grid order.
std::vector<GridCell> run_grid(std::span<const GridDataset> datasets,
                               std::span<const GridEmbedding> embeddings,
                               std::span<const Composition> compositions,
                               std::span<const Algorithm> algorithms, int k, std::uint64_t seed,
                               const TrainConfig& base, unsigned threads = 1);

}  // namespace termite
