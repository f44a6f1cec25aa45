#include "termite/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

#include "nlohmann/json.hpp"
#include "termite/errors.hpp"
#include "termite/util.hpp"

namespace termite {

namespace {

using nlohmann::json;

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;
constexpr std::uint32_t kModelVersion = 1;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Numerically stable binary cross-entropy on logits:
// max(z,0) - z*y + log(1 + e^-|z|), averaged over columns.
double bce_mean(const Eigen::MatrixXd& logits, const Eigen::VectorXd& y) {
  double total = 0;
  for (Eigen::Index i = 0; i < logits.cols(); ++i) {
    double z = logits(0, i);
    total += std::max(z, 0.0) - z * y[i] + std::log1p(std::exp(-std::abs(z)));
  }
  return total / static_cast<double>(logits.cols());
}

// A[0] = X; hidden layers apply ReLU; A.back() holds raw logits.
void forward(const std::vector<Eigen::MatrixXd>& W, const std::vector<Eigen::VectorXd>& b,
             const Eigen::MatrixXd& X, std::vector<Eigen::MatrixXd>& A) {
  const std::size_t L = W.size();
  A.assign(L + 1, Eigen::MatrixXd());
  A[0] = X;
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd Z = (W[l] * A[l]).colwise() + b[l];
    A[l + 1] = l + 1 < L ? Z.cwiseMax(0.0) : std::move(Z);
  }
}

// Gradients of bce_mean via backpropagation; dLoss/dlogit = sigmoid - y.
Gradients backward(const std::vector<Eigen::MatrixXd>& W, const std::vector<Eigen::MatrixXd>& A,
                   const Eigen::VectorXd& y) {
  const std::size_t L = W.size();
  const double n = static_cast<double>(y.size());
  Gradients g;
  g.dW.resize(L);
  g.db.resize(L);
  Eigen::MatrixXd delta(1, y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    delta(0, i) = (sigmoid(A[L](0, i)) - y[i]) / n;
  }
  for (std::size_t l = L; l-- > 0;) {
    g.dW[l] = delta * A[l].transpose();
    g.db[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd dA = W[l].transpose() * delta;
      // A[l] is the post-ReLU activation, so its positive entries mark
      // the positive pre-activations exactly.
      delta = dA.cwiseProduct((A[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

struct AdamState {
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  std::uint64_t t = 0;

  explicit AdamState(const std::vector<Eigen::MatrixXd>& W,
                     const std::vector<Eigen::VectorXd>& b) {
    for (const auto& w : W) {
      mW.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      vW.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& v : b) {
      mb.push_back(Eigen::VectorXd::Zero(v.size()));
      vb.push_back(Eigen::VectorXd::Zero(v.size()));
    }
  }

  void step(std::vector<Eigen::MatrixXd>& W, std::vector<Eigen::VectorXd>& b,
            const Gradients& g, double lr) {
    ++t;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    for (std::size_t l = 0; l < W.size(); ++l) {
      mW[l] = kBeta1 * mW[l] + (1.0 - kBeta1) * g.dW[l];
      vW[l] = kBeta2 * vW[l] + (1.0 - kBeta2) * g.dW[l].cwiseProduct(g.dW[l]);
      W[l] -= lr * (mW[l] / bc1).cwiseQuotient(((vW[l] / bc2).cwiseSqrt().array() + kEpsilon).matrix());
      mb[l] = kBeta1 * mb[l] + (1.0 - kBeta1) * g.db[l];
      vb[l] = kBeta2 * vb[l] + (1.0 - kBeta2) * g.db[l].cwiseProduct(g.db[l]);
      b[l] -= lr * (mb[l] / bc1).cwiseQuotient(((vb[l] / bc2).cwiseSqrt().array() + kEpsilon).matrix());
    }
  }
};

std::vector<int> layer_dims(const TrainConfig& config, int input_dim) {
  std::vector<int> dims{input_dim};
  if (config.algorithm == Algorithm::MLP) {
    for (int h : config.hidden_layers) dims.push_back(h);
  }
  dims.push_back(1);
  return dims;
}

Eigen::MatrixXd standardized(const ClassifierModel& model, const Eigen::MatrixXd& X) {
  if (model.feature_mean.size() == 0) return X;
  return (X.colwise() - model.feature_mean).array().colwise() / model.feature_scale.array();
}

void validate_config(const TrainConfig& config) {
  if (config.batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (config.max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
  if (config.learning_rate <= 0) throw ConfigError("learning_rate must be positive");
  if (config.early_stop_patience < 1) throw ConfigError("early_stop_patience must be at least 1");
  if (config.validation_fraction < 0 || config.validation_fraction >= 1) {
    throw ConfigError("validation_fraction must lie in [0, 1)");
  }
  for (int h : config.hidden_layers) {
    if (h < 1) throw ConfigError("hidden layer widths must be positive");
  }
}

}  // namespace

std::string_view to_string(Algorithm a) {
  return a == Algorithm::LOGREG ? "logreg" : "mlp";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "logreg" || name == "LOGREG") return Algorithm::LOGREG;
  if (name == "mlp" || name == "MLP") return Algorithm::MLP;
  return std::nullopt;
}

double evaluate_loss(const ClassifierModel& model, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& y) {
  std::vector<Eigen::MatrixXd> A;
  forward(model.weights, model.biases, standardized(model, X), A);
  return bce_mean(A.back(), y);
}

Gradients loss_gradients(const ClassifierModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y) {
  std::vector<Eigen::MatrixXd> A;
  forward(model.weights, model.biases, standardized(model, X), A);
  return backward(model.weights, A, y);
}

ClassifierModel train(std::span<const PairFeatures> features, std::span<const int> labels,
                      const TrainConfig& config) {
  validate_config(config);
  if (features.size() != labels.size()) throw DataError("train: features/labels length mismatch");
  if (features.size() < 2) throw DataError("train: need at least 2 samples");

  const int d = static_cast<int>(features.front().features.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].features.size() != d) {
      throw DataError("train: inconsistent feature length at sample " + std::to_string(i));
    }
    if (labels[i] == 1) ++positives;
  }
  if (positives == 0 || positives == labels.size()) {
    throw DataError("train: labels are single-class");
  }

  const std::size_t n = features.size();
  Eigen::MatrixXd X(d, n);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X.col(static_cast<Eigen::Index>(i)) = features[i].features;
    y[static_cast<Eigen::Index>(i)] = labels[i];
  }

  ClassifierModel model;
  model.algorithm = config.algorithm;
  model.composition = config.composition;
  model.config = config;

  if (config.standardize) {
    model.feature_mean = X.rowwise().mean();
    Eigen::MatrixXd centered = X.colwise() - model.feature_mean;
    model.feature_scale =
        (centered.cwiseProduct(centered).rowwise().sum() / static_cast<double>(n)).cwiseSqrt();
    for (Eigen::Index i = 0; i < model.feature_scale.size(); ++i) {
      if (model.feature_scale[i] == 0) model.feature_scale[i] = 1.0;
    }
    X = (X.colwise() - model.feature_mean).array().colwise() / model.feature_scale.array();
  }

  DetRng rng(config.seed);

  // Stratified validation slice for early stopping. floor() can never
  // consume a whole class, so the training remainder keeps both labels.
  std::vector<std::size_t> class_idx[2];
  for (std::size_t i = 0; i < n; ++i) class_idx[labels[i] == 1 ? 1 : 0].push_back(i);
  std::vector<char> in_val(n, 0);
  std::size_t val_count[2] = {0, 0};
  if (config.validation_fraction > 0) {
    for (int c : {0, 1}) {
      auto idx = class_idx[c];
      rng.shuffle(idx);
      std::size_t take = static_cast<std::size_t>(config.validation_fraction *
                                                  static_cast<double>(idx.size()));
      for (std::size_t i = 0; i < take; ++i) in_val[idx[i]] = 1;
      val_count[c] = take;
    }
  }
  const bool early_stop = val_count[0] > 0 && val_count[1] > 0;
  if (!early_stop) std::fill(in_val.begin(), in_val.end(), 0);

  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < n; ++i) (in_val[i] ? val_idx : train_idx).push_back(i);

  Eigen::MatrixXd X_val;
  Eigen::VectorXd y_val;
  if (early_stop) {
    X_val.resize(d, static_cast<Eigen::Index>(val_idx.size()));
    y_val.resize(static_cast<Eigen::Index>(val_idx.size()));
    for (std::size_t i = 0; i < val_idx.size(); ++i) {
      X_val.col(static_cast<Eigen::Index>(i)) = X.col(static_cast<Eigen::Index>(val_idx[i]));
      y_val[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(val_idx[i])];
    }
  }

  // Glorot-uniform initialization, drawn in fixed layer/row/column order.
  std::vector<int> dims = layer_dims(config, d);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    int fan_in = dims[l], fan_out = dims[l + 1];
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd W(fan_out, fan_in);
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) {
        W(r, c) = (rng.uniform01() * 2.0 - 1.0) * limit;
      }
    }
    model.weights.push_back(std::move(W));
    model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }

  AdamState adam(model.weights, model.biases);
  std::vector<Eigen::MatrixXd> best_W;
  std::vector<Eigen::VectorXd> best_b;
  double best_val = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;

  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order = train_idx;
  std::vector<Eigen::MatrixXd> A;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      std::size_t count = std::min(batch, order.size() - start);
      Eigen::MatrixXd X_b(d, static_cast<Eigen::Index>(count));
      Eigen::VectorXd y_b(static_cast<Eigen::Index>(count));
      for (std::size_t i = 0; i < count; ++i) {
        X_b.col(static_cast<Eigen::Index>(i)) =
            X.col(static_cast<Eigen::Index>(order[start + i]));
        y_b[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(order[start + i])];
      }
      forward(model.weights, model.biases, X_b, A);
      epoch_loss += bce_mean(A.back(), y_b) * static_cast<double>(count);
      Gradients g = backward(model.weights, A, y_b);
      adam.step(model.weights, model.biases, g, config.learning_rate);
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) {
      throw DataError("train: NaN loss at epoch " + std::to_string(epoch));
    }
    model.final_loss = epoch_loss;
    model.epochs_run = epoch;

    if (!early_stop) continue;
    std::vector<Eigen::MatrixXd> A_val;
    forward(model.weights, model.biases, X_val, A_val);
    double val_loss = bce_mean(A_val.back(), y_val);
    if (!std::isfinite(val_loss)) {
      throw DataError("train: NaN validation loss at epoch " + std::to_string(epoch));
    }
    if (best_val - val_loss >= config.early_stop_tolerance) {
      bad_epochs = 0;
    } else {
      ++bad_epochs;
    }
    if (val_loss < best_val) {
      best_val = val_loss;
      best_W = model.weights;
      best_b = model.biases;
    }
    if (bad_epochs >= config.early_stop_patience) break;
  }

  if (early_stop && !best_W.empty()) {
    model.weights = std::move(best_W);
    model.biases = std::move(best_b);
  }
  return model;
}

Prediction predict_vector(const ClassifierModel& model, const Eigen::VectorXd& features) {
  if (model.weights.empty()) throw DataError("predict: model has no layers");
  if (features.size() != model.input_dim()) {
    throw DataError("predict: feature length " + std::to_string(features.size()) +
                    " does not match model input " + std::to_string(model.input_dim()));
  }
  std::vector<Eigen::MatrixXd> A;
  forward(model.weights, model.biases, standardized(model, features), A);
  Prediction p;
  p.probability = sigmoid(A.back()(0, 0));
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

Prediction predict(const ClassifierModel& model, const PairFeatures& features) {
  return predict_vector(model, features.features);
}

namespace {

void append_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

void append_doubles(std::string& out, const double* data, std::size_t count) {
  out.append(reinterpret_cast<const char*>(data), count * sizeof(double));
}

void read_doubles(const std::string& bytes, std::size_t& offset, double* data, std::size_t count,
                  const std::string& origin) {
  std::size_t need = count * sizeof(double);
  if (offset + need > bytes.size()) throw DataError(origin + ": truncated weight payload");
  std::memcpy(data, bytes.data() + offset, need);
  offset += need;
}

}  // namespace

std::string serialize_model(const ClassifierModel& model) {
  json meta;
  meta["algorithm"] = std::string(to_string(model.algorithm));
  meta["composition"] = std::string(to_string(model.composition));
  std::vector<int> dims;
  for (const auto& w : model.weights) dims.push_back(static_cast<int>(w.cols()));
  dims.push_back(1);
  meta["layer_dims"] = dims;
  meta["standardize"] = model.feature_mean.size() > 0;
  meta["embedding_fingerprint"] = to_hex(model.embedding_fingerprint);
  meta["epochs_run"] = model.epochs_run;
  meta["final_loss"] = model.final_loss;
  meta["config"] = {{"batch_size", model.config.batch_size},
                    {"max_epochs", model.config.max_epochs},
                    {"early_stop_tolerance", model.config.early_stop_tolerance},
                    {"early_stop_patience", model.config.early_stop_patience},
                    {"validation_fraction", model.config.validation_fraction},
                    {"learning_rate", model.config.learning_rate},
                    {"seed", model.config.seed},
                    {"hidden_layers", model.config.hidden_layers}};
  meta["optimizer"] = {{"family", "adam"}, {"beta1", kBeta1}, {"beta2", kBeta2},
                       {"epsilon", kEpsilon}};
  std::string header = meta.dump();

  std::string out = "TMDL";
  append_u32(out, kModelVersion);
  append_u32(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    append_doubles(out, model.weights[l].data(),
                   static_cast<std::size_t>(model.weights[l].size()));
    append_doubles(out, model.biases[l].data(), static_cast<std::size_t>(model.biases[l].size()));
  }
  if (model.feature_mean.size() > 0) {
    append_doubles(out, model.feature_mean.data(),
                   static_cast<std::size_t>(model.feature_mean.size()));
    append_doubles(out, model.feature_scale.data(),
                   static_cast<std::size_t>(model.feature_scale.size()));
  }
  return out;
}

ClassifierModel parse_model(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "TMDL") != 0) {
    throw DataError(origin + ": not a model file (bad magic)");
  }
  std::uint32_t version, json_len;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&json_len, bytes.data() + 8, 4);
  if (version != kModelVersion) {
    throw DataError(origin + ": unsupported model version " + std::to_string(version));
  }
  if (bytes.size() < 12 + static_cast<std::size_t>(json_len)) {
    throw DataError(origin + ": truncated metadata");
  }
  json meta;
  try {
    meta = json::parse(bytes.substr(12, json_len));
  } catch (const json::exception& e) {
    throw DataError(origin + ": bad metadata: " + e.what());
  }

  ClassifierModel model;
  auto algo = parse_algorithm(meta.value("algorithm", std::string{}));
  auto comp = parse_composition(meta.value("composition", std::string{}));
  if (!algo || !comp || !meta.contains("layer_dims")) {
    throw DataError(origin + ": metadata missing algorithm/composition/layer_dims");
  }
  model.algorithm = *algo;
  model.composition = *comp;
  std::vector<int> dims = meta["layer_dims"].get<std::vector<int>>();
  if (dims.size() < 2 || dims.back() != 1) throw DataError(origin + ": bad layer_dims");
  model.embedding_fingerprint =
      std::stoull(meta.value("embedding_fingerprint", std::string("0")), nullptr, 16);
  model.epochs_run = meta.value("epochs_run", 0);
  model.final_loss = meta.value("final_loss", 0.0);
  if (meta.contains("config")) {
    const json& c = meta["config"];
    model.config.algorithm = model.algorithm;
    model.config.composition = model.composition;
    model.config.batch_size = c.value("batch_size", model.config.batch_size);
    model.config.max_epochs = c.value("max_epochs", model.config.max_epochs);
    model.config.early_stop_tolerance =
        c.value("early_stop_tolerance", model.config.early_stop_tolerance);
    model.config.early_stop_patience =
        c.value("early_stop_patience", model.config.early_stop_patience);
    model.config.validation_fraction =
        c.value("validation_fraction", model.config.validation_fraction);
    model.config.learning_rate = c.value("learning_rate", model.config.learning_rate);
    model.config.seed = c.value("seed", model.config.seed);
    model.config.hidden_layers =
        c.value("hidden_layers", model.config.hidden_layers);
  }

  std::size_t offset = 12 + json_len;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Eigen::MatrixXd W(dims[l + 1], dims[l]);
    read_doubles(bytes, offset, W.data(), static_cast<std::size_t>(W.size()), origin);
    Eigen::VectorXd b(dims[l + 1]);
    read_doubles(bytes, offset, b.data(), static_cast<std::size_t>(b.size()), origin);
    model.weights.push_back(std::move(W));
    model.biases.push_back(std::move(b));
  }
  if (meta.value("standardize", false)) {
    model.feature_mean.resize(dims[0]);
    model.feature_scale.resize(dims[0]);
    read_doubles(bytes, offset, model.feature_mean.data(),
                 static_cast<std::size_t>(dims[0]), origin);
    read_doubles(bytes, offset, model.feature_scale.data(),
                 static_cast<std::size_t>(dims[0]), origin);
  }
  if (offset != bytes.size()) throw DataError(origin + ": trailing bytes after weight payload");
  return model;
}

void save_model(const ClassifierModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

ClassifierModel load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path), path.string());
}

EvalReport cross_validate(std::span<const TermPair> pairs, const EmbeddingStore& store,
                          const TrainConfig& config, const FoldPlan& folds) {
  if (folds.k < 2) throw DataError("cross_validate: fold plan has k < 2");

  std::vector<const TermPair*> sorted;
  sorted.reserve(pairs.size());
  for (const auto& p : pairs) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const TermPair* a, const TermPair* b) {
    if (a->x != b->x) return a->x < b->x;
    return a->y < b->y;
  });

  EvalReport report;
  struct Sample {
    PairFeatures features;
    int label;
    int fold;
  };
  std::vector<Sample> samples;
  samples.reserve(sorted.size());
  for (const auto* p : sorted) {
    auto f = store.pair_features(p->x, p->y, config.composition);
    if (!f) {
      ++report.excluded;
      continue;
    }
    samples.push_back({std::move(*f), p->label == PairLabel::POSITIVE ? 1 : 0,
                       folds.fold_of(*p)});
  }

  for (int fold = 0; fold < folds.k; ++fold) {
    std::vector<PairFeatures> train_f;
    std::vector<int> train_y;
    std::vector<int> test_pred, test_gold;
    std::vector<const Sample*> test_samples;
    for (const auto& s : samples) {
      if (s.fold == fold) {
        test_samples.push_back(&s);
      } else {
        train_f.push_back(s.features);
        train_y.push_back(s.label);
      }
    }
    try {
      ClassifierModel model = train(train_f, train_y, config);
      for (const auto* s : test_samples) {
        test_pred.push_back(predict(model, s->features).label);
        test_gold.push_back(s->label);
      }
      report.per_fold.push_back(prf(test_pred, test_gold));
    } catch (const DataError& e) {
      throw DataError("fold " + std::to_string(fold) + ": " + e.what());
    }
  }
  report.finalize();
  return report;
}

std::vector<GridCell> run_grid(std::span<const GridDataset> datasets,
                               std::span<const GridEmbedding> embeddings,
                               std::span<const Composition> compositions,
                               std::span<const Algorithm> algorithms, int k, std::uint64_t seed,
                               const TrainConfig& base, unsigned threads) {
  struct DatasetPlan {
    const GridDataset* dataset;
    FoldPlan folds;
    std::string error;
  };
  std::vector<DatasetPlan> plans;
  for (const auto& ds : datasets) {
    DatasetPlan plan;
    plan.dataset = &ds;
    try {
      plan.folds = kfold_split(ds.pairs, k, seed);
    } catch (const std::exception& e) {
      plan.error = e.what();
    }
    plans.push_back(std::move(plan));
  }

  std::vector<GridCell> cells;
  for (const auto& plan : plans) {
    for (const auto& emb : embeddings) {
      for (Algorithm algo : algorithms) {
        for (Composition comp : compositions) {
          GridCell cell;
          cell.dataset = plan.dataset->name;
          cell.embedding = emb.name;
          cell.algorithm = algo;
          cell.composition = comp;
          cell.fold_fingerprint = plan.error.empty() ? plan.folds.fingerprint() : 0;
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  const std::size_t per_dataset = embeddings.size() * algorithms.size() * compositions.size();
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= cells.size()) return;
      GridCell& cell = cells[i];
      const DatasetPlan& plan = plans[i / per_dataset];
      if (!plan.error.empty()) {
        cell.error = plan.error;
        continue;
      }
      const EmbeddingStore* store = nullptr;
      for (const auto& emb : embeddings) {
        if (emb.name == cell.embedding) store = emb.store;
      }
      TrainConfig config = base;
      config.algorithm = cell.algorithm;
      config.composition = cell.composition;
      config.seed = seed;
      try {
        cell.report = cross_validate(plan.dataset->pairs, *store, config, plan.folds);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };

  unsigned workers = std::max(1u, threads);
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(1, cells.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::stable_sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
    bool fa = !a.error.empty(), fb = !b.error.empty();
    if (fa != fb) return !fa;
    if (fa && fb) return false;
    return a.report.mean_f1 > b.report.mean_f1;
  });
  return cells;
}

}  // namespace termite
