// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Criterion 9 needs externally downloaded datasets and is reported SKIP.

#include <mpfr.h>
#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "termite/classifier.hpp"
#include "termite/embeddings.hpp"
#include "termite/errors.hpp"
#include "termite/evidence.hpp"
#include "termite/metrics.hpp"
#include "termite/ngrams.hpp"
#include "termite/pairs.hpp"
#include "termite/ranking.hpp"
#include "termite/util.hpp"

using namespace termite;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = TERMITE_FIXTURES_DIR;
const fs::path kGolden = TERMITE_GOLDEN_DIR;
const std::string kBin = TERMITE_BIN_PATH;

int g_failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("ACCEPTANCE %d: %s (%s)\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("termite_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_stage(const std::string& stage, const fs::path& out, const std::string& extra = "") {
  std::string cmd = kBin + " " + stage + " -c " + (kFixtures / "config.json").string() +
                    " --out " + out.string() + extra + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Eqs. (1)-(4) evaluated at 256-bit precision.
double zscore_mpfr(std::uint64_t a0, std::uint64_t b0, std::uint64_t a1, std::uint64_t b1) {
  mpfr_t A0, B0, A1, B1, p1, p2, p, q, tmp, z;
  mpfr_inits2(256, A0, B0, A1, B1, p1, p2, p, q, tmp, z, (mpfr_ptr) nullptr);
  mpfr_set_ui(A0, a0, MPFR_RNDN);
  mpfr_set_ui(B0, b0, MPFR_RNDN);
  mpfr_set_ui(A1, a1, MPFR_RNDN);
  mpfr_set_ui(B1, b1, MPFR_RNDN);

  mpfr_div(p1, A0, B0, MPFR_RNDN);
  mpfr_div(p2, A1, B1, MPFR_RNDN);
  mpfr_add(p, A0, A1, MPFR_RNDN);
  mpfr_add(tmp, B0, B1, MPFR_RNDN);
  mpfr_div(p, p, tmp, MPFR_RNDN);

  mpfr_ui_sub(q, 1, p, MPFR_RNDN);       // 1 - p
  mpfr_mul(q, q, p, MPFR_RNDN);          // p (1-p)
  mpfr_ui_div(tmp, 1, B0, MPFR_RNDN);    // 1/b0
  mpfr_ui_div(z, 1, B1, MPFR_RNDN);      // 1/b1
  mpfr_add(tmp, tmp, z, MPFR_RNDN);
  mpfr_mul(q, q, tmp, MPFR_RNDN);
  mpfr_sqrt(q, q, MPFR_RNDN);

  mpfr_sub(z, p1, p2, MPFR_RNDN);
  mpfr_div(z, z, q, MPFR_RNDN);
  double out = mpfr_get_d(z, MPFR_RNDN);
  mpfr_clears(A0, B0, A1, B1, p1, p2, p, q, tmp, z, (mpfr_ptr) nullptr);
  return out;
}

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  DetRng rng(20260822);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t b0 = 10 + rng.below(1000000000ull - 9);
    std::uint64_t b1 = 10 + rng.below(1000000000ull - 9);
    std::uint64_t a0 = rng.below(b0 / 2 + 1);
    std::uint64_t a1 = rng.below(b1 / 2 + 1);
    if (a0 == 0 && a1 == 0) a0 = 1;
    double got = zscore(static_cast<double>(a0), static_cast<double>(b0),
                        static_cast<double>(a1), static_cast<double>(b1));
    double want = zscore_mpfr(a0, b0, a1, b1);
    double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    worst = std::max(worst, rel);
  }
  double elapsed = seconds_since(start);
  bool ok = worst < 1e-9 && elapsed < 1.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "1000 tuples vs 256-bit reference, max rel err %.3g (limit 1e-9), %.2fs (limit 1s)",
                worst, elapsed);
  report(1, ok, detail);
}

void criterion_2() {
  auto start = std::chrono::steady_clock::now();
  fs::path dir = fresh_dir("golden");
  bool ok = run_stage("extract", dir) == 0 && run_stage("prune", dir) == 0 &&
            run_stage("rank", dir) == 0;
  std::string mismatch;
  if (ok) {
    for (const char* name : {"candidates.tsv", "pruned.tsv", "ranked.tsv"}) {
      if (read_file(dir / name) != read_file(kGolden / name)) {
        ok = false;
        mismatch = std::string(name) + " differs from golden";
        break;
      }
    }
  } else {
    mismatch = "pipeline stage exited nonzero";
  }
  if (ok) {
    std::string candidates = read_file(dir / "candidates.tsv");
    std::string pruned = read_file(dir / "pruned.tsv");
    if (pruned.find("carte de crédit") == std::string::npos) {
      ok = false;
      mismatch = "carte de crédit missing after pruning";
    } else if (candidates.find("créditer sa carte") != std::string::npos) {
      ok = false;
      mismatch = "créditer sa carte survived the pattern filter";
    }
  }
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 5.0;
  char detail[200];
  std::snprintf(detail, sizeof detail, "%s, %.2fs (limit 5s)",
                mismatch.empty() ? "extract/prune/rank byte-equal to golden, kept/dropped pair verified"
                                 : mismatch.c_str(),
                elapsed);
  report(2, ok, detail);
}

void criterion_3() {
  auto start = std::chrono::steady_clock::now();
  CandidateFile file = parse_candidates(read_file(kGolden / "candidates.tsv"), "golden");
  FixtureProvider provider(kFixtures / "search_results.jsonl");
  bool ok = true;
  std::size_t prev = file.candidates.size() + 1;
  for (std::uint64_t t = 1; t <= 50; ++t) {
    PruneOutcome out = prune_by_evidence(file.candidates, &provider, nullptr,
                                         {t, MatchMode::OCCURRENCES, 4});
    if (out.kept.size() > prev || !out.unresolved.empty()) {
      ok = false;
      break;
    }
    prev = out.kept.size();
  }
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 5.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "threshold 1..50 sweep non-increasing over %zu candidates, %.2fs (limit 5s)",
                file.candidates.size(), elapsed);
  report(3, ok, detail);
}

void criterion_4() {
  // Contingency matrix rows A, columns B: diagonal 98+358+247 = 703 of
  // 950 items (A0 = 0.74); marginals give Ae = 6/19, so kappa = 0.62.
  const int matrix[3][3] = {{98, 0, 0}, {2, 358, 0}, {242, 3, 247}};
  std::string file_a, file_b;
  int item = 0;
  for (int va = 0; va < 3; ++va) {
    for (int vb = 0; vb < 3; ++vb) {
      for (int c = 0; c < matrix[va][vb]; ++c, ++item) {
        std::string ngram = "t" + std::to_string(item);
        file_a += ngram + "\tA\t" + std::to_string(va) + "\n";
        file_b += ngram + "\tB\t" + std::to_string(vb) + "\n";
      }
    }
  }
  fs::path dir = fresh_dir("kappa");
  write_file(dir / "a.tsv", file_a);
  write_file(dir / "b.tsv", file_b);
  auto ja = parse_judgments(read_file(dir / "a.tsv"), "a");
  auto jb = parse_judgments(read_file(dir / "b.tsv"), "b");
  std::vector<Verdict> va, vb;
  for (const auto& j : ja) va.push_back(j.verdict);
  for (const auto& j : jb) vb.push_back(j.verdict);
  KappaResult k = cohen_kappa(va, vb);
  bool ok = std::abs(k.kappa - 0.62) <= 0.005;

  DetRng rng(7);
  int flexible_wins = 0;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    std::size_t n = 5 + rng.below(40);
    std::vector<Judgment> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      std::string ngram = "n" + std::to_string(i);
      a.push_back({ngram, "A", static_cast<Verdict>(rng.below(3))});
      b.push_back({ngram, "B", static_cast<Verdict>(rng.below(3))});
    }
    MergeOutcome strict = merge_judgments(a, b, MergeMode::STRICT);
    MergeOutcome flexible = merge_judgments(a, b, MergeMode::FLEXIBLE);
    if (flexible.accuracy < strict.accuracy) ok = false;
    if (flexible.accuracy > strict.accuracy) ++flexible_wins;
  }
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "synthesized 950-item file kappa %.6f (target 0.62 +/- 0.005), "
                "flexible >= strict on 100 random files (%d strictly greater)",
                k.kappa, flexible_wins);
  report(4, ok, detail);
}

void criterion_5() {
  auto start = std::chrono::steady_clock::now();
  // fixed tiny network: 4 -> 5 -> 3 -> 1, deterministic weights
  ClassifierModel model;
  model.algorithm = Algorithm::MLP;
  DetRng rng(99);
  auto fill = [&rng](Eigen::MatrixXd& m) {
    for (int c = 0; c < m.cols(); ++c) {
      for (int r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform01() - 0.5;
    }
  };
  std::vector<std::pair<int, int>> dims = {{5, 4}, {3, 5}, {1, 3}};
  for (auto [rows, cols] : dims) {
    Eigen::MatrixXd w(rows, cols);
    fill(w);
    model.weights.push_back(w);
    Eigen::MatrixXd b(rows, 1);
    fill(b);
    model.biases.push_back(b.col(0));
  }
  Eigen::MatrixXd X(4, 8);
  fill(X);
  X *= 2.0;
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) y[i] = i % 2;

  Gradients grads = loss_gradients(model, X, y);
  double worst = 0;
  const double h = 1e-6;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (int r = 0; r < model.weights[l].rows(); ++r) {
      for (int c = 0; c < model.weights[l].cols(); ++c) {
        ClassifierModel plus = model, minus = model;
        plus.weights[l](r, c) += h;
        minus.weights[l](r, c) -= h;
        double numeric = (evaluate_loss(plus, X, y) - evaluate_loss(minus, X, y)) / (2 * h);
        double analytic = grads.dW[l](r, c);
        double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-10});
        worst = std::max(worst, std::abs(numeric - analytic) / denom);
      }
    }
    for (int r = 0; r < model.biases[l].size(); ++r) {
      ClassifierModel plus = model, minus = model;
      plus.biases[l][r] += h;
      minus.biases[l][r] -= h;
      double numeric = (evaluate_loss(plus, X, y) - evaluate_loss(minus, X, y)) / (2 * h);
      double analytic = grads.db[l][r];
      double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-10});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  double elapsed = seconds_since(start);
  bool ok = worst < 1e-5 && elapsed < 10.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "backprop vs central differences, max rel err %.3g (limit 1e-5), %.2fs (limit 10s)",
                worst, elapsed);
  report(5, ok, detail);
}

void criterion_6() {
  auto start = std::chrono::steady_clock::now();
  const int dim = 50;
  DetRng rng(606);
  auto random_vec = [&rng](int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = 2.0 * rng.uniform01() - 1.0;
    return v;
  };
  Eigen::VectorXd direction = random_vec(dim) * 2.0;  // the planted rule

  std::vector<std::pair<std::string, Eigen::VectorXd>> entries;
  std::vector<TermPair> pairs;
  for (int i = 0; i < 500; ++i) {
    std::string xp = "p" + std::to_string(i) + "x";
    std::string yp = "p" + std::to_string(i) + "y";
    Eigen::VectorXd base = random_vec(dim);
    entries.push_back({xp, base});
    entries.push_back({yp, base + direction + 0.1 * random_vec(dim)});
    pairs.push_back({xp, yp, PairLabel::POSITIVE, "synthetic"});

    std::string xn = "n" + std::to_string(i) + "x";
    std::string yn = "n" + std::to_string(i) + "y";
    entries.push_back({xn, random_vec(dim)});
    entries.push_back({yn, random_vec(dim)});
    pairs.push_back({xn, yn, PairLabel::NEGATIVE, "synthetic"});
  }
  EmbeddingStore store = EmbeddingStore::from_entries(std::move(entries));

  TrainConfig config;  // the published defaults: 100x100, batch 32, <=100 epochs
  config.algorithm = Algorithm::MLP;
  config.composition = Composition::DIFF;
  FoldPlan folds = kfold_split(pairs, 5, 42);
  EvalReport eval = cross_validate(pairs, store, config, folds);

  double elapsed = seconds_since(start);
  bool ok = eval.mean_f1 >= 95.0 && eval.sd_f1 <= 3.0 && eval.excluded == 0 && elapsed < 60.0;
  char detail[180];
  std::snprintf(detail, sizeof detail,
                "planted-direction 5-fold MLP+DIFF mean F1 %.2f (need >= 95), sd %.2f (need <= 3), "
                "%.1fs (limit 60s)",
                eval.mean_f1, eval.sd_f1, elapsed);
  report(6, ok, detail);
}

void criterion_7() {
  fs::path a = fresh_dir("det_a");
  fs::path b = fresh_dir("det_b");
  bool ok = true;
  for (const fs::path& dir : {a, b}) {
    ok = ok && run_stage("pairs", dir) == 0 && run_stage("grid", dir) == 0 &&
         run_stage("train", dir,
                   " --dataset toy --embedding toy10 --algorithm mlp --composition diff") == 0;
  }
  std::string mismatch;
  if (ok) {
    for (const char* name :
         {"grid_report.json", "grid_report.tsv", "pairs_toy.csv", "pairs_toypos.csv",
          "train_toy_toy10_mlp_diff.json", "models/toy_toy10_mlp_diff.tmodel"}) {
      if (read_file(a / name) != read_file(b / name)) {
        ok = false;
        mismatch = std::string(name) + " differs between runs";
        break;
      }
    }
  } else {
    mismatch = "a stage exited nonzero";
  }
  report(7, ok,
         ok ? "two grid+train runs byte-identical (reports, pair files, model file)" : mismatch);
}

void criterion_8() {
  auto start = std::chrono::steady_clock::now();
  DetRng rng(808);
  bool ok = true;
  std::string what;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    // >= 2 hypernyms and distinct hyponyms keep the balance reachable
    std::size_t n_hyper = 2 + rng.below(7);
    std::size_t n_pos = 5 + rng.below(36);
    std::vector<TermPair> positives;
    for (std::size_t i = 0; i < n_pos; ++i) {
      std::string x = "w" + std::to_string(trial) + "_" + std::to_string(i);
      std::string h = "h" + std::to_string(i < 2 ? i : rng.below(n_hyper));
      positives.push_back({x, h, PairLabel::POSITIVE, "rand"});
    }
    std::uint64_t seed = rng.next();

    auto negs = generate_negatives(positives, seed);
    auto again = generate_negatives(positives, seed);
    if (negs.size() != positives.size()) {
      ok = false;
      what = "negative set not balanced";
      break;
    }
    if (negs != again) {
      ok = false;
      what = "generation not seed-reproducible";
      break;
    }
    std::set<std::pair<std::string, std::string>> pos_keys, neg_keys;
    for (const auto& p : positives) pos_keys.insert({p.x, p.y});
    for (const auto& p : negs) {
      if (pos_keys.count({p.x, p.y}) || p.x == p.y || !neg_keys.insert({p.x, p.y}).second ||
          p.label != PairLabel::NEGATIVE) {
        ok = false;
        what = "invalid negative couple";
        break;
      }
    }
    if (!ok) break;

    std::vector<TermPair> all(positives.begin(), positives.end());
    all.insert(all.end(), negs.begin(), negs.end());
    int k = 2 + static_cast<int>(rng.below(std::min<std::uint64_t>(9, all.size() - 1)));
    FoldPlan plan = kfold_split(all, k, seed);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> pos_sizes(static_cast<std::size_t>(k), 0);
    for (const auto& p : all) {
      int f = plan.fold_of(p);
      if (f < 0 || f >= k) {
        ok = false;
        what = "fold index out of range";
        break;
      }
      ++sizes[static_cast<std::size_t>(f)];
      if (p.label == PairLabel::POSITIVE) ++pos_sizes[static_cast<std::size_t>(f)];
    }
    if (!ok) break;
    auto spread = [](const std::vector<std::size_t>& v) {
      auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return *hi - *lo;
    };
    std::vector<std::size_t> neg_sizes(sizes.size());
    for (std::size_t f = 0; f < sizes.size(); ++f) neg_sizes[f] = sizes[f] - pos_sizes[f];
    std::size_t total = 0;
    for (std::size_t s : sizes) total += s;
    if (total != all.size() || spread(sizes) > 1 || spread(pos_sizes) > 1 ||
        spread(neg_sizes) > 1) {
      ok = false;
      what = "partition or stratification violated";
    }
  }
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 10.0;
  char detail[180];
  std::snprintf(detail, sizeof detail, "%s, %.2fs (limit 10s)",
                ok ? "balance/overlap/reproducibility + fold invariants on 200 random datasets"
                   : what.c_str(),
                elapsed);
  report(8, ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("ACCEPTANCE 9: SKIP (optional paper-scale reproduction; needs externally "
              "downloaded BLESS pairs and pretrained vectors)\n");
  if (g_failures > 0) {
    std::printf("acceptance: %d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("acceptance: all criteria passed\n");
  return 0;
}
