// Microbenchmarks for the hot paths: window counting, the ranking
// statistic, evidence matching, one network gradient step, fold planning.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "termite/classifier.hpp"
#include "termite/evidence.hpp"
#include "termite/ngrams.hpp"
#include "termite/pairs.hpp"
#include "termite/ranking.hpp"
#include "termite/util.hpp"

namespace {

using namespace termite;

std::vector<TaggedDocument> synthetic_corpus(std::size_t docs, std::size_t tokens_per_doc) {
  DetRng rng(4242);
  std::vector<std::string> vocab;
  for (int i = 0; i < 50; ++i) vocab.push_back("mot" + std::to_string(i));
  std::vector<TaggedDocument> corpus;
  for (std::size_t d = 0; d < docs; ++d) {
    TaggedDocument doc;
    doc.id = "doc" + std::to_string(d);
    for (std::size_t t = 0; t < tokens_per_doc; ++t) {
      if (t > 0 && t % 15 == 0) {
        doc.tokens.push_back({"<SENT>", "<SENT>", PosTag::OTHER, true});
        continue;
      }
      const std::string& w = vocab[rng.below(vocab.size())];
      doc.tokens.push_back({w, w, rng.below(2) ? PosTag::NOUN : PosTag::ADJ, false});
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

void BM_corpus_stats(benchmark::State& state) {
  auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 200);
  std::set<int> n_values = {1, 2, 3};
  for (auto _ : state) {
    CorpusStats stats = corpus_stats(corpus, n_values);
    benchmark::DoNotOptimize(stats.total_words);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_corpus_stats)->Arg(10)->Arg(100);

void BM_zscore(benchmark::State& state) {
  DetRng rng(7);
  std::vector<std::array<double, 4>> tuples;
  for (int i = 0; i < 1000; ++i) {
    double b0 = 1000 + static_cast<double>(rng.below(1000000));
    double b1 = 1000 + static_cast<double>(rng.below(1000000));
    tuples.push_back({1 + static_cast<double>(rng.below(500)), b0,
                      1 + static_cast<double>(rng.below(500)), b1});
  }
  for (auto _ : state) {
    double sum = 0;
    for (const auto& t : tuples) sum += zscore(t[0], t[1], t[2], t[3]);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tuples.size()));
}
BENCHMARK(BM_zscore);

void BM_count_exact_matches(benchmark::State& state) {
  std::vector<SearchResult> results;
  for (int i = 0; i < 20; ++i) {
    results.push_back({"Le mur porteur et la dalle " + std::to_string(i),
                       "Un mur porteur reprend les charges; le Mur Porteur du gros œuvre "
                       "n'est pas une cloison, murmure le maçon près du mur.",
                       "https://example.test/" + std::to_string(i)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_exact_matches("mur porteur", results));
  }
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_count_exact_matches);

void BM_mlp_gradient(benchmark::State& state) {
  DetRng rng(99);
  ClassifierModel model;
  model.algorithm = Algorithm::MLP;
  std::vector<std::pair<int, int>> dims = {{100, 100}, {100, 100}, {1, 100}};
  for (auto [rows, cols] : dims) {
    Eigen::MatrixXd w(rows, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) w(r, c) = rng.uniform01() - 0.5;
    }
    model.weights.push_back(w);
    model.biases.push_back(Eigen::VectorXd::Zero(rows));
  }
  Eigen::MatrixXd X(100, 32);
  for (int c = 0; c < X.cols(); ++c) {
    for (int r = 0; r < X.rows(); ++r) X(r, c) = rng.uniform01() - 0.5;
  }
  Eigen::VectorXd y(32);
  for (int i = 0; i < 32; ++i) y[i] = i % 2;
  for (auto _ : state) {
    Gradients g = loss_gradients(model, X, y);
    benchmark::DoNotOptimize(g.dW.back()(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_mlp_gradient);

void BM_kfold(benchmark::State& state) {
  DetRng rng(11);
  std::vector<TermPair> pairs;
  for (int i = 0; i < 2000; ++i) {
    pairs.push_back({"x" + std::to_string(i), "y" + std::to_string(rng.below(200)),
                     i % 2 ? PairLabel::POSITIVE : PairLabel::NEGATIVE, "bench"});
  }
  for (auto _ : state) {
    FoldPlan plan = kfold_split(pairs, 10, 42);
    benchmark::DoNotOptimize(plan.fingerprint());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size()));
}
BENCHMARK(BM_kfold);

}  // namespace

BENCHMARK_MAIN();
