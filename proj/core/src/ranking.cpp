#include "termite/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "termite/errors.hpp"

namespace termite {

double zscore(double a0, double b0, double a1, double b1, double smoothing) {
  if (b0 <= 0 || b1 <= 0) throw DataError("zscore: corpus size must be positive");
  if (a0 == 0 && a1 == 0 && smoothing > 0) {
    a0 += smoothing;
    a1 += smoothing;
  }
  double p1 = a0 / b0;
  double p2 = a1 / b1;
  double p = (a0 + a1) / (b0 + b1);
  if (p <= 0 || p >= 1) {
    throw DataError("zscore: pooled rate is degenerate (p=" + std::to_string(p) + ")");
  }
  return (p1 - p2) / std::sqrt(p * (1 - p) * (1 / b0 + 1 / b1));
}

std::vector<RankedTerm> rank_terms(std::span<const NGramCandidate> candidates,
                                   const CorpusStats& specific, const CorpusStats& generic,
                                   const RankOptions& options) {
  if (specific.total_words == 0) throw DataError("specific corpus has zero total_words");
  if (generic.total_words == 0) throw DataError("generic corpus has zero total_words");

  std::vector<RankedTerm> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    int n = static_cast<int>(c.lemmas.size());
    if (!generic.n_values.empty() && !generic.n_values.count(n)) {
      throw ConfigError("generic corpus stats do not cover n=" + std::to_string(n) +
                        " (needed by \"" + c.joined() + "\")");
    }
    RankedTerm t;
    t.ngram = c.joined();
    t.pattern = c.pattern_string();
    t.a0 = c.frequency;
    t.a1 = generic.count_of(t.ngram);
    t.b0 = specific.total_words;
    t.b1 = generic.total_words;
    double a1_eff = t.a1 == 0 ? options.smoothing : static_cast<double>(t.a1);
    try {
      t.z = zscore(static_cast<double>(t.a0), static_cast<double>(t.b0), a1_eff,
                   static_cast<double>(t.b1), options.smoothing);
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " for n-gram \"" + t.ngram + "\"");
    }
    if (!std::isfinite(t.z)) throw DataError("non-finite z for n-gram \"" + t.ngram + "\"");
    out.push_back(std::move(t));
  }

  std::sort(out.begin(), out.end(), [](const RankedTerm& x, const RankedTerm& y) {
    if (x.z != y.z) return x.z > y.z;
    if (x.a0 != y.a0) return x.a0 > y.a0;
    return x.ngram < y.ngram;
  });
  return out;
}

std::string serialize_ranked(std::span<const RankedTerm> terms) {
  std::string out = "rank\tngram\ta0\ta1\tz\n";
  char buf[64];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const RankedTerm& t = terms[i];
    std::snprintf(buf, sizeof buf, "%.6f", t.z);
    out += std::to_string(i + 1);
    out += '\t';
    out += t.ngram;
    out += '\t';
    out += std::to_string(t.a0);
    out += '\t';
    out += std::to_string(t.a1);
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace termite
