#include "termite/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "termite/errors.hpp"
#include "termite/util.hpp"

namespace termite {

Prf prf_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  if (tp + fn == 0) throw DataError("prf: gold sequence has no positives");
  Prf m;
  m.precision = tp + fp == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall == 0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Prf prf(std::span<const int> predictions, std::span<const int> gold) {
  if (predictions.size() != gold.size()) {
    throw DataError("prf: prediction and gold lengths differ");
  }
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] == 1 && gold[i] == 1) ++tp;
    if (predictions[i] == 1 && gold[i] == 0) ++fp;
    if (predictions[i] == 0 && gold[i] == 1) ++fn;
  }
  return prf_from_counts(tp, fp, fn);
}

std::pair<double, double> mean_sd(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

std::optional<Verdict> parse_verdict(std::string_view digit) {
  if (digit == "0") return Verdict::IRRELEVANT;
  if (digit == "1") return Verdict::RELEVANT_OUT_OF_DOMAIN;
  if (digit == "2") return Verdict::RELEVANT_IN_DOMAIN;
  return std::nullopt;
}

KappaResult cohen_kappa(std::span<const Verdict> a, std::span<const Verdict> b) {
  if (a.size() != b.size()) throw DataError("cohen_kappa: sequence lengths differ");
  if (a.empty()) throw DataError("cohen_kappa: empty sequences");
  const double n = static_cast<double>(a.size());
  double matches = 0;
  double count_a[3] = {0, 0, 0};
  double count_b[3] = {0, 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++matches;
    ++count_a[static_cast<int>(a[i])];
    ++count_b[static_cast<int>(b[i])];
  }
  KappaResult r;
  r.observed_agreement = matches / n;
  if (r.observed_agreement == 1.0) {
    r.kappa = 1.0;
    return r;
  }
  double expected = 0;
  for (int v = 0; v < 3; ++v) expected += (count_a[v] / n) * (count_b[v] / n);
  r.kappa = (r.observed_agreement - expected) / (1.0 - expected);
  return r;
}

namespace {

std::map<std::string, Verdict> index_judgments(std::span<const Judgment> js,
                                               const char* which) {
  std::map<std::string, Verdict> out;
  for (const auto& j : js) {
    if (!out.emplace(j.ngram, j.verdict).second) {
      throw DataError(std::string("duplicate judgment for \"") + j.ngram + "\" by annotator " +
                      which);
    }
  }
  return out;
}

}  // namespace

MergeOutcome merge_judgments(std::span<const Judgment> a, std::span<const Judgment> b,
                             MergeMode mode) {
  std::map<std::string, Verdict> va = index_judgments(a, "A");
  std::map<std::string, Verdict> vb = index_judgments(b, "B");

  std::vector<std::string> only_a, only_b;
  for (const auto& [ngram, v] : va) {
    if (!vb.count(ngram)) only_a.push_back(ngram);
  }
  for (const auto& [ngram, v] : vb) {
    if (!va.count(ngram)) only_b.push_back(ngram);
  }
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "judgment files cover different ngrams;";
    if (!only_a.empty()) msg += " only in A: " + join(only_a, ", ") + ";";
    if (!only_b.empty()) msg += " only in B: " + join(only_b, ", ") + ";";
    msg.pop_back();
    throw DataError(msg);
  }

  MergeOutcome out;
  for (const auto& [ngram, verdict_a] : va) {
    Verdict verdict_b = vb.at(ngram);
    bool correct;
    if (mode == MergeMode::STRICT) {
      correct = verdict_a == Verdict::RELEVANT_IN_DOMAIN &&
                verdict_b == Verdict::RELEVANT_IN_DOMAIN;
    } else {
      bool both_relevant =
          verdict_a != Verdict::IRRELEVANT && verdict_b != Verdict::IRRELEVANT;
      bool one_in_domain = verdict_a == Verdict::RELEVANT_IN_DOMAIN ||
                           verdict_b == Verdict::RELEVANT_IN_DOMAIN;
      correct = both_relevant && one_in_domain;
    }
    out.per_ngram.push_back({ngram, correct});
    if (correct) ++out.correct;
    ++out.total;
  }
  out.accuracy = out.total == 0 ? 0.0
                                : static_cast<double>(out.correct) / static_cast<double>(out.total);
  out.error_rate = 1.0 - out.accuracy;
  return out;
}

std::vector<Judgment> parse_judgments(const std::string& text, const std::string& origin) {
  std::vector<Judgment> out;
  std::vector<std::string> lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 3) {
      throw DataError(origin + ": line " + std::to_string(i + 1) +
                      ": expected ngram⟨TAB⟩annotator⟨TAB⟩verdict");
    }
    if (trim(fields[2]).empty()) {
      throw DataError(origin + ": line " + std::to_string(i + 1) + ": missing verdict for \"" +
                      fields[0] + "\"");
    }
    auto v = parse_verdict(trim(fields[2]));
    if (!v) {
      throw DataError(origin + ": line " + std::to_string(i + 1) + ": verdict must be 0, 1 or 2");
    }
    out.push_back({fields[0], fields[1], *v});
  }
  return out;
}

std::string serialize_judgments(std::span<const Judgment> judgments) {
  std::string out;
  for (const auto& j : judgments) {
    out += j.ngram;
    out += '\t';
    out += j.annotator;
    out += '\t';
    out += std::to_string(static_cast<int>(j.verdict));
    out += '\n';
  }
  return out;
}

void EvalReport::finalize() {
  std::vector<double> p, r, f;
  for (const auto& m : per_fold) {
    p.push_back(m.precision);
    r.push_back(m.recall);
    f.push_back(m.f1);
  }
  std::tie(mean_p, sd_p) = mean_sd(p);
  std::tie(mean_r, sd_r) = mean_sd(r);
  std::tie(mean_f1, sd_f1) = mean_sd(f);
}

}  // namespace termite
