#include "termite/ngrams.hpp"

#include <algorithm>
#include <thread>

#include "termite/errors.hpp"
#include "termite/util.hpp"

namespace termite {

namespace {

int order_of(const std::string& joined) {
  return 1 + static_cast<int>(std::count(joined.begin(), joined.end(), ' '));
}

std::uint64_t parse_count(const std::string& s, const std::string& origin, std::size_t lineno) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw DataError(origin + ": line " + std::to_string(lineno) + ": bad count \"" + s + "\"");
  }
  return std::stoull(s);
}

std::vector<PosTag> parse_pattern(const std::string& tags, const std::string& origin,
                                  std::size_t lineno) {
  std::vector<PosTag> out;
  for (const auto& name : split_ws(tags)) {
    auto t = parse_tag(name);
    if (!t) {
      throw DataError(origin + ": line " + std::to_string(lineno) + ": unknown tag \"" + name +
                      "\"");
    }
    out.push_back(*t);
  }
  return out;
}

void count_into(const TaggedDocument& doc, const std::set<int>& n_values, CorpusStats& stats) {
  const auto& toks = doc.tokens;
  std::size_t run_start = 0;
  for (std::size_t i = 0; i <= toks.size(); ++i) {
    if (i < toks.size() && !is_marker(toks[i])) continue;
    std::size_t run_len = i - run_start;
    stats.total_words += run_len;
    for (int n : n_values) {
      if (run_len < static_cast<std::size_t>(n)) continue;
      for (std::size_t w = run_start; w + n <= i; ++w) {
        std::string key = toks[w].lemma;
        std::string tags(to_string(toks[w].pos));
        for (int k = 1; k < n; ++k) {
          key += ' ';
          key += toks[w + k].lemma;
          tags += ' ';
          tags += to_string(toks[w + k].pos);
        }
        StatsEntry& e = stats.freq[key];
        ++e.count;
        ++e.tag_votes[tags];
      }
    }
    run_start = i + 1;
  }
}

std::string majority_tags(const StatsEntry& e) {
  std::string best;
  std::uint64_t best_count = 0;
  for (const auto& [tags, count] : e.tag_votes) {
    if (count > best_count) {  // map order makes ties resolve to the smallest sequence
      best = tags;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

std::string NGramCandidate::joined() const { return join(lemmas, " "); }

std::string NGramCandidate::pattern_string() const {
  std::string out;
  for (std::size_t i = 0; i < pos_pattern.size(); ++i) {
    if (i) out += ' ';
    out += to_string(pos_pattern[i]);
  }
  return out;
}

std::uint64_t CorpusStats::count_of(const std::string& joined) const {
  auto it = freq.find(joined);
  return it == freq.end() ? 0 : it->second.count;
}

CorpusStats corpus_stats(std::span<const TaggedDocument> docs, const std::set<int>& n_values) {
  CorpusStats stats;
  stats.n_values = n_values;
  for (const auto& doc : docs) count_into(doc, n_values, stats);
  if (stats.total_words == 0) throw DataError("empty corpus");
  return stats;
}

CorpusStats corpus_stats_parallel(std::span<const TaggedDocument> docs,
                                  const std::set<int>& n_values, unsigned threads) {
  if (threads < 2 || docs.size() < 2) return corpus_stats(docs, n_values);
  unsigned shards = std::min<unsigned>(threads, static_cast<unsigned>(docs.size()));
  std::vector<CorpusStats> partial(shards);
  std::vector<std::thread> pool;
  pool.reserve(shards);
  for (unsigned s = 0; s < shards; ++s) {
    pool.emplace_back([&, s] {
      partial[s].n_values = n_values;
      for (std::size_t i = s; i < docs.size(); i += shards) {
        count_into(docs[i], n_values, partial[s]);
      }
    });
  }
  for (auto& t : pool) t.join();
  CorpusStats merged = std::move(partial[0]);
  for (unsigned s = 1; s < shards; ++s) merged = merge_stats(merged, partial[s]);
  if (merged.total_words == 0) throw DataError("empty corpus");
  return merged;
}

CorpusStats merge_stats(const CorpusStats& a, const CorpusStats& b) {
  if (a.n_values != b.n_values) throw DataError("merge_stats: n_values differ");
  CorpusStats out = a;
  out.total_words += b.total_words;
  for (const auto& [key, entry] : b.freq) {
    StatsEntry& e = out.freq[key];
    e.count += entry.count;
    for (const auto& [tags, count] : entry.tag_votes) e.tag_votes[tags] += count;
  }
  return out;
}

std::vector<NGramCandidate> candidates_from(const CorpusStats& stats,
                                            std::uint64_t min_frequency) {
  std::vector<NGramCandidate> out;
  for (const auto& [key, entry] : stats.freq) {
    if (entry.count < min_frequency) continue;
    NGramCandidate c;
    c.lemmas = split_ws(key);
    c.frequency = entry.count;
    std::string tags = majority_tags(entry);
    if (tags.empty()) {
      c.pos_pattern.assign(c.lemmas.size(), PosTag::OTHER);
    } else {
      for (const auto& name : split_ws(tags)) c.pos_pattern.push_back(*parse_tag(name));
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const NGramCandidate& x, const NGramCandidate& y) {
    if (x.lemmas.size() != y.lemmas.size()) return x.lemmas.size() < y.lemmas.size();
    return x.lemmas < y.lemmas;
  });
  return out;
}

std::vector<NGramCandidate> extract_ngrams(std::span<const TaggedDocument> docs,
                                           const std::set<int>& n_values,
                                           std::uint64_t min_frequency) {
  CorpusStats stats;
  stats.n_values = n_values;
  for (const auto& doc : docs) count_into(doc, n_values, stats);
  if (stats.total_words == 0) return {};
  return candidates_from(stats, min_frequency);
}

std::string serialize_stats(const CorpusStats& stats) {
  std::vector<std::pair<int, const std::map<std::string, StatsEntry>::value_type*>> rows;
  rows.reserve(stats.freq.size());
  for (const auto& kv : stats.freq) rows.push_back({order_of(kv.first), &kv});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->first < b.second->first;
  });
  std::string out = "total_words\t" + std::to_string(stats.total_words) + "\n";
  for (const auto& [n, kv] : rows) {
    std::string tags = majority_tags(kv->second);
    out += std::to_string(n);
    out += '\t';
    out += kv->first;
    out += '\t';
    out += tags.empty() ? "-" : tags;
    out += '\t';
    out += std::to_string(kv->second.count);
    out += '\n';
  }
  return out;
}

CorpusStats parse_stats(const std::string& text, const std::string& origin) {
  CorpusStats stats;
  bool saw_total = false;
  std::vector<std::string> lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() == 2 && fields[0] == "total_words") {
      stats.total_words = parse_count(fields[1], origin, i + 1);
      saw_total = true;
      continue;
    }
    if (fields.size() != 4) {
      throw DataError(origin + ": line " + std::to_string(i + 1) +
                      ": expected 4 tab-separated fields");
    }
    int n = static_cast<int>(parse_count(fields[0], origin, i + 1));
    std::string key = join(split_ws(fields[1]), " ");
    if (order_of(key) != n || key.empty()) {
      throw DataError(origin + ": line " + std::to_string(i + 1) + ": n does not match lemmas");
    }
    StatsEntry& e = stats.freq[key];
    e.count = parse_count(fields[3], origin, i + 1);
    if (fields[2] != "-") {
      parse_pattern(fields[2], origin, i + 1);  // validates tag names
      e.tag_votes[join(split_ws(fields[2]), " ")] = e.count;
    }
    stats.n_values.insert(n);
  }
  if (!saw_total) throw DataError(origin + ": missing total_words header");
  for (const auto& [key, entry] : stats.freq) {
    if (entry.count > stats.total_words) {
      throw DataError(origin + ": frequency of \"" + key + "\" exceeds total_words");
    }
  }
  return stats;
}

std::string serialize_candidates(std::span<const NGramCandidate> candidates,
                                 std::uint64_t total_words) {
  std::vector<const NGramCandidate*> rows;
  rows.reserve(candidates.size());
  for (const auto& c : candidates) rows.push_back(&c);
  std::sort(rows.begin(), rows.end(), [](const NGramCandidate* a, const NGramCandidate* b) {
    if (a->lemmas.size() != b->lemmas.size()) return a->lemmas.size() < b->lemmas.size();
    return a->lemmas < b->lemmas;
  });
  std::string out = "total_words\t" + std::to_string(total_words) + "\n";
  for (const auto* c : rows) {
    out += std::to_string(c->lemmas.size());
    out += '\t';
    out += c->joined();
    out += '\t';
    out += c->pattern_string();
    out += '\t';
    out += std::to_string(c->frequency);
    out += '\n';
  }
  return out;
}

CandidateFile parse_candidates(const std::string& text, const std::string& origin) {
  CandidateFile out;
  bool saw_total = false;
  std::vector<std::string> lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() == 2 && fields[0] == "total_words") {
      out.total_words = parse_count(fields[1], origin, i + 1);
      saw_total = true;
      continue;
    }
    if (fields.size() != 4 && fields.size() != 5) {
      throw DataError(origin + ": line " + std::to_string(i + 1) +
                      ": expected 4 or 5 tab-separated fields");
    }
    // A fifth column (the evidence match count written by pruning) is ignored.
    NGramCandidate c;
    c.lemmas = split_ws(fields[1]);
    c.pos_pattern = parse_pattern(fields[2], origin, i + 1);
    c.frequency = parse_count(fields[3], origin, i + 1);
    std::size_t n = parse_count(fields[0], origin, i + 1);
    if (c.lemmas.empty() || c.lemmas.size() != n || c.pos_pattern.size() != n) {
      throw DataError(origin + ": line " + std::to_string(i + 1) + ": column arity mismatch");
    }
    out.candidates.push_back(std::move(c));
  }
  if (!saw_total) throw DataError(origin + ": missing total_words header");
  return out;
}

}  // namespace termite
