#include "termite/pairs.hpp"

#include <algorithm>

#include "termite/errors.hpp"
#include "termite/util.hpp"

namespace termite {

namespace {

[[noreturn]] void row_error(const std::string& origin, std::size_t lineno,
                            const std::string& what) {
  throw DataError(origin + ": row " + std::to_string(lineno) + ": " + what);
}

// Strips BLESS part-of-speech suffixes like "alligator-n".
std::string strip_pos_suffix(std::string term) {
  if (term.size() > 2 && term[term.size() - 2] == '-') {
    char c = term.back();
    if (c == 'n' || c == 'v' || c == 'j' || c == 'a') term.resize(term.size() - 2);
  }
  return term;
}

enum class BlessOutcome { POSITIVE, NEGATIVE, DROPPED };

BlessOutcome classify_bless(const std::string& relation) {
  if (relation == "hyper") return BlessOutcome::POSITIVE;
  if (relation == "coord" || relation == "mero" || relation == "attri" || relation == "event") {
    return BlessOutcome::NEGATIVE;
  }
  return BlessOutcome::DROPPED;  // random-n / random-j / random-v and stray relations
}

void add_pair(LoadedPairs& out, std::set<std::pair<std::string, std::string>>& seen,
              TermPair pair, const std::string& origin, std::size_t lineno) {
  if (pair.x.empty() || pair.y.empty()) row_error(origin, lineno, "empty term");
  if (pair.x == pair.y) row_error(origin, lineno, "x equals y (\"" + pair.x + "\")");
  if (!seen.insert({pair.x, pair.y}).second) {
    ++out.duplicates;
    return;
  }
  out.pairs.push_back(std::move(pair));
}

}  // namespace

std::string_view to_string(PairFormat f) {
  switch (f) {
    case PairFormat::BLESS: return "bless";
    case PairFormat::EVALUTION: return "evalution";
    case PairFormat::VOCAGEN_CSV: return "vocagen";
  }
  return "bless";
}

std::optional<PairFormat> parse_pair_format(std::string_view name) {
  if (name == "bless" || name == "BLESS") return PairFormat::BLESS;
  if (name == "evalution" || name == "EVALUTION" || name == "EVALution") {
    return PairFormat::EVALUTION;
  }
  if (name == "vocagen" || name == "VOCAGEN_CSV" || name == "vocagen_csv") {
    return PairFormat::VOCAGEN_CSV;
  }
  return std::nullopt;
}

std::vector<std::string> parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
    ++i;
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

LoadedPairs parse_pairs(const std::string& text, PairFormat format, const std::string& origin) {
  LoadedPairs out;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  const std::string source{to_string(format)};

  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::size_t lineno = i + 1;

    switch (format) {
      case PairFormat::BLESS: {
        std::vector<std::string> f = split(line, '\t');
        std::string hyponym, relation, relatum;
        if (f.size() == 4) {
          hyponym = strip_pos_suffix(f[0]);
          relation = f[2];
          relatum = strip_pos_suffix(f[3]);
        } else if (f.size() == 3) {
          hyponym = strip_pos_suffix(f[0]);
          relation = f[1];
          relatum = strip_pos_suffix(f[2]);
        } else if (f.size() == 1) {
          std::vector<std::string> parts = split(std::string(trimmed), '-');
          if (parts.size() != 3) row_error(origin, lineno, "expected x-relation-y");
          hyponym = parts[0];
          relation = parts[1];
          relatum = parts[2];
        } else {
          row_error(origin, lineno, "expected 1, 3 or 4 tab-separated fields");
        }
        switch (classify_bless(relation)) {
          case BlessOutcome::POSITIVE:
            add_pair(out, seen, {hyponym, relatum, PairLabel::POSITIVE, source}, origin, lineno);
            break;
          case BlessOutcome::NEGATIVE:
            add_pair(out, seen, {hyponym, relatum, PairLabel::NEGATIVE, source}, origin, lineno);
            break;
          case BlessOutcome::DROPPED:
            ++out.dropped_rows;
            break;
        }
        break;
      }
      case PairFormat::EVALUTION: {
        std::vector<std::string> f = split(line, '\t');
        if (f.size() < 3) row_error(origin, lineno, "expected x⟨TAB⟩relation⟨TAB⟩y");
        if (f[1] == "IsA") {
          add_pair(out, seen, {f[0], f[2], PairLabel::POSITIVE, source}, origin, lineno);
        } else {
          ++out.dropped_rows;
        }
        break;
      }
      case PairFormat::VOCAGEN_CSV: {
        std::vector<std::string> f = parse_csv_row(line);
        if (!header_seen) {
          header_seen = true;
          if (f.size() >= 3 && f[0] == "x" && f[1] == "y") continue;  // header row
          row_error(origin, lineno, "expected header \"x,y,label\"");
        }
        if (f.size() != 3) row_error(origin, lineno, "expected 3 comma-separated fields");
        PairLabel label;
        if (f[2] == "positive" || f[2] == "1") {
          label = PairLabel::POSITIVE;
        } else if (f[2] == "negative" || f[2] == "0") {
          label = PairLabel::NEGATIVE;
        } else {
          row_error(origin, lineno, "unknown label \"" + f[2] + "\"");
        }
        add_pair(out, seen, {f[0], f[1], label, source}, origin, lineno);
        break;
      }
    }
  }
  return out;
}

LoadedPairs load_pairs(const std::filesystem::path& path, PairFormat format) {
  return parse_pairs(read_file(path), format, path.string());
}

std::string serialize_pairs(std::span<const TermPair> pairs) {
  std::vector<const TermPair*> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) rows.push_back(&p);
  std::sort(rows.begin(), rows.end(), [](const TermPair* a, const TermPair* b) {
    if (a->x != b->x) return a->x < b->x;
    return a->y < b->y;
  });
  std::string out = "x,y,label\n";
  for (const auto* p : rows) {
    out += csv_field(p->x);
    out += ',';
    out += csv_field(p->y);
    out += ',';
    out += p->label == PairLabel::POSITIVE ? "positive" : "negative";
    out += '\n';
  }
  return out;
}

std::set<std::pair<std::string, std::string>> load_exclusions(
    const std::filesystem::path& path) {
  std::set<std::pair<std::string, std::string>> out;
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view trimmed = trim(lines[i]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string> f = parse_csv_row(std::string(trimmed));
    if (f.size() != 2) {
      throw DataError(path.string() + ": row " + std::to_string(i + 1) + ": expected x,y");
    }
    out.insert({f[0], f[1]});
  }
  return out;
}

ExclusionResult apply_exclusions(std::span<const TermPair> pairs,
                                 const std::set<std::pair<std::string, std::string>>& excluded) {
  ExclusionResult out;
  for (const auto& p : pairs) {
    if (excluded.count({p.x, p.y})) {
      ++out.excluded;
    } else {
      out.pairs.push_back(p);
    }
  }
  return out;
}

std::vector<TermPair> generate_negatives(std::span<const TermPair> positives,
                                         std::uint64_t seed) {
  if (positives.empty()) throw DataError("generate_negatives: no positive pairs");

  std::set<std::string> vocab_set;
  std::set<std::pair<std::string, std::string>> positive_keys;
  std::map<std::string, std::uint64_t> hypernym_counts;
  for (const auto& p : positives) {
    vocab_set.insert(p.x);
    vocab_set.insert(p.y);
    positive_keys.insert({p.x, p.y});
    ++hypernym_counts[p.y];
  }
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());

  // Hypernyms ordered by positive count (descending), then name; quota
  // remainders and redistribution both walk this order.
  std::vector<std::string> hypernyms;
  hypernyms.reserve(hypernym_counts.size());
  for (const auto& [h, count] : hypernym_counts) hypernyms.push_back(h);
  std::sort(hypernyms.begin(), hypernyms.end(), [&](const std::string& a, const std::string& b) {
    if (hypernym_counts[a] != hypernym_counts[b]) {
      return hypernym_counts[a] > hypernym_counts[b];
    }
    return a < b;
  });

  const std::uint64_t target = positives.size();
  const std::uint64_t base = target / hypernyms.size();
  const std::uint64_t remainder = target % hypernyms.size();

  struct Group {
    std::string hypernym;
    std::vector<std::string> pool;  // eligible words, sorted
    std::uint64_t quota = 0;
    std::size_t drawn = 0;  // pool[0..drawn) are taken
  };
  std::vector<Group> groups;
  groups.reserve(hypernyms.size());
  std::uint64_t achievable = 0;
  for (std::size_t i = 0; i < hypernyms.size(); ++i) {
    Group g;
    g.hypernym = hypernyms[i];
    for (const auto& w : vocab) {
      if (w != g.hypernym && !positive_keys.count({w, g.hypernym})) g.pool.push_back(w);
    }
    g.quota = base + (i < remainder ? 1 : 0);
    achievable += g.pool.size();
    groups.push_back(std::move(g));
  }
  if (achievable < target) {
    throw DataError("generate_negatives: only " + std::to_string(achievable) +
                    " distinct couples possible, need " + std::to_string(target));
  }

  DetRng rng(seed);
  auto draw = [&rng](Group& g, std::uint64_t count) {
    std::uint64_t taken = 0;
    while (taken < count && g.drawn < g.pool.size()) {
      std::size_t j = g.drawn + static_cast<std::size_t>(rng.below(g.pool.size() - g.drawn));
      std::swap(g.pool[g.drawn], g.pool[j]);
      ++g.drawn;
      ++taken;
    }
    return taken;
  };

  std::uint64_t generated = 0;
  for (auto& g : groups) generated += draw(g, g.quota);
  for (auto& g : groups) {
    if (generated >= target) break;
    generated += draw(g, target - generated);
  }

  const std::string source = positives.front().source;
  std::vector<TermPair> out;
  out.reserve(target);
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.drawn; ++i) {
      out.push_back({g.pool[i], g.hypernym, PairLabel::NEGATIVE, source});
    }
  }
  return out;
}

int FoldPlan::fold_of(const TermPair& p) const {
  auto it = assignments.find({p.x, p.y});
  if (it == assignments.end()) {
    throw DataError("fold plan does not cover pair (" + p.x + ", " + p.y + ")");
  }
  return it->second;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (const auto& [key, fold] : assignments) ++sizes[static_cast<std::size_t>(fold)];
  return sizes;
}

std::uint64_t FoldPlan::fingerprint() const {
  std::uint64_t h = fnv1a64("foldplan");
  h = fnv1a64(std::to_string(k), h);
  h = fnv1a64(std::to_string(seed), h);
  for (const auto& [key, fold] : assignments) {
    h = fnv1a64(key.first, h);
    h = fnv1a64("\t", h);
    h = fnv1a64(key.second, h);
    h = fnv1a64("\t" + std::to_string(fold) + "\n", h);
  }
  return h;
}

FoldPlan kfold_split(std::span<const TermPair> pairs, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("kfold_split: k must be at least 2");
  if (pairs.size() < static_cast<std::size_t>(k)) {
    throw DataError("kfold_split: k=" + std::to_string(k) + " exceeds " +
                    std::to_string(pairs.size()) + " pairs");
  }

  std::vector<const TermPair*> sorted;
  sorted.reserve(pairs.size());
  for (const auto& p : pairs) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const TermPair* a, const TermPair* b) {
    if (a->x != b->x) return a->x < b->x;
    return a->y < b->y;
  });

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;

  DetRng rng(seed);
  std::size_t cursor = 0;
  for (PairLabel label : {PairLabel::POSITIVE, PairLabel::NEGATIVE}) {
    std::vector<const TermPair*> group;
    for (const auto* p : sorted) {
      if (p->label == label) group.push_back(p);
    }
    rng.shuffle(group);
    for (const auto* p : group) {
      plan.assignments[{p->x, p->y}] = static_cast<int>(cursor % static_cast<std::size_t>(k));
      ++cursor;
    }
  }
  return plan;
}

}  // namespace termite
