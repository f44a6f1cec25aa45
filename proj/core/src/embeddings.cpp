#include "termite/embeddings.hpp"

#include <zlib.h>

#include <cstring>

#include "termite/errors.hpp"
#include "termite/text.hpp"
#include "termite/util.hpp"

namespace termite {

namespace {

const std::set<std::string>& stop_prepositions() {
  static const std::set<std::string> kStops = {"de", "du", "des", "le", "la", "les", "l",
                                               "d",  "à",  "au",  "aux", "en", "et"};
  return kStops;
}

std::string read_maybe_gzip(const std::filesystem::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) throw DataError("cannot open vector file: " + path.string());
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  bool bad = n < 0;
  gzclose(f);
  if (bad) throw DataError("decompression failed: " + path.string());
  return out;
}

bool looks_like_header(const std::vector<std::string>& fields) {
  if (fields.size() != 2) return false;
  for (const auto& f : fields) {
    if (f.empty() || f.find_first_not_of("0123456789") != std::string::npos) return false;
  }
  return true;
}

double parse_value(const std::string& s, const std::string& origin, std::size_t lineno) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw DataError(origin + ": line " + std::to_string(lineno) + ": bad value \"" + s + "\"");
  }
  return v;
}

}  // namespace

std::string_view to_string(Composition c) {
  switch (c) {
    case Composition::CONCAT: return "concat";
    case Composition::DIFF: return "diff";
    case Composition::SUM: return "sum";
    case Composition::PRODUCT: return "product";
  }
  return "concat";
}

std::optional<Composition> parse_composition(std::string_view name) {
  if (name == "concat" || name == "CONCAT") return Composition::CONCAT;
  if (name == "diff" || name == "DIFF") return Composition::DIFF;
  if (name == "sum" || name == "SUM") return Composition::SUM;
  if (name == "product" || name == "PRODUCT") return Composition::PRODUCT;
  return std::nullopt;
}

Eigen::VectorXd compose(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Composition method) {
  if (x.size() != y.size()) {
    throw DataError("compose: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  switch (method) {
    case Composition::CONCAT: {
      Eigen::VectorXd out(x.size() + y.size());
      out << x, y;
      return out;
    }
    case Composition::DIFF: return y - x;
    case Composition::SUM: return y + x;
    case Composition::PRODUCT: return y.cwiseProduct(x);
  }
  throw DataError("compose: unknown method");
}

void EmbeddingStore::insert(std::string word, Eigen::VectorXd values) {
  if (vectors_.count(word)) {
    ++duplicates_;
    return;
  }
  std::string folded = fold_french(word);
  if (folded != word && !folded_alias_.count(folded)) folded_alias_[folded] = word;
  vectors_.emplace(std::move(word), std::move(values));
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path,
                                    const std::set<std::string>* vocab_filter) {
  const std::string origin = path.string();
  std::string content = read_maybe_gzip(path);
  if (!utf8_valid(content)) throw DataError(origin + ": not valid UTF-8");

  EmbeddingStore store;
  std::vector<std::string> lines = split(content, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::size_t start = 0;
  int declared_dim = 0;
  if (!lines.empty()) {
    std::vector<std::string> first = split_ws(lines[0]);
    if (looks_like_header(first)) {
      declared_dim = static_cast<int>(parse_value(first[1], origin, 1));
      start = 1;
    }
  }

  for (std::size_t i = start; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> fields = split_ws(lines[i]);
    if (fields.size() < 2) {
      throw DataError(origin + ": line " + std::to_string(i + 1) + ": expected word and values");
    }
    int d = static_cast<int>(fields.size()) - 1;
    if (store.dim_ == 0) {
      store.dim_ = declared_dim > 0 ? declared_dim : d;
    }
    if (d != store.dim_) {
      throw DataError(origin + ": line " + std::to_string(i + 1) + ": expected " +
                      std::to_string(store.dim_) + " values, got " + std::to_string(d));
    }
    const std::string& word = fields[0];
    if (vocab_filter && !vocab_filter->count(word) && !vocab_filter->count(fold_french(word))) {
      continue;
    }
    Eigen::VectorXd v(d);
    for (int k = 0; k < d; ++k) {
      v[k] = parse_value(fields[static_cast<std::size_t>(k) + 1], origin, i + 1);
    }
    store.insert(word, std::move(v));
  }
  return store;
}

EmbeddingStore EmbeddingStore::from_entries(
    std::vector<std::pair<std::string, Eigen::VectorXd>> entries) {
  EmbeddingStore store;
  for (auto& [word, values] : entries) {
    if (store.dim_ == 0) store.dim_ = static_cast<int>(values.size());
    if (values.size() != store.dim_) throw DataError("from_entries: dimension mismatch");
    store.insert(std::move(word), std::move(values));
  }
  return store;
}

const Eigen::VectorXd* EmbeddingStore::find(const std::string& word) const {
  auto it = vectors_.find(word);
  if (it != vectors_.end()) return &it->second;
  std::string folded = fold_french(word);
  it = vectors_.find(folded);
  if (it != vectors_.end()) return &it->second;
  auto alias = folded_alias_.find(folded);
  if (alias != folded_alias_.end()) return &vectors_.at(alias->second);
  return nullptr;
}

std::vector<std::string> term_constituents(const std::string& term) {
  std::vector<std::string> out;
  for (const auto& part : split_ws(term)) {
    std::string current;
    std::size_t i = 0;
    while (i < part.size()) {
      std::size_t len;
      std::uint32_t cp = utf8_decode(part, i, len);
      if (cp == 0x27 || cp == 0x2019) {  // ' and ’
        if (!current.empty()) out.push_back(std::move(current));
        current.clear();
      } else {
        current.append(part, i, len);
      }
      i += len;
    }
    if (!current.empty()) out.push_back(std::move(current));
  }
  return out;
}

std::optional<Eigen::VectorXd> EmbeddingStore::term_vector(const std::string& term) const {
  std::vector<std::string> parts = term_constituents(term);
  if (parts.empty()) return std::nullopt;
  if (parts.size() == 1) {
    const Eigen::VectorXd* v = find(parts[0]);
    if (!v) return std::nullopt;
    return *v;
  }
  std::vector<std::string> content;
  for (const auto& p : parts) {
    if (!stop_prepositions().count(fold_french(p))) content.push_back(p);
  }
  if (content.empty()) content = parts;

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
  int hits = 0;
  for (const auto& word : content) {
    if (const Eigen::VectorXd* v = find(word)) {
      sum += *v;
      ++hits;
    }
  }
  if (hits == 0) return std::nullopt;
  return sum / hits;
}

std::optional<PairFeatures> EmbeddingStore::pair_features(const std::string& x_term,
                                                          const std::string& y_term,
                                                          Composition method) const {
  std::optional<Eigen::VectorXd> x = term_vector(x_term);
  if (!x) return std::nullopt;
  std::optional<Eigen::VectorXd> y = term_vector(y_term);
  if (!y) return std::nullopt;
  PairFeatures f;
  f.x_term = x_term;
  f.y_term = y_term;
  f.composition = method;
  f.features = compose(*x, *y, method);
  return f;
}

std::uint64_t EmbeddingStore::fingerprint() const {
  std::uint64_t h = fnv1a64("embeddings");
  auto mix = [&h](const void* data, std::size_t len) {
    h = fnv1a64(std::string_view(static_cast<const char*>(data), len), h);
  };
  std::uint64_t dim = static_cast<std::uint64_t>(dim_);
  std::uint64_t count = vectors_.size();
  mix(&dim, sizeof dim);
  mix(&count, sizeof count);
  for (const auto& [word, values] : vectors_) {
    mix(word.data(), word.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      double v = values[i];
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      mix(&bits, sizeof bits);
    }
  }
  return h;
}

}  // namespace termite
