#include "termite/config.hpp"

#include <algorithm>

#include "nlohmann/json.hpp"
#include "termite/errors.hpp"
#include "termite/util.hpp"
#include "termite/version.hpp"

namespace termite {

namespace {

using nlohmann::json;

json* navigate(json& root, const std::string& dotted, bool create) {
  json* node = &root;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = dotted.find('.', pos);
    std::string key = dotted.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) return nullptr;
    if (dot == std::string::npos) {
      if (!node->is_object()) return nullptr;
      if (!create && !node->contains(key)) return nullptr;
      return &(*node)[key];
    }
    if (!node->is_object()) return nullptr;
    if (!node->contains(key)) {
      if (!create) return nullptr;
      (*node)[key] = json::object();
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

// Overrides arrive as strings; coerce to the JSON type already present,
// falling back to bool/number/string sniffing for fresh keys.
json coerce(const std::string& value, const json* existing) {
  if (existing != nullptr && !existing->is_null()) {
    try {
      if (existing->is_boolean()) {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw ConfigError("expected a boolean, got \"" + value + "\"");
      }
      if (existing->is_number_unsigned()) return std::stoull(value);
      if (existing->is_number_integer()) return std::stoll(value);
      if (existing->is_number_float()) return std::stod(value);
    } catch (const std::invalid_argument&) {
      throw ConfigError("expected a number, got \"" + value + "\"");
    } catch (const std::out_of_range&) {
      throw ConfigError("number out of range: \"" + value + "\"");
    }
    return value;
  }
  if (value == "true") return true;
  if (value == "false") return false;
  if (!value.empty() && value.find_first_not_of("0123456789") == std::string::npos) {
    return std::stoull(value);
  }
  return value;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return p.lexically_normal();
  return (base / p).lexically_normal();
}

template <typename T>
T get_typed(const json& node, const std::string& key, T fallback) {
  if (!node.contains(key) || node[key].is_null()) return fallback;
  try {
    return node[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + key + "\" has the wrong type");
  }
}

void check_keys(const json& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!node.is_object()) throw ConfigError("config section \"" + where + "\" must be an object");
  for (const auto& [key, value] : node.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("unknown config key \"" + where + "." + key + "\"");
    }
  }
}

}  // namespace

const DatasetConfig& PipelineConfig::dataset(const std::string& name) const {
  for (const auto& d : datasets) {
    if (d.name == name) return d;
  }
  throw ConfigError("no dataset named \"" + name + "\" in config");
}

const EmbeddingConfig& PipelineConfig::embedding(const std::string& name) const {
  for (const auto& e : embeddings) {
    if (e.name == name) return e;
  }
  throw ConfigError("no embedding named \"" + name + "\" in config");
}

std::filesystem::path PipelineConfig::cache_file() const {
  if (cache_path.empty() || cache_path.is_absolute()) return cache_path;
  return (output_dir / cache_path).lexically_normal();
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");

  for (const auto& [key, value] : overrides) {
    json* existing = navigate(root, key, false);
    json coerced = coerce(value, existing);
    json* slot = navigate(root, key, true);
    if (slot == nullptr) throw ConfigError("cannot apply override \"" + key + "\"");
    *slot = std::move(coerced);
  }

  check_keys(root, "", {"corpus", "extract", "evidence", "ranking", "datasets", "embeddings",
                        "experiment", "annotation", "output_dir"});

  PipelineConfig config;
  config.effective_json = root.dump();  // object keys are stored sorted
  config.fingerprint = fnv1a64(config.effective_json);
  config.output_dir = resolve(base_dir, get_typed<std::string>(root, "output_dir", "out"));

  if (root.contains("corpus")) {
    const json& c = root["corpus"];
    check_keys(c, "corpus", {"tagged_dir", "raw_dir", "lexicon", "entities"});
    if (auto v = get_typed<std::string>(c, "tagged_dir", ""); !v.empty()) {
      config.tagged_dir = resolve(base_dir, v);
    }
    if (auto v = get_typed<std::string>(c, "raw_dir", ""); !v.empty()) {
      config.raw_dir = resolve(base_dir, v);
    }
    if (auto v = get_typed<std::string>(c, "lexicon", ""); !v.empty()) {
      config.lexicon = resolve(base_dir, v);
    }
    config.entities = get_typed<std::vector<std::string>>(c, "entities", {});
  }

  if (root.contains("extract")) {
    const json& e = root["extract"];
    check_keys(e, "extract", {"min_frequency", "pattern_file"});
    config.min_frequency = get_typed<std::uint64_t>(e, "min_frequency", config.min_frequency);
    if (auto v = get_typed<std::string>(e, "pattern_file", ""); !v.empty()) {
      config.pattern_file = resolve(base_dir, v);
    }
  }

  if (root.contains("evidence")) {
    const json& e = root["evidence"];
    check_keys(e, "evidence",
               {"cache", "fixture_results", "threshold", "mode", "max_in_flight", "offline",
                "provider"});
    if (auto v = get_typed<std::string>(e, "cache", ""); !v.empty()) {
      config.cache_path = v;  // resolved against output_dir via cache_file()
    }
    if (auto v = get_typed<std::string>(e, "fixture_results", ""); !v.empty()) {
      config.fixture_results = resolve(base_dir, v);
    }
    config.evidence_threshold = get_typed<std::uint64_t>(e, "threshold", config.evidence_threshold);
    std::string mode = get_typed<std::string>(e, "mode", "occurrences");
    if (mode == "occurrences") {
      config.evidence_mode = MatchMode::OCCURRENCES;
    } else if (mode == "results_containing") {
      config.evidence_mode = MatchMode::RESULTS_CONTAINING;
    } else {
      throw ConfigError("evidence.mode must be \"occurrences\" or \"results_containing\"");
    }
    config.max_in_flight = get_typed<unsigned>(e, "max_in_flight", config.max_in_flight);
    if (config.max_in_flight == 0) throw ConfigError("evidence.max_in_flight must be positive");
    config.offline = get_typed<bool>(e, "offline", config.offline);
    if (e.contains("provider")) {
      const json& p = e["provider"];
      check_keys(p, "evidence.provider", {"endpoint", "api_key_env", "rate_limit_qps", "retries"});
      config.provider.endpoint = get_typed<std::string>(p, "endpoint", "");
      config.provider.api_key_env = get_typed<std::string>(p, "api_key_env", "");
      config.provider.rate_limit_qps =
          get_typed<double>(p, "rate_limit_qps", config.provider.rate_limit_qps);
      config.provider.retries = get_typed<unsigned>(p, "retries", config.provider.retries);
    }
  }

  if (root.contains("ranking")) {
    const json& r = root["ranking"];
    check_keys(r, "ranking", {"generic_stats", "smoothing"});
    if (auto v = get_typed<std::string>(r, "generic_stats", ""); !v.empty()) {
      config.generic_stats = resolve(base_dir, v);
    }
    config.smoothing = get_typed<double>(r, "smoothing", config.smoothing);
    if (config.smoothing < 0) throw ConfigError("ranking.smoothing must be non-negative");
  }

  if (root.contains("datasets")) {
    if (!root["datasets"].is_array()) throw ConfigError("\"datasets\" must be an array");
    for (const json& d : root["datasets"]) {
      check_keys(d, "datasets[]", {"name", "path", "format", "generate_negatives", "exclusions"});
      DatasetConfig ds;
      ds.name = get_typed<std::string>(d, "name", "");
      if (ds.name.empty()) throw ConfigError("dataset entries need a \"name\"");
      std::string path = get_typed<std::string>(d, "path", "");
      if (path.empty()) throw ConfigError("dataset \"" + ds.name + "\" needs a \"path\"");
      ds.path = resolve(base_dir, path);
      std::string format = get_typed<std::string>(d, "format", "vocagen_csv");
      auto parsed = parse_pair_format(format);
      if (!parsed) {
        throw ConfigError("dataset \"" + ds.name + "\": unknown format \"" + format + "\"");
      }
      ds.format = *parsed;
      ds.generate_negatives = get_typed<bool>(d, "generate_negatives", false);
      if (auto v = get_typed<std::string>(d, "exclusions", ""); !v.empty()) {
        ds.exclusions = resolve(base_dir, v);
      }
      for (const auto& other : config.datasets) {
        if (other.name == ds.name) {
          throw ConfigError("duplicate dataset name \"" + ds.name + "\"");
        }
      }
      config.datasets.push_back(std::move(ds));
    }
  }

  if (root.contains("embeddings")) {
    if (!root["embeddings"].is_array()) throw ConfigError("\"embeddings\" must be an array");
    for (const json& e : root["embeddings"]) {
      check_keys(e, "embeddings[]", {"name", "path"});
      EmbeddingConfig emb;
      emb.name = get_typed<std::string>(e, "name", "");
      std::string path = get_typed<std::string>(e, "path", "");
      if (emb.name.empty() || path.empty()) {
        throw ConfigError("embedding entries need \"name\" and \"path\"");
      }
      emb.path = resolve(base_dir, path);
      for (const auto& other : config.embeddings) {
        if (other.name == emb.name) {
          throw ConfigError("duplicate embedding name \"" + emb.name + "\"");
        }
      }
      config.embeddings.push_back(std::move(emb));
    }
  }

  if (root.contains("experiment")) {
    const json& x = root["experiment"];
    check_keys(x, "experiment",
               {"compositions", "algorithms", "k", "seed", "threads", "batch_size", "max_epochs",
                "learning_rate", "hidden_layers", "validation_fraction", "early_stop_tolerance",
                "early_stop_patience", "standardize"});
    if (x.contains("compositions")) {
      config.experiment.compositions.clear();
      for (const json& c : x["compositions"]) {
        auto comp = parse_composition(c.get<std::string>());
        if (!comp) throw ConfigError("unknown composition \"" + c.get<std::string>() + "\"");
        config.experiment.compositions.push_back(*comp);
      }
      if (config.experiment.compositions.empty()) {
        throw ConfigError("experiment.compositions must not be empty");
      }
    }
    if (x.contains("algorithms")) {
      config.experiment.algorithms.clear();
      for (const json& a : x["algorithms"]) {
        auto algo = parse_algorithm(a.get<std::string>());
        if (!algo) throw ConfigError("unknown algorithm \"" + a.get<std::string>() + "\"");
        config.experiment.algorithms.push_back(*algo);
      }
      if (config.experiment.algorithms.empty()) {
        throw ConfigError("experiment.algorithms must not be empty");
      }
    }
    config.experiment.k = get_typed<int>(x, "k", config.experiment.k);
    if (config.experiment.k < 2) throw ConfigError("experiment.k must be at least 2");
    config.experiment.seed = get_typed<std::uint64_t>(x, "seed", config.experiment.seed);
    config.experiment.threads = get_typed<unsigned>(x, "threads", config.experiment.threads);
    if (config.experiment.threads == 0) throw ConfigError("experiment.threads must be positive");
    TrainConfig& t = config.experiment.train;
    t.batch_size = get_typed<int>(x, "batch_size", t.batch_size);
    t.max_epochs = get_typed<int>(x, "max_epochs", t.max_epochs);
    t.learning_rate = get_typed<double>(x, "learning_rate", t.learning_rate);
    t.hidden_layers = get_typed<std::vector<int>>(x, "hidden_layers", t.hidden_layers);
    t.validation_fraction = get_typed<double>(x, "validation_fraction", t.validation_fraction);
    t.early_stop_tolerance = get_typed<double>(x, "early_stop_tolerance", t.early_stop_tolerance);
    t.early_stop_patience = get_typed<int>(x, "early_stop_patience", t.early_stop_patience);
    t.standardize = get_typed<bool>(x, "standardize", t.standardize);
    t.seed = config.experiment.seed;
  }

  if (root.contains("annotation")) {
    const json& a = root["annotation"];
    check_keys(a, "annotation", {"top_k"});
    config.annotation_top_k = get_typed<std::size_t>(a, "top_k", config.annotation_top_k);
    if (config.annotation_top_k == 0) throw ConfigError("annotation.top_k must be positive");
  }

  return config;
}

PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  require_file(path, "config file");
  PipelineConfig config =
      parse_config(read_file(path), path.parent_path().empty() ? std::filesystem::path(".")
                                                               : path.parent_path(),
                   overrides);
  config.config_path = path;
  return config;
}

std::string provenance_header(const PipelineConfig& config, std::string_view stage) {
  std::string out = "# termite ";
  out += kVersion;
  out += " stage=";
  out += stage;
  out += " config=";
  out += to_hex(config.fingerprint);
  out += " seed=";
  out += std::to_string(config.experiment.seed);
  out += "\n";
  return out;
}

void require_file(const std::filesystem::path& path, std::string_view what) {
  if (path.empty()) {
    throw ConfigError(std::string(what) + " is not set in the config");
  }
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError(std::string(what) + " not found: " + path.string());
  }
}

void require_dir(const std::filesystem::path& path, std::string_view what) {
  if (path.empty()) {
    throw ConfigError(std::string(what) + " is not set in the config");
  }
  if (!std::filesystem::is_directory(path)) {
    throw ConfigError(std::string(what) + " not found: " + path.string());
  }
}

}  // namespace termite
