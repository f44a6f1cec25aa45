#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "termite/classifier.hpp"
#include "termite/evidence.hpp"
#include "termite/pairs.hpp"

namespace termite {

struct DatasetConfig {
  std::string name;
  std::filesystem::path path;
  PairFormat format = PairFormat::VOCAGEN_CSV;
  bool generate_negatives = false;
  std::optional<std::filesystem::path> exclusions;
};

struct EmbeddingConfig {
  std::string name;
  std::filesystem::path path;
};

struct ExperimentConfig {
  std::vector<Composition> compositions{Composition::CONCAT};
  std::vector<Algorithm> algorithms{Algorithm::MLP};
  int k = 5;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  TrainConfig train;  // algorithm/composition/seed overridden per grid cell
};

/// One declarative file drives every subcommand. All relative paths are
/// resolved against the config file's directory at load time; the
/// fingerprint covers the effective JSON after flag overrides so output
/// provenance identifies the exact run configuration.
struct PipelineConfig {
  std::filesystem::path config_path;
  std::filesystem::path output_dir;

  // corpus
  std::filesystem::path tagged_dir;  // pre-tagged TSV documents
  std::filesystem::path raw_dir;     // plain-text documents, tagged via lexicon
  std::filesystem::path lexicon;
  std::vector<std::string> entities;  // named entities to normalize away

  // extraction
  std::uint64_t min_frequency = 2;
  std::filesystem::path pattern_file;  // empty: built-in pattern set

  // evidence
  std::filesystem::path cache_path;  // raw; resolve through cache_file()
  std::filesystem::path fixture_results;
  std::uint64_t evidence_threshold = 10;
  MatchMode evidence_mode = MatchMode::OCCURRENCES;
  unsigned max_in_flight = 4;
  bool offline = true;
  HttpProviderConfig provider;

  // ranking
  std::filesystem::path generic_stats;
  double smoothing = 0.5;

  // experiments
  std::vector<DatasetConfig> datasets;
  std::vector<EmbeddingConfig> embeddings;
  ExperimentConfig experiment;

  // annotation
  std::size_t annotation_top_k = 100;

  std::string effective_json;  // canonical form the fingerprint is taken over
  std::uint64_t fingerprint = 0;

  const DatasetConfig& dataset(const std::string& name) const;
  const EmbeddingConfig& embedding(const std::string& name) const;

  /// The evidence cache is an output artifact: a relative path lands in
  /// output_dir (so --out moves it), an absolute one is used verbatim.
  std::filesystem::path cache_file() const;
};

/// Loads a config file and applies dotted-key overrides ("evidence.threshold"
/// = "25") before validation, so overridden runs hash differently.
/// Unknown keys and type mismatches raise ConfigError.
PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Parses config JSON text; base_dir anchors relative paths.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// "# termite <version> stage=<stage> config=<hash> seed=<seed>" line.
std::string provenance_header(const PipelineConfig& config, std::string_view stage);

/// ConfigError naming the flag when the referenced file/directory is absent.
void require_file(const std::filesystem::path& path, std::string_view what);
void require_dir(const std::filesystem::path& path, std::string_view what);

}  // namespace termite
