#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "termite/classifier.hpp"
#include "termite/config.hpp"
#include "termite/embeddings.hpp"
#include "termite/errors.hpp"
#include "termite/evidence.hpp"
#include "termite/ingest.hpp"
#include "termite/metrics.hpp"
#include "termite/ngrams.hpp"
#include "termite/pairs.hpp"
#include "termite/patterns.hpp"
#include "termite/ranking.hpp"
#include "termite/text.hpp"
#include "termite/util.hpp"
#include "termite/version.hpp"

namespace {

using nlohmann::json;
using namespace termite;

namespace fs = std::filesystem;

// Stage products are runtime data, not configuration: their absence means
// the pipeline was run out of order, so it maps to the data-error exit.
void require_stage_file(const fs::path& path, const std::string& what) {
  if (path.empty() || !fs::is_regular_file(path)) {
    throw DataError(what + (path.empty() ? "" : " not found: " + path.string()));
  }
}

json provenance_json(const PipelineConfig& config, std::string_view stage) {
  return {{"tool", "termite"},
          {"version", kVersion},
          {"stage", std::string(stage)},
          {"config", to_hex(config.fingerprint)},
          {"seed", config.experiment.seed}};
}

void write_json(const fs::path& path, const json& value) {
  write_file(path, value.dump(2) + "\n");
}

char buf_format[64];

std::string fixed(double v, int digits = 6) {
  std::snprintf(buf_format, sizeof(buf_format), "%.*f", digits, v);
  return buf_format;
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<TaggedDocument> load_corpus(const PipelineConfig& config) {
  const bool tagged = !config.tagged_dir.empty();
  const bool raw = !config.raw_dir.empty();
  if (tagged == raw) {
    throw ConfigError("set exactly one of corpus.tagged_dir and corpus.raw_dir");
  }

  std::vector<TaggedDocument> docs;
  if (tagged) {
    require_dir(config.tagged_dir, "corpus.tagged_dir");
    for (const auto& path : sorted_files(config.tagged_dir)) {
      docs.push_back(ingest_tagged(path, TaggedFormat::TSV));
    }
  } else {
    require_dir(config.raw_dir, "corpus.raw_dir");
    require_file(config.lexicon, "corpus.lexicon");
    Lexicon lexicon = Lexicon::from_file(config.lexicon);
    NormalizationConfig rules = NormalizationConfig::french_default();
    rules.entities = config.entities;
    for (const auto& path : sorted_files(config.raw_dir)) {
      RawDocument doc{path.filename().string(), read_file(path)};
      std::vector<std::string> tokens = tokenize(normalize_text(doc, rules));
      docs.push_back(tag_tokens(tokens, lexicon, doc.id));
    }
  }
  if (docs.empty()) {
    throw DataError("corpus directory holds no documents: " +
                    (tagged ? config.tagged_dir : config.raw_dir).string());
  }
  return docs;
}

PatternSet load_pattern_set(const PipelineConfig& config) {
  if (config.pattern_file.empty()) return default_patterns();
  require_file(config.pattern_file, "extract.pattern_file");
  return load_patterns(config.pattern_file);
}

int cmd_extract(const PipelineConfig& config) {
  std::vector<TaggedDocument> docs = load_corpus(config);
  CorpusStats stats = corpus_stats(docs, {1, 2, 3});
  std::vector<NGramCandidate> frequent = candidates_from(stats, config.min_frequency);
  PatternSet patterns = load_pattern_set(config);
  std::vector<NGramCandidate> filtered = filter_by_patterns(frequent, patterns);

  write_file(config.output_dir / "candidates.tsv",
             provenance_header(config, "extract") +
                 serialize_candidates(filtered, stats.total_words));

  json report;
  report["provenance"] = provenance_json(config, "extract");
  report["documents"] = docs.size();
  report["total_words"] = stats.total_words;
  report["distinct_ngrams"] = stats.freq.size();
  report["min_frequency"] = config.min_frequency;
  report["after_frequency"] = frequent.size();
  report["patterns"] = patterns.size();
  report["after_patterns"] = filtered.size();
  write_json(config.output_dir / "extract_stats.json", report);

  std::printf("extract: %zu documents, %llu words, %zu frequent n-grams, %zu candidates\n",
              docs.size(), static_cast<unsigned long long>(stats.total_words), frequent.size(),
              filtered.size());
  return 0;
}

int cmd_stats(const PipelineConfig& config) {
  std::vector<TaggedDocument> docs = load_corpus(config);
  CorpusStats stats = corpus_stats(docs, {1, 2, 3});
  write_file(config.output_dir / "corpus_stats.tsv",
             provenance_header(config, "stats") + serialize_stats(stats));
  std::printf("stats: %zu documents, %llu words, %zu distinct n-grams\n", docs.size(),
              static_cast<unsigned long long>(stats.total_words), stats.freq.size());
  return 0;
}

std::string serialize_pruned(std::span<const NGramCandidate> kept,
                             const std::map<std::string, std::uint64_t>& matches,
                             std::uint64_t total_words) {
  std::string out = "total_words\t" + std::to_string(total_words) + "\n";
  for (const auto& c : kept) {
    out += std::to_string(c.lemmas.size());
    out += '\t';
    out += c.joined();
    out += '\t';
    out += c.pattern_string();
    out += '\t';
    out += std::to_string(c.frequency);
    out += '\t';
    out += std::to_string(matches.at(c.joined()));
    out += '\n';
  }
  return out;
}

int cmd_prune(const PipelineConfig& config, const std::string& input_override) {
  fs::path input = input_override.empty() ? config.output_dir / "candidates.tsv"
                                          : fs::path(input_override);
  require_stage_file(input, "prune input (run `termite extract` first or pass --input)");
  CandidateFile cf = parse_candidates(read_file(input), input.string());

  EvidenceCache cache =
      config.cache_path.empty() ? EvidenceCache() : EvidenceCache(config.cache_file());
  std::unique_ptr<SearchProvider> provider;
  if (config.offline) {
    if (!config.fixture_results.empty()) {
      require_file(config.fixture_results, "evidence.fixture_results");
      provider = std::make_unique<FixtureProvider>(config.fixture_results);
    }
  } else {
    if (config.provider.endpoint.empty()) {
      throw ConfigError("evidence.provider.endpoint is required for online pruning");
    }
    provider = make_http_provider(config.provider);
  }

  PruneOptions opts;
  opts.threshold = config.evidence_threshold;
  opts.mode = config.evidence_mode;
  opts.max_in_flight = config.max_in_flight;
  PruneOutcome outcome = prune_by_evidence(cf.candidates, provider.get(), &cache, opts);

  std::map<std::string, std::uint64_t> matches;
  for (const auto& r : outcome.records) matches[r.ngram] = r.match_count;
  write_file(config.output_dir / "pruned.tsv",
             provenance_header(config, "prune") +
                 serialize_pruned(outcome.kept, matches, cf.total_words));

  json report;
  report["provenance"] = provenance_json(config, "prune");
  report["input"] = input.string();
  report["threshold"] = config.evidence_threshold;
  report["mode"] =
      config.evidence_mode == MatchMode::OCCURRENCES ? "occurrences" : "results_containing";
  report["provider"] = provider ? provider->id() : "none";
  report["candidates"] = cf.candidates.size();
  report["kept"] = outcome.kept.size();
  report["dropped"] = outcome.dropped.size();
  report["unresolved"] = outcome.unresolved.size();
  json records = json::array();
  for (const auto& r : outcome.records) {
    records.push_back({{"ngram", r.ngram},
                       {"matches", r.match_count},
                       {"resolved", r.resolved},
                       {"kept", r.resolved && r.match_count >= config.evidence_threshold}});
  }
  report["records"] = std::move(records);
  write_json(config.output_dir / "prune_report.json", report);

  std::printf("prune: %zu candidates, %zu kept, %zu dropped, %zu unresolved (threshold %llu)\n",
              cf.candidates.size(), outcome.kept.size(), outcome.dropped.size(),
              outcome.unresolved.size(), static_cast<unsigned long long>(config.evidence_threshold));

  if (!outcome.unresolved.empty()) {
    std::string queries;
    for (std::size_t i = 0; i < outcome.unresolved.size() && i < 10; ++i) {
      if (i > 0) queries += ", ";
      queries += "\"" + outcome.unresolved[i].joined() + "\"";
    }
    if (outcome.unresolved.size() > 10) queries += ", ...";
    std::string message = std::to_string(outcome.unresolved.size()) +
                          " n-grams have no evidence (not cached, no provider): " + queries;
    if (provider && provider->live()) throw ProviderError(message);
    throw DataError(message);
  }
  return 0;
}

int cmd_rank(const PipelineConfig& config, const std::string& input_override) {
  fs::path input(input_override);
  if (input.empty()) {
    input = config.output_dir / "pruned.tsv";
    if (!fs::is_regular_file(input)) input = config.output_dir / "candidates.tsv";
  }
  require_stage_file(input,
                     "rank input (run `termite extract`/`termite prune` first or pass --input)");
  CandidateFile cf = parse_candidates(read_file(input), input.string());

  require_file(config.generic_stats, "ranking.generic_stats");
  CorpusStats generic = parse_stats(read_file(config.generic_stats), config.generic_stats.string());

  CorpusStats specific;
  specific.total_words = cf.total_words;
  specific.n_values = {1, 2, 3};
  RankOptions opts;
  opts.smoothing = config.smoothing;
  std::vector<RankedTerm> ranked = rank_terms(cf.candidates, specific, generic, opts);

  write_file(config.output_dir / "ranked.tsv",
             provenance_header(config, "rank") + serialize_ranked(ranked));

  json report;
  report["provenance"] = provenance_json(config, "rank");
  report["input"] = input.string();
  report["b0"] = specific.total_words;
  report["b1"] = generic.total_words;
  report["smoothing"] = config.smoothing;
  json terms = json::array();
  std::size_t rank = 1;
  for (const auto& t : ranked) {
    terms.push_back({{"rank", rank++},
                     {"ngram", t.ngram},
                     {"pattern", t.pattern},
                     {"a0", t.a0},
                     {"a1", t.a1},
                     {"z", t.z}});
  }
  report["terms"] = std::move(terms);
  write_json(config.output_dir / "ranked.json", report);

  std::printf("rank: %zu terms ranked against %llu generic words\n", ranked.size(),
              static_cast<unsigned long long>(generic.total_words));
  return 0;
}

int cmd_pairs(const PipelineConfig& config, const std::string& only_dataset) {
  if (config.datasets.empty()) throw ConfigError("no datasets defined in config");
  bool matched = false;
  for (const auto& ds : config.datasets) {
    if (!only_dataset.empty() && ds.name != only_dataset) continue;
    matched = true;

    require_file(ds.path, "dataset \"" + ds.name + "\" path");
    LoadedPairs loaded = load_pairs(ds.path, ds.format);
    std::size_t excluded = 0;
    std::vector<TermPair> pairs = std::move(loaded.pairs);
    if (ds.exclusions) {
      auto excl = load_exclusions(*ds.exclusions);
      ExclusionResult res = apply_exclusions(pairs, excl);
      pairs = std::move(res.pairs);
      excluded = res.excluded;
    }

    std::size_t positives = 0, negatives = 0;
    for (const auto& p : pairs) (p.label == PairLabel::POSITIVE ? positives : negatives)++;

    std::size_t generated = 0;
    if (ds.generate_negatives) {
      if (negatives > 0) {
        throw ConfigError("dataset \"" + ds.name +
                          "\": generate_negatives requires an all-positive input");
      }
      std::vector<TermPair> synth = generate_negatives(pairs, config.experiment.seed);
      generated = synth.size();
      pairs.insert(pairs.end(), std::make_move_iterator(synth.begin()),
                   std::make_move_iterator(synth.end()));
      negatives = generated;
    }

    write_file(config.output_dir / ("pairs_" + ds.name + ".csv"),
               provenance_header(config, "pairs") + serialize_pairs(pairs));

    json report;
    report["provenance"] = provenance_json(config, "pairs");
    report["dataset"] = ds.name;
    report["format"] = std::string(to_string(ds.format));
    report["dropped_rows"] = loaded.dropped_rows;
    report["duplicates"] = loaded.duplicates;
    report["excluded"] = excluded;
    report["positives"] = positives;
    report["negatives"] = negatives;
    report["generated_negatives"] = generated;
    report["total"] = pairs.size();
    write_json(config.output_dir / ("pairs_" + ds.name + "_report.json"), report);

    std::printf("pairs[%s]: %zu positive, %zu negative (%zu generated), %llu dropped rows\n",
                ds.name.c_str(), positives, negatives, generated,
                static_cast<unsigned long long>(loaded.dropped_rows));
  }
  if (!matched) throw ConfigError("no dataset named \"" + only_dataset + "\" in config");
  return 0;
}

std::vector<TermPair> load_stage_pairs(const PipelineConfig& config, const std::string& name) {
  fs::path path = config.output_dir / ("pairs_" + name + ".csv");
  require_stage_file(path, "pairs file for dataset \"" + name + "\" (run `termite pairs` first)");
  return load_pairs(path, PairFormat::VOCAGEN_CSV).pairs;
}

std::set<std::string> vocabulary_of(std::span<const TermPair> pairs) {
  std::set<std::string> vocab;
  for (const auto& p : pairs) {
    for (const std::string* term : {&p.x, &p.y}) {
      for (const auto& word : term_constituents(*term)) {
        vocab.insert(word);
        vocab.insert(fold_french(word));
      }
    }
  }
  return vocab;
}

TrainConfig cell_config(const PipelineConfig& config, Algorithm algo, Composition comp) {
  TrainConfig tc = config.experiment.train;
  tc.algorithm = algo;
  tc.composition = comp;
  tc.seed = config.experiment.seed;
  return tc;
}

struct CellSelection {
  std::string dataset;
  std::string embedding;
  std::string algorithm = "mlp";
  std::string composition = "concat";
};

std::string cell_slug(const CellSelection& sel) {
  return sel.dataset + "_" + sel.embedding + "_" + sel.algorithm + "_" + sel.composition;
}

int cmd_train(const PipelineConfig& config, const CellSelection& sel) {
  auto algo = parse_algorithm(sel.algorithm);
  auto comp = parse_composition(sel.composition);
  if (!algo) throw ConfigError("unknown algorithm \"" + sel.algorithm + "\"");
  if (!comp) throw ConfigError("unknown composition \"" + sel.composition + "\"");

  std::vector<TermPair> pairs = load_stage_pairs(config, config.dataset(sel.dataset).name);
  const EmbeddingConfig& emb = config.embedding(sel.embedding);
  require_file(emb.path, "embedding \"" + emb.name + "\" path");
  std::set<std::string> vocab = vocabulary_of(pairs);
  EmbeddingStore store = EmbeddingStore::load(emb.path, &vocab);

  std::sort(pairs.begin(), pairs.end(), [](const TermPair& a, const TermPair& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  std::vector<PairFeatures> features;
  std::vector<int> labels;
  std::size_t excluded = 0;
  TrainConfig tc = cell_config(config, *algo, *comp);
  for (const auto& p : pairs) {
    auto f = store.pair_features(p.x, p.y, tc.composition);
    if (!f) {
      ++excluded;
      continue;
    }
    features.push_back(std::move(*f));
    labels.push_back(p.label == PairLabel::POSITIVE ? 1 : 0);
  }

  ClassifierModel model = train(features, labels, tc);
  model.embedding_fingerprint = store.fingerprint();
  fs::path model_path = config.output_dir / "models" / (cell_slug(sel) + ".tmodel");
  save_model(model, model_path);

  json report;
  report["provenance"] = provenance_json(config, "train");
  report["dataset"] = sel.dataset;
  report["embedding"] = sel.embedding;
  report["algorithm"] = sel.algorithm;
  report["composition"] = sel.composition;
  report["pairs_used"] = features.size();
  report["excluded"] = excluded;
  report["epochs_run"] = model.epochs_run;
  report["final_loss"] = model.final_loss;
  report["embedding_fingerprint"] = to_hex(model.embedding_fingerprint);
  // relative to the output dir so reports stay location-independent
  report["model_file"] = (fs::path("models") / model_path.filename()).generic_string();
  write_json(config.output_dir / ("train_" + cell_slug(sel) + ".json"), report);

  std::printf("train[%s]: %zu pairs (%zu excluded), %d epochs, final loss %s\n",
              cell_slug(sel).c_str(), features.size(), excluded, model.epochs_run,
              fixed(model.final_loss).c_str());
  return 0;
}

json report_to_json(const EvalReport& report) {
  json folds = json::array();
  for (std::size_t i = 0; i < report.per_fold.size(); ++i) {
    folds.push_back({{"fold", i},
                     {"precision", report.per_fold[i].precision},
                     {"recall", report.per_fold[i].recall},
                     {"f1", report.per_fold[i].f1}});
  }
  return {{"per_fold", std::move(folds)},
          {"mean", {{"precision", report.mean_p}, {"recall", report.mean_r}, {"f1", report.mean_f1}}},
          {"sd", {{"precision", report.sd_p}, {"recall", report.sd_r}, {"f1", report.sd_f1}}},
          {"excluded", report.excluded}};
}

std::string report_to_tsv(const EvalReport& report) {
  std::string out = "fold\tprecision\trecall\tf1\n";
  for (std::size_t i = 0; i < report.per_fold.size(); ++i) {
    out += std::to_string(i) + "\t" + fixed(report.per_fold[i].precision, 4) + "\t" +
           fixed(report.per_fold[i].recall, 4) + "\t" + fixed(report.per_fold[i].f1, 4) + "\n";
  }
  out += "mean\t" + fixed(report.mean_p, 4) + "\t" + fixed(report.mean_r, 4) + "\t" +
         fixed(report.mean_f1, 4) + "\n";
  out += "sd\t" + fixed(report.sd_p, 4) + "\t" + fixed(report.sd_r, 4) + "\t" +
         fixed(report.sd_f1, 4) + "\n";
  return out;
}

int cmd_eval(const PipelineConfig& config, const CellSelection& sel) {
  auto algo = parse_algorithm(sel.algorithm);
  auto comp = parse_composition(sel.composition);
  if (!algo) throw ConfigError("unknown algorithm \"" + sel.algorithm + "\"");
  if (!comp) throw ConfigError("unknown composition \"" + sel.composition + "\"");

  std::vector<TermPair> pairs = load_stage_pairs(config, config.dataset(sel.dataset).name);
  const EmbeddingConfig& emb = config.embedding(sel.embedding);
  require_file(emb.path, "embedding \"" + emb.name + "\" path");
  std::set<std::string> vocab = vocabulary_of(pairs);
  EmbeddingStore store = EmbeddingStore::load(emb.path, &vocab);

  FoldPlan folds = kfold_split(pairs, config.experiment.k, config.experiment.seed);
  EvalReport report = cross_validate(pairs, store, cell_config(config, *algo, *comp), folds);

  json out = report_to_json(report);
  out["provenance"] = provenance_json(config, "eval");
  out["dataset"] = sel.dataset;
  out["embedding"] = sel.embedding;
  out["algorithm"] = sel.algorithm;
  out["composition"] = sel.composition;
  out["k"] = config.experiment.k;
  out["seed"] = config.experiment.seed;
  out["fold_fingerprint"] = to_hex(folds.fingerprint());
  write_json(config.output_dir / ("eval_" + cell_slug(sel) + ".json"), out);
  write_file(config.output_dir / ("eval_" + cell_slug(sel) + ".tsv"),
             provenance_header(config, "eval") + report_to_tsv(report));

  std::printf("eval[%s]: mean F1 %s (sd %s), %llu excluded\n", cell_slug(sel).c_str(),
              fixed(report.mean_f1, 2).c_str(), fixed(report.sd_f1, 2).c_str(),
              static_cast<unsigned long long>(report.excluded));
  return 0;
}

int cmd_grid(const PipelineConfig& config) {
  if (config.datasets.empty()) throw ConfigError("no datasets defined in config");
  if (config.embeddings.empty()) throw ConfigError("no embeddings defined in config");

  std::vector<GridDataset> datasets;
  for (const auto& ds : config.datasets) {
    datasets.push_back({ds.name, load_stage_pairs(config, ds.name)});
  }
  std::set<std::string> vocab;
  for (const auto& ds : datasets) {
    std::set<std::string> part = vocabulary_of(ds.pairs);
    vocab.insert(part.begin(), part.end());
  }

  std::vector<std::unique_ptr<EmbeddingStore>> stores;
  std::vector<GridEmbedding> embeddings;
  for (const auto& emb : config.embeddings) {
    require_file(emb.path, "embedding \"" + emb.name + "\" path");
    stores.push_back(std::make_unique<EmbeddingStore>(EmbeddingStore::load(emb.path, &vocab)));
    embeddings.push_back({emb.name, stores.back().get()});
  }

  std::vector<GridCell> cells =
      run_grid(datasets, embeddings, config.experiment.compositions, config.experiment.algorithms,
               config.experiment.k, config.experiment.seed, config.experiment.train,
               config.experiment.threads);

  json out;
  out["provenance"] = provenance_json(config, "grid");
  out["k"] = config.experiment.k;
  out["seed"] = config.experiment.seed;
  json rows = json::array();
  for (const auto& cell : cells) {
    json row{{"dataset", cell.dataset},
             {"embedding", cell.embedding},
             {"algorithm", std::string(to_string(cell.algorithm))},
             {"composition", std::string(to_string(cell.composition))},
             {"fold_fingerprint", to_hex(cell.fold_fingerprint)}};
    if (cell.error.empty()) {
      row.update(report_to_json(cell.report));
    } else {
      row["error"] = cell.error;
    }
    rows.push_back(std::move(row));
  }
  out["cells"] = std::move(rows);
  write_json(config.output_dir / "grid_report.json", out);

  std::string tsv = "dataset\tembedding\talgorithm\tcomposition\tmean_f1\tsd_f1\tmean_p\tmean_r"
                    "\texcluded\tstatus\n";
  for (const auto& cell : cells) {
    tsv += cell.dataset + "\t" + cell.embedding + "\t" + std::string(to_string(cell.algorithm)) +
           "\t" + std::string(to_string(cell.composition)) + "\t";
    if (cell.error.empty()) {
      tsv += fixed(cell.report.mean_f1, 2) + "\t" + fixed(cell.report.sd_f1, 2) + "\t" +
             fixed(cell.report.mean_p, 2) + "\t" + fixed(cell.report.mean_r, 2) + "\t" +
             std::to_string(cell.report.excluded) + "\tok\n";
    } else {
      tsv += "-\t-\t-\t-\t-\terror\n";
    }
  }
  write_file(config.output_dir / "grid_report.tsv", provenance_header(config, "grid") + tsv);

  std::size_t failed = 0;
  for (const auto& cell : cells) {
    if (!cell.error.empty()) ++failed;
  }
  std::printf("grid: %zu cells, %zu failed\n", cells.size(), failed);
  if (failed == cells.size()) {
    throw DataError("all " + std::to_string(cells.size()) +
                    " grid cells failed; first error: " + cells.front().error);
  }
  return 0;
}

int cmd_annotate_export(const PipelineConfig& config, const std::string& input_override,
                        std::size_t top_k_override) {
  fs::path input = input_override.empty() ? config.output_dir / "ranked.tsv"
                                          : fs::path(input_override);
  require_stage_file(input, "ranked terms (run `termite rank` first or pass --input)");

  std::vector<std::string> ngrams;
  std::size_t top_k = top_k_override > 0 ? top_k_override : config.annotation_top_k;
  for (const std::string& line : read_lines(input)) {
    std::string_view trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string> fields = split(trimmed, '\t');
    if (fields.size() < 2 || fields[0] == "rank") continue;  // header row
    ngrams.push_back(fields[1]);
    if (ngrams.size() >= top_k) break;
  }
  if (ngrams.empty()) throw DataError(input.string() + ": no ranked terms to export");

  std::string out = provenance_header(config, "annotate-export");
  out += "# fill in: ngram\tannotator\tverdict  (0=irrelevant, 1=relevant out of domain, "
         "2=relevant in domain)\n";
  for (const auto& ngram : ngrams) {
    out += ngram;
    out += "\t\t\n";
  }
  write_file(config.output_dir / "annotation_template.tsv", out);
  std::printf("annotate-export: %zu terms written\n", ngrams.size());
  return 0;
}

int cmd_annotate_score(const PipelineConfig& config, const std::string& file_a,
                       const std::string& file_b) {
  require_file(file_a, "annotator file A");
  require_file(file_b, "annotator file B");
  std::vector<Judgment> a = parse_judgments(read_file(file_a), file_a);
  std::vector<Judgment> b = parse_judgments(read_file(file_b), file_b);

  MergeOutcome strict = merge_judgments(a, b, MergeMode::STRICT);
  MergeOutcome flexible = merge_judgments(a, b, MergeMode::FLEXIBLE);

  // merge_judgments validated that both files cover the same ngrams.
  std::map<std::string, Verdict> by_a, by_b;
  for (const auto& j : a) by_a[j.ngram] = j.verdict;
  for (const auto& j : b) by_b[j.ngram] = j.verdict;
  std::vector<Verdict> seq_a, seq_b;
  for (const auto& [ngram, verdict] : by_a) {
    seq_a.push_back(verdict);
    seq_b.push_back(by_b.at(ngram));
  }
  KappaResult kappa = cohen_kappa(seq_a, seq_b);

  auto merge_json = [](const MergeOutcome& m) {
    return json{{"correct", m.correct},
                {"total", m.total},
                {"accuracy", m.accuracy},
                {"error_rate", m.error_rate}};
  };
  json out;
  out["provenance"] = provenance_json(config, "annotate-score");
  out["items"] = seq_a.size();
  out["kappa"] = kappa.kappa;
  out["observed_agreement"] = kappa.observed_agreement;
  out["strict"] = merge_json(strict);
  out["flexible"] = merge_json(flexible);
  write_json(config.output_dir / "agreement.json", out);

  std::string tsv = provenance_header(config, "annotate-score");
  tsv += "ngram\tverdict_a\tverdict_b\tstrict\tflexible\n";
  std::size_t row = 0;
  for (const auto& [ngram, verdict] : by_a) {
    tsv += ngram + "\t" + std::to_string(static_cast<int>(verdict)) + "\t" +
           std::to_string(static_cast<int>(by_b.at(ngram))) + "\t" +
           (strict.per_ngram[row].second ? "1" : "0") + "\t" +
           (flexible.per_ngram[row].second ? "1" : "0") + "\n";
    ++row;
  }
  write_file(config.output_dir / "merged_judgments.tsv", tsv);

  std::printf("annotate-score: %zu items, kappa %s, A0 %s, strict %s, flexible %s\n",
              seq_a.size(), fixed(kappa.kappa, 4).c_str(),
              fixed(kappa.observed_agreement, 4).c_str(), fixed(strict.accuracy, 2).c_str(),
              fixed(flexible.accuracy, 2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termite: terminology extraction and taxonomy induction toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("termite ") + kVersion);

  std::string config_path;
  std::vector<std::string> set_flags;
  std::string out_dir;
  struct {
    std::string input;
    CellSelection cell;
    std::string dataset_filter;
    std::string file_a, file_b;
    std::size_t top_k = 0;
  } args;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "pipeline config JSON")->required();
    cmd->add_option("--set", set_flags, "override a config key (dotted.path=value)");
    cmd->add_option("--out", out_dir, "override the output directory");
  };
  auto add_cell = [&](CLI::App* cmd) {
    cmd->add_option("--dataset", args.cell.dataset, "dataset name from the config")->required();
    cmd->add_option("--embedding", args.cell.embedding, "embedding name from the config")
        ->required();
    cmd->add_option("--algorithm", args.cell.algorithm, "logreg or mlp");
    cmd->add_option("--composition", args.cell.composition, "concat, diff, sum or product");
  };

  CLI::App* extract = app.add_subcommand("extract", "mine and filter candidate terms");
  add_common(extract);
  CLI::App* stats = app.add_subcommand("stats", "dump the full corpus n-gram table");
  add_common(stats);
  CLI::App* prune = app.add_subcommand("prune", "drop candidates lacking web evidence");
  add_common(prune);
  prune->add_option("--input", args.input, "candidate file (default: <out>/candidates.tsv)");
  CLI::App* rank = app.add_subcommand("rank", "rank candidates by corpus-comparison z-score");
  add_common(rank);
  rank->add_option("--input", args.input, "candidate file (default: <out>/pruned.tsv)");
  CLI::App* pairs = app.add_subcommand("pairs", "build labeled is-a pair datasets");
  add_common(pairs);
  pairs->add_option("--dataset", args.dataset_filter, "only build this dataset");
  CLI::App* train = app.add_subcommand("train", "train one hypernymy classifier");
  add_common(train);
  add_cell(train);
  CLI::App* eval = app.add_subcommand("eval", "cross-validate one grid cell");
  add_common(eval);
  add_cell(eval);
  CLI::App* grid = app.add_subcommand("grid", "run the full experiment grid");
  add_common(grid);
  CLI::App* annotate_export =
      app.add_subcommand("annotate-export", "export top-ranked terms for expert annotation");
  add_common(annotate_export);
  annotate_export->add_option("--input", args.input, "ranked file (default: <out>/ranked.tsv)");
  annotate_export->add_option("--top-k", args.top_k, "how many terms to export");
  CLI::App* annotate_score =
      app.add_subcommand("annotate-score", "score agreement between two annotators");
  add_common(annotate_score);
  annotate_score->add_option("--a,--first", args.file_a, "annotator A judgments")->required();
  annotate_score->add_option("--b,--second", args.file_b, "annotator B judgments")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& entry : set_flags) {
      std::size_t eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects dotted.path=value, got \"" + entry + "\"");
      }
      overrides.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
    }
    PipelineConfig config = load_config(config_path, overrides);
    if (!out_dir.empty()) config.output_dir = fs::path(out_dir);

    if (extract->parsed()) return cmd_extract(config);
    if (stats->parsed()) return cmd_stats(config);
    if (prune->parsed()) return cmd_prune(config, args.input);
    if (rank->parsed()) return cmd_rank(config, args.input);
    if (pairs->parsed()) return cmd_pairs(config, args.dataset_filter);
    if (train->parsed()) return cmd_train(config, args.cell);
    if (eval->parsed()) return cmd_eval(config, args.cell);
    if (grid->parsed()) return cmd_grid(config);
    if (annotate_export->parsed()) return cmd_annotate_export(config, args.input, args.top_k);
    if (annotate_score->parsed()) return cmd_annotate_score(config, args.file_a, args.file_b);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "termite: config error: %s\n", e.what());
    return 1;
  } catch (const ProviderError& e) {
    std::fprintf(stderr, "termite: provider error: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "termite: data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "termite: error: %s\n", e.what());
    return 2;
  }
}
