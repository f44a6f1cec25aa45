#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "termite/ngrams.hpp"

namespace termite {

struct SearchResult {
  std::string title;
  std::string snippet;
  std::string url;

  bool operator==(const SearchResult&) const = default;
};

/// Pluggable search backend. search() returns canned or live results for
/// one phrase and throws ProviderError once its own retries are spent.
/// Implementations must tolerate concurrent calls.
class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<SearchResult> search(const std::string& phrase) = 0;
  /// Live providers get wall-clock queried_at stamps in the cache;
  /// canned ones stay stampless so reruns are byte-identical.
  virtual bool live() const { return false; }
};

/// How evidence is counted over a result list: total whole-word
/// occurrences across titles and snippets, or the number of results that
/// contain the phrase at least once.
enum class MatchMode { OCCURRENCES, RESULTS_CONTAINING };

/// Case-insensitive whole-word occurrence count of phrase over all
/// titles and snippets. Diacritics are significant; matches are counted
/// left to right without overlap.
std::uint64_t count_exact_matches(const std::string& phrase,
                                  std::span<const SearchResult> results);

/// Number of results whose title or snippet contains the phrase.
std::uint64_t count_results_containing(const std::string& phrase,
                                       std::span<const SearchResult> results);

struct EvidenceRecord {
  std::string ngram;  // lemmas joined by ' '
  std::uint64_t match_count = 0;
  std::string provider_id;
  std::string queried_at;  // RFC 3339; empty when never sent to a provider
  bool resolved = true;
};

struct CacheEntry {
  std::string query;
  std::string provider_id;
  std::string queried_at;
  std::uint64_t match_count = 0;
  std::vector<SearchResult> results;
};

/// Append-only JSON-lines store consulted before any provider call.
/// Entries are never rewritten; a path-less cache lives in memory only.
class EvidenceCache {
 public:
  EvidenceCache() = default;  // in-memory
  explicit EvidenceCache(std::filesystem::path path);

  const CacheEntry* find(const std::string& provider_id, const std::string& query) const;
  /// First entry for the query regardless of provider.
  const CacheEntry* find_any(const std::string& query) const;
  void put(CacheEntry entry);
  std::size_t size() const { return entries_.size(); }

 private:
  std::filesystem::path path_;
  std::vector<std::unique_ptr<CacheEntry>> entries_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
  mutable std::mutex mu_;
};

CacheEntry parse_cache_line(const std::string& line, const std::string& origin,
                            std::size_t lineno);
std::string serialize_cache_line(const CacheEntry& entry);

struct PruneOptions {
  std::uint64_t threshold = 10;  // kept iff match_count >= threshold
  MatchMode mode = MatchMode::OCCURRENCES;
  unsigned max_in_flight = 4;
};

struct PruneOutcome {
  std::vector<NGramCandidate> kept;
  std::vector<NGramCandidate> dropped;
  std::vector<NGramCandidate> unresolved;
  std::vector<EvidenceRecord> records;  // one per input candidate, input order
};

/// Partitions candidates into kept / dropped / unresolved. The cache is
/// consulted first; provider may be null for cache-only runs, in which
/// case uncached candidates end up unresolved. Match counts are always
/// recomputed from stored results under the requested mode. Provider
/// calls run concurrently up to max_in_flight; outputs follow candidate
/// order.
PruneOutcome prune_by_evidence(std::span<const NGramCandidate> candidates,
                               SearchProvider* provider, EvidenceCache* cache,
                               const PruneOptions& opts = {});

/// Canned results keyed by query, loaded from cache-schema JSON lines.
/// Unknown queries yield empty result lists.
class FixtureProvider final : public SearchProvider {
 public:
  explicit FixtureProvider(const std::filesystem::path& path);
  std::string id() const override { return "fixture"; }
  std::vector<SearchResult> search(const std::string& phrase) override;

 private:
  std::map<std::string, std::vector<SearchResult>> canned_;
};

struct HttpProviderConfig {
  std::string endpoint;           // e.g. "https://host/search"
  std::string api_key_env;        // header sent only when the var is set
  double rate_limit_qps = 2.0;
  unsigned retries = 2;
};

/// Generic JSON endpoint: GET {endpoint}?q="phrase" returning
/// {"results":[{"title","snippet","url"}]}. Respects the rate limit
/// across threads; failures retry then throw ProviderError.
std::unique_ptr<SearchProvider> make_http_provider(const HttpProviderConfig& config);

}  // namespace termite
