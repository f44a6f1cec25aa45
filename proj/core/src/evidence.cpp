#include "termite/evidence.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "nlohmann/json.hpp"
#include "termite/errors.hpp"
#include "termite/text.hpp"
#include "termite/util.hpp"

namespace termite {

namespace {

using nlohmann::json;

// Left-to-right non-overlapping whole-word occurrence count. Both sides
// are case-folded; accents are kept, so "cote" never matches "côté".
std::uint64_t occurrences(const std::string& hay, const std::string& needle_folded) {
  if (needle_folded.empty()) return 0;
  std::string folded = fold_french(hay);
  std::uint64_t count = 0;
  std::size_t i = 0;
  std::uint32_t prev = ' ';
  while (i < folded.size()) {
    if (!is_word_cp(prev) && folded.compare(i, needle_folded.size(), needle_folded) == 0) {
      std::size_t end = i + needle_folded.size();
      std::uint32_t next = ' ';
      if (end < folded.size()) {
        std::size_t nlen;
        next = utf8_decode(folded, end, nlen);
      }
      if (!is_word_cp(next)) {
        ++count;
        i = end;
        prev = 'a';
        continue;
      }
    }
    std::size_t len;
    prev = utf8_decode(folded, i, len);
    i += len;
  }
  return count;
}

std::uint64_t count_for_mode(const std::string& phrase, std::span<const SearchResult> results,
                             MatchMode mode) {
  return mode == MatchMode::OCCURRENCES ? count_exact_matches(phrase, results)
                                        : count_results_containing(phrase, results);
}

std::string now_rfc3339() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::uint64_t count_exact_matches(const std::string& phrase,
                                  std::span<const SearchResult> results) {
  std::string needle = fold_french(trim(phrase));
  std::uint64_t total = 0;
  for (const auto& r : results) {
    total += occurrences(r.title, needle);
    total += occurrences(r.snippet, needle);
  }
  return total;
}

std::uint64_t count_results_containing(const std::string& phrase,
                                       std::span<const SearchResult> results) {
  std::string needle = fold_french(trim(phrase));
  std::uint64_t total = 0;
  for (const auto& r : results) {
    if (occurrences(r.title, needle) > 0 || occurrences(r.snippet, needle) > 0) ++total;
  }
  return total;
}

CacheEntry parse_cache_line(const std::string& line, const std::string& origin,
                            std::size_t lineno) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(origin + ": line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("query") || !j["query"].is_string() ||
      !j.contains("results") || !j["results"].is_array()) {
    throw DataError(origin + ": line " + std::to_string(lineno) +
                    ": entry needs a query string and a results array");
  }
  CacheEntry e;
  e.query = j["query"].get<std::string>();
  e.provider_id = j.value("provider_id", std::string{});
  e.queried_at = j.value("queried_at", std::string{});
  e.match_count = j.value("match_count", std::uint64_t{0});
  for (const auto& r : j["results"]) {
    e.results.push_back({r.value("title", std::string{}), r.value("snippet", std::string{}),
                         r.value("url", std::string{})});
  }
  return e;
}

std::string serialize_cache_line(const CacheEntry& entry) {
  json results = json::array();
  for (const auto& r : entry.results) {
    results.push_back({{"title", r.title}, {"snippet", r.snippet}, {"url", r.url}});
  }
  json j = {{"query", entry.query},
            {"provider_id", entry.provider_id},
            {"queried_at", entry.queried_at},
            {"match_count", entry.match_count},
            {"results", std::move(results)}};
  return j.dump();
}

EvidenceCache::EvidenceCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  std::vector<std::string> lines = read_lines(path_);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto entry = std::make_unique<CacheEntry>(parse_cache_line(lines[i], path_.string(), i + 1));
    auto key = std::make_pair(entry->provider_id, entry->query);
    if (index_.count(key)) continue;  // entries are immutable; first wins
    index_[key] = entries_.size();
    entries_.push_back(std::move(entry));
  }
}

const CacheEntry* EvidenceCache::find(const std::string& provider_id,
                                      const std::string& query) const {
  std::lock_guard lock(mu_);
  auto it = index_.find({provider_id, query});
  return it == index_.end() ? nullptr : entries_[it->second].get();
}

const CacheEntry* EvidenceCache::find_any(const std::string& query) const {
  std::lock_guard lock(mu_);
  for (const auto& e : entries_) {
    if (e->query == query) return e.get();
  }
  return nullptr;
}

void EvidenceCache::put(CacheEntry entry) {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(entry.provider_id, entry.query);
  if (index_.count(key)) return;
  auto owned = std::make_unique<CacheEntry>(std::move(entry));
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw DataError("cannot append to cache: " + path_.string());
    out << serialize_cache_line(*owned) << '\n';
  }
  index_[key] = entries_.size();
  entries_.push_back(std::move(owned));
}

PruneOutcome prune_by_evidence(std::span<const NGramCandidate> candidates,
                               SearchProvider* provider, EvidenceCache* cache,
                               const PruneOptions& opts) {
  const std::string pid = provider ? provider->id() : std::string{};
  std::vector<EvidenceRecord> records(candidates.size());

  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= candidates.size()) return;
      std::string phrase = candidates[i].joined();
      EvidenceRecord rec;
      rec.ngram = phrase;
      const CacheEntry* hit = nullptr;
      if (cache) hit = provider ? cache->find(pid, phrase) : cache->find_any(phrase);
      if (hit) {
        rec.match_count = count_for_mode(phrase, hit->results, opts.mode);
        rec.provider_id = hit->provider_id;
        rec.queried_at = hit->queried_at;
      } else if (provider) {
        try {
          std::vector<SearchResult> results = provider->search(phrase);
          rec.match_count = count_for_mode(phrase, results, opts.mode);
          rec.provider_id = pid;
          rec.queried_at = provider->live() ? now_rfc3339() : std::string{};
          if (cache) {
            cache->put({phrase, pid, rec.queried_at, rec.match_count, std::move(results)});
          }
        } catch (const ProviderError&) {
          rec.resolved = false;
          rec.provider_id = pid;
        }
      } else {
        rec.resolved = false;
      }
      records[i] = std::move(rec);
    }
  };

  unsigned workers = std::max(1u, opts.max_in_flight);
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(1, candidates.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  PruneOutcome out;
  out.records = std::move(records);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const EvidenceRecord& rec = out.records[i];
    if (!rec.resolved) {
      out.unresolved.push_back(candidates[i]);
    } else if (rec.match_count >= opts.threshold) {
      out.kept.push_back(candidates[i]);
    } else {
      out.dropped.push_back(candidates[i]);
    }
  }
  return out;
}

FixtureProvider::FixtureProvider(const std::filesystem::path& path) {
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    CacheEntry e = parse_cache_line(lines[i], path.string(), i + 1);
    canned_.emplace(e.query, std::move(e.results));  // first entry wins
  }
}

std::vector<SearchResult> FixtureProvider::search(const std::string& phrase) {
  auto it = canned_.find(phrase);
  return it == canned_.end() ? std::vector<SearchResult>{} : it->second;
}

namespace {

std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
        c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xf];
    }
  }
  return out;
}

class RateLimiter {
 public:
  explicit RateLimiter(double qps)
      : interval_(qps > 0 ? std::chrono::nanoseconds(static_cast<std::int64_t>(1e9 / qps))
                          : std::chrono::nanoseconds(0)) {}

  void acquire() {
    if (interval_.count() == 0) return;
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      slot = std::max(std::chrono::steady_clock::now(), next_);
      next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
  std::chrono::nanoseconds interval_;
};

class HttpProvider final : public SearchProvider {
 public:
  explicit HttpProvider(const HttpProviderConfig& config)
      : config_(config), limiter_(config.rate_limit_qps) {
    std::string url = config_.endpoint;
    std::size_t scheme = url.find("://");
    std::size_t path_start = scheme == std::string::npos ? url.find('/')
                                                         : url.find('/', scheme + 3);
    if (path_start == std::string::npos) {
      base_ = url;
      path_ = "/";
    } else {
      base_ = url.substr(0, path_start);
      path_ = url.substr(path_start);
    }
  }

  bool live() const override { return true; }
  std::string id() const override { return "http:" + config_.endpoint; }

  std::vector<SearchResult> search(const std::string& phrase) override {
    std::string target = path_ + "?q=%22" + url_encode(phrase) + "%22";
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
      if (const char* key = std::getenv(config_.api_key_env.c_str())) {
        headers.emplace("X-Api-Key", key);
      }
    }
    std::string last_error = "no attempt made";
    for (unsigned attempt = 0; attempt <= config_.retries; ++attempt) {
      limiter_.acquire();
      httplib::Client client(base_);
      client.set_connection_timeout(10);
      client.set_read_timeout(30);
      httplib::Result res = client.Get(target, headers);
      if (!res) {
        last_error = "transport error " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP status " + std::to_string(res->status);
        continue;
      }
      try {
        json j = json::parse(res->body);
        std::vector<SearchResult> results;
        for (const auto& r : j.value("results", json::array())) {
          results.push_back({r.value("title", std::string{}),
                             r.value("snippet", std::string{}),
                             r.value("url", std::string{})});
        }
        return results;
      } catch (const json::exception& e) {
        last_error = std::string("bad response body: ") + e.what();
      }
    }
    throw ProviderError("query \"" + phrase + "\" failed after " +
                        std::to_string(config_.retries + 1) + " attempts: " + last_error);
  }

 private:
  HttpProviderConfig config_;
  std::string base_;
  std::string path_;
  RateLimiter limiter_;
};

}  // namespace

std::unique_ptr<SearchProvider> make_http_provider(const HttpProviderConfig& config) {
  return std::make_unique<HttpProvider>(config);
}

}  // namespace termite
