#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace termite {

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);  // drops empty tokens
std::string join(std::span<const std::string> parts, std::string_view sep);
std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);
std::vector<std::string> read_lines(const std::filesystem::path& p);

/// FNV-1a 64-bit, used for config hashes and fold fingerprints.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string to_hex(std::uint64_t v);

/// Deterministic RNG wrapper. std::uniform_int_distribution is not
/// bit-portable across standard libraries, so bounded draws and shuffles
/// are implemented here on top of mt19937_64.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Unbiased draw in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n);

  /// Uniform double in [0, 1) with 53 significant bits.
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace termite
