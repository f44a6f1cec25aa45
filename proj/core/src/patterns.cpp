#include "termite/patterns.hpp"

#include "termite/errors.hpp"
#include "termite/util.hpp"

namespace termite {

PatternSet default_patterns() {
  using enum PosTag;
  PatternSet s;
  s.patterns = {
      {NOUN},
      {VERB},
      {ADJ},
      {NOUN, NOUN},
      {ADJ, NOUN},
      {PREP, NOUN},
      {VERB, NOUN},
      {NOUN, NOUN, NOUN},
      {PREP, NOUN, NOUN},
      {NOUN, PREP, NOUN},
      {VERB, NOUN, NOUN},
  };
  return s;
}

std::vector<NGramCandidate> filter_by_patterns(std::span<const NGramCandidate> candidates,
                                               const PatternSet& patterns) {
  std::vector<NGramCandidate> out;
  for (const auto& c : candidates) {
    if (patterns.contains(c.pos_pattern)) out.push_back(c);
  }
  return out;
}

PatternSet parse_patterns(const std::string& text, const std::string& origin) {
  PatternSet s;
  std::vector<std::string> lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::vector<PosTag> pattern;
    for (const auto& name : split(line, '-')) {
      auto tag = parse_tag(trim(name));
      if (!tag) {
        throw DataError(origin + ": line " + std::to_string(i + 1) + ": unknown tag \"" + name +
                        "\"");
      }
      pattern.push_back(*tag);
    }
    if (pattern.empty() || pattern.size() > 3) {
      throw DataError(origin + ": line " + std::to_string(i + 1) +
                      ": pattern length must be 1..3");
    }
    s.patterns.insert(std::move(pattern));
  }
  if (s.patterns.empty()) throw DataError(origin + ": empty pattern set");
  return s;
}

PatternSet load_patterns(const std::filesystem::path& path) {
  return parse_patterns(read_file(path), path.string());
}

std::string serialize_patterns(const PatternSet& patterns) {
  std::string out;
  for (const auto& p : patterns.patterns) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += '-';
      out += to_string(p[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace termite
