#include "termite/tags.hpp"

namespace termite {

std::string_view to_string(PosTag t) {
  switch (t) {
    case PosTag::NOUN: return "NOUN";
    case PosTag::VERB: return "VERB";
    case PosTag::ADJ: return "ADJ";
    case PosTag::PREP: return "PREP";
    case PosTag::DET: return "DET";
    case PosTag::PRON: return "PRON";
    case PosTag::ADV: return "ADV";
    case PosTag::NUM: return "NUM";
    case PosTag::PUNCT: return "PUNCT";
    case PosTag::SENT: return "SENT";
    case PosTag::OTHER: return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> parse_tag(std::string_view name) {
  if (name == "NOUN") return PosTag::NOUN;
  if (name == "VERB") return PosTag::VERB;
  if (name == "ADJ") return PosTag::ADJ;
  if (name == "PREP") return PosTag::PREP;
  if (name == "DET") return PosTag::DET;
  if (name == "PRON") return PosTag::PRON;
  if (name == "ADV") return PosTag::ADV;
  if (name == "NUM") return PosTag::NUM;
  if (name == "PUNCT") return PosTag::PUNCT;
  if (name == "SENT") return PosTag::SENT;
  if (name == "OTHER") return PosTag::OTHER;
  return std::nullopt;
}

TagMap TagMap::canonical_only() { return TagMap{}; }

TagMap TagMap::french_default() {
  TagMap m;
  // TreeTagger French tagset; subtype variants resolve through the ':'
  // prefix rule, so only the bare prefixes are listed.
  m.set("NOM", PosTag::NOUN);
  m.set("NAM", PosTag::NOUN);
  m.set("VER", PosTag::VERB);
  m.set("ADJ", PosTag::ADJ);
  m.set("PRP", PosTag::PREP);
  m.set("DET", PosTag::DET);
  m.set("PRO", PosTag::PRON);
  m.set("ADV", PosTag::ADV);
  m.set("NUM", PosTag::NUM);
  m.set("PUN", PosTag::PUNCT);
  m.set("SENT", PosTag::SENT);
  m.set("KON", PosTag::OTHER);
  m.set("INT", PosTag::OTHER);
  m.set("ABR", PosTag::OTHER);
  m.set("SYM", PosTag::OTHER);
  return m;
}

void TagMap::set(std::string native, PosTag tag) { entries_[std::move(native)] = tag; }

PosTag TagMap::resolve(std::string_view native) const {
  if (auto canonical = parse_tag(native)) return *canonical;
  auto it = entries_.find(std::string(native));
  if (it != entries_.end()) return it->second;
  std::size_t colon = native.find(':');
  if (colon != std::string_view::npos) {
    it = entries_.find(std::string(native.substr(0, colon)));
    if (it != entries_.end()) return it->second;
  }
  return PosTag::OTHER;
}

}  // namespace termite
