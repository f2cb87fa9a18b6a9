#include <algorithm>
#include <array>
#include <functional>
#include <cctype>

#include "nuzi/npn/types.hpp"

namespace nuzi::npn {

namespace {

struct RelationInfo {
  Relation rel;
  const char* abbrev;
  const char* name;
  int level;  // ancestor level of the object relative to the subject
};

constexpr std::array<RelationInfo, 11> kRelations{{
    {Relation::Son, "s.", "son", +1},
    {Relation::Daughter, "d.", "daughter", +1},
    {Relation::Father, "f.", "father", -1},
    {Relation::Mother, "m.", "mother", -1},
    {Relation::Brother, "br.", "brother", 0},
    {Relation::Grandfather, "gf.", "grandfather", -2},
    {Relation::Grandmother, "gm.", "grandmother", -2},
    {Relation::Grandson, "gs.", "grandson", +2},
    {Relation::GreatGrandfather, "ggf.", "great-grandfather", -3},
    {Relation::GreatGrandmother, "ggm.", "great-grandmother", -3},
    {Relation::Wife, "w.", "wife", 0},
}};

const RelationInfo& info(Relation r) {
  for (const auto& ri : kRelations)
    if (ri.rel == r) return ri;
  return kRelations[0];
}

}  // namespace

const char* relation_abbrev(Relation r) { return info(r).abbrev; }
const char* relation_name(Relation r) { return info(r).name; }

std::optional<Relation> relation_from_abbrev(const std::string& tok) {
  std::string t = tok;
  if (!t.empty() && t.back() != '.') t += '.';
  for (const auto& ri : kRelations)
    if (t == ri.abbrev) return ri.rel;
  return std::nullopt;
}

int relation_ancestor_level(Relation r) { return info(r).level; }

bool relation_is_parental_role(Relation r) { return info(r).level < 0; }
bool relation_is_child_role(Relation r) { return info(r).level > 0 && info(r).level < 2; }

std::string roman_numeral(int v) {
  static const std::pair<int, const char*> parts[] = {
      {1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"}, {100, "C"},
      {90, "XC"},  {50, "L"},   {40, "XL"}, {10, "X"},   {9, "IX"},
      {5, "V"},    {4, "IV"},   {1, "I"}};
  std::string out;
  for (auto [n, s] : parts)
    while (v >= n) {
      out += s;
      v -= n;
    }
  return out;
}

int roman_value(const std::string& s) {
  auto digit = [](char c) -> int {
    switch (c) {
      case 'I': return 1;
      case 'V': return 5;
      case 'X': return 10;
      case 'L': return 50;
      case 'C': return 100;
      case 'D': return 500;
      case 'M': return 1000;
      default: return 0;
    }
  };
  if (s.empty()) return 0;
  int total = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    int v = digit(s[i]);
    if (v == 0) return 0;
    if (i + 1 < s.size() && digit(s[i + 1]) > v)
      total -= v;
    else
      total += v;
  }
  return total;
}

std::string DocRef::label() const {
  std::string out = publication;
  if (volume > 0) out += " " + roman_numeral(volume);
  out += " " + std::to_string(tablet);
  return out;
}

std::vector<DocRef> SubEntry::all_refs() const {
  std::vector<DocRef> out = doc_refs;
  for (const auto& k : kinships)
    out.insert(out.end(), k.supporting_refs.begin(), k.supporting_refs.end());
  return out;
}

std::string NameEntry::display_headword() const {
  if (gender_prefix) return std::string("^{") + gender_prefix + "}" + headword;
  return headword;
}

const SubEntry* NameEntry::find(int family_number) const {
  for (const auto& s : subentries)
    if (s.family_number == family_number) return &s;
  return nullptr;
}

std::string collation_key(const std::string& headword) {
  std::string key;
  for (size_t i = 0; i < headword.size(); ++i) {
    char c = headword[i];
    if ((c == '^' || c == '_') && i + 1 < headword.size() &&
        headword[i + 1] == '{') {
      size_t close = headword.find('}', i + 2);
      if (close == std::string::npos) break;
      i = close;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)))
      key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return key;
}

void Corpus::sort_entries() {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const NameEntry& a, const NameEntry& b) {
                     auto ka = collation_key(a.headword);
                     auto kb = collation_key(b.headword);
                     if (ka != kb) return ka < kb;
                     return a.headword < b.headword;
                   });
}

int Corpus::name_number(const std::string& headword) const {
  for (size_t i = 0; i < entries.size(); ++i)
    if (entries[i].headword == headword ||
        entries[i].display_headword() == headword)
      return static_cast<int>(i) + 1;
  return 0;
}

const NameEntry* Corpus::entry(int number) const {
  if (number < 1 || number > static_cast<int>(entries.size())) return nullptr;
  return &entries[number - 1];
}

const NameEntry* Corpus::entry(const std::string& headword) const {
  int n = name_number(headword);
  return n ? &entries[n - 1] : nullptr;
}

const SubEntry* Corpus::find(const PersonId& id) const {
  const NameEntry* e = entry(id.name_number);
  return e ? e->find(id.family_number) : nullptr;
}

std::map<std::string, std::string> Corpus::variant_map() const {
  auto prefixed = [](char p, const std::string& s) {
    return p ? std::string("^{") + p + "}" + s : s;
  };
  std::map<std::string, int> owners;
  auto spellings = [&](const NameEntry& e,
                       const std::function<void(const std::string&)>& fn) {
    fn(e.standard);
    if (e.standard_prefix) fn(prefixed(e.standard_prefix, e.standard));
    for (const auto& v : e.variants) {
      fn(v.spelling);
      if (v.gender_prefix) fn(prefixed(v.gender_prefix, v.spelling));
    }
  };
  for (const auto& e : entries)
    spellings(e, [&](const std::string& s) { owners[s]++; });
  std::map<std::string, std::string> map;
  for (const auto& e : entries)
    spellings(e, [&](const std::string& s) {
      if (owners[s] == 1) map[s] = e.standard;
    });
  return map;
}

}  // namespace nuzi::npn
