#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace nuzi::npn {

/// Identity of one numbered sub-entry inside the index: the alphabetical
/// rank of the headword plus the printed family number, e.g. (1260, 1).
struct PersonId {
  int name_number = 0;
  int family_number = 0;
  auto operator<=>(const PersonId&) const = default;
};

enum class Relation {
  Son,
  Daughter,
  Father,
  Mother,
  Brother,
  Grandfather,
  Grandmother,
  Grandson,
  GreatGrandfather,
  GreatGrandmother,
  Wife,
};

/// Abbreviation as printed in the index ("s.", "gf.", ...).
const char* relation_abbrev(Relation r);
/// Long name used in reports ("son", "grandfather", ...).
const char* relation_name(Relation r);
std::optional<Relation> relation_from_abbrev(const std::string& tok);

/// Generations the object stands above the subject: +1 for "s. of B"
/// (B is the parent), -1 for "f. of A", +2 for "gs. of B", 0 for br./w.
int relation_ancestor_level(Relation r);
/// true for f./m./gf./gm./ggf./ggm. (the subject acts as an ancestor).
bool relation_is_parental_role(Relation r);
/// true for s./d. (the subject is somebody's child).
bool relation_is_child_role(Relation r);

struct LineRef {
  int value = 0;
  bool bracketed = false;  // printed as [20]
  bool reverse = false;    // printed as rev. 20
  auto operator<=>(const LineRef&) const = default;
};

/// One tablet citation: publication abbreviation, optional roman volume,
/// tablet number and the lines on which the name appears. Abbreviations
/// ending in a lowercase "u" (JENu) cite unpublished tablets and carry no
/// line numbers.
struct DocRef {
  std::string publication;
  int volume = 0;  // parsed roman numeral, 0 when absent
  int tablet = 0;
  std::vector<LineRef> lines;
  std::vector<int> variant_markers;  // "(2)" markers preceding the citation
  bool unpublished = false;

  using Key = std::tuple<std::string, int, int>;
  Key key() const { return {publication, volume, tablet}; }
  std::string label() const;
  auto operator<=>(const DocRef&) const = default;
};

struct KinshipAssertion {
  Relation relation = Relation::Son;
  std::string object_name;
  std::vector<DocRef> supporting_refs;
  std::vector<int> variant_markers;  // markers bound to the kinship itself
  auto operator<=>(const KinshipAssertion&) const = default;
};

struct SubEntry {
  int family_number = 0;
  std::vector<KinshipAssertion> kinships;
  std::vector<std::string> professions;
  std::vector<DocRef> doc_refs;  // citations not tied to a kinship clause
  std::vector<std::string> remarks;
  auto operator<=>(const SubEntry&) const = default;

  /// All citations of the sub-entry, own refs plus kinship supports.
  std::vector<DocRef> all_refs() const;
};

struct Variant {
  int number = 0;  // printed variant number, 2 upward
  std::string spelling;
  char gender_prefix = 0;  // 'f' or 'm' when the token carried ^{f}/^{m}
  bool excised = false;    // printed inside <<...>>
  auto operator<=>(const Variant&) const = default;
};

struct NameEntry {
  std::string headword;     // capital form without the gender prefix
  char gender_prefix = 0;   // ^{f} or ^{m} on the headword
  bool female = false;
  std::string standard;     // spelling from the variant line, or headword
  char standard_prefix = 0;
  std::vector<Variant> variants;  // numbered from 2, contiguous
  std::vector<SubEntry> subentries;
  std::vector<std::string> remarks;  // e.g. (see also Artar-tilla)
  auto operator<=>(const NameEntry&) const = default;

  std::string display_headword() const;
  const SubEntry* find(int family_number) const;
};

/// The whole parsed index. Entries are kept sorted under the collation of
/// the escape alphabet; name_number(i) is simply 1 + position.
struct Corpus {
  std::vector<NameEntry> entries;

  bool operator==(const Corpus&) const = default;

  int name_number(const std::string& headword) const;  // 0 if absent
  const NameEntry* entry(int name_number) const;
  const NameEntry* entry(const std::string& headword) const;
  const SubEntry* find(const PersonId& id) const;

  /// spelled form -> standard spelling of the owning entry. Spellings
  /// claimed by more than one entry are dropped (exact matching only).
  std::map<std::string, std::string> variant_map() const;

  /// Re-sorts entries by collation key; call after manual edits.
  void sort_entries();
};

struct ParseIssue {
  int line = 0;
  std::string message;
};

struct ParseResult {
  Corpus corpus;
  std::vector<ParseIssue> issues;
};

struct MalformedEntry : std::runtime_error {
  int line;
  MalformedEntry(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

struct DuplicateFamilyNumber : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Collation key of a headword: the base capital letters with every escape
/// group, determinative and punctuation stripped.
std::string collation_key(const std::string& headword);

std::string roman_numeral(int value);
int roman_value(const std::string& token);  // 0 when not a roman numeral

}  // namespace nuzi::npn
