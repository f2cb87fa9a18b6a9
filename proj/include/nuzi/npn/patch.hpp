#pragma once

#include <string>
#include <vector>

#include "nuzi/npn/types.hpp"

namespace nuzi::npn {

// One directive per line, '#' comments:
//   ADDKIN   <HEADWORD> <family#> <rel> <name> [<docref list>]
//   IDENTIFY <HEADWORD> <family#>,<family#>,...
//   REPLACE  <HEADWORD> <family#> <new sub-entry text>
struct PatchDirective {
  enum Kind { AddKin, Identify, Replace } kind = AddKin;
  std::string headword;
  int family_number = 0;              // ADDKIN / REPLACE
  std::vector<int> family_numbers;    // IDENTIFY
  KinshipAssertion kinship;           // ADDKIN
  std::string replacement_body;       // REPLACE
  int line = 0;
};

struct PatchFile {
  std::vector<PatchDirective> directives;

  std::vector<PatchDirective> identifications() const;
};

struct PatchTargetMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConflictingPatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PatchSyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PatchFile parse_patch_file(const std::string& text);

/// Applies ADDKIN and REPLACE directives in file order. IDENTIFY directives
/// are validated against the corpus but take effect later, on a person
/// universe. Throws PatchTargetMissing or ConflictingPatch.
Corpus apply_patches(const Corpus& corpus, const PatchFile& patches);

}  // namespace nuzi::npn
