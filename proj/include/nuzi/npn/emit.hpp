#pragma once

#include <string>

#include "nuzi/npn/types.hpp"

namespace nuzi::npn {

/// Deterministic canonical serialization: headword line, spelling/variant
/// line, one line per sub-entry with normalized whitespace and explicit
/// publication on every citation. parse(emit(c)) == c structurally and
/// emit∘parse is idempotent on its own output.
std::string emit_canonical(const Corpus& corpus);

std::string emit_docref(const DocRef& ref);

}  // namespace nuzi::npn
