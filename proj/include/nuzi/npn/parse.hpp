#pragma once

#include <string>

#include "nuzi/npn/types.hpp"

namespace nuzi::npn {

/// Parses index text in the electronic-NPN escape alphabet. Every input line
/// is attributed to a headword, a variant line, a sub-entry (or one of its
/// continuation lines) or blank; anything else is recorded in `issues` with
/// its line number. Throws MalformedEntry for an unusable headword line and
/// DuplicateFamilyNumber for a repeated sub-entry number under one headword.
ParseResult parse_corpus(const std::string& text);

/// Parses a single sub-entry body ("s. of X, JEN 208:1; ..."), as found
/// after the family number. Used by parse_corpus and by REPLACE patches.
SubEntry parse_subentry_body(int family_number, const std::string& body,
                             std::vector<ParseIssue>& issues, int line_no);

/// Parses a standalone citation list, e.g. "JEN 208:2; JENu 414".
std::vector<DocRef> parse_docref_list(const std::string& text);

}  // namespace nuzi::npn
