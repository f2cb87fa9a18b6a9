#include "nuzi/npn/patch.hpp"

#include <map>
#include <sstream>

#include "nuzi/npn/parse.hpp"

namespace nuzi::npn {

namespace {

std::vector<std::string> split_ws(const std::string& s, int max_parts) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    if (max_parts > 0 && static_cast<int>(out.size()) == max_parts - 1) {
      size_t end = s.find_last_not_of(" \t\r");
      out.push_back(s.substr(i, end - i + 1));
      break;
    }
    size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::vector<PatchDirective> PatchFile::identifications() const {
  std::vector<PatchDirective> out;
  for (const auto& d : directives)
    if (d.kind == PatchDirective::Identify) out.push_back(d);
  return out;
}

PatchFile parse_patch_file(const std::string& text) {
  PatchFile file;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto head = split_ws(line, 2);
    if (head.empty()) continue;

    PatchDirective d;
    d.line = line_no;
    const std::string& op = head[0];
    std::string rest = head.size() > 1 ? head[1] : "";
    if (op == "ADDKIN") {
      auto parts = split_ws(rest, 5);
      if (parts.size() < 4)
        throw PatchSyntaxError("line " + std::to_string(line_no) +
                               ": ADDKIN needs <HEADWORD> <family#> <rel> <name>");
      d.kind = PatchDirective::AddKin;
      d.headword = parts[0];
      d.family_number = std::stoi(parts[1]);
      auto rel = relation_from_abbrev(parts[2]);
      if (!rel)
        throw PatchSyntaxError("line " + std::to_string(line_no) +
                               ": unknown relation '" + parts[2] + "'");
      d.kinship.relation = *rel;
      d.kinship.object_name = parts[3];
      if (parts.size() == 5)
        d.kinship.supporting_refs = parse_docref_list(parts[4]);
    } else if (op == "IDENTIFY") {
      auto parts = split_ws(rest, 2);
      if (parts.size() != 2)
        throw PatchSyntaxError("line " + std::to_string(line_no) +
                               ": IDENTIFY needs <HEADWORD> <f#,f#,...>");
      d.kind = PatchDirective::Identify;
      d.headword = parts[0];
      std::string nums = parts[1];
      size_t pos = 0;
      while (pos < nums.size()) {
        size_t comma = nums.find(',', pos);
        if (comma == std::string::npos) comma = nums.size();
        std::string tok = nums.substr(pos, comma - pos);
        if (!tok.empty()) d.family_numbers.push_back(std::stoi(tok));
        pos = comma + 1;
      }
      if (d.family_numbers.size() < 2)
        throw PatchSyntaxError("line " + std::to_string(line_no) +
                               ": IDENTIFY needs at least two family numbers");
    } else if (op == "REPLACE") {
      auto parts = split_ws(rest, 3);
      if (parts.size() != 3)
        throw PatchSyntaxError("line " + std::to_string(line_no) +
                               ": REPLACE needs <HEADWORD> <family#> <text>");
      d.kind = PatchDirective::Replace;
      d.headword = parts[0];
      d.family_number = std::stoi(parts[1]);
      d.replacement_body = parts[2];
    } else {
      throw PatchSyntaxError("line " + std::to_string(line_no) +
                             ": unknown directive '" + op + "'");
    }
    file.directives.push_back(std::move(d));
  }
  return file;
}

Corpus apply_patches(const Corpus& corpus, const PatchFile& patches) {
  Corpus out = corpus;
  std::map<std::pair<std::string, int>, int> replaced;

  auto locate = [&](const PatchDirective& d, int family) -> SubEntry* {
    for (auto& e : out.entries) {
      if (e.headword != d.headword && e.display_headword() != d.headword)
        continue;
      for (auto& s : e.subentries)
        if (s.family_number == family) return &s;
      return nullptr;
    }
    return nullptr;
  };

  for (const auto& d : patches.directives) {
    switch (d.kind) {
      case PatchDirective::AddKin: {
        SubEntry* s = locate(d, d.family_number);
        if (!s)
          throw PatchTargetMissing("ADDKIN target " + d.headword + " " +
                                   std::to_string(d.family_number) + ") missing");
        s->kinships.push_back(d.kinship);
        break;
      }
      case PatchDirective::Replace: {
        SubEntry* s = locate(d, d.family_number);
        if (!s)
          throw PatchTargetMissing("REPLACE target " + d.headword + " " +
                                   std::to_string(d.family_number) + ") missing");
        auto key = std::make_pair(d.headword, d.family_number);
        if (replaced.count(key))
          throw ConflictingPatch("sub-entry " + d.headword + " " +
                                 std::to_string(d.family_number) +
                                 ") rewritten twice");
        replaced[key] = d.line;
        std::vector<ParseIssue> issues;
        *s = parse_subentry_body(d.family_number, d.replacement_body, issues,
                                 d.line);
        break;
      }
      case PatchDirective::Identify: {
        // corpus-level validation only; the merge happens on a universe
        for (int f : d.family_numbers)
          if (!locate(d, f))
            throw PatchTargetMissing("IDENTIFY target " + d.headword + " " +
                                     std::to_string(f) + ") missing");
        break;
      }
    }
  }
  return out;
}

}  // namespace nuzi::npn
