#include "nuzi/npn/emit.hpp"

#include <sstream>

namespace nuzi::npn {

namespace {

void append_markers(std::string& out, const std::vector<int>& markers) {
  for (int m : markers) out += "(" + std::to_string(m) + ") ";
}

std::string variant_token(const Variant& v) {
  std::string out;
  if (v.gender_prefix) out += std::string("^{") + v.gender_prefix + "}";
  out += v.spelling;
  return out;
}

}  // namespace

std::string emit_docref(const DocRef& ref) {
  std::string out;
  append_markers(out, ref.variant_markers);
  out += ref.publication;
  if (ref.volume > 0) out += " " + roman_numeral(ref.volume);
  out += " " + std::to_string(ref.tablet);
  for (size_t i = 0; i < ref.lines.size(); ++i) {
    const LineRef& lr = ref.lines[i];
    out += i == 0 ? ":" : ",";
    out += i == 0 ? "" : " ";
    if (lr.reverse) out += "rev. ";
    if (lr.bracketed)
      out += "[" + std::to_string(lr.value) + "]";
    else
      out += std::to_string(lr.value);
  }
  return out;
}

std::string emit_canonical(const Corpus& corpus) {
  std::ostringstream out;
  for (const auto& e : corpus.entries) {
    out << e.display_headword();
    for (const auto& r : e.remarks) out << " (" << r << ")";
    out << "\n";

    // the spelling line is omitted for entries that never had one
    if (e.standard != e.display_headword() || !e.variants.empty()) {
      out << " ";
      if (e.standard_prefix) out << "^{" << e.standard_prefix << "}";
      out << e.standard;
      for (size_t i = 0; i < e.variants.size(); ++i) {
        const Variant& v = e.variants[i];
        out << (i == 0 ? ", var. " : ", ");
        if (v.excised) out << "<<";
        out << "(" << v.number << ") " << variant_token(v);
        if (v.excised) out << ">>";
      }
      out << "\n";
    }

    for (const auto& s : e.subentries) {
      out << "  " << s.family_number << ")";
      bool first = true;
      auto sep = [&]() -> std::ostream& {
        out << (first ? " " : "; ");
        first = false;
        return out;
      };
      // free citations first: on re-parse anything after a kinship clause
      // would bind to that clause
      for (const auto& r : s.doc_refs) sep() << emit_docref(r);
      for (const auto& k : s.kinships) {
        sep();
        std::string markers;
        append_markers(markers, k.variant_markers);
        out << relation_abbrev(k.relation) << " of " << markers << k.object_name;
        for (const auto& r : k.supporting_refs) out << ", " << emit_docref(r);
      }
      for (const auto& p : s.professions) sep() << p;
      for (const auto& r : s.remarks) sep() << "(" << r << ")";
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace nuzi::npn
