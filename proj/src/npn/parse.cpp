#include "nuzi/npn/parse.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace nuzi::npn {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

size_t indent_of(const std::string& s) {
  size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return i;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// characters that may occur inside a spelled name or headword
bool is_name_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '-': case '.': case '[': case ']': case '<': case '>':
    case '*': case '\'': case '~': case '^': case '{': case '}':
    case '_':
      return true;
    default:
      return false;
  }
}

bool has_letter(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c));
  });
}

// "25)" at the start of a line body => new sub-entry
bool starts_subentry(const std::string& body, int& number, size_t& after) {
  size_t i = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
  if (i == 0 || i >= body.size() || body[i] != ')') return false;
  number = std::stoi(body.substr(0, i));
  after = i + 1;
  return true;
}

// ---------------------------------------------------------------------------
// sub-entry body scanner

struct Scanner {
  const std::string& s;
  size_t p = 0;
  explicit Scanner(const std::string& str) : s(str) {}

  void skip_ws() { while (p < s.size() && is_space(s[p])) ++p; }
  bool done() { skip_ws(); return p >= s.size(); }
  char peek() { skip_ws(); return p < s.size() ? s[p] : '\0'; }

  // balanced (...) group; returns the inside without the parentheses
  std::string paren_group() {
    skip_ws();
    size_t start = ++p;  // past '('
    int depth = 1;
    while (p < s.size() && depth > 0) {
      if (s[p] == '(') ++depth;
      if (s[p] == ')') --depth;
      ++p;
    }
    return s.substr(start, p - start - (depth == 0 ? 1 : 0));
  }

  std::string word() {
    skip_ws();
    size_t start = p;
    while (p < s.size() && is_name_char(s[p])) ++p;
    return s.substr(start, p - start);
  }

  bool try_int(int& out) {
    skip_ws();
    size_t start = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    if (p == start) return false;
    if (p < s.size() && is_name_char(s[p]) && s[p] != '.') {  // part of a name
      p = start;
      return false;
    }
    out = std::stoi(s.substr(start, p - start));
    return true;
  }
};

// a kinship clause under construction: one relation, one or more objects,
// a shared citation list
struct Clause {
  Relation rel;
  std::vector<std::string> objects;
  std::vector<DocRef> refs;
  std::vector<int> markers;
  bool saw_refs = false;
};

struct BodyParser {
  SubEntry sub;
  std::vector<ParseIssue>& issues;
  int line_no;

  std::optional<Clause> clause;     // open kinship clause
  bool kinship_scope = true;        // refs attach to clause while true
  std::string pub;                  // inherited publication
  int vol = 0;
  bool unpublished = false;
  DocRef* open_ref = nullptr;       // ref accepting further line numbers
  std::vector<int> pending_markers;

  BodyParser(std::vector<ParseIssue>& iss, int line) : issues(iss), line_no(line) {}

  void flush_clause() {
    if (!clause) return;
    for (const auto& obj : clause->objects) {
      KinshipAssertion k;
      k.relation = clause->rel;
      k.object_name = obj;
      k.supporting_refs = clause->refs;
      k.variant_markers = clause->markers;
      sub.kinships.push_back(std::move(k));
    }
    if (clause->objects.empty())
      issues.push_back({line_no, "kinship clause without object name"});
    clause.reset();
  }

  std::vector<DocRef>& ref_target() {
    if (clause && kinship_scope) {
      clause->saw_refs = true;
      return clause->refs;
    }
    return sub.doc_refs;
  }

  void new_ref(int tablet) {
    DocRef r;
    r.publication = pub;
    r.volume = vol;
    r.tablet = tablet;
    r.unpublished = unpublished;
    r.variant_markers = std::move(pending_markers);
    pending_markers.clear();
    auto& refs = ref_target();
    refs.push_back(std::move(r));
    open_ref = &refs.back();
  }

  void add_line(const LineRef& lr) {
    if (!open_ref) {
      issues.push_back({line_no, "line number without a citation"});
      return;
    }
    open_ref->lines.push_back(lr);
  }

  void remark(std::string text) {
    text = trim(text);
    if (!text.empty()) sub.remarks.push_back(std::move(text));
  }

  // parses "12" / "[20]" / "rev. 10" after a colon or comma
  bool parse_line_piece(Scanner& sc) {
    sc.skip_ws();
    if (sc.p >= sc.s.size()) return false;
    LineRef lr;
    if (sc.s[sc.p] == '[') {
      size_t close = sc.s.find(']', sc.p);
      std::string inside = sc.s.substr(sc.p + 1, close - sc.p - 1);
      if (close == std::string::npos || !all_digits(inside)) return false;
      lr.value = std::stoi(inside);
      lr.bracketed = true;
      sc.p = close + 1;
      add_line(lr);
      return true;
    }
    if (sc.s.compare(sc.p, 4, "rev.") == 0) {
      sc.p += 4;
      lr.reverse = true;
    }
    int v;
    if (!sc.try_int(v)) return false;
    lr.value = v;
    add_line(lr);
    return true;
  }

  // tablet reference "208:1" or "208" with publication context already set
  void parse_ref_tail(Scanner& sc, int tablet) {
    new_ref(tablet);
    sc.skip_ws();
    if (sc.p < sc.s.size() && sc.s[sc.p] == ':') {
      ++sc.p;
      if (!parse_line_piece(sc))
        issues.push_back({line_no, "empty line list after ':'"});
    }
  }

  // one comma/semicolon-separated item
  void parse_item(const std::string& raw, char sep) {
    std::string text = trim(raw);
    if (text.empty()) return;
    if (sep == ';') open_ref = nullptr;  // a semicolon ends the line list

    Scanner sc(text);
    bool and_prefix = false;
    while (!sc.done()) {
      char c = sc.peek();
      if (c == '(') {
        std::string group = sc.paren_group();
        if (all_digits(trim(group)))
          pending_markers.push_back(std::stoi(trim(group)));
        else
          remark(group);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t save = sc.p;
        int num;
        if (!sc.try_int(num)) {  // digits glued to name characters
          std::string w = sc.word();
          handle_name(w, and_prefix);
          continue;
        }
        sc.skip_ws();
        if (sc.p < sc.s.size() && sc.s[sc.p] == ':') {
          ++sc.p;
          new_ref(num);
          if (!parse_line_piece(sc))
            issues.push_back({line_no, "empty line list after ':'"});
        } else if (open_ref && !open_ref->lines.empty() && sep != ';') {
          add_line({num, false, false});
        } else if (!pub.empty()) {
          new_ref(num);
        } else {
          issues.push_back({line_no, "number '" + std::to_string(num) +
                                         "' with no citation context"});
          (void)save;
        }
        continue;
      }
      if (c == '[') {
        // bracketed line number vs bracket-restored name
        size_t close = text.find(']', sc.p);
        std::string inside =
            close == std::string::npos ? "" : text.substr(sc.p + 1, close - sc.p - 1);
        bool name_tail = close != std::string::npos && close + 1 < text.size() &&
                         is_name_char(text[close + 1]);
        if (all_digits(inside) && open_ref && !name_tail) {
          parse_line_piece(sc);
        } else {
          std::string w = sc.word();
          handle_name(w, and_prefix);
        }
        continue;
      }
      // word: relation, publication, name, profession or remark keyword
      std::string w = sc.word();
      if (w.empty()) {  // stray character
        ++sc.p;
        continue;
      }
      if (w == "and") {
        and_prefix = true;
        continue;
      }
      if (auto rel = relation_from_abbrev(w)) {
        sc.skip_ws();
        size_t save = sc.p;
        std::string of = sc.word();
        if (of == "of") {
          flush_clause();
          clause = Clause{};
          clause->rel = *rel;
          clause->markers = std::move(pending_markers);
          pending_markers.clear();
          kinship_scope = true;
          // object name may carry its own markers
          while (sc.peek() == '(') {
            std::string g = sc.paren_group();
            if (all_digits(trim(g)))
              clause->markers.push_back(std::stoi(trim(g)));
            else
              remark(g);
          }
          std::string obj = sc.word();
          if (obj.empty())
            issues.push_back({line_no, "relation without object name"});
          else
            clause->objects.push_back(obj);
          continue;
        }
        sc.p = save;  // not a relation after all, fall through as name/word
      }
      if (w == "read" || w == "seal" || w == "witness" || w == "idem" ||
          w == "cf." || w == "see") {
        remark(w + (sc.p < text.size() ? " " + trim(text.substr(sc.p)) : ""));
        sc.p = text.size();
        continue;
      }
      if (w == "rev." && open_ref) {
        sc.p -= 4;
        parse_line_piece(sc);
        continue;
      }
      // publication abbreviation: pure letters directly followed by a
      // number, or by a roman volume and then a number
      bool pure_alpha = std::all_of(w.begin(), w.end(), [](char ch) {
        return std::isalpha(static_cast<unsigned char>(ch));
      });
      if (pure_alpha) {
        size_t save = sc.p;
        sc.skip_ws();
        std::string nxt;
        {
          size_t q = sc.p;
          while (q < text.size() && is_name_char(text[q])) ++q;
          nxt = text.substr(sc.p, q - sc.p);
        }
        int volval = 0;
        bool roman = !nxt.empty() && (volval = roman_value(nxt)) > 0;
        bool followed_by_num =
            !nxt.empty() && std::isdigit(static_cast<unsigned char>(nxt[0]));
        if (followed_by_num || roman) {
          pub = w;
          unpublished = w.size() > 1 && w.back() == 'u';
          vol = 0;
          if (roman) {
            sc.word();  // consume the volume
            vol = volval;
          }
          int tablet;
          if (sc.try_int(tablet)) {
            sc.skip_ws();
            if (sc.p < text.size() && text[sc.p] == ':') {
              ++sc.p;
              new_ref(tablet);
              if (!parse_line_piece(sc))
                issues.push_back({line_no, "empty line list after ':'"});
            } else {
              new_ref(tablet);
            }
          } else {
            issues.push_back({line_no, "publication '" + w + "' without tablet"});
          }
          continue;
        }
        sc.p = save;
      }
      handle_name(w, and_prefix);
    }
  }

  void handle_name(const std::string& w, bool& and_prefix) {
    bool lower = std::islower(static_cast<unsigned char>(w[0]));
    bool caret = w[0] == '^' || w[0] == '[' || w[0] == '.';
    if (lower && !caret) {
      // profession token; ends the kinship scope
      flush_clause();
      kinship_scope = false;
      open_ref = nullptr;
      sub.professions.push_back(w);
      pending_markers.clear();
      return;
    }
    if (clause) {
      if (!clause->saw_refs) {
        clause->objects.push_back(w);  // "gm. of A, B and C"
      }
      // otherwise: an alternative spelling of the object; citations that
      // follow keep supporting the same kinship
      and_prefix = false;
      return;
    }
    remark(w);
    and_prefix = false;
  }

  SubEntry finish(int family_number) {
    flush_clause();
    sub.family_number = family_number;
    return std::move(sub);
  }
};

// splits on top-level ',' and ';' (parentheses protect their content)
void for_each_item(const std::string& body,
                   const std::function<void(const std::string&, char)>& fn) {
  int depth = 0;
  char sep = '\0';
  size_t start = 0;
  for (size_t i = 0; i <= body.size(); ++i) {
    char c = i < body.size() ? body[i] : ';';
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || c == ';') ) {
      fn(body.substr(start, i - start), sep);
      sep = c;
      start = i + 1;
    }
  }
}

// ---------------------------------------------------------------------------
// variant line ("Ilu-ia, var. (2) I-lu-ia, <<(4) Ta-ia>>")

void parse_variant_line(NameEntry& entry, const std::string& text,
                        std::vector<ParseIssue>& issues, int line_no) {
  Scanner sc(text);
  auto read_token = [&](char& prefix) -> std::string {
    prefix = 0;
    sc.skip_ws();
    if (sc.s.compare(sc.p, 4, "^{f}") == 0) {
      prefix = 'f';
      sc.p += 4;
    } else if (sc.s.compare(sc.p, 4, "^{m}") == 0) {
      prefix = 'm';
      sc.p += 4;
    }
    return sc.word();
  };

  char prefix;
  std::string standard = read_token(prefix);
  if (standard.empty()) {
    issues.push_back({line_no, "empty spelling line"});
    return;
  }
  entry.standard = standard;
  entry.standard_prefix = prefix;
  if (prefix == 'f') entry.female = true;

  bool saw_var = false;
  while (!sc.done()) {
    sc.skip_ws();
    if (sc.s[sc.p] == ',') {
      ++sc.p;
      continue;
    }
    bool excised = false;
    if (sc.s.compare(sc.p, 2, "<<") == 0) {
      excised = true;
      sc.p += 2;
    }
    if (sc.peek() == '(') {
      std::string g = trim(sc.paren_group());
      if (!all_digits(g)) {
        entry.remarks.push_back(g);
        continue;
      }
      int number = std::stoi(g);
      char vprefix;
      std::string spelling = read_token(vprefix);
      // '>' is a legal name character, so the closing >> ends up glued on
      if (excised && spelling.size() >= 2 &&
          spelling.compare(spelling.size() - 2, 2, ">>") == 0)
        spelling.resize(spelling.size() - 2);
      sc.skip_ws();
      if (excised && sc.s.compare(sc.p, 2, ">>") == 0) sc.p += 2;
      if (spelling.empty()) {
        issues.push_back({line_no, "variant (" + g + ") without spelling"});
        continue;
      }
      entry.variants.push_back({number, spelling, vprefix, excised});
      if (vprefix == 'f') entry.female = true;
      continue;
    }
    std::string w = sc.word();
    if (w == "var.") {
      saw_var = true;
      continue;
    }
    if (w.empty()) {
      ++sc.p;
      continue;
    }
    issues.push_back({line_no, "unexpected token '" + w + "' in spelling line"});
  }
  (void)saw_var;

  // variant numbers contiguous from 2
  for (size_t i = 0; i < entry.variants.size(); ++i) {
    if (entry.variants[i].number != static_cast<int>(i) + 2) {
      issues.push_back({line_no, "non-contiguous variant numbers under " +
                                     entry.headword});
      break;
    }
  }
}

// headword line: capital token plus optional parenthesized remarks
void parse_headword_line(NameEntry& entry, const std::string& text, int line_no) {
  Scanner sc(text);
  sc.skip_ws();
  if (sc.s.compare(sc.p, 4, "^{f}") == 0) {
    entry.gender_prefix = 'f';
    entry.female = true;
    sc.p += 4;
  } else if (sc.s.compare(sc.p, 4, "^{m}") == 0) {
    entry.gender_prefix = 'm';
    sc.p += 4;
  }
  std::string word = sc.word();
  if (word.empty() || !has_letter(word))
    throw MalformedEntry(line_no, "headword expected, got '" + trim(text) + "'");
  if (std::islower(static_cast<unsigned char>(word[0])))
    throw MalformedEntry(line_no, "headword must start with a capital: '" + word + "'");
  entry.headword = word;
  while (!sc.done()) {
    if (sc.peek() == '(') {
      entry.remarks.push_back(trim(sc.paren_group()));
      continue;
    }
    std::string extra = sc.word();
    if (extra.empty()) {
      ++sc.p;
      continue;
    }
    throw MalformedEntry(line_no, "unexpected token '" + extra +
                                      "' after headword " + entry.headword);
  }
}

}  // namespace

SubEntry parse_subentry_body(int family_number, const std::string& body,
                             std::vector<ParseIssue>& issues, int line_no) {
  BodyParser bp(issues, line_no);
  for_each_item(body, [&](const std::string& item, char sep) {
    bp.parse_item(item, sep);
  });
  return bp.finish(family_number);
}

std::vector<DocRef> parse_docref_list(const std::string& text) {
  std::vector<ParseIssue> issues;
  SubEntry s = parse_subentry_body(0, text, issues, 0);
  return s.doc_refs;
}

ParseResult parse_corpus(const std::string& text) {
  ParseResult result;
  std::vector<ParseIssue>& issues = result.issues;

  struct PendingSub {
    int number;
    std::string body;
    int line;
  };
  struct PendingEntry {
    NameEntry entry;
    std::string variant_text;
    int variant_line = 0;
    std::vector<PendingSub> subs;
    int head_line = 0;
    bool saw_spelling = false;
  };

  std::vector<PendingEntry> pending;
  PendingEntry* cur = nullptr;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = trim(line);
    if (body.empty()) continue;

    size_t indent = indent_of(line);
    if (indent == 0) {
      PendingEntry pe;
      pe.head_line = line_no;
      parse_headword_line(pe.entry, line, line_no);
      pending.push_back(std::move(pe));
      cur = &pending.back();
      continue;
    }
    if (!cur) {
      issues.push_back({line_no, "indented line before any headword"});
      continue;
    }
    int number;
    size_t after;
    if (starts_subentry(body, number, after)) {
      cur->subs.push_back({number, trim(body.substr(after)), line_no});
      continue;
    }
    if (cur->subs.empty()) {
      // spelling/variant line, possibly wrapped
      if (!cur->saw_spelling) {
        cur->variant_text = body;
        cur->variant_line = line_no;
        cur->saw_spelling = true;
      } else {
        cur->variant_text += " " + body;
      }
      continue;
    }
    cur->subs.back().body += " " + body;
  }

  for (auto& pe : pending) {
    NameEntry entry = std::move(pe.entry);
    if (pe.saw_spelling)
      parse_variant_line(entry, pe.variant_text, issues, pe.variant_line);
    else
      entry.standard = entry.display_headword();

    std::set<int> seen;
    int prev = 0;
    for (auto& ps : pe.subs) {
      if (!seen.insert(ps.number).second)
        throw DuplicateFamilyNumber("duplicate sub-entry " +
                                    std::to_string(ps.number) + ") under " +
                                    entry.headword);
      if (ps.number <= prev)
        issues.push_back({ps.line, "family numbers not increasing under " +
                                       entry.headword});
      prev = ps.number;
      SubEntry sub = parse_subentry_body(ps.number, ps.body, issues, ps.line);
      if (sub.all_refs().empty())
        issues.push_back({ps.line, "sub-entry " + std::to_string(ps.number) +
                                       ") under " + entry.headword +
                                       " cites no document"});
      entry.subentries.push_back(std::move(sub));
    }
    result.corpus.entries.push_back(std::move(entry));
  }

  // reject duplicated headwords, then fix the alphabetical order
  std::map<std::string, int> heads;
  for (const auto& e : result.corpus.entries)
    if (++heads[e.display_headword()] > 1)
      throw MalformedEntry(0, "headword listed twice: " + e.display_headword());
  result.corpus.sort_entries();
  return result;
}

}  // namespace nuzi::npn
