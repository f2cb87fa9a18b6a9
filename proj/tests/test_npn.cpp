#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "nuzi/npn/emit.hpp"
#include "nuzi/npn/parse.hpp"
#include "nuzi/npn/patch.hpp"

using namespace nuzi::npn;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NUZI_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// (publication, volume, tablet, line) multiset over a whole corpus
std::map<std::tuple<std::string, int, int, int>, int> line_multiset(
    const Corpus& c) {
  std::map<std::tuple<std::string, int, int, int>, int> out;
  for (const auto& e : c.entries)
    for (const auto& s : e.subentries)
      for (const auto& r : s.all_refs())
        for (const auto& l : r.lines)
          out[{r.publication, r.volume, r.tablet, l.value}]++;
  return out;
}

}  // namespace

TEST_CASE("jen208 example block parses to the published structure") {
  ParseResult pr = parse_corpus(slurp("jen208_block.txt"));
  CHECK(pr.issues.empty());
  const Corpus& c = pr.corpus;
  REQUIRE(c.entries.size() == 3);

  // collation: H < I < T
  CHECK(c.entries[0].headword == "H_{u}AMATTAR");
  CHECK(c.entries[1].headword == "ILUI_{n}A");
  CHECK(c.entries[2].headword == "TAI_{n}A");
  CHECK(c.name_number("ILUI_{n}A") == 2);

  const NameEntry& ham = c.entries[0];
  CHECK(ham.standard == "H_{u}a-ma-at-ta-ar");
  REQUIRE(ham.variants.size() == 1);
  CHECK(ham.variants[0].number == 2);
  CHECK(ham.variants[0].spelling == "H_{u}a-ma-at-ti-ir");
  REQUIRE(ham.subentries.size() == 1);
  const SubEntry& h1 = ham.subentries[0];
  REQUIRE(h1.kinships.size() == 2);
  CHECK(h1.kinships[0].relation == Relation::Father);
  CHECK(h1.kinships[0].object_name == "I-lu-ia");
  REQUIRE(h1.kinships[0].supporting_refs.size() == 2);
  CHECK(h1.kinships[0].supporting_refs[0].label() == "JEN 208");
  REQUIRE(h1.kinships[0].supporting_refs[0].lines.size() == 1);
  CHECK(h1.kinships[0].supporting_refs[0].lines[0].value == 2);
  CHECK(h1.kinships[0].supporting_refs[1].label() == "JENu 414");
  CHECK(h1.kinships[0].supporting_refs[1].unpublished);
  CHECK(h1.kinships[0].supporting_refs[1].variant_markers ==
        std::vector<int>{2});
  CHECK(h1.kinships[1].relation == Relation::Grandfather);
  CHECK(h1.kinships[1].object_name == "Ta-a-a");
  REQUIRE(h1.kinships[1].supporting_refs.size() == 1);
  CHECK(h1.kinships[1].supporting_refs[0].tablet == 369);

  const NameEntry& ilu = c.entries[1];
  REQUIRE(ilu.subentries.size() == 7);
  const SubEntry& i1 = ilu.subentries[0];
  REQUIRE(i1.kinships.size() == 1);
  CHECK(i1.kinships[0].relation == Relation::Son);
  CHECK(i1.kinships[0].object_name == "H_{u}a-ma-at-ta-ar");
  REQUIRE(i1.kinships[0].supporting_refs.size() == 3);
  CHECK(i1.kinships[0].supporting_refs[0].lines.size() == 5);
  CHECK(i1.kinships[0].supporting_refs[1].tablet == 369);
  CHECK(i1.kinships[0].supporting_refs[1].lines.size() == 2);
  CHECK(i1.kinships[0].supporting_refs[2].label() == "JENu 414");

  // 7) scribe, JENu 625; AASOR XVI 56:41
  const SubEntry& i7 = ilu.subentries[6];
  CHECK(i7.kinships.empty());
  CHECK(i7.professions == std::vector<std::string>{"scribe"});
  REQUIRE(i7.doc_refs.size() == 2);
  CHECK(i7.doc_refs[0].label() == "JENu 625");
  CHECK(i7.doc_refs[0].unpublished);
  CHECK(i7.doc_refs[0].lines.empty());
  CHECK(i7.doc_refs[1].publication == "AASOR");
  CHECK(i7.doc_refs[1].volume == 16);
  CHECK(i7.doc_refs[1].tablet == 56);
  REQUIRE(i7.doc_refs[1].lines.size() == 1);
  CHECK(i7.doc_refs[1].lines[0].value == 41);

  // 4) has a volume change RA XXIII and an inline remark
  const SubEntry& i4 = ilu.subentries[3];
  REQUIRE(i4.kinships.size() == 1);
  REQUIRE(i4.kinships[0].supporting_refs.size() == 7);
  CHECK(i4.kinships[0].supporting_refs[3].publication == "HSS");
  CHECK(i4.kinships[0].supporting_refs[4].publication == "RA");
  CHECK(i4.kinships[0].supporting_refs[4].volume == 23);
  REQUIRE(i4.remarks.size() == 1);
  CHECK(i4.remarks[0] == "read so against Ili-iddina of copy");

  const NameEntry& tai = c.entries[2];
  REQUIRE(tai.variants.size() == 3);
  CHECK(tai.variants[2].excised);
  CHECK(tai.variants[2].spelling == "Ta-ia");
  const SubEntry& t30 = tai.subentries[0];
  CHECK(t30.family_number == 30);
  REQUIRE(t30.kinships.size() == 2);
  CHECK(t30.kinships[0].relation == Relation::Son);
  CHECK(t30.kinships[1].relation == Relation::Grandson);
  CHECK(t30.kinships[1].supporting_refs.size() == 1);
  CHECK(t30.kinships[1].supporting_refs[0].lines.size() == 11);
}

TEST_CASE("merged record and remaining paper blocks parse cleanly") {
  SUBCASE("iluia merged record") {
    ParseResult pr = parse_corpus(slurp("iluia_merged_record.txt"));
    CHECK(pr.issues.empty());
    const SubEntry& s = pr.corpus.entries[0].subentries[0];
    REQUIRE(s.kinships.size() == 2);
    CHECK(s.kinships[0].relation == Relation::Son);
    CHECK(s.kinships[0].supporting_refs.size() == 3);
    CHECK(s.kinships[1].relation == Relation::Father);
    CHECK(s.kinships[1].object_name == "Ta-a-a");
    REQUIRE(s.kinships[1].supporting_refs.size() == 1);
    CHECK(s.kinships[1].supporting_refs[0].lines.size() == 2);
  }
  SUBCASE("winnirke block") {
    ParseResult pr = parse_corpus(slurp("winnirke_block.txt"));
    CHECK(pr.issues.empty());
    const NameEntry& e = pr.corpus.entries[0];
    CHECK(e.female);
    CHECK(e.gender_prefix == 'f');
    CHECK(e.headword == "WINNIRKE");
    CHECK(e.standard == "Wi-in-ni-ir-ge");
    CHECK(e.standard_prefix == 'f');
    REQUIRE(e.variants.size() == 5);
    CHECK(e.variants[3].gender_prefix == 'm');
    CHECK(e.variants[3].number == 5);
    REQUIRE(e.subentries.size() == 3);
    // gm. of A and B  -> one assertion per object, shared citations
    const SubEntry& s1 = e.subentries[0];
    REQUIRE(s1.kinships.size() == 3);
    CHECK(s1.kinships[0].relation == Relation::Mother);
    CHECK(s1.kinships[1].object_name == "Um-bi-ia");
    CHECK(s1.kinships[2].object_name == "Ar-ru-um-ti");
    CHECK(s1.kinships[1].supporting_refs == s1.kinships[2].supporting_refs);
    REQUIRE(s1.kinships[1].supporting_refs.size() == 1);
    CHECK(s1.kinships[1].supporting_refs[0].lines.size() == 4);
    const SubEntry& s2 = e.subentries[1];
    REQUIRE(s2.kinships.size() == 4);
    CHECK(s2.kinships[3].object_name == "A-kip-[ta-s^{v}e-en-ni]");
    // 3) is a bare citation list with per-citation variant markers
    const SubEntry& s3 = e.subentries[2];
    CHECK(s3.kinships.empty());
    REQUIRE(s3.doc_refs.size() == 9);
    CHECK(s3.doc_refs[1].variant_markers == std::vector<int>{4});
    CHECK(s3.doc_refs[1].tablet == 164);
    CHECK(s3.doc_refs[4].tablet == 560);
    CHECK(s3.doc_refs[4].lines.size() == 14);
    CHECK(s3.remarks == std::vector<std::string>{"no det."});
  }
  SUBCASE("kizzuk blocks") {
    ParseResult pr = parse_corpus(slurp("kizzuk_blocks.txt"));
    CHECK(pr.issues.empty());
    const Corpus& c = pr.corpus;
    REQUIRE(c.entries.size() == 3);
    const NameEntry& ait = *c.entry("AITTARA");
    REQUIRE(ait.subentries.size() == 6);
    CHECK(ait.subentries[0].kinships[0].supporting_refs[0].variant_markers ==
          std::vector<int>({1, 4}));
    CHECK(ait.subentries[4].professions == std::vector<std::string>{"scribe"});
    CHECK(ait.subentries[4].remarks == std::vector<std::string>{"seal"});
    CHECK(ait.subentries[5].doc_refs.size() == 3);
    // arih-hamanna 13) has two son-clauses and one brother clause
    const NameEntry& ari = *c.entry("ARIH_{u}-H_{u}AMANNA");
    const SubEntry& a13 = *ari.find(13);
    REQUIRE(a13.kinships.size() == 3);
    CHECK(a13.kinships[0].relation == Relation::Son);
    CHECK(a13.kinships[1].relation == Relation::Son);
    CHECK(a13.kinships[2].relation == Relation::Brother);
    // 15) carries the bare "read ..." remark
    const SubEntry& a15 = *ari.find(15);
    REQUIRE(a15.remarks.size() == 1);
    CHECK(a15.remarks[0].substr(0, 4) == "read");
    // turi-kintar 3) has the bracketed line [20]
    const SubEntry& t3 = *c.entry("TURI-KINTAR")->find(3);
    REQUIRE(t3.kinships.size() == 1);
    const DocRef& r0 = t3.kinships[0].supporting_refs[0];
    REQUIRE(r0.lines.size() == 2);
    CHECK(r0.lines[1].value == 20);
    CHECK(r0.lines[1].bracketed);
  }
  SUBCASE("dispute blocks") {
    ParseResult pr = parse_corpus(slurp("dispute_blocks.txt"));
    CHECK(pr.issues.empty());
    const Corpus& c = pr.corpus;
    const NameEntry& hut = *c.entry("H_{u}UTII_{n}A");
    CHECK(hut.standard == "H_{u}UTII_{n}A");  // no spelling line in the block
    REQUIRE(hut.subentries.size() == 3);
    const SubEntry& h23 = *hut.find(23);
    REQUIRE(h23.kinships.size() == 2);
    CHECK(h23.kinships[1].relation == Relation::Brother);
    // unpublished run "JENu 620; 703; 729; (2) 730"
    const SubEntry& h65 = *hut.find(65);
    REQUIRE(h65.kinships.size() == 2);
    int jenu = 0;
    for (const auto& r : h65.kinships[0].supporting_refs)
      if (r.unpublished) ++jenu;
    CHECK(jenu == 4);
    CHECK(h65.kinships[1].relation == Relation::Grandfather);
    CHECK(h65.kinships[1].object_name == "^{f}Ia-ru-ut-te");
    const SubEntry& h92 = *hut.find(92);
    CHECK(h92.kinships.empty());
    CHECK(h92.doc_refs.size() == 19);

    const NameEntry& ast = *c.entry("AS^{v}TAR-TILLA");
    CHECK(ast.remarks == std::vector<std::string>{"see also Artar-tilla"});
    const SubEntry& a3 = *ast.find(3);
    CHECK(a3.kinships[0].object_name == "[....]-u^{~}");
    const DocRef& rev = a3.kinships[0].supporting_refs[0];
    CHECK(rev.publication == "HSS");
    CHECK(rev.volume == 9);
    CHECK(rev.tablet == 152);
    REQUIRE(rev.lines.size() == 1);
    CHECK(rev.lines[0].reverse);
    CHECK(rev.lines[0].value == 10);
    CHECK(ast.find(5)->professions ==
          std::vector<std::string>{"mas_{.}s_{.}artu"});
    CHECK(ast.find(6)->doc_refs.size() == 1);
    CHECK(ast.find(6)->doc_refs[0].lines.size() == 2);
  }
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_corpus("ILUI_{n}A\n Ilu-ia\n  1) JEN 1:2\n  1) JEN 3:4\n"),
                  DuplicateFamilyNumber);
  CHECK_THROWS_AS(parse_corpus("lowercase headword\n"), MalformedEntry);
  try {
    parse_corpus("GOOD\n Good\n  1) JEN 1:1\nbad headword line here ???\n");
  } catch (const MalformedEntry& e) {
    CHECK(e.line == 4);
  }
}

TEST_CASE("unattributable content is collected, not dropped") {
  ParseResult pr =
      parse_corpus("ENTRY\n Ent-ry\n  1) 99 with no context, JEN 1:2\n");
  CHECK(pr.issues.size() == 1);
  CHECK(pr.issues[0].line == 3);
}

TEST_CASE("docref multiset is preserved") {
  std::string text = slurp("jen208_block.txt");
  ParseResult pr = parse_corpus(text);
  auto ms = line_multiset(pr.corpus);
  // spot totals: every (pub, tablet, line) of the input appears exactly once
  CHECK(ms.at({"JEN", 0, 208, 2}) == 1);
  CHECK(ms.at({"JEN", 0, 208, 1}) == 1);
  // JEN 369:3 is printed under both ILUI_{n}A 1) and 5)
  CHECK(ms.at({"JEN", 0, 369, 3}) == 2);
  CHECK(ms.at({"RA", 23, 33, 33}) == 1);
  CHECK(ms.at({"HSS", 9, 35, 38}) == 1);
  int total = 0;
  for (const auto& [k, v] : ms) total += v;
  CHECK(total == 2 + 7 + 4 + 1 + 7 + 2 + 1 + 1 + 11);
}

TEST_CASE("canonical emission round-trips") {
  for (const char* name :
       {"jen208_block.txt", "iluia_merged_record.txt", "winnirke_block.txt",
        "kizzuk_blocks.txt", "dispute_blocks.txt", "ennamati_fixture.txt"}) {
    CAPTURE(name);
    ParseResult pr = parse_corpus(slurp(name));
    std::string once = emit_canonical(pr.corpus);
    ParseResult back = parse_corpus(once);
    CHECK(back.corpus == pr.corpus);
    CHECK(emit_canonical(back.corpus) == once);
  }
}

TEST_CASE("canonical golden form") {
  Corpus c;
  NameEntry e;
  e.headword = "ILUI_{n}A";
  e.standard = "Ilu-ia";
  SubEntry s;
  s.family_number = 1;
  DocRef r;
  r.publication = "JEN";
  r.tablet = 208;
  r.lines.push_back({1, false, false});
  s.doc_refs.push_back(r);
  e.subentries.push_back(s);
  c.entries.push_back(e);
  CHECK(emit_canonical(c) == "ILUI_{n}A\n Ilu-ia\n  1) JEN 208:1\n");
  CHECK(emit_canonical(Corpus{}) == "");
}

TEST_CASE("collation is a bijection consistent with base letters") {
  ParseResult pr = parse_corpus(slurp("jen208_block.txt"));
  Corpus c = pr.corpus;
  std::vector<std::string> keys;
  for (const auto& e : c.entries) keys.push_back(collation_key(e.headword));
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(collation_key("H_{u}AMATTAR") == "HAMATTAR");
  CHECK(collation_key("^{f}WINNIRKE") == "WINNIRKE");
  CHECK(collation_key("AS^{v}TAR-TILLA") == "ASTARTILLA");
  for (size_t i = 0; i < c.entries.size(); ++i)
    CHECK(c.name_number(c.entries[i].headword) == static_cast<int>(i) + 1);
}

TEST_CASE("patches") {
  ParseResult pr = parse_corpus(slurp("kizzuk_blocks.txt"));
  const Corpus& c = pr.corpus;

  SUBCASE("empty patch file leaves the corpus byte-identical") {
    Corpus patched = apply_patches(c, PatchFile{});
    CHECK(emit_canonical(patched) == emit_canonical(c));
  }
  SUBCASE("ADDKIN gains exactly the stated assertions") {
    PatchFile p = parse_patch_file("ADDKIN AITTARA 1 gs. Ki-ir-zi-ia\n");
    Corpus patched = apply_patches(c, p);
    const SubEntry& s = *patched.entry("AITTARA")->find(1);
    REQUIRE(s.kinships.size() == 2);
    CHECK(s.kinships[1].relation == Relation::Grandson);
    CHECK(s.kinships[1].object_name == "Ki-ir-zi-ia");
  }
  SUBCASE("two kinship additions add exactly two assertions") {
    std::string extra =
        "S^{v}URKI-TILLA\n S^{v}ur-ki-til-la\n  12) s. of Te-h_{u}i-ip-til-la, JEN 1:2\n"
        "WIRRAH_{u}H_{u}E\n Wi-ir-ra-ah_{u}-h_{u}e\n  3) JEN 2:3\n";
    Corpus base = parse_corpus(extra).corpus;
    auto count = [](const Corpus& cc) {
      int n = 0;
      for (const auto& e : cc.entries)
        for (const auto& s : e.subentries) n += static_cast<int>(s.kinships.size());
      return n;
    };
    PatchFile p = parse_patch_file(
        "ADDKIN S^{v}URKI-TILLA 12 f. It-h_{u}a-a-p<u>\n"
        "ADDKIN WIRRAH_{u}H_{u}E 3 gs. S^{v}ur-ki-til-la\n");
    Corpus patched = apply_patches(base, p);
    CHECK(count(patched) == count(base) + 2);
    CHECK(patched.entry("WIRRAH_{u}H_{u}E")->find(3)->kinships[0].object_name ==
          "S^{v}ur-ki-til-la");
  }
  SUBCASE("REPLACE swaps the sub-entry body") {
    PatchFile p = parse_patch_file("REPLACE AITTARA 3 f. of Ge-li-ia, JEN 600:28; 601:4\n");
    Corpus patched = apply_patches(c, p);
    CHECK(patched.entry("AITTARA")->find(3)->kinships[0].supporting_refs.size() == 2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(
        apply_patches(c, parse_patch_file("ADDKIN NOBODY 1 s. X-y\n")),
        PatchTargetMissing);
    CHECK_THROWS_AS(
        apply_patches(c, parse_patch_file("REPLACE AITTARA 3 JEN 1:1\n"
                                          "REPLACE AITTARA 3 JEN 2:2\n")),
        ConflictingPatch);
    CHECK_THROWS_AS(parse_patch_file("FROBNICATE X 1\n"), PatchSyntaxError);
  }
  SUBCASE("IDENTIFY validates targets against the corpus") {
    CHECK_NOTHROW(apply_patches(c, parse_patch_file("IDENTIFY TURI-KINTAR 1,2,3,4\n")));
    CHECK_THROWS_AS(
        apply_patches(c, parse_patch_file("IDENTIFY TURI-KINTAR 1,99\n")),
        PatchTargetMissing);
  }
}

TEST_CASE("variant map folds declared spellings only") {
  ParseResult pr = parse_corpus(slurp("jen208_block.txt"));
  auto vm = pr.corpus.variant_map();
  CHECK(vm.at("I-lu-ia") == "Ilu-ia");
  CHECK(vm.at("H_{u}a-ma-at-ti-ir") == "H_{u}a-ma-at-ta-ar");
  CHECK(vm.at("Da-a-a") == "Ta-a-a");
  CHECK(vm.count("Nobody") == 0);
}
