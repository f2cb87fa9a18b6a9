#include "nuzi/genealogy/identity.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace nuzi::gen {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// sub-entry enumeration shared by the criteria
struct SubIndex {
  std::vector<npn::PersonId> ids;
  std::map<npn::PersonId, int> index;

  explicit SubIndex(const npn::Corpus& corpus) {
    for (size_t ei = 0; ei < corpus.entries.size(); ++ei)
      for (const auto& s : corpus.entries[ei].subentries) {
        npn::PersonId id{static_cast<int>(ei) + 1, s.family_number};
        index[id] = static_cast<int>(ids.size());
        ids.push_back(id);
      }
  }
};

PersonUniverse universe_from_groups(const npn::Corpus& corpus,
                                    const SubIndex& sx, UnionFind& uf,
                                    std::string provenance) {
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < sx.ids.size(); ++i)
    groups[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));

  PersonUniverse u;
  u.provenance = std::move(provenance);
  std::vector<std::vector<int>> ordered;
  for (auto& [root, members] : groups) ordered.push_back(members);
  std::sort(ordered.begin(), ordered.end(),
            [&](const auto& a, const auto& b) { return sx.ids[a.front()] < sx.ids[b.front()]; });

  for (const auto& members : ordered) {
    Person p;
    const npn::NameEntry* entry = corpus.entry(sx.ids[members.front()].name_number);
    p.headword = entry->display_headword();
    p.name = entry->standard;
    p.female = entry->female;
    for (int m : members) {
      p.ids.push_back(sx.ids[m]);
      const npn::SubEntry* s = corpus.find(sx.ids[m]);
      for (const auto& k : s->kinships)
        if (std::find(p.kinships.begin(), p.kinships.end(), k) == p.kinships.end())
          p.kinships.push_back(k);
      for (const auto& r : s->doc_refs)
        if (std::find(p.doc_refs.begin(), p.doc_refs.end(), r) == p.doc_refs.end())
          p.doc_refs.push_back(r);
    }
    std::sort(p.ids.begin(), p.ids.end());
    u.persons.push_back(std::move(p));
  }
  return u;
}

}  // namespace

std::vector<npn::DocRef> Person::attestations() const {
  std::vector<npn::DocRef> out = doc_refs;
  for (const auto& k : kinships)
    out.insert(out.end(), k.supporting_refs.begin(), k.supporting_refs.end());
  return out;
}

std::string Person::label() const {
  std::string out = headword + " ";
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += "+";
    out += std::to_string(ids[i].family_number);
  }
  return out;
}

int PersonUniverse::person_of(const npn::PersonId& id) const {
  for (size_t i = 0; i < persons.size(); ++i)
    for (const auto& pid : persons[i].ids)
      if (pid == id) return static_cast<int>(i);
  return -1;
}

PersonUniverse identity_universe(const npn::Corpus& corpus) {
  SubIndex sx(corpus);
  UnionFind uf(sx.ids.size());
  return universe_from_groups(corpus, sx, uf, "NPN2");
}

PersonUniverse criterion0_identify(const npn::Corpus& corpus) {
  SubIndex sx(corpus);
  BasicTrees basic = build_basic_trees(corpus);
  UnifyResult unified = recursive_unify(basic.trees);

  UnionFind uf(sx.ids.size());
  for (const auto& t : unified.trees)
    for (const auto& n : t.nodes) {
      // merge members per name_number; nodes carry one name, so members of
      // different name numbers on one node would be cross-headword homographs
      std::map<int, int> first_by_name;
      for (int m : n.members) {
        int nn = sx.ids[m].name_number;
        auto it = first_by_name.find(nn);
        if (it == first_by_name.end())
          first_by_name[nn] = m;
        else
          uf.unite(it->second, m);
      }
    }
  return universe_from_groups(corpus, sx, uf, "NPN2.0");
}

PersonUniverse criterion1_identify(const npn::Corpus& corpus) {
  SubIndex sx(corpus);
  UnionFind uf(sx.ids.size());
  // (name_number, publication, volume, tablet, line) -> first holder
  std::map<std::tuple<int, std::string, int, int, int>, int> seen;
  for (size_t i = 0; i < sx.ids.size(); ++i) {
    const npn::SubEntry* s = corpus.find(sx.ids[i]);
    for (const auto& r : s->all_refs())
      for (const auto& l : r.lines) {
        auto key = std::make_tuple(sx.ids[i].name_number, r.publication,
                                   r.volume, r.tablet, l.value);
        auto [it, fresh] = seen.insert({key, static_cast<int>(i)});
        if (!fresh) uf.unite(it->second, static_cast<int>(i));
      }
  }
  return universe_from_groups(corpus, sx, uf, "NPN2.1");
}

PersonUniverse merge_universes(const PersonUniverse& u0,
                               const PersonUniverse& u1) {
  // collect ids, then union ids within each person of either universe
  std::map<npn::PersonId, int> slot;
  std::vector<npn::PersonId> ids;
  for (const auto* u : {&u0, &u1})
    for (const auto& p : u->persons)
      for (const auto& id : p.ids)
        if (!slot.count(id)) {
          slot[id] = static_cast<int>(ids.size());
          ids.push_back(id);
        }
  UnionFind uf(ids.size());
  for (const auto* u : {&u0, &u1})
    for (const auto& p : u->persons)
      for (size_t i = 1; i < p.ids.size(); ++i)
        uf.unite(slot[p.ids[0]], slot[p.ids[i]]);

  std::map<int, std::vector<npn::PersonId>> groups;
  for (size_t i = 0; i < ids.size(); ++i)
    groups[uf.find(static_cast<int>(i))].push_back(ids[i]);

  // rebuild persons by joining the source persons that share ids
  auto source = [&](const npn::PersonId& id) -> const Person* {
    int i = u0.person_of(id);
    if (i >= 0) return &u0.persons[i];
    int j = u1.person_of(id);
    return j >= 0 ? &u1.persons[j] : nullptr;
  };

  PersonUniverse out;
  out.provenance = "NPN2.2";
  std::vector<std::vector<npn::PersonId>> ordered;
  for (auto& [root, g] : groups) {
    std::sort(g.begin(), g.end());
    ordered.push_back(g);
  }
  std::sort(ordered.begin(), ordered.end());
  for (const auto& g : ordered) {
    Person p;
    p.ids = g;
    const Person* src = source(g.front());
    p.headword = src->headword;
    p.name = src->name;
    p.female = src->female;
    for (const auto& id : g) {
      for (const auto* u : {&u0, &u1}) {
        int i = u->person_of(id);
        if (i < 0) continue;
        for (const auto& k : u->persons[i].kinships)
          if (std::find(p.kinships.begin(), p.kinships.end(), k) == p.kinships.end())
            p.kinships.push_back(k);
        for (const auto& r : u->persons[i].doc_refs)
          if (std::find(p.doc_refs.begin(), p.doc_refs.end(), r) == p.doc_refs.end())
            p.doc_refs.push_back(r);
      }
    }
    out.persons.push_back(std::move(p));
  }
  return out;
}

PersonUniverse apply_identifications(const npn::Corpus& corpus,
                                     const PersonUniverse& u,
                                     const npn::PatchFile& patches) {
  PersonUniverse merged = u;
  merged.provenance = "RNPN2";
  for (const auto& d : patches.identifications()) {
    int nn = corpus.name_number(d.headword);
    if (nn == 0)
      throw npn::PatchTargetMissing("IDENTIFY: unknown headword " + d.headword);
    PersonUniverse forced;
    forced.provenance = merged.provenance;
    Person p;
    const npn::NameEntry* e = corpus.entry(nn);
    p.headword = e->display_headword();
    p.name = e->standard;
    p.female = e->female;
    for (int f : d.family_numbers) {
      if (!corpus.find({nn, f}))
        throw npn::PatchTargetMissing("IDENTIFY target " + d.headword + " " +
                                      std::to_string(f) + ") missing");
      p.ids.push_back({nn, f});
    }
    forced.persons.push_back(std::move(p));
    merged = merge_universes(merged, forced);
    merged.provenance = "RNPN2";
  }
  return merged;
}

PersonUniverse resolve_persons(const npn::Corpus& corpus,
                               const npn::PatchFile& identifications) {
  PersonUniverse u0 = criterion0_identify(corpus);
  PersonUniverse u1 = criterion1_identify(corpus);
  PersonUniverse u2 = merge_universes(u0, u1);
  return apply_identifications(corpus, u2, identifications);
}

PersonForest person_trees(const npn::Corpus& corpus, const PersonUniverse& u) {
  auto vm = corpus.variant_map();
  std::vector<FamilyTree> basic;
  for (size_t i = 0; i < u.persons.size(); ++i) {
    const Person& p = u.persons[i];
    basic.push_back(
        build_tree(p.name, p.female, static_cast<int>(i), p.kinships, vm));
  }
  UnifyResult unified = recursive_unify(std::move(basic));

  PersonForest forest;
  forest.trees = std::move(unified.trees);
  forest.unify_iterations = unified.iterations;
  forest.tree_of.assign(u.persons.size(), -1);
  forest.node_of.assign(u.persons.size(), -1);
  for (size_t t = 0; t < forest.trees.size(); ++t)
    for (size_t n = 0; n < forest.trees[t].nodes.size(); ++n)
      for (int m : forest.trees[t].nodes[n].members) {
        forest.tree_of[m] = static_cast<int>(t);
        forest.node_of[m] = static_cast<int>(n);
      }
  return forest;
}

}  // namespace nuzi::gen
