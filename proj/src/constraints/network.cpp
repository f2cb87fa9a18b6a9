#include "nuzi/constraints/network.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace nuzi::cons {

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

NetworkDoc doc_from_ref(const npn::DocRef& r) {
  return {r.publication, r.volume, r.tablet, r.unpublished};
}

}  // namespace

std::string NetworkDoc::label() const {
  std::string out = publication;
  if (volume > 0) out += " " + npn::roman_numeral(volume);
  out += " " + std::to_string(tablet);
  return out;
}

int NetworkInstance::doc_index(const std::string& label) const {
  for (size_t i = 0; i < documents.size(); ++i)
    if (documents[i].label() == label) return static_cast<int>(i);
  return -1;
}

int NetworkInstance::person_index(const std::string& label) const {
  for (size_t i = 0; i < persons.size(); ++i)
    if (persons[i].label == label) return static_cast<int>(i);
  return -1;
}

NetworkInstance extract_network(const npn::Corpus& corpus,
                                const gen::PersonUniverse& universe,
                                const gen::PersonForest& forest,
                                const SeedSpec& seed) {
  if (seed.members.empty()) throw EmptySeed("seed family has no members");

  auto vm = corpus.variant_map();
  const auto& persons = universe.persons;
  size_t np = persons.size();

  // ---- attestations -------------------------------------------------------
  // indexed persons cite documents directly; placeholder nodes inherit the
  // documents of the assertions that name them
  std::map<NetworkDoc, int> doc_ids;
  std::vector<NetworkDoc> docs;
  auto doc_id = [&](const npn::DocRef& r) {
    NetworkDoc d = doc_from_ref(r);
    auto [it, fresh] = doc_ids.insert({d, static_cast<int>(docs.size())});
    if (fresh) docs.push_back(d);
    return it->second;
  };

  std::vector<std::set<int>> person_docs(np);
  std::vector<std::set<int>> person_childrole_docs(np);
  for (size_t p = 0; p < np; ++p) {
    for (const auto& r : persons[p].attestations()) person_docs[p].insert(doc_id(r));
    for (const auto& k : persons[p].kinships)
      if (npn::relation_is_child_role(k.relation))
        for (const auto& r : k.supporting_refs)
          person_childrole_docs[p].insert(doc_id(r));
  }

  // per tree node that has no members: the documents of assertions whose
  // object resolved to it, split by which side of the relation it stands on
  struct PlaceholderDocs {
    std::set<int> all;
    std::set<int> as_descendant;  // named as the child/grandchild
  };
  std::map<std::pair<int, int>, PlaceholderDocs> ph_docs;  // (tree, node)
  for (size_t p = 0; p < np; ++p) {
    int t = forest.tree_of[p];
    if (t < 0) continue;
    const gen::FamilyTree& tree = forest.trees[t];
    for (const auto& k : persons[p].kinships) {
      std::string nm = gen::name_unreadable(k.object_name)
                           ? k.object_name
                           : gen::normalize_name(k.object_name, vm);
      int node = -1;
      for (size_t n = 0; n < tree.nodes.size(); ++n)
        if (tree.nodes[n].name == nm || (tree.nodes[n].unreadable &&
                                         tree.nodes[n].name == k.object_name)) {
          node = static_cast<int>(n);
          break;
        }
      if (node < 0 || !tree.nodes[node].members.empty()) continue;
      auto& slot = ph_docs[{t, node}];
      for (const auto& r : k.supporting_refs) {
        int d = doc_id(r);
        slot.all.insert(d);
        if (npn::relation_is_parental_role(k.relation)) slot.as_descendant.insert(d);
      }
    }
  }

  // ---- document components ------------------------------------------------
  UnionFind uf(docs.size());
  auto unite_docs = [&](const std::set<int>& ds) {
    if (ds.empty()) return;
    int first = *ds.begin();
    for (int d : ds) uf.unite(first, d);
  };
  for (const auto& ds : person_docs) unite_docs(ds);
  for (const auto& [key, slot] : ph_docs) unite_docs(slot.all);

  // seed persons and the components their documents live in
  std::set<int> seed_persons;
  for (const auto& [headword, family] : seed.members) {
    int nn = corpus.name_number(headword);
    int p = nn ? universe.person_of({nn, family}) : -1;
    if (p < 0)
      throw EmptySeed("seed member " + headword + " " + std::to_string(family) +
                      ") not found in the universe");
    seed_persons.insert(p);
  }
  std::set<int> network_roots;
  for (int p : seed_persons)
    for (int d : person_docs[static_cast<size_t>(p)]) network_roots.insert(uf.find(d));
  if (network_roots.empty()) throw EmptySeed("seed family cites no document");

  std::vector<bool> doc_in(docs.size(), false);
  for (size_t d = 0; d < docs.size(); ++d)
    doc_in[d] = network_roots.count(uf.find(static_cast<int>(d))) > 0;

  // ---- network membership over tree nodes ---------------------------------
  // start from attested nodes, then close upward over ancestor edges
  auto in_network_docs = [&](const std::set<int>& ds) {
    for (int d : ds)
      if (doc_in[static_cast<size_t>(d)]) return true;
    return false;
  };

  size_t ntrees = forest.trees.size();
  std::vector<std::vector<bool>> node_in(ntrees);
  for (size_t t = 0; t < ntrees; ++t)
    node_in[t].assign(forest.trees[t].nodes.size(), false);

  for (size_t p = 0; p < np; ++p)
    if (in_network_docs(person_docs[p]) && forest.tree_of[p] >= 0)
      node_in[forest.tree_of[p]][forest.node_of[p]] = true;
  for (const auto& [key, slot] : ph_docs)
    if (in_network_docs(slot.all)) node_in[key.first][key.second] = true;

  for (size_t t = 0; t < ntrees; ++t) {
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : forest.trees[t].edges)
        if (node_in[t][e.desc] && !node_in[t][e.anc]) {
          node_in[t][e.anc] = true;
          grew = true;
        }
    }
  }

  // ---- assemble the instance ----------------------------------------------
  NetworkInstance net;
  std::map<int, int> doc_remap;  // old doc id -> network doc index
  for (size_t d = 0; d < docs.size(); ++d)
    if (doc_in[d]) {
      doc_remap[static_cast<int>(d)] = static_cast<int>(net.documents.size());
      net.documents.push_back(docs[d]);
    }

  std::vector<int> person_net(np, -1);
  std::map<std::pair<int, int>, int> node_net;  // placeholder entity index

  // indexed persons, ordered by universe index
  for (size_t p = 0; p < np; ++p) {
    int t = forest.tree_of[p];
    if (t < 0 || !node_in[t][forest.node_of[p]]) continue;
    NetworkPerson e;
    e.kind = PersonKind::Indexed;
    e.universe_index = static_cast<int>(p);
    e.label = persons[p].label();
    e.name = persons[p].name;
    e.tree = t;
    e.node = forest.node_of[p];
    e.seed = seed_persons.count(static_cast<int>(p)) > 0;
    bool any = !persons[p].kinships.empty();
    bool all_parental = any;
    for (const auto& k : persons[p].kinships)
      if (!npn::relation_is_parental_role(k.relation)) all_parental = false;
    e.parental_only = all_parental;
    person_net[p] = static_cast<int>(net.persons.size());
    net.persons.push_back(e);
  }
  // placeholder nodes
  for (size_t t = 0; t < ntrees; ++t)
    for (size_t n = 0; n < forest.trees[t].nodes.size(); ++n) {
      const gen::TreeNode& node = forest.trees[t].nodes[n];
      if (!node.members.empty() || !node_in[t][n]) continue;
      NetworkPerson e;
      e.kind = PersonKind::Placeholder;
      e.name = node.name;
      e.unidentified = node.unreadable;
      e.label = "?" + node.name + " @" + std::to_string(t) + "." + std::to_string(n);
      e.tree = static_cast<int>(t);
      e.node = static_cast<int>(n);
      node_net[{static_cast<int>(t), static_cast<int>(n)}] =
          static_cast<int>(net.persons.size());
      net.persons.push_back(e);
    }

  // per-node entity lookup: all member persons plus the placeholder entity
  auto entities_of_node = [&](int t, int n) {
    std::vector<int> out;
    for (int m : forest.trees[t].nodes[n].members)
      if (person_net[m] >= 0) out.push_back(person_net[m]);
    auto it = node_net.find({t, n});
    if (it != node_net.end()) out.push_back(it->second);
    return out;
  };

  // appearances and child-role documents
  net.child_role_docs.assign(net.persons.size(), {});
  for (size_t p = 0; p < np; ++p) {
    if (person_net[p] < 0) continue;
    for (int d : person_docs[p])
      if (doc_in[static_cast<size_t>(d)])
        net.appearances.push_back({person_net[p], doc_remap[d], false});
    for (int d : person_childrole_docs[p])
      if (doc_in[static_cast<size_t>(d)])
        net.child_role_docs[person_net[p]].insert(doc_remap[d]);
  }
  for (const auto& [key, slot] : ph_docs) {
    auto it = node_net.find(key);
    if (it == node_net.end()) continue;
    for (int d : slot.all)
      if (doc_in[static_cast<size_t>(d)])
        net.appearances.push_back({it->second, doc_remap[d], false});
    for (int d : slot.as_descendant)
      if (doc_in[static_cast<size_t>(d)])
        net.child_role_docs[it->second].insert(doc_remap[d]);
  }

  // parent edges; unresolved deeper links get anonymous intermediates
  int anon = 0;
  for (size_t t = 0; t < ntrees; ++t) {
    const gen::FamilyTree& tree = forest.trees[t];
    for (const auto& e : tree.edges) {
      if (!node_in[t][e.anc] || !node_in[t][e.desc]) continue;
      std::vector<int> uppers = entities_of_node(static_cast<int>(t), e.anc);
      std::vector<int> lowers = entities_of_node(static_cast<int>(t), e.desc);
      bool maternal = tree.nodes[e.anc].female;
      for (int up : uppers)
        for (int low : lowers) {
          int from = up;
          for (int step = 1; step < e.level; ++step) {
            NetworkPerson mid;
            mid.kind = PersonKind::Anonymous;
            mid.name = "(unnamed)";
            mid.label = "anon." + std::to_string(anon++);
            mid.tree = static_cast<int>(t);
            int idx = static_cast<int>(net.persons.size());
            net.persons.push_back(mid);
            net.child_role_docs.push_back({});
            net.parent_edges.push_back(
                {idx, from, step == 1 && maternal ? ParentEdge::Mother
                                                  : ParentEdge::Father});
            from = idx;
          }
          net.parent_edges.push_back(
              {low, from,
               (e.level == 1 && maternal) ? ParentEdge::Mother : ParentEdge::Father});
        }
    }
  }

  // tree meta: height and topness
  for (auto& e : net.persons) {
    if (e.tree < 0) continue;
    e.tree_height = forest.trees[e.tree].height();
  }
  std::vector<bool> has_parent(net.persons.size(), false);
  for (const auto& pe : net.parent_edges) has_parent[static_cast<size_t>(pe.child)] = true;
  for (size_t i = 0; i < net.persons.size(); ++i)
    net.persons[i].is_top = !has_parent[i];

  std::sort(net.appearances.begin(), net.appearances.end());
  net.appearances.erase(
      std::unique(net.appearances.begin(), net.appearances.end()),
      net.appearances.end());
  std::sort(net.parent_edges.begin(), net.parent_edges.end());
  net.parent_edges.erase(
      std::unique(net.parent_edges.begin(), net.parent_edges.end()),
      net.parent_edges.end());
  return net;
}

NetworkInstance apply_living_policy(NetworkInstance net, LivingPolicy policy) {
  for (auto& a : net.appearances) {
    const NetworkPerson& p = net.persons[static_cast<size_t>(a.person)];
    const auto& filiation = net.child_role_docs[static_cast<size_t>(a.person)];
    if (p.kind == PersonKind::Anonymous) {
      a.living = false;
    } else if (p.kind == PersonKind::Indexed && p.parental_only) {
      a.living = false;
    } else if (p.tree_height == 1) {
      a.living = true;
    } else if (p.seed || policy == LivingPolicy::StrictFiliation) {
      a.living = filiation.count(a.doc) > 0;
    } else {
      a.living = !p.is_top;
    }
  }
  return net;
}

}  // namespace nuzi::cons
