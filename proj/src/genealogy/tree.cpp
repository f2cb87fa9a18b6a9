#include "nuzi/genealogy/tree.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace nuzi::gen {

namespace {

// all ancestor path level-sums from node a down to node b
void path_levels(const FamilyTree& t, int a, int b, int acc,
                 const std::vector<std::vector<std::pair<int, int>>>& children,
                 std::set<int>& out, int depth) {
  if (depth > static_cast<int>(t.nodes.size())) return;  // cycle guard
  if (a == b && acc > 0) {
    out.insert(acc);
    return;
  }
  for (auto [c, lvl] : children[a]) path_levels(t, c, b, acc + lvl, children, out, depth + 1);
}

std::vector<std::vector<std::pair<int, int>>> child_adjacency(const FamilyTree& t) {
  std::vector<std::vector<std::pair<int, int>>> adj(t.nodes.size());
  for (const auto& e : t.edges) adj[e.anc].push_back({e.desc, e.level});
  return adj;
}

std::set<int> levels_between(const FamilyTree& t, int a, int b) {
  auto adj = child_adjacency(t);
  std::set<int> out;
  path_levels(t, a, b, 0, adj, out, 0);
  return out;
}

void dedupe_edges(FamilyTree& t) {
  std::sort(t.edges.begin(), t.edges.end());
  t.edges.erase(std::unique(t.edges.begin(), t.edges.end()), t.edges.end());
  auto fix_pairs = [](std::vector<std::pair<int, int>>& v) {
    for (auto& p : v)
      if (p.first > p.second) std::swap(p.first, p.second);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  fix_pairs(t.siblings);
  fix_pairs(t.spouses);
}

// Resolve level>=2 edges: drop them when a parent path of the same total
// already exists; pull them one step down the chain when the descendant has
// exactly one known parent and that parent is still unparented.
void refine_edges(FamilyTree& t) {
  bool changed = true;
  int guard = 0;
  while (changed && ++guard < 64) {
    changed = false;
    for (size_t i = 0; i < t.edges.size(); ++i) {
      AncEdge e = t.edges[i];
      if (e.level < 2) continue;
      // path sums through the remaining edges
      std::vector<std::vector<std::pair<int, int>>> adj(t.nodes.size());
      for (size_t j = 0; j < t.edges.size(); ++j)
        if (j != i) adj[t.edges[j].anc].push_back({t.edges[j].desc, t.edges[j].level});
      std::set<int> sums;
      path_levels(t, e.anc, e.desc, 0, adj, sums, 0);
      if (sums.count(e.level)) {
        t.edges.erase(t.edges.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
      // unique known parent of the descendant
      int parent = -1, parents = 0;
      for (const auto& pe : t.edges)
        if (pe.desc == e.desc && pe.level == 1 && pe.anc != e.anc) {
          parent = pe.anc;
          ++parents;
        }
      if (parents == 1) {
        bool parent_has_parent = false;
        for (const auto& pe : t.edges)
          if (pe.desc == parent) parent_has_parent = true;
        if (!parent_has_parent && parent != e.anc) {
          t.edges[i] = {e.anc, parent, e.level - 1};
          if (!t.acyclic()) {
            t.edges[i] = e;  // would close a cycle, keep the direct edge
          } else {
            changed = true;
            break;
          }
        }
      }
    }
  }
  dedupe_edges(t);
}

}  // namespace

int FamilyTree::size() const {
  int total = 0;
  for (const auto& n : nodes)
    total += std::max<int>(1, static_cast<int>(n.members.size()));
  return total;
}

int FamilyTree::height() const {
  auto adj = child_adjacency(*this);
  std::vector<int> depth(nodes.size(), -1);
  std::function<int(int)> longest = [&](int v) -> int {
    if (depth[v] >= 0) return depth[v];
    depth[v] = 0;  // also blocks runaway recursion on (malformed) cycles
    int best = 0;
    for (auto [c, lvl] : adj[v]) best = std::max(best, lvl + longest(c));
    depth[v] = best;
    return best;
  };
  int h = 0;
  for (size_t v = 0; v < nodes.size(); ++v) h = std::max(h, longest(static_cast<int>(v)));
  return h + 1;
}

int FamilyTree::find_node(const std::string& name) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].unreadable && nodes[i].name == name) return static_cast<int>(i);
  return -1;
}

bool FamilyTree::acyclic() const {
  auto adj = child_adjacency(*this);
  std::vector<int> state(nodes.size(), 0);
  std::function<bool(int)> dfs = [&](int v) -> bool {
    state[v] = 1;
    for (auto [c, lvl] : adj[v]) {
      (void)lvl;
      if (state[c] == 1) return false;
      if (state[c] == 0 && !dfs(c)) return false;
    }
    state[v] = 2;
    return true;
  };
  for (size_t v = 0; v < nodes.size(); ++v)
    if (state[v] == 0 && !dfs(static_cast<int>(v))) return false;
  return true;
}

bool name_unreadable(const std::string& raw) {
  return raw.find("...") != std::string::npos;
}

std::string normalize_name(const std::string& raw,
                           const std::map<std::string, std::string>& variant_map) {
  if (auto it = variant_map.find(raw); it != variant_map.end()) return it->second;
  std::string stripped;
  for (char c : raw)
    if (c != '[' && c != ']' && c != '<' && c != '>' && c != '*') stripped += c;
  if (auto it = variant_map.find(stripped); it != variant_map.end())
    return it->second;
  return stripped;
}

FamilyTree build_tree(const std::string& subject_name, bool female, int member,
                      const std::vector<npn::KinshipAssertion>& kinships,
                      const std::map<std::string, std::string>& variant_map) {
  FamilyTree t;
  TreeNode subject;
  subject.name = subject_name;
  subject.female = female;
  subject.members.push_back(member);
  t.nodes.push_back(subject);

  auto node_for = [&](const std::string& raw) -> int {
    bool bad = name_unreadable(raw);
    char prefix = 0;
    std::string token = raw;
    if (token.rfind("^{f}", 0) == 0) {
      prefix = 'f';
    } else if (token.rfind("^{m}", 0) == 0) {
      prefix = 'm';
    }
    std::string name = bad ? raw : normalize_name(raw, variant_map);
    if (name == subject_name && !bad) return 0;
    if (!bad) {
      int found = t.find_node(name);
      if (found >= 0) return found;
    }
    TreeNode n;
    n.name = name;
    n.unreadable = bad;
    n.female = prefix == 'f';
    t.nodes.push_back(n);
    return static_cast<int>(t.nodes.size()) - 1;
  };

  for (const auto& k : kinships) {
    if (name_unreadable(k.object_name) &&
        normalize_name(k.object_name, variant_map) == subject_name) {
      continue;  // self-reference through damage, drop rather than loop
    }
    int obj = node_for(k.object_name);
    if (obj == 0) continue;  // object resolves to the subject itself
    int lvl = npn::relation_ancestor_level(k.relation);
    if (lvl > 0)
      t.edges.push_back({obj, 0, lvl});
    else if (lvl < 0)
      t.edges.push_back({0, obj, -lvl});
    else if (k.relation == npn::Relation::Wife)
      t.spouses.push_back({0, obj});
    else
      t.siblings.push_back({0, obj});
  }
  refine_edges(t);
  return t;
}

BasicTrees build_basic_trees(const npn::Corpus& corpus) {
  BasicTrees out;
  auto vm = corpus.variant_map();
  for (size_t ei = 0; ei < corpus.entries.size(); ++ei) {
    const auto& e = corpus.entries[ei];
    for (const auto& s : e.subentries) {
      int member = static_cast<int>(out.subjects.size());
      out.subjects.push_back({static_cast<int>(ei) + 1, s.family_number});
      out.trees.push_back(
          build_tree(e.standard, e.female, member, s.kinships, vm));
    }
  }
  return out;
}

namespace {

// relations between two named nodes inside one tree
struct PairRel {
  std::set<int> above;  // x above y by these levels
  std::set<int> below;
  bool sibling = false;
  bool spouse = false;
};

PairRel relation_between(const FamilyTree& t, int x, int y) {
  PairRel r;
  r.above = levels_between(t, x, y);
  r.below = levels_between(t, y, x);
  for (auto [a, b] : t.siblings)
    if ((a == x && b == y) || (a == y && b == x)) r.sibling = true;
  for (auto [a, b] : t.spouses)
    if ((a == x && b == y) || (a == y && b == x)) r.spouse = true;
  // shared level-1 parent also makes a sibling pair
  for (const auto& e1 : t.edges)
    for (const auto& e2 : t.edges)
      if (e1.level == 1 && e2.level == 1 && e1.anc == e2.anc &&
          e1.desc == x && e2.desc == y)
        r.sibling = true;
  return r;
}

bool compatible(const PairRel& a, const PairRel& b) {
  bool a_rel = !a.above.empty() || !a.below.empty() || a.sibling || a.spouse;
  bool b_rel = !b.above.empty() || !b.below.empty() || b.sibling || b.spouse;
  if (!a_rel || !b_rel) return true;
  // direction flips are the classic contradiction
  if (!a.above.empty() && !b.below.empty()) return false;
  if (!a.below.empty() && !b.above.empty()) return false;
  if (!a.above.empty() && !b.above.empty() && a.above != b.above) return false;
  if (!a.below.empty() && !b.below.empty() && a.below != b.below) return false;
  bool a_anc = !a.above.empty() || !a.below.empty();
  bool b_anc = !b.above.empty() || !b.below.empty();
  if ((a.sibling || a.spouse) && b_anc) return false;
  if ((b.sibling || b.spouse) && a_anc) return false;
  if (a.sibling && b.spouse) return false;
  if (a.spouse && b.sibling) return false;
  return true;
}

}  // namespace

ConsistencyVerdict check_consistency(const FamilyTree& a, const FamilyTree& b) {
  ConsistencyVerdict v;
  std::vector<std::pair<int, int>> shared;  // node in a, node in b
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    if (a.nodes[i].unreadable) continue;
    int j = b.find_node(a.nodes[i].name);
    if (j >= 0) {
      shared.push_back({static_cast<int>(i), j});
      v.shared_names.insert(a.nodes[i].name);
    }
  }
  if (shared.size() < 2) {
    v.verdict = ConsistencyVerdict::Unrelated;
    return v;
  }
  for (size_t p = 0; p < shared.size(); ++p)
    for (size_t q = p + 1; q < shared.size(); ++q) {
      PairRel ra = relation_between(a, shared[p].first, shared[q].first);
      PairRel rb = relation_between(b, shared[p].second, shared[q].second);
      if (!compatible(ra, rb)) {
        v.verdict = ConsistencyVerdict::Contradictory;
        return v;
      }
    }
  // a pairwise-compatible union can still close a parent cycle
  FamilyTree probe = a;
  merge_trees(probe, b);
  if (!probe.acyclic()) {
    v.verdict = ConsistencyVerdict::Contradictory;
    return v;
  }
  v.verdict = ConsistencyVerdict::Consistent;
  return v;
}

void merge_trees(FamilyTree& base, const FamilyTree& incoming) {
  std::vector<int> remap(incoming.nodes.size());
  for (size_t i = 0; i < incoming.nodes.size(); ++i) {
    const TreeNode& n = incoming.nodes[i];
    int target = n.unreadable ? -1 : base.find_node(n.name);
    if (target < 0) {
      base.nodes.push_back(n);
      target = static_cast<int>(base.nodes.size()) - 1;
    } else {
      auto& t = base.nodes[target];
      t.members.insert(t.members.end(), n.members.begin(), n.members.end());
      std::sort(t.members.begin(), t.members.end());
      t.members.erase(std::unique(t.members.begin(), t.members.end()),
                      t.members.end());
      t.female = t.female || n.female;
    }
    remap[i] = target;
  }
  for (const auto& e : incoming.edges)
    base.edges.push_back({remap[e.anc], remap[e.desc], e.level});
  for (auto [x, y] : incoming.siblings) base.siblings.push_back({remap[x], remap[y]});
  for (auto [x, y] : incoming.spouses) base.spouses.push_back({remap[x], remap[y]});
  refine_edges(base);
}

std::vector<FamilyTree> sequential_unify(std::vector<FamilyTree> trees) {
  std::vector<FamilyTree> result;
  std::vector<bool> used(trees.size(), false);
  for (size_t head = 0; head < trees.size(); ++head) {
    if (used[head]) continue;
    FamilyTree merged = std::move(trees[head]);
    used[head] = true;
    std::unordered_set<std::string> names;
    for (const auto& n : merged.nodes)
      if (!n.unreadable) names.insert(n.name);
    for (size_t k = head + 1; k < trees.size(); ++k) {
      if (used[k]) continue;
      int shared = 0;
      for (const auto& n : trees[k].nodes)
        if (!n.unreadable && names.count(n.name)) ++shared;
      if (shared < 2) continue;
      ConsistencyVerdict cv = check_consistency(merged, trees[k]);
      if (cv.verdict != ConsistencyVerdict::Consistent) continue;
      merge_trees(merged, trees[k]);
      if (!merged.acyclic())
        throw std::logic_error("merge of consistent trees produced a cycle");
      used[k] = true;
      for (const auto& n : trees[k].nodes)
        if (!n.unreadable) names.insert(n.name);
    }
    result.push_back(std::move(merged));
  }
  return result;
}

namespace {

std::string tree_signature(const FamilyTree& t) {
  std::vector<std::string> names(t.nodes.size());
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    names[i] = t.nodes[i].name + "|";
    for (int m : t.nodes[i].members) names[i] += std::to_string(m) + ",";
  }
  std::string sig;
  std::vector<std::string> parts;
  for (const auto& n : names) parts.push_back("n:" + n);
  for (const auto& e : t.edges)
    parts.push_back("e:" + names[e.anc] + ">" + names[e.desc] + "@" +
                    std::to_string(e.level));
  for (auto [a, b] : t.siblings) parts.push_back("s:" + names[a] + "~" + names[b]);
  for (auto [a, b] : t.spouses) parts.push_back("w:" + names[a] + "~" + names[b]);
  std::sort(parts.begin(), parts.end());
  for (const auto& p : parts) sig += p + ";";
  return sig;
}

std::string forest_signature(const std::vector<FamilyTree>& trees) {
  std::vector<std::string> sigs;
  for (const auto& t : trees) sigs.push_back(tree_signature(t));
  std::sort(sigs.begin(), sigs.end());
  std::string out;
  for (const auto& s : sigs) out += s + "\n";
  return out;
}

}  // namespace

UnifyResult recursive_unify(std::vector<FamilyTree> trees) {
  UnifyResult result;
  std::string prev = forest_signature(trees);
  int cap = static_cast<int>(trees.size()) + 2;
  for (int i = 0; i < cap; ++i) {
    trees = sequential_unify(std::move(trees));
    ++result.iterations;
    std::string sig = forest_signature(trees);
    if (sig == prev) break;
    prev = std::move(sig);
  }
  result.trees = std::move(trees);
  return result;
}

std::map<std::pair<int, int>, int> tree_statistics(
    const std::vector<FamilyTree>& trees) {
  std::map<std::pair<int, int>, int> table;
  for (const auto& t : trees) table[{t.size(), t.height()}]++;
  return table;
}

}  // namespace nuzi::gen
