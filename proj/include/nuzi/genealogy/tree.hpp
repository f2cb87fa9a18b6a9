#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nuzi/npn/types.hpp"

namespace nuzi::gen {

/// One person or name-placeholder inside a family tree. `members` are
/// opaque indices into whatever table the tree was built over (sub-entry
/// subjects for basic trees, universe persons for person-level trees);
/// placeholders have no members.
struct TreeNode {
  std::string name;
  bool unreadable = false;  // "....-ia" style names, never merged
  bool female = false;
  std::vector<int> members;
};

/// Directed ancestor edge spanning `level` generations (1 = parent).
struct AncEdge {
  int anc = 0;
  int desc = 0;
  int level = 1;
  auto operator<=>(const AncEdge&) const = default;
};

struct FamilyTree {
  std::vector<TreeNode> nodes;
  std::vector<AncEdge> edges;
  std::vector<std::pair<int, int>> siblings;  // symmetric
  std::vector<std::pair<int, int>> spouses;

  /// Member count: placeholders weigh one, other nodes one per member.
  int size() const;
  /// Generations spanned: longest level-weighted ancestor chain plus one.
  int height() const;
  int find_node(const std::string& name) const;  // -1 when absent
  bool acyclic() const;
};

struct ConsistencyVerdict {
  enum Kind { Consistent, Contradictory, Unrelated } verdict = Unrelated;
  std::set<std::string> shared_names;
};

struct BasicTrees {
  std::vector<FamilyTree> trees;       // one per sub-entry, index order
  std::vector<npn::PersonId> subjects;  // member index -> sub-entry id
};

/// One tree per sub-entry: the subject plus a placeholder per kinship
/// assertion. Grandparent assertions become a chain through the intermediate
/// when the same sub-entry names it, otherwise a direct level-2 edge.
/// Ordered by (name_number, family_number).
BasicTrees build_basic_trees(const npn::Corpus& corpus);

/// Builds the basic tree of one subject from an assertion list.
FamilyTree build_tree(const std::string& subject_name, bool female, int member,
                      const std::vector<npn::KinshipAssertion>& kinships,
                      const std::map<std::string, std::string>& variant_map);

ConsistencyVerdict check_consistency(const FamilyTree& a, const FamilyTree& b);

/// Merges `incoming` into `base` joining nodes of equal name. Only call
/// after check_consistency returned Consistent; throws std::logic_error if
/// the merge would create a parent cycle.
void merge_trees(FamilyTree& base, const FamilyTree& incoming);

/// One pass of the sequential unifying: repeatedly take the head tree,
/// absorb every later tree consistent with the evolving head, continue with
/// the remainder.
std::vector<FamilyTree> sequential_unify(std::vector<FamilyTree> trees);

struct UnifyResult {
  std::vector<FamilyTree> trees;
  int iterations = 0;  // passes until the first repeat
};

/// Iterates sequential_unify to a fixed point.
UnifyResult recursive_unify(std::vector<FamilyTree> trees);

/// Count of trees per (size, height) cell.
std::map<std::pair<int, int>, int> tree_statistics(
    const std::vector<FamilyTree>& trees);

/// Name normalization used everywhere trees are compared: editorial
/// brackets/asterisks stripped, then folded through the corpus variant map.
std::string normalize_name(const std::string& raw,
                           const std::map<std::string, std::string>& variant_map);
bool name_unreadable(const std::string& raw);

}  // namespace nuzi::gen
