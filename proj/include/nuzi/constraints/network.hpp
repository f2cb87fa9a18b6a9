#pragma once

#include <set>
#include <string>
#include <vector>

#include "nuzi/genealogy/identity.hpp"

namespace nuzi::cons {

struct NetworkDoc {
  std::string publication;
  int volume = 0;
  int tablet = 0;
  bool unpublished = false;
  std::string label() const;
  auto operator<=>(const NetworkDoc&) const = default;
};

enum class PersonKind { Indexed, Placeholder, Anonymous };

struct NetworkPerson {
  PersonKind kind = PersonKind::Indexed;
  int universe_index = -1;  // Indexed only
  std::string label;
  std::string name;
  int tree = -1;
  int node = -1;
  int tree_height = 1;
  bool is_top = false;        // nobody above them in the unified tree
  bool parental_only = false; // every kinship a f./m./gf./... role
  bool seed = false;
  bool unidentified = false;  // unreadable placeholder name
};

struct Appearance {
  int person = 0;
  int doc = 0;
  bool living = false;
  auto operator<=>(const Appearance&) const = default;
};

struct ParentEdge {
  int child = 0;
  int parent = 0;
  enum Kind { Father, Mother } kind = Father;
  auto operator<=>(const ParentEdge&) const = default;
};

struct NetworkInstance {
  std::vector<NetworkPerson> persons;
  std::vector<NetworkDoc> documents;
  std::vector<Appearance> appearances;
  std::vector<ParentEdge> parent_edges;
  std::vector<std::set<int>> child_role_docs;  // per person

  int doc_index(const std::string& label) const;  // -1 when absent
  int person_index(const std::string& label) const;
};

struct SeedSpec {
  std::vector<std::pair<std::string, int>> members;  // headword, family number
};

struct EmptySeed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Restricts the corpus to the document component chained to the seed
/// family by shared participants, then materializes relatives: placeholder
/// nodes of the unified trees and anonymous intermediates for unresolved
/// grandparent links.
NetworkInstance extract_network(const npn::Corpus& corpus,
                                const gen::PersonUniverse& universe,
                                const gen::PersonForest& forest,
                                const SeedSpec& seed);

enum class LivingPolicy {
  TreeApproximation,  // one-generation trees live everywhere, tree tops never
  StrictFiliation,    // only filiation-attested appearances count
};

/// Marks which appearances assert presence at the publication.
NetworkInstance apply_living_policy(NetworkInstance net,
                                    LivingPolicy policy = LivingPolicy::TreeApproximation);

}  // namespace nuzi::cons
