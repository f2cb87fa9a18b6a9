#pragma once

#include <string>
#include <vector>

#include "nuzi/genealogy/tree.hpp"
#include "nuzi/npn/patch.hpp"
#include "nuzi/npn/types.hpp"

namespace nuzi::gen {

/// A resolved person: one or more sub-entry ids under the same headword,
/// with the union of their kinships and citations.
struct Person {
  std::vector<npn::PersonId> ids;  // sorted, non-empty
  std::string headword;
  std::string name;  // standard spelling
  bool female = false;
  std::vector<npn::KinshipAssertion> kinships;
  std::vector<npn::DocRef> doc_refs;  // citations outside kinship clauses

  std::vector<npn::DocRef> attestations() const;
  std::string label() const;
};

struct PersonUniverse {
  std::string provenance;  // NPN2, NPN2.0, NPN2.1, NPN2.2, RNPN2
  std::vector<Person> persons;

  int person_of(const npn::PersonId& id) const;  // -1 when unknown
};

struct UnknownPerson : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every sub-entry its own person.
PersonUniverse identity_universe(const npn::Corpus& corpus);

/// Criterion 0: same-name sub-entries whose basic trees land on one node of
/// the recursively unified forest become one person.
PersonUniverse criterion0_identify(const npn::Corpus& corpus);

/// Criterion 1: same-name sub-entries cited on the same line of the same
/// document become one person. Citations without line numbers never merge.
PersonUniverse criterion1_identify(const npn::Corpus& corpus);

/// Finest common coarsening: persons merge iff their id sets intersect.
PersonUniverse merge_universes(const PersonUniverse& u0,
                               const PersonUniverse& u1);

/// Applies the IDENTIFY directives of a patch file as forced merges.
PersonUniverse apply_identifications(const npn::Corpus& corpus,
                                     const PersonUniverse& u,
                                     const npn::PatchFile& patches);

/// The standard resolution chain: criterion 0, criterion 1, their merge,
/// then the forced identifications.
PersonUniverse resolve_persons(const npn::Corpus& corpus,
                               const npn::PatchFile& identifications);

struct PersonForest {
  std::vector<FamilyTree> trees;          // members are person indices
  std::vector<int> tree_of;               // person -> tree
  std::vector<int> node_of;               // person -> node within tree
  int unify_iterations = 0;
};

/// Rebuilds one basic tree per person (kinships unioned over its ids) and
/// unifies them to a fixed point.
PersonForest person_trees(const npn::Corpus& corpus, const PersonUniverse& u);

}  // namespace nuzi::gen
