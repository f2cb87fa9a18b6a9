#pragma once

#include <string>
#include <vector>

#include "nuzi/constraints/network.hpp"

namespace nuzi::cons {

/// x[pos] - x[neg] >= rhs; the variable order is b_0..b_{N-1}, d_0..d_{N-1},
/// P_0..P_{M-1}.
struct ConstraintRow {
  int pos = 0;
  int neg = 0;
  double rhs = 0.0;
  auto operator<=>(const ConstraintRow&) const = default;
};

struct ConstraintSet {
  int n_persons = 0;
  int n_docs = 0;
  std::vector<ConstraintRow> rows;
  int anchor_col = -1;  // P column pinned by the equality
  double anchor_year = 0.0;
  double g = 22.5;
  double min_age_fraction = 2.0 / 3.0;
  std::vector<std::string> labels;  // one per variable

  int n_variables() const { return 2 * n_persons + n_docs; }
  int birth_col(int person) const { return person; }
  int death_col(int person) const { return n_persons + person; }
  int doc_col(int doc) const { return 2 * n_persons + doc; }
};

struct Anchor {
  std::string doc_label;  // e.g. "JEN 525"
  double year = -1355.0;
};

struct AnchorNotInNetwork : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One inequality per parent edge, two per living appearance, one equality.
/// Row order: parent edges by (child, parent), then appearances by
/// (person, document).
ConstraintSet emit_constraints(const NetworkInstance& net, double g,
                               const Anchor& anchor,
                               double min_age_fraction = 2.0 / 3.0);

/// A configuration satisfying every row: generations stacked g apart below
/// the anchored year. Used as the feasibility witness.
std::vector<double> feasibility_witness(const NetworkInstance& net,
                                        const ConstraintSet& cs);

/// Largest violation of any row (0 when feasible to tolerance).
double max_violation(const ConstraintSet& cs, const std::vector<double>& x);

}  // namespace nuzi::cons
