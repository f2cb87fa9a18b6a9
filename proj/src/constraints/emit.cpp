#include "nuzi/constraints/emit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace nuzi::cons {

ConstraintSet emit_constraints(const NetworkInstance& net, double g,
                               const Anchor& anchor, double min_age_fraction) {
  ConstraintSet cs;
  cs.n_persons = static_cast<int>(net.persons.size());
  cs.n_docs = static_cast<int>(net.documents.size());
  cs.g = g;
  cs.min_age_fraction = min_age_fraction;
  cs.anchor_year = anchor.year;

  int anchor_doc = net.doc_index(anchor.doc_label);
  if (anchor_doc < 0)
    throw AnchorNotInNetwork("anchor document '" + anchor.doc_label +
                             "' is not in the network");
  cs.anchor_col = cs.doc_col(anchor_doc);

  for (const auto& p : net.persons) cs.labels.push_back("b " + p.label);
  for (const auto& p : net.persons) cs.labels.push_back("d " + p.label);
  for (const auto& d : net.documents) cs.labels.push_back("P " + d.label());

  std::vector<ParentEdge> edges = net.parent_edges;
  std::sort(edges.begin(), edges.end(), [](const ParentEdge& a, const ParentEdge& b) {
    return std::tie(a.child, a.parent) < std::tie(b.child, b.parent);
  });
  for (const auto& e : edges)
    cs.rows.push_back({cs.birth_col(e.child), cs.birth_col(e.parent), g});

  std::vector<Appearance> living;
  for (const auto& a : net.appearances)
    if (a.living) living.push_back(a);
  std::sort(living.begin(), living.end(), [](const Appearance& a, const Appearance& b) {
    return std::tie(a.person, a.doc) < std::tie(b.person, b.doc);
  });
  for (const auto& a : living) {
    cs.rows.push_back({cs.death_col(a.person), cs.doc_col(a.doc), 0.0});
    cs.rows.push_back({cs.doc_col(a.doc), cs.birth_col(a.person),
                       min_age_fraction * g});
  }
  return cs;
}

std::vector<double> feasibility_witness(const NetworkInstance& net,
                                        const ConstraintSet& cs) {
  size_t n = net.persons.size();
  // longest descendant chain below each person, in generations
  std::vector<std::vector<int>> children(n);
  for (const auto& e : net.parent_edges)
    children[static_cast<size_t>(e.parent)].push_back(e.child);
  std::vector<int> down(n, -1);
  std::function<int(int)> depth = [&](int v) -> int {
    if (down[static_cast<size_t>(v)] >= 0) return down[static_cast<size_t>(v)];
    down[static_cast<size_t>(v)] = 0;
    int best = 0;
    for (int c : children[static_cast<size_t>(v)]) best = std::max(best, 1 + depth(c));
    down[static_cast<size_t>(v)] = best;
    return best;
  };

  std::vector<double> x(static_cast<size_t>(cs.n_variables()), 0.0);
  double a = cs.anchor_year;
  for (size_t i = 0; i < n; ++i) {
    double b = a - cs.min_age_fraction * cs.g - cs.g * depth(static_cast<int>(i));
    x[static_cast<size_t>(cs.birth_col(static_cast<int>(i)))] = b;
    x[static_cast<size_t>(cs.death_col(static_cast<int>(i)))] = a + 1.0;
  }
  for (int k = 0; k < cs.n_docs; ++k)
    x[static_cast<size_t>(cs.doc_col(k))] = a;
  return x;
}

double max_violation(const ConstraintSet& cs, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& r : cs.rows)
    worst = std::max(worst, r.rhs - (x[static_cast<size_t>(r.pos)] -
                                     x[static_cast<size_t>(r.neg)]));
  worst = std::max(worst,
                   std::abs(x[static_cast<size_t>(cs.anchor_col)] - cs.anchor_year));
  return worst;
}

}  // namespace nuzi::cons
