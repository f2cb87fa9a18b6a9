#include "nuzi/qp/replications.hpp"

namespace nuzi::qp {

chron::BirthTable run_replications(const cons::ConstraintSet& cs,
                                   double multiplier, int replications,
                                   uint64_t seed, const SolverConfig& config) {
  chron::BirthTable table;
  table.replications = replications;
  for (int i = 0; i < cs.n_persons; ++i)
    table.person_labels.push_back(cs.labels[static_cast<size_t>(i)].substr(2));
  for (int k = 0; k < cs.n_docs; ++k)
    table.doc_labels.push_back(
        cs.labels[static_cast<size_t>(cs.doc_col(k))].substr(2));
  table.births.resize(cs.n_persons, replications);
  table.deaths.resize(cs.n_persons, replications);
  table.published.resize(cs.n_docs, replications);

  auto samples = sample_lifespans(seed, cs.n_persons, cs.g, multiplier,
                                  replications);
  for (int r = 0; r < replications; ++r) {
    QpProblem prob;
    prob.constraints = &cs;
    prob.lifespans = samples[static_cast<size_t>(r)].values;
    prob.tie_break_epsilon = config.tie_break_epsilon;
    QpSolution sol = solve(prob, config);
    if (sol.status == QpSolution::Infeasible)
      throw Infeasible("replication " + std::to_string(r + 1) +
                           ": constraint system infeasible",
                       sol.infeasible_rows);
    for (int i = 0; i < cs.n_persons; ++i) {
      table.births(i, r) = sol.birth(cs, i);
      table.deaths(i, r) = sol.death(cs, i);
    }
    for (int k = 0; k < cs.n_docs; ++k)
      table.published(k, r) = sol.published(cs, k);
    table.objectives.push_back(sol.objective_value);
  }
  return table;
}

}  // namespace nuzi::qp
