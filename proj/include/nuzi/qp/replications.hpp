#pragma once

#include "nuzi/chronometry/table.hpp"
#include "nuzi/qp/solver.hpp"

namespace nuzi::qp {

/// Solves the least-squares problem once per replication with fresh
/// simulated lifespans and collects the birth/death/published years.
/// Variable labels are taken from the constraint set ("b X", "d X", "P Y").
/// Throws Infeasible when a solve certifies infeasibility.
chron::BirthTable run_replications(const cons::ConstraintSet& cs,
                                   double multiplier, int replications,
                                   uint64_t seed,
                                   const SolverConfig& config = {});

}  // namespace nuzi::qp
