#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "nuzi/constraints/emit.hpp"
#include "nuzi/qp/rng.hpp"

namespace nuzi::qp {

struct SolverConfig {
  double tolerance = 1e-6;       // relative KKT tolerance
  int max_iterations = 200000;
  double tie_break_epsilon = 1e-8;
  bool scaling = true;           // Ruiz equilibration
};

/// min sum_i ((d_i - b_i) - U_i)^2 over the constraint rows, with the small
/// tie-break term eps (|b - anchor|^2 + |P - anchor|^2) selecting one point
/// of the optimal face.
struct QpProblem {
  const cons::ConstraintSet* constraints = nullptr;
  std::vector<double> lifespans;  // one per person
  double tie_break_epsilon = 1e-8;
};

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  double max() const;
};

struct QpSolution {
  enum Status { Optimal, MaxIterations, Infeasible } status = MaxIterations;
  Eigen::VectorXd x;       // b, d, P stacked as in ConstraintSet
  Eigen::VectorXd duals;   // one per inequality row, >= 0, plus the equality
  double objective_value = 0.0;  // the least-squares part only
  KktResiduals kkt;
  int iterations = 0;
  std::vector<int> infeasible_rows;  // small conflicting subsystem, if any

  double birth(const cons::ConstraintSet& cs, int person) const;
  double death(const cons::ConstraintSet& cs, int person) const;
  double published(const cons::ConstraintSet& cs, int doc) const;
};

struct Infeasible : std::runtime_error {
  std::vector<int> rows;
  Infeasible(const std::string& what_, std::vector<int> rows_)
      : std::runtime_error(what_), rows(std::move(rows_)) {}
};

QpSolution solve(const QpProblem& problem, const SolverConfig& config = {});

/// Residuals of an arbitrary primal/dual pair, relative scaling as in the
/// solver's stopping test.
KktResiduals kkt_residuals(const QpProblem& problem, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& duals);

/// The least-squares objective (without the tie-break term).
double objective_value(const QpProblem& problem, const Eigen::VectorXd& x);

}  // namespace nuzi::qp
