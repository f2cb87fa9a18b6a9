#include "nuzi/qp/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace nuzi::qp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Trip = Eigen::Triplet<double>;

struct Data {
  int nv = 0;
  int mr = 0;  // inequality rows + 1 equality row (last)
  SpMat P;
  Vec q;
  SpMat A;
  Vec l, u;
};

Data assemble(const QpProblem& prob) {
  const cons::ConstraintSet& cs = *prob.constraints;
  Data d;
  d.nv = cs.n_variables();
  d.mr = static_cast<int>(cs.rows.size()) + 1;

  double eps = prob.tie_break_epsilon;
  double anchor = cs.anchor_year;
  std::vector<Trip> pt;
  d.q = Vec::Zero(d.nv);
  for (int i = 0; i < cs.n_persons; ++i) {
    int b = cs.birth_col(i), dd = cs.death_col(i);
    double U = prob.lifespans[static_cast<size_t>(i)];
    pt.push_back({b, b, 2.0 + 2.0 * eps});
    pt.push_back({dd, dd, 2.0});
    pt.push_back({b, dd, -2.0});
    pt.push_back({dd, b, -2.0});
    d.q[b] += 2.0 * U - 2.0 * eps * anchor;
    d.q[dd] += -2.0 * U;
  }
  for (int k = 0; k < cs.n_docs; ++k) {
    int c = cs.doc_col(k);
    pt.push_back({c, c, 2.0 * eps});
    d.q[c] += -2.0 * eps * anchor;
  }
  d.P.resize(d.nv, d.nv);
  d.P.setFromTriplets(pt.begin(), pt.end());

  std::vector<Trip> at;
  d.l = Vec::Zero(d.mr);
  d.u = Vec::Constant(d.mr, kInf);
  for (size_t r = 0; r < cs.rows.size(); ++r) {
    at.push_back({static_cast<int>(r), cs.rows[r].pos, 1.0});
    at.push_back({static_cast<int>(r), cs.rows[r].neg, -1.0});
    d.l[static_cast<long>(r)] = cs.rows[r].rhs;
  }
  at.push_back({d.mr - 1, cs.anchor_col, 1.0});
  d.l[d.mr - 1] = cs.anchor_year;
  d.u[d.mr - 1] = cs.anchor_year;
  d.A.resize(d.mr, d.nv);
  d.A.setFromTriplets(at.begin(), at.end());
  return d;
}

// Ruiz equilibration of the stacked [P A'; A 0] matrix.
void equilibrate(Data& d, Vec& dscale, Vec& escale) {
  dscale = Vec::Ones(d.nv);
  escale = Vec::Ones(d.mr);
  for (int pass = 0; pass < 10; ++pass) {
    Vec cmax = Vec::Zero(d.nv), rmax = Vec::Zero(d.mr);
    for (int j = 0; j < d.P.outerSize(); ++j)
      for (SpMat::InnerIterator it(d.P, j); it; ++it) {
        double v = std::abs(it.value());
        cmax[it.col()] = std::max(cmax[it.col()], v);
        cmax[it.row()] = std::max(cmax[it.row()], v);
      }
    for (int j = 0; j < d.A.outerSize(); ++j)
      for (SpMat::InnerIterator it(d.A, j); it; ++it) {
        double v = std::abs(it.value());
        cmax[it.col()] = std::max(cmax[it.col()], v);
        rmax[it.row()] = std::max(rmax[it.row()], v);
      }
    Vec dj(d.nv), er(d.mr);
    for (int j = 0; j < d.nv; ++j)
      dj[j] = cmax[j] > 1e-12 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
    for (int r = 0; r < d.mr; ++r)
      er[r] = rmax[r] > 1e-12 ? 1.0 / std::sqrt(rmax[r]) : 1.0;
    d.P = dj.asDiagonal() * d.P * dj.asDiagonal();
    d.A = er.asDiagonal() * d.A * dj.asDiagonal();
    d.q = dj.cwiseProduct(d.q);
    for (int r = 0; r < d.mr; ++r) {
      d.l[r] = std::isfinite(d.l[r]) ? d.l[r] * er[r] : d.l[r];
      d.u[r] = std::isfinite(d.u[r]) ? d.u[r] * er[r] : d.u[r];
    }
    dscale = dscale.cwiseProduct(dj);
    escale = escale.cwiseProduct(er);
  }
}

// Difference constraints x_pos - x_neg >= rhs are feasible exactly when the
// graph with arcs pos -> neg of weight -rhs has no negative cycle; a negative
// cycle is an irreducible infeasible subsystem.
std::vector<int> infeasible_cycle(const cons::ConstraintSet& cs) {
  int n = cs.n_variables();
  std::vector<double> dist(static_cast<size_t>(n), 0.0);
  std::vector<int> pre_row(static_cast<size_t>(n), -1);
  std::vector<int> pre_node(static_cast<size_t>(n), -1);
  int touched = -1;
  for (int pass = 0; pass < n; ++pass) {
    touched = -1;
    for (size_t r = 0; r < cs.rows.size(); ++r) {
      int from = cs.rows[r].pos, to = cs.rows[r].neg;
      double w = -cs.rows[r].rhs;
      if (dist[static_cast<size_t>(from)] + w <
          dist[static_cast<size_t>(to)] - 1e-12) {
        dist[static_cast<size_t>(to)] = dist[static_cast<size_t>(from)] + w;
        pre_row[static_cast<size_t>(to)] = static_cast<int>(r);
        pre_node[static_cast<size_t>(to)] = from;
        touched = to;
      }
    }
    if (touched < 0) return {};
  }
  // walk back n steps to land inside the cycle, then collect it
  int v = touched;
  for (int i = 0; i < n; ++i) v = pre_node[static_cast<size_t>(v)];
  std::vector<int> rows;
  int w = v;
  do {
    rows.push_back(pre_row[static_cast<size_t>(w)]);
    w = pre_node[static_cast<size_t>(w)];
  } while (w != v);
  std::sort(rows.begin(), rows.end());
  return rows;
}

struct Workspace {
  Data d;           // possibly scaled
  Vec dscale, escale;
  Vec rho;
  double sigma = 1e-6;
  Eigen::SimplicialLDLT<SpMat> ldlt;

  void set_rho(double base) {
    rho = Vec::Constant(d.mr, base);
    rho[d.mr - 1] = base * 1e3;  // equality row
    SpMat K = d.P;
    SpMat I(d.nv, d.nv);
    I.setIdentity();
    SpMat ArA = d.A.transpose() * rho.asDiagonal() * d.A;
    K = d.P + sigma * I + ArA;
    ldlt.compute(K);
  }
};

}  // namespace

double KktResiduals::max() const {
  return std::max(primal, std::max(dual, complementarity));
}

double QpSolution::birth(const cons::ConstraintSet& cs, int person) const {
  return x[cs.birth_col(person)];
}
double QpSolution::death(const cons::ConstraintSet& cs, int person) const {
  return x[cs.death_col(person)];
}
double QpSolution::published(const cons::ConstraintSet& cs, int doc) const {
  return x[cs.doc_col(doc)];
}

double objective_value(const QpProblem& prob, const Eigen::VectorXd& x) {
  const cons::ConstraintSet& cs = *prob.constraints;
  double total = 0.0;
  for (int i = 0; i < cs.n_persons; ++i) {
    double span = x[cs.death_col(i)] - x[cs.birth_col(i)];
    double dev = span - prob.lifespans[static_cast<size_t>(i)];
    total += dev * dev;
  }
  return total;
}

KktResiduals kkt_residuals(const QpProblem& prob, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& duals) {
  Data d = assemble(prob);
  KktResiduals res;
  Vec ax = d.A * x;
  double prim = 0.0;
  for (int r = 0; r + 1 < d.mr; ++r) prim = std::max(prim, d.l[r] - ax[r]);
  prim = std::max(prim, std::abs(ax[d.mr - 1] - d.l[d.mr - 1]));
  double prim_scale =
      std::max({1.0, ax.cwiseAbs().maxCoeff(),
                d.l.cwiseAbs().unaryExpr([](double v) {
                     return std::isfinite(v) ? v : 0.0;
                   }).maxCoeff()});
  res.primal = prim / prim_scale;

  Vec px = d.P * x;
  Vec aty = d.A.transpose() * duals;
  Vec stat = px + d.q - aty;
  double dual_scale = std::max(
      {1.0, px.cwiseAbs().maxCoeff(), aty.cwiseAbs().maxCoeff(),
       d.q.cwiseAbs().maxCoeff()});
  res.dual = stat.cwiseAbs().maxCoeff() / dual_scale;

  double comp = 0.0;
  for (int r = 0; r + 1 < d.mr; ++r)
    comp = std::max(comp, std::abs(duals[r]) * std::abs(ax[r] - d.l[r]));
  res.complementarity = comp / prim_scale;
  return res;
}

QpSolution solve(const QpProblem& prob, const SolverConfig& cfg) {
  const cons::ConstraintSet& cs = *prob.constraints;
  QpSolution sol;

  Workspace w;
  w.d = assemble(prob);
  if (cfg.scaling)
    equilibrate(w.d, w.dscale, w.escale);
  else {
    w.dscale = Vec::Ones(w.d.nv);
    w.escale = Vec::Ones(w.d.mr);
  }
  w.set_rho(0.1);

  Vec x = Vec::Zero(w.d.nv), z = Vec::Zero(w.d.mr), y = Vec::Zero(w.d.mr);
  // start from the anchored year so the equality is nearly satisfied
  for (int j = 0; j < w.d.nv; ++j) x[j] = cs.anchor_year / w.dscale[j];
  z = w.d.A * x;
  const double alpha = 1.6;
  double eps = cfg.tolerance;

  Vec y_prev = y;
  int check_every = 25;
  bool converged = false;
  int it = 0;
  for (it = 1; it <= cfg.max_iterations; ++it) {
    Vec rhs = w.sigma * x - w.d.q +
              w.d.A.transpose() * (w.rho.cwiseProduct(z) - y);
    Vec xt = w.ldlt.solve(rhs);
    Vec zt = w.d.A * xt;
    Vec zold = z;
    x = alpha * xt + (1.0 - alpha) * x;
    Vec v = alpha * zt + (1.0 - alpha) * zold + y.cwiseQuotient(w.rho);
    z = v.cwiseMax(w.d.l).cwiseMin(w.d.u);
    y = y + w.rho.cwiseProduct(alpha * zt + (1.0 - alpha) * zold - z);

    if (it % check_every != 0) continue;

    Vec ax = w.d.A * x;
    Vec px = w.d.P * x;
    Vec aty = w.d.A.transpose() * y;
    double rp = (ax - z).cwiseAbs().maxCoeff();
    double rd = (px + w.d.q + aty).cwiseAbs().maxCoeff();
    double sp = std::max({1.0, ax.cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff()});
    double sd = std::max({1.0, px.cwiseAbs().maxCoeff(), aty.cwiseAbs().maxCoeff(),
                          w.d.q.cwiseAbs().maxCoeff()});
    if (rp / sp < eps * 0.1 && rd / sd < eps * 0.1) {
      converged = true;
      break;
    }
    // primal infeasibility certificate
    Vec dy = y - y_prev;
    double dynorm = dy.cwiseAbs().maxCoeff();
    if (dynorm > 1e-12) {
      double atdy = (w.d.A.transpose() * dy).cwiseAbs().maxCoeff();
      double support = 0.0;
      for (int r = 0; r < w.d.mr; ++r) {
        if (std::isfinite(w.d.u[r]))
          support += w.d.u[r] * std::max(dy[r], 0.0) +
                     w.d.l[r] * std::min(dy[r], 0.0);
        else
          support += w.d.l[r] * std::min(dy[r], 0.0);
      }
      if (atdy <= 1e-10 * dynorm && support < -1e-10 * dynorm) break;
    }
    y_prev = y;
    // slow progress: retune the step
    if (it % 400 == 0) {
      double ratio = std::sqrt((rp / sp) / std::max(rd / sd, 1e-16));
      ratio = std::clamp(ratio, 1e-3, 1e3);
      if (ratio > 5.0 || ratio < 0.2) w.set_rho(w.rho[0] * ratio);
    }
  }
  sol.iterations = std::min(it, cfg.max_iterations);

  // unscale
  Vec xu = w.dscale.cwiseProduct(x);
  Vec yu = w.escale.cwiseProduct(y);
  Vec lambda = -yu;  // >= 0 on the inequality rows at an optimum

  QpProblem orig = prob;
  sol.x = xu;
  sol.duals = lambda;
  sol.kkt = kkt_residuals(orig, sol.x, sol.duals);

  // polish: equality-solve on the active rows of the unscaled problem
  {
    Data d = assemble(prob);
    std::vector<int> active;
    for (int r = 0; r + 1 < d.mr; ++r)
      if (lambda[r] > 1e-9) active.push_back(r);
    active.push_back(d.mr - 1);
    int na = static_cast<int>(active.size());
    std::vector<Trip> kt;
    for (int j = 0; j < d.P.outerSize(); ++j)
      for (SpMat::InnerIterator itP(d.P, j); itP; ++itP)
        kt.push_back({static_cast<int>(itP.row()), static_cast<int>(itP.col()),
                      itP.value()});
    double delta = 1e-9;
    for (int j = 0; j < d.nv; ++j) kt.push_back({j, j, delta});
    // A is column-major; gather row entries by scanning all of A once
    std::vector<std::vector<std::pair<int, double>>> rows_of(
        static_cast<size_t>(d.mr));
    for (int j = 0; j < d.A.outerSize(); ++j)
      for (SpMat::InnerIterator itA(d.A, j); itA; ++itA)
        rows_of[static_cast<size_t>(itA.row())].push_back(
            {static_cast<int>(itA.col()), itA.value()});
    for (int a = 0; a < na; ++a)
      for (auto [col, val] : rows_of[static_cast<size_t>(active[a])]) {
        kt.push_back({d.nv + a, col, val});
        kt.push_back({col, d.nv + a, val});
      }
    for (int a = 0; a < na; ++a)
      kt.push_back({d.nv + a, d.nv + a, -delta});
    SpMat K(d.nv + na, d.nv + na);
    K.setFromTriplets(kt.begin(), kt.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(K);
    if (lu.info() == Eigen::Success) {
      Vec rhs(d.nv + na);
      rhs.head(d.nv) = -d.q;
      for (int a = 0; a < na; ++a) rhs[d.nv + a] = d.l[active[a]];
      Vec sol_kkt = lu.solve(rhs);
      // two rounds of iterative refinement against the unregularized system
      for (int round = 0; round < 2; ++round) {
        Vec resid(d.nv + na);
        Vec xx = sol_kkt.head(d.nv);
        Vec nu = sol_kkt.tail(na);
        Vec top = -d.q - d.P * xx;
        for (int a = 0; a < na; ++a)
          for (auto [col, val] : rows_of[static_cast<size_t>(active[a])])
            top[col] -= val * nu[a];
        resid.head(d.nv) = top;
        for (int a = 0; a < na; ++a) {
          double dot = 0.0;
          for (auto [col, val] : rows_of[static_cast<size_t>(active[a])])
            dot += val * xx[col];
          resid[d.nv + a] = d.l[active[a]] - dot;
        }
        sol_kkt += lu.solve(resid);
      }
      Vec xp = sol_kkt.head(d.nv);
      Vec lp = Vec::Zero(d.mr);
      for (int a = 0; a < na; ++a) lp[active[a]] = -sol_kkt[d.nv + a];
      // multipliers of a lower-bound row must be nonnegative
      for (int r = 0; r + 1 < d.mr; ++r) lp[r] = std::max(lp[r], 0.0);
      KktResiduals pol = kkt_residuals(orig, xp, lp);
      if (pol.max() < sol.kkt.max()) {
        sol.x = xp;
        sol.duals = lp;
        sol.kkt = pol;
      }
    }
  }

  sol.objective_value = objective_value(prob, sol.x);
  (void)converged;
  if (sol.kkt.max() <= cfg.tolerance) {
    sol.status = QpSolution::Optimal;
  } else {
    std::vector<int> cycle = infeasible_cycle(cs);
    if (!cycle.empty()) {
      sol.status = QpSolution::Infeasible;
      sol.infeasible_rows = cycle;
    } else {
      sol.status = QpSolution::MaxIterations;
    }
  }
  return sol;
}

}  // namespace nuzi::qp
