#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace eihplan {

// Dense symmetric solve via LDL^T with a diagonal ridge fallback. Small
// systems only (tens of variables).
inline bool ldlt_solve(std::vector<double> a, std::vector<double> b, int n,
                       std::vector<double>& x) {
  std::vector<double> d(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double dj = a[j * n + j];
    for (int k = 0; k < j; ++k) dj -= a[j * n + k] * a[j * n + k] * d[k];
    if (!(std::fabs(dj) > 0.0) || !std::isfinite(dj)) return false;
    d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (int k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k] * d[k];
      a[i * n + j] = v / dj;
    }
  }
  for (int i = 0; i < n; ++i) {
    double v = b[i];
    for (int k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
    b[i] = v;
  }
  for (int i = 0; i < n; ++i) b[i] /= d[i];
  for (int i = n - 1; i >= 0; --i) {
    double v = b[i];
    for (int k = i + 1; k < n; ++k) v -= a[k * n + i] * b[k];
    b[i] = v;
  }
  x = b;
  return true;
}

// One smooth inequality constraint g(x) <= 0 with analytic derivatives.
// eval fills grad (size n) and adds the Hessian contribution scaled by
// `hess_weight` into `hess` (n x n, row major); it returns g(x).
struct SmoothConstraint {
  std::function<double(const std::vector<double>&, std::vector<double>* grad)> eval;
  std::function<void(const std::vector<double>&, double weight, std::vector<double>& hess)>
      add_hessian;  // may be empty for affine constraints
};

struct BarrierOptions {
  double t_initial = 1.0;
  double t_multiplier = 30.0;
  double gap_target = 1e-8;       // m / t stopping level
  double newton_tol = 1e-11;      // half squared Newton decrement
  int max_newton_per_round = 60;
  double relax = 1e-9;            // constraints solved as g(x) <= relax
  double active_slack = 1e-4;     // constraints this close count as active
};

struct BarrierReport {
  bool converged = false;
  double objective = 0.0;
  double duality_gap = 0.0;
  double stationarity = 0.0;      // inf-norm of objective grad + sum lambda grad g
  double worst_violation = 0.0;   // max over constraints of g(x)
  std::vector<double> multipliers;
  std::string message;
  int newton_steps = 0;
};

// Log-barrier interior-point minimizer for linear objectives over smooth
// convex inequality sets: min c.x s.t. g_i(x) <= relax. The start point must
// satisfy g_i(x0) < relax for every i; a start exactly on the true boundary
// (g = 0) is therefore admissible.
class BarrierSolver {
 public:
  BarrierSolver(std::vector<double> objective, std::vector<SmoothConstraint> constraints,
                BarrierOptions options = {})
      : c_(std::move(objective)), cons_(std::move(constraints)), opt_(options) {}

  BarrierReport minimize(std::vector<double>& x) const {
    const int n = static_cast<int>(c_.size());
    const int m = static_cast<int>(cons_.size());
    BarrierReport rep;
    std::vector<double> grad(n), step(n), gtmp(n);
    std::vector<double> hess(static_cast<size_t>(n) * n);
    std::vector<double> slack(m);

    if (!slacks(x, slack)) {
      rep.message = "start point is not strictly feasible for the relaxed set";
      return rep;
    }

    double t = opt_.t_initial;
    while (true) {
      // Centering for the current barrier parameter.
      for (int it = 0; it < opt_.max_newton_per_round; ++it) {
        if (!slacks(x, slack)) {
          rep.message = "iterate left the feasible region";
          return rep;
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        for (int i = 0; i < n; ++i) grad[i] = t * c_[i];
        for (int k = 0; k < m; ++k) {
          double s = slack[k];
          double gval = cons_[k].eval(x, &gtmp);
          (void)gval;
          double inv = 1.0 / s;
          for (int i = 0; i < n; ++i) {
            grad[i] += gtmp[i] * inv;
            for (int j = 0; j <= i; ++j) hess[i * n + j] += gtmp[i] * gtmp[j] * inv * inv;
          }
          if (cons_[k].add_hessian) cons_[k].add_hessian(x, inv, hess);
        }
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) hess[i * n + j] = hess[j * n + i];

        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = -grad[i];
        double ridge = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
          std::vector<double> h2 = hess;
          if (ridge > 0.0)
            for (int i = 0; i < n; ++i) h2[i * n + i] += ridge;
          ok = ldlt_solve(h2, rhs, n, step);
          if (ok) {
            double descent = 0.0;
            for (int i = 0; i < n; ++i) descent += grad[i] * step[i];
            if (descent > 0.0) ok = false;  // not a descent direction, add ridge
          }
          ridge = (ridge == 0.0) ? 1e-8 * diag_scale(hess, n) : ridge * 100.0;
        }
        if (!ok) {
          rep.message = "newton system unsolvable";
          return rep;
        }
        ++rep.newton_steps;

        double decrement = 0.0;
        for (int i = 0; i < n; ++i) decrement -= grad[i] * step[i];
        if (decrement * 0.5 <= opt_.newton_tol) break;

        // Backtracking line search on the barrier merit.
        double phi0 = barrier_value(x, t);
        double alpha = 1.0;
        std::vector<double> trial(n);
        for (int ls = 0; ls < 60; ++ls) {
          for (int i = 0; i < n; ++i) trial[i] = x[i] + alpha * step[i];
          double phi = barrier_value(trial, t);
          if (std::isfinite(phi) && phi <= phi0 - 0.25 * alpha * decrement) break;
          alpha *= 0.5;
        }
        for (int i = 0; i < n; ++i) x[i] += alpha * step[i];
      }

      if (static_cast<double>(m) / t <= opt_.gap_target) break;
      t *= opt_.t_multiplier;
    }

    // KKT certificate. The raw barrier multipliers 1/(t s_i) are noisy at
    // large t, so refit them: least-squares multipliers over the near-active
    // set with nonnegativity enforced by dropping negative entries.
    slacks(x, slack);
    rep.multipliers.assign(m, 0.0);
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    std::vector<int> active;
    std::vector<std::vector<double>> jac(m, std::vector<double>(n));
    for (int k = 0; k < m; ++k) {
      double g = cons_[k].eval(x, &jac[k]);
      rep.worst_violation = std::max(rep.worst_violation, g);
      if (slack[k] <= opt_.active_slack) active.push_back(k);
    }
    for (int round = 0; round < 1 + m && !active.empty(); ++round) {
      int na = static_cast<int>(active.size());
      std::vector<double> ata(static_cast<size_t>(na) * na, 0.0), atb(na, 0.0), lam;
      for (int a = 0; a < na; ++a) {
        for (int b = 0; b <= a; ++b) {
          double dot = 0.0;
          for (int i = 0; i < n; ++i) dot += jac[active[a]][i] * jac[active[b]][i];
          ata[a * na + b] = dot;
          ata[b * na + a] = dot;
        }
        double rhs = 0.0;
        for (int i = 0; i < n; ++i) rhs -= jac[active[a]][i] * c_[i];
        atb[a] = rhs;
      }
      for (int a = 0; a < na; ++a) ata[a * na + a] += 1e-12 * (1.0 + ata[a * na + a]);
      if (!ldlt_solve(ata, atb, na, lam)) break;
      int worst = -1;
      for (int a = 0; a < na; ++a)
        if (lam[a] < 0.0 && (worst < 0 || lam[a] < lam[worst])) worst = a;
      if (worst < 0) {
        for (int a = 0; a < na; ++a) rep.multipliers[active[a]] = lam[a];
        break;
      }
      active.erase(active.begin() + worst);
    }
    std::vector<double> resid(c_);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i) resid[i] += rep.multipliers[k] * jac[k][i];
    for (int i = 0; i < n; ++i)
      rep.stationarity = std::max(rep.stationarity, std::fabs(resid[i]));
    rep.duality_gap = static_cast<double>(m) / t;
    rep.objective = 0.0;
    for (int i = 0; i < n; ++i) rep.objective += c_[i] * x[i];
    rep.converged = true;
    return rep;
  }

 private:
  static double diag_scale(const std::vector<double>& hess, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::fabs(hess[i * n + i]));
    return s > 0.0 ? s : 1.0;
  }

  bool slacks(const std::vector<double>& x, std::vector<double>& out) const {
    for (size_t k = 0; k < cons_.size(); ++k) {
      double g = cons_[k].eval(x, nullptr);
      double s = opt_.relax - g;
      if (!(s > 0.0) || !std::isfinite(s)) return false;
      out[k] = s;
    }
    return true;
  }

  double barrier_value(const std::vector<double>& x, double t) const {
    double phi = 0.0;
    for (size_t i = 0; i < c_.size(); ++i) phi += t * c_[i] * x[i];
    for (const SmoothConstraint& con : cons_) {
      double g = con.eval(x, nullptr);
      double s = opt_.relax - g;
      if (!(s > 0.0) || !std::isfinite(s)) return std::numeric_limits<double>::infinity();
      phi -= std::log(s);
    }
    return phi;
  }

  std::vector<double> c_;
  std::vector<SmoothConstraint> cons_;
  BarrierOptions opt_;
};

}  // namespace eihplan
