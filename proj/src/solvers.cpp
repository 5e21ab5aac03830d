#include "shiftdenoise/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shiftdenoise {

namespace {

double l1_norm(const cvec& v) {
  double s = 0.0;
  for (const auto& e : v) s += std::abs(e);
  return s;
}

double l2_norm(const cvec& v) {
  double s = 0.0;
  for (const auto& e : v) s += std::norm(e);
  return std::sqrt(s);
}

cvec axpy(const cvec& x, const cvec& y, double a) {  // x + a*(x - y)
  cvec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * (x[i] - y[i]);
  return out;
}

}  // namespace

cvec project_l1_ball(const cvec& f, double r) {
  if (r < 0.0) throw std::invalid_argument("project_l1_ball: radius must be >= 0");
  if (r == 0.0) return cvec(f.size(), cx{});
  if (l1_norm(f) <= r) return f;

  double lo = 0.0, hi = 0.0;
  for (const auto& e : f) hi = std::max(hi, std::abs(e));
  // sum_k max(|f_k| - theta, 0) is decreasing in theta; solve for the level
  // meeting the radius.
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double theta = 0.5 * (lo + hi);
    double s = 0.0;
    for (const auto& e : f) s += std::max(std::abs(e) - theta, 0.0);
    if (s > r)
      lo = theta;
    else
      hi = theta;
  }
  const double theta = 0.5 * (lo + hi);
  cvec out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double mag = std::abs(f[i]);
    const double kept = std::max(mag - theta, 0.0);
    out[i] = (kept > 0.0 && mag > 0.0) ? f[i] * (kept / mag) : cx{};
  }
  return out;
}

cvec prox_squared_l1(const cvec& f, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("prox_squared_l1: gamma must be > 0");
  const std::size_t d = f.size();
  std::vector<double> mags(d);
  for (std::size_t i = 0; i < d; ++i) mags[i] = std::abs(f[i]);
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  // With K active entries the threshold is theta_K = 2*gamma*S_K/(1+2*gamma*K);
  // K is the largest count whose K-th magnitude still clears its threshold.
  double theta = 0.0, prefix = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    prefix += sorted[k - 1];
    const double cand = 2.0 * gamma * prefix / (1.0 + 2.0 * gamma * static_cast<double>(k));
    if (sorted[k - 1] > cand)
      theta = cand;
    else
      break;
  }
  cvec out(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double kept = std::max(mags[i] - theta, 0.0);
    out[i] = (kept > 0.0 && mags[i] > 0.0) ? f[i] * (kept / mags[i]) : cx{};
  }
  return out;
}

namespace {

struct Objective {
  const LinearOperator& A;
  const cvec& b;

  double residual_sq(const cvec& f, cvec* residual_out = nullptr) const {
    cvec Af = A.apply(f);
    double s = 0.0;
    for (std::size_t i = 0; i < Af.size(); ++i) {
      Af[i] = b[i] - Af[i];
      s += std::norm(Af[i]);
    }
    if (residual_out) *residual_out = std::move(Af);
    return s;
  }

  // gradient of ||b - A f||^2 is -2 A^H (b - A f)
  cvec gradient(const cvec& residual) const {
    cvec g = A.adjoint(residual);
    for (auto& e : g) e *= -2.0;
    return g;
  }
};

// Shared FISTA loop. The prox callback implements the simple part; penalty()
// reports its value at a point for objective tracking.
template <typename Prox, typename Penalty>
SolverResult fista(const LinearOperator& A, const cvec& b, const SolverOptions& opts,
                   std::optional<double> op_norm_hint, Prox&& prox, Penalty&& penalty) {
  if (opts.max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
  if (opts.tol <= 0.0) throw std::invalid_argument("solver: tol must be > 0");

  const Objective obj{A, b};
  const double opn = op_norm_hint ? *op_norm_hint : operator_norm(A);
  // Gradient of the squared residual has Lipschitz constant 2*sigma_max^2.
  double L = std::max(2.0 * opn * opn * (1.0 + opts.step_safety), 1e-300);

  cvec x(A.cols, cx{});
  cvec y = x;
  double t = 1.0;
  double fx = obj.residual_sq(x) + penalty(x);

  cvec best_x = x;
  double best_f = fx;
  double certificate = 0.0;
  bool converged = false;
  int iter = 0;

  for (; iter < opts.max_iters; ++iter) {
    cvec residual_y;
    const double gy = obj.residual_sq(y, &residual_y);
    cvec grad = obj.gradient(residual_y);

    cvec z;
    double gz = 0.0;
    for (;;) {
      cvec step(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) step[i] = y[i] - grad[i] / L;
      z = prox(step, L);
      gz = obj.residual_sq(z);
      // Backtrack if the quadratic majorization at y fails (operator norm
      // was underestimated).
      double lin = 0.0, dist = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const cx d = z[i] - y[i];
        lin += (std::conj(grad[i]) * d).real();
        dist += std::norm(d);
      }
      if (gz <= gy + lin + 0.5 * L * dist + 1e-12 * std::abs(gy)) break;
      L *= 2.0;
      if (L > 1e300) break;
    }
    const double fz = gz + penalty(z);

    if (fz > fx) {
      // Function-value restart: drop momentum and retry from the last accept.
      y = x;
      t = 1.0;
      cvec residual_x;
      obj.residual_sq(x, &residual_x);
      cvec grad_x = obj.gradient(residual_x);
      cvec step(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - grad_x[i] / L;
      cvec p = prox(step, L);
      double fp = obj.residual_sq(p) + penalty(p);
      certificate = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) certificate += std::norm(x[i] - p[i]);
      certificate = std::sqrt(certificate);
      if (certificate <= opts.tol * (1.0 + l2_norm(x))) {
        converged = true;
        ++iter;
        break;
      }
      // Keep sliding toward the prox fixed point even when the objective can
      // no longer improve beyond floating noise.
      if (fp <= fx + 1e-12 * std::abs(fx)) {
        x = std::move(p);
        fx = std::min(fx, fp);
        y = x;
      }
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = axpy(z, x, (t - 1.0) / t_next);
      x = std::move(z);
      fx = fz;
      t = t_next;
    }

    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }

    if ((iter + 1) % 10 == 0) {
      cvec residual_x;
      obj.residual_sq(x, &residual_x);
      cvec grad_x = obj.gradient(residual_x);
      cvec step(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - grad_x[i] / L;
      cvec p = prox(step, L);
      certificate = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) certificate += std::norm(x[i] - p[i]);
      certificate = std::sqrt(certificate);
      if (certificate <= opts.tol * (1.0 + l2_norm(x))) {
        converged = true;
        ++iter;
        break;
      }
    }
  }

  SolverResult res;
  res.solution = std::move(best_x);
  res.objective = best_f;
  res.iterations = iter;
  res.converged = converged;
  {
    cvec residual;
    obj.residual_sq(res.solution, &residual);
    cvec grad = obj.gradient(residual);
    cvec step(res.solution.size());
    for (std::size_t i = 0; i < step.size(); ++i) step[i] = res.solution[i] - grad[i] / L;
    cvec p = prox(step, L);
    double c = 0.0;
    for (std::size_t i = 0; i < step.size(); ++i) c += std::norm(res.solution[i] - p[i]);
    res.certificate = std::sqrt(c);
  }
  return res;
}

}  // namespace

SolverResult solve_constrained(const LinearOperator& A, const cvec& b, double r,
                               const SolverOptions& opts, std::optional<double> op_norm_hint) {
  if (r < 0.0) throw std::invalid_argument("solve_constrained: radius must be >= 0");
  if (r == 0.0) {
    SolverResult res;
    res.solution.assign(A.cols, cx{});
    double s = 0.0;
    for (const auto& e : b) s += std::norm(e);
    res.objective = s;
    res.converged = true;
    return res;
  }
  return fista(
      A, b, opts, op_norm_hint,
      [r](const cvec& v, double) { return project_l1_ball(v, r); },
      [](const cvec&) { return 0.0; });
}

SolverResult solve_penalized(const LinearOperator& A, const cvec& b, double c,
                             const SolverOptions& opts, std::optional<double> op_norm_hint) {
  if (c < 0.0) throw std::invalid_argument("solve_penalized: weight must be >= 0");
  return fista(
      A, b, opts, op_norm_hint,
      [c](const cvec& v, double L) {
        if (c == 0.0) return v;
        return prox_squared_l1(v, c / L);
      },
      [c](const cvec& v) {
        double s = 0.0;
        for (const auto& e : v) s += std::abs(e);
        return c * s * s;
      });
}

}  // namespace shiftdenoise
