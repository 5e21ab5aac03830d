#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "shiftdenoise/solvers.hpp"
#include "test_util.hpp"

using namespace shiftdenoise;
using testutil::Rng;

namespace {

double l1(const cvec& v) {
  double s = 0.0;
  for (const auto& e : v) s += std::abs(e);
  return s;
}

double dist(const cvec& a, const cvec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

LinearOperator identity_op(std::size_t d) {
  LinearOperator op;
  op.rows = op.cols = d;
  op.apply = [](const cvec& v) { return v; };
  op.adjoint = [](const cvec& v) { return v; };
  return op;
}

LinearOperator dense_op(const std::vector<cvec>& rows, std::size_t cols) {
  LinearOperator op;
  op.rows = rows.size();
  op.cols = cols;
  op.apply = [rows, cols](const cvec& v) {
    cvec out(rows.size(), cx{});
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out[i] += rows[i][j] * v[j];
    return out;
  };
  op.adjoint = [rows, cols](const cvec& r) {
    cvec out(cols, cx{});
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out[j] += std::conj(rows[i][j]) * r[i];
    return out;
  };
  return op;
}

double objective_constrained(const LinearOperator& A, const cvec& b, const cvec& f) {
  const cvec Af = A.apply(f);
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += std::norm(b[i] - Af[i]);
  return s;
}

double objective_penalized(const LinearOperator& A, const cvec& b, double c, const cvec& f) {
  const double t = l1(f);
  return objective_constrained(A, b, f) + c * t * t;
}

// Plain projected gradient, no acceleration: an independent reference route.
cvec reference_projected_gradient(const LinearOperator& A, const cvec& b, double r, int iters) {
  const double opn = operator_norm(A, {.iters = 5000, .tol = 1e-12});
  const double step = 1.0 / (2.0 * opn * opn * 1.01);
  cvec x(A.cols, cx{});
  for (int it = 0; it < iters; ++it) {
    cvec Af = A.apply(x);
    for (std::size_t i = 0; i < Af.size(); ++i) Af[i] -= b[i];
    cvec g = A.adjoint(Af);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= 2.0 * step * g[i];
    x = project_l1_ball(x, r);
  }
  return x;
}

// Exact coordinate minimization for the squared-l1-penalized least squares.
cvec reference_coordinate_descent(const std::vector<cvec>& rows, const cvec& b, double c,
                                  std::size_t cols, int sweeps) {
  cvec f(cols, cx{});
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t j = 0; j < cols; ++j) {
      // residual excluding coordinate j
      cvec res = b;
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < cols; ++k)
          if (k != j) res[i] -= rows[i][k] * f[k];
      cx v{};
      double a = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        v += std::conj(rows[i][j]) * res[i];
        a += std::norm(rows[i][j]);
      }
      double others = 0.0;
      for (std::size_t k = 0; k < cols; ++k)
        if (k != j) others += std::abs(f[k]);
      const double mag = std::max(0.0, (std::abs(v) - c * others) / (a + c));
      f[j] = (std::abs(v) > 0.0) ? std::polar(mag, std::arg(v)) : cx{};
    }
  }
  return f;
}

}  // namespace

TEST_CASE("l1 ball projection basics") {
  Rng rng(101);
  // interior points pass through
  cvec f = {cx{0.3, 0.4}, cx{-0.2, 0.1}};
  CHECK(dist(project_l1_ball(f, 2.0), f) == 0.0);
  // zero radius collapses everything
  for (const auto& e : project_l1_ball(f, 0.0)) CHECK(std::abs(e) == 0.0);
  // magnitudes (3,1) at radius 2 become (2,0) with phases kept
  cvec g = {std::polar(3.0, 0.7), std::polar(1.0, -2.1)};
  cvec p = project_l1_ball(g, 2.0);
  CHECK(std::abs(p[0]) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(p[1]) < 1e-10);
  CHECK(std::arg(p[0]) == doctest::Approx(0.7));
}

TEST_CASE("l1 ball projection is feasible, idempotent, and optimal") {
  Rng rng(103);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = static_cast<std::size_t>(rng.integer(1, 12));
    const cvec f = testutil::random_cvec(rng, d);
    const double r = rng.uniform(0.0, 0.8 * l1(f) + 0.1);
    const cvec p = project_l1_ball(f, r);
    CHECK(l1(p) <= r + 1e-12);
    CHECK(dist(project_l1_ball(p, r), p) < 1e-12);
    // no sampled feasible point lies closer
    for (int probe = 0; probe < 200; ++probe) {
      cvec q = project_l1_ball(testutil::random_cvec(rng, d), r);
      CHECK(dist(f, p) <= dist(f, q) + 1e-9);
    }
  }
}

TEST_CASE("squared-l1 prox: vanishing penalty and single coordinates") {
  Rng rng(107);
  const cvec f = testutil::random_cvec(rng, 6);
  CHECK(dist(prox_squared_l1(f, 1e-12), f) < 1e-8);

  const cvec single = {std::polar(1.7, 0.3)};
  for (double gamma : {0.1, 1.0, 7.5}) {
    const cvec p = prox_squared_l1(single, gamma);
    CHECK(std::abs(p[0]) == doctest::Approx(1.7 / (1.0 + 2.0 * gamma)).epsilon(1e-12));
    CHECK(std::arg(p[0]) == doctest::Approx(0.3));
  }
}

TEST_CASE("squared-l1 prox matches a numeric minimizer over magnitudes") {
  Rng rng(109);
  for (double gamma : {0.1, 1.0}) {
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t d = static_cast<std::size_t>(rng.integer(1, 8));
      const cvec f = testutil::random_cvec(rng, d);
      const cvec p = prox_squared_l1(f, gamma);

      // independent route: projected gradient on the magnitude problem
      std::vector<double> m(d), mu(d, 0.0);
      for (std::size_t i = 0; i < d; ++i) m[i] = std::abs(f[i]);
      const double step = 1.0 / (1.0 + 2.0 * gamma * static_cast<double>(d));
      for (int it = 0; it < 20000; ++it) {
        double s = 0.0;
        for (double v : mu) s += v;
        for (std::size_t i = 0; i < d; ++i)
          mu[i] = std::max(0.0, mu[i] - step * ((mu[i] - m[i]) + 2.0 * gamma * s));
      }
      auto value = [&](const std::vector<double>& q) {
        double s = 0.0, t = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          s += 0.5 * (q[i] - m[i]) * (q[i] - m[i]);
          t += q[i];
        }
        return s + gamma * t * t;
      };
      std::vector<double> mine(d);
      for (std::size_t i = 0; i < d; ++i) mine[i] = std::abs(p[i]);
      CHECK(value(mine) <= value(mu) + 1e-4);
      CHECK(std::abs(value(mine) - value(mu)) < 1e-4);
    }
  }
}

TEST_CASE("constrained solve on identity operators") {
  SolverOptions opts;
  opts.max_iters = 20000;
  opts.tol = 1e-12;
  {
    cvec b = {cx{0.5, 0.1}, cx{-0.2, 0.3}};
    auto res = solve_constrained(identity_op(2), b, 2.0, opts);
    CHECK(dist(res.solution, b) < 1e-9);
    CHECK(res.objective < 1e-18);
    CHECK(res.converged);
  }
  {
    cvec b = {cx{3.0, 0.0}, cx{1.0, 0.0}};
    auto res = solve_constrained(identity_op(2), b, 2.0, opts);
    const cvec expected = project_l1_ball(b, 2.0);
    CHECK(dist(res.solution, expected) < 1e-7);
  }
}

TEST_CASE("constrained solve beats sampled feasible points and a reference solver") {
  Rng rng(113);
  SolverOptions opts;
  opts.max_iters = 50000;
  opts.tol = 1e-13;
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t rows_n = static_cast<std::size_t>(rng.integer(2, 6));
    const std::size_t cols_n = static_cast<std::size_t>(rng.integer(1, 6));
    std::vector<cvec> rows;
    for (std::size_t i = 0; i < rows_n; ++i) rows.push_back(testutil::random_cvec(rng, cols_n));
    const cvec b = testutil::random_cvec(rng, rows_n);
    const double r = rng.uniform(0.2, 2.0);
    const LinearOperator A = dense_op(rows, cols_n);

    const auto res = solve_constrained(A, b, r, opts);
    CHECK(l1(res.solution) <= r * (1.0 + 1e-9));

    for (int probe = 0; probe < 1000; ++probe) {
      const cvec q = project_l1_ball(testutil::random_cvec(rng, cols_n), r);
      CHECK(res.objective <= objective_constrained(A, b, q) + 1e-8);
    }
    const cvec ref = reference_projected_gradient(A, b, r, 60000);
    CHECK(res.objective <= objective_constrained(A, b, ref) + 1e-4);
    CHECK(std::abs(res.objective - objective_constrained(A, b, ref)) < 1e-4);
  }
}

TEST_CASE("penalized solve: zero and dominating penalties") {
  SolverOptions opts;
  opts.max_iters = 20000;
  opts.tol = 1e-12;
  cvec b = {cx{0.6, -0.1}, cx{0.3, 0.2}};
  {
    auto res = solve_penalized(identity_op(2), b, 0.0, opts);
    CHECK(dist(res.solution, b) < 1e-9);
  }
  {
    auto res = solve_penalized(identity_op(2), b, 1e8, opts);
    double s = 0.0;
    for (const auto& e : res.solution) s += std::abs(e);
    CHECK(s <= 1e-6);
  }
}

TEST_CASE("penalized solve matches coordinate descent") {
  Rng rng(127);
  SolverOptions opts;
  opts.max_iters = 50000;
  opts.tol = 1e-13;
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t rows_n = static_cast<std::size_t>(rng.integer(2, 6));
    const std::size_t cols_n = static_cast<std::size_t>(rng.integer(1, 5));
    std::vector<cvec> rows;
    for (std::size_t i = 0; i < rows_n; ++i) rows.push_back(testutil::random_cvec(rng, cols_n));
    const cvec b = testutil::random_cvec(rng, rows_n);
    const double c = rng.uniform(0.05, 1.0);
    const LinearOperator A = dense_op(rows, cols_n);

    const auto res = solve_penalized(A, b, c, opts);
    const cvec cd = reference_coordinate_descent(rows, b, c, cols_n, 4000);
    const double mine = objective_penalized(A, b, c, res.solution);
    const double ref = objective_penalized(A, b, c, cd);
    CHECK(mine <= ref + 1e-6);
    CHECK(std::abs(mine - ref) < 1e-6);
  }
}

TEST_CASE("solvers are deterministic") {
  Rng rng(131);
  std::vector<cvec> rows;
  for (int i = 0; i < 4; ++i) rows.push_back(testutil::random_cvec(rng, 3));
  const cvec b = testutil::random_cvec(rng, 4);
  const LinearOperator A = dense_op(rows, 3);
  const auto r1 = solve_constrained(A, b, 0.7);
  const auto r2 = solve_constrained(A, b, 0.7);
  CHECK(r1.iterations == r2.iterations);
  CHECK(dist(r1.solution, r2.solution) == 0.0);
  const auto p1 = solve_penalized(A, b, 0.4);
  const auto p2 = solve_penalized(A, b, 0.4);
  CHECK(dist(p1.solution, p2.solution) == 0.0);
}

TEST_CASE("stationarity certificate is reported") {
  Rng rng(137);
  std::vector<cvec> rows;
  for (int i = 0; i < 5; ++i) rows.push_back(testutil::random_cvec(rng, 4));
  const cvec b = testutil::random_cvec(rng, 5);
  const LinearOperator A = dense_op(rows, 4);
  SolverOptions opts;
  opts.max_iters = 50000;
  opts.tol = 1e-11;
  const auto res = solve_penalized(A, b, 0.3, opts);
  double sol_norm = 0.0;
  for (const auto& e : res.solution) sol_norm += std::norm(e);
  CHECK(res.certificate <= opts.tol * (1.0 + std::sqrt(sol_norm)) * 10.0);
  CHECK(res.converged);
}
