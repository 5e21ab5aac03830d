#include "shiftdenoise/oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "shiftdenoise/errors.hpp"

namespace shiftdenoise {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

double wrap_angle(double w) {
  w = std::fmod(w, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

cx root_power(const Root& r, long t) {
  if (std::abs(std::abs(r.z) - 1.0) < 1e-12)
    return std::polar(1.0, std::arg(r.z) * static_cast<double>(t));
  return std::pow(r.z, static_cast<double>(t));
}

cvec poly_from_roots(const std::vector<Root>& roots) {
  cvec p{cx{1.0, 0.0}};
  for (const auto& r : roots)
    for (int j = 0; j < r.mult; ++j) {
      cvec next(p.size() + 1, cx{});
      for (std::size_t i = 0; i < p.size(); ++i) {
        next[i] += p[i];
        next[i + 1] -= r.z * p[i];  // multiply by (1 - z_k * z)
      }
      p = std::move(next);
    }
  return p;
}

std::vector<Root> roots_from_poly(const cvec& p) {
  const int s = static_cast<int>(p.size()) - 1;
  if (s == 0) return {};
  // Companion matrix of the monic reversal; p(0)=1 keeps zero out of the roots.
  cvec monic(p);
  const cx lead = monic.back();
  if (std::abs(lead) < 1e-300) throw ConfigError("SubspaceSpec: leading coefficient vanishes");
  CMat comp = CMat::Zero(s, s);
  for (int i = 0; i < s; ++i) comp(0, i) = -monic[static_cast<std::size_t>(s - 1 - i)] / lead;
  for (int i = 1; i < s; ++i) comp(i, i - 1) = cx{1.0, 0.0};
  Eigen::ComplexEigenSolver<CMat> eig(comp);
  // The stored base is the signal growth factor b with p(1/b) = 0, i.e. the
  // reciprocal of the polynomial root.
  std::vector<cx> raw(s);
  for (int i = 0; i < s; ++i) raw[static_cast<std::size_t>(i)] = cx{1.0, 0.0} / eig.eigenvalues()(i);
  std::sort(raw.begin(), raw.end(), [](cx a, cx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  // Cluster numerically coincident roots into multiplicities.
  constexpr double kClusterTol = 1e-7;
  std::vector<Root> roots;
  for (const auto& z : raw) {
    bool merged = false;
    for (auto& r : roots)
      if (std::abs(r.z - z) < kClusterTol) {
        r.z = (r.z * static_cast<double>(r.mult) + z) / static_cast<double>(r.mult + 1);
        ++r.mult;
        merged = true;
        break;
      }
    if (!merged) roots.push_back({z, 1});
  }
  return roots;
}

// Orthonormal basis of the column span, rank decided against the largest
// pivot (degenerate specs collapse gracefully).
CMat orthonormal_span(const CMat& B) {
  Eigen::ColPivHouseholderQR<CMat> qr(B);
  qr.setThreshold(1e-10);
  const long rank = qr.rank();
  CMat Q = qr.householderQ() * CMat::Identity(B.rows(), rank);
  return Q;
}

CMat basis_matrix(const SubspaceSpec& spec, long start, long len) {
  CMat B(len, spec.dimension());
  long col = 0;
  for (const auto& r : spec.roots())
    for (int j = 0; j < r.mult; ++j, ++col)
      for (long i = 0; i < len; ++i) {
        const long t = start + i;
        B(i, col) = std::pow(static_cast<double>(t), j) * root_power(r, t);
      }
  return B;
}

}  // namespace

SubspaceSpec SubspaceSpec::from_modes(std::vector<Mode> modes) {
  if (modes.empty()) throw ConfigError("SubspaceSpec: at least one mode required");
  SubspaceSpec spec;
  for (auto& mo : modes) {
    if (mo.mult < 1) throw ConfigError("SubspaceSpec: multiplicity must be >= 1");
    mo.omega = wrap_angle(mo.omega);
    spec.roots_.push_back({std::polar(1.0, mo.omega), mo.mult});
    spec.s_ += mo.mult;
  }
  spec.poly_ = poly_from_roots(spec.roots_);
  return spec;
}

SubspaceSpec SubspaceSpec::from_poly(cvec poly) {
  if (poly.size() < 2) throw ConfigError("SubspaceSpec: polynomial degree must be >= 1");
  if (std::abs(poly.front() - cx{1.0, 0.0}) > 1e-9)
    throw ConfigError("SubspaceSpec: polynomial must satisfy p(0) = 1");
  SubspaceSpec spec;
  spec.poly_ = std::move(poly);
  spec.s_ = static_cast<int>(spec.poly_.size()) - 1;
  spec.roots_ = roots_from_poly(spec.poly_);
  return spec;
}

bool SubspaceSpec::unit_modulus(double tol) const {
  for (const auto& r : roots_)
    if (std::abs(std::abs(r.z) - 1.0) > tol) return false;
  return true;
}

std::vector<Mode> SubspaceSpec::modes(double tol) const {
  if (!unit_modulus(tol)) throw ConfigError("SubspaceSpec: roots are not on the unit circle");
  std::vector<Mode> out;
  for (const auto& r : roots_) out.push_back({wrap_angle(std::arg(r.z)), r.mult});
  return out;
}

std::vector<Signal> basis_from_spec(const SubspaceSpec& spec, const Domain& domain) {
  if (domain.length < spec.dimension())
    throw ConfigError("basis_from_spec: window of length " + std::to_string(domain.length) +
                      " cannot carry " + std::to_string(spec.dimension()) + " basis elements");
  std::vector<Signal> out;
  for (const auto& r : spec.roots())
    for (int j = 0; j < r.mult; ++j) {
      cvec v(static_cast<std::size_t>(domain.length));
      for (long i = 0; i < domain.length; ++i) {
        const long t = domain.start + i;
        v[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(t), j) * root_power(r, t);
      }
      out.emplace_back(domain.start, std::move(v));
    }
  return out;
}

double check_difference_equation(const SubspaceSpec& spec, const Signal& x, const Domain& domain) {
  const long s = spec.dimension();
  const Domain needed{domain.start - s, domain.length + s};
  if (!x.covers(needed))
    throw DataError("check_difference_equation: x must cover [" + std::to_string(needed.start) +
                    ", " + std::to_string(needed.stop()) + "]");
  const cvec& p = spec.poly();
  double worst = 0.0;
  for (long t = domain.start; t <= domain.stop(); ++t) {
    cx acc{};
    for (long tau = 0; tau <= s; ++tau) acc += p[static_cast<std::size_t>(tau)] * x[t - tau];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

Filter interpolating_filter(const SubspaceSpec& spec, long m) {
  const int s = spec.dimension();
  if (s > m + 1)
    throw ConfigError("interpolating_filter: need dimension <= m+1, got s=" + std::to_string(s) +
                      ", m=" + std::to_string(m));
  CMat Q = orthonormal_span(basis_matrix(spec, 0, m + 1));
  CMat proj = Q * Q.adjoint();

  long best_j = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long j = 0; j <= m; ++j) {
    const double rn = proj.row(j).norm();
    if (rn < best) {
      best = rn;
      best_j = j;
    }
  }
  // Row j of the projector gives x_t = sum_k proj(j,k) x_{t-(j-k)}; embedding
  // with entry (j,j) at the origin keeps the support inside D_m.
  Filter f;
  f.cls = FilterClass::bilateral;
  f.m = m;
  f.coeffs.assign(static_cast<std::size_t>(2 * m + 1), cx{});
  for (long k = 0; k <= m; ++k) {
    const long tau = best_j - k;
    f.coeffs[static_cast<std::size_t>(tau + m)] = proj(best_j, k);
  }
  return f;
}

Filter interpolating_filter_centered(const SubspaceSpec& spec, long m) {
  const int s = spec.dimension();
  if (s > 2 * m + 1)
    throw ConfigError("interpolating_filter_centered: need dimension <= 2m+1, got s=" +
                      std::to_string(s) + ", m=" + std::to_string(m));
  CMat Q = orthonormal_span(basis_matrix(spec, -m, 2 * m + 1));
  CMat proj = Q * Q.adjoint();
  Filter f;
  f.cls = FilterClass::bilateral;
  f.m = m;
  f.coeffs.assign(static_cast<std::size_t>(2 * m + 1), cx{});
  // Center row m of the window projector: support stays inside D_m.
  for (long k = 0; k <= 2 * m; ++k) {
    const long tau = m - k;
    f.coeffs[static_cast<std::size_t>(tau + m)] = proj(m, k);
  }
  return f;
}

double min_frequency_separation(const std::vector<double>& omegas) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < omegas.size(); ++i)
    for (std::size_t j = i + 1; j < omegas.size(); ++j) {
      const double d = std::abs(wrap_angle(omegas[i]) - wrap_angle(omegas[j]));
      best = std::min(best, std::min(d, kTwoPi - d));
    }
  return best;
}

Filter predictive_filter_separated(const std::vector<double>& omegas, long m) {
  if (omegas.empty()) throw ConfigError("predictive_filter_separated: no frequencies");
  const int s = static_cast<int>(omegas.size());
  if (s > m + 1) throw ConfigError("predictive_filter_separated: need s <= m+1");
  for (std::size_t i = 0; i < omegas.size(); ++i)
    for (std::size_t j = i + 1; j < omegas.size(); ++j)
      if (std::abs(wrap_angle(omegas[i]) - wrap_angle(omegas[j])) < 1e-12)
        throw ConfigError("predictive_filter_separated: repeated frequency");

  CMat V(m + 1, s);
  for (int k = 0; k < s; ++k)
    for (long t = 0; t <= m; ++t) V(t, k) = std::polar(1.0, omegas[static_cast<std::size_t>(k)] * t);
  CMat Q = orthonormal_span(V);
  CVec last = (Q * Q.adjoint()).row(m).transpose();

  Filter f;
  f.cls = FilterClass::shifted;
  f.m = m;
  f.h = 0;
  f.coeffs.assign(static_cast<std::size_t>(m + 1), cx{});
  // Row m of the projector: x_t = sum_tau proj(m, m-tau) x_{t-tau}.
  for (long tau = 0; tau <= m; ++tau) f.coeffs[static_cast<std::size_t>(tau)] = last(m - tau);
  return f;
}

long unit_roots_min_bandwidth(int s) {
  return static_cast<long>(std::ceil(8.0 * s * s * std::log(s + 1.0))) + s;
}

namespace {

double damping_epsilon(long ell, int s) {
  const double alpha = 4.0 * s * (s + 2.0) * std::log(8.0 * static_cast<double>(ell) * s);
  return alpha / (2.0 * static_cast<double>(ell) * s);
}

}  // namespace

Filter predictive_filter_unit_roots(const SubspaceSpec& spec, long m) {
  if (!spec.unit_modulus())
    throw ConfigError("predictive_filter_unit_roots: all roots must have unit modulus");
  const int s = spec.dimension();
  const long min_m = unit_roots_min_bandwidth(s);
  if (m < min_m)
    throw ConfigError("predictive_filter_unit_roots: m=" + std::to_string(m) +
                      " is below the validity threshold m >= " + std::to_string(min_m));
  const long ell = m - s;
  double eps = damping_epsilon(ell, s);
  if (eps >= 1.0) {
    long ok = min_m;
    while (damping_epsilon(ok - s, s) >= 1.0) ++ok;
    throw ConfigError("predictive_filter_unit_roots: damping degenerates at m=" + std::to_string(m) +
                      "; need m >= " + std::to_string(ok));
  }
  const double delta = 1.0 - eps;

  // Taylor coefficients of 1/p(delta*z) by power-series division.
  const cvec& p = spec.poly();
  cvec a(p.size());
  double dpow = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i, dpow *= delta) a[i] = p[i] * dpow;
  cvec r(static_cast<std::size_t>(ell + 1), cx{});
  r[0] = cx{1.0, 0.0};
  for (long j = 1; j <= ell; ++j) {
    cx acc{};
    const long kmax = std::min<long>(j, s);
    for (long i = 1; i <= kmax; ++i)
      acc += a[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(j - i)];
    r[static_cast<std::size_t>(j)] = -acc;
  }

  // q(z) = p(z) * r(z) has degree m, q_0 = 1, and is divisible by p; the
  // filter taps are -q_j for j >= 1, annihilating every subspace element.
  cvec q(static_cast<std::size_t>(m + 1), cx{});
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) q[i + j] += p[i] * r[j];

  Filter f;
  f.cls = FilterClass::shifted;
  f.m = m;
  f.h = 0;
  f.coeffs.assign(static_cast<std::size_t>(m + 1), cx{});
  for (long j = 1; j <= m; ++j) f.coeffs[static_cast<std::size_t>(j)] = -q[static_cast<std::size_t>(j)];
  return f;
}

Filter square_oracle(const Filter& phi) {
  if (phi.cls != FilterClass::bilateral)
    throw ConfigError("square_oracle: bilateral filter expected");
  Signal conv = convolve(phi.to_signal(), phi.to_signal());
  Filter out;
  out.cls = FilterClass::bilateral;
  out.m = 2 * phi.m;
  out.coeffs = conv.slice(Domain::symmetric(out.m));
  return out;
}

SimplicityCertificate simplicity_certificate(const Filter& phi, const Signal& x, double sigma,
                                             long n) {
  if (sigma <= 0.0) throw ConfigError("simplicity_certificate: sigma must be > 0");
  const long m = phi.m;
  const bool bilateral = phi.cls == FilterClass::bilateral;
  const double width = bilateral ? std::sqrt(2.0 * m + 1.0) : std::sqrt(m + 1.0);

  Domain bias_window = bilateral
                           ? Domain::symmetric(m + n)
                           : Domain::shifted(-m - n - phi.h, m + n + 3 * phi.h + 1);
  const Domain needed{bias_window.start - phi.support_stop(),
                      bias_window.length + phi.support_stop() - phi.support_start()};
  if (!x.covers(needed))
    throw DataError("simplicity_certificate: x must cover [" + std::to_string(needed.start) + ", " +
                    std::to_string(needed.stop()) + "]");

  Signal reproduced = convolve(phi.to_signal(), x);
  double worst = 0.0;
  for (long t = bias_window.start; t <= bias_window.stop(); ++t)
    worst = std::max(worst, std::abs(x[t] - reproduced[t]));

  SimplicityCertificate cert;
  cert.m = m;
  cert.n = n;
  cert.h = bilateral ? 0 : phi.h;
  cert.rho = phi.l2() * width;
  cert.theta = (cert.rho > 0.0) ? worst * width / (sigma * cert.rho)
                                : (worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return cert;
}

double shift_invariance_residual(const Signal& x, const SubspaceSpec& spec, long m, long n,
                                 double sigma, Side side, long h) {
  if (sigma <= 0.0) throw ConfigError("shift_invariance_residual: sigma must be > 0");
  const Domain window = (side == Side::bilateral) ? Domain::symmetric(n) : Domain::shifted(-n, n + 1);
  const long tau_lo = (side == Side::bilateral) ? -m : 0;
  const long tau_hi = (side == Side::bilateral) ? m : h + m;
  const Domain needed{window.start - tau_hi, window.length + (tau_hi - tau_lo)};
  if (!x.covers(needed))
    throw DataError("shift_invariance_residual: x must cover [" + std::to_string(needed.start) +
                    ", " + std::to_string(needed.stop()) + "]");

  CMat Q = orthonormal_span(basis_matrix(spec, window.start, window.length));
  double worst = 0.0;
  for (long tau = tau_lo; tau <= tau_hi; ++tau) {
    CVec w(window.length);
    for (long i = 0; i < window.length; ++i) w(i) = x[window.start + i - tau];
    CVec resid = w - Q * (Q.adjoint() * w);
    worst = std::max(worst, resid.norm());
  }
  return worst / sigma;
}

double theta_inflation(double theta, double varkappa, long m, long n, Side side) {
  if (theta < 0.0 || varkappa < 0.0) throw ConfigError("theta_inflation: inputs must be >= 0");
  const double k = kappa(m, n, side);
  const double factor = (side == Side::bilateral) ? 2.0 : 2.0 * std::sqrt(2.0);
  return theta + factor * varkappa / k;
}

}  // namespace shiftdenoise
