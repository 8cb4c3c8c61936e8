#include "fraclap/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

double rpow(double r, double e) { return e == 0.0 ? 1.0 : std::pow(r, e); }

}  // namespace

double rho(const CanonicalParams& p, double eps, double r) {
  if (!(eps > 0.0)) throw InvalidParameters("eps must be positive");
  if (r < eps) throw PreconditionViolation("rho is defined for r >= eps");
  const double d = p.delta, a = p.alpha, th = p.theta;
  if (a + d >= 2.0 * th) {
    return std::pow(eps, 2 * a + 2 * d - 4 * th) * rpow(r, 2 * th) / (2.0 * (1.0 + rpow(r, 2 * d)));
  }
  return std::pow(eps, 4 * th - 2 * a) * rpow(r, 2 * a - 2 * th) / 4.0;
}

EnergyPoint energy_of_state(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                            double eps, double r, const ModeValue& s) {
  const double a = sym.inertia(r), b = sym.damping(r), c = sym.stiffness(r);
  const double rs = rpow(r, sigma);
  const double vt2 = std::norm(s.vt), v2 = std::norm(s.v);
  const double cross = (s.vt * std::conj(s.v)).real();
  EnergyPoint e{};
  e.rho = rho(p, eps, r);
  e.e1 = 0.5 * rpow(r, 2 * p.delta + sigma) * vt2 + 0.5 * rpow(r, 2 * p.alpha + sigma) * v2;
  e.e = rs * (0.5 * a * vt2 + 0.5 * c * v2 + e.rho * a * cross + 0.5 * e.rho * b * v2);
  e.f = rs * (b * vt2 + e.rho * c * v2);
  e.rr = rs * e.rho * a * vt2;
  return e;
}

EnergyPoint energy_point(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                         complex v0hat, complex v1hat, double t, double r) {
  const double eps = split_epsilon(sym, p.n);
  if (r < eps) throw PreconditionViolation("energy functionals need r >= eps");
  return energy_of_state(p, sigma, sym, eps, r, solution_hat(sym, t, r, v0hat, v1hat));
}

double equivalence_upper_constant(const CanonicalParams& p, const SymbolTriple& sym, double eps) {
  // a/r^{2δ} and c/r^{2α} are non-increasing on r ≥ ε when δ, α are the
  // top exponents, so the sup sits at ε
  const double ra = sym.inertia(eps) / rpow(eps, 2 * p.delta);
  const double rc = sym.stiffness(eps) / rpow(eps, 2 * p.alpha);
  return std::max(2.0 * ra, 2.0 * rc);
}

EquivalenceBounds check_equivalence(const CanonicalParams& p, double sigma,
                                    const SymbolTriple& sym,
                                    std::span<const EnergySample> samples) {
  const double eps = split_epsilon(sym, p.n);
  EquivalenceBounds out{std::numeric_limits<double>::infinity(), 0.0,
                        equivalence_upper_constant(p, sym, eps)};
  for (const auto& s : samples) {
    const auto e = energy_point(p, sigma, sym, s.v0hat, s.v1hat, s.t, s.r);
    if (e.e1 < 1e-300) continue;
    if (e.e < 0.5 * e.e1 - 1e-12 * e.e1) {
      throw EquivalenceViolated("E < E1/2 at t=" + std::to_string(s.t) +
                                " r=" + std::to_string(s.r));
    }
    out.m = std::min(out.m, e.e / e.e1);
    out.M = std::max(out.M, e.e / e.e1);
  }
  return out;
}

double energy_time_derivative(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                              complex v0hat, complex v1hat, double r, double t) {
  const double eps = split_epsilon(sym, p.n);
  const Eigenpair eig = eigenvalues(sym, r);
  const double rate = std::max({1.0, std::abs(eig.lambda_plus), std::abs(eig.lambda_minus)});
  // fixed relative step, capped so that h·|λ| stays small
  const double h = std::min(std::max(1e-6, 1e-4 * t), 1e-2 / rate);
  auto energy = [&](double s) {
    const KernelQuad k = kernels_from(eig, s);
    const ModeValue st{k.k0 * v0hat + k.k1 * v1hat, k.dk0 * v0hat + k.dk1 * v1hat};
    return energy_of_state(p, sigma, sym, eps, r, st).e;
  };
  auto central = [&](double step) { return (energy(t + step) - energy(t - step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

namespace {

template <class Metric>
double max_over_grid(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                     complex v0hat, complex v1hat, double r, std::span<const double> t_grid,
                     Metric metric) {
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidParameters("time grid must be increasing");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const auto e = energy_point(p, sigma, sym, v0hat, v1hat, t, r);
    const double de = energy_time_derivative(p, sigma, sym, v0hat, v1hat, r, t);
    worst = std::max(worst, metric(e, de));
  }
  return t_grid.empty() ? 0.0 : worst;
}

}  // namespace

double check_diff_inequality(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                             complex v0hat, complex v1hat, double r,
                             std::span<const double> t_grid) {
  return max_over_grid(p, sigma, sym, v0hat, v1hat, r, t_grid,
                       [](const EnergyPoint& e, double de) {
                         const double scale = std::abs(e.e) + e.f;
                         if (scale < 1e-300) return 0.0;
                         return (de + 0.5 * e.f) / scale;
                       });
}

double check_energy_identity(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                             complex v0hat, complex v1hat, double r,
                             std::span<const double> t_grid) {
  return max_over_grid(p, sigma, sym, v0hat, v1hat, r, t_grid,
                       [](const EnergyPoint& e, double de) {
                         const double scale = std::abs(e.e) + e.f + e.rr;
                         if (scale < 1e-300) return 0.0;
                         return std::abs(de + e.f - e.rr) / scale;
                       });
}

double dissipation_identity_check(const SymbolTriple& sym, complex v0hat, complex v1hat,
                                  double r, double t) {
  if (!(t >= 0.0)) throw InvalidParameters("time must be >= 0");
  const double a = sym.inertia(r), b = sym.damping(r), c = sym.stiffness(r);
  const double rhs = a * std::norm(v1hat) + c * std::norm(v0hat);
  const Eigenpair eig = eigenvalues(sym, r);
  const KernelQuad kt = kernels_from(eig, t);
  const complex v = kt.k0 * v0hat + kt.k1 * v1hat;
  const complex vt = kt.dk0 * v0hat + kt.dk1 * v1hat;
  double dissipated = 0.0;
  const double omega = std::abs(eig.lambda_plus.imag());
  const bool oscillatory = omega * t >= 64.0 &&
                           2.0 * omega >= 1e-3 * std::abs(eig.lambda_plus);
  if (t > 0.0 && b > 0.0 && oscillatory) {
    // many periods: v̂_t = A e^{λ+ s} + B e^{λ− s}, and each product of
    // exponentials integrates exactly, ∫₀ᵗ e^{zs} ds = t φ1(zt)
    const complex lp = eig.lambda_plus, lm = eig.lambda_minus;
    const complex gap = lp - lm;
    const complex A = lp * (v1hat - lm * v0hat) / gap;
    const complex B = v1hat - A;
    auto integral = [&](complex z) { return t * phi1(z * t); };
    const double total = std::norm(A) * integral(2.0 * lp.real()).real() +
                         std::norm(B) * integral(2.0 * lm.real()).real() +
                         2.0 * (A * std::conj(B) * integral(lp + std::conj(lm))).real();
    dissipated = 2.0 * b * total;
  } else if (t > 0.0 && b > 0.0) {
    auto f = [&](double s) {
      const KernelQuad k = kernels_from(eig, s);
      return std::norm(k.dk0 * v0hat + k.dk1 * v1hat);
    };
    std::vector<double> bp{0.0, t};
    for (const complex lam : {eig.lambda_plus, eig.lambda_minus}) {
      const double scale = std::abs(lam);
      if (scale == 0.0) continue;
      for (int k = -4; k <= 40; ++k) {
        const double x = std::ldexp(1.0, k) / scale;
        if (x < t) bp.push_back(x);
      }
    }
    dissipated = 2.0 * b *
                 adaptive_integrate([&](double lo, double hi) { return gauss_kronrod15(f, lo, hi); },
                                    bp, {1e-13, 1e-300, 100000})
                     .value;
  }
  const double lhs = a * std::norm(vt) + c * std::norm(v) + dissipated;
  if (rhs == 0.0) return std::abs(lhs);
  return std::abs(lhs - rhs) / rhs;
}

double e1f_constant(const CanonicalParams& p, double eps) {
  if (p.delta > p.theta) {
    throw HypothesisViolated("E1 <= C F needs delta <= theta (regularity-loss case)");
  }
  return 0.5 * std::max(std::pow(eps, 2 * (p.delta - p.theta)), 1.0 / rho(p, eps, eps));
}

bool check_e1f(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
               std::span<const EnergySample> samples) {
  const double eps = split_epsilon(sym, p.n);
  const double c = e1f_constant(p, eps);
  for (const auto& s : samples) {
    const auto e = energy_point(p, sigma, sym, s.v0hat, s.v1hat, s.t, s.r);
    if (e.e1 > c * e.f * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

namespace {

double high_integral(const SymbolTriple& sym, int n, const RadialProfile& v0,
                     const RadialProfile& v1, double t, ModeWeights w, const SpectralOptions& opts) {
  return mode_integral(sym, n, t, v0, v1, w, Region::high, opts).value;
}

}  // namespace

double hf_energy_integral(const CanonicalParams& p, double sigma, const SymbolTriple& sym, int n,
                          const RadialProfile& v0, const RadialProfile& v1, double t,
                          const SpectralOptions& opts) {
  const double area = sphere_area(n);
  const double pv = 2 * p.alpha + sigma + n - 1;
  const double pvt = 2 * p.delta + sigma + n - 1;
  ModeWeights w;
  w.v = [=](double r) { return 0.5 * area * rpow(r, pv); };
  w.vt = [=](double r) { return 0.5 * area * rpow(r, pvt); };
  return high_integral(sym, n, v0, v1, t, std::move(w), opts);
}

double hf_dissipation_integral(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                               int n, const RadialProfile& v0, const RadialProfile& v1, double t,
                               const SpectralOptions& opts) {
  const double area = sphere_area(n);
  const double eps = split_epsilon(sym, n);
  const double pw = sigma + n - 1;
  ModeWeights w;
  w.v = [=, &sym](double r) { return area * rpow(r, pw) * rho(p, eps, std::max(r, eps)) * sym.stiffness(r); };
  w.vt = [=, &sym](double r) { return area * rpow(r, pw) * sym.damping(r); };
  return high_integral(sym, n, v0, v1, t, std::move(w), opts);
}

double regularity_loss_constant(const CanonicalParams& p, double eps) {
  return (1.0 + std::pow(eps, -2 * p.delta)) *
         std::pow(eps, -(2 * p.alpha + 2 * p.delta - 4 * p.theta));
}

double regularity_loss_data_norm(const CanonicalParams& p, double sigma, double beta,
                                 const SymbolTriple& sym, int n, const RadialProfile& v0,
                                 const RadialProfile& v1, const SpectralOptions& opts) {
  if (!(beta > 0.0)) throw InvalidParameters("beta must be positive");
  const double area = sphere_area(n);
  const double pw = sigma + 2 * (p.delta - p.theta) / beta + n - 1;
  // at t = 0 the state is (v̂0, v̂1)
  ModeWeights w;
  w.v = [=, &sym](double r) { return area * rpow(r, pw) * sym.stiffness(r); };
  w.vt = [=, &sym](double r) { return area * rpow(r, pw) * sym.inertia(r); };
  return high_integral(sym, n, v0, v1, 0.0, std::move(w), opts);
}

}  // namespace fraclap
