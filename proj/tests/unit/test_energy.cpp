#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "fraclap/energy.hpp"
#include "fraclap/errors.hpp"

using namespace fraclap;

namespace {

struct Case {
  std::string name;
  SymbolTriple sym;
  CanonicalParams p;  // exponents seen by the high-frequency functionals
};

std::vector<Case> preset_cases(double theta) {
  return {
      {"wave", SymbolTriple(GeneralSymbol::power(0.0), GeneralSymbol::power(theta),
                            GeneralSymbol::power(1.0)),
       {0.0, 1.0, theta, 3}},
      {"plate", SymbolTriple::canonical({1.0, 2.0, theta, 3}), {1.0, 2.0, theta, 3}},
      {"plate_no_ri", SymbolTriple(GeneralSymbol::power(0.0), GeneralSymbol::power(theta),
                                   GeneralSymbol::power(2.0)),
       {0.0, 2.0, theta, 3}},
      {"ibq", SymbolTriple(GeneralSymbol({{1.0, 0.0}, {1.0, 1.0}}), GeneralSymbol::power(theta),
                           GeneralSymbol({{1.0, 1.0}, {1.0, 2.0}})),
       {1.0, 2.0, theta, 3}},
  };
}

complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

}  // namespace

TEST_CASE("rho: worked value and both upper bounds") {
  CHECK(rho({1.0, 2.0, 0.0, 1}, 0.5, 1.0) == doctest::Approx(1.0 / 256).epsilon(1e-15));
  CHECK_THROWS_AS(rho({1.0, 2.0, 0.0, 1}, 0.5, 0.4), PreconditionViolation);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int set = 0; set < 200; ++set) {
    const double alpha = 3.0 * u(rng);
    const CanonicalParams p(2.5 * u(rng), alpha, alpha * u(rng), 1);
    const double eps = epsilon_threshold(p);
    if (eps < 1e-12) continue;  // α barely above 2θ
    for (int k = 0; k < 200; ++k) {
      const double r = eps * std::pow(10.0, 5.0 * u(rng));
      const double q = rho(p, eps, r);
      if (!(q >= 0.0)) ++violations;
      if (q > std::pow(r, 2 * p.theta) / (2 * (1 + std::pow(r, 2 * p.delta))) * (1 + 1e-13)) ++violations;
      if (q > std::pow(r, 2 * p.alpha - 2 * p.theta) / 2 * (1 + 1e-13)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("energy_point: zero state and pointwise inequalities on every preset") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double theta : {0.0, 0.25, 0.5, 1.0}) {
    for (const auto& c : preset_cases(theta)) {
      CAPTURE(c.name);
      CAPTURE(theta);
      const double eps = split_epsilon(c.sym, 3);
      const auto zero = energy_point(c.p, -2.0, c.sym, 0.0, 0.0, 3.0, eps * 2);
      CHECK(zero.e1 == 0.0);
      CHECK(zero.e == 0.0);
      CHECK(zero.f == 0.0);
      CHECK(zero.rr == 0.0);
      int violations = 0;
      for (int k = 0; k < 2000; ++k) {
        const double r = eps * std::pow(10.0, 2.0 * u(rng));
        const double t = 20.0 * u(rng);
        const double sigma = -4.0 + 6.0 * u(rng);
        const auto e = energy_point(c.p, sigma, c.sym, random_complex(rng), random_complex(rng), t, r);
        if (e.f < 0.0 || e.rr < 0.0 || e.e1 < 0.0) ++violations;
        if (e.e1 < 1e-300) continue;  // state decayed into subnormals
        if (e.rr > 0.5 * e.f * (1 + 1e-12)) ++violations;
        if (e.e < 0.5 * e.e1 * (1 - 1e-12)) ++violations;
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("check_equivalence") {
  const auto cases = preset_cases(0.0);
  const auto& plate = cases[1];
  const double eps = split_epsilon(plate.sym, 3);
  // no displacement: no cross term, E/E1 = a(r)/r^{2δ}
  for (double r : {eps, 1.0, 7.0}) {
    const auto e = energy_of_state(plate.p, 0.0, plate.sym, eps, r, {0.0, complex(0.3, -1.0)});
    CHECK(e.e / e.e1 == doctest::Approx(plate.sym.inertia(r) / (r * r)).epsilon(1e-14));
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const double e0 = split_epsilon(c.sym, 3);
    std::vector<EnergySample> samples;
    for (int k = 0; k < 3000; ++k) {
      samples.push_back({30.0 * u(rng), e0 * std::pow(10.0, 2.0 * u(rng)), random_complex(rng),
                         random_complex(rng)});
    }
    const auto b = check_equivalence(c.p, -2.0, c.sym, samples);
    CHECK(b.m >= 0.5 - 1e-12);
    CHECK(b.M <= b.M_bound);
    CHECK(std::isfinite(b.M));
  }
}

TEST_CASE("differential inequality and energy identity along exact solutions") {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.05 * i);
  const auto wave = preset_cases(0.0)[0];
  CHECK(check_diff_inequality(wave.p, -2.0, wave.sym, 0.0, 0.0, 1.0, grid) == 0.0);
  CHECK(check_diff_inequality(wave.p, -2.0, wave.sym, 1.0, 0.0, 1.0, grid) <= 1e-6);
  CHECK(check_energy_identity(wave.p, -2.0, wave.sym, 1.0, 0.0, 1.0, grid) <= 1e-6);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double theta : {0.0, 0.5, 1.0}) {
    for (const auto& c : preset_cases(theta)) {
      CAPTURE(c.name);
      CAPTURE(theta);
      const double eps = split_epsilon(c.sym, 3);
      for (int k = 0; k < 20; ++k) {
        const double r = eps * std::pow(10.0, 2.0 * u(rng));
        const complex v0 = random_complex(rng), v1 = random_complex(rng);
        CHECK(check_diff_inequality(c.p, 0.0, c.sym, v0, v1, r, grid) <= 1e-6);
        CHECK(check_energy_identity(c.p, 0.0, c.sym, v0, v1, r, grid) <= 1e-6);
      }
    }
  }
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(check_diff_inequality(wave.p, 0.0, wave.sym, 1.0, 0.0, 1.0, bad),
                  InvalidParameters);
}

TEST_CASE("dissipation identity") {
  const auto plate = preset_cases(0.5)[1];
  CHECK(dissipation_identity_check(plate.sym, 1.0, 2.0, 2.0, 0.0) == 0.0);
  const double res = dissipation_identity_check(plate.sym, 1.0, 0.0, 2.0, 5.0);
  CHECK(res <= 1e-7);

  // RK4 on (v, v_t, ∫ b|v_s|²) as an independent oracle for the time integral
  {
    const double r = 2.0, a = plate.sym.inertia(r), b = plate.sym.damping(r),
                 c = plate.sym.stiffness(r);
    double v = 1.0, w = 0.0, q = 0.0;
    const double dt = 1e-4;
    auto rhs = [&](double x, double y, double& dx, double& dy, double& dq) {
      dx = y;
      dy = -(b * y + c * x) / a;
      dq = b * y * y;
    };
    for (int i = 0; i < 50000; ++i) {
      double k1x, k1y, k1q, k2x, k2y, k2q, k3x, k3y, k3q, k4x, k4y, k4q;
      rhs(v, w, k1x, k1y, k1q);
      rhs(v + 0.5 * dt * k1x, w + 0.5 * dt * k1y, k2x, k2y, k2q);
      rhs(v + 0.5 * dt * k2x, w + 0.5 * dt * k2y, k3x, k3y, k3q);
      rhs(v + dt * k3x, w + dt * k3y, k4x, k4y, k4q);
      v += dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
      w += dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      q += dt / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    }
    const double lhs = a * w * w + c * v * v + 2 * q;
    CHECK(lhs == doctest::Approx(c).epsilon(1e-9));
  }

  // many oscillations: fast ω ~ r² without rotational inertia
  const auto no_ri = preset_cases(0.0)[2];
  for (double t : {30.0, 50.0}) {
    CHECK(dissipation_identity_check(no_ri.sym, complex(1.0, -0.5), complex(0.2, 2.0), 20.0, t) <=
          1e-7);
  }

  const SymbolTriple undamped(GeneralSymbol::power(0.0), std::nullopt, GeneralSymbol::power(1.0));
  for (double t : {0.5, 10.0, 300.0}) {
    CHECK(dissipation_identity_check(undamped, complex(1.0, 0.5), complex(-0.3, 2.0), 1.7, t) <=
          1e-12);
  }
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double theta : {0.0, 0.75}) {
    for (const auto& c : preset_cases(theta)) {
      for (int k = 0; k < 200; ++k) {
        const double r = std::pow(10.0, -2.0 + 3.0 * u(rng));
        const double t = 50.0 * u(rng);
        CHECK(dissipation_identity_check(c.sym, random_complex(rng), random_complex(rng), r, t) <=
              1e-7);
      }
    }
  }
}

TEST_CASE("E1 bounded by F without regularity loss") {
  const CanonicalParams boundary(1.0, 1.0, 1.0, 2);
  const auto sym = SymbolTriple::canonical(boundary);
  const double eps = split_epsilon(sym, 2);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EnergySample> samples;
  for (int k = 0; k < 4000; ++k) {
    samples.push_back({20.0 * u(rng), eps * std::pow(10.0, 2.5 * u(rng)), random_complex(rng),
                       random_complex(rng)});
  }
  CHECK(check_e1f(boundary, 0.0, sym, samples));
  const auto wave = preset_cases(0.5)[0];
  CHECK(check_e1f(wave.p, -2.0, wave.sym, samples));
  CHECK_THROWS_AS(e1f_constant({1.0, 2.0, 0.5, 2}, 0.5), HypothesisViolated);
  const auto plate = preset_cases(0.0)[1];
  CHECK_THROWS_AS(check_e1f(plate.p, 0.0, plate.sym, samples), HypothesisViolated);
}

TEST_CASE("high-frequency energy integral") {
  const auto plate = preset_cases(0.0)[1];
  const auto g = RadialProfile::gaussian(1.5);
  const auto z = RadialProfile::zero();
  const double sigma = -4.0;
  const double eps = split_epsilon(plate.sym, 3);
  // t = 0: ½ ∫_{r≥ε} r^{2α+σ} |v̂0|² ω_n r^{n−1} dr
  using boost::math::quadrature::gauss;
  double ref = 0.0;
  for (int p = 0; p < 400; ++p) {
    const double lo = eps + p * 0.05, hi = lo + 0.05;
    ref += gauss<double, 20>::integrate(
        [&](double r) { return 0.5 * 4 * std::numbers::pi * r * r * std::pow(g(r), 2); }, lo, hi);
  }
  CHECK(hf_energy_integral(plate.p, sigma, plate.sym, 3, g, z, 0.0) ==
        doctest::Approx(ref).epsilon(1e-9));

  SUBCASE("exponential decay without regularity loss") {
    const auto wave = preset_cases(0.5)[0];
    const double i0 = hf_energy_integral(wave.p, -2.0, wave.sym, 3, g, g, 0.0);
    const double i10 = hf_energy_integral(wave.p, -2.0, wave.sym, 3, g, g, 10.0);
    const double i20 = hf_energy_integral(wave.p, -2.0, wave.sym, 3, g, g, 20.0);
    const double c = std::log(i0 / i10) / 10.0;
    CHECK(c > 0.0);
    // the decay rate does not slow down as it would for a power law
    CHECK(std::log(i10 / i20) / 10.0 >= 0.5 * c);
  }

  SUBCASE("regularity-loss inequality and the resulting algebraic bound") {
    const auto tail = RadialProfile::power_tail(3.0, 1.0, 3);
    for (double beta : {0.5, 1.0, 2.0}) {
      const double cb = regularity_loss_constant(plate.p, eps);
      const double d = regularity_loss_data_norm(plate.p, sigma, beta, plate.sym, 3, tail, g);
      for (double t : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        const double i = hf_energy_integral(plate.p, sigma, plate.sym, 3, tail, g, t);
        const double j = hf_dissipation_integral(plate.p, sigma, plate.sym, 3, tail, g, t);
        CHECK(std::pow(i, 1 + beta) <= cb * std::pow(d, beta) * j);
      }
    }
    // data in H^s for s < 1.5, so β = 1 is admissible: I(t) ≲ (1+t)^{−1}
    const auto rough = RadialProfile::power_tail(1.5, 1.0, 3);
    const double c1 = hf_energy_integral(plate.p, sigma, plate.sym, 3, rough, z, 1.0) * 2.0;
    for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
      const double i = hf_energy_integral(plate.p, sigma, plate.sym, 3, rough, z, t);
      CHECK(i <= 3.0 * c1 / (1.0 + t));
    }
  }
}
