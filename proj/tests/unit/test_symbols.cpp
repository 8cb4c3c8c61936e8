#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/symbols.hpp"

using namespace fraclap;

namespace {

SymbolTriple wave_unit_inertia(double theta) {
  return SymbolTriple(GeneralSymbol::power(0.0), GeneralSymbol::power(theta),
                      GeneralSymbol::power(1.0));
}

SymbolTriple plate(double theta) {
  return SymbolTriple(GeneralSymbol({{1.0, 0.0}, {1.0, 1.0}}), GeneralSymbol::power(theta),
                      GeneralSymbol::power(2.0));
}

double rel(complex x, complex y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

}  // namespace

TEST_CASE("canonical params validate the admissible set") {
  CHECK_NOTHROW(CanonicalParams(1.0, 2.0, 2.0, 3));
  CHECK_NOTHROW(CanonicalParams(0.0, 0.0, 0.0, 1));
  CHECK_THROWS_AS(CanonicalParams(-0.1, 1.0, 0.0, 1), InvalidParameters);
  CHECK_THROWS_AS(CanonicalParams(0.0, 1.0, 1.5, 1), InvalidParameters);
  CHECK_THROWS_AS(CanonicalParams(0.0, 1.0, -0.5, 1), InvalidParameters);
  CHECK_THROWS_AS(CanonicalParams(0.0, 1.0, 0.5, 0), InvalidParameters);
}

TEST_CASE("general symbols evaluate, differentiate and parse") {
  const auto s = GeneralSymbol::parse("1:1, 2:2");
  CHECK(s(2.0) == doctest::Approx(4.0 + 2.0 * 16.0));
  CHECK(s.low_exponent() == 1.0);
  CHECK(s.high_exponent() == 2.0);
  const double h = 1e-6;
  for (double r : {0.1, 0.7, 3.0}) {
    const double fd = (s(r + h) - s(r - h)) / (2 * h);
    CHECK(s.derivative(r) == doctest::Approx(fd).epsilon(1e-8));
  }
  CHECK(GeneralSymbol::power(0.0)(0.0) == 1.0);
  CHECK_THROWS_AS(GeneralSymbol::parse("1"), InvalidParameters);
  CHECK_THROWS_AS(GeneralSymbol::parse("-1:2"), InvalidParameters);
  CHECK_THROWS_AS(GeneralSymbol({}), InvalidParameters);
  CHECK_THROWS_AS(SymbolTriple(GeneralSymbol::power(1.0), std::nullopt, GeneralSymbol::power(1.0)),
                  InvalidParameters);
}

TEST_CASE("eigenvalues: worked examples") {
  SUBCASE("wave with unit inertia, r = 0.3") {
    // λ² + λ + 0.09 = 0  ->  (−1 ± 0.8)/2
    const auto e = eigenvalues(wave_unit_inertia(0.0), 0.3);
    CHECK(rel(e.lambda_plus, -0.1) < 1e-14);
    CHECK(rel(e.lambda_minus, -0.9) < 1e-14);
    CHECK_FALSE(e.degenerate);
  }
  SUBCASE("origin is a double root when theta, alpha > 0") {
    const auto e = eigenvalues(SymbolTriple::canonical({1.0, 2.0, 0.5, 3}), 0.0);
    CHECK(e.lambda_plus == complex(0.0));
    CHECK(e.lambda_minus == complex(0.0));
    CHECK(e.degenerate);
  }
  SUBCASE("plate, r = 1") {
    // 2λ² + λ + 1 = 0  ->  (−1 ± i√7)/4
    const auto e = eigenvalues(plate(0.0), 1.0);
    CHECK(rel(e.lambda_plus, complex(-0.25, std::sqrt(7.0) / 4)) < 1e-14);
    CHECK(rel(e.lambda_minus, complex(-0.25, -std::sqrt(7.0) / 4)) < 1e-14);
  }
}

TEST_CASE("eigenvalues: Vieta identities and dissipativity on random symbols") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = 3.0 * u(rng);
    const double theta = alpha * u(rng);
    const double delta = 2.0 * u(rng);
    const auto sym = SymbolTriple::canonical({delta, alpha, theta, 2});
    for (int k = 0; k < 50; ++k) {
      const double r = std::pow(10.0, -4.0 + 6.0 * u(rng));
      const auto e = eigenvalues(sym, r);
      const double a = sym.inertia(r), b = sym.damping(r), c = sym.stiffness(r);
      CHECK(e.lambda_plus.real() <= 0.0);
      CHECK(e.lambda_minus.real() <= 0.0);
      CHECK(rel(e.lambda_plus + e.lambda_minus, -b / a) < 1e-12);
      CHECK(rel(e.lambda_plus * e.lambda_minus, c / a) < 1e-12);
    }
  }
}

TEST_CASE("lower-frequency eigenvalue brackets in the real branch") {
  // −4(2−√2) r^{2(α−θ)} ≤ λ+ ≤ −r^{2(α−θ)},  −r^{2θ} ≤ λ− ≤ −¼(1+1/√2) r^{2θ},
  // r^{2θ}/(2√2) ≤ λ+ − λ− ≤ r^{2θ}, for 0 < r < ε
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s2 = std::sqrt(2.0);
  int violations = 0;
  for (int set = 0; set < 20; ++set) {
    const double alpha = 0.2 + 2.8 * u(rng);
    const double theta = 0.5 * alpha * 0.999 * u(rng);
    const double delta = 2.0 * u(rng);
    const CanonicalParams p(delta, alpha, theta, 1);
    const auto sym = SymbolTriple::canonical(p);
    const double eps = epsilon_threshold(p);
    for (int k = 1; k <= 10000; ++k) {
      // log-spaced in (ε·1e−6, ε)
      const double r = eps * std::pow(10.0, -6.0 * (1.0 - k / 10001.0));
      const auto e = eigenvalues(sym, r);
      const double lp = e.lambda_plus.real(), lm = e.lambda_minus.real();
      const double slow = std::pow(r, 2 * (alpha - theta));
      const double fast = std::pow(r, 2 * theta);
      const double tol = 1e-12;
      if (e.lambda_plus.imag() != 0.0) ++violations;
      if (lp < -4 * (2 - s2) * slow * (1 + tol) || lp > -slow * (1 - tol)) ++violations;
      if (lm < -fast * (1 + tol) || lm > -0.25 * (1 + 1 / s2) * fast * (1 - tol)) ++violations;
      if (lp - lm < fast / (2 * s2) * (1 - tol) || lp - lm > fast * (1 + tol)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("complex branch: decay envelope and gap bracket") {
  // |e^{λ± t}| ≤ e^{−r^{2θ}t/4};  |λ+ − λ−| / r^α within a fixed bracket.
  // Bracket frozen from a dense sampling run over these parameter sets:
  // observed [1.3229, 2.0000).
  const double kGapLow = 1.32;
  const double kGapHigh = 2.0;
  const CanonicalParams sets[] = {{0.0, 1.0, 0.5, 3}, {0.0, 1.0, 0.75, 3}, {1.0, 2.0, 1.0, 2},
                                  {1.0, 2.0, 1.5, 2}, {0.5, 1.0, 1.0, 1}, {2.0, 1.5, 1.2, 1}};
  double lo = 1e300, hi = 0.0;
  int violations = 0;
  for (const auto& p : sets) {
    const auto sym = SymbolTriple::canonical(p);
    const double eps = epsilon_threshold(p);
    for (int k = 1; k <= 4000; ++k) {
      const double r = eps * std::pow(10.0, -5.0 * (1.0 - k / 4001.0));
      const auto e = eigenvalues(sym, r);
      const double ratio = std::abs(e.lambda_plus - e.lambda_minus) / std::pow(r, p.alpha);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      for (double t : {0.0, 0.5, 3.0, 40.0, 1e3}) {
        const double env = std::exp(-std::pow(r, 2 * p.theta) * t / 4);
        if (std::abs(std::exp(e.lambda_plus * t)) > env * (1 + 1e-12)) ++violations;
        if (std::abs(std::exp(e.lambda_minus * t)) > env * (1 + 1e-12)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
  CHECK(lo >= kGapLow);
  CHECK(hi <= kGapHigh);
}

TEST_CASE("kernels: initial values, confluent limit, closed form") {
  const auto sym = wave_unit_inertia(0.0);
  for (double r : {0.0, 0.3, 0.5, 4.0}) {
    const auto k = kernels_at(sym, 0.0, r);
    CHECK(k.k0 == complex(1.0));
    CHECK(k.k1 == complex(0.0));
    CHECK(k.dk0 == complex(0.0));
    CHECK(k.dk1 == complex(1.0));
  }

  const complex lam(-0.7, 0.0);
  const Eigenpair confluent{lam, lam, true};
  const auto kc = kernels_from(confluent, 2.5);
  CHECK(kc.k1 == 2.5 * std::exp(lam * 2.5));
  CHECK(rel(kc.k0, (1.0 - lam * 2.5) * std::exp(lam * 2.5)) < 1e-15);

  const auto k = kernels_at(sym, 1.0, 0.3);
  CHECK(rel(k.k1, (std::exp(-0.1) - std::exp(-0.9)) / 0.8) < 1e-14);

  const auto s = solution_hat(sym, 1.0, 0.3, 1.0, 0.0);
  CHECK(rel(s.v, (-0.9 * std::exp(-0.1) + 0.1 * std::exp(-0.9)) / -0.8) < 1e-14);
  const auto s1 = solution_hat(sym, 1.0, 0.3, 0.0, 1.0);
  CHECK(s1.v == k.k1);
  CHECK(s1.vt == k.dk1);
  const auto s0 = solution_hat(sym, 0.0, 0.3, complex(0.2, 0.1), complex(-1.0, 3.0));
  CHECK(s0.v == complex(0.2, 0.1));
  CHECK(s0.vt == complex(-1.0, 3.0));
}

TEST_CASE("kernels are continuous across the confluent switch") {
  for (double t : {0.3, 1.0, 5.0, 20.0}) {
    for (complex centre : {complex(-1.0, 0.0), complex(-0.2, 0.0), complex(-3.0, 0.0)}) {
      const double scale = std::abs(centre);
      for (bool complex_pair : {false, true}) {
        auto make = [&](double gap) {
          const complex half = complex_pair ? complex(0.0, 0.5 * gap * scale)
                                            : complex(0.5 * gap * scale, 0.0);
          const complex lp = centre + half, lm = centre - half;
          Eigenpair e{lp, lm, false};
          e.degenerate = std::abs(lp - lm) <= kDegenerateGap * std::max(std::abs(lp), std::abs(lm));
          return e;
        };
        const auto below = make(0.999 * kDegenerateGap);
        const auto above = make(1.001 * kDegenerateGap);
        REQUIRE(below.degenerate);
        REQUIRE_FALSE(above.degenerate);
        const auto kb = kernels_from(below, t);
        const auto ka = kernels_from(above, t);
        // dk1 and k0 pass through zero at λt = ±1, so compare on the kernel scale
        const double sc = std::max({std::abs(ka.k0), std::abs(ka.k1), std::abs(ka.dk0),
                                    std::abs(ka.dk1)});
        CHECK(std::abs(kb.k0 - ka.k0) < 1e-9 * sc);
        CHECK(std::abs(kb.k1 - ka.k1) < 1e-9 * sc);
        CHECK(std::abs(kb.dk0 - ka.dk0) < 1e-9 * sc);
        CHECK(std::abs(kb.dk1 - ka.dk1) < 1e-9 * sc);
      }
    }
  }
}

TEST_CASE("phi1 matches an extended-precision reference") {
  for (complex z : {complex(1e-9, 0), complex(-5e-4, 3e-4), complex(2e-3, -1e-3), complex(-0.3, 0.0),
                    complex(0.0, 2.0), complex(-40.0, 7.0), complex(1e-12, 1e-12)}) {
    const std::complex<long double> zl(z.real(), z.imag());
    std::complex<long double> ref;
    if (std::abs(zl) < 1e-2L) {
      std::complex<long double> term = 1.0L, sum = 0.0L;
      for (int k = 1; k < 30; ++k) {
        sum += term;
        term *= zl / static_cast<long double>(k + 1);
      }
      ref = sum;
    } else {
      ref = (std::exp(zl) - 1.0L) / zl;
    }
    const complex refd(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
    CHECK(rel(phi1(z), refd) < 1e-14);
  }
}

TEST_CASE("epsilon threshold") {
  CHECK(epsilon_threshold({0.0, 1.0, 0.0, 3}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(epsilon_threshold({1.0, 2.0, 1.5, 3}) == 0.5);
  CHECK(epsilon_threshold({1.0, 2.0, 0.0, 3}) == doctest::Approx(0.5).epsilon(1e-15));
  const CanonicalParams p(0.3, 1.7, 0.4, 2);
  CHECK(std::pow(epsilon_threshold(p), p.alpha - 2 * p.theta) == doctest::Approx(0.25));
}

TEST_CASE("effective canonical parameters of generalized symbols") {
  const double theta = 0.3;
  const SymbolTriple ibq(GeneralSymbol({{1.0, 0.0}, {1.0, 1.0}}), GeneralSymbol::power(theta),
                         GeneralSymbol({{1.0, 1.0}, {1.0, 2.0}}));
  const auto low = effective_canonical(ibq, Region::low, 3);
  CHECK(low.delta == 1.0);
  CHECK(low.alpha == 1.0);
  CHECK(low.theta == theta);
  const auto high = effective_canonical(ibq, Region::high, 3);
  CHECK(high.delta == 1.0);
  CHECK(high.alpha == 2.0);
  CHECK(high.theta == theta);

  const CanonicalParams p(0.5, 1.5, 0.25, 2);
  for (auto region : {Region::low, Region::high}) {
    const auto q = effective_canonical(SymbolTriple::canonical(p), region, 2);
    CHECK(q.delta == p.delta);
    CHECK(q.alpha == p.alpha);
    CHECK(q.theta == p.theta);
  }
  // literal δ = 0 keeps a = 1 + r^0
  CHECK(effective_canonical(SymbolTriple::canonical({0.0, 1.0, 0.0, 1}), Region::high, 1).delta ==
        0.0);

  const SymbolTriple bad(GeneralSymbol::power(0.0), GeneralSymbol({{1.0, 0.5}, {1.0, 3.0}}),
                         GeneralSymbol::power(1.0));
  CHECK_NOTHROW(effective_canonical(bad, Region::low, 1));
  CHECK_THROWS_AS(effective_canonical(bad, Region::high, 1), InadmissibleExponents);
}
