#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"

using namespace fraclap;
using cd = std::complex<double>;

namespace {

// Composite Gauss–Legendre, many short panels: the brute-force reference.
template <class F>
cd brute_force(F&& f, double a, double b, int panels) {
  using boost::math::quadrature::gauss;
  cd sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    sum += gauss<double, 20>::integrate([&](double x) { return f(x).real(); }, lo, lo + h);
    sum += cd(0.0, gauss<double, 20>::integrate([&](double x) { return f(x).imag(); }, lo, lo + h));
  }
  return sum;
}

}  // namespace

TEST_CASE("adaptive integration reaches the requested relative accuracy") {
  const auto rule = [](double a, double b) {
    return gauss_kronrod15([](double x) { return std::exp(-x * x); }, a, b);
  };
  const auto res = adaptive_integrate(rule, {-10.0, 0.0, 10.0});
  CHECK(res.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));

  // integrable endpoint singularity needs many bisections
  const auto sing = adaptive_integrate(
      [](double a, double b) {
        return gauss_kronrod15([](double x) { return 1.0 / std::sqrt(x); }, a, b);
      },
      {0.0, 1.0}, {1e-9, 0.0, 100000});
  CHECK(sing.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("adaptive integration reports an exhausted panel budget") {
  const auto rule = [](double a, double b) {
    return gauss_kronrod15([](double x) { return std::sin(1e4 * x) + 1.0; }, a, b);
  };
  CHECK_THROWS_AS(adaptive_integrate(rule, {0.0, 100.0}, {1e-12, 0.0, 50}),
                  QuadratureNonConvergent);
}

TEST_CASE("zero integrand terminates immediately") {
  const auto res = adaptive_integrate(
      [](double a, double b) { return gauss_kronrod15([](double) { return 0.0; }, a, b); },
      {0.0, 1.0, 2.0});
  CHECK(res.value == 0.0);
  CHECK(res.panels == 2);
}

TEST_CASE("Chebyshev–Fourier moments agree with brute force") {
  for (double kappa : {32.0, 50.0, 333.3, 1e4}) {
    const int degree = 16;
    const auto mu = chebyshev_fourier_moments(degree, kappa);
    for (int k = 0; k <= degree; ++k) {
      const auto ref = brute_force(
          [&](double x) { return std::cos(k * std::acos(x)) * std::exp(cd(0.0, kappa * x)); },
          -1.0, 1.0, static_cast<int>(kappa) + 50);
      CHECK(std::abs(mu[k] - ref) < 1e-12 * (1.0 + std::abs(ref)) + 1e-13);
    }
  }
}

TEST_CASE("Filon rule integrates smooth amplitudes against e^{iφ}") {
  const auto h = [](double phi) { return cd(1.0 / (1.0 + phi / 300.0), std::exp(-phi / 500.0)); };
  for (auto [a, b] : {std::pair{0.0, 200.0}, std::pair{100.0, 800.0}, std::pair{5.0, 70.0}}) {
    const int degree = 16;
    const auto x = chebyshev_lobatto(degree);
    std::vector<cd> samples;
    for (double xi : x) samples.push_back(h(0.5 * (a + b) + 0.5 * (b - a) * xi));
    const cd got = filon_chebyshev(samples, a, b);
    const cd ref =
        brute_force([&](double p) { return h(p) * std::exp(cd(0.0, p)); }, a, b,
                    static_cast<int>(b - a) + 10);
    CHECK(std::abs(got - ref) < 1e-9 * std::abs(ref) + 1e-12);
  }
}
