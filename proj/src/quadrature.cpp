#include "fraclap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

struct Panel {
  double a;
  double b;
  PanelEstimate est;
  bool operator<(const Panel& other) const { return est.error < other.est.error; }
};

}  // namespace

KronrodNodes kronrod15_nodes(double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& xk = gauss_kronrod<double, 15>::abscissa();
  const auto& wk = gauss_kronrod<double, 15>::weights();
  const auto& wg = gauss<double, 7>::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  KronrodNodes nodes{};
  nodes.x[7] = mid;
  nodes.wk[7] = wk[0] * half;
  nodes.wg[7] = wg[0] * half;
  for (int i = 1; i < 8; ++i) {
    const bool gauss_node = i % 2 == 0;
    const double dx = half * xk[i];
    nodes.x[7 - i] = mid - dx;
    nodes.x[7 + i] = mid + dx;
    nodes.wk[7 - i] = nodes.wk[7 + i] = wk[i] * half;
    const double g = gauss_node ? wg[i / 2] * half : 0.0;
    nodes.wg[7 - i] = nodes.wg[7 + i] = g;
  }
  return nodes;
}

PanelEstimate gauss_kronrod15(const std::function<double(double)>& f, double a, double b) {
  const KronrodNodes nodes = kronrod15_nodes(a, b);
  double k = 0.0;
  double g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(nodes.x[i]);
    k += nodes.wk[i] * fx;
    g += nodes.wg[i] * fx;
  }
  return {k, std::abs(k - g)};
}

QuadratureResult adaptive_integrate(const PanelRule& rule, std::vector<double> breakpoints,
                                    const QuadratureOptions& opts) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2) return {0.0, 0.0, 0};

  std::priority_queue<Panel> active;
  std::vector<Panel> frozen;  // too narrow to split further
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p{breakpoints[i], breakpoints[i + 1], rule(breakpoints[i], breakpoints[i + 1])};
    value += p.est.value;
    error += p.est.error;
    active.push(p);
    ++panels;
  }

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };

  std::size_t since_resum = 0;
  while (error > target()) {
    if (active.empty()) break;
    if (panels >= opts.max_panels) {
      throw QuadratureNonConvergent("panel budget of " + std::to_string(opts.max_panels) +
                                    " exhausted (error " + std::to_string(error) + ", value " +
                                    std::to_string(value) + ")");
    }
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 1e-14 * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Panel left{worst.a, mid, rule(worst.a, mid)};
    Panel right{mid, worst.b, rule(mid, worst.b)};
    value += left.est.value + right.est.value - worst.est.value;
    error += left.est.error + right.est.error - worst.est.error;
    active.push(left);
    active.push(right);
    ++panels;

    if (++since_resum == 256) {
      // keep the running sums from drifting
      since_resum = 0;
      value = 0.0;
      error = 0.0;
      auto copy = active;
      while (!copy.empty()) {
        value += copy.top().est.value;
        error += copy.top().est.error;
        copy.pop();
      }
      for (const auto& p : frozen) {
        value += p.est.value;
        error += p.est.error;
      }
    }
  }

  value = 0.0;
  error = 0.0;
  while (!active.empty()) {
    value += active.top().est.value;
    error += active.top().est.error;
    active.pop();
  }
  for (const auto& p : frozen) {
    value += p.est.value;
    error += p.est.error;
  }
  if (error > 10.0 * std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    throw QuadratureNonConvergent("irreducible panels, error " + std::to_string(error) +
                                  " for value " + std::to_string(value));
  }
  return {value, error, panels};
}

std::vector<double> chebyshev_lobatto(int degree) {
  std::vector<double> x(degree + 1);
  for (int j = 0; j <= degree; ++j) x[j] = std::cos(std::numbers::pi * j / degree);
  return x;
}

std::vector<std::complex<double>> chebyshev_fourier_moments(int degree, double kappa) {
  using cd = std::complex<double>;
  const cd i(0.0, 1.0);
  const cd ep = std::exp(i * kappa);
  const cd em = std::exp(-i * kappa);
  const cd ik = i * kappa;
  std::vector<cd> mu(degree + 1);
  std::vector<cd> w(degree + 1);  // ∫ U_k e^{iκx} dx
  // mu_k = [T_k e^{iκx}/(iκ)]_{-1}^{1} − (k/(iκ)) W_{k−1},  W_k = 2 mu_k + W_{k−2}
  for (int k = 0; k <= degree; ++k) {
    const cd boundary = (ep - ((k % 2 == 0) ? em : -em)) / ik;
    mu[k] = k == 0 ? boundary : boundary - (static_cast<double>(k) / ik) * w[k - 1];
    if (k == 0) {
      w[k] = mu[k];
    } else if (k == 1) {
      w[k] = 2.0 * mu[k];
    } else {
      w[k] = 2.0 * mu[k] + w[k - 2];
    }
  }
  return mu;
}

std::complex<double> filon_chebyshev(std::span<const std::complex<double>> samples, double phi_a,
                                     double phi_b) {
  using cd = std::complex<double>;
  const int degree = static_cast<int>(samples.size()) - 1;
  // Chebyshev coefficients of the interpolant through the Lobatto samples
  std::vector<cd> coef(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    cd s = 0.0;
    for (int j = 0; j <= degree; ++j) {
      const double wj = (j == 0 || j == degree) ? 0.5 : 1.0;
      s += wj * samples[j] * std::cos(std::numbers::pi * j * k / degree);
    }
    const double ck = (k == 0 || k == degree) ? 1.0 / degree : 2.0 / degree;
    coef[k] = ck * s;
  }
  const double half = 0.5 * (phi_b - phi_a);
  const double centre = 0.5 * (phi_a + phi_b);
  const auto mu = chebyshev_fourier_moments(degree, half);
  cd sum = 0.0;
  for (int k = 0; k <= degree; ++k) sum += coef[k] * mu[k];
  return half * std::exp(cd(0.0, centre)) * sum;
}

}  // namespace fraclap
