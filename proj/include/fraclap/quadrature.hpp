#pragma once

// Globally adaptive panel quadrature and a Filon-type rule for integrals
// of smooth amplitudes against e^{iφ}.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fraclap {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  std::size_t max_panels = 100000;
};

struct PanelEstimate {
  double value;
  double error;
};

struct QuadratureResult {
  double value;
  double error;
  std::size_t panels;
};

using PanelRule = std::function<PanelEstimate(double a, double b)>;

/// Splits the panel with the largest error estimate until the summed error
/// drops below max(abs_tol, rel_tol·|value|). `breakpoints` must be sorted and
/// contain at least two entries. Throws QuadratureNonConvergent when the
/// panel budget runs out.
QuadratureResult adaptive_integrate(const PanelRule& rule, std::vector<double> breakpoints,
                                    const QuadratureOptions& opts = {});

/// Kronrod-15 value with |K15 − G7| as error estimate.
PanelEstimate gauss_kronrod15(const std::function<double(double)>& f, double a, double b);

/// Kronrod-15 nodes mapped onto [a, b], with the matching Kronrod and Gauss
/// weights (Gauss weights are zero on the Kronrod-only nodes).
struct KronrodNodes {
  double x[15];
  double wk[15];
  double wg[15];
};
KronrodNodes kronrod15_nodes(double a, double b);

/// Chebyshev–Lobatto points cos(jπ/N), j = 0..N, on [-1, 1].
std::vector<double> chebyshev_lobatto(int degree);

/// ∫_{-1}^{1} T_k(x) e^{iκx} dx for k = 0..degree. Requires κ ≥ 2·degree.
std::vector<std::complex<double>> chebyshev_fourier_moments(int degree, double kappa);

/// ∫_{φa}^{φb} h(φ) e^{iφ} dφ from samples of h at the Chebyshev–Lobatto
/// points of [φa, φb] (ordered as chebyshev_lobatto, i.e. from φb down to φa).
std::complex<double> filon_chebyshev(std::span<const std::complex<double>> samples, double phi_a,
                                     double phi_b);

}  // namespace fraclap
