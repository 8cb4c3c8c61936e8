#pragma once

// Decay curves t ↦ ‖·‖(t) on a geometric time grid and log-log tail fits.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/energy.hpp"
#include "fraclap/spectra.hpp"
#include "fraclap/symbols.hpp"

namespace fraclap {

/// What a curve measures: a radial norm of ∂_t^j ∂_x^γ v, or the
/// high-frequency energy integral of order σ.
struct CurveQuery {
  enum class Quantity { norm, hf_energy };

  Quantity quantity = Quantity::norm;
  SymbolTriple sym;
  int n;
  RadialProfile v0;
  RadialProfile v1;
  int j = 0;
  int gamma = 0;
  Region region = Region::full;
  std::optional<CanonicalParams> p;  // hf_energy only
  double sigma = 0.0;                // hf_energy only
  SpectralOptions opts{};

  static CurveQuery norm(SymbolTriple sym, int n, RadialProfile v0, RadialProfile v1, int j,
                         int gamma);
  static CurveQuery hf_energy(const CanonicalParams& p, double sigma, SymbolTriple sym, int n,
                              RadialProfile v0, RadialProfile v1);

  double evaluate(double t) const;
  std::string describe() const;
};

struct DecayCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::string meta;

  /// Throws DegenerateInput unless the invariants hold (≥ 8 points, strictly
  /// increasing positive times, finite non-negative values).
  void validate() const;
};

/// Number of worker threads: the argument if positive, else FRACLAP_THREADS,
/// else the hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Geometric grid of `points` times in [t_min, t_max].
std::vector<double> geometric_grid(double t_min, double t_max, std::size_t points);

DecayCurve generate_curve(const CurveQuery& q, double t_min, double t_max, std::size_t points,
                          unsigned threads = 0);

/// CSV with header `t,value` and 17 significant digits.
void write_curve_csv(const DecayCurve& c, std::ostream& out);
void write_curve_csv(const DecayCurve& c, const std::string& path);
DecayCurve read_curve_csv(std::istream& in);
DecayCurve read_curve_csv(const std::string& path);

enum class FitClass { polynomial, exponential, flat };

std::string to_string(FitClass c);

struct RateFit {
  double slope;     // d log v / d log(1+t)
  double exponent;  // −slope
  double r_squared;
  double curvature;  // mean change of the local slope per decade of 1+t
  FitClass classification;
  std::size_t tail_points;
};

inline constexpr double kConcavityThreshold = -0.05;
inline constexpr double kFlatThreshold = 0.02;

/// Least squares of log v against log(1+t) over the last `tail_fraction`
/// of the grid. Throws PreconditionViolation with fewer than 6 tail points
/// and DegenerateInput on NaN or negative values.
RateFit fit_loglog(const DecayCurve& c, double tail_fraction = 0.5);

}  // namespace fraclap
