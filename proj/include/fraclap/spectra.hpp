#pragma once

// Radial data profiles and frequency-space L² norms of the solution.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fraclap/quadrature.hpp"
#include "fraclap/symbols.hpp"

namespace fraclap {

/// Radial modulus r ↦ |v̂(r)| of an initial datum.
class RadialProfile {
 public:
  enum class Kind { gaussian, annulus, power_tail, table, zero };

  /// amplitude · e^{−(r/width)²}
  static RadialProfile gaussian(double width, double amplitude = 1.0);
  /// Supported in [r0, r1]: the indicator when smoothness = 0, otherwise the
  /// C^∞ bump exp(s(1 − 1/(4x(1−x)))) with x = (r − r0)/(r1 − r0).
  static RadialProfile annulus(double r0, double r1, double smoothness = 0.0);
  /// (r/cutoff)^{−(order + n/2)} for r ≥ cutoff and 0 below: the datum lies in
  /// H^s exactly for s < order.
  static RadialProfile power_tail(double order, double cutoff, int n);
  /// Linear interpolation through (r_i, value_i), zero outside the table.
  static RadialProfile table(std::vector<double> r, std::vector<double> values);
  /// Two-column CSV (r, value); a non-numeric first line is taken as header.
  static RadialProfile from_csv(const std::string& path);
  static RadialProfile zero();

  double operator()(double r) const;

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  /// sup_r |v̂(r)|, the L^∞ bound standing in for the L¹ norm of the datum.
  double l1_proxy() const;
  /// Radii where the profile has kinks or changes scale.
  std::vector<double> breakpoints() const;
  /// Radius beyond which the profile stays below 1e−16.
  double negligible_radius() const;
  std::string describe() const;

 private:
  RadialProfile() = default;
  Kind kind_ = Kind::zero;
  double p0_ = 0.0;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<double> r_;
  std::vector<double> values_;
};

struct NormRequest {
  int j = 0;      // time derivatives
  int gamma = 0;  // |γ|, spatial derivatives
  Region region = Region::full;
  double t = 0.0;
};

struct SpectralOptions {
  double rel_tol = 1e-9;
  std::size_t max_panels = 100000;
  double r_max = 0.0;  // 0 selects max(10, profile negligible radius)
};

/// ω_n = 2π^{n/2}/Γ(n/2), the area of the unit sphere in ℝⁿ.
double sphere_area(int n);

/// Weights multiplying |v̂|² and |v̂_t|² in a radial integral; the surface
/// measure is part of the weight. An empty function means weight zero.
struct ModeWeights {
  std::function<double(double)> v;
  std::function<double(double)> vt;
};

/// ∫ (w_v |v̂(t,r)|² + w_vt |v̂_t(t,r)|²) dr over a region, v̂ built from the
/// closed-form kernels. Low is [0, ε), high is [ε, ∞), full is [0, ∞) on an
/// independent partition.
QuadratureResult mode_integral(const SymbolTriple& sym, int n, double t, const RadialProfile& v0,
                               const RadialProfile& v1, const ModeWeights& w, Region region,
                               const SpectralOptions& opts = {});

/// (∫ r^{2γ} |∂_t^j v̂(t, r)|² ω_n r^{n−1} dr)^{1/2} over the requested region.
double radial_norm(const SymbolTriple& sym, int n, const RadialProfile& v0,
                   const RadialProfile& v1, const NormRequest& req,
                   const SpectralOptions& opts = {});

struct SplitNorms {
  double low;
  double high;
  double full;
};

SplitNorms parseval_split_check(const SymbolTriple& sym, int n, const RadialProfile& v0,
                                const RadialProfile& v1, int j, int gamma, double t,
                                const SpectralOptions& opts = {});

/// Q(t) = (1+t)^{(n+k)/β} ∫_{|ξ|≤ε} e^{−a|ξ|^β t} |ξ|^k dξ.
double lemma1_ratio(int n, double a, double beta, double k, double eps, double t);

/// ε with a ε^β = (n+k)/β: the ball then holds the bulk of the t = 1
/// integrand, so Q(1) already sits in the asymptotic regime.
double lemma1_radius(int n, double a, double beta, double k);

}  // namespace fraclap
