#pragma once

// Frequency-space energy functionals for r ≥ ε:
//   E1 = ½ r^{2δ+σ}|v̂_t|² + ½ r^{2α+σ}|v̂|²
//   E  = ½ a r^σ|v̂_t|² + ½ c r^σ|v̂|² + ρ a r^σ Re(v̂_t conj(v̂)) + ½ ρ b r^σ|v̂|²
//   F  = b r^σ|v̂_t|² + ρ c r^σ|v̂|²,   R = ρ a r^σ|v̂_t|²
// so that dE/dt + F = R along every solution.

#include <span>

#include "fraclap/spectra.hpp"
#include "fraclap/symbols.hpp"

namespace fraclap {

struct EnergyPoint {
  double e1;
  double e;
  double f;
  double rr;
  double rho;
};

/// The multiplier ρ(r) for r ≥ ε.
double rho(const CanonicalParams& p, double eps, double r);

/// Energies of the solution with data (v0hat, v1hat) at time t and radius r.
/// Throws PreconditionViolation for r below the split radius of `sym`.
EnergyPoint energy_point(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                         complex v0hat, complex v1hat, double t, double r);

/// Energies of a given state (v̂, v̂_t) at radius r.
EnergyPoint energy_of_state(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                            double eps, double r, const ModeValue& state);

struct EnergySample {
  double t;
  double r;
  complex v0hat;
  complex v1hat;
};

struct EquivalenceBounds {
  double m;        // observed min of E/E1
  double M;        // observed max of E/E1
  double M_bound;  // a priori upper constant
};

/// Upper constant in E ≤ M·E1: max(2 sup a/r^{2δ}, 2 sup c/r^{2α}) over r ≥ ε.
double equivalence_upper_constant(const CanonicalParams& p, const SymbolTriple& sym, double eps);

/// Throws EquivalenceViolated if some sample has E < E1/2 − 1e−12·E1.
EquivalenceBounds check_equivalence(const CanonicalParams& p, double sigma,
                                    const SymbolTriple& sym,
                                    std::span<const EnergySample> samples);

/// Richardson-extrapolated central difference of E(t) at fixed r.
double energy_time_derivative(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                              complex v0hat, complex v1hat, double r, double t);

/// max over the grid of (dE/dt + F/2)/(|E| + F); ≤ 1e−6 counts as satisfied.
double check_diff_inequality(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                             complex v0hat, complex v1hat, double r,
                             std::span<const double> t_grid);

/// max over the grid of |dE/dt + F − R|/(|E| + F + R).
double check_energy_identity(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                             complex v0hat, complex v1hat, double r,
                             std::span<const double> t_grid);

/// Relative residual of a|v̂_t|² + c|v̂|² + 2∫₀ᵗ b|v̂_s|² ds = a|v̂1|² + c|v̂0|².
double dissipation_identity_check(const SymbolTriple& sym, complex v0hat, complex v1hat,
                                  double r, double t);

/// C with E1 ≤ C·F on r ≥ ε when δ ≤ θ. Throws HypothesisViolated otherwise.
double e1f_constant(const CanonicalParams& p, double eps);

/// True when every sample satisfies E1 ≤ C·F (relative slack 1e−12).
bool check_e1f(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
               std::span<const EnergySample> samples);

/// I(t) = ∫_{|ξ|≥ε} E1 dξ.
double hf_energy_integral(const CanonicalParams& p, double sigma, const SymbolTriple& sym, int n,
                          const RadialProfile& v0, const RadialProfile& v1, double t,
                          const SpectralOptions& opts = {});

/// J(t) = ∫_{|ξ|≥ε} F dξ.
double hf_dissipation_integral(const CanonicalParams& p, double sigma, const SymbolTriple& sym,
                               int n, const RadialProfile& v0, const RadialProfile& v1, double t,
                               const SpectralOptions& opts = {});

/// Constant C in I^{1+β} ≤ C·D^β·J for θ < δ: (1 + ε^{−2δ}) ε^{−(2α+2δ−4θ)}.
double regularity_loss_constant(const CanonicalParams& p, double eps);

/// D = ∫_{|ξ|≥ε} r^{σ+2(δ−θ)/β} (a|v̂1|² + c|v̂0|²) dξ.
double regularity_loss_data_norm(const CanonicalParams& p, double sigma, double beta,
                                 const SymbolTriple& sym, int n, const RadialProfile& v0,
                                 const RadialProfile& v1, const SpectralOptions& opts = {});

}  // namespace fraclap
