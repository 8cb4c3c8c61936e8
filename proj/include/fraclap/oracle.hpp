#pragma once

// Brute-force per-mode integrator for a v̂'' + b v̂' + c v̂ = 0, used to
// certify the closed-form kernels.

#include <span>
#include <utility>

#include "fraclap/symbols.hpp"

namespace fraclap {

struct ModeState {
  complex v;
  complex vt;
  double t;
};

/// Largest admissible step at radius r: 0.1/max(1, |λ+|, |λ−|).
double rk4_step_limit(const SymbolTriple& sym, double r);

/// Classical RK4 with a uniform step ≤ dt landing exactly on t_end.
/// Throws StepTooLarge when dt exceeds rk4_step_limit.
ModeState rk4_mode(const SymbolTriple& sym, double r, complex v0hat, complex v1hat, double t_end,
                   double dt);

struct OraclePoint {
  double r;
  double t;
};

struct AgreementReport {
  double max_rel_error;
  OraclePoint worst;
  std::size_t points;
};

/// Worst relative discrepancy, over the grid and the data (1, 0), (0, 1), between
/// solution_hat and an RK4 reference refined by step halving until two
/// successive runs agree to 1e−11.
AgreementReport kernel_agreement(const SymbolTriple& sym, std::span<const OraclePoint> grid,
                                 unsigned threads = 1);

/// RK4 reference for one mode (Richardson value of the last two halvings).
ModeState rk4_reference(const SymbolTriple& sym, double r, complex v0hat, complex v1hat,
                        double t_end);

}  // namespace fraclap
