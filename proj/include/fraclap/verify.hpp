#pragma once

// The verification suite: every pointwise inequality and identity of the
// decay argument, sampled for one symbol, reported as JSON-ready records.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fraclap/symbols.hpp"

namespace fraclap {

using NamedValues = std::vector<std::pair<std::string, double>>;

struct VerifyRecord {
  std::string check;
  NamedValues params;
  NamedValues worst_point;
  double violation = 0.0;  // worst value of the check's metric
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool pass = true;
  std::string note;
};

struct VerifyConfig {
  SymbolTriple sym;
  int n;
  std::string label;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double t_max = 50.0;
};

VerifyRecord verify_root_brackets(const CanonicalParams& p, std::size_t points);
VerifyRecord verify_complex_envelope(const CanonicalParams& p, std::size_t points);
VerifyRecord verify_vieta(const VerifyConfig& cfg);
VerifyRecord verify_rho_bounds(const VerifyConfig& cfg);
/// R ≤ F/2, E ≥ E1/2, dE/dt + F/2 ≤ 0, dE/dt + F = R and the dissipation
/// identity at the same random (t, r ≥ ε, σ, data) samples.
std::vector<VerifyRecord> verify_energy(const VerifyConfig& cfg);
VerifyRecord verify_e1f(const VerifyConfig& cfg);
VerifyRecord verify_kernels(const VerifyConfig& cfg, std::size_t points = 64);
/// sup over t ∈ [1, 1e6] of Q(t)/Q(1) for ten random (n, k, β, a).
VerifyRecord verify_q_ratio_bound(std::uint64_t seed, std::size_t cases = 10);

std::vector<VerifyRecord> run_verification(const VerifyConfig& cfg);

bool all_pass(const std::vector<VerifyRecord>& records);

/// {"label", "records": [{check, params, worst_point, violation, pass, ...}]}
/// with a fixed key order.
std::string verification_json(const std::string& label, const std::vector<VerifyRecord>& records);

}  // namespace fraclap
