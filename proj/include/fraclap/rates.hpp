#pragma once

// Predicted decay rates (1+t)^{−k} of ‖∂_x^γ v‖ and ‖∂_x^γ v_t‖, split into
// the two low-frequency data terms and the high-frequency term, together with
// the Sobolev orders (s, r) required of (v0, v1).

#include <optional>
#include <string>
#include <vector>

#include "fraclap/rational.hpp"
#include "fraclap/symbols.hpp"

namespace fraclap {

enum class Target { v, vt };

std::string to_string(Target t);
Target parse_target(const std::string& s);

/// One term of an estimate: e^{−ct} or (1+t)^{−exponent}.
struct TermRate {
  bool exponential = false;
  double exponent = 0.0;
  std::optional<Rational> exact;  // set when every input was rational

  std::string to_string() const;
};

struct LowFreqRate {
  TermRate v0;
  TermRate v1;
  std::string case_label;
};

struct HighFreqRate {
  /// Decay of the high-frequency energy integral: exponential, or (1+t)^{−1/β}.
  TermRate energy;
  double required_s;
  double required_r;
  std::optional<Rational> exact_s;
  std::optional<Rational> exact_r;
  std::string case_label;
};

enum class DecayKind { polynomial, exponential };

struct DecayPrediction {
  DecayKind kind = DecayKind::polynomial;
  double exponent = 0.0;  // unused when exponential
  std::optional<Rational> exact_exponent;
  TermRate v0_low;
  TermRate v1_low;
  TermRate high;  // norm rate, (1+t)^{−1/(2β)} in the regularity-loss case
  double required_s = 0.0;
  double required_r = 0.0;
  std::optional<Rational> exact_s;
  std::optional<Rational> exact_r;
  std::optional<double> beta;
  std::optional<Rational> exact_beta;
  std::string case_label;
};

struct RateQuery {
  CanonicalParams low;   // parameters governing |ξ| < ε
  CanonicalParams high;  // parameters governing |ξ| ≥ ε
  Target target = Target::v;
  int gamma = 0;
  std::optional<double> beta;

  static RateQuery canonical(const CanonicalParams& p, Target target, int gamma,
                             std::optional<double> beta = std::nullopt);
  /// Effective low/high parameters of a generalized symbol.
  static RateQuery general(const SymbolTriple& sym, int n, Target target, int gamma,
                           std::optional<double> beta = std::nullopt);
};

/// Exponents of the v0 and v1 low-frequency terms. Throws HypothesisNotMet
/// naming the failed condition.
LowFreqRate low_freq_rate(const RateQuery& q);

/// Behaviour of the order-σ high-frequency energy. Throws BetaRequired when
/// θ < δ and no β is supplied.
HighFreqRate high_freq_rate(const CanonicalParams& p, double sigma,
                            std::optional<double> beta = std::nullopt);

/// σ used for the high-frequency part of a norm: 2γ − 2α for v, 2γ − 2δ for v_t.
double norm_sigma(const CanonicalParams& high, Target target, int gamma);

DecayPrediction combined_rate(const RateQuery& q);

/// β with 1/(2β) equal to the given low-frequency exponent.
double choose_beta(double low_exponent);
Rational choose_beta(const Rational& low_exponent);

struct PresetEntry {
  std::string norm;  // "||v||", "||grad v_t||", ...
  Target target;
  int gamma;
  std::optional<DecayPrediction> prediction;
  std::string unmet;  // failed hypothesis when prediction is empty
};

struct Preset {
  std::string name;
  double theta;
  int n;
  SymbolTriple symbols;
  std::vector<PresetEntry> entries;
};

std::vector<std::string> preset_names();

/// Symbols of a named application: wave, plate, plate_no_ri or ibq.
SymbolTriple preset_symbols(const std::string& name, double theta, bool literal_delta0 = false);

/// Rate table for ‖v‖, ‖v_t‖ and each term of the application's energy.
/// Throws ThetaOutOfRange outside the admissible θ interval.
Preset preset(const std::string& name, double theta, int n, bool literal_delta0 = false);

}  // namespace fraclap
