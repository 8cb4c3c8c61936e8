#pragma once

// Fourier symbols of
//   a(|ξ|) v̂_tt + b(|ξ|) v̂_t + c(|ξ|) v̂ = 0,
// their characteristic roots and the closed-form solution kernels.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fraclap {

using complex = std::complex<double>;

/// The exponent triple (δ, α, θ) and the spatial dimension n.
struct CanonicalParams {
  double delta;
  double alpha;
  double theta;
  int n;

  /// Throws InvalidParameters unless δ ≥ 0, α ≥ 0, 0 ≤ θ ≤ α and n ≥ 1.
  CanonicalParams(double delta, double alpha, double theta, int n);

  bool real_branch() const { return alpha > 2.0 * theta; }
  bool regularity_loss() const { return theta < delta; }
};

struct SymbolTerm {
  double weight;
  double exponent;  // contributes weight * r^(2 * exponent)
};

/// A finite sum Σ w_i r^{2 e_i} with positive weights.
class GeneralSymbol {
 public:
  explicit GeneralSymbol(std::vector<SymbolTerm> terms);

  /// Single power w r^{2e}.
  static GeneralSymbol power(double exponent, double weight = 1.0);

  /// Parses "w:e,w:e,..." (the CLI `--symbol-*` format).
  static GeneralSymbol parse(std::string_view text);

  double operator()(double r) const;
  double derivative(double r) const;

  double low_exponent() const;
  double high_exponent() const;

  std::span<const SymbolTerm> terms() const { return terms_; }
  std::string to_string() const;

 private:
  std::vector<SymbolTerm> terms_;
};

/// Coefficients of v̂_tt (a), v̂_t (b, absent means undamped) and v̂ (c).
class SymbolTriple {
 public:
  SymbolTriple(GeneralSymbol a, std::optional<GeneralSymbol> b, GeneralSymbol c);

  /// The literal coefficients 1 + r^{2δ}, r^{2θ}, r^{2α}.
  static SymbolTriple canonical(const CanonicalParams& p);

  const GeneralSymbol& a() const { return a_; }
  const std::optional<GeneralSymbol>& b() const { return b_; }
  const GeneralSymbol& c() const { return c_; }

  double inertia(double r) const { return a_(r); }
  double damping(double r) const { return b_ ? (*b_)(r) : 0.0; }
  double stiffness(double r) const { return c_(r); }

  double inertia_derivative(double r) const { return a_.derivative(r); }
  double damping_derivative(double r) const { return b_ ? b_->derivative(r) : 0.0; }
  double stiffness_derivative(double r) const { return c_.derivative(r); }

  std::string to_string() const;

 private:
  GeneralSymbol a_;
  std::optional<GeneralSymbol> b_;
  GeneralSymbol c_;
};

struct Eigenpair {
  complex lambda_plus;
  complex lambda_minus;
  bool degenerate;
};

/// Values of K̂0, K̂1, ∂_t K̂0, ∂_t K̂1 at one (t, r).
struct KernelQuad {
  complex k0;
  complex k1;
  complex dk0;
  complex dk1;
};

struct ModeValue {
  complex v;
  complex vt;
};

enum class Region { low, high, full };

inline constexpr double kDegenerateGap = 1e-6;

/// φ1(z) = (e^z − 1)/z, accurate near z = 0.
complex phi1(complex z);

/// Discriminant b² − 4ac with the products compensated by fma.
double discriminant(double a, double b, double c);

Eigenpair eigenvalues(const SymbolTriple& sym, double r);
Eigenpair eigenvalues(double a, double b, double c);

KernelQuad kernels_from(const Eigenpair& eig, double t);
KernelQuad kernels_at(const SymbolTriple& sym, double t, double r);

ModeValue solution_hat(const SymbolTriple& sym, double t, double r, complex v0hat,
                       complex v1hat);

/// Radius of the low-frequency ball.
double epsilon_threshold(const CanonicalParams& p);

/// (δ, α, θ) seen by the rate theory in one frequency region: min of the
/// exponents for Region::low, max for Region::high. The constant term of `a`
/// plays the role of the "1+" and is dropped first.
CanonicalParams effective_canonical(const SymbolTriple& sym, Region region, int n);

/// ε of the low/high split for a possibly generalized symbol.
double split_epsilon(const SymbolTriple& sym, int n);

}  // namespace fraclap
