#include "fraclap/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidParameters("not a number: '" + std::string(s) + "'");
  }
  return value;
}

// r^(2e) with 0^0 = 1.
double even_power(double r, double e) {
  if (e == 0.0) return 1.0;
  return std::pow(r, 2.0 * e);
}

}  // namespace

CanonicalParams::CanonicalParams(double delta_, double alpha_, double theta_, int n_)
    : delta(delta_), alpha(alpha_), theta(theta_), n(n_) {
  if (!(delta >= 0.0) || !(alpha >= 0.0)) {
    throw InvalidParameters("delta and alpha must be nonnegative");
  }
  if (!(theta >= 0.0) || theta > alpha) {
    throw InvalidParameters("theta must lie in [0, alpha]");
  }
  if (n < 1) throw InvalidParameters("dimension n must be at least 1");
}

GeneralSymbol::GeneralSymbol(std::vector<SymbolTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InvalidParameters("symbol needs at least one term");
  for (const auto& t : terms_) {
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
      throw InvalidParameters("symbol weights must be positive");
    }
    if (!(t.exponent >= 0.0) || !std::isfinite(t.exponent)) {
      throw InvalidParameters("symbol exponents must be nonnegative");
    }
  }
}

GeneralSymbol GeneralSymbol::power(double exponent, double weight) {
  return GeneralSymbol({{weight, exponent}});
}

GeneralSymbol GeneralSymbol::parse(std::string_view text) {
  std::vector<SymbolTerm> terms;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidParameters("symbol term must be weight:exponent, got '" +
                              std::string(item) + "'");
    }
    terms.push_back({parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return GeneralSymbol(std::move(terms));
}

double GeneralSymbol::operator()(double r) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.weight * even_power(r, t.exponent);
  return s;
}

double GeneralSymbol::derivative(double r) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    if (t.exponent == 0.0) continue;
    s += t.weight * 2.0 * t.exponent * std::pow(r, 2.0 * t.exponent - 1.0);
  }
  return s;
}

double GeneralSymbol::low_exponent() const {
  return std::min_element(terms_.begin(), terms_.end(),
                          [](auto& x, auto& y) { return x.exponent < y.exponent; })
      ->exponent;
}

double GeneralSymbol::high_exponent() const {
  return std::max_element(terms_.begin(), terms_.end(),
                          [](auto& x, auto& y) { return x.exponent < y.exponent; })
      ->exponent;
}

std::string GeneralSymbol::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ',';
    os << terms_[i].weight << ':' << terms_[i].exponent;
  }
  return os.str();
}

SymbolTriple::SymbolTriple(GeneralSymbol a, std::optional<GeneralSymbol> b, GeneralSymbol c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  double constant = 0.0;
  for (const auto& t : a_.terms()) {
    if (t.exponent == 0.0) constant += t.weight;
  }
  if (constant < 1.0) {
    throw InvalidParameters("inertia symbol a needs a constant term of weight >= 1");
  }
}

SymbolTriple SymbolTriple::canonical(const CanonicalParams& p) {
  return SymbolTriple(GeneralSymbol({{1.0, 0.0}, {1.0, p.delta}}), GeneralSymbol::power(p.theta),
                      GeneralSymbol::power(p.alpha));
}

std::string SymbolTriple::to_string() const {
  return "a=" + a_.to_string() + " b=" + (b_ ? b_->to_string() : std::string("0")) +
         " c=" + c_.to_string();
}

complex phi1(complex z) {
  if (std::abs(z) < 1e-3) {
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  }
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const complex em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return em1 / z;
}

double discriminant(double a, double b, double c) {
  const double bb = b * b;
  const double bb_err = std::fma(b, b, -bb);
  const double ac = 4.0 * a * c;
  const double ac_err = std::fma(4.0 * a, c, -ac);
  return (bb - ac) + (bb_err - ac_err);
}

Eigenpair eigenvalues(double a, double b, double c) {
  Eigenpair e{};
  const double disc = discriminant(a, b, c);
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::sqrt(disc));
    if (q == 0.0) {
      e.lambda_plus = e.lambda_minus = 0.0;
    } else {
      e.lambda_minus = q / a;
      e.lambda_plus = c / q;
      if (e.lambda_plus.real() < e.lambda_minus.real()) std::swap(e.lambda_plus, e.lambda_minus);
    }
  } else {
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(-disc) / (2.0 * a);
    e.lambda_plus = {re, im};
    e.lambda_minus = {re, -im};
  }
  const double scale = std::max({std::abs(e.lambda_plus), std::abs(e.lambda_minus), 1e-300});
  e.degenerate = std::abs(e.lambda_plus - e.lambda_minus) <= kDegenerateGap * scale;
  return e;
}

Eigenpair eigenvalues(const SymbolTriple& sym, double r) {
  return eigenvalues(sym.inertia(r), sym.damping(r), sym.stiffness(r));
}

KernelQuad kernels_from(const Eigenpair& eig, double t) {
  KernelQuad k{};
  if (t == 0.0) return {1.0, 0.0, 0.0, 1.0};
  if (eig.degenerate) {
    const complex lam = 0.5 * (eig.lambda_plus + eig.lambda_minus);
    const complex e = std::exp(lam * t);
    k.k1 = t * e;
    k.k0 = (1.0 - lam * t) * e;
    k.dk1 = (1.0 + lam * t) * e;
    k.dk0 = -lam * lam * t * e;
    return k;
  }
  const complex lp = eig.lambda_plus;
  const complex lm = eig.lambda_minus;
  const complex ep = std::exp(lp * t);
  k.k1 = t * ep * phi1((lm - lp) * t);
  k.k0 = ep - lp * k.k1;
  k.dk1 = ep + lm * k.k1;
  k.dk0 = -lp * lm * k.k1;
  return k;
}

KernelQuad kernels_at(const SymbolTriple& sym, double t, double r) {
  return kernels_from(eigenvalues(sym, r), t);
}

ModeValue solution_hat(const SymbolTriple& sym, double t, double r, complex v0hat,
                       complex v1hat) {
  const KernelQuad k = kernels_at(sym, t, r);
  return {k.k0 * v0hat + k.k1 * v1hat, k.dk0 * v0hat + k.dk1 * v1hat};
}

double epsilon_threshold(const CanonicalParams& p) {
  if (p.alpha > 2.0 * p.theta) return std::pow(0.25, 1.0 / (p.alpha - 2.0 * p.theta));
  return 0.5;
}

CanonicalParams effective_canonical(const SymbolTriple& sym, Region region, int n) {
  const bool low = region == Region::low;
  std::vector<double> a_exponents;
  bool dropped_constant = false;
  for (const auto& t : sym.a().terms()) {
    if (t.exponent == 0.0 && !dropped_constant) {
      dropped_constant = true;
      continue;
    }
    a_exponents.push_back(t.exponent);
  }
  double delta = 0.0;
  if (!a_exponents.empty()) {
    delta = low ? *std::min_element(a_exponents.begin(), a_exponents.end())
                : *std::max_element(a_exponents.begin(), a_exponents.end());
  }
  if (!sym.b()) throw InadmissibleExponents("undamped symbol has no dissipation exponent");
  const double theta = low ? sym.b()->low_exponent() : sym.b()->high_exponent();
  const double alpha = low ? sym.c().low_exponent() : sym.c().high_exponent();
  if (theta > alpha) {
    throw InadmissibleExponents("effective theta exceeds effective alpha");
  }
  return CanonicalParams(delta, alpha, theta, n);
}

double split_epsilon(const SymbolTriple& sym, int n) {
  return epsilon_threshold(effective_canonical(sym, Region::low, n));
}

}  // namespace fraclap
