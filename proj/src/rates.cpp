#include "fraclap/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

double to_d(double x) { return x; }
double to_d(const Rational& x) { return x.to_double(); }
std::optional<Rational> exact_of(double) { return std::nullopt; }
std::optional<Rational> exact_of(const Rational& x) { return x; }

template <class T>
struct Exps {
  T delta, alpha, theta;
  int n;
};

template <class T>
TermRate poly(const T& k) {
  return {false, to_d(k), exact_of(k)};
}

TermRate expo() { return {true, 0.0, std::nullopt}; }

template <class T>
struct LowT {
  std::optional<T> v0, v1;  // empty: exponential
  std::string label;
};

template <class T>
LowT<T> low_rate(const Exps<T>& p, Target target, int gamma) {
  const T k = T(p.n) / T(4) + T(gamma) / T(2);
  const T a = p.alpha, th = p.theta;
  const T dim = T(p.n) + T(2 * gamma);
  if (a > T(2) * th) {
    if (target == Target::v) {
      if (!(dim > T(4) * th)) {
        throw HypothesisNotMet("real branch, target v: needs n + 2|gamma| > 4 theta");
      }
      return {k / (a - th), (k - th) / (a - th), "low: real roots, target v"};
    }
    if (dim < T(2) * a && th >= k && th < a / T(2)) {
      return {k / (a - th) + T(1), k / th,
              "low: real roots, target v_t, n + 2|gamma| < 2 alpha and theta in [k, alpha/2)"};
    }
    return {k / (a - th) + T(1), (k - th) / (a - th) + T(1),
            "low: real roots, target v_t, n + 2|gamma| >= 2 alpha or theta < k"};
  }
  if (a == T(0)) {
    return {std::nullopt, std::nullopt, "low: alpha = theta = 0, e^{-t/4}"};
  }
  if (target == Target::v) {
    if (!(dim > T(2) * a)) {
      throw HypothesisNotMet("complex branch, target v: needs n + 2|gamma| > 2 alpha");
    }
    return {k / th, (k - a / T(2)) / th, "low: complex roots, target v"};
  }
  return {(k + a / T(2)) / th, k / th, "low: complex roots, target v_t"};
}

template <class T>
struct HighT {
  bool exponential;
  T energy_exponent;  // 1/β
  T s, r;
  std::string label;
};

template <class T>
HighT<T> high_rate(const Exps<T>& p, const T& sigma, const std::optional<T>& beta) {
  const T half = sigma / T(2);
  if (p.delta <= p.theta) {
    return {true, T(0), p.alpha + half, p.delta + half, "high: delta <= theta, exponential"};
  }
  if (!beta) throw BetaRequired("theta < delta (regularity loss) needs beta");
  if (!(*beta > T(0))) throw InvalidParameters("beta must be positive");
  const T extra = (p.delta - p.theta) / *beta;
  return {false, T(1) / *beta, p.alpha + extra + half, p.delta + extra + half,
          "high: theta < delta, regularity loss"};
}

template <class T>
T sigma_of(const Exps<T>& high, Target target, int gamma) {
  return target == Target::v ? T(2 * gamma) - T(2) * high.alpha
                             : T(2 * gamma) - T(2) * high.delta;
}

template <class T>
DecayPrediction combine(const Exps<T>& low, const Exps<T>& high, Target target, int gamma,
                        std::optional<T> beta) {
  const LowT<T> lo = low_rate(low, target, gamma);
  std::optional<T> slowest_low;
  for (const auto& e : {lo.v0, lo.v1}) {
    if (e && (!slowest_low || *e < *slowest_low)) slowest_low = *e;
  }
  const bool loss = high.theta < high.delta;
  bool auto_beta = false;
  if (loss && !beta) {
    if (!slowest_low) {
      throw BetaRequired("low-frequency decay is exponential; no rate to match, supply beta");
    }
    beta = T(1) / (T(2) * *slowest_low);
    auto_beta = true;
  }
  const HighT<T> hi = high_rate(high, sigma_of(high, target, gamma), beta);

  DecayPrediction out;
  out.v0_low = lo.v0 ? poly(*lo.v0) : expo();
  out.v1_low = lo.v1 ? poly(*lo.v1) : expo();
  std::optional<T> norm_high;
  if (hi.exponential) {
    out.high = expo();
  } else {
    norm_high = hi.energy_exponent / T(2);
    out.high = poly(*norm_high);
  }
  std::optional<T> slowest = slowest_low;
  if (norm_high && (!slowest || *norm_high < *slowest)) slowest = norm_high;
  if (slowest) {
    out.kind = DecayKind::polynomial;
    out.exponent = to_d(*slowest);
    out.exact_exponent = exact_of(*slowest);
  } else {
    out.kind = DecayKind::exponential;
  }
  out.required_s = to_d(hi.s);
  out.required_r = to_d(hi.r);
  out.exact_s = exact_of(hi.s);
  out.exact_r = exact_of(hi.r);
  if (loss) {
    out.beta = to_d(*beta);
    out.exact_beta = exact_of(*beta);
  }
  out.case_label = lo.label + "; " + hi.label;
  if (auto_beta) out.case_label += ", beta matched to the slowest low-frequency term";
  return out;
}

std::optional<Exps<Rational>> rationalize(const CanonicalParams& p) {
  try {
    return Exps<Rational>{Rational::from_double(p.delta), Rational::from_double(p.alpha),
                          Rational::from_double(p.theta), p.n};
  } catch (const InvalidParameters&) {
    return std::nullopt;
  }
}

std::optional<Rational> rationalize(double x) {
  try {
    return Rational::from_double(x);
  } catch (const InvalidParameters&) {
    return std::nullopt;
  }
}

Exps<double> as_double(const CanonicalParams& p) { return {p.delta, p.alpha, p.theta, p.n}; }

// Runs `f` in exact arithmetic when every input is a short fraction and in
// double precision otherwise; overflow in the exact path also falls back.
template <class F>
auto dispatch(const std::vector<CanonicalParams>& ps, const std::vector<std::optional<double>>& xs,
              F&& f) {
  std::vector<Exps<Rational>> qs;
  std::vector<std::optional<Rational>> qx;
  bool exact = true;
  for (const auto& p : ps) {
    auto q = rationalize(p);
    if (!q) {
      exact = false;
      break;
    }
    qs.push_back(*q);
  }
  for (const auto& x : xs) {
    if (!exact) break;
    if (!x) {
      qx.push_back(std::nullopt);
      continue;
    }
    auto q = rationalize(*x);
    if (!q) {
      exact = false;
      break;
    }
    qx.push_back(q);
  }
  if (exact) {
    try {
      return f(qs, qx);
    } catch (const InvalidParameters& e) {
      if (std::string(e.what()).find("rational overflow") == std::string::npos) throw;
    }
  }
  std::vector<Exps<double>> ds;
  for (const auto& p : ps) ds.push_back(as_double(p));
  return f(ds, xs);
}

}  // namespace

std::string to_string(Target t) { return t == Target::v ? "v" : "vt"; }

Target parse_target(const std::string& s) {
  if (s == "v") return Target::v;
  if (s == "vt" || s == "v_t") return Target::vt;
  throw ConfigError("unknown target '" + s + "' (expected v or vt)");
}

std::string TermRate::to_string() const {
  if (exponential) return "exp";
  if (exact) return exact->to_string();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", exponent);
  return buf;
}

RateQuery RateQuery::canonical(const CanonicalParams& p, Target target, int gamma,
                               std::optional<double> beta) {
  if (gamma < 0) throw InvalidParameters("gamma must be >= 0");
  if (beta && !(*beta > 0.0)) throw InvalidParameters("beta must be positive");
  return RateQuery{p, p, target, gamma, beta};
}

RateQuery RateQuery::general(const SymbolTriple& sym, int n, Target target, int gamma,
                             std::optional<double> beta) {
  RateQuery q = canonical(effective_canonical(sym, Region::low, n), target, gamma, beta);
  q.high = effective_canonical(sym, Region::high, n);
  return q;
}

LowFreqRate low_freq_rate(const RateQuery& q) {
  return dispatch({q.low}, {}, [&](const auto& ps, const auto&) {
    const auto lo = low_rate(ps[0], q.target, q.gamma);
    return LowFreqRate{lo.v0 ? poly(*lo.v0) : expo(), lo.v1 ? poly(*lo.v1) : expo(), lo.label};
  });
}

HighFreqRate high_freq_rate(const CanonicalParams& p, double sigma, std::optional<double> beta) {
  if (beta && !(*beta > 0.0)) throw InvalidParameters("beta must be positive");
  return dispatch({p}, {sigma, beta}, [&](const auto& ps, const auto& xs) {
    const auto hi = high_rate(ps[0], *xs[0], xs[1]);
    HighFreqRate out;
    out.energy = hi.exponential ? expo() : poly(hi.energy_exponent);
    out.required_s = to_d(hi.s);
    out.required_r = to_d(hi.r);
    out.exact_s = exact_of(hi.s);
    out.exact_r = exact_of(hi.r);
    out.case_label = hi.label;
    return out;
  });
}

double norm_sigma(const CanonicalParams& high, Target target, int gamma) {
  return to_d(sigma_of(as_double(high), target, gamma));
}

DecayPrediction combined_rate(const RateQuery& q) {
  if (q.gamma < 0) throw InvalidParameters("gamma must be >= 0");
  if (q.beta && !(*q.beta > 0.0)) throw InvalidParameters("beta must be positive");
  return dispatch({q.low, q.high}, {q.beta}, [&](const auto& ps, const auto& xs) {
    return combine(ps[0], ps[1], q.target, q.gamma, xs[0]);
  });
}

double choose_beta(double low_exponent) {
  if (!(low_exponent > 0.0) || !std::isfinite(low_exponent)) {
    throw InvalidParameters("low-frequency exponent must be positive and finite");
  }
  return 1.0 / (2.0 * low_exponent);
}

Rational choose_beta(const Rational& low_exponent) {
  if (!(low_exponent > Rational(0))) throw InvalidParameters("low-frequency exponent must be positive");
  return Rational(1) / (Rational(2) * low_exponent);
}

std::vector<std::string> preset_names() { return {"wave", "plate", "plate_no_ri", "ibq"}; }

namespace {

struct PresetSpec {
  double theta_max;
  std::vector<std::pair<std::string, std::pair<Target, int>>> norms;
};

PresetSpec preset_spec(const std::string& name) {
  const auto v = Target::v, vt = Target::vt;
  if (name == "wave") {
    return {1.0, {{"||v||", {v, 0}}, {"||v_t||", {vt, 0}}, {"||grad v||", {v, 1}}}};
  }
  if (name == "plate") {
    return {2.0,
            {{"||v||", {v, 0}}, {"||v_t||", {vt, 0}}, {"||grad v_t||", {vt, 1}},
             {"||Lap v||", {v, 2}}}};
  }
  if (name == "plate_no_ri") {
    return {2.0, {{"||v||", {v, 0}}, {"||v_t||", {vt, 0}}, {"||Lap v||", {v, 2}}}};
  }
  if (name == "ibq") {
    return {1.0,
            {{"||v||", {v, 0}}, {"||grad v||", {v, 1}}, {"||Lap v||", {v, 2}},
             {"||v_t||", {vt, 0}}, {"||grad v_t||", {vt, 1}}}};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace

SymbolTriple preset_symbols(const std::string& name, double theta, bool literal_delta0) {
  const PresetSpec spec = preset_spec(name);
  if (!(theta >= 0.0 && theta <= spec.theta_max)) {
    throw ThetaOutOfRange(name + " needs theta in [0, " + std::to_string(spec.theta_max) + "]");
  }
  const auto b = GeneralSymbol::power(theta);
  if (name == "wave") {
    return SymbolTriple(GeneralSymbol::power(0.0, literal_delta0 ? 2.0 : 1.0), b,
                        GeneralSymbol::power(1.0));
  }
  if (name == "plate") return SymbolTriple::canonical(CanonicalParams(1.0, 2.0, theta, 1));
  if (name == "plate_no_ri") {
    return SymbolTriple(GeneralSymbol::power(0.0), b, GeneralSymbol::power(2.0));
  }
  return SymbolTriple(GeneralSymbol({{1.0, 0.0}, {1.0, 1.0}}), b,
                      GeneralSymbol({{1.0, 1.0}, {1.0, 2.0}}));
}

Preset preset(const std::string& name, double theta, int n, bool literal_delta0) {
  if (n < 1) throw InvalidParameters("dimension n must be >= 1");
  Preset out{name, theta, n, preset_symbols(name, theta, literal_delta0), {}};
  for (const auto& [norm, tg] : preset_spec(name).norms) {
    PresetEntry e{norm, tg.first, tg.second, std::nullopt, ""};
    try {
      e.prediction = combined_rate(RateQuery::general(out.symbols, n, tg.first, tg.second));
    } catch (const HypothesisNotMet& err) {
      e.unmet = err.what();
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace fraclap
