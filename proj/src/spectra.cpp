#include "fraclap/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

// ---------------------------------------------------------------- profiles

RadialProfile RadialProfile::gaussian(double width, double amplitude) {
  if (!(width > 0.0) || !(amplitude >= 0.0) || !std::isfinite(width * amplitude)) {
    throw InvalidParameters("gaussian profile needs width > 0 and amplitude >= 0");
  }
  RadialProfile p;
  p.kind_ = Kind::gaussian;
  p.p0_ = width;
  p.p1_ = amplitude;
  return p;
}

RadialProfile RadialProfile::annulus(double r0, double r1, double smoothness) {
  if (!(r0 >= 0.0) || !(r1 > r0) || !std::isfinite(r1) || !(smoothness >= 0.0)) {
    throw InvalidParameters("annulus profile needs 0 <= r0 < r1 and smoothness >= 0");
  }
  RadialProfile p;
  p.kind_ = Kind::annulus;
  p.p0_ = r0;
  p.p1_ = r1;
  p.p2_ = smoothness;
  return p;
}

RadialProfile RadialProfile::power_tail(double order, double cutoff, int n) {
  if (!(order > 0.0) || !(cutoff > 0.0) || n < 1) {
    throw InvalidParameters("power_tail profile needs order > 0, cutoff > 0, n >= 1");
  }
  RadialProfile p;
  p.kind_ = Kind::power_tail;
  p.p0_ = order + 0.5 * n;  // decay exponent of v̂
  p.p1_ = cutoff;
  p.p2_ = order;
  return p;
}

RadialProfile RadialProfile::table(std::vector<double> r, std::vector<double> values) {
  if (r.size() != values.size() || r.size() < 2) {
    throw InvalidParameters("profile table needs at least two (r, value) rows");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || r[i] < 0.0) throw InvalidParameters("table radii must be >= 0");
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw InvalidParameters("table values must be finite and nonnegative");
    }
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw InvalidParameters("table radii must be strictly increasing");
    }
  }
  RadialProfile p;
  p.kind_ = Kind::table;
  p.r_ = std::move(r);
  p.values_ = std::move(values);
  return p;
}

RadialProfile RadialProfile::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameters("cannot open profile table '" + path + "'");
  std::vector<double> r, v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b)) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidParameters("malformed profile row: '" + line + "'");
    }
    first = false;
    r.push_back(a);
    v.push_back(b);
  }
  return table(std::move(r), std::move(v));
}

RadialProfile RadialProfile::zero() { return RadialProfile(); }

double RadialProfile::operator()(double r) const {
  switch (kind_) {
    case Kind::gaussian: {
      const double x = r / p0_;
      return p1_ * std::exp(-x * x);
    }
    case Kind::annulus: {
      if (r < p0_ || r > p1_) return 0.0;
      if (p2_ == 0.0) return 1.0;
      const double x = (r - p0_) / (p1_ - p0_);
      const double q = 4.0 * x * (1.0 - x);
      if (q <= 0.0) return 0.0;
      return std::exp(p2_ * (1.0 - 1.0 / q));
    }
    case Kind::power_tail:
      return r < p1_ ? 0.0 : std::pow(r / p1_, -p0_);
    case Kind::table: {
      if (r < r_.front() || r > r_.back()) return 0.0;
      const auto it = std::upper_bound(r_.begin(), r_.end(), r);
      if (it == r_.end()) return values_.back();
      const std::size_t i = static_cast<std::size_t>(it - r_.begin());
      const double w = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
      return (1.0 - w) * values_[i - 1] + w * values_[i];
    }
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

double RadialProfile::l1_proxy() const {
  switch (kind_) {
    case Kind::gaussian:
      return p1_;
    case Kind::annulus:
    case Kind::power_tail:
      return 1.0;
    case Kind::table:
      return *std::max_element(values_.begin(), values_.end());
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> RadialProfile::breakpoints() const {
  switch (kind_) {
    case Kind::gaussian:
      return {0.5 * p0_, p0_, 2.0 * p0_, 4.0 * p0_};
    case Kind::annulus:
      return {p0_, 0.5 * (p0_ + p1_), p1_};
    case Kind::power_tail:
      return {p1_};
    case Kind::table:
      if (r_.size() <= 256) return r_;
      return {r_.front(), r_.back()};
    case Kind::zero:
      return {};
  }
  return {};
}

double RadialProfile::negligible_radius() const {
  switch (kind_) {
    case Kind::gaussian:
      return p1_ > 1e-16 ? p0_ * std::sqrt(std::log(p1_ * 1e16)) : 0.0;
    case Kind::annulus:
      return p1_;
    case Kind::power_tail:
      return p1_ * std::pow(1e16, 1.0 / p0_);
    case Kind::table:
      return r_.back();
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::gaussian:
      os << "gaussian(width=" << p0_ << ",amplitude=" << p1_ << ")";
      break;
    case Kind::annulus:
      os << "annulus(r0=" << p0_ << ",r1=" << p1_ << ",smoothness=" << p2_ << ")";
      break;
    case Kind::power_tail:
      os << "power_tail(order=" << p2_ << ",cutoff=" << p1_ << ")";
      break;
    case Kind::table:
      os << "table(rows=" << r_.size() << ")";
      break;
    case Kind::zero:
      os << "zero";
      break;
  }
  return os.str();
}

// ------------------------------------------------------------ integration

double sphere_area(int n) {
  if (n < 1) throw InvalidParameters("dimension n must be at least 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

constexpr int kFilonDegree = 16;
constexpr double kFilonMinPhase = 128.0;  // κ ≥ 4·degree on every Filon panel

struct ModeProblem {
  const SymbolTriple& sym;
  double t;
  const RadialProfile& v0;
  const RadialProfile& v1;
  const ModeWeights& w;

  double wv(double r) const { return w.v ? w.v(r) : 0.0; }
  double wvt(double r) const { return w.vt ? w.vt(r) : 0.0; }

  double direct(double r, const Eigenpair& e) const {
    const double a0 = v0(r), a1 = v1(r);
    if (a0 == 0.0 && a1 == 0.0) return 0.0;
    const double cv = wv(r), cvt = wvt(r);
    if (cv == 0.0 && cvt == 0.0) return 0.0;
    const KernelQuad k = kernels_from(e, t);
    double s = 0.0;
    if (cv != 0.0) s += cv * std::norm(k.k0 * a0 + k.k1 * a1);
    if (cvt != 0.0) s += cvt * std::norm(k.dk0 * a0 + k.dk1 * a1);
    return s;
  }

  // For λ± = μ ± iω the weighted integrand equals mean + Re(amp·e^{2iωt}).
  void split(double r, const Eigenpair& e, double& mean, complex& amp) const {
    const double a0 = v0(r), a1 = v1(r);
    const double cv = wv(r), cvt = wvt(r);
    const double mu = e.lambda_plus.real();
    const double om = e.lambda_plus.imag();
    const double p = a0;
    const double q = (a1 - mu * a0) / om;
    const double u = a1;
    const double v = mu * q - om * p;
    const double decay = std::exp(2.0 * mu * t);
    mean = decay * 0.5 * (cv * (p * p + q * q) + cvt * (u * u + v * v));
    const double mc = 0.5 * (cv * (p * p - q * q) + cvt * (u * u - v * v));
    const double ms = cv * p * q + cvt * u * v;
    amp = decay * complex(mc, -ms);
  }

  // ω(r) and dω/dr for a complex pair; ω = 0 when the roots are real.
  void omega(double r, double& om, double& dom) const {
    const double a = sym.inertia(r), b = sym.damping(r), c = sym.stiffness(r);
    const double d = -discriminant(a, b, c);
    if (!(d > 0.0)) {
      om = dom = 0.0;
      return;
    }
    const double da = sym.inertia_derivative(r);
    const double db = sym.damping_derivative(r);
    const double dc = sym.stiffness_derivative(r);
    const double sd = std::sqrt(d);
    om = sd / (2.0 * a);
    const double dd = 4.0 * (da * c + a * dc) - 2.0 * b * db;
    dom = dd / (4.0 * a * sd) - om * da / a;
  }

  double phase(double r) const {
    double om = 0.0, dom = 0.0;
    omega(r, om, dom);
    return 2.0 * t * om;
  }

  // r in [ra, rb] with 2tω(r) = target; φ is monotone on the bracket.
  double invert_phase(double target, double ra, double rb, double phia, double phib) const {
    double below = phia < phib ? ra : rb;
    double above = phia < phib ? rb : ra;
    double r = ra + (rb - ra) * (target - phia) / (phib - phia);
    for (int it = 0; it < 80; ++it) {
      double om = 0.0, dom = 0.0;
      omega(r, om, dom);
      const double f = 2.0 * t * om - target;
      if (f == 0.0) return r;
      (f < 0.0 ? below : above) = r;
      double next = r - f / (2.0 * t * dom);
      const double lo = std::min(below, above), hi = std::max(below, above);
      if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r)) {
        return next;
      }
      r = next;
    }
    return r;
  }
};

bool oscillatory_pair(const Eigenpair& e) {
  return !e.degenerate && e.lambda_plus.imag() > std::abs(e.lambda_plus.real());
}

PanelEstimate mode_panel(const ModeProblem& pb, double ua, double ub, bool log_var) {
  const KronrodNodes nd = kronrod15_nodes(ua, ub);
  double r[15];
  Eigenpair eig[15];
  bool filon = pb.t > 0.0;
  for (int i = 0; i < 15; ++i) {
    r[i] = log_var ? std::exp(nd.x[i]) : nd.x[i];
    eig[i] = eigenvalues(pb.sym, r[i]);
    if (filon && !oscillatory_pair(eig[i])) filon = false;
  }

  const double ra = log_var ? std::exp(ua) : ua;
  const double rb = log_var ? std::exp(ub) : ub;
  double phia = 0.0, phib = 0.0;
  if (filon) {
    const Eigenpair ea = eigenvalues(pb.sym, ra), eb = eigenvalues(pb.sym, rb);
    filon = ra > 0.0 && oscillatory_pair(ea) && oscillatory_pair(eb);
  }
  if (filon) {
    phia = pb.phase(ra);
    phib = pb.phase(rb);
    filon = std::abs(phib - phia) >= kFilonMinPhase;
  }
  if (filon) {
    // φ must be strictly monotone on the panel
    const double sign = phib > phia ? 1.0 : -1.0;
    for (int i = 0; i < 15 && filon; ++i) {
      double om = 0.0, dom = 0.0;
      pb.omega(r[i], om, dom);
      filon = std::isfinite(dom) && sign * dom > 0.0;
    }
  }

  if (!filon) {
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double f = pb.direct(r[i], eig[i]) * (log_var ? r[i] : 1.0);
      k += nd.wk[i] * f;
      g += nd.wg[i] * f;
    }
    return {k, std::abs(k - g)};
  }

  double mk = 0.0, mg = 0.0;
  for (int i = 0; i < 15; ++i) {
    double mean = 0.0;
    complex amp;
    pb.split(r[i], eig[i], mean, amp);
    const double f = mean * (log_var ? r[i] : 1.0);
    mk += nd.wk[i] * f;
    mg += nd.wg[i] * f;
  }

  // ∫ amp(r) e^{iφ(r)} dr = ∫ amp/|φ'| e^{iφ} dφ over [φlo, φhi]
  const double phlo = std::min(phia, phib), phhi = std::max(phia, phib);
  const auto x = chebyshev_lobatto(kFilonDegree);
  std::vector<complex> h16(kFilonDegree + 1);
  for (int j = 0; j <= kFilonDegree; ++j) {
    const double target = 0.5 * (phlo + phhi) + 0.5 * (phhi - phlo) * x[j];
    double rj;
    if (j == 0) {
      rj = phia > phib ? ra : rb;
    } else if (j == kFilonDegree) {
      rj = phia > phib ? rb : ra;
    } else {
      rj = pb.invert_phase(target, ra, rb, phia, phib);
    }
    double om = 0.0, dom = 0.0;
    pb.omega(rj, om, dom);
    double mean = 0.0;
    complex amp;
    pb.split(rj, eigenvalues(pb.sym, rj), mean, amp);
    h16[j] = amp / std::abs(2.0 * pb.t * dom);
  }
  std::vector<complex> h8(kFilonDegree / 2 + 1);
  for (int j = 0; j <= kFilonDegree / 2; ++j) h8[j] = h16[2 * j];
  const complex o16 = filon_chebyshev(h16, phlo, phhi);
  const complex o8 = filon_chebyshev(h8, phlo, phhi);
  return {mk + o16.real(), std::abs(mk - mg) + std::abs(o16 - o8)};
}

// r with |Re λ+(r)|·t = 1 inside (0, ε), or 0 when there is none.
double decay_scale(const SymbolTriple& sym, double t, double eps) {
  if (!(t > 0.0)) return 0.0;
  auto g = [&](double r) { return -eigenvalues(sym, r).lambda_plus.real() * t - 1.0; };
  double lo = std::log(eps * 1e-12), hi = std::log(eps);
  if (g(std::exp(hi)) < 0.0 || g(std::exp(lo)) > 0.0) return 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(std::exp(mid)) > 0.0 ? hi : lo) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

QuadratureResult integrate_linear(const ModeProblem& pb, double r0, double r1, double eps,
                                  const QuadratureOptions& qo) {
  std::vector<double> bp{r0, r1};
  for (int k = 1; k <= 40; ++k) {
    const double x = r1 * std::ldexp(1.0, -k);
    if (x > r0) bp.push_back(x);
  }
  const double rs = decay_scale(pb.sym, pb.t, eps);
  if (rs > 0.0) {
    for (int k = -12; k <= 12; ++k) {
      const double x = rs * std::ldexp(1.0, k);
      if (x > r0 && x < r1) bp.push_back(x);
    }
  }
  for (const auto& src : {&pb.v0, &pb.v1}) {
    for (double x : src->breakpoints()) {
      if (x > r0 && x < r1) bp.push_back(x);
    }
  }
  return adaptive_integrate([&](double a, double b) { return mode_panel(pb, a, b, false); },
                            std::move(bp), qo);
}

QuadratureResult integrate_log(const ModeProblem& pb, double r0, double r1,
                               const QuadratureOptions& qo) {
  std::vector<double> bp{std::log(r0), std::log(r1)};
  for (double x = 2.0 * r0; x < r1; x *= 2.0) bp.push_back(std::log(x));
  for (const auto& src : {&pb.v0, &pb.v1}) {
    for (double x : src->breakpoints()) {
      if (x > r0 && x < r1) bp.push_back(std::log(x));
    }
  }
  return adaptive_integrate([&](double a, double b) { return mode_panel(pb, a, b, true); },
                            std::move(bp), qo);
}

// [r0, ∞): up to R_max, then geometric extension until the tail is negligible.
QuadratureResult integrate_to_infinity(const ModeProblem& pb, double r0, double r_max,
                                       const QuadratureOptions& qo) {
  double rr = std::max(r_max, 4.0 * r0);
  QuadratureResult total = integrate_log(pb, r0, rr, qo);
  for (int it = 0; it < 64; ++it) {
    const QuadratureResult piece = integrate_log(pb, rr, 4.0 * rr, qo);
    total.value += piece.value;
    total.error += piece.error;
    total.panels += piece.panels;
    rr *= 4.0;
    if (std::abs(piece.value) <= 1e-14 * std::abs(total.value)) return total;
  }
  throw QuadratureNonConvergent("high-frequency tail does not decay");
}

}  // namespace

QuadratureResult mode_integral(const SymbolTriple& sym, int n, double t, const RadialProfile& v0,
                               const RadialProfile& v1, const ModeWeights& w, Region region,
                               const SpectralOptions& opts) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameters("time must be >= 0");
  if (v0.is_zero() && v1.is_zero()) return {0.0, 0.0, 0};
  const ModeProblem pb{sym, t, v0, v1, w};
  const double eps = split_epsilon(sym, n);
  const QuadratureOptions qo{opts.rel_tol, 0.0, opts.max_panels};
  const double r_max = opts.r_max > 0.0
                           ? opts.r_max
                           : std::max({10.0, v0.negligible_radius(), v1.negligible_radius()});
  switch (region) {
    case Region::low:
      return integrate_linear(pb, 0.0, eps, eps, qo);
    case Region::high:
      return integrate_to_infinity(pb, eps, r_max, qo);
    case Region::full: {
      QuadratureResult lo = integrate_linear(pb, 0.0, 0.5 * eps, eps, qo);
      const QuadratureResult hi = integrate_to_infinity(pb, 0.5 * eps, r_max, qo);
      lo.value += hi.value;
      lo.error += hi.error;
      lo.panels += hi.panels;
      return lo;
    }
  }
  return {0.0, 0.0, 0};
}

double radial_norm(const SymbolTriple& sym, int n, const RadialProfile& v0,
                   const RadialProfile& v1, const NormRequest& req, const SpectralOptions& opts) {
  if (req.j != 0 && req.j != 1) throw InvalidParameters("time-derivative order j must be 0 or 1");
  if (req.gamma < 0) throw InvalidParameters("gamma must be nonnegative");
  const double area = sphere_area(n);
  const int power = 2 * req.gamma + n - 1;
  std::function<double(double)> weight = [area, power](double r) {
    return area * std::pow(r, power);
  };
  ModeWeights w;
  (req.j == 0 ? w.v : w.vt) = weight;
  const double sq = mode_integral(sym, n, req.t, v0, v1, w, req.region, opts).value;
  return std::sqrt(std::max(sq, 0.0));
}

SplitNorms parseval_split_check(const SymbolTriple& sym, int n, const RadialProfile& v0,
                                const RadialProfile& v1, int j, int gamma, double t,
                                const SpectralOptions& opts) {
  SplitNorms s{};
  s.low = radial_norm(sym, n, v0, v1, {j, gamma, Region::low, t}, opts);
  s.high = radial_norm(sym, n, v0, v1, {j, gamma, Region::high, t}, opts);
  s.full = radial_norm(sym, n, v0, v1, {j, gamma, Region::full, t}, opts);
  return s;
}

double lemma1_ratio(int n, double a, double beta, double k, double eps, double t) {
  if (n < 1) throw PreconditionViolation("dimension n must be at least 1");
  if (!(k > -n)) throw PreconditionViolation("k must exceed -n");
  if (!(a > 0.0) || !(beta > 0.0) || !(eps > 0.0) || !(t >= 0.0)) {
    throw PreconditionViolation("a, beta, eps must be positive and t nonnegative");
  }
  const double m = n + k;
  // r = ε s^{1/m} turns r^{m−1} dr into ε^m/m ds on [0, 1]
  const double scale = a * std::pow(eps, beta) * t;
  const double p = beta / m;
  auto f = [&](double s) { return std::exp(-scale * std::pow(s, p)); };
  std::vector<double> bp{0.0, 1.0};
  for (int j = 1; j <= 60; ++j) bp.push_back(std::ldexp(1.0, -j));
  if (scale > 1.0) {
    const double s_star = std::pow(1.0 / scale, 1.0 / p);
    for (int j = -20; j <= 20; ++j) {
      const double x = s_star * std::ldexp(1.0, j);
      if (x > 0.0 && x < 1.0) bp.push_back(x);
    }
  }
  const auto res = adaptive_integrate(
      [&](double lo, double hi) { return gauss_kronrod15(f, lo, hi); }, bp, {1e-11, 0.0, 100000});
  return std::pow(1.0 + t, m / beta) * sphere_area(n) * std::pow(eps, m) / m * res.value;
}

double lemma1_radius(int n, double a, double beta, double k) {
  if (!(k > -n) || !(a > 0.0) || !(beta > 0.0)) {
    throw PreconditionViolation("lemma1_radius needs k > -n, a > 0, beta > 0");
  }
  return std::pow((n + k) / (a * beta), 1.0 / beta);
}

}  // namespace fraclap
