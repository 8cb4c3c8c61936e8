#include "fraclap/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fraclap/errors.hpp"

namespace fraclap {

CurveQuery CurveQuery::norm(SymbolTriple sym, int n, RadialProfile v0, RadialProfile v1, int j,
                            int gamma) {
  if (j < 0 || j > 1) throw InvalidParameters("j must be 0 or 1");
  if (gamma < 0) throw InvalidParameters("gamma must be >= 0");
  return CurveQuery{Quantity::norm, std::move(sym), n, std::move(v0), std::move(v1), j,
                    gamma, Region::full, std::nullopt, 0.0, {}};
}

CurveQuery CurveQuery::hf_energy(const CanonicalParams& p, double sigma, SymbolTriple sym, int n,
                                 RadialProfile v0, RadialProfile v1) {
  return CurveQuery{Quantity::hf_energy, std::move(sym), n, std::move(v0), std::move(v1), 0, 0,
                    Region::high, p, sigma, {}};
}

double CurveQuery::evaluate(double t) const {
  if (quantity == Quantity::norm) {
    return radial_norm(sym, n, v0, v1, NormRequest{j, gamma, region, t}, opts);
  }
  return hf_energy_integral(*p, sigma, sym, n, v0, v1, t, opts);
}

std::string CurveQuery::describe() const {
  std::ostringstream os;
  if (quantity == Quantity::norm) {
    os << "norm j=" << j << " gamma=" << gamma;
  } else {
    os << "hf_energy sigma=" << sigma;
  }
  os << " n=" << n << " symbols=" << sym.to_string() << " v0=" << v0.describe()
     << " v1=" << v1.describe();
  return os.str();
}

void DecayCurve::validate() const {
  if (times.size() != values.size()) throw DegenerateInput("times and values differ in length");
  if (times.size() < 8) throw DegenerateInput("a curve needs at least 8 points");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) throw DegenerateInput("times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw DegenerateInput("times must increase");
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw DegenerateInput("values must be finite and non-negative");
    }
  }
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRACLAP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> geometric_grid(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0.0 && t_max > t_min)) throw InvalidParameters("need 0 < t_min < t_max");
  if (points < 2) throw InvalidParameters("need at least 2 points");
  std::vector<double> out(points);
  const double ratio = std::log(t_max / t_min);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = t_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

DecayCurve generate_curve(const CurveQuery& q, double t_min, double t_max, std::size_t points,
                          unsigned threads) {
  if (points < 8) throw InvalidParameters("a curve needs at least 8 points");
  DecayCurve c{geometric_grid(t_min, t_max, points), std::vector<double>(points, 0.0),
               q.describe()};
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), points);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      try {
        c.values[i] = q.evaluate(c.times[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return c;
}

void write_curve_csv(const DecayCurve& c, std::ostream& out) {
  out << "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", c.times[i], c.values[i]);
    out << buf;
  }
}

void write_curve_csv(const DecayCurve& c, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  write_curve_csv(c, f);
}

DecayCurve read_curve_csv(std::istream& in) {
  DecayCurve c;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == "t,value") continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DegenerateInput("line " + std::to_string(lineno) + ": expected t,value");
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      const double t = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      const double v = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
      c.times.push_back(t);
      c.values.push_back(v);
    } catch (const std::logic_error&) {
      throw DegenerateInput("line " + std::to_string(lineno) + ": not a number pair");
    }
  }
  return c;
}

DecayCurve read_curve_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  DecayCurve c = read_curve_csv(f);
  c.meta = path;
  return c;
}

std::string to_string(FitClass c) {
  switch (c) {
    case FitClass::polynomial: return "polynomial";
    case FitClass::exponential: return "exponential";
    case FitClass::flat: return "flat";
  }
  return "?";
}

namespace {

struct Line {
  double slope;
  double r_squared;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - my - slope * (x[i] - mx);
    ss_res += e * e;
  }
  const double r2 = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return {slope, r2};
}

}  // namespace

RateFit fit_loglog(const DecayCurve& c, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InvalidParameters("tail_fraction must lie in (0, 1]");
  }
  if (c.times.size() != c.values.size()) throw DegenerateInput("times and values differ in length");
  const std::size_t total = c.times.size();
  const auto count = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total) - 1e-9));
  if (count < 6) throw PreconditionViolation("fewer than 6 points in the tail window");
  const std::size_t start = total - count;
  for (std::size_t i = start; i < total; ++i) {
    if (std::isnan(c.values[i]) || c.values[i] < 0.0 || !std::isfinite(c.times[i])) {
      throw DegenerateInput("NaN or negative value in the tail window");
    }
    if (i > start && !(c.times[i] > c.times[i - 1])) throw DegenerateInput("times must increase");
  }
  std::vector<double> x, y;
  bool underflow = false;
  for (std::size_t i = start; i < total; ++i) {
    if (c.values[i] > 0.0 && std::isfinite(c.values[i])) {
      if (underflow) throw DegenerateInput("value reappears after underflow");
      x.push_back(std::log1p(c.times[i]));
      y.push_back(std::log(c.values[i]));
    } else if (c.values[i] == 0.0) {
      underflow = true;
    } else {
      throw DegenerateInput("infinite value in the tail window");
    }
  }
  RateFit out{0.0, 0.0, 1.0, 0.0, FitClass::flat, count};
  if (x.empty()) {
    // zero window: underflow if the curve was positive earlier
    for (std::size_t i = 0; i < start; ++i) {
      if (c.values[i] > 0.0) out.classification = FitClass::exponential;
    }
    return out;
  }
  if (x.size() >= 2) {
    const Line l = least_squares(x, y);
    out.slope = l.slope;
    out.r_squared = l.r_squared;
  }
  out.exponent = -out.slope;
  if (x.size() >= 3) {
    double sum = 0;
    for (std::size_t i = 0; i + 2 < x.size(); ++i) {
      const double s0 = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
      const double s1 = (y[i + 2] - y[i + 1]) / (x[i + 2] - x[i + 1]);
      const double decades = 0.5 * (x[i + 2] - x[i]) / std::log(10.0);
      sum += (s1 - s0) / decades;
    }
    out.curvature = sum / static_cast<double>(x.size() - 2);
  }
  if (underflow || out.curvature < kConcavityThreshold) {
    out.classification = FitClass::exponential;
  } else if (std::abs(out.slope) < kFlatThreshold) {
    out.classification = FitClass::flat;
  } else {
    out.classification = FitClass::polynomial;
  }
  return out;
}

}  // namespace fraclap
