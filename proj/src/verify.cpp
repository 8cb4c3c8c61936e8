#include "fraclap/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "fraclap/energy.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/oracle.hpp"
#include "fraclap/spectra.hpp"
#include "json.hpp"

namespace fraclap {

namespace {

NamedValues describe(const CanonicalParams& p, const std::string& prefix = "") {
  return {{prefix + "delta", p.delta}, {prefix + "alpha", p.alpha}, {prefix + "theta", p.theta},
          {"n", static_cast<double>(p.n)}};
}

NamedValues describe(const VerifyConfig& cfg) {
  NamedValues out = describe(effective_canonical(cfg.sym, Region::low, cfg.n), "low_");
  const auto hi = describe(effective_canonical(cfg.sym, Region::high, cfg.n), "high_");
  out.insert(out.end(), hi.begin(), hi.end() - 1);
  out.push_back({"seed", static_cast<double>(cfg.seed)});
  return out;
}

// Runs f(i) for i < count on `threads` workers; results land by index so the
// reduction order never depends on scheduling.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) f(i);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::max(1u, threads); ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  void offer(double v, std::size_t i) {
    if (std::isnan(value)) return;
    if (std::isnan(v) || v > value) {
      value = v;
      index = i;
    }
  }
};

VerifyRecord finish(std::string check, NamedValues params, NamedValues worst_point, double value,
                    double tol, std::size_t samples) {
  return {std::move(check), std::move(params), std::move(worst_point), value, tol, samples,
          value <= tol, ""};
}

complex gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

}  // namespace

VerifyRecord verify_root_brackets(const CanonicalParams& p, std::size_t points) {
  if (!p.real_branch()) {
    return {"root_brackets", describe(p), {}, 0.0, 1e-12, 0, true,
            "skipped: alpha <= 2 theta (complex roots)"};
  }
  const auto sym = SymbolTriple::canonical(p);
  const double eps = epsilon_threshold(p);
  const double s2 = std::sqrt(2.0);
  Worst w;
  std::vector<double> rs(points);
  for (std::size_t k = 0; k < points; ++k) {
    // log-spaced in (ε·1e−6, ε)
    const double r = eps * std::pow(10.0, -6.0 * (1.0 - (k + 1.0) / (points + 1.0)));
    rs[k] = r;
    const auto e = eigenvalues(sym, r);
    const double lp = e.lambda_plus.real(), lm = e.lambda_minus.real();
    const double slow = std::pow(r, 2 * (p.alpha - p.theta));
    const double fast = std::pow(r, 2 * p.theta);
    const double gap = lp - lm;
    const double excess = std::max({
        (-4 * (2 - s2) * slow - lp) / slow, (lp + slow) / slow,
        (-fast - lm) / fast, (lm + 0.25 * (1 + 1 / s2) * fast) / fast,
        (fast / (2 * s2) - gap) / fast, (gap - fast) / fast,
        e.lambda_plus.imag() != 0.0 ? 1.0 : -1.0});
    w.offer(excess, k);
  }
  return finish("root_brackets", describe(p), {{"r", rs[w.index]}, {"eps", eps}},
                w.value, 1e-12, points);
}

VerifyRecord verify_complex_envelope(const CanonicalParams& p, std::size_t points) {
  if (p.real_branch() || p.theta == 0.0) {
    return {"complex_envelope", describe(p), {}, 0.0, 1e-12, 0, true,
            "skipped: needs alpha <= 2 theta with theta > 0"};
  }
  const auto sym = SymbolTriple::canonical(p);
  const double eps = epsilon_threshold(p);
  const double ts[] = {0.0, 0.5, 3.0, 40.0, 1e3};
  Worst w;
  std::vector<std::pair<double, double>> at;
  for (std::size_t k = 0; k < points; ++k) {
    const double r = eps * std::pow(10.0, -5.0 * (1.0 - (k + 1.0) / (points + 1.0)));
    const auto e = eigenvalues(sym, r);
    for (double t : ts) {
      const double env = std::exp(-std::pow(r, 2 * p.theta) * t / 4);
      const double m = std::max(std::abs(std::exp(e.lambda_plus * t)),
                                std::abs(std::exp(e.lambda_minus * t)));
      at.emplace_back(r, t);
      w.offer(env > 0 ? m / env - 1.0 : (m > 0 ? 1.0 : -1.0), at.size() - 1);
    }
  }
  return finish("complex_envelope", describe(p),
                {{"r", at[w.index].first}, {"t", at[w.index].second}}, w.value, 1e-12, at.size());
}

VerifyRecord verify_vieta(const VerifyConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ 0x11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Worst w;
  std::vector<double> rs(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const double r = std::pow(10.0, -4.0 + 7.0 * u(rng));
    rs[i] = r;
    const double a = cfg.sym.inertia(r), b = cfg.sym.damping(r), c = cfg.sym.stiffness(r);
    const auto e = eigenvalues(cfg.sym, r);
    const complex sum = e.lambda_plus + e.lambda_minus, prod = e.lambda_plus * e.lambda_minus;
    const double scale_sum = std::max(b / a, std::abs(e.lambda_plus) + std::abs(e.lambda_minus));
    const double es = scale_sum > 0 ? std::abs(sum + b / a) / scale_sum : std::abs(sum);
    const double ep = std::abs(prod - c / a) / (c / a);
    const double re = std::max(e.lambda_plus.real(), e.lambda_minus.real());
    w.offer(std::max({es, ep, re > 0 ? 1.0 : 0.0}), i);
  }
  return finish("vieta", describe(cfg), {{"r", rs[w.index]}}, w.value, 1e-12, cfg.samples);
}

VerifyRecord verify_rho_bounds(const VerifyConfig& cfg) {
  const auto p = effective_canonical(cfg.sym, Region::high, cfg.n);
  const double eps = split_epsilon(cfg.sym, cfg.n);
  std::mt19937_64 rng(cfg.seed ^ 0x22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Worst w;
  std::vector<double> rs(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const double r = eps * std::pow(10.0, 5.0 * u(rng));
    rs[i] = r;
    const double q = rho(p, eps, r);
    const double b1 = std::pow(r, 2 * p.theta) / (2 * (1 + std::pow(r, 2 * p.delta)));
    const double b2 = std::pow(r, 2 * p.alpha - 2 * p.theta) / 2;
    w.offer(std::max({q / b1 - 1.0, q / b2 - 1.0, q < 0 ? 1.0 : -1.0}), i);
  }
  return finish("rho_bounds", describe(cfg), {{"r", rs[w.index]}, {"eps", eps}}, w.value, 1e-13,
                cfg.samples);
}

std::vector<VerifyRecord> verify_energy(const VerifyConfig& cfg) {
  const auto p = effective_canonical(cfg.sym, Region::high, cfg.n);
  const double eps = split_epsilon(cfg.sym, cfg.n);
  struct Sample {
    double t, r, sigma;
    complex v0, v1;
  };
  std::mt19937_64 rng(cfg.seed ^ 0x33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Sample> samples(cfg.samples);
  for (auto& s : samples) {
    s.t = cfg.t_max * u(rng);
    s.r = eps * std::pow(10.0, 2.0 * u(rng));
    s.sigma = -4.0 + 6.0 * u(rng);
    s.v0 = gaussian_complex(rng);
    s.v1 = gaussian_complex(rng);
  }
  constexpr int kChecks = 5;
  std::vector<std::array<double, kChecks>> metric(samples.size());
  parallel_for(samples.size(), cfg.threads, [&](std::size_t i) {
    const auto& s = samples[i];
    const auto e = energy_point(p, s.sigma, cfg.sym, s.v0, s.v1, s.t, s.r);
    auto& m = metric[i];
    const bool negligible = e.e1 < 1e-300;  // decayed into subnormals
    m[0] = e.f > 0 ? (e.rr - 0.5 * e.f) / e.f : (e.rr > 0 ? 1.0 : -1.0);
    m[1] = negligible ? -1.0 : (0.5 * e.e1 - e.e) / e.e1;
    const double t1[] = {s.t};
    m[2] = check_diff_inequality(p, s.sigma, cfg.sym, s.v0, s.v1, s.r, t1);
    m[3] = check_energy_identity(p, s.sigma, cfg.sym, s.v0, s.v1, s.r, t1);
    m[4] = dissipation_identity_check(cfg.sym, s.v0, s.v1, s.r, s.t);
  });
  const char* names[kChecks] = {"r_le_half_f", "e_ge_half_e1", "diff_inequality",
                                "energy_identity", "dissipation_identity"};
  const double tols[kChecks] = {1e-12, 1e-12, 1e-6, 1e-6, 1e-7};
  std::vector<VerifyRecord> out;
  for (int c = 0; c < kChecks; ++c) {
    Worst w;
    for (std::size_t i = 0; i < samples.size(); ++i) w.offer(metric[i][c], i);
    const auto& s = samples.empty() ? Sample{} : samples[w.index];
    out.push_back(finish(names[c], describe(cfg),
                         {{"t", s.t}, {"r", s.r}, {"sigma", s.sigma}, {"eps", eps}},
                         samples.empty() ? 0.0 : w.value, tols[c], samples.size()));
  }
  return out;
}

VerifyRecord verify_e1f(const VerifyConfig& cfg) {
  const auto p = effective_canonical(cfg.sym, Region::high, cfg.n);
  if (p.delta > p.theta) {
    return {"e1_le_cf", describe(cfg), {}, 0.0, 1e-12, 0, true,
            "skipped: theta < delta (regularity loss), bound does not apply"};
  }
  const double eps = split_epsilon(cfg.sym, cfg.n);
  const double c = e1f_constant(p, eps);
  std::mt19937_64 rng(cfg.seed ^ 0x44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Worst w;
  NamedValues at;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const double t = cfg.t_max * u(rng), r = eps * std::pow(10.0, 2.0 * u(rng));
    const double sigma = -4.0 + 6.0 * u(rng);
    const complex v0 = gaussian_complex(rng), v1 = gaussian_complex(rng);
    const auto e = energy_point(p, sigma, cfg.sym, v0, v1, t, r);
    if (e.e1 < 1e-300) continue;
    const double m = e.f > 0 ? (e.e1 - c * e.f) / (c * e.f) : 1.0;
    if (m > w.value) {
      w.value = m;
      at = {{"t", t}, {"r", r}, {"sigma", sigma}, {"C", c}};
    }
  }
  return finish("e1_le_cf", describe(cfg), at, std::isinf(w.value) ? 0.0 : w.value, 1e-12,
                cfg.samples);
}

VerifyRecord verify_kernels(const VerifyConfig& cfg, std::size_t points) {
  std::mt19937_64 rng(cfg.seed ^ 0x55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<OraclePoint> grid;
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back({std::pow(10.0, -2.0 + 3.0 * u(rng)), 10.0 * u(rng)});
  }
  const auto rep = kernel_agreement(cfg.sym, grid, cfg.threads);
  return finish("kernel_agreement", describe(cfg), {{"r", rep.worst.r}, {"t", rep.worst.t}},
                rep.max_rel_error, 1e-8, grid.size());
}

VerifyRecord verify_q_ratio_bound(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed ^ 0x66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  NamedValues at;
  for (std::size_t c = 0; c < cases; ++c) {
    const int n = 1 + static_cast<int>(3 * u(rng));
    const double k = -n + 1e-3 + (4.0 + n - 1e-3) * u(rng);
    const double beta = 0.5 + 3.5 * u(rng);
    const double a = 0.1 + 1.9 * u(rng);
    const double eps = lemma1_radius(n, a, beta, k);
    const double q1 = lemma1_ratio(n, a, beta, k, eps, 1.0);
    for (int i = 0; i <= 60; ++i) {
      const double t = std::pow(10.0, 6.0 * i / 60.0);
      const double q = lemma1_ratio(n, a, beta, k, eps, t) / q1;
      if (q > worst) {
        worst = q;
        at = {{"n", double(n)}, {"k", k}, {"beta", beta}, {"a", a}, {"eps", eps}, {"t", t}};
      }
    }
  }
  return finish("q_ratio_boundedness", {{"seed", static_cast<double>(seed)}}, at, worst, 10.0,
                cases);
}

std::vector<VerifyRecord> run_verification(const VerifyConfig& cfg) {
  if (cfg.samples == 0) throw InvalidParameters("samples must be positive");
  const auto low = effective_canonical(cfg.sym, Region::low, cfg.n);
  std::vector<VerifyRecord> out;
  out.push_back(verify_root_brackets(low, cfg.samples));
  out.push_back(verify_complex_envelope(low, std::max<std::size_t>(cfg.samples / 5, 1)));
  out.push_back(verify_vieta(cfg));
  out.push_back(verify_rho_bounds(cfg));
  for (auto& r : verify_energy(cfg)) out.push_back(std::move(r));
  out.push_back(verify_e1f(cfg));
  out.push_back(verify_kernels(cfg));
  out.push_back(verify_q_ratio_bound(cfg.seed));
  return out;
}

bool all_pass(const std::vector<VerifyRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

std::string verification_json(const std::string& label, const std::vector<VerifyRecord>& records) {
  using json = nlohmann::ordered_json;
  auto obj = [](const NamedValues& v) {
    json o = json::object();
    for (const auto& [k, x] : v) o[k] = x;
    return o;
  };
  json root;
  root["label"] = label;
  root["pass"] = all_pass(records);
  json arr = json::array();
  for (const auto& r : records) {
    json j;
    j["check"] = r.check;
    j["params"] = obj(r.params);
    j["worst_point"] = obj(r.worst_point);
    j["violation"] = std::isfinite(r.violation) ? json(r.violation) : json(nullptr);
    j["pass"] = r.pass;
    j["tolerance"] = r.tolerance;
    j["samples"] = r.samples;
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  root["records"] = std::move(arr);
  return root.dump(2);
}

}  // namespace fraclap
