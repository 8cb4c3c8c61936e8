#include "fraclap/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

#include "fraclap/errors.hpp"

namespace fraclap {

double rk4_step_limit(const SymbolTriple& sym, double r) {
  const Eigenpair e = eigenvalues(sym, r);
  return 0.1 / std::max({1.0, std::abs(e.lambda_plus), std::abs(e.lambda_minus)});
}

ModeState rk4_mode(const SymbolTriple& sym, double r, complex v0hat, complex v1hat, double t_end,
                   double dt) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameters("t_end must be >= 0");
  if (!(dt > 0.0)) throw InvalidParameters("dt must be positive");
  const double limit = rk4_step_limit(sym, r);
  if (dt > limit * (1.0 + 1e-12)) {
    throw StepTooLarge("dt = " + std::to_string(dt) + " exceeds " + std::to_string(limit));
  }
  if (t_end == 0.0) return {v0hat, v1hat, 0.0};
  const double a = sym.inertia(r), b = sym.damping(r), c = sym.stiffness(r);
  const double pb = b / a, pc = c / a;
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
  const double h = t_end / static_cast<double>(steps);
  complex v = v0hat, w = v1hat;
  auto acc = [&](complex x, complex y) { return -pb * y - pc * x; };
  for (long long i = 0; i < steps; ++i) {
    const complex k1v = w, k1w = acc(v, w);
    const complex k2v = w + 0.5 * h * k1w, k2w = acc(v + 0.5 * h * k1v, w + 0.5 * h * k1w);
    const complex k3v = w + 0.5 * h * k2w, k3w = acc(v + 0.5 * h * k2v, w + 0.5 * h * k2w);
    const complex k4v = w + h * k3w, k4w = acc(v + h * k3v, w + h * k3w);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }
  return {v, w, t_end};
}

namespace {

double state_gap(const ModeState& x, const ModeState& y) {
  return std::abs(x.v - y.v) + std::abs(x.vt - y.vt);
}

double state_size(const ModeState& x) { return std::abs(x.v) + std::abs(x.vt); }

}  // namespace

ModeState rk4_reference(const SymbolTriple& sym, double r, complex v0hat, complex v1hat,
                        double t_end) {
  if (t_end == 0.0) return {v0hat, v1hat, 0.0};
  double dt = std::min(rk4_step_limit(sym, r), t_end);
  ModeState coarse = rk4_mode(sym, r, v0hat, v1hat, t_end, dt);
  for (int halving = 0; halving < 16; ++halving) {
    dt *= 0.5;
    const ModeState fine = rk4_mode(sym, r, v0hat, v1hat, t_end, dt);
    const double gap = state_gap(fine, coarse);
    coarse = ModeState{(16.0 * fine.v - coarse.v) / 15.0, (16.0 * fine.vt - coarse.vt) / 15.0,
                       t_end};
    if (gap <= 1e-11 * state_size(fine) || gap == 0.0) return coarse;
    coarse = fine;
  }
  return coarse;
}

AgreementReport kernel_agreement(const SymbolTriple& sym, std::span<const OraclePoint> grid,
                                 unsigned threads) {
  AgreementReport rep{0.0, {0.0, 0.0}, grid.size()};
  std::mutex m;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      const auto [r, t] = grid[i];
      double worst = 0.0;
      for (const auto& [d0, d1] : {std::pair{complex(1), complex(0)}, std::pair{complex(0), complex(1)}}) {
        const ModeValue exact = solution_hat(sym, t, r, d0, d1);
        const ModeState ref = rk4_reference(sym, r, d0, d1, t);
        const double size = state_size(ref);
        const double gap = std::abs(exact.v - ref.v) + std::abs(exact.vt - ref.vt);
        worst = std::max(worst, size > 0 ? gap / size : gap);
      }
      std::lock_guard lock(m);
      if (worst > rep.max_rel_error) {
        rep.max_rel_error = worst;
        rep.worst = grid[i];
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::max(1u, threads); ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rep;
}

}  // namespace fraclap
