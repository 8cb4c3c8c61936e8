#include "fraclap/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/fit.hpp"
#include "fraclap/rates.hpp"
#include "fraclap/verify.hpp"
#include "json.hpp"

namespace fraclap {

namespace {

using json = nlohmann::ordered_json;

struct SymbolFlags {
  std::string preset;
  std::optional<double> delta, alpha, theta;
  std::string sym_a, sym_b, sym_c;
  int n = 3;
  bool literal_delta0 = false;
};

struct Selection {
  std::string target = "v";
  int gamma = 0;
  std::optional<double> beta;
};

void add_symbol_flags(CLI::App* app, SymbolFlags& f) {
  app->add_option("--preset", f.preset, "wave | plate | plate_no_ri | ibq");
  app->add_option("--delta", f.delta, "exponent of the inertia term (explicit symbols)");
  app->add_option("--alpha", f.alpha, "exponent of the stiffness term");
  app->add_option("--theta", f.theta, "damping exponent (also selects the preset's theta)");
  app->add_option("--symbol-a", f.sym_a, "coefficient of v_tt as w:e,w:e,...");
  app->add_option("--symbol-b", f.sym_b, "coefficient of v_t as w:e,... (omit for none)");
  app->add_option("--symbol-c", f.sym_c, "coefficient of v as w:e,...");
  app->add_option("--n", f.n, "space dimension")->check(CLI::PositiveNumber);
  app->add_flag("--literal-delta0", f.literal_delta0, "wave preset with a = 1 + r^0 = 2");
}

void add_selection_flags(CLI::App* app, Selection& s) {
  app->add_option("--target", s.target, "v | vt | grad_v | lap_v | grad_vt");
  app->add_option("--gamma", s.gamma, "number of space derivatives")->check(CLI::NonNegativeNumber);
  app->add_option("--beta", s.beta, "regularity-loss parameter")->check(CLI::PositiveNumber);
}

struct Resolved {
  std::optional<std::string> preset;
  double theta = 0.0;
  SymbolTriple sym;
  int n;
  std::string label;
};

Resolved resolve_symbols(const SymbolFlags& f) {
  const bool explicit_powers = f.delta || f.alpha;
  const bool explicit_general = !f.sym_a.empty() || !f.sym_b.empty() || !f.sym_c.empty();
  const int modes = (!f.preset.empty()) + explicit_powers + explicit_general;
  if (modes != 1) {
    throw ConfigError("give exactly one of --preset, --delta/--alpha/--theta, --symbol-a/b/c");
  }
  if (f.literal_delta0 && f.preset != "wave") throw ConfigError("--literal-delta0 needs --preset wave");
  if (!f.preset.empty()) {
    if (!f.theta) throw ConfigError("--preset needs --theta");
    auto sym = preset_symbols(f.preset, *f.theta, f.literal_delta0);
    return {f.preset, *f.theta, std::move(sym), f.n, f.preset};
  }
  if (explicit_powers) {
    if (!f.delta || !f.alpha || !f.theta) throw ConfigError("--delta, --alpha and --theta go together");
    try {
      const CanonicalParams p(*f.delta, *f.alpha, *f.theta, f.n);
      return {std::nullopt, p.theta, SymbolTriple::canonical(p), f.n, "canonical"};
    } catch (const InvalidParameters& e) {
      throw ConfigError(e.what());
    }
  }
  if (f.sym_a.empty() || f.sym_c.empty()) throw ConfigError("--symbol-a and --symbol-c are required");
  if (f.theta) throw ConfigError("--theta conflicts with --symbol-b");
  try {
    std::optional<GeneralSymbol> b;
    if (!f.sym_b.empty()) b = GeneralSymbol::parse(f.sym_b);
    SymbolTriple sym(GeneralSymbol::parse(f.sym_a), std::move(b), GeneralSymbol::parse(f.sym_c));
    return {std::nullopt, 0.0, std::move(sym), f.n, "general"};
  } catch (const InvalidParameters& e) {
    throw ConfigError(e.what());
  }
}

struct TargetSpec {
  Target target;
  int gamma;
};

TargetSpec resolve_target(const Selection& s) {
  if (s.target == "grad_v") return {Target::v, 1};
  if (s.target == "lap_v") return {Target::v, 2};
  if (s.target == "grad_vt") return {Target::vt, 1};
  return {parse_target(s.target), s.gamma};
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string exact_or(const std::optional<Rational>& q, double x) {
  return q ? q->to_string() : fmt(x);
}

json term_json(const TermRate& t) {
  if (t.exponential) return "exponential";
  return t.exponent;
}

json prediction_json(const DecayPrediction& d) {
  json j;
  j["kind"] = d.kind == DecayKind::exponential ? "exponential" : "polynomial";
  j["exponent"] = d.kind == DecayKind::exponential ? json(nullptr) : json(d.exponent);
  j["exponent_exact"] = d.exact_exponent ? json(d.exact_exponent->to_string()) : json(nullptr);
  j["per_term"] = {{"v0_low", term_json(d.v0_low)}, {"v1_low", term_json(d.v1_low)},
                   {"high", term_json(d.high)}};
  j["required_s"] = d.required_s;
  j["required_r"] = d.required_r;
  j["s_exact"] = d.exact_s ? json(d.exact_s->to_string()) : json(nullptr);
  j["r_exact"] = d.exact_r ? json(d.exact_r->to_string()) : json(nullptr);
  j["beta"] = d.beta ? json(*d.beta) : json(nullptr);
  j["case_label"] = d.case_label;
  return j;
}

std::vector<PresetEntry> rate_entries(const Resolved& r, const std::optional<TargetSpec>& only,
                                      std::optional<double> beta) {
  std::vector<PresetEntry> rows;
  if (r.preset && !only) {
    const Preset table = preset(*r.preset, r.theta, r.n);
    for (const auto& e : table.entries) rows.push_back({e.norm, e.target, e.gamma, {}, ""});
  } else {
    const TargetSpec t = only.value_or(TargetSpec{Target::v, 0});
    std::string norm = "||";
    if (t.gamma > 0) norm += "D^" + std::to_string(t.gamma) + " ";
    norm += t.target == Target::v ? "v||" : "v_t||";
    rows.push_back({norm, t.target, t.gamma, {}, ""});
  }
  for (auto& e : rows) {
    try {
      e.prediction = combined_rate(RateQuery::general(r.sym, r.n, e.target, e.gamma, beta));
    } catch (const HypothesisNotMet& err) {
      e.unmet = err.what();
    }
  }
  return rows;
}

int cmd_rates(const SymbolFlags& f, const Selection& s, bool target_given, bool as_json,
              std::ostream& out) {
  const Resolved r = resolve_symbols(f);
  std::optional<TargetSpec> only;
  if (target_given || !r.preset) only = resolve_target(s);
  const auto rows = rate_entries(r, only, s.beta);
  if (as_json) {
    json j;
    j["preset"] = r.preset ? json(*r.preset) : json(nullptr);
    j["theta"] = r.theta;
    j["n"] = r.n;
    j["symbols"] = r.sym.to_string();
    json arr = json::array();
    for (const auto& e : rows) {
      json row;
      row["norm"] = e.norm;
      row["target"] = to_string(e.target);
      row["gamma"] = e.gamma;
      if (e.prediction) {
        const json pj = prediction_json(*e.prediction);
        for (const auto& [k, v] : pj.items()) row[k] = v;
      } else {
        row["unmet"] = e.unmet;
      }
      arr.push_back(std::move(row));
    }
    j["entries"] = std::move(arr);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "# " << r.label << " n=" << r.n << " symbols: " << r.sym.to_string() << "\n";
  std::vector<std::vector<std::string>> cells{
      {"norm", "exponent", "exact", "v0_low", "v1_low", "high", "s", "r", "beta", "case"}};
  for (const auto& e : rows) {
    if (!e.prediction) {
      cells.push_back({e.norm, "-", "-", "-", "-", "-", "-", "-", "-", e.unmet});
      continue;
    }
    const auto& d = *e.prediction;
    const bool ex = d.kind == DecayKind::exponential;
    cells.push_back({e.norm, ex ? "exp" : fmt(d.exponent),
                     ex ? "-" : exact_or(d.exact_exponent, d.exponent),
                     d.v0_low.to_string(), d.v1_low.to_string(), d.high.to_string(),
                     exact_or(d.exact_s, d.required_s), exact_or(d.exact_r, d.required_r),
                     d.beta ? exact_or(d.exact_beta, *d.beta) : "-", d.case_label});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c + 1 < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << "\n";
  }
  return kExitOk;
}

struct SimFlags {
  std::string profile = "gaussian:1";
  std::string v1_profile;
  std::string quantity = "norm";
  std::optional<double> sigma;
  double t_min = 100.0, t_max = 10000.0;
  std::size_t points = 24;
  std::string out_path;
};

int cmd_simulate(const SymbolFlags& f, const Selection& s, const SimFlags& sim, unsigned threads,
                 std::ostream& out) {
  const Resolved r = resolve_symbols(f);
  const TargetSpec t = resolve_target(s);
  const RadialProfile v0 = parse_profile(sim.profile, r.n);
  const RadialProfile v1 = sim.v1_profile.empty() ? v0 : parse_profile(sim.v1_profile, r.n);
  if (!(sim.t_min > 0 && sim.t_max > sim.t_min)) throw ConfigError("need 0 < --tmin < --tmax");
  if (sim.points < 8) throw ConfigError("--points must be at least 8");
  std::optional<CurveQuery> q;
  if (sim.quantity == "norm") {
    q = CurveQuery::norm(r.sym, r.n, v0, v1, t.target == Target::vt ? 1 : 0, t.gamma);
  } else if (sim.quantity == "hf_energy") {
    const auto high = effective_canonical(r.sym, Region::high, r.n);
    const double sigma = sim.sigma.value_or(norm_sigma(high, t.target, t.gamma));
    q = CurveQuery::hf_energy(high, sigma, r.sym, r.n, v0, v1);
  } else {
    throw ConfigError("--quantity must be norm or hf_energy");
  }
  const DecayCurve c = generate_curve(*q, sim.t_min, sim.t_max, sim.points, threads);
  if (sim.out_path.empty()) {
    write_curve_csv(c, out);
  } else {
    write_curve_csv(c, sim.out_path);
  }
  return kExitOk;
}

struct FitFlags {
  std::string in;
  double tail = 0.5;
  std::optional<double> expect;
  double tol = 0.05;
};

int cmd_fit(const SymbolFlags& f, const Selection& s, const FitFlags& ff, bool as_json,
            std::ostream& out) {
  if (ff.in.empty()) throw ConfigError("fit needs --in");
  const DecayCurve c = read_curve_csv(ff.in);
  c.validate();
  std::optional<double> expect = ff.expect;
  std::optional<DecayPrediction> predicted;
  const bool has_symbols = !f.preset.empty() || f.delta || f.alpha || !f.sym_a.empty();
  if (!expect && has_symbols) {
    const Resolved r = resolve_symbols(f);
    const TargetSpec t = resolve_target(s);
    predicted = combined_rate(RateQuery::general(r.sym, r.n, t.target, t.gamma, s.beta));
    if (predicted->kind == DecayKind::polynomial) expect = predicted->exponent;
  }
  const RateFit fit = fit_loglog(c, ff.tail);
  bool pass = true;
  if (expect) {
    pass = fit.classification == FitClass::polynomial && std::abs(fit.exponent - *expect) <= ff.tol;
  } else if (predicted && predicted->kind == DecayKind::exponential) {
    pass = fit.classification == FitClass::exponential;
  }
  if (as_json) {
    json j;
    j["input"] = ff.in;
    j["slope"] = fit.slope;
    j["exponent"] = fit.exponent;
    j["r_squared"] = fit.r_squared;
    j["curvature"] = fit.curvature;
    j["classification"] = to_string(fit.classification);
    j["tail_points"] = fit.tail_points;
    j["expected"] = expect ? json(*expect) : json(nullptr);
    j["tolerance"] = ff.tol;
    j["pass"] = pass;
    out << j.dump(2) << "\n";
  } else {
    out << "exponent " << fmt(fit.exponent) << "  r^2 " << fmt(fit.r_squared) << "  class "
        << to_string(fit.classification) << "  tail " << fit.tail_points << "\n";
    if (expect) out << "expected " << fmt(*expect) << " +- " << fmt(ff.tol) << "\n";
    out << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitOk : kExitFailure;
}

int cmd_verify(const SymbolFlags& f, std::size_t samples, std::uint64_t seed, unsigned threads,
               const std::string& out_path, std::ostream& out) {
  const Resolved r = resolve_symbols(f);
  if (samples == 0) throw ConfigError("--samples must be positive");
  VerifyConfig cfg{r.sym, r.n, r.label, samples, seed, threads};
  const auto records = run_verification(cfg);
  const std::string report = verification_json(r.label, records);
  if (out_path.empty()) {
    out << report << "\n";
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open '" + out_path + "'");
    file << report << "\n";
    for (const auto& rec : records) {
      out << (rec.pass ? "pass  " : "FAIL  ") << rec.check << "  " << fmt(rec.violation) << "\n";
    }
  }
  return all_pass(records) ? kExitOk : kExitFailure;
}

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + item + "' in profile");
    }
  }
  return out;
}

}  // namespace

RadialProfile parse_profile(const std::string& text, int n) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "zero") return RadialProfile::zero();
    if (kind == "table") {
      if (rest.empty()) throw ConfigError("table profile needs a path");
      return RadialProfile::from_csv(rest);
    }
    const auto v = split_numbers(rest);
    if (kind == "gaussian" && (v.size() == 1 || v.size() == 2)) {
      return RadialProfile::gaussian(v[0], v.size() == 2 ? v[1] : 1.0);
    }
    if (kind == "annulus" && (v.size() == 2 || v.size() == 3)) {
      return RadialProfile::annulus(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
    }
    if (kind == "power_tail" && v.size() == 2) return RadialProfile::power_tail(v[0], v[1], n);
  } catch (const InvalidParameters& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unrecognized profile '" + text + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decay rates of a v_tt + b v_t + c v = 0 with fractional symbols", "fraclap"};
  app.require_subcommand(1);
  app.footer(
      "Presets (theta ranges): wave [0,1], plate [0,2], plate_no_ri [0,2], ibq [0,1].\n"
      "Examples:\n"
      "  fraclap rates --preset wave --theta 0 --n 3\n"
      "  fraclap rates --preset plate --theta 0.5 --n 4 --json\n"
      "  fraclap rates --preset ibq --theta 1 --n 3\n"
      "  fraclap rates --preset plate_no_ri --theta 1.5 --n 5\n"
      "  fraclap rates --preset wave --theta 0.75 --n 3 --literal-delta0\n"
      "  fraclap simulate --preset wave --theta 0 --n 3 --points 12 --tmin 100 --tmax 1000\n"
      "  fraclap verify --preset plate --theta 0.5 --n 2 --samples 10000 --seed 7\n"
      "Exit codes: 0 ok, 1 verification/fit failure or numerical error, 2 configuration error.\n"
      "FRACLAP_THREADS sets the default of --threads.");

  SymbolFlags sf;
  Selection sel;
  bool as_json = false;
  unsigned threads = 0;

  auto* rates = app.add_subcommand("rates", "print the predicted decay table");
  add_symbol_flags(rates, sf);
  add_selection_flags(rates, sel);
  rates->add_flag("--json", as_json, "JSON instead of an aligned table");

  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "write a decay curve as CSV");
  add_symbol_flags(simulate, sf);
  add_selection_flags(simulate, sel);
  simulate->add_option("--profile", sim.profile, "datum profile (v0, and v1 unless --v1-profile)");
  simulate->add_option("--v1-profile", sim.v1_profile, "profile of v1");
  simulate->add_option("--quantity", sim.quantity, "norm | hf_energy");
  simulate->add_option("--sigma", sim.sigma, "order of the hf_energy integral");
  simulate->add_option("--tmin", sim.t_min, "first time");
  simulate->add_option("--tmax", sim.t_max, "last time");
  simulate->add_option("--points", sim.points, "number of times (geometric grid)");
  simulate->add_option("--out", sim.out_path, "output CSV (default stdout)");
  simulate->add_option("--threads", threads, "worker threads");

  FitFlags ff;
  auto* fit = app.add_subcommand("fit", "fit a decay exponent to a curve CSV");
  add_symbol_flags(fit, sf);
  add_selection_flags(fit, sel);
  fit->add_option("--in", ff.in, "curve CSV (t,value)");
  fit->add_option("--tail", ff.tail, "fraction of the grid used for the fit");
  fit->add_option("--expect", ff.expect, "expected exponent");
  fit->add_option("--tol", ff.tol, "tolerance on the exponent");
  fit->add_flag("--json", as_json, "JSON output");

  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "run the inequality suite, JSON report");
  add_symbol_flags(verify, sf);
  verify->add_option("--samples", samples, "random samples per check");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--threads", threads, "worker threads");
  verify->add_option("--out", verify_out, "write the JSON report here");
  verify->add_flag("--json", as_json, "accepted for symmetry; the report is always JSON");

  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*rates) return cmd_rates(sf, sel, rates->count("--target") > 0 || rates->count("--gamma") > 0, as_json, out);
    if (*simulate) return cmd_simulate(sf, sel, sim, resolve_threads(threads), out);
    if (*fit) return cmd_fit(sf, sel, ff, as_json, out);
    if (*verify) return cmd_verify(sf, samples, seed, resolve_threads(threads), verify_out, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ThetaOutOfRange& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InadmissibleExponents& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParameters& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fraclap
