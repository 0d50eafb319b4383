#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spherefrac/cli.hpp"
#include "spherefrac/integral_geometry.hpp"
#include "spherefrac/limits.hpp"

namespace spherefrac::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
  double param, value, error, target, deviation;
  std::string method;
};

struct Verdict {
  std::string name;
  bool passed;
  double observed;
  double threshold;
  std::string rule;
};

struct Record {
  std::string subcommand;
  Json config;
  std::vector<Row> rows;
  std::optional<LimitReport> report;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
};

struct Config {
  int n = 2;
  std::string set;
  std::string function;
  double s = kNaN;
  std::vector<double> s_grid, t_grid, alpha_grid;
  std::size_t samples = 1000000;
  std::size_t planes = 0;
  double tol = kNaN;
  std::string seed;
  std::string out;
  std::string format = "csv";
  std::string method = "auto";
  bool normalized = false;
  double p = 1.0;
  double threshold = kNaN;
  double lipschitz = kNaN;
  double boundary_measure = kNaN;
  std::string kernel = "one";
};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(fmt17(x)); }

double rel_dev(double value, double target) {
  if (!std::isfinite(target) || !std::isfinite(value)) return kNaN;
  const double d = std::abs(value - target);
  return target != 0.0 ? d / std::abs(target) : d;
}

// ---------------------------------------------------------------------------------------------
// Serialization

std::string to_csv(const Record& r) {
  std::string s = "param,value,error,target,deviation\n";
  auto line = [&](double a, double b, double c, double d, double e) {
    s += fmt17(a) + "," + fmt17(b) + "," + fmt17(c) + "," + fmt17(d) + "," + fmt17(e) + "\n";
  };
  for (const auto& row : r.rows) line(row.param, row.value, row.error, row.target, row.deviation);
  return s;
}

std::string timestamp() {
  std::time_t t;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  else
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_json(const Record& r) {
  const std::string hash = hex64(fnv1a64(r.config.dump()));
  Json j;
  j["experiment_id"] = r.subcommand + "-" + hash.substr(0, 8);
  j["timestamp"] = timestamp();
  j["config_hash"] = hash;
  j["config"] = r.config;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"param", num(row.param)},
                    {"value", num(row.value)},
                    {"error", num(row.error)},
                    {"target", num(row.target)},
                    {"deviation", num(row.deviation)},
                    {"method", row.method}});
  j["rows"] = rows;
  if (r.report) {
    const auto& L = *r.report;
    j["limit_report"] = {{"extrapolated", num(L.extrapolated)},
                         {"extrapolated_error", num(L.extrapolated_error)},
                         {"fit_order", num(L.fit_order)},
                         {"target", num(L.target)},
                         {"target_error", num(L.target_error)},
                         {"deviation", num(L.deviation)}};
  } else {
    j["limit_report"] = nullptr;
  }
  Json v = Json::array();
  bool all = true;
  for (const auto& x : r.verdicts) {
    v.push_back({{"name", x.name},
                 {"passed", x.passed},
                 {"observed", num(x.observed)},
                 {"threshold", num(x.threshold)},
                 {"rule", x.rule}});
    all = all && x.passed;
  }
  j["verdicts"] = v;
  j["passed"] = all;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------------------------
// Validation helpers

SetHandle load_set(const Config& c, std::vector<std::string>& warnings) {
  if (c.set.empty()) throw DomainError("--set is required");
  SetHandle E = parse_set(c.set, &warnings);
  if (E.dim() != c.n)
    throw DomainError("--set lives on S^" + std::to_string(E.dim()) + " but --n is " + std::to_string(c.n));
  if (!parts_disjoint(E, 10000, RandomStream(0x5EEDD15u)))
    throw DomainError("--set: union parts overlap (disjointness is required)");
  return E;
}

ParsedFunction load_function(const Config& c, std::vector<std::string>& warnings) {
  if (c.function.empty()) throw DomainError("--function is required");
  ParsedFunction f = parse_function(c.function, &warnings);
  if (f.dim >= 0 && f.dim != c.n)
    throw DomainError("--function lives on S^" + std::to_string(f.dim) + " but --n is " + std::to_string(c.n));
  return f;
}

void require_n(const Config& c, int min_n) {
  if (c.n < min_n) throw DomainError("--n must be >= " + std::to_string(min_n));
}

double require_s(const Config& c) {
  if (std::isnan(c.s)) throw DomainError("--s is required");
  check_s(c.s);
  return c.s;
}

double threshold_or(const Config& c, double def) { return std::isnan(c.threshold) ? def : c.threshold; }

std::vector<Row> to_rows(const std::vector<SweepRow>& rows, double target) {
  std::vector<Row> out;
  for (const auto& r : rows) out.push_back({r.param, r.value, r.error, target, rel_dev(r.value, target), r.method});
  return out;
}

void add_limit_row(Record& rec, double param) {
  const auto& L = *rec.report;
  rec.rows.push_back({param, L.extrapolated, L.extrapolated_error, L.target, L.deviation, "extrapolated"});
}

Verdict deviation_verdict(const LimitReport& L, double threshold) {
  if (!std::isfinite(L.target)) return {"limit_deviation", false, kNaN, threshold, "target unavailable"};
  return {"limit_deviation", L.deviation < threshold, L.deviation, threshold, "deviation < threshold"};
}

// ---------------------------------------------------------------------------------------------
// Subcommands

Record cmd_perimeter(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 1);
  const double s = require_s(c);
  const SetHandle E = load_set(c, warn);
  PerimeterOptions po;
  po.method = method_from_string(c.method);
  po.samples = c.samples;
  po.tol = c.tol;
  po.kernel.normalized = c.normalized;
  po.rng = rng;
  const PerimeterResult r = perimeter(c.n, E, s, po);
  Record rec;
  double target = kNaN;
  if (s == -static_cast<double>(c.n))
    if (auto a = E.exact_measure()) target = perimeter_minus_n(c.n, *a);
  rec.rows.push_back({s, r.value, r.error, target, rel_dev(r.value, target), to_string(r.method)});
  if (std::isfinite(target)) {
    const double rel = std::isnan(c.tol) ? 1e-8 : c.tol;
    const double bound = std::max(3.0 * r.error, rel * std::abs(target));
    rec.verdicts.push_back({"s_minus_n_identity", std::abs(r.value - target) <= bound, std::abs(r.value - target),
                            bound, "|value - a(omega - a)| <= max(3 error, tol |target|)"});
  }
  return rec;
}

Record cmd_isoperimetric(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 1);
  const double s = require_s(c);
  const SetHandle E = load_set(c, warn);
  PerimeterOptions po;
  po.method = method_from_string(c.method);
  po.samples = c.samples;
  po.tol = c.tol;
  po.kernel.normalized = c.normalized;
  po.rng = rng;
  const IsoperimetricComparison cmp = isoperimetric_compare(c.n, E, s, po);
  Record rec;
  rec.rows.push_back({s, cmp.set_value.value, cmp.set_value.error, cmp.cap_value, cmp.z,
                      to_string(cmp.set_value.method)});
  rec.notes.push_back("deviation column holds the z-score (P_s(E) - P_s(C)) / combined error");
  rec.notes.push_back("measure = " + fmt17(cmp.measure));
  if (s == -static_cast<double>(c.n)) {
    rec.verdicts.push_back({"equality_at_minus_n", std::abs(cmp.z) <= 3.0, std::abs(cmp.z), 3.0, "|z| <= 3"});
  } else {
    const bool ok = cmp.expected_sign && std::abs(cmp.z) > 3.0;
    rec.verdicts.push_back({"strict_gap", ok, cmp.z, 3.0,
                            s > -static_cast<double>(c.n) ? "z > 3 (E above the cap)" : "z < -3 (E below the cap)"});
  }
  return rec;
}

Record cmd_sweep_s1(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 1);
  const SetHandle E = load_set(c, warn);
  SweepOptions so;
  so.samples = c.samples;
  so.tol = c.tol;
  so.rng = rng;
  if (!std::isnan(c.boundary_measure)) so.boundary_measure = c.boundary_measure;
  const SweepResult r = sweep_s_to_1(c.n, E, c.s_grid, method_from_string(c.method), so);
  Record rec;
  rec.rows = to_rows(r.rows, r.report.target);
  rec.report = r.report;
  add_limit_row(rec, 1.0);
  rec.verdicts.push_back(deviation_verdict(r.report, threshold_or(c, 0.02)));
  // Monotone approach is only an empirical expectation for cap-oracle rows, so it is a note, not a verdict.
  bool up = true, down = true, oracle = true;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    oracle = oracle && r.rows[k].method == to_string(Method::CapOracle);
    if (k == 0) continue;
    up = up && r.rows[k].value >= r.rows[k - 1].value;
    down = down && r.rows[k].value <= r.rows[k - 1].value;
  }
  if (oracle && !up && !down) {
    rec.notes.push_back("flag: cap-oracle rows are not monotone in s");
    warn.push_back("cap-oracle rows are not monotone in s");
  }
  return rec;
}

Record cmd_sweep_sinf(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 1);
  const SetHandle E = load_set(c, warn);
  const SweepResult r = sweep_s_to_minus_inf(c.n, E, c.t_grid, c.samples, rng);
  Record rec;
  rec.rows = to_rows(r.rows, r.report.target);
  rec.report = r.report;
  add_limit_row(rec, kInf);
  rec.verdicts.push_back(deviation_verdict(r.report, threshold_or(c, 0.03)));
  return rec;
}

Record cmd_seminorm_sweep(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 1);
  const ParsedFunction f = load_function(c, warn);
  const SweepResult r = sweep_seminorm_to_minus_inf(c.n, f.f, c.p, c.t_grid, c.samples, rng);
  Record rec;
  rec.rows = to_rows(r.rows, r.report.target);
  rec.report = r.report;
  add_limit_row(rec, kInf);
  const double thr = threshold_or(c, 0.05);
  if (r.report.target != 0.0) {
    rec.verdicts.push_back(deviation_verdict(r.report, thr));
  } else {
    // Zero target: the limit must vanish relative to the first (largest-scale) row.
    double scale = 0.0;
    for (const auto& row : r.rows) scale = std::max(scale, std::abs(row.value));
    const double bound = std::max(3.0 * r.report.extrapolated_error, thr * scale);
    rec.verdicts.push_back({"limit_vanishes", std::abs(r.report.extrapolated) <= bound,
                            std::abs(r.report.extrapolated), bound, "|L| <= max(3 error, threshold max|row|)"});
  }
  return rec;
}

Record cmd_crofton(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 2);
  const SetHandle E = load_set(c, warn);
  const std::size_t M = c.planes ? c.planes : c.samples;
  const CroftonResult r = crofton_estimate(c.n, E, M, rng);
  Record rec;
  double target = r.target ? *r.target : kNaN;
  if (!std::isnan(c.boundary_measure)) target = crofton_target(c.n, c.boundary_measure);
  const Estimate& m = r.mean_crossings;
  rec.rows.push_back({static_cast<double>(c.n), m.value(), m.std_error(), target, rel_dev(m.value(), target), "mc"});
  rec.notes.push_back("degenerate circles redrawn: " + std::to_string(r.resampled));
  rec.verdicts.push_back({"even_crossings", !r.odd_count_seen, r.odd_count_seen ? 1.0 : 0.0, 0.0,
                          "every non-degenerate circle crosses an even number of times"});
  if (std::isfinite(target)) {
    const double z = m.std_error() > 0.0 ? std::abs(m.value() - target) / m.std_error()
                                          : (m.value() == target ? 0.0 : kInf);
    rec.verdicts.push_back({"crofton_mean", z <= 3.0, z, 3.0, "|mean - (2/omega_n) H^{n-1}(boundary)| <= 3 error"});
  }
  return rec;
}

Record cmd_bp_check(const Config& c, const RandomStream& rng, std::vector<std::string>&) {
  require_n(c, 2);
  PairKernel f;
  if (c.kernel == "one")
    f = [](const Vec&, const Vec&) { return 1.0; };
  else if (c.kernel == "poly2")
    f = [](const Vec& x, const Vec& y) {
      const double d = 1.0 + x.dot(y);
      return d * d;
    };
  else
    throw DomainError("--kernel must be 'one' or 'poly2' (got '" + c.kernel + "')");
  const std::size_t M = c.planes ? c.planes : 1000;
  const BpResult r = bp_check(c.n, f, c.samples, M, rng);
  Record rec;
  const double comb = std::hypot(r.lhs.std_error(), r.rhs.std_error());
  const double diff = std::abs(r.lhs.value() - r.rhs.value());
  rec.rows.push_back({static_cast<double>(c.n), r.lhs.value(), r.lhs.std_error(), r.rhs.value(),
                      comb > 0.0 ? diff / comb : rel_dev(r.lhs.value(), r.rhs.value()), "mc"});
  rec.notes.push_back("target column holds the great-circle side; its error is " + fmt17(r.rhs.std_error()));
  const double bound = 3.0 * comb + 1e-9 * std::abs(r.lhs.value());
  rec.verdicts.push_back({"bp_identity", diff <= bound, diff, bound, "|lhs - rhs| <= 3 combined error"});
  return rec;
}

Record cmd_beta_check(const Config& c, const RandomStream&, std::vector<std::string>&) {
  require_n(c, 1);
  const SweepResult r = beta_asymptotic_check(c.n, c.p, c.t_grid);
  Record rec;
  rec.rows = to_rows(r.rows, r.report.target);
  rec.report = r.report;
  add_limit_row(rec, kInf);
  rec.verdicts.push_back(deviation_verdict(r.report, threshold_or(c, 1e-3)));
  return rec;
}

Record cmd_s0_check(const Config& c, const RandomStream& rng, std::vector<std::string>& warn) {
  require_n(c, 1);
  const ParsedFunction f = load_function(c, warn);
  double L = c.lipschitz;
  if (std::isnan(L)) {
    if (!f.lipschitz) throw DomainError("--lipschitz is required for this function");
    L = *f.lipschitz;
  }
  const VanishingResult r = s_to_zero_vanishing_check(c.n, f.f, L, c.s_grid, c.samples, rng);
  Record rec;
  for (const auto& row : r.rows)
    rec.rows.push_back({row.param, row.value, row.error, 0.0, r.scale > 0.0 ? row.value / r.scale : kNaN, row.method});
  rec.notes.push_back("deviation column holds value / (L omega_{n+1}^2 pi)");
  rec.verdicts.push_back({"monotone_decay", r.monotone, kNaN, 3.0, "non-increasing within 3 combined errors"});
  const double thr = threshold_or(c, 0.05);
  rec.verdicts.push_back({"final_small", r.rows.back().value < thr * r.scale, r.rows.back().value,
                          thr * r.scale, "last row < threshold L omega_{n+1}^2 pi"});
  return rec;
}

Record cmd_profile(const Config& c, const RandomStream&, std::vector<std::string>&) {
  require_n(c, 1);
  const double s = require_s(c);
  const ProfileResult r = isoperimetric_profile(c.n, s, c.alpha_grid, c.tol);
  Record rec;
  for (const auto& row : r.rows) rec.rows.push_back({row.param, row.value, row.error, kNaN, kNaN, row.method});
  double mx = 0.0;
  for (const auto& row : r.rows) mx = std::max(mx, row.value);
  rec.verdicts.push_back({"gamma_vanishes", r.vanishes, r.rows.back().value, 0.1 * mx, "last gamma < 10% of max"});
  return rec;
}

Json canonical_config(const std::string& sub, const Config& c, std::uint64_t seed, const std::string& set_canon,
                      const std::string& fn_canon) {
  Json j;
  j["subcommand"] = sub;
  j["n"] = c.n;
  if (!set_canon.empty()) j["set"] = set_canon;
  if (!fn_canon.empty()) j["function"] = fn_canon;
  if (!std::isnan(c.s)) j["s"] = c.s;
  if (!c.s_grid.empty()) j["s_grid"] = c.s_grid;
  if (!c.t_grid.empty()) j["t_grid"] = c.t_grid;
  if (!c.alpha_grid.empty()) j["alpha_grid"] = c.alpha_grid;
  j["samples"] = c.samples;
  if (c.planes) j["planes"] = c.planes;
  if (!std::isnan(c.tol)) j["tol"] = c.tol;
  j["seed"] = seed;
  if (sub == "perimeter" || sub == "isoperimetric" || sub == "sweep-s1") j["method"] = c.method;
  if (sub == "perimeter" || sub == "isoperimetric") j["normalized"] = c.normalized;
  if (sub == "seminorm-sweep" || sub == "beta-check") j["p"] = c.p;
  if (!std::isnan(c.threshold)) j["threshold"] = c.threshold;
  if (!std::isnan(c.lipschitz)) j["lipschitz"] = c.lipschitz;
  if (!std::isnan(c.boundary_measure)) j["boundary_measure"] = c.boundary_measure;
  if (sub == "bp-check") j["kernel"] = c.kernel;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional perimeters and seminorms on the unit sphere"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "sphere dimension");
    sub->add_option("--samples", c.samples, "Monte Carlo samples");
    sub->add_option("--tol", c.tol, "relative quadrature tolerance");
    sub->add_option("--seed", c.seed, "seed, decimal or 0x-hex (default SPHEREFRAC_SEED or 0xC0FFEE)");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threshold", c.threshold, "verdict threshold");
  };
  auto add_set = [&](CLI::App* sub) { sub->add_option("--set", c.set, "set description")->required(); };
  auto add_function = [&](CLI::App* sub) {
    sub->add_option("--function", c.function, "linear:<e> | abs:<e> | const:<c> | indicator:<set>")->required();
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", c.method, "auto, mc, cap_oracle, circle_exact or closed_form")
        ->check(CLI::IsMember({"auto", "mc", "cap_oracle", "circle_exact", "closed_form"}));
  };
  auto add_grid = [&](CLI::App* sub, const char* name, std::vector<double>& g) {
    sub->add_option(name, g, "comma-separated grid")->delimiter(',');
  };

  std::vector<std::pair<CLI::App*, Record (*)(const Config&, const RandomStream&, std::vector<std::string>&)>> subs;

  auto* perim = app.add_subcommand("perimeter", "P_s(E) by the best available method");
  add_common(perim);
  add_set(perim);
  add_method(perim);
  perim->add_option("--s", c.s, "fractional order s < 1")->required();
  perim->add_flag("--normalized", c.normalized, "use the normalized distance d/pi");
  subs.push_back({perim, cmd_perimeter});

  auto* iso = app.add_subcommand("isoperimetric", "compare P_s(E) with the cap of equal measure");
  add_common(iso);
  add_set(iso);
  add_method(iso);
  iso->add_option("--s", c.s, "fractional order s < 1")->required();
  iso->add_flag("--normalized", c.normalized, "use the normalized distance d/pi");
  subs.push_back({iso, cmd_isoperimetric});

  auto* s1 = app.add_subcommand("sweep-s1", "(1-s) P_s(E) as s -> 1");
  add_common(s1);
  add_set(s1);
  add_method(s1);
  add_grid(s1, "--s-grid", c.s_grid);
  s1->add_option("--boundary-measure", c.boundary_measure, "H^{n-1} of the boundary when not known in closed form");
  subs.push_back({s1, cmd_sweep_s1});

  auto* sinf = app.add_subcommand("sweep-sinf", "t^n P~_{-t}(E) as t -> infinity");
  add_common(sinf);
  add_set(sinf);
  add_grid(sinf, "--t-grid", c.t_grid);
  subs.push_back({sinf, cmd_sweep_sinf});

  auto* semi = app.add_subcommand("seminorm-sweep", "t^n seminorm of f at s = -t as t -> infinity");
  add_common(semi);
  add_function(semi);
  add_grid(semi, "--t-grid", c.t_grid);
  semi->add_option("--p", c.p, "integrability exponent p >= 1");
  subs.push_back({semi, cmd_seminorm_sweep});

  auto* crof = app.add_subcommand("crofton", "mean great-circle crossings of the boundary");
  add_common(crof);
  add_set(crof);
  crof->add_option("--planes", c.planes, "number of random great circles (default --samples)");
  crof->add_option("--boundary-measure", c.boundary_measure, "H^{n-1} of the boundary when not known in closed form");
  subs.push_back({crof, cmd_crofton});

  auto* bp = app.add_subcommand("bp-check", "both sides of the Blaschke-Petkantschin identity");
  add_common(bp);
  bp->add_option("--planes", c.planes, "number of random great circles (default 1000)");
  bp->add_option("--kernel", c.kernel, "one or poly2 ((1 + x.y)^2)");
  subs.push_back({bp, cmd_bp_check});

  auto* beta = app.add_subcommand("beta-check", "t^n B(n, tp - n + 1) -> (n-1)!/p^n");
  add_common(beta);
  add_grid(beta, "--t-grid", c.t_grid);
  beta->add_option("--p", c.p, "exponent p > 0");
  subs.push_back({beta, cmd_beta_check});

  auto* s0 = app.add_subcommand("s0-check", "|s| seminorm -> 0 as s -> 0-");
  add_common(s0);
  add_function(s0);
  add_grid(s0, "--s-grid", c.s_grid);
  s0->add_option("--lipschitz", c.lipschitz, "Lipschitz constant of f");
  subs.push_back({s0, cmd_s0_check});

  auto* prof = app.add_subcommand("profile", "gamma_{n,s,alpha} = P_s(C_alpha)/alpha");
  add_common(prof);
  prof->add_option("--s", c.s, "fractional order s < 1")->required();
  add_grid(prof, "--alpha-grid", c.alpha_grid);
  subs.push_back({prof, cmd_profile});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::string sub_name;
  Record (*handler)(const Config&, const RandomStream&, std::vector<std::string>&) = nullptr;
  for (const auto& [sub, h] : subs)
    if (sub->parsed()) {
      sub_name = sub->get_name();
      handler = h;
    }

  std::uint64_t seed = 0xC0FFEE;
  if (!c.seed.empty()) {
    const auto v = parse_seed(c.seed);
    if (!v) {
      err << "error: --seed: expected a decimal or 0x-hex integer (got '" << c.seed << "')\n";
      return kUsage;
    }
    seed = *v;
  } else if (const char* env = std::getenv("SPHEREFRAC_SEED")) {
    const auto v = parse_seed(env);
    if (!v) {
      err << "error: SPHEREFRAC_SEED: expected a decimal or 0x-hex integer (got '" << env << "')\n";
      return kUsage;
    }
    seed = *v;
  }

  // Resolve default grids so the record and its hash state what was actually run.
  if (c.s_grid.empty() && sub_name == "sweep-s1") c.s_grid = default_s1_grid();
  if (c.s_grid.empty() && sub_name == "s0-check") c.s_grid = default_s0_grid();
  if (c.t_grid.empty() && (sub_name == "sweep-sinf" || sub_name == "seminorm-sweep")) c.t_grid = default_t_grid();
  if (c.t_grid.empty() && sub_name == "beta-check") c.t_grid = default_beta_grid();
  if (c.alpha_grid.empty() && sub_name == "profile" && c.n >= 1)
    for (double q : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999})
      c.alpha_grid.push_back(q * sphere_surface(c.n));

  Record rec;
  std::vector<std::string> warnings;
  try {
    if (!c.set.empty() && sub_name != "bp-check" && sub_name != "beta-check" && sub_name != "profile") {
      // Parse once up front so config errors surface before any computation.
      (void)parse_set(c.set);
    }
    rec = handler(c, RandomStream(seed), warnings);
  } catch (const ParseError& e) {
    err << "error: --set/--function: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure in " << sub_name << ": " << e.what() << "\n";
    return kNumerical;
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  rec.subcommand = sub_name;
  std::string set_canon, fn_canon;
  if (!c.set.empty()) set_canon = parse_set(c.set).render();
  if (!c.function.empty()) fn_canon = parse_function(c.function).canonical;
  rec.config = canonical_config(sub_name, c, seed, set_canon, fn_canon);

  const std::string payload = c.format == "json" ? to_json(rec) : to_csv(rec);
  if (c.out.empty()) {
    out << payload;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "error: cannot open --out file '" << c.out << "'\n";
      return kUsage;
    }
    f << payload;
  }

  bool pass = true;
  for (const auto& v : rec.verdicts) {
    if (!v.passed) err << "verdict failed: " << v.name << " (observed " << fmt17(v.observed) << ", threshold "
                       << fmt17(v.threshold) << "; " << v.rule << ")\n";
    pass = pass && v.passed;
  }
  return pass ? kOk : kVerdict;
}

}  // namespace spherefrac::cli
