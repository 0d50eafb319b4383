// Acceptance runner. `acceptance <id>` runs one criterion, no argument runs all of them.
// Each criterion prints one PASS/FAIL line; indented lines below it show the observed numbers.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spherefrac/cli.hpp"
#include "spherefrac/integral_geometry.hpp"
#include "spherefrac/limits.hpp"

using namespace spherefrac;

namespace {

// Pinned tolerances.
constexpr double kMinusNRel = 1e-8;
constexpr double kSigmas = 3.0;
constexpr double kCircleRel = 1e-6;
constexpr double kLemmaLimitRel = 0.005;
constexpr double kS1CapRel = 0.02;
constexpr double kS1UnionRel = 0.05;
constexpr double kConcentrationRel = 0.005;
constexpr double kBetaRel = 1e-3;
constexpr double kTSweepRel = 0.03;
constexpr double kSeminormRel = 0.05;
constexpr double kEvenRatio = 0.01;
constexpr double kVanishingRel = 0.05;

constexpr std::size_t kMillion = 1000000;

struct Check {
  std::string what;
  bool passed;
  std::string observed;
};

class Report {
 public:
  void add(std::string what, bool passed, std::string observed) {
    checks_.push_back({std::move(what), passed, std::move(observed)});
  }
  bool passed() const {
    for (const auto& c : checks_)
      if (!c.passed) return false;
    return !checks_.empty();
  }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::vector<Check> checks_;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Vec pole(int n) {
  Vec v = Vec::Zero(n + 1);
  v(n) = 1.0;
  return v;
}

Vec random_rotation_of(const Vec& x, const Eigen::MatrixXd& Q) { return Q * x; }

Eigen::MatrixXd random_orthogonal(int dim, RandomStream& rng) {
  Eigen::MatrixXd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd d = qr.matrixQR().diagonal();
  for (int j = 0; j < dim; ++j)
    if (d(j) < 0) Q.col(j) *= -1.0;
  return Q;
}

// ---------------------------------------------------------------------------------------------

Report c1() {
  Report R;
  for (double r : {0.3, 0.9, kPi / 2, 2.2, 2.9}) {
    const double a = cap_area(2, r), want = a * (4 * kPi - a), got = perimeter_cap(2, -2.0, r);
    R.add(fmt("cap oracle r=%.4f", r), rel(got, want) <= kMinusNRel, fmt("rel %.2e", rel(got, want)));
  }
  const double r = 0.9, a = cap_area(2, r), want = a * (4 * kPi - a);
  const Estimate e = perimeter_mc(2, SetHandle::cap(pole(2), r), -2.0, kMillion, RandomStream(101));
  const double z = std::abs(e.value() - want) / e.std_error();
  R.add("mc r=0.9 at 1e6", z <= kSigmas, fmt("%.6f vs %.6f, z %.2f", e.value(), want, z));
  return R;
}

Report c2() {
  Report R;
  int k = 0;
  for (int n : {2, 3})
    for (double s : {-4.0, -2.0, -0.5, 0.3, 0.7})
      for (double r : {0.5, kPi / 2, 2.0}) {
        const double o = perimeter_cap(n, s, r);
        const double oe = default_cap_tol(s) * std::abs(o);
        const Estimate e = perimeter_mc(n, SetHandle::cap(pole(n), r), s, kMillion, RandomStream(200 + k++));
        const double z = z_score(e.value(), e.std_error(), o, oe);
        R.add(fmt("n=%d s=%.1f r=%.3f", n, s, r), z <= kSigmas, fmt("oracle %.8g mc %.8g ± %.2g, z %.2f", o, e.value(), e.std_error(), z));
      }
  return R;
}

Report c3() {
  Report R;
  RandomStream rng(303);
  for (int c = 0; c < 10; ++c) {
    const int pieces = 1 + static_cast<int>(rng.uniform() * 3);
    // Cut points in random order split the circle into alternating arcs and gaps.
    std::vector<double> cuts;
    for (int i = 0; i < 2 * pieces; ++i) cuts.push_back(2 * kPi * rng.uniform());
    std::sort(cuts.begin(), cuts.end());
    std::vector<Arc> arcs;
    for (int i = 0; i < pieces; ++i) arcs.push_back({cuts[2 * i], cuts[2 * i + 1] - cuts[2 * i]});
    const ArcUnion E = ArcUnion::from_disjoint_arcs(arcs);
    for (double s : {-2.0, -0.5}) {
      const double exact = perimeter_circle_exact(E, s), brute = oracle::circle_midpoint(E, s);
      R.add(fmt("config %d (%d arcs) s=%.1f", c, pieces, s), rel(exact, brute) <= kCircleRel,
            fmt("exact %.12g oracle %.12g rel %.2e", exact, brute, rel(exact, brute)));
    }
  }
  return R;
}

Report c4() {
  Report R;
  const std::vector<double> grid = {0.9, 0.99, 0.999};
  const std::vector<Interval1D> E = {{0.0, 1.0}};
  const double inf = std::numeric_limits<double>::infinity();
  for (double eps : {inf, 0.5}) {
    std::vector<double> h, v, err;
    for (double s : grid) {
      h.push_back(1 - s);
      v.push_back((1 - s) * interval_perimeter_exact(E, -inf, inf, s, eps));
      err.push_back(0.0);
    }
    const LimitReport L = extrapolate_linear(h, v, err);
    R.add(std::isfinite(eps) ? "localized eps=0.5" : "full line", rel(L.extrapolated, 2.0) <= kLemmaLimitRel,
          fmt("limit %.6f rel %.2e", L.extrapolated, rel(L.extrapolated, 2.0)));
  }
  return R;
}

Report c5() {
  Report R;
  for (double r : {kPi / 2, 1.0}) {
    const SweepResult S = sweep_s_to_1(2, SetHandle::cap(pole(2), r), {0.9, 0.95, 0.99}, Method::CapOracle);
    const double want = omega(3) / omega(2) * 2 * kPi * std::sin(r);
    R.add(fmt("cap r=%.4f", r), rel(S.report.extrapolated, want) <= kS1CapRel && rel(S.report.target, want) < 1e-12,
          fmt("limit %.6f target %.6f rel %.2e", S.report.extrapolated, want, rel(S.report.extrapolated, want)));
  }
  const double r1 = 0.5, r2 = 0.8;
  const auto U = SetHandle::union_of({SetHandle::cap(pole(2), r1), SetHandle::cap(-pole(2), r2)});
  SweepOptions o;
  o.samples = kMillion;
  o.rng = RandomStream(505);
  const SweepResult S = sweep_s_to_1(2, U, {0.9, 0.95, 0.99}, Method::Mc, o);
  const double want = omega(3) / omega(2) * 2 * kPi * (std::sin(r1) + std::sin(r2));
  R.add("two-cap union via mc", rel(S.report.extrapolated, want) <= kS1UnionRel,
        fmt("limit %.5f ± %.3f target %.5f rel %.2e", S.report.extrapolated, S.report.extrapolated_error, want,
            rel(S.report.extrapolated, want)));
  return R;
}

Report c6() {
  Report R;
  RandomStream rng(606);
  int worst_ok = 0;
  double min_z_pos = std::numeric_limits<double>::infinity(), max_z_neg = -min_z_pos;
  for (int k = 0; k < 50; ++k) {
    const double r1 = 0.3 + 0.6 * rng.uniform(), r2 = 0.3 + 0.6 * rng.uniform();
    const Vec c1 = sample_uniform(2, rng);
    Vec c2;
    do c2 = sample_uniform(2, rng);
    while (geodesic_distance(c1, c2) < r1 + r2 + 0.2);
    const auto U = SetHandle::union_of({SetHandle::cap(c1, r1), SetHandle::cap(c2, r2)});
    bool ok = true;
    for (double s : {-1.0, 0.5, -4.0}) {
      PerimeterOptions o;
      o.samples = 200000;
      o.rng = RandomStream(606).split(100 * k + static_cast<std::uint64_t>(s + 10));
      const auto c = isoperimetric_compare(2, U, s, o);
      if (s > -2.0) {
        ok = ok && c.expected_sign && c.z > kSigmas;
        min_z_pos = std::min(min_z_pos, c.z);
      } else {
        ok = ok && c.set_value.value < c.cap_value;
        max_z_neg = std::max(max_z_neg, c.z);
      }
    }
    worst_ok += ok;
  }
  R.add("50 matched-measure two-cap unions", worst_ok == 50,
        fmt("%d/50 ordered; min z at s in {-1,0.5} %.1f, max z at s=-4 %.1f", worst_ok, min_z_pos, max_z_neg));
  return R;
}

Report c7() {
  Report R;
  const double want = 16 * kPi * kPi;
  const BpResult one = bp_check(2, [](const Vec&, const Vec&) { return 1.0; }, 1000, 100, RandomStream(707));
  R.add("f = 1", rel(one.lhs.value(), want) <= 1e-9 && rel(one.rhs.value(), want) <= 1e-9,
        fmt("lhs %.12g rhs %.12g target %.12g", one.lhs.value(), one.rhs.value(), want));
  auto f = [](const Vec& x, const Vec& y) { return std::pow(1.0 + x.dot(y), 2); };
  const BpResult sm = bp_check(2, f, kMillion, 1000, RandomStream(708));
  const double z = z_score(sm.lhs.value(), sm.lhs.std_error(), sm.rhs.value(), sm.rhs.std_error());
  R.add("f = (1 + x.y)^2", z <= kSigmas,
        fmt("lhs %.6g ± %.2g rhs %.6g ± %.2g z %.2f", sm.lhs.value(), sm.lhs.std_error(), sm.rhs.value(), sm.rhs.std_error(), z));
  return R;
}

Report c8() {
  Report R;
  constexpr std::size_t M = 100000;
  for (double r : {0.5, kPi / 2, 2.0}) {
    const CroftonResult c = crofton_estimate(2, SetHandle::cap(pole(2), r), M, RandomStream(808));
    const double want = 2 * std::sin(r);
    // A hemisphere meets every great circle twice, so its standard error is exactly zero.
    const double dev = std::abs(c.mean_crossings.value() - want), se = c.mean_crossings.std_error();
    const double z = se > 0.0 ? dev / se : (dev <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
    R.add(fmt("cap r=%.4f", r), dev <= kSigmas * se + 1e-12 && !c.odd_count_seen,
          fmt("mean %.5f ± %.2g target %.5f z %.2f", c.mean_crossings.value(), c.mean_crossings.std_error(), want, z));
  }
  RandomStream rng(809);
  const Eigen::MatrixXd Q = random_orthogonal(3, rng);
  std::vector<Vec> normals;
  std::vector<Eigen::Vector3d> normals3;
  for (double th : {0.0, 2 * kPi / 3 + 0.2, 4 * kPi / 3 - 0.1, 5.5}) {
    Vec u(3);
    u << std::cos(th), std::sin(th), -0.8;
    u = random_rotation_of(u.normalized(), Q);
    normals.push_back(u);
    normals3.push_back(Eigen::Vector3d(u));
  }
  const double perim = oracle::polygon_perimeter(normals3);
  const CroftonResult c = crofton_estimate(2, SetHandle::polytope(normals), M, RandomStream(810));
  const double want = crofton_target(2, perim);
  const double z = std::abs(c.mean_crossings.value() - want) / c.mean_crossings.std_error();
  R.add("rotated quadrilateral", z <= kSigmas && !c.odd_count_seen,
        fmt("mean %.5f ± %.2g oracle target %.5f z %.2f", c.mean_crossings.value(), c.mean_crossings.std_error(), want, z));
  return R;
}

Report c9() {
  Report R;
  const double q = antipodal_concentration_quad(2, 1.0, 1e4, kPi), want = 2 * std::pow(kPi, 3);
  R.add("concentration integral t=1e4", rel(q, want) <= kConcentrationRel, fmt("%.8g vs %.8g rel %.2e", q, want, rel(q, want)));
  const SweepResult b = beta_asymptotic_check(2, 1.0, default_beta_grid());
  R.add("beta asymptotic n=2 p=1", std::abs(b.report.extrapolated - 1.0) <= kBetaRel,
        fmt("limit %.8f", b.report.extrapolated));
  return R;
}

const SetHandle& hemisphere() {
  static const SetHandle H = SetHandle::cap(pole(2), kPi / 2);
  return H;
}

Report c10() {
  Report R;
  const SweepResult S = sweep_s_to_minus_inf(2, hemisphere(), {20, 40, 80}, kMillion, RandomStream(1010));
  const double want = 4 * std::pow(kPi, 4);
  R.add("hemisphere t^n P~", rel(S.report.extrapolated, want) <= kTSweepRel,
        fmt("limit %.5g ± %.2g target %.5g rel %.2e", S.report.extrapolated, S.report.extrapolated_error, want,
            rel(S.report.extrapolated, want)));
  const Vec e = pole(2);
  const SweepResult O = sweep_seminorm_to_minus_inf(2, [e](const Vec& x) { return x.dot(e); }, 1.0, {20, 40, 80},
                                                    kMillion, RandomStream(1011));
  const double odd = concentration_constant(2, 1.0) * 2 * 2 * kPi;
  R.add("odd seminorm f = x.e", rel(O.report.extrapolated, odd) <= kSeminormRel,
        fmt("limit %.5g ± %.2g target %.5g rel %.2e", O.report.extrapolated, O.report.extrapolated_error, odd,
            rel(O.report.extrapolated, odd)));
  return R;
}

Report c10_even() {
  Report R;
  const Vec e = pole(2);
  const SweepResult E = sweep_seminorm_to_minus_inf(2, [e](const Vec& x) { return std::abs(x.dot(e)); }, 1.0, {80},
                                                    kMillion, RandomStream(1012));
  const double odd = concentration_constant(2, 1.0) * 2 * 2 * kPi;
  const double ratio = E.rows.back().value / odd;
  R.add("even f = |x.e| at t=80 below 1% of odd target", ratio < kEvenRatio,
        fmt("row %.5g ± %.2g ratio %.4f", E.rows.back().value, E.rows.back().error, ratio));
  return R;
}

Report c11() {
  Report R;
  const Vec e = pole(2);
  const VanishingResult V = s_to_zero_vanishing_check(2, [e](const Vec& x) { return x.dot(e); }, 1.0,
                                                      default_s0_grid(), kMillion, RandomStream(1111));
  std::ostringstream rows;
  for (const auto& r : V.rows) rows << fmt("%g:%.4g ", r.param, r.value);
  R.add("monotone decrease", V.monotone, rows.str());
  const double last = V.rows.back().value;
  R.add("final value small", V.final_small && last < kVanishingRel * V.scale,
        fmt("%.4g vs %.4g", last, kVanishingRel * V.scale));
  return R;
}

Report c12() {
  Report R;
  RandomStream rng(1212);
  {
    // Complement symmetry: exact for the oracle, statistical for the union.
    double worst = 0.0;
    for (double r : {0.4, 1.1, 2.0})
      for (double s : {-3.0, -0.5, 0.6}) worst = std::max(worst, rel(perimeter_cap(2, s, r), perimeter_cap(2, s, kPi - r)));
    const auto U = SetHandle::union_of({SetHandle::cap(pole(2), 0.5), SetHandle::cap(-pole(2), 0.9)});
    const Estimate a = perimeter_mc(2, U, 0.3, 400000, RandomStream(1)), b = perimeter_mc(2, SetHandle::complement(U), 0.3, 400000, RandomStream(2));
    const double z = z_score(a.value(), a.std_error(), b.value(), b.std_error());
    R.add("complement symmetry", worst < 1e-6 && z <= kSigmas, fmt("oracle rel %.1e, union z %.2f", worst, z));
  }
  {
    const Eigen::MatrixXd Q = random_orthogonal(3, rng);
    const auto U = SetHandle::union_of({SetHandle::cap(pole(2), 0.5), SetHandle::cap(-pole(2), 0.9)});
    const auto V = SetHandle::union_of({SetHandle::cap(Q * pole(2), 0.5), SetHandle::cap(-(Q * pole(2)), 0.9)});
    const auto P = SetHandle::polytope({pole(2), Vec(Eigen::Vector3d(1, 0, 0))});
    const auto PQ = SetHandle::polytope({Q * pole(2), Q * Vec(Eigen::Vector3d(1, 0, 0))});
    double zmax = 0.0;
    for (auto [A, B] : {std::pair{U, V}, std::pair{P, PQ}}) {
      const Estimate a = perimeter_mc(2, A, -1.0, 400000, RandomStream(3)), b = perimeter_mc(2, B, -1.0, 400000, RandomStream(4));
      zmax = std::max(zmax, z_score(a.value(), a.std_error(), b.value(), b.std_error()));
    }
    R.add("rotation invariance", zmax <= kSigmas, fmt("max z %.2f", zmax));
  }
  {
    bool mono = true;
    double prev = 0.0;
    for (double s = -5.0; s <= 0.9; s += 0.5) {
      const double v = std::pow(kPi, 2 + s) * perimeter_cap(2, s, 1.0);
      mono = mono && v > prev;
      prev = v;
    }
    R.add("normalized kernel increasing in s", mono, fmt("last %.6g", prev));
  }
  {
    Estimate a, b, c;
    for (int i = 0; i < 1000; ++i) a.add(rng.normal());
    for (int i = 0; i < 37; ++i) b.add(3 + rng.normal());
    for (int i = 0; i < 5000; ++i) c.add(rng.uniform());
    const Estimate l = a.merged(b).merged(c), r = a.merged(b.merged(c));
    R.add("estimate merge associativity",
          l.samples() == r.samples() && rel(l.value(), r.value()) < 1e-12 && rel(l.std_error(), r.std_error()) < 1e-12,
          fmt("%.15g vs %.15g", l.value(), r.value()));
  }
  {
    std::vector<std::string> args = {"spherefrac", "sweep-s1", "--set", "union:cap:0,0,1:0.4+cap:0,0,-1:0.6",
                                     "--n", "2", "--method", "mc", "--samples", "100000"};
    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    std::ostringstream o1, o2, e1, e2;
    const int r1 = cli::run(static_cast<int>(argv.size()), argv.data(), o1, e1);
    const int r2 = cli::run(static_cast<int>(argv.size()), argv.data(), o2, e2);
    R.add("byte-identical csv reruns", r1 == 0 && r2 == 0 && o1.str() == o2.str() && !o1.str().empty(),
          fmt("exit %d/%d, %zu bytes", r1, r2, o1.str().size()));
  }
  return R;
}

const std::vector<std::pair<std::string, std::pair<std::string, std::function<Report()>>>>& criteria() {
  static const std::vector<std::pair<std::string, std::pair<std::string, std::function<Report()>>>> list = {
      {"1", {"exact identity at s = -n", c1}},
      {"2", {"cap oracle vs monte carlo", c2}},
      {"3", {"circle closed form vs brute force", c3}},
      {"4", {"interval s -> 1 limit", c4}},
      {"5", {"s -> 1 limit on the sphere", c5}},
      {"6", {"isoperimetric ordering", c6}},
      {"7", {"blaschke-petkantschin", c7}},
      {"8", {"crofton", c8}},
      {"9", {"concentration constant", c9}},
      {"10", {"s -> -inf sweeps", c10}},
      {"10-even", {"s -> -inf even function decay", c10_even}},
      {"11", {"s -> 0 vanishing", c11}},
      {"12", {"property suites", c12}},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string want = argc > 1 ? argv[1] : "all";
  bool all_ok = true, found = false;
  for (const auto& [id, entry] : criteria()) {
    if (want != "all" && want != id) continue;
    found = true;
    const auto t0 = std::chrono::steady_clock::now();
    Report R;
    std::string failure;
    try {
      R = entry.second();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = failure.empty() && R.passed();
    all_ok = all_ok && ok;
    std::printf("%s criterion %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id.c_str(), entry.first.c_str(), secs);
    for (const auto& c : R.checks())
      std::printf("    [%s] %s: %s\n", c.passed ? "ok" : "xx", c.what.c_str(), c.observed.c_str());
    if (!failure.empty()) std::printf("    exception: %s\n", failure.c_str());
    std::fflush(stdout);
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion '%s'\n", want.c_str());
    return 1;
  }
  return all_ok ? 0 : 1;
}
