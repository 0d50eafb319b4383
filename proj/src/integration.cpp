#include "spherefrac/integration.hpp"

#include <array>
#include <cstdlib>
#include <limits>
#include <queue>

namespace spherefrac {

// ---------------------------------------------------------------------------------------------
// Estimate

Estimate Estimate::exact(double value, std::size_t samples) {
  Estimate e;
  e.n_ = samples;
  e.mean_ = value;
  return e;
}

void Estimate::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Estimate::merge(const Estimate& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_), n = na + nb;
  const double delta = o.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += o.m2_ + delta * delta * na * nb / n;
  n_ += o.n_;
}

double Estimate::std_error() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  return std::sqrt(std::max(m2_, 0.0) / (n - 1.0) / n);
}

Estimate Estimate::scaled(double c) const {
  Estimate e = *this;
  e.mean_ *= c;
  e.m2_ *= c * c;
  return e;
}

double z_score(double a, double sa, double b, double sb) {
  const double diff = std::abs(a - b);
  const double s = std::sqrt(sa * sa + sb * sb);
  if (s == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / s;
}

namespace detail {
unsigned resolve_threads(unsigned requested, std::size_t chunks) {
  unsigned t = requested;
  if (t == 0) {
    // SPHEREFRAC_THREADS caps the pool; results do not depend on it.
    if (const char* env = std::getenv("SPHEREFRAC_THREADS")) t = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, chunks));
}
}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Gauss–Kronrod 7/15

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error, abs_value;
  int depth;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7], resg = fc * kWg[3], resabs = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  Interval iv{a, b, resk * h, std::abs((resk - resg) * h), resabs * std::abs(h), depth};
  if (!std::isfinite(iv.value))
    throw QuadratureError("non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]", a, b,
                          std::numeric_limits<double>::infinity());
  return iv;
}

double adaptive_core(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
  std::priority_queue<Interval> heap;
  Interval first = gk15(f, a, b, 0);
  double total = first.value, err = first.error, absval = first.abs_value;
  heap.push(first);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    const double target = std::max({opt.abs_tol, opt.rel_tol * std::abs(total), 50.0 * eps * absval});
    if (err <= target) break;
    Interval worst = heap.top();
    if (worst.depth >= opt.max_depth || heap.size() >= opt.max_intervals) {
      throw QuadratureError("adaptive quadrature limit reached (depth " + std::to_string(worst.depth) +
                                ", intervals " + std::to_string(heap.size()) + "); worst interval [" +
                                std::to_string(worst.a) + ", " + std::to_string(worst.b) +
                                "] error " + std::to_string(worst.error),
                            worst.a, worst.b, worst.error);
    }
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval no longer splittable in double precision; accept what we have.
      break;
    }
    heap.pop();
    Interval l = gk15(f, worst.a, mid, worst.depth + 1), r = gk15(f, mid, worst.b, worst.depth + 1);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    absval += l.abs_value + r.abs_value - worst.abs_value;
    heap.push(l);
    heap.push(r);
    if (heap.size() % 64 == 0) {
      // Re-sum to shed accumulated cancellation in the running totals.
      auto copy = heap;
      total = err = absval = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        absval += copy.top().abs_value;
        copy.pop();
      }
    }
  }
  return total;
}

}  // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("adaptive_quad needs finite limits");
  if (a == b) return 0.0;
  if (a > b) return -adaptive_quad(f, b, a, opt);
  if (!opt.grading) return adaptive_core(f, a, b, opt);

  const double sigma = opt.grading->sigma;
  if (!(sigma >= 0.0 && sigma < 1.0)) throw DomainError("grading exponent must lie in [0,1)");
  const double p = 1.0 / (1.0 - sigma);
  const double U = std::pow(b - a, 1.0 - sigma);
  const bool lower = opt.grading->endpoint == Endpoint::Lower;
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double off = std::pow(u, p);
    const double x = lower ? std::min(a + off, b) : std::max(b - off, a);
    return f(x) * p * std::pow(u, p - 1.0);
  };
  QuadOptions inner = opt;
  inner.grading.reset();
  return adaptive_core(g, 0.0, U, inner);
}

double geometric_quad(const std::function<double(double)>& f, double a, double b, double h, const QuadOptions& opt) {
  if (a == b) return 0.0;
  if (!(h > 0.0)) throw DomainError("geometric_quad needs a positive first width");
  double sum = 0.0, lo = a, width = h;
  while (lo < b) {
    const double hi = (b - lo <= 1.5 * width) ? b : lo + width;
    sum += adaptive_quad(f, lo, hi, opt);
    lo = hi;
    width *= 4.0;
  }
  return sum;
}

// ---------------------------------------------------------------------------------------------
// TabulatedSampler

TabulatedSampler::TabulatedSampler(std::function<double(double)> log_regular, double lo, double hi, double alpha,
                                   double beta, int nodes_per_half)
    : lo_(lo), hi_(hi), mid_(0.5 * (lo + hi)), alpha_(alpha), beta_(beta) {
  if (!(hi > lo)) throw DomainError("tabulated sampler needs lo < hi");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw DomainError("density is not normalizable: endpoint exponents must exceed -1 (alpha=" +
                      std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  if (nodes_per_half < 2) throw DomainError("tabulated sampler needs at least 2 nodes per half");

  const int N = nodes_per_half;
  std::vector<double> vnodes(2 * N + 1);
  for (int k = 0; k <= N; ++k) {
    const double c = 0.25 * (1.0 - std::cos(std::numbers::pi * k / N));
    vnodes[k] = c;
    vnodes[2 * N - k] = 1.0 - c;
  }
  vnodes[N] = 0.5;

  // Density in v: log h(v) = log_regular(x) + log of the flattened power factors.
  const double L0 = mid_ - lo_, L1 = hi_ - mid_;
  const double p0 = 1.0 / (1.0 + alpha_), p1 = 1.0 / (1.0 + beta_);
  const double log_c0 = std::log(2.0 * p0) + (1.0 + alpha_) * std::log(L0);
  const double log_c1 = std::log(2.0 * p1) + (1.0 + beta_) * std::log(L1);
  auto log_h = [&](double v) {
    double x, lo_off, log_jac;
    map(v, x, lo_off, log_jac);
    if (v < 0.5) {
      const double hi_off = hi_ - x;
      return log_regular(x) + beta_ * std::log(hi_off) + log_c0;
    }
    return log_regular(x) + alpha_ * lo_off + log_c1;
  };

  static const GaussRule gl8 = gauss_legendre(8);
  std::vector<double> cell_log(2 * N);
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<std::array<double, 8>> point_log(2 * N);
  for (int k = 0; k < 2 * N; ++k) {
    const double a = vnodes[k], b = vnodes[k + 1], c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int j = 0; j < 8; ++j) {
      point_log[k][j] = log_h(c + hw * gl8.nodes[j]) + std::log(hw * gl8.weights[j]);
      mx = std::max(mx, point_log[k][j]);
    }
  }
  if (!std::isfinite(mx)) throw NumericalError("tabulated density has no finite mass");
  std::vector<double> cum(2 * N + 1, 0.0);
  for (int k = 0; k < 2 * N; ++k) {
    double m = 0.0;
    for (int j = 0; j < 8; ++j) m += std::exp(point_log[k][j] - mx);
    cum[k + 1] = cum[k] + m;
  }
  const double sum = cum.back();
  log_total_ = mx + std::log(sum);

  // Keep strictly increasing (G, v) pairs.
  G_.clear();
  v_.clear();
  for (int k = 0; k <= 2 * N; ++k) {
    const double g = (k == 2 * N) ? 1.0 : cum[k] / sum;
    if (!G_.empty() && !(g > G_.back())) {
      if (k == 2 * N) {
        G_.back() = 1.0;
        v_.back() = 1.0;
      }
      continue;
    }
    G_.push_back(g);
    v_.push_back(vnodes[k]);
  }
  if (G_.size() < 2) throw NumericalError("tabulated density collapsed to a point");

  // Fritsch–Carlson (Fritsch–Butland weights) slopes of v(G).
  const std::size_t m = G_.size();
  std::vector<double> secant(m - 1), width(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    width[k] = G_[k + 1] - G_[k];
    secant[k] = (v_[k + 1] - v_[k]) / width[k];
  }
  dv_.assign(m, 0.0);
  dv_[0] = secant[0];
  dv_[m - 1] = secant[m - 2];
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double d0 = secant[k - 1], d1 = secant[k];
    if (d0 <= 0.0 || d1 <= 0.0) {
      dv_[k] = 0.0;
      continue;
    }
    const double w1 = 2.0 * width[k] + width[k - 1], w2 = width[k] + 2.0 * width[k - 1];
    dv_[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
  }
}

void TabulatedSampler::map(double v, double& x, double& log_offset, double& log_jac) const {
  if (v < 0.5) {
    const double p = 1.0 / (1.0 + alpha_);
    const double L = mid_ - lo_;
    const double log2v = std::log(2.0 * v);
    log_offset = std::log(L) + p * log2v;
    x = lo_ + std::exp(log_offset);
    log_jac = std::log(2.0 * L * p) + (p - 1.0) * log2v;
  } else {
    const double p = 1.0 / (1.0 + beta_);
    const double L = hi_ - mid_;
    const double log2w = std::log(2.0 * (1.0 - v));
    const double off = L * std::exp(p * log2w);
    x = hi_ - off;
    log_offset = std::log(x - lo_);
    log_jac = std::log(2.0 * L * p) + (p - 1.0) * log2w;
  }
}

TabulatedDraw TabulatedSampler::sample(RandomStream& rng) const {
  const double U = rng.uniform_open();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(G_.begin(), G_.end(), U) - G_.begin());
  k = std::clamp<std::size_t>(k, 1, G_.size() - 1) - 1;
  const double h = G_[k + 1] - G_[k];
  const double t = (U - G_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * v_[k] + (t3 - 2 * t2 + t) * h * dv_[k] + (-2 * t3 + 3 * t2) * v_[k + 1] +
                   (t3 - t2) * h * dv_[k + 1];
  const double dvdG = ((6 * t2 - 6 * t) * v_[k] + (3 * t2 - 4 * t + 1) * h * dv_[k] + (-6 * t2 + 6 * t) * v_[k + 1] +
                       (3 * t2 - 2 * t) * h * dv_[k + 1]) /
                      h;
  const double vc = std::clamp(v, 1e-300, std::nextafter(1.0, 0.0));
  TabulatedDraw d;
  double log_jac;
  map(vc, d.x, d.log_offset, log_jac);
  d.log_weight = log_jac + std::log(dvdG);
  return d;
}

// ---------------------------------------------------------------------------------------------
// RadialProposal

namespace {
// log(sin θ / (θ(π−θ))), smooth on [0, π].
double log_sin_ratio(double theta) {
  constexpr double pi = std::numbers::pi;
  if (theta < 1e-8) return -std::log(pi - theta) + std::log1p(-theta * theta / 6.0);
  if (pi - theta < 1e-8) {
    const double w = pi - theta;
    return -std::log(theta) + std::log1p(-w * w / 6.0);
  }
  return std::log(std::sin(theta)) - std::log(theta) - std::log(pi - theta);
}
}  // namespace

TabulatedSampler RadialProposal::build(int n, double kappa, double lo, double hi) {
  constexpr double pi = std::numbers::pi;
  if (n < 1) throw DomainError("radial proposal needs n >= 1");
  if (!(lo >= 0.0 && hi <= pi && lo < hi)) throw DomainError("radial proposal support must satisfy 0 <= lo < hi <= pi");
  const bool at0 = lo == 0.0, atpi = hi == pi;
  const double alpha = at0 ? (n - 1) + kappa : 0.0;
  const double beta = atpi ? n - 1.0 : 0.0;
  if (at0 && !(alpha > -1.0))
    throw DomainError("radial kernel is not integrable at theta=0 (sin^{n-1} theta * theta^kappa with kappa=" +
                      std::to_string(kappa) + ")");
  auto log_regular = [=](double th) {
    // sin^{n−1}θ (θ/π)^κ divided by θ^α (π−θ)^β.
    const double lr = log_sin_ratio(th);  // log sinθ − log θ − log(π−θ)
    double out = -kappa * std::log(pi);
    if (at0) {
      out += (n - 1) * lr;  // θ^{n−1+κ} absorbed by the endpoint power
      if (!atpi) out += (n - 1) * std::log(pi - th);
    } else {
      out += kappa * std::log(th);
      if (atpi)
        out += (n - 1) * (lr + std::log(th));
      else
        out += (n - 1) * std::log(std::sin(th));
    }
    return out;
  };
  return TabulatedSampler(log_regular, lo, hi, alpha, beta);
}

RadialProposal::RadialProposal(int n, double exponent, double theta_min, double theta_max)
    : n_(n), kappa_(exponent), table_(build(n, exponent, theta_min, theta_max)) {}

double RadialProposal::log_kernel(double theta) const {
  return (n_ - 1) * std::log(std::sin(theta)) + kappa_ * (std::log(theta) - std::log(std::numbers::pi));
}

double RadialProposal::log_kernel(const TabulatedDraw& d) const {
  constexpr double pi = std::numbers::pi;
  if (table_.lo() != 0.0 || d.x > 1e-8) return log_kernel(d.x);
  const double lt = d.log_offset;  // log θ
  return (n_ - 1) * (lt + std::log1p(-d.x * d.x / 6.0)) + kappa_ * (lt - std::log(pi));
}

RadialProposal::Draw RadialProposal::sample(RandomStream& rng) const {
  const TabulatedDraw d = table_.sample(rng);
  return {d.x, std::exp(d.log_weight)};
}

// ---------------------------------------------------------------------------------------------
// TruncatedPowerLaw

TruncatedPowerLaw::TruncatedPowerLaw(double s, double log_lo, double log_hi)
    : s_(s), log_lo_(log_lo), log_hi_(log_hi), c_(0.0) {
  if (!(log_hi > log_lo)) throw DomainError("power-law support must satisfy lo < hi");
  if (s > 0.0) {
    if (!std::isfinite(log_lo)) throw DomainError("theta^{-(1+s)} with s > 0 is not integrable at 0");
    c_ = -std::expm1(s * (log_lo - log_hi));  // 1 − (lo/hi)^s
    log_z_ = -s * log_lo + std::log(c_ / s);
  } else if (s < 0.0) {
    const double k = -s;
    c_ = -std::expm1(k * (log_lo - log_hi));  // 1 − (lo/hi)^k
    log_z_ = k * log_hi + std::log(c_ / k);
  } else {
    if (!std::isfinite(log_lo)) throw DomainError("theta^{-1} is not integrable at 0");
    log_z_ = std::log(log_hi - log_lo);
  }
}

double TruncatedPowerLaw::log_sample(RandomStream& rng) const {
  const double u = rng.uniform_open();
  if (s_ > 0.0) return log_lo_ - std::log1p(-u * c_) / s_;
  if (s_ < 0.0) {
    // θ^k = hi^k (1 − (1−u)·c).
    const double k = -s_;
    return log_hi_ + std::log1p(-(1.0 - u) * c_) / k;
  }
  return log_lo_ + u * (log_hi_ - log_lo_);
}

}  // namespace spherefrac
