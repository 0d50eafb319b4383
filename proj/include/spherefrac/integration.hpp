#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spherefrac/errors.hpp"
#include "spherefrac/random.hpp"
#include "spherefrac/special_functions.hpp"

namespace spherefrac {

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double worst_lo, double worst_hi, double worst_err)
      : NumericalError(what), worst_lo(worst_lo), worst_hi(worst_hi), worst_err(worst_err) {}
  double worst_lo, worst_hi, worst_err;
};

class NonFiniteSample : public NumericalError {
 public:
  NonFiniteSample(const std::string& what, std::string sample) : NumericalError(what), sample(std::move(sample)) {}
  std::string sample;
};

// ---------------------------------------------------------------------------------------------
// Estimate

/// Monte Carlo value with 1-sigma standard error. Streaming (Welford) with exact pooled merge.
class Estimate {
 public:
  Estimate() = default;
  static Estimate exact(double value, std::size_t samples = 0);

  void add(double x);
  void merge(const Estimate& other);
  Estimate merged(const Estimate& other) const {
    Estimate e = *this;
    e.merge(other);
    return e;
  }

  double value() const { return mean_; }
  double std_error() const;
  std::size_t samples() const { return n_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

  /// Scale by a constant (value and error).
  Estimate scaled(double c) const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// |a − b| / sqrt(σa² + σb²), infinite when both errors vanish and values differ.
double z_score(double a, double sa, double b, double sb);

// ---------------------------------------------------------------------------------------------
// Monte Carlo driver

inline std::string describe_sample(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}
template <class Derived>
std::string describe_sample(const Eigen::MatrixBase<Derived>& v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ']';
  return os.str();
}
template <class A, class B>
std::string describe_sample(const std::pair<A, B>& p) {
  return "(" + describe_sample(p.first) + ", " + describe_sample(p.second) + ")";
}
template <class T>
std::string describe_sample(const T&) {
  return "<sample>";
}

struct McOptions {
  std::size_t chunk_size = std::size_t{1} << 14;
  unsigned threads = 0;  // 0 → hardware concurrency
};

namespace detail {
unsigned resolve_threads(unsigned requested, std::size_t chunks);
}

/// Chunked, deterministic Monte Carlo.
///
/// `sampler(RandomStream&) -> S` draws a sample and `integrand(const S&) -> double` weighs it.
/// Chunk k uses rng.split(k); chunks are merged in index order, so the result does not depend on
/// the thread count.
template <class Sampler, class Integrand>
Estimate mc_estimate(Sampler&& sampler, Integrand&& integrand, std::size_t N, const RandomStream& rng,
                     const McOptions& opt = {}) {
  if (N < 2) throw DomainError("mc_estimate needs at least 2 samples");
  const std::size_t chunk = std::max<std::size_t>(opt.chunk_size, 1);
  const std::size_t nchunks = (N + chunk - 1) / chunk;
  std::vector<Estimate> parts(nchunks);
  std::vector<std::exception_ptr> errors(nchunks);

  auto run_chunk = [&](std::size_t k) {
    try {
      RandomStream local = rng.split(k);
      const std::size_t begin = k * chunk, end = std::min(N, begin + chunk);
      Estimate e;
      for (std::size_t i = begin; i < end; ++i) {
        const auto sample = sampler(local);
        const double w = integrand(sample);
        if (!std::isfinite(w))
          throw NonFiniteSample("non-finite integrand value " + describe_sample(w) + " at sample " +
                                    std::to_string(i) + ": " + describe_sample(sample),
                                describe_sample(sample));
        e.add(w);
      }
      parts[k] = e;
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  const unsigned nthreads = detail::resolve_threads(opt.threads, nchunks);
  if (nthreads <= 1) {
    for (std::size_t k = 0; k < nchunks; ++k) run_chunk(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < nchunks; k += nthreads) run_chunk(k);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  Estimate total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

/// Single-functor form: `draw(RandomStream&) -> double`.
template <class Draw>
Estimate mc_estimate(Draw&& draw, std::size_t N, const RandomStream& rng, const McOptions& opt = {}) {
  return mc_estimate([&](RandomStream& r) { return draw(r); }, [](double w) { return w; }, N, rng, opt);
}

// ---------------------------------------------------------------------------------------------
// Adaptive quadrature

enum class Endpoint { Lower, Upper };

/// Endpoint grading: x = endpoint ± u^{1/(1−σ)}, which turns (x−endpoint)^{−σ} into a constant.
struct Grading {
  double sigma;
  Endpoint endpoint;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_depth = 60;
  std::size_t max_intervals = 20000;
  std::optional<Grading> grading;
};

/// Globally adaptive Gauss–Kronrod (7/15) quadrature.
double adaptive_quad(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt);

inline double adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol,
                            std::optional<Grading> grading = std::nullopt) {
  QuadOptions opt;
  opt.rel_tol = tol;
  opt.grading = grading;
  return adaptive_quad(f, a, b, opt);
}

/// ∫_a^b f over pieces [a, a+h], [a+h, a+4h], [a+4h, a+16h], ... so that a feature of width ~h at the
/// lower end is resolved even when b − a is many orders larger.
double geometric_quad(const std::function<double(double)>& f, double a, double b, double h, const QuadOptions& opt);

// ---------------------------------------------------------------------------------------------
// Samplers

/// One draw from a tabulated density: position (also as a log offset from the lower end, which stays
/// representable when the offset underflows) and log(1/density).
struct TabulatedDraw {
  double x;
  double log_offset;  // log(x − lo)
  double log_weight;  // −log q(x), q the normalized proposal density actually sampled
};

/// Inverse-CDF sampler for a density g on [lo, hi] with power behaviour g ~ (x−lo)^α at lo and
/// g ~ (hi−x)^β at hi.
///
/// The caller supplies log of the regular part g(x) / ((x−lo)^α (hi−x)^β), which must be finite on
/// [lo, hi]. The table lives in a variable v ∈ [0,1] in which both power ends are flattened; cumulative
/// masses on 4096 Chebyshev–Lobatto cells are interpolated by a monotone cubic. The reported weight is
/// the exact Jacobian of the map actually used, so estimators stay unbiased regardless of table error.
class TabulatedSampler {
 public:
  TabulatedSampler(std::function<double(double)> log_regular, double lo, double hi, double alpha, double beta,
                   int nodes_per_half = 2048);

  TabulatedDraw sample(RandomStream& rng) const;
  /// log ∫ g over [lo, hi].
  double log_total() const { return log_total_; }
  double total() const { return std::exp(log_total_); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  // x(v), log(x − lo), log x'(v).
  void map(double v, double& x, double& log_offset, double& log_jac) const;

  double lo_, hi_, mid_, alpha_, beta_;
  double log_total_ = 0.0;
  std::vector<double> G_;   // normalized cumulative mass at kept nodes
  std::vector<double> v_;   // node positions in v
  std::vector<double> dv_;  // monotone cubic slopes dv/dG
};

/// Radial proposal ρ(θ) ∝ sin^{n−1}θ · (θ/π)^κ on [θmin, θmax] ⊆ [0, π].
class RadialProposal {
 public:
  RadialProposal(int n, double exponent, double theta_min = 0.0, double theta_max = std::numbers::pi);

  struct Draw {
    double theta;
    double weight;  // 1/density
  };
  Draw sample(RandomStream& rng) const;
  /// Log-weight form of sample(), safe when the weight itself overflows.
  TabulatedDraw sample_log(RandomStream& rng) const { return table_.sample(rng); }
  /// Unnormalized density sin^{n−1}θ (θ/π)^κ.
  double kernel(double theta) const { return std::exp(log_kernel(theta)); }
  double log_kernel(double theta) const;
  /// Same from a draw, using log θ so that it stays finite when θ underflows.
  double log_kernel(const TabulatedDraw& d) const;
  /// Tabulated ∫ kernel over the support. Near 1e-6 relative for sharply peaked kernels; draws and
  /// their weights use the table's own density, so they do not depend on this value.
  double normalizer() const { return table_.total(); }
  double log_normalizer() const { return table_.log_total(); }
  int n() const { return n_; }
  double exponent() const { return kappa_; }
  double theta_min() const { return table_.lo(); }
  double theta_max() const { return table_.hi(); }

 private:
  static TabulatedSampler build(int n, double kappa, double lo, double hi);
  int n_;
  double kappa_;
  TabulatedSampler table_;
};

/// Draw (θ, weight) from a radial proposal; weight = 1/density.
inline RadialProposal::Draw radial_sample(const RadialProposal& p, RandomStream& rng) { return p.sample(rng); }

/// q(θ) ∝ θ^{−(1+s)} on [lo, hi], sampled exactly. Works on logs so that lo may underflow.
class TruncatedPowerLaw {
 public:
  TruncatedPowerLaw(double s, double log_lo, double log_hi);
  double log_sample(RandomStream& rng) const;
  double sample(RandomStream& rng) const { return std::exp(log_sample(rng)); }
  /// log ∫_lo^hi θ^{−(1+s)} dθ.
  double log_normalizer() const { return log_z_; }
  /// log(1/q(θ)) at log θ.
  double log_weight(double log_theta) const { return log_z_ + (1.0 + s_) * log_theta; }

 private:
  double s_, log_lo_, log_hi_, log_z_, c_;
};

}  // namespace spherefrac
