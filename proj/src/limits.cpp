#include "crackle/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "crackle/density.hpp"
#include "crackle/parallel.hpp"
#include "crackle/quadrature.hpp"
#include "crackle/rng.hpp"
#include "crackle/tail.hpp"

namespace crackle {

namespace {

constexpr std::uint64_t batch_size = 4096;

void require_common(int d, int k, int i, long j, double t, double lambda,
                    std::uint64_t budget) {
  if (t < 0.0) throw std::invalid_argument("limit estimate: t < 0");
  if (lambda < 0.0) throw std::invalid_argument("limit estimate: lambda < 0");
  if (t > 1.0) throw std::invalid_argument("limit estimate: t > 1");
  if (d < 2 || k < 1 || k > d - 1)
    throw std::invalid_argument("limit estimate: need d >= 2, k in {1..d-1}");
  if (i < k + 2) throw std::invalid_argument("limit estimate: i < k+2");
  if (j < 1) throw std::invalid_argument("limit estimate: j < 1");
  if (budget < 2) throw std::invalid_argument("limit estimate: budget < 2");
}

// Accumulate per-batch sums of the raw integrand X over `budget` samples,
// then fold into (mean, stderr) scaled by `factor`.  Batches own disjoint
// counter-based streams, so the reduction is worker-count independent.
template <class Sampler>
MCEstimate run_batches(std::uint64_t budget, std::uint64_t seed, int threads,
                       double factor, Sampler&& sampler) {
  const std::uint64_t n_batches = (budget + batch_size - 1) / batch_size;
  std::vector<double> sums(n_batches, 0.0), sqs(n_batches, 0.0);
  parallel_for(n_batches, threads, [&](std::size_t b) {
    Rng rng(seed, b);
    const std::uint64_t lo = b * batch_size;
    const std::uint64_t hi = std::min(budget, lo + batch_size);
    double s = 0.0, q = 0.0;
    for (std::uint64_t it = lo; it < hi; ++it) {
      double x = sampler(rng);
      s += x;
      q += x * x;
    }
    sums[b] = s;
    sqs[b] = q;
  });
  double s = 0.0, q = 0.0;
  for (std::uint64_t b = 0; b < n_batches; ++b) {
    s += sums[b];
    q += sqs[b];
  }
  const double n = static_cast<double>(budget);
  const double mean = s / n;
  const double var = std::max(0.0, (q - n * mean * mean) / (n - 1.0));
  MCEstimate est;
  est.mean = factor * mean;
  est.stderr_ = factor * std::sqrt(var / n);
  est.samples = budget;
  est.seed = seed;
  return est;
}

double lens_area(double dist, double r) {
  if (dist >= 2.0 * r) return 0.0;
  double h = 0.5 * dist;
  return 2.0 * r * r * std::acos(h / r) - h * std::sqrt(4.0 * r * r - dist * dist);
}

// Length of the union of vertical chords of the disks at abscissa x.
double chord_union(const Eigen::MatrixXd& c, double r, double x,
                   std::vector<std::pair<double, double>>& iv) {
  iv.clear();
  for (Eigen::Index i = 0; i < c.cols(); ++i) {
    double dx = x - c(0, i);
    double s = r * r - dx * dx;
    if (s <= 0.0) continue;
    double h = std::sqrt(s);
    iv.emplace_back(c(1, i) - h, c(1, i) + h);
  }
  if (iv.empty()) return 0.0;
  std::sort(iv.begin(), iv.end());
  double len = 0.0, lo = iv[0].first, hi = iv[0].second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first > hi) {
      len += hi - lo;
      lo = iv[i].first;
      hi = iv[i].second;
    } else {
      hi = std::max(hi, iv[i].second);
    }
  }
  return len + (hi - lo);
}

double triple_overlap(const Eigen::MatrixXd& c, double r) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    lo = std::max(lo, c(0, i) - r);
    hi = std::min(hi, c(0, i) + r);
  }
  if (hi <= lo) return 0.0;
  auto len = [&](double x) {
    double m = std::numeric_limits<double>::infinity();
    double lo_y = -m, hi_y = m;
    for (int i = 0; i < 3; ++i) {
      double dx = x - c(0, i);
      double s = r * r - dx * dx;
      if (s <= 0.0) return 0.0;
      double h = std::sqrt(s);
      lo_y = std::max(lo_y, c(1, i) - h);
      hi_y = std::min(hi_y, c(1, i) + h);
    }
    return std::max(0.0, hi_y - lo_y);
  };
  return integrate(len, lo, hi, 1e-10);
}

}  // namespace

double union_ball_volume_exact2(const Eigen::MatrixXd& centers, double r) {
  const int m = static_cast<int>(centers.cols());
  if (centers.rows() != 2 || m < 1 || m > 3)
    throw std::invalid_argument(
        "union_ball_volume_exact2: d = 2 with 1..3 centers only");
  const double disk = std::numbers::pi * r * r;
  double area = m * disk;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      area -= lens_area((centers.col(i) - centers.col(j)).norm(), r);
  if (m == 3) area += triple_overlap(centers, r);
  return area;
}

double union_ball_volume_slice2(const Eigen::MatrixXd& centers, double r) {
  if (centers.rows() != 2)
    throw std::invalid_argument("union_ball_volume_slice2: d = 2 only");
  std::vector<double> cuts;
  for (Eigen::Index i = 0; i < centers.cols(); ++i) {
    cuts.push_back(centers(0, i) - r);
    cuts.push_back(centers(0, i) + r);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> iv;
  double area = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    if (cuts[p + 1] <= cuts[p]) continue;
    area += integrate([&](double x) { return chord_union(centers, r, x, iv); },
                      cuts[p], cuts[p + 1], 1e-9);
  }
  return area;
}

double union_ball_volume_mc(const Eigen::MatrixXd& centers, double r,
                            std::uint64_t inner_budget, Rng& rng) {
  return union_ball_exp_integral_mc(centers, r,
                                    Eigen::VectorXd::Zero(centers.rows()), 0.0,
                                    inner_budget, rng);
}

double union_ball_exp_integral_mc(const Eigen::MatrixXd& centers, double r,
                                  const Eigen::VectorXd& theta, double inv_c,
                                  std::uint64_t inner_budget, Rng& rng) {
  const int d = static_cast<int>(centers.rows());
  Eigen::VectorXd lo = centers.rowwise().minCoeff().array() - r;
  Eigen::VectorXd hi = centers.rowwise().maxCoeff().array() + r;
  Eigen::VectorXd span = hi - lo;
  double box = span.prod();
  // Stratified jittered grid: one uniform point per cell.
  int side = std::max(1, static_cast<int>(std::floor(
                             std::pow(static_cast<double>(inner_budget),
                                      1.0 / d))));
  long cells = 1;
  for (int a = 0; a < d; ++a) cells *= side;
  Eigen::VectorXd z(d);
  std::vector<int> idx(d, 0);
  double sum = 0.0;
  for (long cell = 0; cell < cells; ++cell) {
    long rem = cell;
    for (int a = 0; a < d; ++a) {
      idx[a] = static_cast<int>(rem % side);
      rem /= side;
    }
    for (int a = 0; a < d; ++a)
      z[a] = lo[a] + span[a] * (idx[a] + rng.uniform()) / side;
    bool inside = false;
    for (Eigen::Index i = 0; i < centers.cols() && !inside; ++i)
      inside = (z - centers.col(i)).norm() <= r;
    if (inside)
      sum += (inv_c == 0.0) ? 1.0 : std::exp(-inv_c * theta.dot(z));
  }
  return box * sum / static_cast<double>(cells);
}

double union_ball_volume(const Eigen::MatrixXd& centers, double r,
                         std::uint64_t inner_budget, Rng& rng) {
  if (centers.rows() == 2 && centers.cols() <= 3)
    return union_ball_volume_exact2(centers, r);
  return union_ball_volume_mc(centers, r, inner_budget, rng);
}

MCEstimate mu_estimate(const MuSpec& spec, int threads) {
  require_common(spec.d, spec.k, spec.i, spec.j, spec.t, spec.lambda,
                 spec.budget);
  if (!(spec.alpha > spec.d))
    throw std::invalid_argument("mu_estimate: alpha must exceed d");
  const int d = spec.d, i = spec.i;
  const double p = spec.alpha * i - d;
  const double ball_r = (i - 1) * spec.t;
  const double vol_prop = ball_volume(d) * std::pow(ball_r, d);
  const double factor =
      sphere_area(d) / p * std::pow(vol_prop, i - 1);
  const double td = std::pow(spec.t, d);

  auto sampler = [&, spec](Rng& rng) -> double {
    double rho = std::pow(1.0 - rng.uniform(), -1.0 / p);
    Eigen::MatrixXd pts(d, i);
    pts.col(0).setZero();
    for (int l = 1; l < i; ++l) pts.col(l) = rng.ball(d, ball_r);
    if (!cycle_indicator(pts, spec.k, spec.j, spec.t)) return 0.0;
    if (spec.lambda == 0.0) return 1.0;
    double vol = union_ball_volume(pts, 1.0, spec.inner_budget, rng);
    return std::exp(-spec.lambda * std::pow(rho, -spec.alpha) * td * vol);
  };
  return run_batches(spec.budget, spec.seed, threads, factor, sampler);
}

MCEstimate xi_estimate(const XiSpec& spec, int threads) {
  require_common(spec.d, spec.k, spec.i, spec.j, spec.t, spec.lambda,
                 spec.budget);
  if (!(spec.c > 0.0))
    throw std::invalid_argument("xi_estimate: c must be positive (inf ok)");
  const int d = spec.d, i = spec.i;
  const double ball_r = (i - 1) * spec.t;
  const double vol_prop = ball_volume(d) * std::pow(ball_r, d);
  const double factor =
      sphere_area(d) / i * std::pow(vol_prop, i - 1);
  const double inv_c = std::isinf(spec.c) ? 0.0 : 1.0 / spec.c;

  auto sampler = [&, spec](Rng& rng) -> double {
    Eigen::VectorXd theta = rng.unit_vector(d);
    double rho = -std::log(1.0 - rng.uniform()) / i;
    Eigen::MatrixXd pts(d, i);
    pts.col(0).setZero();
    for (int l = 1; l < i; ++l) pts.col(l) = rng.ball(d, ball_r);
    if (!cycle_indicator(pts, spec.k, spec.j, spec.t)) return 0.0;
    double dsum = 0.0;
    for (int l = 1; l < i; ++l) {
      double dot = theta.dot(pts.col(l));
      if (rho + inv_c * dot < 0.0) return 0.0;
      dsum += dot;
    }
    double x = std::exp(-inv_c * dsum);
    if (spec.lambda > 0.0) {
      double inner =
          (inv_c == 0.0)
              ? union_ball_volume(pts, spec.t, spec.inner_budget, rng)
              : union_ball_exp_integral_mc(pts, spec.t, theta, inv_c,
                                           spec.inner_budget, rng);
      x *= std::exp(-spec.lambda * std::exp(-rho) * inner);
    }
    return x;
  };
  return run_batches(spec.budget, spec.seed, threads, factor, sampler);
}

namespace {

// Geometric majorant on the series tail: each term (i, all j) is bounded by
//   s_{d-1} C(i,k+1) i^{i-2} omega_d^{i-1} t^{d(i-1)} lambda^i / i!  [*1/(alpha i - d) for mu]
// summable because lambda e omega_d t^d < 1 (Stirling).
double series_tail_bound(int d, int k, double t, double lambda, int m_cap,
                         bool is_mu, double alpha) {
  const double log_sd = std::log(sphere_area(d));
  const double log_wd = std::log(ball_volume(d));
  const double log_l = std::log(lambda);
  const double log_t = (t > 0.0) ? std::log(t) : -std::numeric_limits<double>::infinity();
  double bound = 0.0;
  for (int i = m_cap + 1; i < m_cap + 600; ++i) {
    double lg = log_sd + std::lgamma(i + 1) - std::lgamma(k + 2) -
                std::lgamma(i - k) + (i - 2) * std::log(i) +
                (i - 1) * log_wd + d * (i - 1) * log_t + i * log_l -
                std::lgamma(i + 1);
    if (is_mu) lg -= std::log(alpha * i - d);
    double term = std::exp(lg);
    bound += term;
    if (term < 1e-300 || term < 1e-16 * bound) break;
  }
  return bound;
}

void require_total(int d, double lambda, double t, bool truncated) {
  // Truncated sums are finite, so only positivity matters; the cap is what
  // makes the geometric bound on the discarded tail go through.
  const double cap =
      truncated ? std::numeric_limits<double>::infinity()
                : 1.0 / (std::numbers::e * ball_volume(d));
  if (!(lambda > 0.0 && lambda < cap))
    throw std::domain_error(
        "series total: lambda must lie in (0, 1/(e*omega_d)) for the weighted "
        "series to converge");
  if (t > 1.0) throw std::domain_error("series total: t must lie in [0,1]");
}

}  // namespace

SeriesEstimate mu_total(int d, int k, double t, double lambda, double alpha,
                        int m_cap, long j_cap, std::uint64_t budget,
                        std::uint64_t inner_budget, std::uint64_t seed,
                        int threads, bool truncated) {
  require_total(d, lambda, t, truncated);
  if (m_cap < k + 2) throw std::invalid_argument("mu_total: m_cap < k+2");
  if (j_cap < 1) throw std::invalid_argument("mu_total: j_cap < 1");
  SeriesEstimate out;
  out.m_cap = m_cap;
  out.seed = seed;
  double var = 0.0;
  for (int i = k + 2; i <= m_cap; ++i) {
    double log_w = i * std::log(lambda) - std::lgamma(i + 1);
    long j_hi = std::min<long>(j_cap, binomial(i, k + 1));
    for (long j = 1; j <= j_hi; ++j) {
      MuSpec spec;
      spec.d = d;
      spec.k = k;
      spec.i = i;
      spec.j = j;
      spec.t = t;
      spec.lambda = lambda;
      spec.alpha = alpha;
      spec.budget = budget;
      spec.inner_budget = inner_budget;
      spec.seed = mix64(seed ^ (0x51ull * i + 0x9d00ull * j));
      MCEstimate term = mu_estimate(spec, threads);
      double w = j * std::exp(log_w);
      out.value += w * term.mean;
      var += w * w * term.stderr_ * term.stderr_;
    }
  }
  out.stderr_ = std::sqrt(var);
  out.tail_bound =
      truncated ? 0.0 : series_tail_bound(d, k, t, lambda, m_cap, true, alpha);
  return out;
}

SeriesEstimate xi_total(int d, int k, double t, double lambda, double tau,
                        double c, int m_cap, long j_cap, std::uint64_t budget,
                        std::uint64_t inner_budget, std::uint64_t seed,
                        int threads, bool truncated) {
  require_total(d, lambda, t, truncated);
  if (d == 2 && !(tau > 0.0 && tau < 1.0))
    throw std::domain_error("xi_total: d = 2 requires tau in (0,1)");
  if (m_cap < k + 2) throw std::invalid_argument("xi_total: m_cap < k+2");
  if (j_cap < 1) throw std::invalid_argument("xi_total: j_cap < 1");
  SeriesEstimate out;
  out.m_cap = m_cap;
  out.seed = seed;
  double var = 0.0;
  for (int i = k + 2; i <= m_cap; ++i) {
    double log_w = i * std::log(lambda) - std::lgamma(i + 1);
    long j_hi = std::min<long>(j_cap, binomial(i, k + 1));
    for (long j = 1; j <= j_hi; ++j) {
      XiSpec spec;
      spec.d = d;
      spec.k = k;
      spec.i = i;
      spec.j = j;
      spec.t = t;
      spec.lambda = lambda;
      spec.tau = tau;
      spec.c = c;
      spec.budget = budget;
      spec.inner_budget = inner_budget;
      spec.seed = mix64(seed ^ (0x51ull * i + 0x9d00ull * j));
      MCEstimate term = xi_estimate(spec, threads);
      double w = j * std::exp(log_w);
      out.value += w * term.mean;
      var += w * w * term.stderr_ * term.stderr_;
    }
  }
  out.stderr_ = std::sqrt(var);
  out.tail_bound =
      truncated ? 0.0 : series_tail_bound(d, k, t, lambda, m_cap, false, 0.0);
  return out;
}

}  // namespace crackle
