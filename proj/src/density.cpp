#include "crackle/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "crackle/quadrature.hpp"
#include "crackle/rng.hpp"

namespace crackle {

double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d) { return sphere_area(d) / d; }

namespace {

// Unnormalized radial mass s_{d-1} * integral_0^inf r^{d-1} g(r) dr.
double radial_mass(Family family, int d, double shape) {
  auto g = [&](double r) {
    double rd = std::pow(r, d - 1);
    if (family == Family::power_law) return rd / (1.0 + std::pow(r, shape));
    return rd * std::exp(-std::pow(r, shape) / shape);
  };
  double inner = integrate(g, 0.0, 1.0, 1e-12);
  double outer = integrate_tail(g, 1.0, 1e-12);
  return sphere_area(d) * (inner + outer);
}

}  // namespace

Model make_power_law(int d, double alpha) {
  if (d < 1) throw std::invalid_argument("make_power_law: d must be >= 1");
  if (!(alpha > d))
    throw std::invalid_argument("make_power_law: alpha must exceed d");
  Model m{Family::power_law, d, alpha, 0.0, 0.0};
  m.C = 1.0 / radial_mass(Family::power_law, d, alpha);
  return m;
}

Model make_exponential(int d, double tau) {
  if (d < 1) throw std::invalid_argument("make_exponential: d must be >= 1");
  if (!(tau > 0.0))
    throw std::invalid_argument("make_exponential: tau must be positive");
  Model m{Family::exponential, d, 0.0, tau, 0.0};
  m.C = 1.0 / radial_mass(Family::exponential, d, tau);
  return m;
}

double radial_profile(const Model& m, double r) {
  if (m.family == Family::power_law) return 1.0 / (1.0 + std::pow(r, m.alpha));
  return std::exp(-psi(m, r));
}

double density_at(const Model& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return m.C * radial_profile(m, x.norm());
}

double log_density_at(const Model& m, double r) {
  if (m.family == Family::power_law) {
    // log(1 + r^alpha) without overflow for large r.
    double a = m.alpha * std::log(r);
    double log1p_term = (r > 1.0) ? a + std::log1p(std::exp(-a))
                                  : std::log1p(std::pow(r, m.alpha));
    return std::log(m.C) - log1p_term;
  }
  return std::log(m.C) - psi(m, r);
}

double psi(const Model& m, double r) {
  if (m.family != Family::exponential)
    throw std::invalid_argument("psi: exponential-family models only");
  return std::pow(r, m.tau) / m.tau;
}

double psi_prime(const Model& m, double r) {
  if (m.family != Family::exponential)
    throw std::invalid_argument("psi_prime: exponential-family models only");
  return std::pow(r, m.tau - 1.0);
}

double psi_inverse(const Model& m, double x) {
  if (m.family != Family::exponential)
    throw std::invalid_argument("psi_inverse: exponential-family models only");
  if (x < 0.0) throw std::domain_error("psi_inverse: negative argument");
  return std::pow(m.tau * x, 1.0 / m.tau);
}

double tail_decay_scale(const Model& m, double z) {
  return 1.0 / psi_prime(m, z);
}

double crackle_parameter(const Model& m) {
  if (m.family != Family::exponential)
    throw std::invalid_argument(
        "crackle_parameter: exponential-family models only");
  if (m.tau < 1.0) return std::numeric_limits<double>::infinity();
  if (m.tau == 1.0) return 1.0;
  return 0.0;
}

double tail_mass(const Model& m, double R) {
  if (R <= 0.0) return 1.0;
  auto g = [&](double r) {
    return std::pow(r, m.d - 1) * radial_profile(m, r);
  };
  return m.C * sphere_area(m.d) * integrate_tail(g, R, 1e-11);
}

RadialTable::RadialTable(const Model& m) : model_(m) {
  // Expand until the tail beyond r_max is negligible.
  double r_max = 1.0;
  while (tail_mass(model_, r_max) > 1e-12) {
    r_max *= 2.0;
    if (r_max > 1e12)
      throw std::runtime_error("RadialTable: tail fails to decay");
  }
  const int n_knots = 4096;
  // Both families have a unit-scale body, so anchor the first positive knot
  // there rather than to r_max: with a heavy tail r_max can be ~1e8, and a
  // proportional floor would hand most of the mass to one quadrature panel.
  const double r_min = 1e-4;
  knots_.resize(n_knots + 1);
  cdf_.resize(n_knots + 1);
  knots_[0] = 0.0;
  cdf_[0] = 0.0;
  double ratio = std::log(r_max / r_min);
  for (int i = 1; i <= n_knots; ++i) {
    knots_[i] = r_min * std::exp(ratio * (i - 1) / (n_knots - 1));
    cdf_[i] = cdf_[i - 1] + segment_mass(knots_[i - 1], knots_[i]);
  }
  double closure = cdf_.back() + tail_mass(model_, r_max);
  if (std::abs(closure - 1.0) > 1e-8)
    throw std::runtime_error("RadialTable: CDF fails to close to 1");
}

double RadialTable::segment_mass(double lo, double hi) const {
  const auto& gl = GaussLegendre::order(15);
  double s = model_.C * sphere_area(model_.d);
  return s * gl.apply(
                 [&](double r) {
                   return std::pow(r, model_.d - 1) * radial_profile(model_, r);
                 },
                 lo, hi);
}

double RadialTable::cdf_at(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= knots_.back()) return 1.0 - tail_mass(model_, r);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
  std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  return cdf_[j - 1] + segment_mass(knots_[j - 1], r);
}

double RadialTable::sample(double u) const {
  if (u < 0.0 || u >= 1.0)
    throw std::domain_error("RadialTable::sample: quantile outside [0,1)");
  if (u >= cdf_.back()) {
    // Asymptotic tail inverse beyond the last knot (mass < 1e-12).
    double q = 1.0 - u;
    double s = model_.C * sphere_area(model_.d);
    if (model_.family == Family::power_law) {
      // 1 - F(r) ~ s C r^{d-alpha} / (alpha - d)
      double p = model_.alpha - model_.d;
      return std::pow(s / (p * q), 1.0 / p);
    }
    // 1 - F(r) ~ s C a(r) r^{d-1} e^{-psi(r)}; fixed-point on psi(r).
    double r = knots_.back();
    for (int it = 0; it < 6; ++it) {
      double corr = std::log(s * tail_decay_scale(model_, r)) +
                    (model_.d - 1) * std::log(r);
      r = psi_inverse(model_, std::max(corr - std::log(q), 1.0));
    }
    return r;
  }
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
  double lo = knots_[j - 1], hi = knots_[j];
  double base = cdf_[j - 1];
  // Bisection on the within-segment mass, to relative tolerance 1e-10.
  for (int iter = 0; iter < 60 && (hi - lo) > 1e-10 * hi; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (base + segment_mass(knots_[j - 1], mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PointCloud sample_cloud(const Model& m, const RadialTable& table, int n,
                        std::uint64_t seed) {
  PointCloud cloud{m, seed, Eigen::MatrixXd(m.d, n)};
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    double r = table.sample(rng.uniform());
    cloud.points.col(i) = r * rng.unit_vector(m.d);
  }
  return cloud;
}

PointCloud sample_cloud(const Model& m, int n, std::uint64_t seed) {
  RadialTable table(m);
  return sample_cloud(m, table, n, seed);
}

}  // namespace crackle
