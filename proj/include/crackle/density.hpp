#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace crackle {

// Rotation-invariant density families on R^d:
//   power_law:    f(x) = C / (1 + |x|^alpha),  alpha > d
//   exponential:  f(x) = C exp(-psi(|x|)),     psi(r) = r^tau / tau,  tau > 0
enum class Family { power_law, exponential };

struct Model {
  Family family;
  int d = 0;
  double alpha = 0.0;  // power_law only
  double tau = 0.0;    // exponential only
  double C = 0.0;      // normalizing constant
};

// Surface area of S^{d-1} and volume of the unit ball in R^d.
double sphere_area(int d);
double ball_volume(int d);

// Normalizing constant computed by quadrature (relative error <= 1e-10).
Model make_power_law(int d, double alpha);
Model make_exponential(int d, double tau);

// Radial profile g with f(x) = C g(|x|).
double radial_profile(const Model& m, double r);
double density_at(const Model& m, const Eigen::Ref<const Eigen::VectorXd>& x);
double log_density_at(const Model& m, double r);

// Exponential-profile helpers.  psi_inverse is the functional inverse,
// tail_decay_scale is a(z) = 1/psi'(z), and crackle_parameter is lim_z a(z):
// +inf for tau < 1 (heavy crackle), 1 for tau = 1, 0 for tau > 1.
double psi(const Model& m, double r);
double psi_prime(const Model& m, double r);
double psi_inverse(const Model& m, double x);
double tail_decay_scale(const Model& m, double z);
double crackle_parameter(const Model& m);

// P(|X| >= R).
double tail_mass(const Model& m, double R);

// Radial inverse-CDF table: 4096 log-spaced knots out to tail mass < 1e-12,
// sampled by bracket lookup plus bisection to relative tolerance 1e-10.
class RadialTable {
 public:
  explicit RadialTable(const Model& m);

  // Radius for quantile u in [0, 1).
  double sample(double u) const;

  const Model& model() const { return model_; }
  double cdf_at(double r) const;  // P(|X| <= r), assembled from the table
  double max_knot() const { return knots_.back(); }

 private:
  double segment_mass(double lo, double hi) const;

  Model model_;
  std::vector<double> knots_;  // knots_[0] = 0
  std::vector<double> cdf_;    // cdf_[i] = P(|X| <= knots_[i])
};

struct PointCloud {
  Model model;
  std::uint64_t seed = 0;
  Eigen::MatrixXd points;  // d x n, one point per column
};

// n i.i.d. points: radius by inverse CDF, direction uniform on the sphere.
PointCloud sample_cloud(const Model& m, const RadialTable& table, int n,
                        std::uint64_t seed);
PointCloud sample_cloud(const Model& m, int n, std::uint64_t seed);

}  // namespace crackle
