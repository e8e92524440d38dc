#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace crackle {

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Parameters of the localized limit integrals.  Both describe the density
// of i-point clusters whose scale-t complex is connected with beta_k = j,
// weighted by a void probability at cluster intensity lambda.
struct MuSpec {
  int d = 2;
  int k = 1;
  int i = 3;        // cluster size, >= k+2
  long j = 1;       // beta_k value, >= 1
  double t = 1.0;   // in [0,1]
  double lambda = 0.0;
  double alpha = 4.0;  // power-law exponent, > d
  std::uint64_t budget = 100000;
  std::uint64_t inner_budget = 4096;  // union-volume hit-or-miss points
  std::uint64_t seed = 1;
};

struct XiSpec {
  int d = 2;
  int k = 1;
  int i = 3;
  long j = 1;
  double t = 1.0;
  double lambda = 0.0;
  double tau = 1.0;
  double c = 1.0;  // crackle parameter; +inf is a first-class value
  std::uint64_t budget = 100000;
  std::uint64_t inner_budget = 4096;
  std::uint64_t seed = 1;
};

MCEstimate mu_estimate(const MuSpec& spec, int threads = 1);
MCEstimate xi_estimate(const XiSpec& spec, int threads = 1);

// Weighted series total over i = k+2..M_cap, j = 1..j_cap, with the
// geometric bound on the discarded i-tail reported alongside.
struct SeriesEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double tail_bound = 0.0;
  int m_cap = 0;
  std::uint64_t seed = 0;
};

// truncated = true means the finite sum through m_cap is itself the target
// (matched against truncated Betti counts): any lambda > 0 is admissible and
// tail_bound is 0.  Otherwise lambda must lie in (0, 1/(e*omega_d)) so the
// discarded i-tail admits a geometric bound.
SeriesEstimate mu_total(int d, int k, double t, double lambda, double alpha,
                        int m_cap, long j_cap, std::uint64_t budget,
                        std::uint64_t inner_budget, std::uint64_t seed,
                        int threads = 1, bool truncated = false);
SeriesEstimate xi_total(int d, int k, double t, double lambda, double tau,
                        double c, int m_cap, long j_cap, std::uint64_t budget,
                        std::uint64_t inner_budget, std::uint64_t seed,
                        int threads = 1, bool truncated = false);

class Rng;

// Volume of the union of radius-r balls about the given centers (columns).
// d = 2 with <= 3 centers: exact inclusion-exclusion (pairwise lens areas,
// triple overlap by 1-d quadrature).  Otherwise stratified hit-or-miss in
// the tight bounding box with ~inner_budget points per call.
double union_ball_volume(const Eigen::MatrixXd& centers, double r,
                         std::uint64_t inner_budget, Rng& rng);
double union_ball_volume_exact2(const Eigen::MatrixXd& centers, double r);
double union_ball_volume_mc(const Eigen::MatrixXd& centers, double r,
                            std::uint64_t inner_budget, Rng& rng);

// Exact-by-quadrature union volume in d = 2 for any number of centers
// (slice decomposition); kept as a cross-check oracle.
double union_ball_volume_slice2(const Eigen::MatrixXd& centers, double r);

// integral over the union of e^{-inv_c <theta, z>} dz, by the same
// stratified hit-or-miss scheme.
double union_ball_exp_integral_mc(const Eigen::MatrixXd& centers, double r,
                                  const Eigen::VectorXd& theta, double inv_c,
                                  std::uint64_t inner_budget, Rng& rng);

}  // namespace crackle
