#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "crackle/cech.hpp"

namespace crackle {

// Raised when a subset enumeration would exceed its candidate cap; callers
// must either raise the cap or shrink the input, never truncate silently.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_subset_cap = 1'000'000;

// Columns of pts with norm >= R (the closed complement of the open ball).
Eigen::MatrixXd tail_points(const Eigen::MatrixXd& pts, double R);

std::vector<double> linear_grid(double lo, double hi, int points);

struct TailCurve {
  std::vector<double> t;
  std::vector<long> beta;
};

// beta_k of the scale-t Čech complex on the tail points, as the sum of
// per-component Betti numbers (components don't interact homologically).
long tail_betti_at(const Eigen::MatrixXd& tail, int k, double t);
TailCurve tail_betti_curve(const Eigen::MatrixXd& tail, int k,
                           const std::vector<double>& grid);

// Same number from one global complex and a single elimination; an
// independent route kept for identity checks.
long tail_betti_global(const Eigen::MatrixXd& tail, int k, double t);

// Occupancy census: count of connected components with i vertices and
// beta_k = j (entries with j >= 1 only), sorted by (i, j).
struct ProfileEntry {
  int i;
  long j;
  long count;
};
std::vector<ProfileEntry> component_profile(const Eigen::MatrixXd& tail, int k,
                                            double t);

// Betti process restricted to components with at most M vertices.
TailCurve truncated_betti_curve(const Eigen::MatrixXd& tail, int k,
                                const std::vector<double>& grid, int M);

// Indicator: the scale-t Čech complex on pts is connected with beta_k = j.
bool cycle_indicator(const Eigen::MatrixXd& pts, int k, long j, double t);

// Fast equivalent of cycle_indicator(pts, k, 1, t) for |pts| = k+2, phrased
// via enclosing-ball radii: every leave-one-out subset fits in an open ball
// of radius `r` and the full set does not.  r = t/2 matches the complex
// convention used everywhere here; r = t reproduces the doubled-scale
// variant (equal to cycle_indicator at 2t).
bool minimal_cycle_indicator(const Eigen::MatrixXd& pts, double r);

// Number of (k+2)-subsets of the tail whose scale-t complex is connected
// with beta_k = 1.  Enumeration stays inside single components; throws
// capacity_error if the candidate count exceeds `cap`.
long minimal_cycle_count(const Eigen::MatrixXd& tail, int k, double t,
                         std::size_t cap = default_subset_cap);

// Two-sided bound: lower = count of (k+2)-vertex components with beta_k = 1,
// upper = lower + C(k+3, k+1) * l_count with l_count the number of connected
// (k+3)-subsets.
struct SandwichResult {
  long lower = 0;
  long beta = 0;
  long l_count = 0;
  long binom = 0;
  bool holds = false;
};
SandwichResult sandwich_check(const Eigen::MatrixXd& tail, int k, double t,
                              std::size_t cap = default_subset_cap);

long binomial(int n, int k);

}  // namespace crackle
