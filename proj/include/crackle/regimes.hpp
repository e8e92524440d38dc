#pragma once

#include <string>
#include <vector>

#include "crackle/density.hpp"

namespace crackle {

// Growth rules for the cutoff radius R_n.  The power-law cases follow the
// three example choices for heavy tails; the exp cases follow the two
// example choices for stretched-exponential tails; custom is
// R_n = A n^p (log n)^q for classifier experiments.
enum class RadiusRule {
  power_case_i,    // (log n)^{-xi} n^{1/(alpha - d/(k+2))},      xi > 0
  power_case_ii,   // n^{1/(alpha - d/b)},                        b > k+2
  power_case_iii,  // (c n)^{1/alpha},                            c > C e omega_d
  exp_case_i,      // psi^{-1}(log n + b log log n),  b in (0, (d-tau)/(tau(k+2)))
  exp_case_ii,     // (tau log n + log c1)^{1/tau},   c1 > (C e omega_d)^tau
  custom,
};

struct RegimeSpec {
  Model model;
  int k = 1;
  RadiusRule rule = RadiusRule::power_case_i;
  double xi = 0.0;
  double b = 0.0;
  double c = 0.0;
  double c1 = 0.0;
  double A = 1.0, p = 0.0, q = 0.0;  // custom rule parameters
};

void validate(const RegimeSpec& spec);

double radius_at(const RegimeSpec& spec, double n);

// Annulus radii ladder (d+2 entries, descending from +inf to 0): the
// critical radii separating the occupancy regimes of i-point clusters,
// i = 0..d+1 slots.
std::vector<double> annulus_radii(const Model& m, double n);

// Scalers of the two strong laws: rho = n^{k+2} R^d f(R)^{k+2} and
// eta = n^{k+2} a(R) R^{d-1} f(R)^{k+2}, evaluated in log space.
double rho_n(const Model& m, int k, double n, double R);
double eta_n(const Model& m, int k, double n, double R);

// Solve n f(R) = 1 by bisection to relative tolerance 1e-10; domain error
// when n f(0) <= 1 (no core).
double weak_core_radius(const Model& m, double n);

// The SLLN normalizer attached to each rule's limit law.
double scaler_at(const RegimeSpec& spec, double n);

// nf(R_n) at n.
double cluster_intensity(const RegimeSpec& spec, double n);

struct RegimeReport {
  std::string label;  // sparse-CLT-regime | weak-core-regime | poisson-regime | degenerate
  double lambda_hat = 0.0;
  double loglog_slope = 0.0;  // slope of log scaler vs log log n (side-condition probe)
  std::vector<double> probe_n;
  std::vector<double> probe_nf;
  std::vector<double> probe_scaler;
};

RegimeReport classify_regime(const RegimeSpec& spec,
                             std::vector<double> probe_n = {1e6, 1e8, 1e10,
                                                            1e12});

}  // namespace crackle
