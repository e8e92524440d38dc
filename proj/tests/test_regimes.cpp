#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crackle/regimes.hpp"

using namespace crackle;
using std::numbers::pi;

namespace {

RegimeSpec power_spec(RadiusRule rule, double alpha) {
  RegimeSpec s;
  s.model = make_power_law(2, alpha);
  s.k = 1;
  s.rule = rule;
  return s;
}

RegimeSpec exp_spec(RadiusRule rule, double tau) {
  RegimeSpec s;
  s.model = make_exponential(2, tau);
  s.k = 1;
  s.rule = rule;
  return s;
}

}  // namespace

TEST_CASE("parameter range validation per rule") {
  RegimeSpec s = power_spec(RadiusRule::power_case_i, 4.0);
  s.xi = 0.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.xi = 0.5;
  CHECK_NOTHROW(validate(s));
  s.k = 0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.k = 2;  // k <= d-1 = 1
  CHECK_THROWS_AS(validate(s), std::invalid_argument);

  RegimeSpec s2 = power_spec(RadiusRule::power_case_ii, 4.0);
  s2.b = 3.0;  // needs b > k+2 = 3, strictly
  CHECK_THROWS_AS(validate(s2), std::invalid_argument);
  s2.b = 3.5;
  CHECK_NOTHROW(validate(s2));

  RegimeSpec s3 = power_spec(RadiusRule::power_case_iii, 4.0);
  double cew = s3.model.C * std::numbers::e * ball_volume(2);
  s3.c = cew;
  CHECK_THROWS_AS(validate(s3), std::invalid_argument);
  s3.c = 1.01 * cew;
  CHECK_NOTHROW(validate(s3));

  RegimeSpec s4 = exp_spec(RadiusRule::exp_case_i, 0.5);
  s4.b = 0.0;
  CHECK_THROWS_AS(validate(s4), std::invalid_argument);
  s4.b = 1.0;  // cap is (2-0.5)/(0.5*3) = 1
  CHECK_THROWS_AS(validate(s4), std::invalid_argument);
  s4.b = 0.3;
  CHECK_NOTHROW(validate(s4));

  RegimeSpec s5 = exp_spec(RadiusRule::exp_case_ii, 0.75);
  double cap = std::pow(s5.model.C * std::numbers::e * pi, 0.75);
  s5.c1 = cap * 0.99;
  CHECK_THROWS_AS(validate(s5), std::invalid_argument);
  s5.c1 = 1.5;
  CHECK_NOTHROW(validate(s5));

  // Family mismatches are rejected.
  RegimeSpec wrong = exp_spec(RadiusRule::power_case_i, 0.5);
  wrong.xi = 0.5;
  CHECK_THROWS_AS(validate(wrong), std::invalid_argument);

  RegimeSpec custom = power_spec(RadiusRule::custom, 4.0);
  custom.A = 0.0;
  CHECK_THROWS_AS(validate(custom), std::invalid_argument);
}

TEST_CASE("cutoff radii match hand arithmetic") {
  RegimeSpec ii = power_spec(RadiusRule::power_case_ii, 4.0);
  ii.b = 4.0;  // R = n^{1/(4 - 2/4)} = n^{2/7}
  CHECK(radius_at(ii, 1e4) ==
        doctest::Approx(13.89495494373137637).epsilon(1e-12));

  RegimeSpec i = power_spec(RadiusRule::power_case_i, 5.0);
  i.xi = 0.2;  // R = (log n)^{-1/5} n^{3/13}
  CHECK(radius_at(i, 1e6) ==
        doctest::Approx(14.33976376591764433).epsilon(1e-12));

  RegimeSpec iii = power_spec(RadiusRule::power_case_iii, 4.0);
  iii.c = 2.0;
  CHECK(radius_at(iii, 8.0) == doctest::Approx(2.0).epsilon(1e-14));

  RegimeSpec ei = exp_spec(RadiusRule::exp_case_i, 1.0);
  ei.b = 0.25;  // psi = r, so R = log n + b log log n
  CHECK(radius_at(ei, std::exp(10.0)) ==
        doctest::Approx(10.57564627324851142).epsilon(1e-12));

  RegimeSpec eii = exp_spec(RadiusRule::exp_case_ii, 0.75);
  eii.c1 = 1.5;  // R = (0.75 log n + log 1.5)^{4/3}
  CHECK(radius_at(eii, 1e6) ==
        doctest::Approx(23.77560385534858626).epsilon(1e-12));

  RegimeSpec cu = power_spec(RadiusRule::custom, 4.0);
  cu.A = 2.0;
  cu.p = 0.5;
  cu.q = -1.0;
  CHECK(radius_at(cu, 1e4) ==
        doctest::Approx(2.0 * 100.0 / std::log(1e4)).epsilon(1e-13));

  CHECK_THROWS_AS(radius_at(ii, 2.0), std::domain_error);  // log n <= 1
}

TEST_CASE("scalers match their defining products") {
  Model m = make_power_law(2, 4.0);
  const int k = 1;
  const double n = 500.0, R = 3.0;
  double f = m.C / (1.0 + std::pow(R, 4.0));
  CHECK(rho_n(m, k, n, R) ==
        doctest::Approx(std::pow(n, 3) * R * R * std::pow(f, 3))
            .epsilon(1e-12));

  Model e = make_exponential(2, 0.5);
  double fe = e.C * std::exp(-psi(e, R));
  double a = 1.0 / psi_prime(e, R);
  CHECK(eta_n(e, k, n, R) ==
        doctest::Approx(std::pow(n, 3) * a * R * std::pow(fe, 3))
            .epsilon(1e-12));
}

TEST_CASE("scaler dispatch per rule") {
  RegimeSpec iii = power_spec(RadiusRule::power_case_iii, 4.0);
  iii.c = 4.0;
  double n = 1e5;
  CHECK(scaler_at(iii, n) ==
        doctest::Approx(std::pow(4.0 * n, 2.0 / 4.0)).epsilon(1e-12));

  RegimeSpec eii = exp_spec(RadiusRule::exp_case_ii, 0.75);
  eii.c1 = 1.5;
  double R = radius_at(eii, n);
  CHECK(scaler_at(eii, n) ==
        doctest::Approx(std::pow(R, 2.0 - 0.75)).epsilon(1e-12));

  RegimeSpec i = power_spec(RadiusRule::power_case_i, 5.0);
  i.xi = 0.2;
  CHECK(scaler_at(i, n) ==
        doctest::Approx(rho_n(i.model, 1, n, radius_at(i, n)))
            .epsilon(1e-12));

  RegimeSpec ei = exp_spec(RadiusRule::exp_case_i, 0.5);
  ei.b = 0.1;
  CHECK(scaler_at(ei, n) ==
        doctest::Approx(eta_n(ei.model, 1, n, radius_at(ei, n)))
            .epsilon(1e-12));
}

TEST_CASE("cluster intensity is n times the density at the cutoff") {
  RegimeSpec iii = power_spec(RadiusRule::power_case_iii, 4.0);
  iii.c = 4.0;
  double n = 2e4;
  double R = radius_at(iii, n);
  CHECK(cluster_intensity(iii, n) ==
        doctest::Approx(n * iii.model.C / (1.0 + std::pow(R, 4.0)))
            .epsilon(1e-12));
}

TEST_CASE("weak core radius solves nf(R) = 1") {
  Model m = make_power_law(2, 4.0);  // C = 2/pi^2
  double n = 1e6;
  CHECK(weak_core_radius(m, n) ==
        doctest::Approx(21.21690475438036638).epsilon(1e-9));
  Model e = make_exponential(2, 0.5);  // C = 2/(3 pi)
  CHECK(weak_core_radius(e, 1e5) ==
        doctest::Approx(24.81399960951105379).epsilon(1e-9));
  CHECK_THROWS_AS(weak_core_radius(m, 1.0), std::domain_error);
}

TEST_CASE("annulus ladder: shape and closed forms") {
  Model m = make_power_law(2, 4.0);
  double n = 1e8;
  auto radii = annulus_radii(m, n);
  REQUIRE(radii.size() == static_cast<std::size_t>(m.d + 2));
  CHECK(std::isinf(radii.front()));
  CHECK(radii.back() == 0.0);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) CHECK(radii[i] > radii[i + 1]);
  CHECK(radii[1] ==
        doctest::Approx(std::pow(m.C * n, 3.0 / 10.0)).epsilon(1e-12));
  CHECK(radii[2] == doctest::Approx(std::pow(m.C * n, 0.25)).epsilon(1e-12));

  Model e = make_exponential(2, 1.0);
  auto er = annulus_radii(e, 1e8);
  REQUIRE(er.size() == 4);
  for (std::size_t i = 0; i + 1 < er.size(); ++i) CHECK(er[i] > er[i + 1]);
}

TEST_CASE("classifier labels the five canonical regimes") {
  RegimeSpec i = power_spec(RadiusRule::power_case_i, 5.0);
  i.xi = 0.2;
  CHECK(classify_regime(i).label == "sparse-CLT-regime");
  // Scaler grows polylog: slope vs log log n is xi (alpha(k+2) - d) = 2.6.
  CHECK(classify_regime(i).loglog_slope == doctest::Approx(2.6).epsilon(0.05));

  RegimeSpec ii = power_spec(RadiusRule::power_case_ii, 5.0);
  ii.b = 4.0;
  CHECK(classify_regime(ii).label == "sparse-CLT-regime");

  RegimeSpec iii = power_spec(RadiusRule::power_case_iii, 4.0);
  iii.c = 2.0 * iii.model.C * std::numbers::e * pi;
  RegimeReport riii = classify_regime(iii);
  CHECK(riii.label == "weak-core-regime");
  CHECK(riii.lambda_hat ==
        doctest::Approx(1.0 / (2.0 * std::numbers::e * pi)).epsilon(1e-6));

  RegimeSpec ei = exp_spec(RadiusRule::exp_case_i, 0.5);
  ei.b = 0.1;
  CHECK(classify_regime(ei).label == "sparse-CLT-regime");

  RegimeSpec eii = exp_spec(RadiusRule::exp_case_ii, 0.75);
  eii.c1 = 1.5;
  RegimeReport reii = classify_regime(eii);
  CHECK(reii.label == "weak-core-regime");
  // nf is exactly C c1^{-1/tau} for this rule.
  CHECK(reii.lambda_hat == doctest::Approx(0.09950594572169773).epsilon(1e-9));
}

TEST_CASE("classifier flags drifting and flat custom rules") {
  // R = n^{0.1}: nf grows without bound while the scaler also grows.
  RegimeSpec drift = power_spec(RadiusRule::custom, 4.0);
  drift.A = 1.0;
  drift.p = 0.1;
  drift.q = 0.0;
  CHECK(classify_regime(drift).label == "degenerate");

  // R = n^{0.3}: rho_n is asymptotically constant.
  RegimeSpec flat = power_spec(RadiusRule::custom, 4.0);
  flat.A = 1.0;
  flat.p = 0.3;
  flat.q = 0.0;
  CHECK(classify_regime(flat).label == "poisson-regime");

  CHECK_THROWS_AS(classify_regime(flat, {1e6, 1e8}), std::invalid_argument);
}
