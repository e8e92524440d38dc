#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace crackle {

// Tanh-sinh rule on (a, b).  Robust to integrable endpoint singularities;
// doubles the node count per level until the relative change drops below tol.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 int max_level = 12) {
  if (!(b > a)) return 0.0;
  const double s = 0.5 * (b - a);
  const double half_pi = 0.5 * std::numbers::pi;
  const double t_max = 4.3;  // endpoint offsets underflow well past this

  // Offset from the nearer endpoint plus the shared weight, both written
  // without the tanh cancellation: 1 - tanh u = 2 e^{-2u} / (1 + e^{-2u}).
  // Keeping the offset exact lets integrable singularities at a zero
  // endpoint be resolved to machine precision.
  auto node = [&](double t, double& q, double& w) {
    double u = half_pi * std::sinh(t);
    double e2 = std::exp(-2.0 * u);
    q = s * 2.0 * e2 / (1.0 + e2);
    double sech = 2.0 * std::exp(-u) / (1.0 + e2);
    w = s * half_pi * std::cosh(t) * sech * sech;
  };

  double h = 1.0;
  double q, w;
  node(0.0, q, w);
  double sum = f(a + q) * w;  // center node, q = s
  double prev = std::numeric_limits<double>::infinity();
  for (int level = 0; level < max_level; ++level) {
    // Add nodes at odd multiples of the new step h/2 (level 0 adds h, 2h, ...).
    double step = (level == 0) ? h : h * 0.5;
    double start = (level == 0) ? h : step;
    double add = 0.0;
    for (double t = start; t <= t_max; t += (level == 0) ? h : 2.0 * step) {
      node(t, q, w);
      if (q > 0.0 && w > 0.0) {
        double xl = a + q, xr = b - q;
        if (xl > a) add += f(xl) * w;
        if (xr < b) add += f(xr) * w;
      }
    }
    sum += add;
    h = step;
    double estimate = sum * h;
    if (level > 1 && std::abs(estimate - prev) <=
                         rel_tol * std::max(std::abs(estimate), 1e-300))
      return estimate;
    prev = estimate;
  }
  return sum * h;
}

// Exp-sinh rule on (a, inf) for integrands with at least polynomial decay.
template <class F>
double integrate_tail(F&& f, double a, double rel_tol = 1e-10,
                      int max_level = 12) {
  const double half_pi = 0.5 * std::numbers::pi;
  const double t_max = 3.7;

  auto node = [&](double t, double& x, double& w) {
    double u = half_pi * std::sinh(t);
    double e = std::exp(u);
    x = a + e;
    w = half_pi * std::cosh(t) * e;
  };

  double h = 1.0;
  double x, w;
  node(0.0, x, w);
  double sum = f(x) * w;
  double prev = std::numeric_limits<double>::infinity();
  for (int level = 0; level < max_level; ++level) {
    double step = (level == 0) ? h : h * 0.5;
    double start = (level == 0) ? h : step;
    double add = 0.0;
    for (double t = start; t <= t_max; t += (level == 0) ? h : 2.0 * step) {
      node(t, x, w);
      if (std::isfinite(x) && w > 0.0 && w < 1e300) add += f(x) * w;
      node(-t, x, w);
      if (x > a && w > 0.0) add += f(x) * w;
    }
    sum += add;
    h = step;
    double estimate = sum * h;
    if (level > 1 && std::abs(estimate - prev) <=
                         rel_tol * std::max(std::abs(estimate), 1e-300))
      return estimate;
    prev = estimate;
  }
  return sum * h;
}

// Fixed-order Gauss-Legendre nodes on [-1, 1], generated once by Newton
// iteration on the Legendre recurrence and cached per order.
class GaussLegendre {
 public:
  static const GaussLegendre& order(int n) {
    static std::map<int, GaussLegendre> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
    return it->second;
  }

  template <class F>
  double apply(F&& f, double a, double b) const {
    double c = 0.5 * (a + b), s = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) sum += w_[i] * f(c + s * x_[i]);
    return s * sum;
  }

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& weights() const { return w_; }

 private:
  explicit GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
    x_.resize(n);
    w_.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      // Tricomi initial guess, then Newton on P_n.
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      x_[i] = -x;
      x_[n - 1 - i] = x;
      double wi = 2.0 / ((1.0 - x * x) * dp * dp);
      w_[i] = wi;
      w_[n - 1 - i] = wi;
    }
  }

  std::vector<double> x_, w_;
};

}  // namespace crackle
