#pragma once

#include <Eigen/Dense>

namespace crackle {

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p,
                double slack = 1e-10) const {
    return (p - center).norm() <= radius * (1.0 + slack) + 1e-14;
  }
};

// Max pairwise distance.  Points are columns.
template <typename Derived>
double diameter(const Eigen::MatrixBase<Derived>& pts) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j)
      best = std::max(best, (pts.col(i) - pts.col(j)).norm());
  return best;
}

template <typename Derived>
double min_norm(const Eigen::MatrixBase<Derived>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    best = std::min(best, pts.col(i).norm());
  return best;
}

// Smallest ball with every column of `support` on its boundary (the support
// points are assumed affinely independent; rank deficiency is handled by a
// least-squares solve).
Ball circumsphere(const Eigen::MatrixXd& support);

// Smallest enclosing ball, Welzl's move-to-front algorithm with a
// post-verification pass; falls back to support-subset enumeration if the
// recursion is defeated by degeneracy.
Ball min_enclosing_ball(const Eigen::MatrixXd& pts);

double meb_radius(const Eigen::MatrixXd& pts);

// Exhaustive minimum over circumspheres of all support subsets of size
// <= d+1 that enclose every point.  Exponential; used as oracle and as the
// robust fallback.
Ball min_enclosing_ball_enumerated(const Eigen::MatrixXd& pts);

}  // namespace crackle
