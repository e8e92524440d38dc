#include "crackle/geometry.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace crackle {

namespace {

// Recursive Welzl step: smallest ball enclosing pts[0..end) with all of
// `support` on the boundary.
Ball welzl(Eigen::MatrixXd& pts, int end, Eigen::MatrixXd& support,
           int n_support) {
  const int d = static_cast<int>(pts.rows());
  if (end == 0 || n_support == d + 1)
    return circumsphere(support.leftCols(n_support));
  Ball b = welzl(pts, end - 1, support, n_support);
  if (b.radius >= 0.0 && b.contains(pts.col(end - 1))) return b;
  support.col(n_support) = pts.col(end - 1);
  b = welzl(pts, end - 1, support, n_support + 1);
  // Move-to-front: keep boundary-defining points early so later scans
  // terminate quickly.
  Eigen::VectorXd p = pts.col(end - 1);
  for (int i = end - 1; i > 0; --i) pts.col(i) = pts.col(i - 1);
  pts.col(0) = p;
  return b;
}

}  // namespace

Ball circumsphere(const Eigen::MatrixXd& support) {
  const int m = static_cast<int>(support.cols());
  Ball b;
  if (m == 0) {
    b.center = Eigen::VectorXd::Zero(support.rows());
    b.radius = -1.0;  // contains nothing
    return b;
  }
  if (m == 1) {
    b.center = support.col(0);
    b.radius = 0.0;
    return b;
  }
  // Center lies in the affine hull: c = p0 + Q lambda with Q = [p_i - p0].
  // Equal distances give 2 Q^T Q lambda = (|p_i - p0|^2)_i.
  Eigen::MatrixXd q = support.rightCols(m - 1).colwise() - support.col(0);
  Eigen::MatrixXd gram = 2.0 * (q.transpose() * q);
  Eigen::VectorXd rhs = q.colwise().squaredNorm();
  Eigen::VectorXd lambda =
      gram.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd offset = q * lambda;
  b.center = support.col(0) + offset;
  b.radius = offset.norm();
  // Guard against rank-deficient support: report the max distance actually
  // realised so the caller's containment checks stay truthful.
  for (int i = 1; i < m; ++i)
    b.radius = std::max(b.radius, (support.col(i) - b.center).norm());
  return b;
}

Ball min_enclosing_ball(const Eigen::MatrixXd& pts) {
  const int m = static_cast<int>(pts.cols());
  const int d = static_cast<int>(pts.rows());
  if (m == 0) throw std::invalid_argument("min_enclosing_ball: no points");
  Eigen::MatrixXd work = pts;
  Eigen::MatrixXd support(d, d + 2);
  Ball b = welzl(work, m, support, 0);
  for (int i = 0; i < m; ++i) {
    if (!b.contains(pts.col(i), 1e-9)) return min_enclosing_ball_enumerated(pts);
  }
  return b;
}

double meb_radius(const Eigen::MatrixXd& pts) {
  return min_enclosing_ball(pts).radius;
}

Ball min_enclosing_ball_enumerated(const Eigen::MatrixXd& pts) {
  const int m = static_cast<int>(pts.cols());
  const int d = static_cast<int>(pts.rows());
  if (m == 0) throw std::invalid_argument("min_enclosing_ball: no points");
  const int max_support = std::min(m, d + 1);
  Ball best;
  best.radius = std::numeric_limits<double>::infinity();
  std::vector<int> idx;
  // Enumerate support subsets of each size; keep the smallest covering ball.
  auto consider = [&](const std::vector<int>& subset) {
    Eigen::MatrixXd s(d, subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) s.col(i) = pts.col(subset[i]);
    Ball b = circumsphere(s);
    if (b.radius >= best.radius) return;
    for (int i = 0; i < m; ++i)
      if (!b.contains(pts.col(i), 1e-12)) return;
    best = b;
  };
  // Iterative subset enumeration up to max_support elements.
  std::vector<int> stack;
  auto recurse = [&](auto&& self, int start) -> void {
    if (!stack.empty()) consider(stack);
    if (static_cast<int>(stack.size()) == max_support) return;
    for (int i = start; i < m; ++i) {
      stack.push_back(i);
      self(self, i + 1);
      stack.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace crackle
