#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace crackle {

// Simplicial complex with simplices stored per dimension, each simplex an
// ascending vertex list; within a dimension the lists are lexicographically
// sorted (the construction emits them in that order).
struct Complex {
  int dim_cap = 0;
  std::vector<std::vector<std::vector<int>>> simplices;  // [dim][index] -> vertices

  std::size_t count(int dim) const {
    if (dim < 0 || dim > dim_cap) return 0;
    return simplices[dim].size();
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (const auto& level : simplices) s += level.size();
    return s;
  }
};

// Čech complex at scale t: a finite set spans a simplex iff its smallest
// enclosing ball has radius strictly less than t/2 (equivalently, the open
// balls of radius t/2 about the vertices share a point).  Pairs reduce to
// dist < t.  Built by depth-first clique expansion with monotone pruning
// (the enclosing radius can only grow under supersets).
Complex build_cech(const Eigen::MatrixXd& pts, double t, int dim_cap);

// Connected-component labels of the scale-t proximity graph (edges at
// dist < t), plus the component count.
std::pair<std::vector<int>, int> components(const Eigen::MatrixXd& pts,
                                            double t);

}  // namespace crackle
