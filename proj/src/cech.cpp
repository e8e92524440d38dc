#include "crackle/cech.hpp"

#include <numeric>
#include <stdexcept>

#include "crackle/geometry.hpp"

namespace crackle {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Complex build_cech(const Eigen::MatrixXd& pts, double t, int dim_cap) {
  const int n = static_cast<int>(pts.cols());
  const int d = static_cast<int>(pts.rows());
  if (dim_cap < 0) throw std::invalid_argument("build_cech: dim_cap < 0");
  if (dim_cap > d + 1)
    throw std::invalid_argument("build_cech: dim_cap exceeds d+1");
  if (t < 0.0) throw std::invalid_argument("build_cech: negative scale");

  Complex cx;
  cx.dim_cap = dim_cap;
  cx.simplices.resize(dim_cap + 1);
  for (int v = 0; v < n; ++v) cx.simplices[0].push_back({v});
  if (dim_cap == 0 || n < 2) return cx;

  // Ascending adjacency lists of the dist < t graph.
  std::vector<std::vector<int>> nbr(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((pts.col(i) - pts.col(j)).norm() < t) nbr[i].push_back(j);

  const double r = 0.5 * t;
  std::vector<int> simplex;
  Eigen::MatrixXd sub(d, dim_cap + 1);

  // Extend `simplex` (already a valid simplex) by common upper neighbors.
  auto grow = [&](auto&& self, const std::vector<int>& cands) -> void {
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      int w = cands[ci];
      simplex.push_back(w);
      const int m = static_cast<int>(simplex.size());
      bool ok = true;
      if (m >= 3) {
        for (int i = 0; i < m; ++i) sub.col(i) = pts.col(simplex[i]);
        ok = meb_radius(sub.leftCols(m)) < r;
      }
      if (ok) {
        cx.simplices[m - 1].push_back(simplex);
        if (m - 1 < dim_cap) {
          std::vector<int> next;
          const auto& wn = nbr[w];
          std::set_intersection(cands.begin() + ci + 1, cands.end(),
                                wn.begin(), wn.end(), std::back_inserter(next));
          if (!next.empty()) self(self, next);
        }
      }
      simplex.pop_back();
    }
  };

  for (int v = 0; v < n; ++v) {
    simplex.assign(1, v);
    if (!nbr[v].empty()) grow(grow, nbr[v]);
  }
  return cx;
}

std::pair<std::vector<int>, int> components(const Eigen::MatrixXd& pts,
                                            double t) {
  const int n = static_cast<int>(pts.cols());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((pts.col(i) - pts.col(j)).norm() < t) uf.unite(i, j);
  std::vector<int> label(n, -1);
  int count = 0;
  for (int i = 0; i < n; ++i) {
    int root = uf.find(i);
    if (label[root] < 0) label[root] = count++;
    label[i] = label[root];
  }
  return {label, count};
}

}  // namespace crackle
