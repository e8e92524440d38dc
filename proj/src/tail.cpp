#include "crackle/tail.hpp"

#include <algorithm>
#include <map>

#include "crackle/geometry.hpp"
#include "crackle/homology.hpp"

namespace crackle {

namespace {

void require_valid_k(const Eigen::MatrixXd& pts, int k, const char* where) {
  const int d = static_cast<int>(pts.rows());
  if (k < 1 || k > d - 1)
    throw std::invalid_argument(std::string(where) +
                                ": k must lie in {1,...,d-1}");
}

// Column submatrix for one component.
Eigen::MatrixXd gather(const Eigen::MatrixXd& pts, const std::vector<int>& ids) {
  Eigen::MatrixXd sub(pts.rows(), ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) sub.col(i) = pts.col(ids[i]);
  return sub;
}

std::vector<std::vector<int>> component_members(const Eigen::MatrixXd& pts,
                                                double t) {
  auto [label, count] = components(pts, t);
  std::vector<std::vector<int>> members(count);
  for (std::size_t i = 0; i < label.size(); ++i)
    members[label[i]].push_back(static_cast<int>(i));
  return members;
}

// Is the dist<t graph on the given points connected?  (Tiny inputs only.)
bool graph_connected(const Eigen::MatrixXd& pts, double t) {
  const int m = static_cast<int>(pts.cols());
  if (m == 0) return false;
  std::vector<int> seen(m, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < m; ++w) {
      if (!seen[w] && (pts.col(v) - pts.col(w)).norm() < t) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == m;
}

// Visit all size-m subsets of ids; abort with capacity_error past `cap`.
template <class Fn>
void for_each_subset(const std::vector<int>& ids, int m, std::size_t cap,
                     std::size_t& used, Fn&& fn) {
  const int n = static_cast<int>(ids.size());
  if (m > n) return;
  std::vector<int> pick(m);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == m) {
      if (++used > cap)
        throw capacity_error("subset enumeration exceeds candidate cap");
      fn(pick);
      return;
    }
    for (int i = start; i <= n - (m - depth); ++i) {
      pick[depth] = ids[i];
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Eigen::MatrixXd tail_points(const Eigen::MatrixXd& pts, double R) {
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    if (pts.col(i).norm() >= R) keep.push_back(static_cast<int>(i));
  return gather(pts, keep);
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo))
    throw std::invalid_argument("linear_grid: need points >= 2 and hi > lo");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

long tail_betti_at(const Eigen::MatrixXd& tail, int k, double t) {
  require_valid_k(tail, k, "tail_betti_at");
  long sum = 0;
  for (const auto& ids : component_members(tail, t)) {
    if (static_cast<int>(ids.size()) < k + 2) continue;  // too few for a k-cycle
    sum += betti(build_cech(gather(tail, ids), t, k + 1), k);
  }
  return sum;
}

TailCurve tail_betti_curve(const Eigen::MatrixXd& tail, int k,
                           const std::vector<double>& grid) {
  TailCurve curve;
  curve.t = grid;
  curve.beta.reserve(grid.size());
  for (double t : grid) curve.beta.push_back(tail_betti_at(tail, k, t));
  return curve;
}

long tail_betti_global(const Eigen::MatrixXd& tail, int k, double t) {
  require_valid_k(tail, k, "tail_betti_global");
  return betti(build_cech(tail, t, k + 1), k);
}

std::vector<ProfileEntry> component_profile(const Eigen::MatrixXd& tail, int k,
                                            double t) {
  require_valid_k(tail, k, "component_profile");
  std::map<std::pair<int, long>, long> hist;
  for (const auto& ids : component_members(tail, t)) {
    const int i = static_cast<int>(ids.size());
    if (i < k + 2) continue;
    long j = betti(build_cech(gather(tail, ids), t, k + 1), k);
    if (j >= 1) ++hist[{i, j}];
  }
  std::vector<ProfileEntry> out;
  out.reserve(hist.size());
  for (const auto& [key, count] : hist)
    out.push_back({key.first, key.second, count});
  return out;
}

TailCurve truncated_betti_curve(const Eigen::MatrixXd& tail, int k,
                                const std::vector<double>& grid, int M) {
  require_valid_k(tail, k, "truncated_betti_curve");
  if (M < k + 2)
    throw std::invalid_argument("truncated_betti_curve: M below k+2");
  TailCurve curve;
  curve.t = grid;
  curve.beta.reserve(grid.size());
  for (double t : grid) {
    long sum = 0;
    for (const auto& ids : component_members(tail, t)) {
      const int i = static_cast<int>(ids.size());
      if (i < k + 2 || i > M) continue;
      sum += betti(build_cech(gather(tail, ids), t, k + 1), k);
    }
    curve.beta.push_back(sum);
  }
  return curve;
}

bool cycle_indicator(const Eigen::MatrixXd& pts, int k, long j, double t) {
  if (pts.cols() == 0) return false;
  if (!graph_connected(pts, t)) return false;
  return betti(build_cech(pts, t, k + 1), k) == j;
}

bool minimal_cycle_indicator(const Eigen::MatrixXd& pts, double r) {
  const int m = static_cast<int>(pts.cols());
  if (meb_radius(pts) < r) return false;  // top cell present: ball, not cycle
  Eigen::MatrixXd face(pts.rows(), m - 1);
  for (int omit = 0; omit < m; ++omit) {
    int c = 0;
    for (int i = 0; i < m; ++i)
      if (i != omit) face.col(c++) = pts.col(i);
    if (!(meb_radius(face) < r)) return false;
  }
  return true;
}

long minimal_cycle_count(const Eigen::MatrixXd& tail, int k, double t,
                         std::size_t cap) {
  require_valid_k(tail, k, "minimal_cycle_count");
  const int m = k + 2;
  // Candidate total first: fail fast, never truncate.
  std::size_t candidates = 0;
  auto members = component_members(tail, t);
  for (const auto& ids : members) {
    long c = binomial(static_cast<int>(ids.size()), m);
    candidates += static_cast<std::size_t>(c);
    if (candidates > cap)
      throw capacity_error("minimal_cycle_count: candidate subsets exceed cap");
  }
  long count = 0;
  std::size_t used = 0;
  const double r = 0.5 * t;
  for (const auto& ids : members) {
    for_each_subset(ids, m, cap, used, [&](const std::vector<int>& pick) {
      if (minimal_cycle_indicator(gather(tail, pick), r)) ++count;
    });
  }
  return count;
}

SandwichResult sandwich_check(const Eigen::MatrixXd& tail, int k, double t,
                              std::size_t cap) {
  require_valid_k(tail, k, "sandwich_check");
  SandwichResult res;
  res.binom = binomial(k + 3, k + 1);
  res.beta = tail_betti_at(tail, k, t);
  auto members = component_members(tail, t);
  std::size_t candidates = 0;
  for (const auto& ids : members) {
    const int i = static_cast<int>(ids.size());
    if (i == k + 2 &&
        betti(build_cech(gather(tail, ids), t, k + 1), k) == 1)
      ++res.lower;
    candidates += static_cast<std::size_t>(binomial(i, k + 3));
    if (candidates > cap)
      throw capacity_error("sandwich_check: candidate subsets exceed cap");
  }
  std::size_t used = 0;
  for (const auto& ids : members) {
    for_each_subset(ids, k + 3, cap, used, [&](const std::vector<int>& pick) {
      if (graph_connected(gather(tail, pick), t)) ++res.l_count;
    });
  }
  res.holds = res.lower <= res.beta &&
              res.beta <= res.lower + res.binom * res.l_count;
  return res;
}

}  // namespace crackle
