#include "crackle/homology.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace crackle {

namespace {

// Index of a sorted vertex list within the (lexicographically sorted)
// simplex list of its dimension.
std::size_t face_index(const std::vector<std::vector<int>>& level,
                       const std::vector<int>& face) {
  auto it = std::lower_bound(level.begin(), level.end(), face);
  if (it == level.end() || *it != face)
    throw std::logic_error("homology: missing face (complex not closed)");
  return static_cast<std::size_t>(it - level.begin());
}

}  // namespace

long boundary_rank(const Complex& cx, int m) {
  if (m <= 0 || m > cx.dim_cap) return 0;
  const auto& rows = cx.simplices[m - 1];
  const auto& cols = cx.simplices[m];
  if (cols.empty()) return 0;
  const std::size_t words = (rows.size() + 63) / 64;

  // pivots[r] = column currently owning pivot row r (top set bit), else empty.
  std::vector<std::vector<std::uint64_t>> pivots(rows.size());
  long rank = 0;
  std::vector<std::uint64_t> col(words);
  std::vector<int> face;
  for (const auto& simplex : cols) {
    std::fill(col.begin(), col.end(), 0);
    face.assign(simplex.begin() + 1, simplex.end());
    for (std::size_t omit = 0;; ++omit) {
      std::size_t r = face_index(rows, face);
      col[r >> 6] ^= 1ull << (r & 63);
      if (omit == simplex.size() - 1) break;
      face[omit] = simplex[omit];  // slide the omitted vertex one right
    }
    for (;;) {
      constexpr std::size_t none = static_cast<std::size_t>(-1);
      std::size_t top = none;
      for (std::size_t w = words; w-- > 0;) {
        if (col[w]) {
          top = (w << 6) + (63 - static_cast<std::size_t>(
                                     __builtin_clzll(col[w])));
          break;
        }
      }
      if (top == none) break;  // column reduced to zero
      auto& owner = pivots[top];
      if (owner.empty()) {
        owner = col;
        ++rank;
        break;
      }
      for (std::size_t w = 0; w < words; ++w) col[w] ^= owner[w];
    }
  }
  return rank;
}

long betti(const Complex& cx, int k) {
  if (k < 0 || k > cx.dim_cap)
    throw std::invalid_argument("betti: k outside the complex's dimensions");
  return static_cast<long>(cx.count(k)) - boundary_rank(cx, k) -
         boundary_rank(cx, k + 1);
}

namespace {

long dense_rank(const Complex& cx, int m) {
  if (m <= 0 || m > cx.dim_cap) return 0;
  const auto& rows = cx.simplices[m - 1];
  const auto& cols = cx.simplices[m];
  if (cols.empty()) return 0;
  std::vector<std::vector<std::uint8_t>> a(
      rows.size(), std::vector<std::uint8_t>(cols.size(), 0));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& simplex = cols[c];
    std::vector<int> face(simplex.begin() + 1, simplex.end());
    for (std::size_t omit = 0;; ++omit) {
      a[face_index(rows, face)][c] = 1;
      if (omit == simplex.size() - 1) break;
      face[omit] = simplex[omit];
    }
  }
  long rank = 0;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols.size() && row < rows.size(); ++c) {
    std::size_t pivot = row;
    while (pivot < rows.size() && a[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(a[pivot], a[row]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != row && a[r][c]) {
        for (std::size_t cc = c; cc < cols.size(); ++cc) a[r][cc] ^= a[row][cc];
      }
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace

long betti_naive(const Complex& cx, int k) {
  if (k < 0 || k > cx.dim_cap)
    throw std::invalid_argument("betti_naive: k outside the complex's dimensions");
  return static_cast<long>(cx.count(k)) - dense_rank(cx, k) -
         dense_rank(cx, k + 1);
}

}  // namespace crackle
