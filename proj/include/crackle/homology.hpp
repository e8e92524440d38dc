#pragma once

#include "crackle/cech.hpp"

namespace crackle {

// Betti number over GF(2): beta_k = #k-simplices - rank d_k - rank d_{k+1}.
// The complex must carry simplices up to dimension k+1 (or have dim_cap = k+1
// with higher simplices absent by construction) for the answer to be the
// Betti number of the underlying space.
long betti(const Complex& cx, int k);

// Rank of the boundary map from dim-m simplices to their faces (GF(2)),
// computed by bit-packed column elimination.  rank of d_0 is 0.
long boundary_rank(const Complex& cx, int m);

// Independent oracle: same numbers via naive dense Gaussian elimination.
long betti_naive(const Complex& cx, int k);

}  // namespace crackle
