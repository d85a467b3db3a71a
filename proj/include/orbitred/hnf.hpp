#pragma once

#include <vector>

#include "orbitred/rational.hpp"
#include "orbitred/vec.hpp"

namespace orbitred {

using IntRow = std::vector<Integer>;

// Lower-left Hermite normal form of the lattice spanned by `rows` (all of
// length `cols`). Zero rows are dropped. Row i has its last non-zero entry
// (the pivot, positive) at column p_i with p_0 < p_1 < ...; entries of a
// row at an earlier pivot column p_j lie in [0, pivot_j). Consequently the
// rows supported on the first k columns form a Z-basis of the sublattice
// L ∩ Z^k, for every k.
std::vector<IntRow> lower_hermite_form(std::vector<IntRow> rows, std::size_t cols);

// Column index of the last non-zero entry; rows must be non-zero.
std::size_t pivot_column(const IntRow& row);

// Same form for rational vectors: scale by a common denominator, reduce,
// scale back.
std::vector<RVec> lower_hermite_basis(const std::vector<RVec>& generators, std::size_t dim);

}  // namespace orbitred
