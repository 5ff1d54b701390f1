#pragma once

#include "a4cb/laurent.hpp"

#include <optional>
#include <vector>

namespace a4cb {

// dense matrix over Z[v,v^-1] for fraction-free elimination
using LaurentMatrix = std::vector<std::vector<LaurentPoly>>;

// Bareiss fraction-free forward elimination, row swaps only.
// Returns the rank; on return m is in echelon form with exact entries.
int ff_rank(LaurentMatrix m);

// Solve A x = b exactly where a solution with Laurent-polynomial entries is
// known to exist and the columns of A are linearly independent.
// Returns nullopt if the system is inconsistent or a division fails
// (i.e. no Laurent solution).
std::optional<std::vector<LaurentPoly>> ff_solve(LaurentMatrix a, std::vector<LaurentPoly> b);

}  // namespace a4cb
