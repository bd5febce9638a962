#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fvm/structure.hpp"

namespace fvm {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Rows and columns in universe order.  Input must be a loopless undirected
// graph over {E/2}.
IntMatrix adjacency_matrix(const Structure& g);

// Coefficients of det(xI - M), leading coefficient first.  Exact integer
// arithmetic; throws DomainError on overflow or a non-square matrix.
std::vector<std::int64_t> char_poly(const IntMatrix& m);

bool cospectral(const Structure& g, const Structure& h);

}  // namespace fvm
