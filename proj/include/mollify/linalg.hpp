#pragma once

#include <vector>

#include "mollify/poly.hpp"

namespace mollify {

/// Least-squares solution of A x = b for a dense complex matrix with at least
/// as many rows as columns, by Householder QR. A is row-major.
std::vector<Cx> least_squares(std::vector<std::vector<Cx>> a, std::vector<Cx> b);

}  // namespace mollify
