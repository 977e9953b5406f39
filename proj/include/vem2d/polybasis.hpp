#pragma once

#include <Eigen/Dense>

#include "vem2d/geometry.hpp"

namespace vem2d {

/// Cardinality of the linear vector polynomial basis: two translations, one
/// rotation, and three deformation monomials.
inline constexpr int kBasisSize = 6;

/// Centroid/diameter frame defining the scaled coordinates
/// xi = (x - cx)/h, eta = (y - cy)/h.
struct ScaledFrame {
    Vec2 centroid = Vec2::Zero();
    double diameter = 1.0;
};

using BasisEval = Eigen::Matrix<double, 2, kBasisSize>;
using BasisStrains = Eigen::Matrix<double, 3, kBasisSize>;

/// Columns are the six basis vectors evaluated at `point`:
/// (1,0), (0,1), (-eta,xi), (eta,xi), (xi,0), (0,eta).
BasisEval eval_basis(const ScaledFrame& frame, const Vec2& point);

/// Voigt strain of each basis vector. Columns 1-3 are zero (rigid modes);
/// the deformation columns are (0,0,2/h), (1/h,0,0), (0,1/h,0). Constant in
/// space, so no evaluation point is needed.
BasisStrains basis_strains(const ScaledFrame& frame);

} // namespace vem2d
