#pragma once

#include <Eigen/Dense>

namespace vem2d {

enum class PlaneMode { PlaneStress, PlaneStrain };

/// Isotropic linear-elastic constants. Strains use engineering shear
/// (gamma_xy = 2 eps_xy), so the moduli matrix carries the matching 1/2
/// factor in its shear entry.
struct Material {
    double youngs_modulus = 1.0;
    double poisson_ratio = 0.0;
    PlaneMode mode = PlaneMode::PlaneStress;
};

/// Throws ValidationError unless E > 0 and -1 < nu < 0.5.
void validate(const Material& m);

/// 3x3 Voigt moduli matrix C for the material's plane assumption.
Eigen::Matrix3d moduli_matrix(const Material& m);

} // namespace vem2d
