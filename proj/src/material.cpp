#include "vem2d/material.hpp"

#include <string>

#include "vem2d/errors.hpp"

namespace vem2d {

void validate(const Material& m) {
    if (!(m.youngs_modulus > 0.0)) {
        throw ValidationError("Young's modulus must be positive, got " +
                              std::to_string(m.youngs_modulus));
    }
    if (!(m.poisson_ratio > -1.0 && m.poisson_ratio < 0.5)) {
        throw ValidationError("Poisson's ratio must lie in (-1, 0.5), got " +
                              std::to_string(m.poisson_ratio));
    }
}

Eigen::Matrix3d moduli_matrix(const Material& m) {
    validate(m);
    const double E = m.youngs_modulus;
    const double nu = m.poisson_ratio;
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    if (m.mode == PlaneMode::PlaneStress) {
        const double f = E / (1.0 - nu * nu);
        C(0, 0) = f;
        C(1, 1) = f;
        C(0, 1) = f * nu;
        C(1, 0) = f * nu;
        C(2, 2) = f * 0.5 * (1.0 - nu);
    } else {
        const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
        C(0, 0) = f * (1.0 - nu);
        C(1, 1) = f * (1.0 - nu);
        C(0, 1) = f * nu;
        C(1, 0) = f * nu;
        C(2, 2) = f * 0.5 * (1.0 - 2.0 * nu);
    }
    return C;
}

} // namespace vem2d
