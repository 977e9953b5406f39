#pragma once

// Independent boundary-quadrature oracle: integrates the shape-function /
// polynomial-stress pairings edge by edge with 2-point Gauss quadrature, with
// hat functions interpolated linearly along each edge. Structurally separate
// from the vertex-rule implementation it checks.

#include <cmath>

#include <Eigen/Dense>

#include "vem2d/element.hpp"
#include "vem2d/material.hpp"

namespace testsupport {

inline Eigen::MatrixXd gauss_B_tilde(const vem2d::ElementGeometry& geom,
                                     const vem2d::Material& mat) {
    const int n = geom.vertex_count();
    const Eigen::Matrix3d C = vem2d::moduli_matrix(mat);
    const vem2d::BasisStrains strains = vem2d::basis_strains(geom.frame);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(vem2d::kBasisSize, 2 * n);

    const double offset = 0.5 / std::sqrt(3.0);
    const double gauss_pts[2] = {0.5 - offset, 0.5 + offset};

    for (int alpha = 3; alpha < vem2d::kBasisSize; ++alpha) {
        const Eigen::Vector3d sv = C * strains.col(alpha);
        Eigen::Matrix2d sigma;
        sigma << sv(0), sv(2), sv(2), sv(1);
        for (int j = 0; j < n; ++j) {
            const vem2d::EdgeData& edge = geom.edges[static_cast<size_t>(j)];
            const int a = j;
            const int b = (j + 1) % n;
            const vem2d::Vec2 flux = sigma * edge.normal;
            for (double s : gauss_pts) {
                const double w = edge.length / 2.0;
                // Hat function of vertex a is 1-s along this edge, of b is s;
                // all other shape functions vanish on it.
                B(alpha, 2 * a) += (1.0 - s) * flux.x() * w;
                B(alpha, 2 * a + 1) += (1.0 - s) * flux.y() * w;
                B(alpha, 2 * b) += s * flux.x() * w;
                B(alpha, 2 * b + 1) += s * flux.y() * w;
            }
        }
    }
    return B;
}

} // namespace testsupport
