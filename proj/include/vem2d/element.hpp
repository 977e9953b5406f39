#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vem2d/geometry.hpp"
#include "vem2d/material.hpp"
#include "vem2d/polybasis.hpp"

namespace vem2d {

using Matrix6d = Eigen::Matrix<double, kBasisSize, kBasisSize>;

/// Polygon plus the derived frame and edge data every element operator needs.
struct ElementGeometry {
    Polygon polygon;
    ScaledFrame frame;
    std::vector<EdgeData> edges;

    explicit ElementGeometry(Polygon p)
        : polygon(std::move(p)),
          frame{polygon.centroid(), polygon.diameter()},
          edges(polygon.edge_data()) {}

    int vertex_count() const { return polygon.vertex_count(); }
    int dof_count() const { return 2 * polygon.vertex_count(); }
};

/// Rank-completing stabilization variant and its scaling parameter.
struct Stabilization {
    enum class Kind { TraceScaled, DiagonalMax };
    Kind kind = Kind::TraceScaled;
    double parameter = 0.5; // tau for TraceScaled, alpha0 for DiagonalMax

    static Stabilization trace_scaled(double tau = 0.5) {
        return Stabilization{Kind::TraceScaled, tau};
    }
    static Stabilization diagonal_max(double alpha0 = 1.0) {
        return Stabilization{Kind::DiagonalMax, alpha0};
    }
};

/// All per-element projection matrices. Dofs are interleaved (x,y) per
/// vertex, vertices in polygon CCW order; basis columns follow the fixed
/// polynomial ordering of polybasis.
struct ProjectorSet {
    Eigen::MatrixXd D;        // 2n x 6, dof values of the basis
    Eigen::MatrixXd B_tilde;  // 6 x 2n, energy pairings (rows 1-3 zero)
    Eigen::MatrixXd B_bar;    // 6 x 2n, B_tilde with dof-average rows 1-3
    Matrix6d G;               // B_bar * D
    Matrix6d G_tilde;         // G with rows 1-3 zeroed
    Eigen::MatrixXd Pi_tilde; // 6 x 2n, projector in the polynomial basis
    Eigen::MatrixXd Pi;       // 2n x 2n, projector in the dof basis
};

Eigen::MatrixXd compute_D(const ElementGeometry& geom);
Eigen::MatrixXd compute_B_tilde(const ElementGeometry& geom, const Material& mat);
Eigen::MatrixXd compute_B_breve(int vertex_count, const Eigen::MatrixXd& D);
Eigen::MatrixXd compute_B_bar(const Eigen::MatrixXd& B_tilde, const Eigen::MatrixXd& B_breve);
Matrix6d compute_G(const Eigen::MatrixXd& B_bar, const Eigen::MatrixXd& D);
Matrix6d compute_G_tilde(const Matrix6d& G);

/// Solves G * Pi_tilde = B_bar by factorization. Throws NumericalError when
/// the condition estimate of G exceeds 1e12.
Eigen::MatrixXd compute_Pi_tilde(const Matrix6d& G, const Eigen::MatrixXd& B_bar);
Eigen::MatrixXd compute_Pi(const Eigen::MatrixXd& D, const Eigen::MatrixXd& Pi_tilde);

ProjectorSet compute_projectors(const ElementGeometry& geom, const Material& mat);

Eigen::MatrixXd stiffness_consistency(const Eigen::MatrixXd& Pi_tilde, const Matrix6d& G_tilde);
Eigen::MatrixXd stiffness_stability(const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& k_c,
                                    const Material& mat, const Stabilization& stab);

/// Total element stiffness (consistency + stability), scaled by thickness.
std::pair<Eigen::MatrixXd, ProjectorSet> element_stiffness(const ElementGeometry& geom,
                                                           const Material& mat,
                                                           const Stabilization& stab,
                                                           double thickness = 1.0);

/// Constant Voigt strain of the projected displacement field.
Eigen::Vector3d element_strain(const ProjectorSet& proj, const ScaledFrame& frame,
                               const Eigen::VectorXd& u_e);
Eigen::Vector3d element_stress(const Material& mat, const Eigen::Vector3d& strain);
Eigen::VectorXd internal_force(const Eigen::MatrixXd& k_e, const Eigen::VectorXd& u_e);

/// Direct boundary-quadrature evaluation of G_tilde, kept as a verification
/// cross-check against B_tilde * D (enabled by the --verify CLI flag).
Matrix6d compute_G_tilde_direct(const ElementGeometry& geom, const Material& mat);

} // namespace vem2d
