#include "vem2d/element.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vem2d/errors.hpp"

namespace vem2d {

namespace {

// Vertex-averaged boundary weight for vertex j: half of each adjacent edge,
// scaled by that edge's outward normal. Edge j-1 wraps to the last edge for
// the first vertex.
Vec2 vertex_weight(const std::vector<EdgeData>& edges, int j) {
    const int n = static_cast<int>(edges.size());
    const EdgeData& prev = edges[static_cast<size_t>((j + n - 1) % n)];
    const EdgeData& next = edges[static_cast<size_t>(j)];
    return 0.5 * prev.length * prev.normal + 0.5 * next.length * next.normal;
}

Eigen::Matrix2d stress_matrix(const Eigen::Vector3d& sigma) {
    Eigen::Matrix2d s;
    s << sigma(0), sigma(2),
         sigma(2), sigma(1);
    return s;
}

} // namespace

Eigen::MatrixXd compute_D(const ElementGeometry& geom) {
    const int n = geom.vertex_count();
    Eigen::MatrixXd D(2 * n, kBasisSize);
    for (int j = 0; j < n; ++j) {
        const BasisEval p = eval_basis(geom.frame, geom.polygon.vertex(j));
        D.row(2 * j) = p.row(0);
        D.row(2 * j + 1) = p.row(1);
    }
    return D;
}

Eigen::MatrixXd compute_B_tilde(const ElementGeometry& geom, const Material& mat) {
    const int n = geom.vertex_count();
    const Eigen::Matrix3d C = moduli_matrix(mat);
    const BasisStrains strains = basis_strains(geom.frame);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(kBasisSize, 2 * n);
    for (int alpha = 3; alpha < kBasisSize; ++alpha) {
        const Eigen::Matrix2d sigma = stress_matrix(C * strains.col(alpha));
        for (int j = 0; j < n; ++j) {
            const Vec2 v = sigma * vertex_weight(geom.edges, j);
            B(alpha, 2 * j) = v.x();
            B(alpha, 2 * j + 1) = v.y();
        }
    }
    return B;
}

Eigen::MatrixXd compute_B_breve(int vertex_count, const Eigen::MatrixXd& D) {
    return D.leftCols(3).transpose() / static_cast<double>(vertex_count);
}

Eigen::MatrixXd compute_B_bar(const Eigen::MatrixXd& B_tilde, const Eigen::MatrixXd& B_breve) {
    Eigen::MatrixXd B = B_tilde;
    B.topRows(3) = B_breve;
    return B;
}

Matrix6d compute_G(const Eigen::MatrixXd& B_bar, const Eigen::MatrixXd& D) {
    return B_bar * D;
}

Matrix6d compute_G_tilde(const Matrix6d& G) {
    Matrix6d Gt = G;
    Gt.topRows(3).setZero();
    return Gt;
}

Eigen::MatrixXd compute_Pi_tilde(const Matrix6d& G, const Eigen::MatrixXd& B_bar) {
    const Eigen::JacobiSVD<Matrix6d> svd(G);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12)) {
        throw NumericalError("projector system is ill-conditioned (condition estimate " +
                             std::to_string(cond) + " exceeds 1e12)");
    }
    return Eigen::PartialPivLU<Matrix6d>(G).solve(B_bar);
}

Eigen::MatrixXd compute_Pi(const Eigen::MatrixXd& D, const Eigen::MatrixXd& Pi_tilde) {
    return D * Pi_tilde;
}

ProjectorSet compute_projectors(const ElementGeometry& geom, const Material& mat) {
    ProjectorSet p;
    p.D = compute_D(geom);
    p.B_tilde = compute_B_tilde(geom, mat);
    p.B_bar = compute_B_bar(p.B_tilde, compute_B_breve(geom.vertex_count(), p.D));
    p.G = compute_G(p.B_bar, p.D);
    p.G_tilde = compute_G_tilde(p.G);
    p.Pi_tilde = compute_Pi_tilde(p.G, p.B_bar);
    p.Pi = compute_Pi(p.D, p.Pi_tilde);
    return p;
}

Eigen::MatrixXd stiffness_consistency(const Eigen::MatrixXd& Pi_tilde, const Matrix6d& G_tilde) {
    return Pi_tilde.transpose() * G_tilde * Pi_tilde;
}

Eigen::MatrixXd stiffness_stability(const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& k_c,
                                    const Material& mat, const Stabilization& stab) {
    if (!(stab.parameter > 0.0)) {
        throw ValidationError("stabilization parameter must be positive");
    }
    const Eigen::Index n_dof = Pi.rows();
    const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n_dof, n_dof) - Pi;
    if (stab.kind == Stabilization::Kind::TraceScaled) {
        // Per-dof trace scaling: tau * tr(k_c)/n_dof. The plain tau * tr(k_c)
        // factor overweights large elements and does not reproduce the
        // uniform-tension reference stiffness; the per-dof form does.
        const double s = stab.parameter * k_c.trace() / static_cast<double>(n_dof);
        return s * residual.transpose() * residual;
    }
    const double floor = stab.parameter * moduli_matrix(mat).trace() / 3.0;
    Eigen::VectorXd diag(n_dof);
    for (Eigen::Index i = 0; i < n_dof; ++i) {
        diag(i) = std::max(floor, k_c(i, i));
    }
    return residual.transpose() * diag.asDiagonal() * residual;
}

std::pair<Eigen::MatrixXd, ProjectorSet> element_stiffness(const ElementGeometry& geom,
                                                           const Material& mat,
                                                           const Stabilization& stab,
                                                           double thickness) {
    if (!(thickness > 0.0)) {
        throw ValidationError("thickness must be positive");
    }
    ProjectorSet proj = compute_projectors(geom, mat);
    const Eigen::MatrixXd k_c = stiffness_consistency(proj.Pi_tilde, proj.G_tilde);
    const Eigen::MatrixXd k_s = stiffness_stability(proj.Pi, k_c, mat, stab);
    Eigen::MatrixXd k = thickness * (k_c + k_s);
    return {std::move(k), std::move(proj)};
}

Eigen::Vector3d element_strain(const ProjectorSet& proj, const ScaledFrame& frame,
                               const Eigen::VectorXd& u_e) {
    if (u_e.size() != proj.Pi_tilde.cols()) {
        throw ValidationError("element dof vector length " + std::to_string(u_e.size()) +
                              " does not match projector size " +
                              std::to_string(proj.Pi_tilde.cols()));
    }
    return basis_strains(frame) * (proj.Pi_tilde * u_e);
}

Eigen::Vector3d element_stress(const Material& mat, const Eigen::Vector3d& strain) {
    return moduli_matrix(mat) * strain;
}

Eigen::VectorXd internal_force(const Eigen::MatrixXd& k_e, const Eigen::VectorXd& u_e) {
    return k_e * u_e;
}

Matrix6d compute_G_tilde_direct(const ElementGeometry& geom, const Material& mat) {
    const int n = geom.vertex_count();
    const Eigen::Matrix3d C = moduli_matrix(mat);
    const BasisStrains strains = basis_strains(geom.frame);
    Matrix6d Gt = Matrix6d::Zero();
    for (int alpha = 3; alpha < kBasisSize; ++alpha) {
        const Eigen::Matrix2d sigma = stress_matrix(C * strains.col(alpha));
        for (int j = 0; j < n; ++j) {
            const Vec2 flux = sigma * vertex_weight(geom.edges, j);
            const BasisEval p = eval_basis(geom.frame, geom.polygon.vertex(j));
            for (int beta = 0; beta < kBasisSize; ++beta) {
                Gt(alpha, beta) += p.col(beta).dot(flux);
            }
        }
    }
    return Gt;
}

} // namespace vem2d
