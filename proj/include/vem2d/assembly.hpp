#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vem2d/element.hpp"
#include "vem2d/mesh.hpp"
#include "vem2d/problem.hpp"

namespace vem2d {

/// Element-loop execution policy. Parallel uses OpenMP when available and is
/// bit-identical to Serial: each element writes its stiffness block into a
/// preassigned triplet range, so the summation order never depends on the
/// thread count. Serial is the reference path kept for testing.
enum class Execution { Serial, Parallel };

/// Global stiffness, load vector, and homogeneous-or-prescribed constraints.
/// Dof numbering is 2*node + component.
struct GlobalSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd F;
    std::vector<std::pair<int, double>> constraints; // (dof, prescribed value), sorted

    int dof_count() const { return static_cast<int>(K.rows()); }
};

/// Scatters element stiffness matrices into the global K. F starts zero and
/// no constraints are attached; see assemble_loads / apply_load_case.
GlobalSystem assemble(const Mesh& mesh, const Material& mat, const Stabilization& stab,
                      double thickness = 1.0, Execution exec = Execution::Parallel);

/// Point loads scattered into a dense global vector.
Eigen::VectorXd assemble_loads(const Mesh& mesh, const LoadCase& loads);

/// Sets F from the load case and records its Dirichlet constraints.
void apply_load_case(GlobalSystem& system, const Mesh& mesh, const LoadCase& loads);

struct SolveOptions {
    double tolerance = 1e-10; // relative residual bound
};

/// Direct sparse symmetric solve of the reduced system (constrained dofs
/// eliminated symmetrically), with a diagonally preconditioned conjugate
/// gradient fallback. Returns the full displacement vector with prescribed
/// values in place. Throws NumericalError if the reduced matrix is not
/// positive definite or the residual bound cannot be met.
Eigen::VectorXd solve(const GlobalSystem& system, const SolveOptions& options = {});

/// Per-element k_E * u_E scattered into a global vector; equals K * u.
Eigen::VectorXd global_internal_force(const Mesh& mesh, const Material& mat,
                                      const Stabilization& stab, double thickness,
                                      const Eigen::VectorXd& u,
                                      Execution exec = Execution::Parallel);

/// K*u - F at constrained dofs, zero elsewhere.
Eigen::VectorXd reactions(const GlobalSystem& system, const Eigen::VectorXd& u);

/// Element dof gather in interleaved (x,y) order.
Eigen::VectorXd gather_element_dofs(const Eigen::VectorXd& u, const std::vector<int>& element);

/// Cross-checks the boundary-quadrature G_tilde against B_tilde * D for every
/// element (1e-9 relative). Throws NumericalError naming the first element
/// that fails.
void verify_element_quadrature(const Mesh& mesh, const Material& mat);

} // namespace vem2d
