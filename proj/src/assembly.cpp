#include "vem2d/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "vem2d/errors.hpp"

namespace vem2d {

namespace {

using Triplet = Eigen::Triplet<double>;

enum class ErrorKind { None, Numerical, Validation };

[[noreturn]] void rethrow_element_error(ErrorKind kind, const std::string& message) {
    if (kind == ErrorKind::Validation) throw ValidationError(message);
    throw NumericalError(message);
}

// Runs fn(e) over all elements, serial or OpenMP. Exceptions cannot cross a
// parallel region, so the first failure is captured and rethrown with the
// 1-based element id attached.
template <typename Fn>
void for_each_element(int n_elements, Execution exec, Fn&& fn) {
    std::atomic<bool> failed{false};
    ErrorKind kind = ErrorKind::None;
    std::string first_error;
    auto run_one = [&](int e) {
        try {
            fn(e);
        } catch (const std::exception& ex) {
            const ErrorKind k = dynamic_cast<const ValidationError*>(&ex) != nullptr
                                    ? ErrorKind::Validation
                                    : ErrorKind::Numerical;
            const std::string msg = "element " + std::to_string(e + 1) + ": " + ex.what();
#ifdef _OPENMP
#pragma omp critical(vem2d_element_error)
#endif
            {
                if (!failed.exchange(true)) {
                    kind = k;
                    first_error = msg;
                }
            }
        }
    };
#ifdef _OPENMP
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int e = 0; e < n_elements; ++e) {
            if (!failed.load(std::memory_order_relaxed)) run_one(e);
        }
        if (failed) rethrow_element_error(kind, first_error);
        return;
    }
#else
    (void)exec;
#endif
    for (int e = 0; e < n_elements && !failed; ++e) {
        run_one(e);
    }
    if (failed) rethrow_element_error(kind, first_error);
}

std::vector<int> element_dof_ids(const std::vector<int>& element) {
    std::vector<int> dofs;
    dofs.reserve(2 * element.size());
    for (int node : element) {
        dofs.push_back(2 * node);
        dofs.push_back(2 * node + 1);
    }
    return dofs;
}

} // namespace

GlobalSystem assemble(const Mesh& mesh, const Material& mat, const Stabilization& stab,
                      double thickness, Execution exec) {
    const int n_elements = mesh.element_count();
    const int n_dofs = 2 * mesh.node_count();

    // Every element owns a preassigned triplet range so the scatter order is
    // independent of the execution policy.
    std::vector<size_t> offsets(static_cast<size_t>(n_elements) + 1, 0);
    for (int e = 0; e < n_elements; ++e) {
        const size_t n = 2 * mesh.elements[static_cast<size_t>(e)].size();
        offsets[static_cast<size_t>(e) + 1] = offsets[static_cast<size_t>(e)] + n * n;
    }
    std::vector<Triplet> triplets(offsets.back());

    for_each_element(n_elements, exec, [&](int e) {
        const ElementGeometry geom(element_polygon(mesh, e));
        const Eigen::MatrixXd k = element_stiffness(geom, mat, stab, thickness).first;
        const std::vector<int> dofs = element_dof_ids(mesh.elements[static_cast<size_t>(e)]);
        size_t slot = offsets[static_cast<size_t>(e)];
        for (size_t i = 0; i < dofs.size(); ++i) {
            for (size_t j = 0; j < dofs.size(); ++j) {
                triplets[slot++] = Triplet(dofs[i], dofs[j],
                                           k(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)));
            }
        }
    });

    GlobalSystem system;
    system.K.resize(n_dofs, n_dofs);
    system.K.setFromTriplets(triplets.begin(), triplets.end());
    system.F = Eigen::VectorXd::Zero(n_dofs);
    return system;
}

Eigen::VectorXd assemble_loads(const Mesh& mesh, const LoadCase& loads) {
    Eigen::VectorXd F = Eigen::VectorXd::Zero(2 * mesh.node_count());
    for (const auto& [node, force] : loads.point_loads) {
        if (node < 0 || node >= mesh.node_count()) {
            throw ValidationError("load references unknown node " + std::to_string(node + 1));
        }
        F(2 * node) += force.x();
        F(2 * node + 1) += force.y();
    }
    return F;
}

void apply_load_case(GlobalSystem& system, const Mesh& mesh, const LoadCase& loads) {
    validate(loads, mesh);
    system.F = assemble_loads(mesh, loads);
    system.constraints.clear();
    system.constraints.reserve(loads.dirichlet.size());
    for (const auto& [dof, value] : loads.dirichlet) {
        system.constraints.emplace_back(2 * dof.first + dof.second, value);
    }
    std::sort(system.constraints.begin(), system.constraints.end());
}

Eigen::VectorXd solve(const GlobalSystem& system, const SolveOptions& options) {
    const int n = system.dof_count();
    std::vector<int> to_free(static_cast<size_t>(n), 0);
    Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(n);
    for (const auto& [dof, value] : system.constraints) {
        if (dof < 0 || dof >= n) {
            throw ValidationError("constraint references dof out of range");
        }
        to_free[static_cast<size_t>(dof)] = -1;
        prescribed(dof) = value;
    }
    int n_free = 0;
    std::vector<int> free_dofs;
    free_dofs.reserve(static_cast<size_t>(n));
    for (int d = 0; d < n; ++d) {
        if (to_free[static_cast<size_t>(d)] == 0) {
            to_free[static_cast<size_t>(d)] = n_free++;
            free_dofs.push_back(d);
        }
    }
    if (n_free == 0) {
        return prescribed;
    }

    // Reduced system by symmetric elimination; prescribed values lift the
    // right-hand side.
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<size_t>(system.K.nonZeros()));
    Eigen::VectorXd rhs(n_free);
    for (int i = 0; i < n_free; ++i) {
        rhs(i) = system.F(free_dofs[static_cast<size_t>(i)]);
    }
    for (int col = 0; col < system.K.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.K, col); it; ++it) {
            const int fi = to_free[static_cast<size_t>(it.row())];
            const int fj = to_free[static_cast<size_t>(it.col())];
            if (fi >= 0 && fj >= 0) {
                triplets.emplace_back(fi, fj, it.value());
            } else if (fi >= 0 && fj < 0) {
                rhs(fi) -= it.value() * prescribed(it.col());
            }
        }
    }
    Eigen::SparseMatrix<double> K_red(n_free, n_free);
    K_red.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd u_free;
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        u_free = Eigen::VectorXd::Zero(n_free);
    } else {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K_red);
        bool direct_ok = ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
        if (direct_ok) {
            u_free = ldlt.solve(rhs);
            direct_ok = ldlt.info() == Eigen::Success;
        }
        const double residual =
            direct_ok ? (K_red.selfadjointView<Eigen::Lower>() * u_free - rhs).norm() /
                            rhs_norm
                      : std::numeric_limits<double>::infinity();
        if (!direct_ok) {
            throw NumericalError(
                "reduced stiffness is not positive definite: insufficient restraints or "
                "disconnected mesh");
        }
        if (residual > options.tolerance) {
            Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                     Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>> cg(K_red);
            cg.setTolerance(options.tolerance);
            u_free = cg.solveWithGuess(rhs, u_free);
            const double cg_res = (K_red.selfadjointView<Eigen::Lower>() * u_free - rhs).norm() /
                                  rhs_norm;
            if (cg_res > options.tolerance) {
                throw NumericalError("iterative fallback did not converge: relative residual " +
                                     std::to_string(cg_res));
            }
        }
    }

    Eigen::VectorXd u = prescribed;
    for (int i = 0; i < n_free; ++i) {
        u(free_dofs[static_cast<size_t>(i)]) = u_free(i);
    }
    return u;
}

Eigen::VectorXd global_internal_force(const Mesh& mesh, const Material& mat,
                                      const Stabilization& stab, double thickness,
                                      const Eigen::VectorXd& u, Execution exec) {
    const int n_dofs = 2 * mesh.node_count();
    if (u.size() != n_dofs) {
        throw ValidationError("displacement vector length does not match mesh dof count");
    }
    const int n_elements = mesh.element_count();
    std::vector<Eigen::VectorXd> q_local(static_cast<size_t>(n_elements));
    for_each_element(n_elements, exec, [&](int e) {
        const ElementGeometry geom(element_polygon(mesh, e));
        const Eigen::MatrixXd k = element_stiffness(geom, mat, stab, thickness).first;
        q_local[static_cast<size_t>(e)] =
            internal_force(k, gather_element_dofs(u, mesh.elements[static_cast<size_t>(e)]));
    });
    Eigen::VectorXd F_int = Eigen::VectorXd::Zero(n_dofs);
    for (int e = 0; e < n_elements; ++e) {
        const std::vector<int> dofs = element_dof_ids(mesh.elements[static_cast<size_t>(e)]);
        for (size_t i = 0; i < dofs.size(); ++i) {
            F_int(dofs[i]) += q_local[static_cast<size_t>(e)](static_cast<Eigen::Index>(i));
        }
    }
    return F_int;
}

Eigen::VectorXd reactions(const GlobalSystem& system, const Eigen::VectorXd& u) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(system.dof_count());
    const Eigen::VectorXd residual = system.K * u - system.F;
    for (const auto& [dof, value] : system.constraints) {
        r(dof) = residual(dof);
        (void)value;
    }
    return r;
}

Eigen::VectorXd gather_element_dofs(const Eigen::VectorXd& u, const std::vector<int>& element) {
    Eigen::VectorXd u_e(2 * element.size());
    for (size_t j = 0; j < element.size(); ++j) {
        u_e(2 * static_cast<Eigen::Index>(j)) = u(2 * element[j]);
        u_e(2 * static_cast<Eigen::Index>(j) + 1) = u(2 * element[j] + 1);
    }
    return u_e;
}

void verify_element_quadrature(const Mesh& mesh, const Material& mat) {
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry geom(element_polygon(mesh, e));
        const Matrix6d direct = compute_G_tilde_direct(geom, mat);
        const Eigen::MatrixXd B_tilde = compute_B_tilde(geom, mat);
        const Matrix6d product = B_tilde * compute_D(geom);
        const double scale = std::max(direct.norm(), product.norm());
        const double diff = (direct - product).norm();
        if (scale > 0.0 && diff > 1e-9 * scale) {
            throw NumericalError("element " + std::to_string(e + 1) +
                                 ": boundary-quadrature cross-check failed (relative deviation " +
                                 std::to_string(diff / scale) + ")");
        }
    }
}

} // namespace vem2d
