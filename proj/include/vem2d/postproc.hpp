#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "vem2d/assembly.hpp"
#include "vem2d/mesh.hpp"

namespace vem2d {

/// Nodal displacements plus the element-constant strain/stress fields.
struct SolutionField {
    Eigen::VectorXd displacements;       // 2N
    std::vector<Eigen::Vector3d> strain; // per element, Voigt (eps_x, eps_y, gamma_xy)
    std::vector<Eigen::Vector3d> stress; // per element, Voigt (sigma_x, sigma_y, sigma_xy)
};

SolutionField recover_fields(const Mesh& mesh, const Material& mat, const Eigen::VectorXd& u,
                             Execution exec = Execution::Parallel);

int nearest_node(const Mesh& mesh, const Vec2& probe);
Vec2 probe_displacement(const SolutionField& field, const Mesh& mesh, const Vec2& probe);

/// component: 0 = x, 1 = y, 2 = xy.
double max_stress(const SolutionField& field, int component);
double min_stress(const SolutionField& field, int component);

/// End-loaded cantilever deflection P*L^3 / (3*E*I).
double beam_theory_tip(double P, double L, double E, double I);

/// Legacy ASCII VTK unstructured grid with polygon cells, nodal displacement
/// vectors and element stress/strain vectors.
void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const SolutionField& field);

/// One row per node: id, coordinates, displacement.
void write_nodes_csv(const std::filesystem::path& path, const Mesh& mesh,
                     const SolutionField& field);

/// One row per element: id, centroid, area, strain, stress.
void write_elements_csv(const std::filesystem::path& path, const Mesh& mesh,
                        const SolutionField& field);

} // namespace vem2d
