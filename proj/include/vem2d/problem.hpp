#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <utility>

#include "vem2d/material.hpp"
#include "vem2d/mesh.hpp"

namespace vem2d {

/// Nodal point loads and Dirichlet constraints. Dirichlet keys are
/// (node id, component) with component 0 = x, 1 = y. Thickness multiplies
/// element stiffness uniformly.
struct LoadCase {
    std::map<int, Vec2> point_loads;
    std::map<std::pair<int, int>, double> dirichlet;
    double thickness = 1.0;
};

/// Referenced nodes must exist and no dof may carry both a nonzero load and
/// a constraint. Throws ValidationError.
void validate(const LoadCase& loads, const Mesh& mesh);

/// Accumulates a point load onto a node (zero-initializing the slot first).
void add_point_load(LoadCase& loads, int node, const Vec2& force);

struct Problem {
    Mesh mesh;
    Material material;
    LoadCase loads;
};

/// Line-oriented problem file, strict parsing (unknown directives are
/// errors). Node ids are 1-based on disk. Layout:
///
///   # vem2d problem v1
///   material E=1000 nu=0.3 mode=plane_stress thickness=1
///   nodes 5
///   1 0.0 0.0
///   ...
///   elements 1
///   1 1 2 3 4 5
///   nodeset support 1 5
///   dirichlet support ux=0 uy=0
///   load 2 fx=40 fy=0
Problem read_problem(const std::filesystem::path& path);
Problem parse_problem(std::istream& in, const std::string& source_name);
void write_problem(const std::filesystem::path& path, const Problem& problem);
void write_problem(std::ostream& out, const Problem& problem);

/// Doubles formatted with 17 significant digits (value-preserving).
std::string format_full(double v);

} // namespace vem2d
