#pragma once

#include <map>
#include <string>
#include <vector>

#include "vem2d/geometry.hpp"

namespace vem2d {

/// Conforming polygonal mesh. Node ids are 0-based in memory (1-based in
/// files); element loops store node ids in CCW order.
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::vector<int>> elements;
    std::map<std::string, std::vector<int>> node_sets;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }

    /// Bounding-box diagonal; scale reference for tolerances.
    double domain_diameter() const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    int interior_edge_count = 0;
    int boundary_edge_count = 0;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Checks node references, loop simplicity/orientation, edge conformity
/// (interior edges shared by exactly 2 elements, boundary by 1), and
/// duplicate nodes. Violations are reported, not thrown.
ValidationReport validate(const Mesh& mesh);

/// nx-by-ny grid of axis-aligned quadrilaterals covering [0,width]x[0,height],
/// with boundary node sets "left", "right", "bottom", "top".
Mesh generate_structured(double width, double height, int nx, int ny);

Polygon element_polygon(const Mesh& mesh, int element_index);

} // namespace vem2d
