#include "vem2d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "vem2d/errors.hpp"

namespace vem2d {

double Mesh::domain_diameter() const {
    if (nodes.empty()) return 0.0;
    Vec2 lo = nodes.front(), hi = nodes.front();
    for (const Vec2& p : nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

std::string ValidationReport::summary() const {
    if (ok()) return "mesh valid";
    std::string s = "mesh invalid (" + std::to_string(violations.size()) + " violations):";
    for (const std::string& v : violations) {
        s += "\n  " + v;
    }
    return s;
}

ValidationReport validate(const Mesh& mesh) {
    ValidationReport report;
    auto fail = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

    const int n_nodes = mesh.node_count();
    if (n_nodes == 0) fail("mesh has no nodes");
    if (mesh.elements.empty()) fail("mesh has no elements");

    // Element loops: valid references, simple, CCW.
    for (int e = 0; e < mesh.element_count(); ++e) {
        const std::vector<int>& loop = mesh.elements[static_cast<size_t>(e)];
        bool refs_ok = loop.size() >= 3;
        if (!refs_ok) fail("element " + std::to_string(e + 1) + " has fewer than 3 nodes");
        for (int id : loop) {
            if (id < 0 || id >= n_nodes) {
                fail("element " + std::to_string(e + 1) + " references unknown node " +
                     std::to_string(id + 1));
                refs_ok = false;
            }
        }
        if (!refs_ok) continue;
        std::vector<Vec2> pts;
        pts.reserve(loop.size());
        for (int id : loop) pts.push_back(mesh.nodes[static_cast<size_t>(id)]);
        try {
            Polygon poly(pts);
            if (!poly.is_simple()) {
                fail("element " + std::to_string(e + 1) + " is self-intersecting");
            }
        } catch (const ValidationError& err) {
            fail("element " + std::to_string(e + 1) + ": " + err.what());
        }
    }

    // Edge conformity: every undirected node pair used by 1 (boundary) or 2
    // (interior) elements.
    std::map<std::pair<int, int>, int> edge_use;
    for (const std::vector<int>& loop : mesh.elements) {
        const size_t n = loop.size();
        if (n < 3) continue;
        for (size_t j = 0; j < n; ++j) {
            int a = loop[j];
            int b = loop[(j + 1) % n];
            if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes) continue;
            edge_use[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }
    for (const auto& [edge, count] : edge_use) {
        if (count == 1) {
            report.boundary_edge_count += 1;
        } else if (count == 2) {
            report.interior_edge_count += 1;
        } else {
            fail("edge between nodes " + std::to_string(edge.first + 1) + " and " +
                 std::to_string(edge.second + 1) + " is shared by " + std::to_string(count) +
                 " elements");
        }
    }

    // Duplicate nodes within 1e-12 of the domain diameter, located with a
    // hash grid to stay O(N).
    const double tol = 1e-12 * mesh.domain_diameter();
    if (tol > 0.0) {
        const double cell = 2.0 * tol;
        std::unordered_map<std::uint64_t, std::vector<int>> grid;
        auto key = [cell](double x, double y) {
            const auto ix = static_cast<std::int64_t>(std::floor(x / cell));
            const auto iy = static_cast<std::int64_t>(std::floor(y / cell));
            return (static_cast<std::uint64_t>(ix) << 32) ^
                   (static_cast<std::uint64_t>(iy) & 0xffffffffu);
        };
        for (int i = 0; i < n_nodes; ++i) {
            const Vec2& p = mesh.nodes[static_cast<size_t>(i)];
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    auto it = grid.find(key(p.x() + dx * cell, p.y() + dy * cell));
                    if (it == grid.end()) continue;
                    for (int other : it->second) {
                        if ((mesh.nodes[static_cast<size_t>(other)] - p).norm() <= tol) {
                            fail("nodes " + std::to_string(other + 1) + " and " +
                                 std::to_string(i + 1) + " coincide");
                        }
                    }
                }
            }
            grid[key(p.x(), p.y())].push_back(i);
        }
    }

    return report;
}

Mesh generate_structured(double width, double height, int nx, int ny) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw ValidationError("structured mesh requires positive width and height");
    }
    if (nx < 1 || ny < 1) {
        throw ValidationError("structured mesh requires nx, ny >= 1");
    }
    Mesh mesh;
    mesh.nodes.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            mesh.nodes.emplace_back(width * i / nx, height * j / ny);
        }
    }
    auto node_id = [nx](int i, int j) { return j * (nx + 1) + i; };
    mesh.elements.reserve(static_cast<size_t>(nx * ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            mesh.elements.push_back(
                {node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1), node_id(i, j + 1)});
        }
    }
    auto& sets = mesh.node_sets;
    for (int j = 0; j <= ny; ++j) {
        sets["left"].push_back(node_id(0, j));
        sets["right"].push_back(node_id(nx, j));
    }
    for (int i = 0; i <= nx; ++i) {
        sets["bottom"].push_back(node_id(i, 0));
        sets["top"].push_back(node_id(i, ny));
    }
    return mesh;
}

Polygon element_polygon(const Mesh& mesh, int element_index) {
    const std::vector<int>& loop = mesh.elements.at(static_cast<size_t>(element_index));
    std::vector<Vec2> pts;
    pts.reserve(loop.size());
    for (int id : loop) {
        pts.push_back(mesh.nodes.at(static_cast<size_t>(id)));
    }
    return Polygon(pts);
}

} // namespace vem2d
