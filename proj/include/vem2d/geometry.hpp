#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vem2d {

using Vec2 = Eigen::Vector2d;

/// Length and outward unit normal of one polygon edge.
struct EdgeData {
    double length;
    Vec2 normal;
};

double signed_area(std::span<const Vec2> loop);

/// A simple closed polygon with counter-clockwise vertex order.
///
/// Construction enforces: at least 3 vertices, no coincident consecutive
/// vertices (tolerance 1e-12 * diameter), non-degenerate area, CCW
/// orientation. CW input is rejected, not reoriented. Simplicity
/// (non-self-intersection) is an O(n^2) check left to validation passes;
/// see is_simple().
class Polygon {
public:
    explicit Polygon(std::vector<Vec2> vertices);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const std::vector<Vec2>& vertices() const { return vertices_; }
    const Vec2& vertex(int j) const { return vertices_[static_cast<size_t>(j)]; }

    double area() const { return area_; }
    Vec2 centroid() const { return centroid_; }
    /// Max pairwise vertex distance.
    double diameter() const { return diameter_; }

    /// Per-edge length and outward unit normal; edge j runs from vertex j to
    /// vertex j+1, the last edge closes the loop back to vertex 0.
    std::vector<EdgeData> edge_data() const;

    bool is_simple() const;

private:
    std::vector<Vec2> vertices_;
    double area_ = 0.0;
    Vec2 centroid_ = Vec2::Zero();
    double diameter_ = 0.0;
};

} // namespace vem2d
