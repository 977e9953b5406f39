#include "vem2d/geometry.hpp"

#include <cmath>
#include <string>

#include "vem2d/errors.hpp"

namespace vem2d {

namespace {

double max_pairwise_distance(std::span<const Vec2> pts) {
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            best = std::max(best, (pts[i] - pts[j]).norm());
        }
    }
    return best;
}

// Proper intersection test for open segments (shared endpoints do not count).
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
        if (v > 0) return 1;
        if (v < 0) return -1;
        return 0;
    };
    int o1 = orient(a, b, c);
    int o2 = orient(a, b, d);
    int o3 = orient(c, d, a);
    int o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    // Collinear overlap counts as non-simple as well.
    auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
               std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
    };
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

} // namespace

double signed_area(std::span<const Vec2> loop) {
    const size_t n = loop.size();
    double twice = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = loop[i];
        const Vec2& q = loop[(i + 1) % n];
        twice += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * twice;
}

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    const size_t n = vertices_.size();
    if (n < 3) {
        throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(n));
    }
    diameter_ = max_pairwise_distance(vertices_);
    if (diameter_ <= 0.0) {
        throw ValidationError("polygon vertices all coincide");
    }
    const double tol = 1e-12 * diameter_;
    for (size_t i = 0; i < n; ++i) {
        if ((vertices_[i] - vertices_[(i + 1) % n]).norm() <= tol) {
            throw ValidationError("polygon has coincident consecutive vertices at index " +
                                  std::to_string(i));
        }
    }
    const double a = signed_area(vertices_);
    if (std::abs(a) <= 1e-12 * diameter_ * diameter_) {
        throw ValidationError("degenerate polygon: area is zero within tolerance");
    }
    if (a < 0.0) {
        throw ValidationError("polygon vertices are clockwise; counter-clockwise order required");
    }
    area_ = a;

    double cx = 0.0, cy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = vertices_[i];
        const Vec2& q = vertices_[(i + 1) % n];
        const double cross = p.x() * q.y() - q.x() * p.y();
        cx += (p.x() + q.x()) * cross;
        cy += (p.y() + q.y()) * cross;
    }
    centroid_ = Vec2(cx, cy) / (6.0 * area_);
}

std::vector<EdgeData> Polygon::edge_data() const {
    const size_t n = vertices_.size();
    std::vector<EdgeData> edges(n);
    for (size_t i = 0; i < n; ++i) {
        const Vec2 d = vertices_[(i + 1) % n] - vertices_[i];
        const double len = d.norm();
        if (len <= 0.0) {
            throw ValidationError("zero-length polygon edge at index " + std::to_string(i));
        }
        edges[i] = EdgeData{len, Vec2(d.y(), -d.x()) / len};
    }
    return edges;
}

bool Polygon::is_simple() const {
    const size_t n = vertices_.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex (adjacent, including the wraparound pair).
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(vertices_[i], vertices_[(i + 1) % n],
                                   vertices_[j], vertices_[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace vem2d
