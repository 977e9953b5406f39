#include "vem2d/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

#include "vem2d/errors.hpp"

namespace vem2d {

namespace {

// Keeps the half-plane {x : (x - a) . dir <= 0}.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& a, const Vec2& dir) {
    std::vector<Vec2> out;
    const size_t n = poly.size();
    out.reserve(n + 2);
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double sp = (p - a).dot(dir);
        const double sq = (q - a).dot(dir);
        const bool in_p = sp <= 0.0;
        const bool in_q = sq <= 0.0;
        if (in_p) out.push_back(p);
        if (in_p != in_q) out.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    return out;
}

double loop_signed_area(const std::vector<Vec2>& loop) {
    return signed_area(std::span<const Vec2>(loop.data(), loop.size()));
}

Vec2 loop_centroid(const std::vector<Vec2>& loop) {
    const size_t n = loop.size();
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = loop[i];
        const Vec2& q = loop[(i + 1) % n];
        const double cross = p.x() * q.y() - q.x() * p.y();
        a2 += cross;
        cx += (p.x() + q.x()) * cross;
        cy += (p.y() + q.y()) * cross;
    }
    return Vec2(cx, cy) / (3.0 * a2);
}

void drop_short_edges(std::vector<Vec2>& loop, double eps) {
    std::vector<Vec2> out;
    out.reserve(loop.size());
    for (const Vec2& p : loop) {
        if (out.empty() || (p - out.back()).norm() > eps) {
            out.push_back(p);
        }
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= eps) {
        out.pop_back();
    }
    loop = std::move(out);
}

// One clipped Voronoi cell. Neighbors are consumed nearest-first so the
// security-radius test can stop as soon as no closer bisector can cut the
// cell; `order` is scratch storage of (squared distance, seed index).
std::vector<Vec2> voronoi_cell(const std::vector<Vec2>& domain, const std::vector<Vec2>& seeds,
                               int i, std::vector<std::pair<double, int>>& order) {
    const Vec2 s = seeds[static_cast<size_t>(i)];
    const int n = static_cast<int>(seeds.size());
    order.clear();
    order.reserve(static_cast<size_t>(n - 1));
    for (int j = 0; j < n; ++j) {
        if (j != i) order.emplace_back((seeds[static_cast<size_t>(j)] - s).squaredNorm(), j);
    }

    std::vector<Vec2> cell = domain;
    size_t sorted_until = 0;
    constexpr size_t kChunk = 32;
    for (size_t k = 0; k < order.size(); ++k) {
        if (k == sorted_until) {
            const size_t next = std::min(order.size(), sorted_until + kChunk);
            std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(sorted_until),
                             order.begin() + static_cast<std::ptrdiff_t>(next - 1), order.end());
            std::sort(order.begin() + static_cast<std::ptrdiff_t>(sorted_until),
                      order.begin() + static_cast<std::ptrdiff_t>(next));
            sorted_until = next;
        }
        const auto [dist2, j] = order[k];
        if (dist2 <= 0.0) {
            throw ValidationError("coincident seed points " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + "; try a different rng_seed");
        }
        double reach2 = 0.0;
        for (const Vec2& v : cell) {
            reach2 = std::max(reach2, (v - s).squaredNorm());
        }
        if (dist2 >= 4.0 * reach2) break;
        const Vec2 t = seeds[static_cast<size_t>(j)];
        cell = clip_half_plane(cell, 0.5 * (s + t), t - s);
        if (cell.size() < 3) {
            throw ValidationError("seed " + std::to_string(i + 1) +
                                  " produced an empty Voronoi cell; try a different rng_seed");
        }
    }
    return cell;
}

std::vector<std::vector<Vec2>> voronoi_cells(const std::vector<Vec2>& domain,
                                             const std::vector<Vec2>& seeds) {
    std::vector<std::vector<Vec2>> cells(seeds.size());
    std::vector<std::pair<double, int>> order;
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
        cells[static_cast<size_t>(i)] = voronoi_cell(domain, seeds, i, order);
    }
    return cells;
}

// Merges near-coincident cell corners into shared mesh nodes. Distinct cells
// compute the same corner through different clip sequences, so coordinates
// agree only to rounding; the grid hash makes the merge consistent globally.
class NodeWelder {
public:
    explicit NodeWelder(double eps) : eps_(eps), cell_(2.0 * eps) {}

    int id_for(const Vec2& p, std::vector<Vec2>& nodes) {
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find(key(p.x() + dx * cell_, p.y() + dy * cell_));
                if (it == grid_.end()) continue;
                for (int id : it->second) {
                    if ((nodes[static_cast<size_t>(id)] - p).norm() <= eps_) {
                        return id;
                    }
                }
            }
        }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(p);
        grid_[key(p.x(), p.y())].push_back(id);
        return id;
    }

private:
    std::uint64_t key(double x, double y) const {
        const auto ix = static_cast<std::int64_t>(std::floor(x / cell_));
        const auto iy = static_cast<std::int64_t>(std::floor(y / cell_));
        return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffu);
    }

    double eps_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

} // namespace

bool point_in_polygon(const std::vector<Vec2>& polygon, const Vec2& point) {
    bool inside = false;
    const size_t n = polygon.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[j];
        if ((a.y() > point.y()) != (b.y() > point.y())) {
            const double x_cross = a.x() + (point.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (point.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

std::vector<Vec2> rectangle_domain(double width, double height) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw ValidationError("rectangle domain requires positive width and height");
    }
    return {Vec2(0, 0), Vec2(width, 0), Vec2(width, height), Vec2(0, height)};
}

std::vector<Vec2> plate_quadrant_domain(double width, double height, double hole_radius,
                                        int arc_segments) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw ValidationError("plate domain requires positive width and height");
    }
    if (!(hole_radius > 0.0) || hole_radius >= std::min(width, height)) {
        throw ValidationError("hole radius must be positive and smaller than the plate");
    }
    if (arc_segments < 2) {
        throw ValidationError("arc needs at least 2 segments");
    }
    std::vector<Vec2> poly;
    poly.reserve(static_cast<size_t>(arc_segments) + 5);
    poly.emplace_back(hole_radius, 0.0);
    poly.emplace_back(width, 0.0);
    poly.emplace_back(width, height);
    poly.emplace_back(0.0, height);
    poly.emplace_back(0.0, hole_radius);
    // Arc from (0, r) to (r, 0), interior points only; endpoints are already in.
    for (int k = 1; k < arc_segments; ++k) {
        const double theta =
            std::numbers::pi / 2.0 * (1.0 - static_cast<double>(k) / arc_segments);
        poly.emplace_back(hole_radius * std::cos(theta), hole_radius * std::sin(theta));
    }
    return poly;
}

Mesh voronoi_mesh(const std::vector<Vec2>& domain, std::vector<Vec2> seeds, int lloyd_iters) {
    if (domain.size() < 3 || loop_signed_area(domain) <= 0.0) {
        throw ValidationError("Voronoi domain must be a CCW polygon");
    }
    if (seeds.empty()) {
        throw ValidationError("Voronoi mesh requires at least one seed");
    }
    if (lloyd_iters < 0) {
        throw ValidationError("lloyd_iters must be non-negative");
    }

    for (int iter = 0; iter < lloyd_iters; ++iter) {
        const auto cells = voronoi_cells(domain, seeds);
        for (size_t i = 0; i < seeds.size(); ++i) {
            const Vec2 c = loop_centroid(cells[i]);
            // A concave domain can push a cell centroid outside; keep the old
            // seed in that case.
            if (point_in_polygon(domain, c)) {
                seeds[i] = c;
            }
        }
    }

    const auto cells = voronoi_cells(domain, seeds);

    double diam = 0.0;
    {
        Vec2 lo = domain.front(), hi = domain.front();
        for (const Vec2& p : domain) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        diam = (hi - lo).norm();
    }
    const double weld_eps = 1e-9 * diam;

    Mesh mesh;
    NodeWelder welder(weld_eps);
    for (size_t i = 0; i < cells.size(); ++i) {
        std::vector<Vec2> loop = cells[i];
        drop_short_edges(loop, weld_eps);
        std::vector<int> ids;
        ids.reserve(loop.size());
        for (const Vec2& p : loop) {
            const int id = welder.id_for(p, mesh.nodes);
            if (ids.empty() || ids.back() != id) {
                ids.push_back(id);
            }
        }
        while (ids.size() > 1 && ids.front() == ids.back()) {
            ids.pop_back();
        }
        if (ids.size() < 3) {
            throw ValidationError("Voronoi cell " + std::to_string(i + 1) +
                                  " collapsed during welding; try a different rng_seed");
        }
        mesh.elements.push_back(std::move(ids));
    }

    const ValidationReport report = validate(mesh);
    if (!report.ok()) {
        throw ValidationError("generated Voronoi mesh failed validation (try a different "
                              "rng_seed): " + report.violations.front());
    }
    return mesh;
}

Mesh generate_voronoi(const std::vector<Vec2>& domain, int n_seeds, int lloyd_iters,
                      std::uint64_t rng_seed) {
    if (n_seeds < 1) {
        throw ValidationError("n_seeds must be at least 1");
    }
    if (domain.size() < 3) {
        throw ValidationError("Voronoi domain must be a polygon");
    }
    Vec2 lo = domain.front(), hi = domain.front();
    for (const Vec2& p : domain) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> ux(lo.x(), hi.x());
    std::uniform_real_distribution<double> uy(lo.y(), hi.y());
    std::vector<Vec2> seeds;
    seeds.reserve(static_cast<size_t>(n_seeds));
    while (static_cast<int>(seeds.size()) < n_seeds) {
        const Vec2 p(ux(rng), uy(rng));
        if (point_in_polygon(domain, p)) {
            seeds.push_back(p);
        }
    }
    return voronoi_mesh(domain, std::move(seeds), lloyd_iters);
}

} // namespace vem2d
