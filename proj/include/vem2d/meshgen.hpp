#pragma once

#include <cstdint>
#include <vector>

#include "vem2d/mesh.hpp"

namespace vem2d {

/// CCW boundary of [0,width] x [0,height].
std::vector<Vec2> rectangle_domain(double width, double height);

/// CCW boundary of [0,width] x [0,height] minus a quarter disc of radius
/// `hole_radius` centered at the origin; the arc is a polyline with
/// `arc_segments` segments.
std::vector<Vec2> plate_quadrant_domain(double width, double height, double hole_radius,
                                        int arc_segments = 32);

/// Clipped Voronoi tessellation of the domain polygon for the given seed
/// points, preceded by `lloyd_iters` centroidal smoothing passes
/// (seed <- cell centroid). The result is conforming and CCW.
Mesh voronoi_mesh(const std::vector<Vec2>& domain, std::vector<Vec2> seeds, int lloyd_iters);

/// voronoi_mesh with n_seeds points sampled uniformly inside the domain from
/// a deterministic generator.
Mesh generate_voronoi(const std::vector<Vec2>& domain, int n_seeds, int lloyd_iters,
                      std::uint64_t rng_seed);

bool point_in_polygon(const std::vector<Vec2>& polygon, const Vec2& point);

} // namespace vem2d
