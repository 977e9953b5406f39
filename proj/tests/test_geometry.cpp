#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/pentagon_ref.hpp"
#include "support/random_polygon.hpp"
#include "vem2d/errors.hpp"
#include "vem2d/geometry.hpp"

using namespace vem2d;

namespace {

Polygon unit_square() {
    return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

} // namespace

TEST_CASE("polygon area") {
    CHECK(unit_square().area() == doctest::Approx(1.0));
    CHECK(Polygon(pentagon_ref::kVertices).area() == doctest::Approx(10.5));

    std::vector<Vec2> cw(pentagon_ref::kVertices);
    std::reverse(cw.begin(), cw.end());
    CHECK_THROWS_AS(Polygon{cw}, ValidationError);
}

TEST_CASE("polygon centroid") {
    CHECK((unit_square().centroid() - Vec2(0.5, 0.5)).norm() == doctest::Approx(0.0));

    const Vec2 c = Polygon(pentagon_ref::kVertices).centroid();
    CHECK(std::abs(c.x() - 1.3571) < 1e-4);
    CHECK(std::abs(c.y() - 1.8095) < 1e-4);

    const Polygon tri({{0, 0}, {3, 0}, {0, 3}});
    CHECK((tri.centroid() - Vec2(1, 1)).norm() == doctest::Approx(0.0));
}

TEST_CASE("polygon diameter") {
    CHECK(Polygon(pentagon_ref::kVertices).diameter() == doctest::Approx(5.0));
    CHECK(unit_square().diameter() == doctest::Approx(std::sqrt(2.0)));
    const Polygon needle({{0, 0}, {10, 0}, {5, 0.001}});
    CHECK(needle.diameter() == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("edge data lengths and outward normals") {
    const auto square_edges = unit_square().edge_data();
    CHECK(square_edges[0].length == doctest::Approx(1.0));
    CHECK((square_edges[0].normal - Vec2(0, -1)).norm() == doctest::Approx(0.0));

    const auto pent_edges = Polygon(pentagon_ref::kVertices).edge_data();
    CHECK(pent_edges[1].length == doctest::Approx(2.0)); // (3,0) -> (3,2)
    CHECK((pent_edges[1].normal - Vec2(1, 0)).norm() == doctest::Approx(0.0));
    CHECK(pent_edges[2].length == doctest::Approx(2.5)); // (3,2) -> (1.5,4)
    CHECK((pent_edges[2].normal - Vec2(0.8, 0.6)).norm() == doctest::Approx(0.0));
}

TEST_CASE("degenerate polygons are rejected") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), ValidationError); // collinear
    CHECK_THROWS_AS(Polygon({{0, 0}, {0, 0}, {1, 1}}), ValidationError); // coincident
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1.0 + 1e-15, 1e-16}, {0, 1}}), ValidationError);
}

TEST_CASE("simplicity detection") {
    CHECK(unit_square().is_simple());
    CHECK(Polygon(pentagon_ref::kVertices).is_simple());
    // Bowtie: CCW by signed area but self-intersecting.
    const Polygon bowtie({{0, 0}, {2, 2}, {2, 0}, {0, 2.5}});
    CHECK_FALSE(bowtie.is_simple());
}

TEST_CASE("random polygon properties") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        const Polygon poly = testsupport::random_polygon(rng);

        // Closed-loop identity: edge lengths times outward normals cancel.
        Vec2 total = Vec2::Zero();
        double perimeter = 0.0;
        for (const EdgeData& e : poly.edge_data()) {
            total += e.length * e.normal;
            perimeter += e.length;
            CHECK(e.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(poly.diameter() >= e.length - 1e-12);
        }
        CHECK(total.norm() <= 1e-10 * perimeter);

        CHECK(poly.area() > 0.0);
        CHECK(poly.is_simple());

        // Reversal flips the signed area.
        std::vector<Vec2> reversed(poly.vertices());
        std::reverse(reversed.begin(), reversed.end());
        CHECK(signed_area(reversed) == doctest::Approx(-poly.area()).epsilon(1e-12));
    }
}

TEST_CASE("centroid of a convex polygon lies inside") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        // Regular n-gon, randomly rotated and scaled: convex by construction.
        const int n = 3 + static_cast<int>(unit(rng) * 9);
        const double phase = 2.0 * M_PI * unit(rng);
        const double r = 0.1 + 5.0 * unit(rng);
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            const double a = phase + 2.0 * M_PI * i / n;
            pts.emplace_back(r * std::cos(a), r * std::sin(a));
        }
        const Polygon poly(pts);
        const Vec2 c = poly.centroid();
        // Inside test: positive cross product with every CCW edge.
        for (int i = 0; i < n; ++i) {
            const Vec2& a = pts[static_cast<size_t>(i)];
            const Vec2& b = pts[static_cast<size_t>((i + 1) % n)];
            const double cross = (b.x() - a.x()) * (c.y() - a.y()) -
                                 (b.y() - a.y()) * (c.x() - a.x());
            CHECK(cross > 0.0);
        }
    }
}
