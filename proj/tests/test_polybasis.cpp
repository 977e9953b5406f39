#include <doctest.h>

#include "support/pentagon_ref.hpp"
#include "vem2d/polybasis.hpp"

using namespace vem2d;

TEST_CASE("basis at the centroid reduces to the constant columns") {
    const ScaledFrame frame{{2.0, -1.0}, 3.0};
    const BasisEval p = eval_basis(frame, frame.centroid);
    CHECK((p.col(0) - Eigen::Vector2d(1, 0)).norm() == 0.0);
    CHECK((p.col(1) - Eigen::Vector2d(0, 1)).norm() == 0.0);
    for (int col = 2; col < kBasisSize; ++col) {
        CHECK(p.col(col).norm() == 0.0);
    }
}

TEST_CASE("basis on the verification pentagon frame") {
    const Polygon pent(pentagon_ref::kVertices);
    const ScaledFrame frame{pent.centroid(), pent.diameter()};

    const BasisEval at_origin = eval_basis(frame, {0.0, 0.0});
    // xi = -0.2714, eta = -0.3619 at the first vertex.
    CHECK(std::abs(at_origin(0, 4) - (-0.2714)) < 1e-4);
    CHECK(std::abs(at_origin(1, 5) - (-0.3619)) < 1e-4);
    CHECK(std::abs(at_origin(0, 2) - 0.3619) < 1e-4);
    CHECK(std::abs(at_origin(1, 2) - (-0.2714)) < 1e-4);

    const BasisEval at_apex = eval_basis(frame, {1.5, 4.0});
    CHECK(std::abs(at_apex(0, 4) - 0.0286) < 1e-4);
    CHECK(std::abs(at_apex(1, 5) - 0.4381) < 1e-4);
}

TEST_CASE("basis strains") {
    const ScaledFrame frame{{0.0, 0.0}, 5.0};
    const BasisStrains s = basis_strains(frame);
    for (int col = 0; col < 3; ++col) {
        CHECK(s.col(col).norm() == 0.0); // rigid modes
    }
    CHECK((s.col(3) - Eigen::Vector3d(0, 0, 0.4)).norm() == doctest::Approx(0.0));
    CHECK((s.col(4) - Eigen::Vector3d(0.2, 0, 0)).norm() == doctest::Approx(0.0));
    CHECK((s.col(5) - Eigen::Vector3d(0, 0.2, 0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("strains scale inversely with the diameter") {
    const ScaledFrame f1{{1.0, 2.0}, 2.0};
    const ScaledFrame f2{{1.0, 2.0}, 4.0};
    CHECK((basis_strains(f1) - 2.0 * basis_strains(f2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("two evaluation points differ only in the linear columns") {
    const ScaledFrame frame{{0.5, 0.5}, 1.7};
    const BasisEval a = eval_basis(frame, {0.1, 0.9});
    const BasisEval b = eval_basis(frame, {-2.0, 3.0});
    CHECK((a.leftCols(2) - b.leftCols(2)).norm() == 0.0);
    CHECK((a.rightCols(4) - b.rightCols(4)).norm() > 0.0);
}
