#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/pentagon_ref.hpp"
#include "vem2d/assembly.hpp"
#include "vem2d/errors.hpp"
#include "vem2d/meshgen.hpp"

using namespace vem2d;

namespace {

const Stabilization kStab = Stabilization::trace_scaled();

GlobalSystem pentagon_system() {
    const Problem prob = pentagon_ref::problem();
    GlobalSystem system = assemble(prob.mesh, prob.material, kStab, prob.loads.thickness);
    apply_load_case(system, prob.mesh, prob.loads);
    return system;
}

} // namespace

TEST_CASE("one-element assembly is the identity scatter") {
    const Problem prob = pentagon_ref::problem();
    const GlobalSystem system = assemble(prob.mesh, prob.material, kStab);
    const Eigen::MatrixXd K = Eigen::MatrixXd(system.K);
    const Eigen::MatrixXd kE =
        element_stiffness(ElementGeometry(Polygon(pentagon_ref::kVertices)), prob.material, kStab)
            .first;
    CHECK((K - kE).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-element assembly matches an explicit hand scatter") {
    Mesh mesh;
    mesh.nodes = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}, {0, 1}};
    mesh.elements = {{0, 1, 4, 5}, {1, 2, 3, 4}};
    const Material mat{100.0, 0.25, PlaneMode::PlaneStress};

    const Eigen::MatrixXd K = Eigen::MatrixXd(assemble(mesh, mat, kStab).K);

    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(12, 12);
    for (int e = 0; e < 2; ++e) {
        const Eigen::MatrixXd k =
            element_stiffness(ElementGeometry(element_polygon(mesh, e)), mat, kStab).first;
        std::vector<int> dofs;
        for (int node : mesh.elements[static_cast<size_t>(e)]) {
            dofs.push_back(2 * node);
            dofs.push_back(2 * node + 1);
        }
        for (size_t i = 0; i < dofs.size(); ++i) {
            for (size_t j = 0; j < dofs.size(); ++j) {
                expected(dofs[i], dofs[j]) += k(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(j));
            }
        }
    }
    CHECK((K - expected).cwiseAbs().maxCoeff() < 1e-12 * expected.cwiseAbs().maxCoeff());
    CHECK((K - K.transpose()).norm() < 1e-12 * K.norm());
}

TEST_CASE("parallel assembly is bit-identical to the serial reference") {
    const Mesh mesh = generate_voronoi(rectangle_domain(4.0, 2.0), 120, 5, 9);
    const Material mat{500.0, 0.2, PlaneMode::PlaneStrain};
    const GlobalSystem serial = assemble(mesh, mat, kStab, 1.0, Execution::Serial);
    const GlobalSystem parallel = assemble(mesh, mat, kStab, 1.0, Execution::Parallel);
    REQUIRE(serial.K.nonZeros() == parallel.K.nonZeros());
    const Eigen::MatrixXd diff = Eigen::MatrixXd(serial.K) - Eigen::MatrixXd(parallel.K);
    CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("element order does not change the assembled matrix beyond roundoff") {
    Mesh mesh = generate_voronoi(rectangle_domain(2.0, 2.0), 40, 5, 17);
    const Material mat{1000.0, 0.3, PlaneMode::PlaneStress};
    const Eigen::MatrixXd K1 = Eigen::MatrixXd(assemble(mesh, mat, kStab).K);
    std::reverse(mesh.elements.begin(), mesh.elements.end());
    const Eigen::MatrixXd K2 = Eigen::MatrixXd(assemble(mesh, mat, kStab).K);
    CHECK((K1 - K2).cwiseAbs().maxCoeff() <= 1e-12 * K1.cwiseAbs().maxCoeff());
}

TEST_CASE("load vector scatter") {
    const Problem prob = pentagon_ref::problem();
    const Eigen::VectorXd F = assemble_loads(prob.mesh, prob.loads);
    Eigen::VectorXd expected(10);
    expected << 0, 0, 40, 0, 80, 0, 40, 0, 0, 0;
    CHECK((F - expected).norm() == 0.0);

    CHECK(assemble_loads(prob.mesh, LoadCase{}).norm() == 0.0);

    LoadCase doubled;
    doubled.point_loads[1] = Vec2(40, 0);
    Eigen::VectorXd twice =
        assemble_loads(prob.mesh, doubled) + assemble_loads(prob.mesh, doubled);
    doubled.point_loads[1] = Vec2(80, 0);
    CHECK((assemble_loads(prob.mesh, doubled) - twice).norm() == 0.0);

    LoadCase bad;
    bad.point_loads[77] = Vec2(1, 0);
    CHECK_THROWS_AS(assemble_loads(prob.mesh, bad), ValidationError);
}

TEST_CASE("loads do not alter the stiffness") {
    const Problem prob = pentagon_ref::problem();
    GlobalSystem system = assemble(prob.mesh, prob.material, kStab);
    const Eigen::MatrixXd K_before = Eigen::MatrixXd(system.K);
    apply_load_case(system, prob.mesh, prob.loads);
    CHECK((Eigen::MatrixXd(system.K) - K_before).norm() == 0.0);
}

TEST_CASE("solve reproduces the reference displacements") {
    const GlobalSystem system = pentagon_system();
    const Eigen::VectorXd u = solve(system);
    CHECK((u - pentagon_ref::displacements()).cwiseAbs().maxCoeff() < 1e-3);

    // Residual on the free dofs.
    const Eigen::VectorXd r = system.K * u - system.F;
    double free_norm = 0.0;
    for (int d = 0; d < 10; ++d) {
        if (d != 0 && d != 1 && d != 8) free_norm += r(d) * r(d);
    }
    CHECK(std::sqrt(free_norm) <= 1e-10 * system.F.norm());
}

TEST_CASE("zero loads give zero displacements") {
    const Problem prob = pentagon_ref::problem();
    GlobalSystem system = assemble(prob.mesh, prob.material, kStab);
    LoadCase no_loads;
    no_loads.dirichlet = prob.loads.dirichlet;
    apply_load_case(system, prob.mesh, no_loads);
    CHECK(solve(system).norm() == 0.0);
}

TEST_CASE("unrestrained or underrestrained systems are rejected") {
    const Problem prob = pentagon_ref::problem();
    GlobalSystem system = assemble(prob.mesh, prob.material, kStab);
    system.F = assemble_loads(prob.mesh, prob.loads);
    CHECK_THROWS_AS(solve(system), NumericalError); // no constraints at all

    system.constraints = {{0, 0.0}, {1, 0.0}}; // one pin: rotation still free
    CHECK_THROWS_AS(solve(system), NumericalError);
}

TEST_CASE("patch test: imposed linear boundary field is reproduced inside") {
    const Mesh mesh = generate_structured(1.0, 1.0, 4, 4);
    const double a = 0.3, b = -0.2, c = 0.11, d = -0.07, e = 0.05, f = 0.19;
    auto exact = [&](const Vec2& p) {
        return Vec2(a + b * p.x() + c * p.y(), d + e * p.x() + f * p.y());
    };
    for (PlaneMode mode : {PlaneMode::PlaneStress, PlaneMode::PlaneStrain}) {
        const Material mat{1000.0, 0.3, mode};
        GlobalSystem system = assemble(mesh, mat, kStab);
        LoadCase loads;
        for (int i = 0; i < mesh.node_count(); ++i) {
            const Vec2& p = mesh.nodes[static_cast<size_t>(i)];
            const bool boundary = p.x() < 1e-12 || p.x() > 1 - 1e-12 || p.y() < 1e-12 ||
                                  p.y() > 1 - 1e-12;
            if (boundary) {
                const Vec2 u = exact(p);
                loads.dirichlet[{i, 0}] = u.x();
                loads.dirichlet[{i, 1}] = u.y();
            }
        }
        apply_load_case(system, mesh, loads);
        const Eigen::VectorXd u = solve(system);
        double scale = 0.0;
        for (int i = 0; i < mesh.node_count(); ++i) {
            scale = std::max({scale, std::abs(exact(mesh.nodes[static_cast<size_t>(i)]).x()),
                              std::abs(exact(mesh.nodes[static_cast<size_t>(i)]).y())});
        }
        for (int i = 0; i < mesh.node_count(); ++i) {
            const Vec2 want = exact(mesh.nodes[static_cast<size_t>(i)]);
            CHECK(std::abs(u(2 * i) - want.x()) <= 1e-10 * scale);
            CHECK(std::abs(u(2 * i + 1) - want.y()) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("global rigid modes are in the pre-constraint null space") {
    const Mesh mesh = generate_voronoi(rectangle_domain(3.0, 1.0), 50, 5, 23);
    const Material mat{1000.0, 0.3, PlaneMode::PlaneStress};
    const GlobalSystem system = assemble(mesh, mat, kStab);
    const int n = system.dof_count();
    Eigen::VectorXd tx = Eigen::VectorXd::Zero(n), ty = Eigen::VectorXd::Zero(n),
                    rot = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mesh.node_count(); ++i) {
        const Vec2& p = mesh.nodes[static_cast<size_t>(i)];
        tx(2 * i) = 1.0;
        ty(2 * i + 1) = 1.0;
        rot(2 * i) = -p.y();
        rot(2 * i + 1) = p.x();
    }
    const double tol = 1e-9 * system.K.coeffs().cwiseAbs().sum() / n;
    CHECK((system.K * tx).cwiseAbs().maxCoeff() < tol);
    CHECK((system.K * ty).cwiseAbs().maxCoeff() < tol);
    CHECK((system.K * rot).cwiseAbs().maxCoeff() < tol * mesh.domain_diameter());
}

TEST_CASE("equilibrium: reactions balance applied loads, F_int equals K u") {
    const Problem prob = pentagon_ref::problem();
    const GlobalSystem system = pentagon_system();
    const Eigen::VectorXd u = solve(system);

    const Eigen::VectorXd r = reactions(system, u);
    double rx = 0.0, fx = 0.0;
    for (int i = 0; i < 5; ++i) {
        rx += r(2 * i);
        fx += system.F(2 * i);
    }
    CHECK(std::abs(rx + fx) <= 1e-9 * std::abs(fx));

    const Eigen::VectorXd F_int =
        global_internal_force(prob.mesh, prob.material, kStab, prob.loads.thickness, u);
    CHECK((F_int - system.K * u).norm() <= 1e-10 * (system.K * u).norm());

    CHECK(global_internal_force(prob.mesh, prob.material, kStab, 1.0,
                                Eigen::VectorXd::Zero(10))
              .norm() == 0.0);

    Eigen::VectorXd rigid(10);
    for (int i = 0; i < 5; ++i) {
        rigid(2 * i) = 1.0;
        rigid(2 * i + 1) = 0.0;
    }
    CHECK(global_internal_force(prob.mesh, prob.material, kStab, 1.0, rigid).cwiseAbs()
              .maxCoeff() < 1e-9 * Eigen::MatrixXd(system.K).norm());
}

TEST_CASE("element errors carry the element id") {
    Mesh mesh;
    mesh.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0}, {2, 1}};
    mesh.elements = {{0, 1, 2, 3}, {1, 4, 5, 2}};
    // Degenerate second element: squash it to a line.
    mesh.nodes[4] = Vec2(1.0, 0.0);
    mesh.nodes[5] = Vec2(1.0, 1.0);
    const Material mat{1.0, 0.0, PlaneMode::PlaneStress};
    for (Execution exec : {Execution::Serial, Execution::Parallel}) {
        try {
            assemble(mesh, mat, kStab, 1.0, exec);
            FAIL("expected an exception");
        } catch (const std::exception& ex) {
            CHECK(std::string(ex.what()).find("element 2") != std::string::npos);
        }
    }
}

TEST_CASE("quadrature verification pass accepts valid meshes") {
    const Mesh mesh = generate_voronoi(rectangle_domain(2.0, 1.0), 30, 5, 5);
    CHECK_NOTHROW(verify_element_quadrature(mesh, {1000.0, 0.3, PlaneMode::PlaneStress}));
}
