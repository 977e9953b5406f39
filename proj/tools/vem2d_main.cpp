// Command-line driver: solve, element-check, meshgen, convergence.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vem2d/assembly.hpp"
#include "vem2d/errors.hpp"
#include "vem2d/meshgen.hpp"
#include "vem2d/postproc.hpp"
#include "vem2d/problem.hpp"

namespace {

using namespace vem2d;
namespace fs = std::filesystem;

constexpr double kEdgeTol = 1e-9; // absolute snap distance for boundary node selection

Stabilization parse_stab(const std::string& spec) {
    const size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    Stabilization stab;
    if (name == "trace") {
        stab = Stabilization::trace_scaled();
    } else if (name == "diag") {
        stab = Stabilization::diagonal_max();
    } else {
        throw IoError("unknown stabilization '" + spec + "' (use trace:TAU or diag:ALPHA)");
    }
    if (colon != std::string::npos) {
        try {
            stab.parameter = std::stod(spec.substr(colon + 1));
        } catch (...) {
            throw IoError("bad stabilization parameter in '" + spec + "'");
        }
    }
    if (!(stab.parameter > 0.0)) {
        throw IoError("stabilization parameter must be positive");
    }
    return stab;
}

std::string fmt4(double v) {
    if (std::abs(v) < 5e-5) v = 0.0; // keep "-0.0000" out of the output
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%10.4f", v);
    return buf;
}

void print_matrix(std::ostream& out, const std::string& label, const Eigen::MatrixXd& m) {
    out << label << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << fmt4(m(i, j)) << (j + 1 < m.cols() ? " " : "");
        }
        out << "\n";
    }
}

struct SolveResult {
    GlobalSystem system;
    Eigen::VectorXd u;
    SolutionField field;
};

SolveResult run_solve(const Problem& prob, const Stabilization& stab, double tol, bool verify) {
    const ValidationReport report = validate(prob.mesh);
    if (!report.ok()) {
        throw ValidationError(report.summary());
    }
    validate(prob.loads, prob.mesh);
    if (verify) {
        verify_element_quadrature(prob.mesh, prob.material);
    }
    SolveResult r;
    r.system = assemble(prob.mesh, prob.material, stab, prob.loads.thickness);
    apply_load_case(r.system, prob.mesh, prob.loads);
    r.u = solve(r.system, SolveOptions{tol});
    r.field = recover_fields(prob.mesh, prob.material, r.u);
    return r;
}

void write_metrics(const fs::path& path, const Problem& prob, const SolveResult& r,
                   const std::optional<Vec2>& probe) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << "n_nodes=" << prob.mesh.node_count() << "\n";
    out << "n_elements=" << prob.mesh.element_count() << "\n";
    out << "thickness=" << format_full(prob.loads.thickness) << "\n";
    const char* names[3] = {"sigma_x", "sigma_y", "sigma_xy"};
    for (int c = 0; c < 3; ++c) {
        const double hi = max_stress(r.field, c);
        const double lo = min_stress(r.field, c);
        out << "max_" << names[c] << "=" << format_full(hi) << "\n";
        out << "min_" << names[c] << "=" << format_full(lo) << "\n";
        out << "max_abs_" << names[c] << "=" << format_full(std::max(std::abs(hi), std::abs(lo)))
            << "\n";
    }
    const Eigen::VectorXd reac = reactions(r.system, r.u);
    double sum_fx = 0, sum_fy = 0, sum_rx = 0, sum_ry = 0;
    for (int i = 0; i < prob.mesh.node_count(); ++i) {
        sum_fx += r.system.F(2 * i);
        sum_fy += r.system.F(2 * i + 1);
        sum_rx += reac(2 * i);
        sum_ry += reac(2 * i + 1);
    }
    out << "sum_fx=" << format_full(sum_fx) << "\n";
    out << "sum_fy=" << format_full(sum_fy) << "\n";
    out << "sum_reaction_x=" << format_full(sum_rx) << "\n";
    out << "sum_reaction_y=" << format_full(sum_ry) << "\n";
    if (probe) {
        const int node = nearest_node(prob.mesh, *probe);
        out << "probe_x=" << format_full(probe->x()) << "\n";
        out << "probe_y=" << format_full(probe->y()) << "\n";
        out << "probe_node=" << (node + 1) << "\n";
        out << "probe_ux=" << format_full(r.u(2 * node)) << "\n";
        out << "probe_uy=" << format_full(r.u(2 * node + 1)) << "\n";
    }
}

// Boundary node sets of an axis-aligned W x H domain, selected by coordinate.
void add_boundary_sets(Mesh& mesh, double width, double height) {
    mesh.node_sets.erase("left");
    mesh.node_sets.erase("right");
    mesh.node_sets.erase("bottom");
    mesh.node_sets.erase("top");
    for (int i = 0; i < mesh.node_count(); ++i) {
        const Vec2& p = mesh.nodes[static_cast<size_t>(i)];
        if (std::abs(p.x()) <= kEdgeTol) mesh.node_sets["left"].push_back(i);
        if (std::abs(p.x() - width) <= kEdgeTol) mesh.node_sets["right"].push_back(i);
        if (std::abs(p.y()) <= kEdgeTol) mesh.node_sets["bottom"].push_back(i);
        if (std::abs(p.y() - height) <= kEdgeTol) mesh.node_sets["top"].push_back(i);
    }
}

void apply_cantilever_setup(Problem& prob, double width, double height, double load) {
    add_boundary_sets(prob.mesh, width, height);
    if (prob.mesh.node_sets["left"].empty()) {
        throw ValidationError("no nodes found on the support edge x=0");
    }
    for (int node : prob.mesh.node_sets["left"]) {
        prob.loads.dirichlet[{node, 0}] = 0.0;
        prob.loads.dirichlet[{node, 1}] = 0.0;
    }
    const int tip = nearest_node(prob.mesh, Vec2(width, height / 2.0));
    add_point_load(prob.loads, tip, Vec2(0.0, -load));
}

void apply_plate_tension_setup(Problem& prob, double width, double height, double tension) {
    add_boundary_sets(prob.mesh, width, height);
    for (int node : prob.mesh.node_sets["left"]) {
        prob.loads.dirichlet[{node, 0}] = 0.0; // symmetry plane x=0
    }
    for (int node : prob.mesh.node_sets["bottom"]) {
        prob.loads.dirichlet[{node, 1}] = 0.0; // symmetry plane y=0
    }
    // Uniform edge traction on x=W as tributary nodal loads.
    const double t = prob.loads.thickness;
    bool any = false;
    for (const std::vector<int>& loop : prob.mesh.elements) {
        const size_t n = loop.size();
        for (size_t j = 0; j < n; ++j) {
            const int a = loop[j];
            const int b = loop[(j + 1) % n];
            const Vec2& pa = prob.mesh.nodes[static_cast<size_t>(a)];
            const Vec2& pb = prob.mesh.nodes[static_cast<size_t>(b)];
            if (std::abs(pa.x() - width) <= kEdgeTol && std::abs(pb.x() - width) <= kEdgeTol) {
                const double half = 0.5 * tension * t * (pa - pb).norm();
                add_point_load(prob.loads, a, Vec2(half, 0.0));
                add_point_load(prob.loads, b, Vec2(half, 0.0));
                any = true;
            }
        }
    }
    if (!any) {
        throw ValidationError("no mesh edges found on the loaded edge x=width");
    }
}

struct CantileverConfig {
    double width = 12.0;
    double height = 1.0;
    double load = 0.1;
};

struct PlateConfig {
    double width = 4.0;
    double height = 4.0;
    double hole_radius = 1.0;
    double tension = 1.0;
};

int cmd_solve(const std::string& file, const std::string& outdir, const std::string& stab_spec,
              double tol, bool verify, const std::vector<double>& probe_xy) {
    const Problem prob = read_problem(file);
    std::optional<Vec2> probe;
    if (!probe_xy.empty()) {
        probe = Vec2(probe_xy[0], probe_xy[1]);
    }
    const SolveResult r = run_solve(prob, parse_stab(stab_spec), tol, verify);

    fs::create_directories(outdir);
    write_nodes_csv(fs::path(outdir) / "nodes.csv", prob.mesh, r.field);
    write_elements_csv(fs::path(outdir) / "elements.csv", prob.mesh, r.field);
    write_vtk(fs::path(outdir) / "solution.vtk", prob.mesh, r.field);
    write_metrics(fs::path(outdir) / "metrics.txt", prob, r, probe);

    std::cout << "solved " << file << ": " << prob.mesh.node_count() << " nodes, "
              << prob.mesh.element_count() << " elements\n";
    std::printf("sigma_x range: [%.4f, %.4f]\n", min_stress(r.field, 0), max_stress(r.field, 0));
    std::printf("sigma_y range: [%.4f, %.4f]\n", min_stress(r.field, 1), max_stress(r.field, 1));
    if (probe) {
        const Vec2 d = probe_displacement(r.field, prob.mesh, *probe);
        std::printf("probe (%.4f, %.4f): ux=%.6f uy=%.6f\n", probe->x(), probe->y(), d.x(),
                    d.y());
    }
    std::cout << "outputs written to " << outdir << "\n";
    return 0;
}

int cmd_element_check(const std::string& file, const std::string& stab_spec, double tol) {
    const Problem prob = read_problem(file);
    if (prob.mesh.element_count() != 1) {
        throw IoError("element-check requires exactly one element");
    }
    const ValidationReport report = validate(prob.mesh);
    if (!report.ok()) {
        throw ValidationError(report.summary());
    }
    const Stabilization stab = parse_stab(stab_spec);

    const ElementGeometry geom(element_polygon(prob.mesh, 0));
    const auto [kE, proj] = element_stiffness(geom, prob.material, stab, prob.loads.thickness);

    std::ostream& out = std::cout;
    char line[160];
    std::snprintf(line, sizeof(line), "Centroid location: x_bar=%.4f, y_bar=%.4f",
                  geom.frame.centroid.x(), geom.frame.centroid.y());
    out << line << "\n";
    out << "Number of vertices: n_v=" << geom.vertex_count() << "\n";
    out << "Number of dofs: 2n_d=" << geom.dof_count() << "\n";
    std::snprintf(line, sizeof(line), "Polygon diameter: h_E=%.4f", geom.frame.diameter);
    out << line << "\n";
    std::snprintf(line, sizeof(line), "Polygon area: |E|=%.4f", geom.polygon.area());
    out << line << "\n";

    print_matrix(out, "B_bar matrix:", proj.B_bar);
    print_matrix(out, "D matrix:", proj.D);
    print_matrix(out, "G matrix:", proj.G);
    print_matrix(out, "Pi_tilde matrix:", proj.Pi_tilde);
    print_matrix(out, "Pi matrix:", proj.Pi);
    print_matrix(out, "kE, element stiffness matrix:", kE);

    const SolveResult r = run_solve(prob, stab, tol, false);
    out << "u_x, u_y, nodal displacements:\n";
    for (int i = 0; i < prob.mesh.node_count(); ++i) {
        out << fmt4(r.u(2 * i)) << " " << fmt4(r.u(2 * i + 1)) << "\n";
    }
    print_matrix(out, "strains (eps_x, eps_y, gamma_xy):", r.field.strain[0]);
    print_matrix(out, "stresses (sigma_x, sigma_y, sigma_xy):", r.field.stress[0]);
    return 0;
}

struct MeshgenOptions {
    std::vector<double> structured; // W H NX NY
    std::vector<double> voronoi;    // W H N
    double hole_radius = 0.0;
    int lloyd = 20;
    std::uint64_t seed = 1;
    double E = 1000.0;
    double nu = 0.3;
    std::string mode = "plane_stress";
    double thickness = 1.0;
    double cantilever_load = 0.0;
    double plate_tension = 0.0;
    std::string out_file;
};

int cmd_meshgen(const MeshgenOptions& opt) {
    if (opt.structured.empty() == opt.voronoi.empty()) {
        throw IoError("choose exactly one of --structured or --voronoi");
    }
    Problem prob;
    prob.material.youngs_modulus = opt.E;
    prob.material.poisson_ratio = opt.nu;
    if (opt.mode == "plane_stress") {
        prob.material.mode = PlaneMode::PlaneStress;
    } else if (opt.mode == "plane_strain") {
        prob.material.mode = PlaneMode::PlaneStrain;
    } else {
        throw IoError("mode must be plane_stress or plane_strain");
    }
    prob.loads.thickness = opt.thickness;

    double width = 0.0, height = 0.0;
    if (!opt.structured.empty()) {
        if (opt.hole_radius > 0.0) {
            throw IoError("--hole requires --voronoi");
        }
        width = opt.structured[0];
        height = opt.structured[1];
        prob.mesh = generate_structured(width, height, static_cast<int>(opt.structured[2]),
                                        static_cast<int>(opt.structured[3]));
    } else {
        width = opt.voronoi[0];
        height = opt.voronoi[1];
        const int n_seeds = static_cast<int>(opt.voronoi[2]);
        const std::vector<Vec2> domain =
            opt.hole_radius > 0.0 ? plate_quadrant_domain(width, height, opt.hole_radius)
                                  : rectangle_domain(width, height);
        prob.mesh = generate_voronoi(domain, n_seeds, opt.lloyd, opt.seed);
    }
    add_boundary_sets(prob.mesh, width, height);

    if (opt.cantilever_load != 0.0 && opt.plate_tension != 0.0) {
        throw IoError("choose at most one of --cantilever and --plate-tension");
    }
    if (opt.cantilever_load != 0.0) {
        apply_cantilever_setup(prob, width, height, opt.cantilever_load);
    }
    if (opt.plate_tension != 0.0) {
        apply_plate_tension_setup(prob, width, height, opt.plate_tension);
    }

    const ValidationReport report = validate(prob.mesh);
    if (!report.ok()) {
        throw ValidationError(report.summary());
    }
    validate(prob.loads, prob.mesh);
    write_problem(opt.out_file, prob);
    std::cout << "wrote " << opt.out_file << ": " << prob.mesh.node_count() << " nodes, "
              << prob.mesh.element_count() << " elements\n";
    return 0;
}

struct ConvergenceOptions {
    bool cantilever = false;
    bool plate = false;
    std::vector<int> elements;
    int lloyd = 20;
    std::uint64_t seed = 1;
    std::string stab_spec = "trace:0.5";
    double tol = 1e-10;
    std::string out_dir;
};

int cmd_convergence(const ConvergenceOptions& opt) {
    if (opt.cantilever == opt.plate) {
        throw IoError("choose exactly one of --cantilever or --plate");
    }
    if (opt.elements.empty()) {
        throw IoError("--elements requires at least one refinement level");
    }
    const Stabilization stab = parse_stab(opt.stab_spec);
    const CantileverConfig cant;
    const PlateConfig plate;

    struct Row {
        int n_elements;
        double tip_displacement;
        double max_stress;
    };
    std::vector<Row> rows;

    for (int n : opt.elements) {
        Problem prob;
        prob.material = Material{1000.0, 0.3, PlaneMode::PlaneStress};
        prob.loads.thickness = 1.0;
        Vec2 probe;
        if (opt.cantilever) {
            prob.mesh = generate_voronoi(rectangle_domain(cant.width, cant.height), n, opt.lloyd,
                                         opt.seed);
            apply_cantilever_setup(prob, cant.width, cant.height, cant.load);
            probe = Vec2(cant.width, cant.height / 2.0);
        } else {
            prob.mesh = generate_voronoi(
                plate_quadrant_domain(plate.width, plate.height, plate.hole_radius), n, opt.lloyd,
                opt.seed);
            apply_plate_tension_setup(prob, plate.width, plate.height, plate.tension);
            probe = Vec2(plate.width, plate.height / 2.0);
        }
        const SolveResult r = run_solve(prob, stab, opt.tol, false);
        const Vec2 d = probe_displacement(r.field, prob.mesh, probe);
        const double tip = opt.cantilever ? std::abs(d.y()) : std::abs(d.x());
        const double smax =
            std::max(std::abs(max_stress(r.field, 0)), std::abs(min_stress(r.field, 0)));
        rows.push_back({prob.mesh.element_count(), tip, smax});
    }

    std::printf("%12s %18s %12s\n", "n_elements", "tip_displacement", "max_stress");
    for (const Row& row : rows) {
        std::printf("%12d %18.6f %12.4f\n", row.n_elements, row.tip_displacement,
                    row.max_stress);
    }
    if (opt.cantilever) {
        const double ref = beam_theory_tip(cant.load, cant.width, 1000.0,
                                           std::pow(cant.height, 3) / 12.0);
        std::printf("beam-theory tip displacement: %.6f\n", ref);
    }

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        const fs::path csv = fs::path(opt.out_dir) / "convergence.csv";
        std::ofstream out(csv);
        if (!out) {
            throw IoError("cannot write '" + csv.string() + "'");
        }
        out << "n_elements,tip_displacement,max_stress\n";
        for (const Row& row : rows) {
            out << row.n_elements << "," << format_full(row.tip_displacement) << ","
                << format_full(row.max_stress) << "\n";
        }
        std::cout << "wrote " << csv.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D virtual element solver for linear elasticity on polygonal meshes"};
    app.require_subcommand(1);

    // solve
    std::string solve_file, solve_out = ".", solve_stab = "trace:0.5";
    double solve_tol = 1e-10;
    bool solve_verify = false;
    std::vector<double> solve_probe;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve a problem file and export results");
    solve_cmd->add_option("problem", solve_file, "problem file")->required();
    solve_cmd->add_option("--out", solve_out, "output directory");
    solve_cmd->add_option("--stab", solve_stab, "stabilization: trace:TAU or diag:ALPHA");
    solve_cmd->add_option("--tol", solve_tol, "relative residual tolerance");
    solve_cmd->add_flag("--verify", solve_verify, "run the per-element quadrature cross-check");
    solve_cmd->add_option("--probe", solve_probe, "probe point x y")->expected(2);

    // element-check
    std::string check_file, check_stab = "trace:0.5";
    double check_tol = 1e-10;
    CLI::App* check_cmd =
        app.add_subcommand("element-check", "dump all matrices of a one-element problem");
    check_cmd->add_option("problem", check_file, "one-element problem file")->required();
    check_cmd->add_option("--stab", check_stab, "stabilization: trace:TAU or diag:ALPHA");
    check_cmd->add_option("--tol", check_tol, "relative residual tolerance");

    // meshgen
    MeshgenOptions mg;
    CLI::App* mesh_cmd = app.add_subcommand("meshgen", "generate a mesh/problem file");
    mesh_cmd->add_option("--structured", mg.structured, "W H NX NY")->expected(4);
    mesh_cmd->add_option("--voronoi", mg.voronoi, "W H N_SEEDS")->expected(3);
    mesh_cmd->add_option("--hole", mg.hole_radius, "hole radius (quadrant domain, with --voronoi)");
    mesh_cmd->add_option("--lloyd", mg.lloyd, "Lloyd smoothing iterations");
    mesh_cmd->add_option("--seed", mg.seed, "random seed");
    mesh_cmd->add_option("--E", mg.E, "Young's modulus");
    mesh_cmd->add_option("--nu", mg.nu, "Poisson's ratio");
    mesh_cmd->add_option("--mode", mg.mode, "plane_stress or plane_strain");
    mesh_cmd->add_option("--thickness", mg.thickness, "domain thickness");
    mesh_cmd->add_option("--cantilever", mg.cantilever_load,
                         "pin x=0, point load P downward at the free-end midpoint");
    mesh_cmd->add_option("--plate-tension", mg.plate_tension,
                         "symmetry supports plus uniform tension on x=W");
    mesh_cmd->add_option("--out", mg.out_file, "output problem file")->required();

    // convergence
    ConvergenceOptions cv;
    CLI::App* conv_cmd =
        app.add_subcommand("convergence", "refinement study on a generated domain");
    conv_cmd->add_flag("--cantilever", cv.cantilever, "end-loaded cantilever domain");
    conv_cmd->add_flag("--plate", cv.plate, "plate-with-hole quadrant domain");
    conv_cmd->add_option("--elements", cv.elements, "comma-separated element counts")
        ->required()
        ->delimiter(',');
    conv_cmd->add_option("--lloyd", cv.lloyd, "Lloyd smoothing iterations");
    conv_cmd->add_option("--seed", cv.seed, "random seed");
    conv_cmd->add_option("--stab", cv.stab_spec, "stabilization: trace:TAU or diag:ALPHA");
    conv_cmd->add_option("--tol", cv.tol, "relative residual tolerance");
    conv_cmd->add_option("--out", cv.out_dir, "directory for convergence.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            return cmd_solve(solve_file, solve_out, solve_stab, solve_tol, solve_verify,
                             solve_probe);
        }
        if (check_cmd->parsed()) {
            return cmd_element_check(check_file, check_stab, check_tol);
        }
        if (mesh_cmd->parsed()) {
            return cmd_meshgen(mg);
        }
        if (conv_cmd->parsed()) {
            return cmd_convergence(cv);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
