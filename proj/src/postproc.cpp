#include "vem2d/postproc.hpp"

#include <fstream>
#include <limits>
#include <string>

#include "vem2d/element.hpp"
#include "vem2d/errors.hpp"

namespace vem2d {

namespace {

void require_elements(const SolutionField& field, const char* who) {
    if (field.stress.empty()) {
        throw ValidationError(std::string(who) + " requires a non-empty solution field");
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    return out;
}

} // namespace

SolutionField recover_fields(const Mesh& mesh, const Material& mat, const Eigen::VectorXd& u,
                             Execution exec) {
    if (u.size() != 2 * mesh.node_count()) {
        throw ValidationError("displacement vector length does not match mesh dof count");
    }
    SolutionField field;
    field.displacements = u;
    const size_t n = static_cast<size_t>(mesh.element_count());
    field.strain.resize(n);
    field.stress.resize(n);
    const Eigen::Matrix3d C = moduli_matrix(mat);

    auto recover_one = [&](int e) {
        const ElementGeometry geom(element_polygon(mesh, e));
        const ProjectorSet proj = compute_projectors(geom, mat);
        const Eigen::VectorXd u_e = gather_element_dofs(u, mesh.elements[static_cast<size_t>(e)]);
        const Eigen::Vector3d eps = element_strain(proj, geom.frame, u_e);
        field.strain[static_cast<size_t>(e)] = eps;
        field.stress[static_cast<size_t>(e)] = C * eps;
    };
#ifdef _OPENMP
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int e = 0; e < mesh.element_count(); ++e) {
            recover_one(e);
        }
        return field;
    }
#else
    (void)exec;
#endif
    for (int e = 0; e < mesh.element_count(); ++e) {
        recover_one(e);
    }
    return field;
}

int nearest_node(const Mesh& mesh, const Vec2& probe) {
    if (mesh.nodes.empty()) {
        throw ValidationError("nearest_node requires a non-empty mesh");
    }
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < mesh.node_count(); ++i) {
        const double d = (mesh.nodes[static_cast<size_t>(i)] - probe).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Vec2 probe_displacement(const SolutionField& field, const Mesh& mesh, const Vec2& probe) {
    const int node = nearest_node(mesh, probe);
    return Vec2(field.displacements(2 * node), field.displacements(2 * node + 1));
}

double max_stress(const SolutionField& field, int component) {
    require_elements(field, "max_stress");
    double best = -std::numeric_limits<double>::infinity();
    for (const Eigen::Vector3d& s : field.stress) {
        best = std::max(best, s(component));
    }
    return best;
}

double min_stress(const SolutionField& field, int component) {
    require_elements(field, "min_stress");
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Vector3d& s : field.stress) {
        best = std::min(best, s(component));
    }
    return best;
}

double beam_theory_tip(double P, double L, double E, double I) {
    return P * L * L * L / (3.0 * E * I);
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const SolutionField& field) {
    require_elements(field, "write_vtk");
    std::ofstream out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "vem2d solution\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.node_count() << " double\n";
    for (const Vec2& p : mesh.nodes) {
        out << format_full(p.x()) << " " << format_full(p.y()) << " 0\n";
    }
    size_t cell_ints = 0;
    for (const auto& loop : mesh.elements) {
        cell_ints += loop.size() + 1;
    }
    out << "CELLS " << mesh.element_count() << " " << cell_ints << "\n";
    for (const auto& loop : mesh.elements) {
        out << loop.size();
        for (int id : loop) out << " " << id;
        out << "\n";
    }
    out << "CELL_TYPES " << mesh.element_count() << "\n";
    for (int e = 0; e < mesh.element_count(); ++e) {
        out << "7\n"; // VTK_POLYGON
    }
    out << "POINT_DATA " << mesh.node_count() << "\n";
    out << "VECTORS displacement double\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
        out << format_full(field.displacements(2 * i)) << " "
            << format_full(field.displacements(2 * i + 1)) << " 0\n";
    }
    out << "CELL_DATA " << mesh.element_count() << "\n";
    out << "VECTORS stress double\n";
    for (const Eigen::Vector3d& s : field.stress) {
        out << format_full(s(0)) << " " << format_full(s(1)) << " " << format_full(s(2)) << "\n";
    }
    out << "VECTORS strain double\n";
    for (const Eigen::Vector3d& s : field.strain) {
        out << format_full(s(0)) << " " << format_full(s(1)) << " " << format_full(s(2)) << "\n";
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

void write_nodes_csv(const std::filesystem::path& path, const Mesh& mesh,
                     const SolutionField& field) {
    std::ofstream out = open_out(path);
    out << "node,x,y,ux,uy\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
        const Vec2& p = mesh.nodes[static_cast<size_t>(i)];
        out << (i + 1) << "," << format_full(p.x()) << "," << format_full(p.y()) << ","
            << format_full(field.displacements(2 * i)) << ","
            << format_full(field.displacements(2 * i + 1)) << "\n";
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

void write_elements_csv(const std::filesystem::path& path, const Mesh& mesh,
                        const SolutionField& field) {
    require_elements(field, "write_elements_csv");
    std::ofstream out = open_out(path);
    out << "element,centroid_x,centroid_y,area,eps_x,eps_y,gamma_xy,sigma_x,sigma_y,sigma_xy\n";
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Polygon poly = element_polygon(mesh, e);
        const Eigen::Vector3d& eps = field.strain[static_cast<size_t>(e)];
        const Eigen::Vector3d& sig = field.stress[static_cast<size_t>(e)];
        out << (e + 1) << "," << format_full(poly.centroid().x()) << ","
            << format_full(poly.centroid().y()) << "," << format_full(poly.area()) << ","
            << format_full(eps(0)) << "," << format_full(eps(1)) << "," << format_full(eps(2))
            << "," << format_full(sig(0)) << "," << format_full(sig(1)) << ","
            << format_full(sig(2)) << "\n";
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

} // namespace vem2d
