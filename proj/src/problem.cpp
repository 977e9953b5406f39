#include "vem2d/problem.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "vem2d/errors.hpp"

namespace vem2d {

namespace {

constexpr const char* kHeader = "# vem2d problem v1";

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    return tokens;
}

struct Cursor {
    std::istream& in;
    std::string source;
    int line_no = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw IoError(source + ":" + std::to_string(line_no) + ": " + msg);
    }

    // Next content line with comments stripped; empty optional at EOF.
    std::optional<std::string> next() {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const size_t hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (!line.empty()) return line;
        }
        return std::nullopt;
    }
};

double parse_double(const Cursor& cur, const std::string& tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        cur.fail("expected a number, got '" + tok + "'");
    }
    return v;
}

int parse_int(const Cursor& cur, const std::string& tok) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        cur.fail("expected an integer, got '" + tok + "'");
    }
    return v;
}

// Splits "key=value"; returns key, writes value.
std::string parse_kv(const Cursor& cur, const std::string& tok, std::string& value) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size()) {
        cur.fail("expected key=value, got '" + tok + "'");
    }
    value = tok.substr(eq + 1);
    return tok.substr(0, eq);
}

int node_ref(const Cursor& cur, const std::string& tok, int n_nodes) {
    const int id = parse_int(cur, tok);
    if (id < 1 || id > n_nodes) {
        cur.fail("unknown node id " + tok);
    }
    return id - 1;
}

} // namespace

void add_point_load(LoadCase& loads, int node, const Vec2& force) {
    auto [it, inserted] = loads.point_loads.try_emplace(node, Vec2::Zero());
    it->second += force;
    (void)inserted;
}

void validate(const LoadCase& loads, const Mesh& mesh) {
    const int n = mesh.node_count();
    for (const auto& [node, force] : loads.point_loads) {
        if (node < 0 || node >= n) {
            throw ValidationError("load references unknown node " + std::to_string(node + 1));
        }
        for (int c = 0; c < 2; ++c) {
            if (force(c) != 0.0 && loads.dirichlet.count({node, c}) > 0) {
                throw ValidationError("node " + std::to_string(node + 1) + " dof " +
                                      (c == 0 ? std::string("ux") : std::string("uy")) +
                                      " is both loaded and constrained");
            }
        }
    }
    for (const auto& [dof, value] : loads.dirichlet) {
        if (dof.first < 0 || dof.first >= n) {
            throw ValidationError("dirichlet constraint references unknown node " +
                                  std::to_string(dof.first + 1));
        }
        (void)value;
    }
    if (!(loads.thickness > 0.0)) {
        throw ValidationError("thickness must be positive");
    }
}

Problem parse_problem(std::istream& in, const std::string& source_name) {
    Cursor cur{in, source_name};

    {
        std::string raw;
        if (!std::getline(in, raw)) throw IoError(source_name + ": empty file");
        ++cur.line_no;
        if (trim(raw) != kHeader) {
            cur.fail("expected header '" + std::string(kHeader) + "'");
        }
    }

    Problem prob;
    bool have_material = false;
    bool have_nodes = false;
    bool have_elements = false;

    for (auto line = cur.next(); line; line = cur.next()) {
        const std::vector<std::string> tok = tokenize(*line);
        const std::string& directive = tok[0];

        if (directive == "material") {
            if (have_material) cur.fail("duplicate material line");
            have_material = true;
            bool have_E = false, have_nu = false, have_mode = false;
            for (size_t i = 1; i < tok.size(); ++i) {
                std::string value;
                const std::string key = parse_kv(cur, tok[i], value);
                if (key == "E") {
                    prob.material.youngs_modulus = parse_double(cur, value);
                    have_E = true;
                } else if (key == "nu") {
                    prob.material.poisson_ratio = parse_double(cur, value);
                    have_nu = true;
                } else if (key == "mode") {
                    if (value == "plane_stress") {
                        prob.material.mode = PlaneMode::PlaneStress;
                    } else if (value == "plane_strain") {
                        prob.material.mode = PlaneMode::PlaneStrain;
                    } else {
                        cur.fail("unknown mode '" + value + "'");
                    }
                    have_mode = true;
                } else if (key == "thickness") {
                    prob.loads.thickness = parse_double(cur, value);
                } else {
                    cur.fail("unknown material key '" + key + "'");
                }
            }
            if (!have_E || !have_nu || !have_mode) {
                cur.fail("material line requires E, nu, and mode");
            }
        } else if (directive == "nodes") {
            if (have_nodes) cur.fail("duplicate nodes section");
            have_nodes = true;
            if (tok.size() != 2) cur.fail("usage: nodes <count>");
            const int count = parse_int(cur, tok[1]);
            if (count < 1) cur.fail("node count must be positive");
            prob.mesh.nodes.reserve(static_cast<size_t>(count));
            for (int i = 0; i < count; ++i) {
                auto node_line = cur.next();
                if (!node_line) cur.fail("unexpected end of file in nodes section");
                const std::vector<std::string> nt = tokenize(*node_line);
                if (nt.size() != 3) cur.fail("node line must be '<id> <x> <y>'");
                if (parse_int(cur, nt[0]) != i + 1) {
                    cur.fail("node ids must run 1.." + std::to_string(count) + " in order");
                }
                prob.mesh.nodes.emplace_back(parse_double(cur, nt[1]), parse_double(cur, nt[2]));
            }
        } else if (directive == "elements") {
            if (!have_nodes) cur.fail("elements section before nodes section");
            if (have_elements) cur.fail("duplicate elements section");
            have_elements = true;
            if (tok.size() != 2) cur.fail("usage: elements <count>");
            const int count = parse_int(cur, tok[1]);
            if (count < 1) cur.fail("element count must be positive");
            prob.mesh.elements.reserve(static_cast<size_t>(count));
            for (int i = 0; i < count; ++i) {
                auto el_line = cur.next();
                if (!el_line) cur.fail("unexpected end of file in elements section");
                const std::vector<std::string> et = tokenize(*el_line);
                if (et.size() < 4) cur.fail("element line needs an id and at least 3 node ids");
                if (parse_int(cur, et[0]) != i + 1) {
                    cur.fail("element ids must run 1.." + std::to_string(count) + " in order");
                }
                std::vector<int> loop;
                loop.reserve(et.size() - 1);
                for (size_t k = 1; k < et.size(); ++k) {
                    loop.push_back(node_ref(cur, et[k], prob.mesh.node_count()));
                }
                prob.mesh.elements.push_back(std::move(loop));
            }
        } else if (directive == "nodeset") {
            if (!have_nodes) cur.fail("nodeset before nodes section");
            if (tok.size() < 3) cur.fail("usage: nodeset <name> <node ids...>");
            std::vector<int>& set = prob.mesh.node_sets[tok[1]];
            for (size_t i = 2; i < tok.size(); ++i) {
                set.push_back(node_ref(cur, tok[i], prob.mesh.node_count()));
            }
        } else if (directive == "dirichlet") {
            if (!have_nodes) cur.fail("dirichlet before nodes section");
            if (tok.size() < 3) cur.fail("usage: dirichlet <nodeset|node id> [ux=v] [uy=v]");
            std::vector<int> targets;
            if (prob.mesh.node_sets.count(tok[1]) > 0) {
                targets = prob.mesh.node_sets.at(tok[1]);
            } else {
                targets.push_back(node_ref(cur, tok[1], prob.mesh.node_count()));
            }
            for (size_t i = 2; i < tok.size(); ++i) {
                std::string value;
                const std::string key = parse_kv(cur, tok[i], value);
                int comp = -1;
                if (key == "ux") comp = 0;
                else if (key == "uy") comp = 1;
                else cur.fail("unknown dirichlet key '" + key + "'");
                const double v = parse_double(cur, value);
                for (int node : targets) {
                    prob.loads.dirichlet[{node, comp}] = v; // later lines override
                }
            }
        } else if (directive == "load") {
            if (!have_nodes) cur.fail("load before nodes section");
            if (tok.size() < 3) cur.fail("usage: load <node id> [fx=v] [fy=v]");
            const int node = node_ref(cur, tok[1], prob.mesh.node_count());
            Vec2 f = Vec2::Zero();
            for (size_t i = 2; i < tok.size(); ++i) {
                std::string value;
                const std::string key = parse_kv(cur, tok[i], value);
                if (key == "fx") f.x() = parse_double(cur, value);
                else if (key == "fy") f.y() = parse_double(cur, value);
                else cur.fail("unknown load key '" + key + "'");
            }
            add_point_load(prob.loads, node, f); // repeated loads accumulate
        } else {
            cur.fail("unknown directive '" + directive + "'");
        }
    }

    if (!have_material) throw IoError(source_name + ": missing material line");
    if (!have_nodes) throw IoError(source_name + ": missing nodes section");
    if (!have_elements) throw IoError(source_name + ": missing elements section");
    return prob;
}

Problem read_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return parse_problem(in, path.filename().string());
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_problem(std::ostream& out, const Problem& problem) {
    out << kHeader << "\n";
    const Material& m = problem.material;
    out << "material E=" << format_full(m.youngs_modulus) << " nu=" << format_full(m.poisson_ratio)
        << " mode=" << (m.mode == PlaneMode::PlaneStress ? "plane_stress" : "plane_strain")
        << " thickness=" << format_full(problem.loads.thickness) << "\n";
    out << "nodes " << problem.mesh.node_count() << "\n";
    for (int i = 0; i < problem.mesh.node_count(); ++i) {
        const Vec2& p = problem.mesh.nodes[static_cast<size_t>(i)];
        out << (i + 1) << " " << format_full(p.x()) << " " << format_full(p.y()) << "\n";
    }
    out << "elements " << problem.mesh.element_count() << "\n";
    for (int e = 0; e < problem.mesh.element_count(); ++e) {
        out << (e + 1);
        for (int id : problem.mesh.elements[static_cast<size_t>(e)]) {
            out << " " << (id + 1);
        }
        out << "\n";
    }
    for (const auto& [name, ids] : problem.mesh.node_sets) {
        out << "nodeset " << name;
        for (int id : ids) out << " " << (id + 1);
        out << "\n";
    }
    for (const auto& [dof, value] : problem.loads.dirichlet) {
        out << "dirichlet " << (dof.first + 1) << " " << (dof.second == 0 ? "ux" : "uy") << "="
            << format_full(value) << "\n";
    }
    for (const auto& [node, force] : problem.loads.point_loads) {
        out << "load " << (node + 1) << " fx=" << format_full(force.x())
            << " fy=" << format_full(force.y()) << "\n";
    }
}

void write_problem(const std::filesystem::path& path, const Problem& problem) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_problem(out, problem);
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

} // namespace vem2d
