#include "voltherm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voltherm {

namespace {

double tri_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

// Stitch two concentric node rings into a band of triangles. Starting from
// the shared angle-zero diagonal, each step advances whichever side yields
// the shorter new diagonal (greedy), which keeps every edge within about
// half an inner node spacing even when the rings differ in count by a large
// factor. Produces n_in + n_out triangles, all consistently oriented.
void zipper_band(const std::vector<Vec2>& nodes,
                 const std::vector<int>& inner,
                 const std::vector<int>& outer,
                 std::vector<std::array<int, 3>>& tris) {
    const int ni = static_cast<int>(inner.size());
    const int no = static_cast<int>(outer.size());
    int i = 0, j = 0; // completed steps on inner / outer ring
    while (i < ni || j < no) {
        bool advance_inner;
        if (i >= ni) {
            advance_inner = false;
        } else if (j >= no) {
            advance_inner = true;
        } else {
            const double d_inner = (nodes[inner[(i + 1) % ni]] - nodes[outer[j % no]]).norm();
            const double d_outer = (nodes[inner[i % ni]] - nodes[outer[(j + 1) % no]]).norm();
            advance_inner = d_inner < d_outer;
        }
        if (advance_inner) {
            // triangle: current outer node + inner edge (i -> i+1)
            tris.push_back({inner[i % ni], inner[(i + 1) % ni], outer[j % no]});
            ++i;
        } else {
            tris.push_back({inner[i % ni], outer[(j + 1) % no], outer[j % no]});
            ++j;
        }
    }
}

} // namespace

Mesh build_disk_mesh(double h_target) {
    if (!(h_target >= 0.005 && h_target <= 0.5))
        throw std::invalid_argument("build_disk_mesh: h_target must be in [0.005, 0.5]");

    const int M = static_cast<int>(std::ceil(1.0 / h_target - 1e-12));
    const int boundary_mult = 30; // see Mesh doc: fixes the polygonal area defect

    Mesh mesh;
    mesh.h_target = h_target;

    std::vector<std::vector<int>> rings(M + 1);
    mesh.nodes.emplace_back(0.0, 0.0);
    rings[0] = {0};
    for (int m = 1; m <= M; ++m) {
        const int n = (m < M) ? 6 * m : boundary_mult * M;
        const double r = static_cast<double>(m) / M;
        rings[m].reserve(n);
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * kPi * j / n;
            if (m < M) {
                mesh.nodes.emplace_back(r * std::cos(th), r * std::sin(th));
            } else {
                // boundary nodes sit exactly on the unit circle
                mesh.nodes.emplace_back(std::cos(th), std::sin(th));
            }
            rings[m].push_back(static_cast<int>(mesh.nodes.size()) - 1);
        }
    }

    // center fan
    if (M >= 1) {
        const auto& r1 = rings[1];
        const int n1 = static_cast<int>(r1.size());
        for (int j = 0; j < n1; ++j)
            mesh.tris.push_back({0, r1[j], r1[(j + 1) % n1]});
    }
    for (int m = 1; m < M; ++m)
        zipper_band(mesh.nodes, rings[m], rings[m + 1], mesh.tris);

    // orientation: enforce CCW
    for (auto& t : mesh.tris) {
        if (tri_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) < 0)
            std::swap(t[1], t[2]);
    }

    const int n_nodes = mesh.n_nodes();
    mesh.on_boundary.assign(n_nodes, 0);
    for (int idx : rings[M]) mesh.on_boundary[idx] = 1;

    mesh.boundary_nodes = rings[M];
    const int nb = static_cast<int>(mesh.boundary_nodes.size());
    mesh.boundary_edges.reserve(nb);
    for (int j = 0; j < nb; ++j)
        mesh.boundary_edges.push_back({mesh.boundary_nodes[j], mesh.boundary_nodes[(j + 1) % nb]});

    mesh.interior_index.assign(n_nodes, -1);
    for (int i = 0; i < n_nodes; ++i) {
        if (!mesh.on_boundary[i]) {
            mesh.interior_index[i] = static_cast<int>(mesh.interior_nodes.size());
            mesh.interior_nodes.push_back(i);
        }
    }

    mesh.tri_area.resize(mesh.n_tris());
    mesh.node_patch_area.assign(n_nodes, 0.0);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const double a = tri_signed_area(mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]);
        mesh.tri_area[t] = a;
        for (int v : tr) mesh.node_patch_area[v] += a;
    }

    mesh.arc_weight.assign(nb, 0.0);
    for (int j = 0; j < nb; ++j) {
        const Vec2& a = mesh.nodes[mesh.boundary_nodes[j]];
        const Vec2& b = mesh.nodes[mesh.boundary_nodes[(j + 1) % nb]];
        const double chord = (b - a).norm();
        mesh.arc_weight[j] += 0.5 * chord;
        mesh.arc_weight[(j + 1) % nb] += 0.5 * chord;
    }

    mesh.build_search_grid();
    return mesh;
}

double Mesh::arc_coordinate(int i) const {
    double s = 0.0;
    for (int j = 0; j < i; ++j) {
        const Vec2& a = nodes[boundary_nodes[j]];
        const Vec2& b = nodes[boundary_nodes[j + 1]];
        s += (b - a).norm();
    }
    return s;
}

void Mesh::build_search_grid() {
    grid_n_ = std::max(4, static_cast<int>(std::floor(1.0 / h_target)));
    grid_bins_.assign(static_cast<size_t>(grid_n_) * grid_n_, {});
    const double cell = 2.0 / grid_n_;
    auto clampi = [this](int v) { return std::min(std::max(v, 0), grid_n_ - 1); };
    for (int t = 0; t < n_tris(); ++t) {
        const auto& tr = tris[t];
        double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
        for (int v : tr) {
            xmin = std::min(xmin, nodes[v].x());
            xmax = std::max(xmax, nodes[v].x());
            ymin = std::min(ymin, nodes[v].y());
            ymax = std::max(ymax, nodes[v].y());
        }
        const int i0 = clampi(static_cast<int>(std::floor((xmin + 1.0) / cell)));
        const int i1 = clampi(static_cast<int>(std::floor((xmax + 1.0) / cell)));
        const int j0 = clampi(static_cast<int>(std::floor((ymin + 1.0) / cell)));
        const int j1 = clampi(static_cast<int>(std::floor((ymax + 1.0) / cell)));
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                grid_bins_[static_cast<size_t>(j) * grid_n_ + i].push_back(t);
    }
}

int Mesh::locate(const Vec2& p, std::array<double, 3>& bary) const {
    const double cell = 2.0 / grid_n_;
    auto clampi = [this](int v) { return std::min(std::max(v, 0), grid_n_ - 1); };
    const int ci = clampi(static_cast<int>(std::floor((p.x() + 1.0) / cell)));
    const int cj = clampi(static_cast<int>(std::floor((p.y() + 1.0) / cell)));

    int best_t = -1;
    double best_viol = 1e30;
    std::array<double, 3> best_b{};
    // scan the cell and, if needed, growing neighborhoods
    for (int radius = 0; radius < grid_n_; ++radius) {
        for (int j = std::max(0, cj - radius); j <= std::min(grid_n_ - 1, cj + radius); ++j) {
            for (int i = std::max(0, ci - radius); i <= std::min(grid_n_ - 1, ci + radius); ++i) {
                if (radius > 0 && std::abs(i - ci) != radius && std::abs(j - cj) != radius) continue;
                for (int t : grid_bins_[static_cast<size_t>(j) * grid_n_ + i]) {
                    const auto& tr = tris[t];
                    const Vec2 &a = nodes[tr[0]], &b = nodes[tr[1]], &c = nodes[tr[2]];
                    const double area = tri_area[t];
                    const double l0 = tri_signed_area(p, b, c) / area;
                    const double l1 = tri_signed_area(a, p, c) / area;
                    const double l2 = 1.0 - l0 - l1;
                    const double viol = -std::min({l0, l1, l2});
                    if (viol < best_viol) {
                        best_viol = viol;
                        best_t = t;
                        best_b = {l0, l1, l2};
                    }
                    if (viol <= 1e-12) {
                        bary = {l0, l1, l2};
                        return t;
                    }
                }
            }
        }
        if (best_t >= 0 && best_viol < 0.5 * h_target) break; // close enough; stop growing
    }
    if (best_t < 0) throw std::runtime_error("Mesh::locate: empty mesh");
    // clamp barycentrics for points just outside the polygon
    double s = 0;
    for (double& v : best_b) {
        v = std::max(v, 0.0);
        s += v;
    }
    for (double& v : best_b) v /= s;
    bary = best_b;
    return best_t;
}

double Mesh::interpolate(const std::vector<double>& nodal, const Vec2& p) const {
    std::array<double, 3> b{};
    const int t = locate(p, b);
    const auto& tr = tris[t];
    return b[0] * nodal[tr[0]] + b[1] * nodal[tr[1]] + b[2] * nodal[tr[2]];
}

void save_mesh(const std::string& path, const Mesh& mesh, const MeshFields& fields) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_mesh: cannot open " + path);
    char buf[80];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "mesh 1\n";
    os << "h " << fmt(mesh.h_target) << "\n";
    os << "nodes " << mesh.n_nodes() << "\n";
    for (const auto& p : mesh.nodes) os << fmt(p.x()) << " " << fmt(p.y()) << "\n";
    os << "triangles " << mesh.n_tris() << "\n";
    for (const auto& t : mesh.tris) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    os << "boundary_edges " << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges) os << e[0] << " " << e[1] << "\n";
    os << "fields " << fields.scalars.size() + fields.tensors.size() << "\n";
    for (const auto& [name, vals] : fields.scalars) {
        os << "field " << name << " scalar\n";
        for (double v : vals) os << fmt(v) << "\n";
    }
    for (const auto& [name, vals] : fields.tensors) {
        os << "field " << name << " tensor\n";
        for (const auto& v : vals) os << fmt(v[0]) << " " << fmt(v[1]) << " " << fmt(v[2]) << "\n";
    }
    if (!os) throw std::runtime_error("save_mesh: write failed for " + path);
}

namespace {
// token stream that skips '#' comments
struct TokenReader {
    std::ifstream is;
    explicit TokenReader(const std::string& path) : is(path) {}
    std::string next() {
        std::string tok;
        while (is >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(is, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("mesh file: unexpected end of input");
    }
    int next_int() { return std::stoi(next()); }
    double next_double() { return std::stod(next()); }
};
} // namespace

Mesh load_mesh(const std::string& path, MeshFields* fields) {
    TokenReader tr(path);
    if (!tr.is) throw std::runtime_error("load_mesh: cannot open " + path);
    if (tr.next() != "mesh" || tr.next_int() != 1)
        throw std::runtime_error("load_mesh: bad header in " + path);
    if (tr.next() != "h") throw std::runtime_error("load_mesh: missing h");
    const double h = tr.next_double();

    Mesh mesh;
    mesh.h_target = h;
    if (tr.next() != "nodes") throw std::runtime_error("load_mesh: missing nodes");
    const int n = tr.next_int();
    mesh.nodes.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = tr.next_double();
        const double y = tr.next_double();
        mesh.nodes.emplace_back(x, y);
    }
    if (tr.next() != "triangles") throw std::runtime_error("load_mesh: missing triangles");
    const int t = tr.next_int();
    mesh.tris.reserve(t);
    for (int i = 0; i < t; ++i) {
        std::array<int, 3> tri{tr.next_int(), tr.next_int(), tr.next_int()};
        mesh.tris.push_back(tri);
    }
    if (tr.next() != "boundary_edges") throw std::runtime_error("load_mesh: missing boundary_edges");
    const int b = tr.next_int();
    mesh.boundary_edges.reserve(b);
    for (int i = 0; i < b; ++i) {
        std::array<int, 2> e{tr.next_int(), tr.next_int()};
        mesh.boundary_edges.push_back(e);
    }

    mesh.on_boundary.assign(n, 0);
    for (const auto& e : mesh.boundary_edges) mesh.on_boundary[e[0]] = 1;
    mesh.boundary_nodes.clear();
    for (const auto& e : mesh.boundary_edges) mesh.boundary_nodes.push_back(e[0]);
    mesh.interior_index.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!mesh.on_boundary[i]) {
            mesh.interior_index[i] = static_cast<int>(mesh.interior_nodes.size());
            mesh.interior_nodes.push_back(i);
        }
    }
    mesh.tri_area.resize(mesh.n_tris());
    mesh.node_patch_area.assign(n, 0.0);
    for (int k = 0; k < mesh.n_tris(); ++k) {
        const auto& tri = mesh.tris[k];
        const double a =
            tri_signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
        mesh.tri_area[k] = a;
        for (int v : tri) mesh.node_patch_area[v] += a;
    }
    const int nb = mesh.n_bnodes();
    mesh.arc_weight.assign(nb, 0.0);
    for (int j = 0; j < nb; ++j) {
        const Vec2& a = mesh.nodes[mesh.boundary_nodes[j]];
        const Vec2& c = mesh.nodes[mesh.boundary_nodes[(j + 1) % nb]];
        const double chord = (c - a).norm();
        mesh.arc_weight[j] += 0.5 * chord;
        mesh.arc_weight[(j + 1) % nb] += 0.5 * chord;
    }
    mesh.build_search_grid();

    if (tr.next() != "fields") throw std::runtime_error("load_mesh: missing fields");
    const int nf = tr.next_int();
    for (int f = 0; f < nf; ++f) {
        if (tr.next() != "field") throw std::runtime_error("load_mesh: missing field block");
        const std::string name = tr.next();
        const std::string kind = tr.next();
        if (kind == "scalar") {
            std::vector<double> vals(n);
            for (int i = 0; i < n; ++i) vals[i] = tr.next_double();
            if (fields) fields->scalars[name] = std::move(vals);
        } else if (kind == "tensor") {
            std::vector<std::array<double, 3>> vals(n);
            for (int i = 0; i < n; ++i)
                vals[i] = {tr.next_double(), tr.next_double(), tr.next_double()};
            if (fields) fields->tensors[name] = std::move(vals);
        } else {
            throw std::runtime_error("load_mesh: unknown field kind " + kind);
        }
    }
    return mesh;
}

} // namespace voltherm
