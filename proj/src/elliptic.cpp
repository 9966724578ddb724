#include "voltherm/elliptic.hpp"

#include <stdexcept>

namespace voltherm {

BoundaryData boundary_trace(const Mesh& mesh, const AnalyticScalar& g) {
    BoundaryData out;
    out.f.reserve(mesh.n_bnodes());
    for (int idx : mesh.boundary_nodes) out.f.push_back(g(mesh.nodes[idx]));
    return out;
}

double FluxTrace::integral() const {
    double s = 0;
    for (size_t i = 0; i < flux.size(); ++i) s += flux[i] * arc_w[i];
    return s;
}

VoltageField solve_conductivity(const Mesh& mesh, const TensorField& gamma,
                                const BoundaryData& f) {
    if (f.size() != mesh.n_bnodes())
        throw std::invalid_argument("solve_conductivity: boundary data size mismatch");
    if (!(gamma.min_eigenvalue() > 0.0))
        throw std::invalid_argument("solve_conductivity: gamma must be SPD");
    const SpMat K = assemble_stiffness(mesh, gamma);
    VoltageField out;
    out.u = solve_dirichlet(mesh, K, f.f, VecXd::Zero(mesh.n_nodes()));
    out.data = f;
    return out;
}

FluxTrace dn_map(const Mesh& mesh, const TensorField& gamma, const VoltageField& u) {
    const SpMat K = assemble_stiffness(mesh, gamma);
    VecXd uv(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) uv[i] = u.u[i];
    const VecXd r = K * uv;
    FluxTrace out;
    out.flux.reserve(mesh.n_bnodes());
    out.arc_w.reserve(mesh.n_bnodes());
    for (int b = 0; b < mesh.n_bnodes(); ++b) {
        const int idx = mesh.boundary_nodes[b];
        out.flux.push_back(r[idx] / mesh.arc_weight[b]);
        out.arc_w.push_back(mesh.arc_weight[b]);
    }
    return out;
}

double dn_pairing(const FluxTrace& flux, const BoundaryData& g) {
    if (g.size() != static_cast<int>(flux.flux.size()))
        throw std::invalid_argument("dn_pairing: size mismatch");
    double s = 0;
    for (size_t i = 0; i < flux.flux.size(); ++i) s += flux.flux[i] * g.f[i] * flux.arc_w[i];
    return s;
}

double energy_form(const Mesh& mesh, const TensorField& gamma, const VoltageField& u) {
    double q = 0;
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const Mat2 A = (gamma.at(tr[0]) + gamma.at(tr[1]) + gamma.at(tr[2])) / 3.0;
        const Vec2 g = tri_gradient(mesh, t, u.u);
        q += mesh.tri_area[t] * g.dot(A * g);
    }
    return q;
}

ScalarField energy_density(const Mesh& mesh, const TensorField& gamma, const VoltageField& u) {
    ScalarField s(std::vector<double>(mesh.n_nodes(), 0.0));
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const Mat2 A = (gamma.at(tr[0]) + gamma.at(tr[1]) + gamma.at(tr[2])) / 3.0;
        const Vec2 g = tri_gradient(mesh, t, u.u);
        const double st = g.dot(A * g); // constant density on the triangle
        for (int v : tr) s[v] += mesh.tri_area[t] * st;
    }
    for (int i = 0; i < mesh.n_nodes(); ++i) s[i] /= mesh.node_patch_area[i];
    return s;
}

ScalarField liouville_potential(const Mesh& mesh, const ConductivityFamily& family) {
    ScalarField q(std::vector<double>(mesh.n_nodes(), 0.0));
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (!(family.gamma(mesh.nodes[i]) > 0.0))
            throw std::domain_error("liouville_potential: gamma must be positive");
        q[i] = family.q_interior(mesh.nodes[i]);
    }
    return q;
}

} // namespace voltherm
