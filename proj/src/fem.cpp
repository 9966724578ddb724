#include "voltherm/fem.hpp"

#include <stdexcept>
#include <vector>

namespace voltherm {

std::array<Vec2, 3> shape_gradients(const Mesh& mesh, int t) {
    const auto& tr = mesh.tris[t];
    const Vec2& a = mesh.nodes[tr[0]];
    const Vec2& b = mesh.nodes[tr[1]];
    const Vec2& c = mesh.nodes[tr[2]];
    const double inv2A = 1.0 / (2.0 * mesh.tri_area[t]);
    // grad(hat_i) = rot90(opposite edge) / (2 area), CCW orientation
    auto edge_grad = [inv2A](const Vec2& p, const Vec2& q) {
        return Vec2((p.y() - q.y()) * inv2A, (q.x() - p.x()) * inv2A);
    };
    return {edge_grad(b, c), edge_grad(c, a), edge_grad(a, b)};
}

Vec2 tri_gradient(const Mesh& mesh, int t, const ScalarField& v) {
    const auto g = shape_gradients(mesh, t);
    const auto& tr = mesh.tris[t];
    return v[tr[0]] * g[0] + v[tr[1]] * g[1] + v[tr[2]] * g[2];
}

SpMat assemble_stiffness(const Mesh& mesh, const TensorField& coeff) {
    const int n = mesh.n_nodes();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.n_tris()) * 9);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const Mat2 A = (coeff.at(tr[0]) + coeff.at(tr[1]) + coeff.at(tr[2])) / 3.0;
        const auto g = shape_gradients(mesh, t);
        const double area = mesh.tri_area[t];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trip.emplace_back(tr[i], tr[j], area * g[i].dot(A * g[j]));
    }
    SpMat K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

SpMat assemble_mass(const Mesh& mesh, const ScalarField& weight) {
    const int n = mesh.n_nodes();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.n_tris()) * 9);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const double wc = (weight[tr[0]] + weight[tr[1]] + weight[tr[2]]) / 3.0;
        const double s = wc * mesh.tri_area[t] / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trip.emplace_back(tr[i], tr[j], s * (i == j ? 2.0 : 1.0));
    }
    SpMat M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

VecXd apply_mass(const Mesh& mesh, const ScalarField& f) {
    VecXd b = VecXd::Zero(mesh.n_nodes());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const double s = mesh.tri_area[t] / 12.0;
        const double sum = f[tr[0]] + f[tr[1]] + f[tr[2]];
        for (int i = 0; i < 3; ++i) b[tr[i]] += s * (sum + f[tr[i]]);
    }
    return b;
}

ScalarField solve_dirichlet(const Mesh& mesh, const SpMat& A,
                            const std::vector<double>& trace, const VecXd& load) {
    const int n = mesh.n_nodes();
    const int ni = mesh.n_interior();
    if (static_cast<int>(trace.size()) != mesh.n_bnodes())
        throw std::invalid_argument("solve_dirichlet: trace size mismatch");

    // full nodal vector holding the boundary data, zero inside
    VecXd g = VecXd::Zero(n);
    for (int b = 0; b < mesh.n_bnodes(); ++b) g[mesh.boundary_nodes[b]] = trace[b];

    std::vector<Eigen::Triplet<double>> trip;
    VecXd rhs = VecXd::Zero(ni);
    for (int col = 0; col < A.outerSize(); ++col) {
        for (SpMat::InnerIterator it(A, col); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (mesh.on_boundary[i]) continue;
            const int ii = mesh.interior_index[i];
            if (mesh.on_boundary[j]) {
                rhs[ii] -= it.value() * g[j];
            } else {
                trip.emplace_back(ii, mesh.interior_index[j], it.value());
            }
        }
    }
    for (int i = 0; i < ni; ++i) rhs[i] += load[mesh.interior_nodes[i]];

    SpMat Aii(ni, ni);
    Aii.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<SpMat> solver(Aii);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_dirichlet: factorization failed (matrix not SPD?)");
    const VecXd ui = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_dirichlet: back-substitution failed");

    ScalarField out(std::vector<double>(n, 0.0));
    for (int i = 0; i < ni; ++i) out[mesh.interior_nodes[i]] = ui[i];
    for (int b = 0; b < mesh.n_bnodes(); ++b) out[mesh.boundary_nodes[b]] = trace[b];
    return out;
}

SpMat interior_block(const Mesh& mesh, const SpMat& A) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int col = 0; col < A.outerSize(); ++col) {
        for (SpMat::InnerIterator it(A, col); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (mesh.on_boundary[i] || mesh.on_boundary[j]) continue;
            trip.emplace_back(mesh.interior_index[i], mesh.interior_index[j], it.value());
        }
    }
    SpMat out(mesh.n_interior(), mesh.n_interior());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

VecXd gather_interior(const Mesh& mesh, const ScalarField& v) {
    VecXd out(mesh.n_interior());
    for (int i = 0; i < mesh.n_interior(); ++i) out[i] = v[mesh.interior_nodes[i]];
    return out;
}

ScalarField scatter_interior(const Mesh& mesh, const VecXd& vi) {
    ScalarField out(std::vector<double>(mesh.n_nodes(), 0.0));
    for (int i = 0; i < mesh.n_interior(); ++i) out[mesh.interior_nodes[i]] = vi[i];
    return out;
}

} // namespace voltherm
