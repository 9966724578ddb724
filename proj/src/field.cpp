#include "voltherm/field.hpp"

#include <cmath>

namespace voltherm {

double TensorField::min_eigenvalue() const {
    double lo = 1e300;
    for (const auto& a : v) {
        const double tr = a[0] + a[2];
        const double det = a[0] * a[2] - a[1] * a[1];
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        lo = std::min(lo, 0.5 * tr - disc);
    }
    return lo;
}

ScalarField sample_scalar(const Mesh& mesh, const AnalyticScalar& f) {
    ScalarField out;
    out.v.resize(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) out.v[i] = f(mesh.nodes[i]);
    return out;
}

TensorField sample_tensor(const Mesh& mesh, const AnalyticTensor& f) {
    TensorField out(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) out.set(i, f(mesh.nodes[i]));
    return out;
}

double integrate(const Mesh& mesh, const ScalarField& f) {
    double s = 0.0;
    for (int i = 0; i < mesh.n_nodes(); ++i) s += mesh.node_patch_area[i] / 3.0 * f.v[i];
    return s;
}

double l2_norm(const Mesh& mesh, const ScalarField& f) {
    // consistent mass quadrature: sum_T area/12 * (sum vi)^2 + (sum vi^2))
    double s = 0.0;
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const double a = mesh.tri_area[t] / 12.0;
        const double v0 = f.v[tr[0]], v1 = f.v[tr[1]], v2 = f.v[tr[2]];
        const double sum = v0 + v1 + v2;
        s += a * (sum * sum + v0 * v0 + v1 * v1 + v2 * v2);
    }
    return std::sqrt(std::max(0.0, s));
}

std::vector<double> to_p0(const Mesh& mesh, const ScalarField& f) {
    std::vector<double> out(mesh.n_tris());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        out[t] = (f.v[tr[0]] + f.v[tr[1]] + f.v[tr[2]]) / 3.0;
    }
    return out;
}

} // namespace voltherm
