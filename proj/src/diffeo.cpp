#include "voltherm/diffeo.hpp"

#include <cmath>
#include <stdexcept>

namespace voltherm {

double bump_eta(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double u = 1.0 - s * s;
    return std::exp(1.0 - 1.0 / u);
}

double bump_eta_d1_over_s(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double u = 1.0 - s * s;
    return -2.0 / (u * u) * bump_eta(s);
}

double bump_eta_d1(double s) { return s * bump_eta_d1_over_s(s); }

double bump_eta_d2(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double u = 1.0 - s * s;
    const double e = bump_eta(s);
    const double s2 = s * s;
    return e * (4.0 * s2 / (u * u * u * u) - 8.0 * s2 / (u * u * u) - 2.0 / (u * u));
}

Diffeomorphism identity_diffeo() {
    Diffeomorphism d;
    d.forward = [](const Vec2& x) { return x; };
    d.inverse = [](const Vec2& y) { return y; };
    d.jacobian = [](const Vec2&) { return Mat2::Identity(); };
    return d;
}

Diffeomorphism make_bump_diffeo(const Vec2& center, double radius, const Vec2& amplitude) {
    if (!(radius > 0)) throw std::invalid_argument("bump diffeo: radius must be positive");
    if (amplitude.norm() > 0.3 * radius + 1e-15)
        throw std::invalid_argument("bump diffeo: |amplitude| must be <= 0.3 radius");
    if (center.norm() + radius >= 1.0)
        throw std::invalid_argument("bump diffeo: support disk must lie strictly inside the unit disk");

    const Vec2 c = center;
    const double rho = radius;
    const Vec2 a = amplitude;

    auto fwd = [c, rho, a](const Vec2& x) -> Vec2 {
        const double s = (x - c).norm() / rho;
        return x + a * bump_eta(s);
    };
    auto jac = [c, rho, a](const Vec2& x) -> Mat2 {
        // grad eta(|x-c|/rho) = (eta'(s)/s) (x-c)/rho^2, smooth everywhere
        const Vec2 d = x - c;
        const double s = d.norm() / rho;
        const Vec2 g = bump_eta_d1_over_s(s) / (rho * rho) * d;
        return Mat2::Identity() + a * g.transpose();
    };
    auto inv = [fwd, c, rho, a](const Vec2& y) -> Vec2 {
        Vec2 x = y;
        double step = 1.0;
        double prev_res = 1e300;
        for (int it = 0; it < 100; ++it) {
            const Vec2 r = y - fwd(x);
            const double res = r.lpNorm<Eigen::Infinity>();
            if (res < 1e-12) return x;
            if (res > prev_res) step *= 0.5; // damp if the iteration overshoots
            prev_res = res;
            x += step * r;
        }
        return x; // contraction guarantees this is already at ~1e-12
    };

    Diffeomorphism d;
    d.forward = fwd;
    d.inverse = inv;
    d.jacobian = jac;
    return d;
}

Diffeomorphism compose(const Diffeomorphism& G, const Diffeomorphism& F) {
    Diffeomorphism d;
    auto gf = G.forward;
    auto ff = F.forward;
    auto gi = G.inverse;
    auto fi = F.inverse;
    auto gj = G.jacobian;
    auto fj = F.jacobian;
    d.forward = [gf, ff](const Vec2& x) { return gf(ff(x)); };
    d.inverse = [gi, fi](const Vec2& y) { return fi(gi(y)); };
    d.jacobian = [gj, fj, ff](const Vec2& x) -> Mat2 { return gj(ff(x)) * fj(x); };
    return d;
}

AnalyticTensor pushforward_tensor(const AnalyticTensor& T, const Diffeomorphism& F) {
    auto inv = F.inverse;
    auto jac = F.jacobian;
    return [T, inv, jac](const Vec2& y) -> Mat2 {
        const Vec2 x = inv(y);
        const Mat2 J = jac(x);
        return J * T(x) * J.transpose() / J.determinant();
    };
}

AnalyticScalar pushforward_kappa(const AnalyticScalar& k, const Diffeomorphism& F) {
    auto inv = F.inverse;
    auto jac = F.jacobian;
    return [k, inv, jac](const Vec2& y) -> double {
        const Vec2 x = inv(y);
        return jac(x).determinant() * k(x);
    };
}

AnalyticScalar pushforward_source(const AnalyticScalar& S, const Diffeomorphism& F) {
    auto inv = F.inverse;
    auto jac = F.jacobian;
    return [S, inv, jac](const Vec2& y) -> double {
        const Vec2 x = inv(y);
        return S(x) / jac(x).determinant();
    };
}

TensorField pushforward_tensor(const Mesh& mesh, const TensorField& T, const Diffeomorphism& F) {
    TensorField out(mesh.n_nodes());
    std::array<double, 3> b{};
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const Vec2 x = F.inverse(mesh.nodes[i]);
        const int t = mesh.locate(x, b);
        const auto& tr = mesh.tris[t];
        Mat2 Tx = Mat2::Zero();
        for (int v = 0; v < 3; ++v) Tx += b[v] * T.at(tr[v]);
        const Mat2 J = F.jacobian(x);
        out.set(i, J * Tx * J.transpose() / J.determinant());
    }
    return out;
}

ScalarField pushforward_kappa(const Mesh& mesh, const ScalarField& k, const Diffeomorphism& F) {
    ScalarField out;
    out.v.resize(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const Vec2 x = F.inverse(mesh.nodes[i]);
        out.v[i] = F.jacobian(x).determinant() * mesh.interpolate(k.v, x);
    }
    return out;
}

ScalarField pushforward_source(const Mesh& mesh, const ScalarField& S, const Diffeomorphism& F) {
    ScalarField out;
    out.v.resize(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const Vec2 x = F.inverse(mesh.nodes[i]);
        out.v[i] = mesh.interpolate(S.v, x) / F.jacobian(x).determinant();
    }
    return out;
}

} // namespace voltherm
