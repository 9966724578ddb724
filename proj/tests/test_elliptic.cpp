#include "doctest.h"

#include "voltherm/elliptic.hpp"

#include <cmath>
#include <random>

using namespace voltherm;

namespace {
TensorField identity_gamma(const Mesh& mesh) {
    return sample_tensor(mesh, [](const Vec2&) { return Mat2::Identity().eval(); });
}
} // namespace

TEST_CASE("linear and constant voltages are reproduced exactly") {
    const Mesh mesh = build_disk_mesh(0.1);
    const TensorField gamma = identity_gamma(mesh);

    const auto ux = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                           return p.x();
                                       }));
    for (int i = 0; i < mesh.n_nodes(); ++i)
        CHECK(std::abs(ux.u[i] - mesh.nodes[i].x()) <= 1e-12);

    const auto uc = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2&) {
                                           return 3.25;
                                       }));
    for (int i = 0; i < mesh.n_nodes(); ++i) CHECK(std::abs(uc.u[i] - 3.25) <= 1e-12);

    // constants carry zero flux and zero energy
    const FluxTrace ft = dn_map(mesh, gamma, uc);
    for (double v : ft.flux) CHECK(std::abs(v) <= 1e-11);
    CHECK(energy_form(mesh, gamma, uc) <= 1e-20);
}

TEST_CASE("harmonic quadratic solution converges at second order") {
    auto solve_err = [](double h) {
        const Mesh mesh = build_disk_mesh(h);
        const TensorField gamma = identity_gamma(mesh);
        auto exact = [](const Vec2& p) { return p.x() * p.x() - p.y() * p.y(); };
        const auto u = solve_conductivity(mesh, gamma, boundary_trace(mesh, exact));
        double e = 0;
        for (int i = 0; i < mesh.n_nodes(); ++i)
            e = std::max(e, std::abs(u.u[i] - exact(mesh.nodes[i])));
        return e;
    };
    const double e1 = solve_err(0.1);
    const double e2 = solve_err(0.05);
    const double c1 = e1 / (0.1 * 0.1);
    const double c2 = e2 / (0.05 * 0.05);
    CHECK(e2 < e1);
    CHECK(c2 <= 1.5 * c1); // the h^2 constant stays stable under refinement
    CHECK(e1 <= 0.05);
}

TEST_CASE("consistent flux reproduces the analytic normal derivative") {
    const Mesh mesh = build_disk_mesh(0.1);
    const TensorField gamma = identity_gamma(mesh);
    const auto u = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                          return p.x();
                                      }));
    const FluxTrace ft = dn_map(mesh, gamma, u);
    // nu . grad(x) = x on the unit circle
    double emax = 0;
    for (int b = 0; b < mesh.n_bnodes(); ++b) {
        const Vec2 p = mesh.nodes[mesh.boundary_nodes[b]];
        emax = std::max(emax, std::abs(ft.flux[b] - p.x()));
    }
    CHECK(emax <= 1e-3);
}

TEST_CASE("flux of any solution integrates to zero") {
    const Mesh mesh = build_disk_mesh(0.1);
    const TensorField gamma =
        sample_tensor(mesh, [](const Vec2& p) {
            return (std::exp(0.4 * p.x()) * Mat2::Identity()).eval();
        });
    const auto u = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                          return p.x() * p.x() - p.y() + 0.3;
                                      }));
    const FluxTrace ft = dn_map(mesh, gamma, u);
    CHECK(std::abs(ft.integral()) <= 1e-10);
}

TEST_CASE("voltage-to-flux pairing is symmetric") {
    const Mesh mesh = build_disk_mesh(0.1);
    const TensorField gamma =
        sample_tensor(mesh, [](const Vec2& p) {
            const double w = 1.0 + 0.3 * p.squaredNorm();
            return (w * w * Mat2::Identity()).eval();
        });
    const BoundaryData f = boundary_trace(mesh, [](const Vec2& p) { return p.x(); });
    const BoundaryData g = boundary_trace(mesh, [](const Vec2& p) {
        return p.x() * p.x() - p.y() * p.y();
    });
    const auto uf = solve_conductivity(mesh, gamma, f);
    const auto ug = solve_conductivity(mesh, gamma, g);
    const double lhs = dn_pairing(dn_map(mesh, gamma, uf), g);
    const double rhs = dn_pairing(dn_map(mesh, gamma, ug), f);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("energy of analytic harmonic traces") {
    const Mesh mesh = build_disk_mesh(0.05);
    const TensorField gamma = identity_gamma(mesh);

    const auto ux = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                           return p.x();
                                       }));
    CHECK(energy_form(mesh, gamma, ux) == doctest::Approx(kPi).epsilon(1e-3));

    // Re z^n has energy n*pi on the unit disk
    const auto u2 = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                           return p.x() * p.x() - p.y() * p.y();
                                       }));
    CHECK(energy_form(mesh, gamma, u2) == doctest::Approx(2.0 * kPi).epsilon(0.01));

    const auto u3 = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                           return p.x() * (p.x() * p.x() - 3.0 * p.y() * p.y());
                                       }));
    CHECK(energy_form(mesh, gamma, u3) == doctest::Approx(3.0 * kPi).epsilon(0.01));
}

TEST_CASE("energy density is exact for linear fields and conservative") {
    const Mesh mesh = build_disk_mesh(0.1);
    const TensorField gamma = identity_gamma(mesh);
    const auto ux = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                           return p.x();
                                       }));
    const ScalarField s = energy_density(mesh, gamma, ux);
    for (int i = 0; i < mesh.n_nodes(); ++i) CHECK(std::abs(s[i] - 1.0) <= 1e-12);

    // conservation: the consistent integral of the density equals the energy
    const auto u2 = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                           return p.x() * p.x() - p.y() * p.y();
                                       }));
    const ScalarField s2 = energy_density(mesh, gamma, u2);
    const double q = energy_form(mesh, gamma, u2);
    CHECK(integrate(mesh, s2) == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("solutions obey the discrete maximum principle") {
    std::mt19937_64 rng(20260822ull);
    for (double h : {0.1, 0.05}) {
        const Mesh mesh = build_disk_mesh(h);
        const TensorField gamma = identity_gamma(mesh);
        for (int trial = 0; trial < 4; ++trial) {
            const double a1 = draw_uniform(rng, -1.0, 1.0);
            const double a2 = draw_uniform(rng, -1.0, 1.0);
            const double a3 = draw_uniform(rng, -1.0, 1.0);
            const int m = 1 + trial;
            auto trace_fn = [&](const Vec2& p) {
                const double th = std::atan2(p.y(), p.x());
                return a1 * std::cos(m * th) + a2 * std::sin((m + 1) * th) + a3;
            };
            const BoundaryData f = boundary_trace(mesh, trace_fn);
            double fmin = 1e300, fmax = -1e300;
            for (double v : f.f) {
                fmin = std::min(fmin, v);
                fmax = std::max(fmax, v);
            }
            const auto u = solve_conductivity(mesh, gamma, f);
            for (int i = 0; i < mesh.n_nodes(); ++i) {
                CHECK(u.u[i] >= fmin - 1e-11);
                CHECK(u.u[i] <= fmax + 1e-11);
            }
        }
    }
}

TEST_CASE("catalog potentials from the substitution rule") {
    const Mesh mesh = build_disk_mesh(0.2);
    const ScalarField q1 = liouville_potential(mesh, family_exp_linear(1.0));
    for (int i = 0; i < mesh.n_nodes(); ++i) CHECK(std::abs(q1[i] - 0.25) <= 1e-13);

    const ScalarField q2 = liouville_potential(mesh, family_quad_x(1.0));
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const double x = mesh.nodes[i].x();
        CHECK(std::abs(q2[i] - 2.0 / (1.0 + x * x)) <= 1e-12);
    }

    ConductivityFamily bad;
    bad.id = "bad";
    bad.gamma = [](const Vec2& p) { return p.x(); }; // crosses zero
    bad.half_log = [](const Vec2&) { return 0.0; };
    bad.grad_half_log = [](const Vec2&) { return Vec2::Zero().eval(); };
    bad.lap_half_log = [](const Vec2&) { return 0.0; };
    CHECK_THROWS_AS(liouville_potential(mesh, bad), std::domain_error);
}

TEST_CASE("substituted field weakly solves the Schrodinger equation") {
    auto weak_residual = [](double h) {
        const Mesh mesh = build_disk_mesh(h);
        const auto family = family_quad_x(1.0);
        const TensorField gamma = sample_tensor(mesh, [&](const Vec2& p) {
            return (family.gamma(p) * Mat2::Identity()).eval();
        });
        const auto u = solve_conductivity(mesh, gamma, boundary_trace(mesh, [](const Vec2& p) {
                                              return p.x();
                                          }));
        // v = sqrt(gamma) u should satisfy  integral(grad v . grad hat + q v hat) = 0
        ScalarField v(std::vector<double>(mesh.n_nodes(), 0.0));
        for (int i = 0; i < mesh.n_nodes(); ++i)
            v[i] = std::sqrt(family.gamma(mesh.nodes[i])) * u.u[i];
        const SpMat K = assemble_stiffness(
            mesh, sample_tensor(mesh, [](const Vec2&) { return Mat2::Identity().eval(); }));
        const SpMat Mq = assemble_mass(mesh, liouville_potential(mesh, family));
        VecXd vv(mesh.n_nodes());
        for (int i = 0; i < mesh.n_nodes(); ++i) vv[i] = v[i];
        const VecXd r = K * vv + Mq * vv;
        double num = 0, den = 0;
        for (int i : mesh.interior_nodes) num += r[i] * r[i];
        const VecXd kv = K * vv;
        for (int i : mesh.interior_nodes) den += kv[i] * kv[i];
        return std::sqrt(num) / std::max(1e-300, std::sqrt(den));
    };
    const double r1 = weak_residual(0.1);
    const double r2 = weak_residual(0.05);
    CHECK(r2 < r1);          // residual decays under refinement
    CHECK(r2 <= 0.6 * r1);   // at least first-order decay
    CHECK(r1 <= 0.2);        // already small at coarse resolution
}

TEST_CASE("elliptic solver rejects invalid inputs") {
    const Mesh mesh = build_disk_mesh(0.2);
    TensorField zero(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) zero.set(i, Mat2::Zero());
    CHECK_THROWS_AS(
        solve_conductivity(mesh, zero, boundary_trace(mesh, [](const Vec2&) { return 0.0; })),
        std::invalid_argument);

    BoundaryData bad;
    bad.f = {1.0, 2.0};
    CHECK_THROWS_AS(solve_conductivity(mesh, identity_gamma(mesh), bad), std::invalid_argument);
}
