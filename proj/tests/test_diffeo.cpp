#include "doctest.h"

#include "voltherm/diffeo.hpp"
#include "voltherm/mesh.hpp"

#include <cmath>
#include <random>

using namespace voltherm;

namespace {
// deterministic sample points inside the unit disk
std::vector<Vec2> sample_points() {
    std::vector<Vec2> pts;
    for (int i = 0; i < 14; ++i) {
        const double r = 0.97 * (i + 0.5) / 14.0;
        const double th = 2.399963 * i; // golden-angle spread
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    return pts;
}

Mat2 linear_example_tensor() {
    Mat2 T;
    T << 1.0, 0.0, 0.0, 1.0;
    return T;
}
} // namespace

TEST_CASE("transported identity tensor under a linear stretch") {
    // F(x) = diag(2,1) x transported through the closed-form rule:
    // DF I DF^T / |DF| = diag(2, 0.5); weight 2 kappa; source S/2.
    Diffeomorphism F;
    F.forward = [](const Vec2& x) { return Vec2(2.0 * x.x(), x.y()); };
    F.inverse = [](const Vec2& y) { return Vec2(0.5 * y.x(), y.y()); };
    F.jacobian = [](const Vec2&) {
        Mat2 J;
        J << 2, 0, 0, 1;
        return J;
    };

    auto T = pushforward_tensor([](const Vec2&) { return linear_example_tensor(); }, F);
    const Mat2 out = T(Vec2(0.3, -0.2));
    CHECK(out(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(out(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

    auto k = pushforward_kappa([](const Vec2&) { return 1.0; }, F);
    CHECK(k(Vec2(0.1, 0.4)) == doctest::Approx(2.0).epsilon(1e-14));

    auto S = pushforward_source([](const Vec2&) { return 1.0; }, F);
    CHECK(S(Vec2(0.1, 0.4)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("bump map fixes the boundary and inverts to tolerance") {
    const Diffeomorphism F = make_bump_diffeo(Vec2(0.15, -0.1), 0.5, Vec2(0.1, 0.05));

    // identity outside the bump support, in particular on the boundary
    for (double th : {0.0, 1.0, 2.5, 4.4}) {
        const Vec2 p(std::cos(th), std::sin(th));
        CHECK((F.forward(p) - p).norm() == doctest::Approx(0.0));
        const Mat2 J = F.jacobian(p);
        CHECK((J - Mat2::Identity()).norm() == doctest::Approx(0.0));
    }

    for (const Vec2& p : sample_points()) {
        const Vec2 q = F.forward(p);
        CHECK((F.inverse(q) - p).lpNorm<Eigen::Infinity>() <= 1e-8);
        CHECK((F.forward(F.inverse(p)) - p).lpNorm<Eigen::Infinity>() <= 1e-8);
        CHECK(F.jacobian_det(p) > 0.0);
    }

    // jacobian matches a centered finite difference
    const Vec2 p(0.2, 0.05);
    const double eps = 1e-6;
    const Mat2 J = F.jacobian(p);
    for (int c = 0; c < 2; ++c) {
        Vec2 dp = Vec2::Zero();
        dp[c] = eps;
        const Vec2 fd = (F.forward(p + dp) - F.forward(p - dp)) / (2 * eps);
        CHECK(std::abs(fd.x() - J(0, c)) <= 1e-8);
        CHECK(std::abs(fd.y() - J(1, c)) <= 1e-8);
    }
}

TEST_CASE("bump map rejects out-of-contract parameters") {
    CHECK_THROWS_AS(make_bump_diffeo(Vec2(0, 0), 0.5, Vec2(0.2, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(make_bump_diffeo(Vec2(0.7, 0), 0.4, Vec2(0.05, 0.0)), std::invalid_argument);
    CHECK_NOTHROW(make_bump_diffeo(Vec2(0.1, 0.1), 0.5, Vec2(0.1, 0.1)));
}

TEST_CASE("transport respects composition") {
    const Diffeomorphism F = make_bump_diffeo(Vec2(0.2, 0.0), 0.45, Vec2(0.08, -0.04));
    const Diffeomorphism G = make_bump_diffeo(Vec2(-0.25, 0.1), 0.5, Vec2(-0.05, 0.09));
    const Diffeomorphism GF = compose(G, F);

    AnalyticTensor T = [](const Vec2& x) -> Mat2 {
        Mat2 m;
        m << 1.0 + 0.2 * x.x(), 0.1 * x.x() * x.y(), 0.1 * x.x() * x.y(), 1.0 - 0.15 * x.y();
        return m;
    };
    AnalyticScalar k = [](const Vec2& x) { return 1.0 + 0.3 * x.y(); };

    auto lhsT = pushforward_tensor(T, GF);
    auto rhsT = pushforward_tensor(pushforward_tensor(T, F), G);
    auto lhsK = pushforward_kappa(k, GF);
    auto rhsK = pushforward_kappa(pushforward_kappa(k, F), G);

    for (const Vec2& p : sample_points()) {
        CHECK((lhsT(p) - rhsT(p)).norm() <= 1e-8);
        CHECK(std::abs(lhsK(p) - rhsK(p)) <= 1e-8);
    }
}

TEST_CASE("transport preserves symmetry and positivity") {
    const Diffeomorphism F = make_bump_diffeo(Vec2(-0.1, 0.22), 0.55, Vec2(0.12, 0.08));
    AnalyticTensor T = [](const Vec2& x) -> Mat2 {
        Mat2 m;
        m << 1.5 + 0.3 * x.y(), 0.2, 0.2, 0.9 - 0.2 * x.x();
        return m;
    };
    auto Tp = pushforward_tensor(T, F);
    for (const Vec2& p : sample_points()) {
        const Mat2 m = Tp(p);
        CHECK(std::abs(m(0, 1) - m(1, 0)) <= 1e-12);
        const double tr = m(0, 0) + m(1, 1);
        const double det = m.determinant();
        const double lmin = 0.5 * tr - std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        CHECK(lmin > 0.0);
    }
}

TEST_CASE("transported tensor keeps its determinant") {
    const Diffeomorphism F = make_bump_diffeo(Vec2(0.05, -0.18), 0.6, Vec2(-0.1, 0.12));
    AnalyticTensor T = [](const Vec2& x) -> Mat2 {
        Mat2 m;
        m << 1.2 + 0.25 * x.x(), 0.15 * x.y(), 0.15 * x.y(), 0.8 + 0.1 * x.x() * x.x();
        return m;
    };
    auto Tp = pushforward_tensor(T, F);
    for (const Vec2& p : sample_points()) {
        const double lhs = Tp(p).determinant();
        const double rhs = T(F.inverse(p)).determinant();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("nodal transport matches the closed form for analytic fields") {
    Mesh mesh = build_disk_mesh(0.05);
    const Diffeomorphism F = make_bump_diffeo(Vec2(0.2, 0.1), 0.5, Vec2(0.09, -0.06));
    AnalyticTensor T = [](const Vec2& x) -> Mat2 {
        Mat2 m;
        m << 1.0 + 0.2 * x.x(), 0.0, 0.0, 1.0 - 0.1 * x.y();
        return m;
    };
    const TensorField nodal = sample_tensor(mesh, T);
    const TensorField pushed = pushforward_tensor(mesh, nodal, F);
    auto exact = pushforward_tensor(T, F);
    double max_err = 0;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        max_err = std::max(max_err, (pushed.at(i) - exact(mesh.nodes[i])).norm());
    }
    // interpolation of the input field is the only error source: O(h^2)
    CHECK(max_err <= 5e-3);
}
