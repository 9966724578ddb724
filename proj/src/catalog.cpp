#include "voltherm/catalog.hpp"

#include "voltherm/diffeo.hpp"

#include <cmath>
#include <stdexcept>

namespace voltherm {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

constexpr double kEdgeGuard = 1e-9; // inside this margin the fade is exactly flat

} // namespace

double smooth_fade(double t) {
    if (t <= kEdgeGuard) return 1.0;
    if (t >= 1.0 - kEdgeGuard) return 0.0;
    const double a = psi(1.0 - t);
    const double c = psi(t);
    return a / (a + c);
}

double smooth_fade_d1(double t) {
    if (t <= kEdgeGuard || t >= 1.0 - kEdgeGuard) return 0.0;
    const double a = psi(1.0 - t);
    const double c = psi(t);
    const double d = a + c;
    const double s = 1.0 / ((1.0 - t) * (1.0 - t)) + 1.0 / (t * t);
    return -(a * c / (d * d)) * s;
}

double smooth_fade_d2(double t) {
    if (t <= kEdgeGuard || t >= 1.0 - kEdgeGuard) return 0.0;
    const double mt = 1.0 - t;
    const double a = psi(mt);
    const double c = psi(t);
    const double ap = -a / (mt * mt);
    const double cp = c / (t * t);
    const double app = a / (mt * mt * mt * mt) - 2.0 * a / (mt * mt * mt);
    const double cpp = c / (t * t * t * t) - 2.0 * c / (t * t * t);
    const double d = a + c;
    const double dp = ap + cp;
    const double n = ap * c - a * cp;
    const double np = app * c - a * cpp;
    return np / (d * d) - 2.0 * n * dp / (d * d * d);
}

double collar_blend(double r) { return smooth_fade((r - 1.0) / 0.3); }
double collar_blend_d1(double r) { return smooth_fade_d1((r - 1.0) / 0.3) / 0.3; }
double collar_blend_d2(double r) { return smooth_fade_d2((r - 1.0) / 0.3) / 0.09; }

double cutoff_chi(double r) { return smooth_fade((r - 1.05) / 0.4); }

double ConductivityFamily::q_interior(const Vec2& x) const {
    return lap_half_log(x) + grad_half_log(x).squaredNorm();
}

double ConductivityFamily::q_plane(const Vec2& x) const {
    const double r = x.norm();
    if (r <= 1.0) return q_interior(x);
    if (r >= 1.3) return 0.0;
    const double l = half_log(x);
    const Vec2 gl = grad_half_log(x);
    const double ll = lap_half_log(x);
    const double z = collar_blend(r);
    const double z1 = collar_blend_d1(r);
    const double z2 = collar_blend_d2(r);
    const Vec2 rhat = x / r;
    const Vec2 gphi = z * gl + (l * z1) * rhat;
    const double lphi = z * ll + 2.0 * z1 * rhat.dot(gl) + l * (z2 + z1 / r);
    return lphi + gphi.squaredNorm();
}

double ConductivityFamily::gamma_plane(const Vec2& x) const {
    const double r = x.norm();
    if (r <= 1.0) return gamma(x);
    if (r >= 1.3) return 1.0;
    return std::exp(2.0 * collar_blend(r) * half_log(x));
}

ConductivityFamily family_one() {
    ConductivityFamily f;
    f.id = "one";
    f.gamma = [](const Vec2&) { return 1.0; };
    f.half_log = [](const Vec2&) { return 0.0; };
    f.grad_half_log = [](const Vec2&) { return Vec2::Zero().eval(); };
    f.lap_half_log = [](const Vec2&) { return 0.0; };
    return f;
}

ConductivityFamily family_exp_linear(double alpha) {
    ConductivityFamily f;
    f.id = "exp_linear";
    f.gamma = [alpha](const Vec2& x) { return std::exp(alpha * x.x()); };
    f.half_log = [alpha](const Vec2& x) { return 0.5 * alpha * x.x(); };
    f.grad_half_log = [alpha](const Vec2&) { return Vec2(0.5 * alpha, 0.0); };
    f.lap_half_log = [](const Vec2&) { return 0.0; };
    return f;
}

ConductivityFamily family_quad_radial(double beta) {
    if (beta <= -1.0 / 1.69)
        throw std::invalid_argument("family_quad_radial: 1 + beta r^2 must stay positive");
    ConductivityFamily f;
    f.id = "quad_radial";
    f.gamma = [beta](const Vec2& x) {
        const double w = 1.0 + beta * x.squaredNorm();
        return w * w;
    };
    f.half_log = [beta](const Vec2& x) { return std::log(1.0 + beta * x.squaredNorm()); };
    f.grad_half_log = [beta](const Vec2& x) {
        return (2.0 * beta / (1.0 + beta * x.squaredNorm()) * x).eval();
    };
    f.lap_half_log = [beta](const Vec2& x) {
        const double w = 1.0 + beta * x.squaredNorm();
        return 4.0 * beta / (w * w);
    };
    return f;
}

ConductivityFamily family_quad_x(double beta) {
    if (beta <= -1.0 / 1.69)
        throw std::invalid_argument("family_quad_x: 1 + beta x^2 must stay positive");
    ConductivityFamily f;
    f.id = "quad_x";
    f.gamma = [beta](const Vec2& x) {
        const double w = 1.0 + beta * x.x() * x.x();
        return w * w;
    };
    f.half_log = [beta](const Vec2& x) { return std::log(1.0 + beta * x.x() * x.x()); };
    f.grad_half_log = [beta](const Vec2& x) {
        return Vec2(2.0 * beta * x.x() / (1.0 + beta * x.x() * x.x()), 0.0);
    };
    f.lap_half_log = [beta](const Vec2& x) {
        const double w = 1.0 + beta * x.x() * x.x();
        return 2.0 * beta * (1.0 - beta * x.x() * x.x()) / (w * w);
    };
    return f;
}

namespace {

// Pieces of l = (p/2) eta(|x-c|/rho) for one bump, all smooth through s=0.
struct BumpPiece {
    double p;
    Vec2 c;
    double rho;

    double l(const Vec2& x) const { return 0.5 * p * bump_eta((x - c).norm() / rho); }
    Vec2 grad(const Vec2& x) const {
        const Vec2 y = x - c;
        const double s = y.norm() / rho;
        if (s >= 1.0) return Vec2::Zero();
        return (0.5 * p / (rho * rho) * bump_eta_d1_over_s(s)) * y;
    }
    double lap(const Vec2& x) const {
        const double s = (x - c).norm() / rho;
        if (s >= 1.0) return 0.0;
        return 0.5 * p / (rho * rho) * (bump_eta_d2(s) + bump_eta_d1_over_s(s));
    }
};

ConductivityFamily family_from_bumps(std::vector<BumpPiece> bumps, std::string id) {
    ConductivityFamily f;
    f.id = std::move(id);
    auto l_sum = [bumps](const Vec2& x) {
        double v = 0;
        for (const auto& b : bumps) v += b.l(x);
        return v;
    };
    f.half_log = l_sum;
    f.gamma = [l_sum](const Vec2& x) { return std::exp(2.0 * l_sum(x)); };
    f.grad_half_log = [bumps](const Vec2& x) {
        Vec2 v = Vec2::Zero();
        for (const auto& b : bumps) v += b.grad(x);
        return v;
    };
    f.lap_half_log = [bumps](const Vec2& x) {
        double v = 0;
        for (const auto& b : bumps) v += b.lap(x);
        return v;
    };
    return f;
}

} // namespace

ConductivityFamily family_bump(double p, const Vec2& c, double rho) {
    if (!(rho > 0.0) || c.norm() + rho >= 1.0)
        throw std::invalid_argument("family_bump: support disk must sit inside the unit disk");
    return family_from_bumps({BumpPiece{p, c, rho}}, "bump");
}

ConductivityFamily family_bump_pair(double p1, const Vec2& c1, double rho1,
                                    double p2, const Vec2& c2, double rho2) {
    if (!(rho1 > 0.0) || c1.norm() + rho1 >= 1.0 || !(rho2 > 0.0) || c2.norm() + rho2 >= 1.0)
        throw std::invalid_argument("family_bump_pair: support disks must sit inside the unit disk");
    return family_from_bumps({BumpPiece{p1, c1, rho1}, BumpPiece{p2, c2, rho2}}, "bump_pair");
}

ConductivityFamily potential_family(const std::string& id) {
    if (id == "one") return family_one();
    if (id == "exp_tilt") {
        auto f = family_exp_linear(0.002);
        f.id = id;
        return f;
    }
    if (id == "radial_quad") {
        auto f = family_quad_radial(0.001);
        f.id = id;
        return f;
    }
    if (id == "bump_blob") {
        auto f = family_bump(0.008, Vec2(0.15, 0.1), 0.65);
        f.id = id;
        return f;
    }
    if (id == "bump_pair") {
        auto f = family_bump_pair(0.0055, Vec2(-0.25, 0.05), 0.6, -0.0045, Vec2(0.3, -0.2), 0.55);
        f.id = id;
        return f;
    }
    throw std::invalid_argument("potential_family: unknown id " + id);
}

std::vector<std::string> potential_catalog_ids() {
    return {"one", "exp_tilt", "radial_quad", "bump_blob", "bump_pair"};
}

AnalyticTriple analytic_triple(const std::string& id) {
    AnalyticTriple t;
    t.id = id;
    auto iso = [](AnalyticScalar s) {
        return [s](const Vec2& x) { return (s(x) * Mat2::Identity()).eval(); };
    };
    if (id == "unit") {
        t.gamma = iso([](const Vec2&) { return 1.0; });
        t.kappa = [](const Vec2&) { return 1.0; };
        t.thermal = iso([](const Vec2&) { return 1.0; });
        return t;
    }
    if (id == "exp_mild") {
        t.gamma = iso([](const Vec2& x) { return std::exp(0.4 * x.x()); });
        t.kappa = [](const Vec2& x) { return 1.0 + 0.3 * (1.0 - x.squaredNorm()); };
        t.thermal = iso([](const Vec2& x) { return 1.0 + 0.2 * x.squaredNorm(); });
        return t;
    }
    if (id == "radial_quad") {
        t.gamma = iso([](const Vec2& x) {
            const double w = 1.0 + 0.3 * x.squaredNorm();
            return w * w;
        });
        t.kappa = [](const Vec2& x) { return 1.0 + 0.25 * (1.0 - x.squaredNorm()); };
        t.thermal = iso([](const Vec2&) { return 1.0; });
        return t;
    }
    if (id == "aniso_const") {
        Mat2 g, a;
        g << 1.4, 0.2, 0.2, 0.9;
        a << 1.2, -0.15, -0.15, 0.85;
        t.gamma = [g](const Vec2&) { return g; };
        t.kappa = [](const Vec2&) { return 1.0; };
        t.thermal = [a](const Vec2&) { return a; };
        return t;
    }
    if (id == "bump_blob") {
        t.gamma = iso([](const Vec2& x) {
            return std::exp(0.5 * bump_eta((x - Vec2(0.2, -0.1)).norm() / 0.6));
        });
        t.kappa = [](const Vec2& x) { return 1.0 + 0.4 * bump_eta(x.norm() / 0.7); };
        t.thermal = iso([](const Vec2& x) {
            return 1.0 + 0.3 * bump_eta((x - Vec2(-0.2, 0.15)).norm() / 0.5);
        });
        return t;
    }
    throw std::invalid_argument("analytic_triple: unknown id " + id);
}

std::vector<std::string> triple_catalog_ids() {
    return {"unit", "exp_mild", "radial_quad", "aniso_const", "bump_blob"};
}

CoefficientTriple sample_triple(const Mesh& mesh, const AnalyticTriple& t) {
    CoefficientTriple out;
    out.id = t.id;
    out.gamma = sample_tensor(mesh, t.gamma);
    out.kappa = sample_scalar(mesh, t.kappa);
    out.thermal = sample_tensor(mesh, t.thermal);
    return out;
}

} // namespace voltherm
