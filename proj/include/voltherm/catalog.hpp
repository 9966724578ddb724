#pragma once

#include "voltherm/field.hpp"
#include "voltherm/geometry.hpp"
#include "voltherm/mesh.hpp"

#include <string>
#include <vector>

namespace voltherm {

/// C-infinity fade from 1 at t <= 0 to 0 at t >= 1, built as the quotient
/// psi(1-t) / (psi(1-t) + psi(t)) with psi(t) = exp(-1/t). All derivatives
/// vanish at both ends, so pieces glue smoothly. Closed-form first and
/// second derivatives are exposed for assembling Schrodinger potentials.
double smooth_fade(double t);
double smooth_fade_d1(double t);
double smooth_fade_d2(double t);

/// Radial blend used to extend conductivities past the unit disk:
/// 1 for r <= 1, smooth_fade over 1 < r < 1.3, 0 for r >= 1.3.
double collar_blend(double r);
double collar_blend_d1(double r);
double collar_blend_d2(double r);

/// Radial cutoff for the spectral toolkit: 1 for r <= 1.05, fades over
/// 1.05 < r < 1.45, 0 beyond. Smooth everywhere.
double cutoff_chi(double r);

/// Isotropic conductivity family with every derivative in closed form.
/// l = log(gamma)/2, so sqrt(gamma) = e^l. The associated Schrodinger
/// potential is q = Delta l + |grad l|^2 (the Liouville substitution).
/// q_plane blends gamma to 1 across the collar 1 <= r <= 1.3 by sending
/// phi = collar_blend(r) * l through the same identity, so q_plane is
/// smooth on the whole plane, equals q on the closed unit disk, and
/// vanishes for r >= 1.3.
struct ConductivityFamily {
    std::string id;
    AnalyticScalar gamma;            // gamma(x) > 0 on the closed disk
    AnalyticScalar half_log;         // l = log(gamma)/2
    std::function<Vec2(const Vec2&)> grad_half_log;
    AnalyticScalar lap_half_log;

    double q_interior(const Vec2& x) const; // valid for |x| <= 1
    double q_plane(const Vec2& x) const;    // blended, valid everywhere
    double gamma_plane(const Vec2& x) const; // e^{2 phi}: gamma inside, 1 outside
};

ConductivityFamily family_one();
ConductivityFamily family_exp_linear(double alpha);       // gamma = e^{alpha x1}
ConductivityFamily family_quad_radial(double beta);       // gamma = (1+beta r^2)^2
ConductivityFamily family_quad_x(double beta);            // gamma = (1+beta x1^2)^2
ConductivityFamily family_bump(double p, const Vec2& c, double rho); // gamma = e^{p eta(|x-c|/rho)}
ConductivityFamily family_bump_pair(double p1, const Vec2& c1, double rho1,
                                    double p2, const Vec2& c2, double rho2);

/// Named potential catalog used by the spectral toolkit. Amplitudes are
/// tuned so the measured sup-norm of every q_plane stays below 0.25,
/// which keeps the default large-wavenumber threshold 8(1+|q|_inf) at or
/// below the smallest swept wavenumber (10).
ConductivityFamily potential_family(const std::string& id);
std::vector<std::string> potential_catalog_ids();

/// Closed-form coefficient triple (electrical conductivity, inverse heat
/// capacity weight, thermal conductivity) for the mesh-side experiments.
struct AnalyticTriple {
    std::string id;
    AnalyticTensor gamma;
    AnalyticScalar kappa;
    AnalyticTensor thermal;
};

AnalyticTriple analytic_triple(const std::string& id);
std::vector<std::string> triple_catalog_ids();

CoefficientTriple sample_triple(const Mesh& mesh, const AnalyticTriple& t);

} // namespace voltherm
