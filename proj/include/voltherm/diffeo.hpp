#pragma once

#include "voltherm/field.hpp"
#include "voltherm/geometry.hpp"

#include <functional>

namespace voltherm {

/// Boundary-fixing diffeomorphism of the unit disk with closed-form forward
/// map, inverse, and Jacobian. Inverses of bump maps run a damped fixed point
/// (tolerance 1e-12, max 100 iterations).
struct Diffeomorphism {
    std::function<Vec2(const Vec2&)> forward;
    std::function<Vec2(const Vec2&)> inverse;
    std::function<Mat2(const Vec2&)> jacobian; // DF at a domain point x

    double jacobian_det(const Vec2& x) const { return jacobian(x).determinant(); }
};

Diffeomorphism identity_diffeo();

/// F(x) = x + a * eta(|x - c| / rho), eta(s) = exp(1 - 1/(1 - s^2)) inside
/// s < 1 and 0 outside. Requires |a| <= 0.3 rho (keeps DF invertible) and
/// the support disk strictly inside the unit disk.
Diffeomorphism make_bump_diffeo(const Vec2& center, double radius, const Vec2& amplitude);

/// Composition x -> G(F(x)) with chain-rule Jacobian and F^-1 o G^-1 inverse.
Diffeomorphism compose(const Diffeomorphism& G, const Diffeomorphism& F);

/// Smooth radial profile eta and derivatives, exposed for coefficient
/// catalogs that build conductivity perturbations from the same bump.
double bump_eta(double s);
double bump_eta_d1(double s);         // eta'(s)
double bump_eta_d1_over_s(double s);  // eta'(s)/s, smooth through s = 0
double bump_eta_d2(double s);         // eta''(s)

/// Conductivity transported by F: DF gamma DF^T / |DF| evaluated at F^-1(y).
AnalyticTensor pushforward_tensor(const AnalyticTensor& T, const Diffeomorphism& F);
/// Heat capacity weight: |DF(F^-1(y))| * kappa(F^-1(y)).
AnalyticScalar pushforward_kappa(const AnalyticScalar& k, const Diffeomorphism& F);
/// Heat source: S(F^-1(y)) / |DF(F^-1(y))| (same factor at every time).
AnalyticScalar pushforward_source(const AnalyticScalar& S, const Diffeomorphism& F);

/// Nodal variants: the diffeo maps are evaluated in closed form at each node;
/// the field value at F^-1(node) is P1-interpolated from the nodal input.
TensorField pushforward_tensor(const Mesh& mesh, const TensorField& T, const Diffeomorphism& F);
ScalarField pushforward_kappa(const Mesh& mesh, const ScalarField& k, const Diffeomorphism& F);
ScalarField pushforward_source(const Mesh& mesh, const ScalarField& S, const Diffeomorphism& F);

} // namespace voltherm
