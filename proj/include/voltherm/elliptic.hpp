#pragma once

#include "voltherm/catalog.hpp"
#include "voltherm/fem.hpp"
#include "voltherm/field.hpp"
#include "voltherm/mesh.hpp"

namespace voltherm {

/// Dirichlet data: one value per boundary node, in Mesh::boundary_nodes order.
struct BoundaryData {
    std::vector<double> f;

    int size() const { return static_cast<int>(f.size()); }
};

/// Sample a closed-form trace at the boundary nodes.
BoundaryData boundary_trace(const Mesh& mesh, const AnalyticScalar& g);

/// Steady voltage field: nodal solution plus the generating boundary data.
/// The trace of u at boundary nodes equals the data exactly (elimination).
struct VoltageField {
    ScalarField u;
    BoundaryData data;
};

/// Conormal trace at the boundary: one flux value per boundary node plus the
/// arc-length weight used for boundary integrals. Weights sum to the circle
/// perimeter within the mesh's area-defect tolerance.
struct FluxTrace {
    std::vector<double> flux;
    std::vector<double> arc_w;

    double integral() const; // sum of flux * arc weight
};

/// Solve div(gamma grad u) = 0 with trace f. gamma must be SPD.
VoltageField solve_conductivity(const Mesh& mesh, const TensorField& gamma,
                                const BoundaryData& f);

/// Variational (consistent) boundary flux of a solved field: the residual
/// K u tested against boundary hat functions, divided by arc weights.
/// Its weighted sum over the boundary is exactly zero for solutions.
FluxTrace dn_map(const Mesh& mesh, const TensorField& gamma, const VoltageField& u);

/// Boundary pairing <flux, g> = sum_b flux_b g_b arc_b (discrete L2(dOmega)).
double dn_pairing(const FluxTrace& flux, const BoundaryData& g);

/// Energy quadratic form: integral of grad(u) . gamma grad(u).
double energy_form(const Mesh& mesh, const TensorField& gamma, const VoltageField& u);

/// Joule heating density: per-triangle constant grad(u) . gamma grad(u),
/// projected to nodes by patch-area averaging. Its consistent integral
/// reproduces energy_form exactly.
ScalarField energy_density(const Mesh& mesh, const TensorField& gamma, const VoltageField& u);

/// Schrodinger potential of the substitution v = sqrt(gamma) u, sampled at
/// mesh nodes from the family's closed-form derivatives. Requires gamma > 0
/// on the closed disk (throws std::domain_error otherwise).
ScalarField liouville_potential(const Mesh& mesh, const ConductivityFamily& family);

} // namespace voltherm
