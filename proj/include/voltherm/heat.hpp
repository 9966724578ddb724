#pragma once

#include "voltherm/elliptic.hpp"
#include "voltherm/fem.hpp"
#include "voltherm/field.hpp"
#include "voltherm/mesh.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace voltherm {

/// Heat source over time: a static field, a separable field w(x) g(t) with g
/// tabulated on the solve's time grid, or one field per time node.
struct SourceHistory {
    enum class Kind { Static, Separable, General };
    Kind kind = Kind::Static;
    ScalarField w;                    // Static / Separable spatial part
    std::vector<double> g;            // Separable time profile at grid nodes
    std::vector<ScalarField> frames;  // General

    static SourceHistory statics(ScalarField w);
    static SourceHistory separable(ScalarField w, std::vector<double> g);
    static SourceHistory general(std::vector<ScalarField> frames);
};

/// Temperature history on a shared time grid. Boundary values are exactly
/// zero at all times and the first frame is exactly zero.
struct TemperatureField {
    std::vector<double> times;
    std::vector<ScalarField> psi;
    bool truncation_warning = false;  // eigen route: estimated mode-tail error
    double truncation_estimate = 0.0; // relative to the static field's norm
};

/// First eigenpairs of the weighted problem K phi = lambda M phi, where K is
/// the thermal-conductivity stiffness and M the mass weighted by 1/kappa.
/// Interior DOFs only; columns of phi are M-orthonormal, lambdas ascending.
struct EigenDecomposition {
    std::vector<double> lambda;
    Eigen::MatrixXd phi; // n_interior x n_modes
    SpMat K;             // interior stiffness
    SpMat M;             // interior weighted mass
    std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> k_solver; // factorization of K

    int n_modes() const { return static_cast<int>(lambda.size()); }
};

struct EigenOptions {
    int max_iters = 200;
    double tol = 1e-11; // relative residual target per mode
};

/// Subspace iteration with shift-invert on K (SPD); deterministic start.
/// Throws a numeric error with an iteration report on non-convergence.
EigenDecomposition assemble_weighted_eigen(const Mesh& mesh, const ScalarField& kappa,
                                           const TensorField& thermal, int n_modes,
                                           const EigenOptions& opt = {});

/// Static heat balance: div(A grad psi0) + S = 0, psi0 = 0 on the boundary.
ScalarField solve_static_heat(const Mesh& mesh, const TensorField& thermal,
                              const ScalarField& S);

/// Modal solution on the given time grid (times[0] must be 0). Static
/// sources use the split psi = psi0 + decaying modes; separable sources use
/// per-mode Duhamel convolution, exact for piecewise-linear g. General
/// sources are not supported on this route.
TemperatureField solve_transient_eigen(const Mesh& mesh, const EigenDecomposition& eig,
                                       const TensorField& thermal, const SourceHistory& S,
                                       const std::vector<double>& times);

/// Theta-scheme on the same weak system (uniform dt, theta in [0.5, 1]).
TemperatureField solve_transient_timestep(const Mesh& mesh, const ScalarField& kappa,
                                          const TensorField& thermal, const SourceHistory& S,
                                          const std::vector<double>& times, double theta);

/// Consistent boundary heat flux per time node: the residual of the weak
/// heat balance tested against boundary hat functions, divided by arc
/// weights. dpsi/dt by centered differences (one-sided at the ends);
/// requires at least two time nodes.
std::vector<FluxTrace> boundary_heat_flux(const Mesh& mesh, const ScalarField& kappa,
                                          const TensorField& thermal, const SourceHistory& S,
                                          const TemperatureField& psi);

/// Static variant (dpsi/dt = 0): flux of a steady field psi0 under source S.
FluxTrace static_boundary_flux(const Mesh& mesh, const TensorField& thermal,
                               const ScalarField& S, const ScalarField& psi0);

/// Uniform time grid helper: m+1 nodes covering [0, T].
std::vector<double> uniform_times(double T, int m);

} // namespace voltherm
