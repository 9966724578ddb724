#pragma once

#include "voltherm/elliptic.hpp"
#include "voltherm/heat.hpp"

#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace voltherm {

/// Boundary excitation: a spatial voltage profile on the boundary nodes times
/// a tabulated time factor. A static schedule holds the profile constant.
struct ExcitationSchedule {
    std::string id;
    BoundaryData profile;
    std::vector<double> g; ///< one sample per time node; unused when static
    bool is_static = false;

    static ExcitationSchedule statics(std::string id, BoundaryData h);
    static ExcitationSchedule modulated(std::string id, BoundaryData h, std::vector<double> g);
};

/// Boundary heat-flow history produced by the measurement pipeline, with the
/// metadata needed to compare and export it without the generating mesh.
struct MeasurementRecord {
    std::string triple_id;
    std::string schedule_id;
    std::vector<double> times;
    std::vector<double> arc_s;   ///< boundary arc coordinate per node column
    std::vector<FluxTrace> flux; ///< one trace per time node
    int mesh_nodes = 0;
};

/// Cache of Joule-heating profiles keyed by (triple, spatial profile, mesh
/// size). Many schedules share a spatial profile and the conduction solve
/// dominates the pipeline, so records are built once and shared. Lookups take
/// a shared lock; inserts take an exclusive one.
class JouleCache {
  public:
    std::shared_ptr<const ScalarField> profile(const Mesh& mesh, const CoefficientTriple& triple,
                                               const BoundaryData& h);
    int size() const;

  private:
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, std::shared_ptr<const ScalarField>> store_;
};

/// The voltage-to-heat-flow map. Pipeline: solve the conduction problem for
/// the schedule's spatial profile; form the Joule source, which is quadratic
/// in the drive, so a boundary time factor g enters the source as g^2; run
/// the transient heat problem from rest (trapezoidal stepping); return the
/// boundary flux history. `dt` is a step-size request — the grid uses
/// round(T_final/dt) uniform steps covering [0, T_final] exactly.
MeasurementRecord voltage_to_heat_flow(const Mesh& mesh, const CoefficientTriple& triple,
                                       const ExcitationSchedule& sched, double T_final,
                                       double dt, JouleCache* cache = nullptr);

/// Separable source for direct injection: the spatial factor is the Joule
/// density of the profile's voltage field; the time factor is used verbatim
/// (no squaring — this entry point models prescribed sources, not boundary
/// drives). An empty g yields a static source.
SourceHistory separable_source(const Mesh& mesh, const CoefficientTriple& triple,
                               const BoundaryData& h, std::vector<double> g = {},
                               JouleCache* cache = nullptr);

/// Static-input energy recovery: the total outgoing boundary heat flow
/// converges exponentially to the conduction energy of the drive. Reports the
/// time-stepped stabilized value alongside the exact steady-limit route.
struct EnergyRecovery {
    double stabilized = 0.0;   ///< -integral of flux at the stabilization time
    double steady_limit = 0.0; ///< exact t->infinity value via the steady field
    double t_star = 0.0;       ///< first time successive totals differ < tol
    double lambda1 = 0.0;      ///< decay-rate estimate used for the time cap
};

/// `tol` is an absolute tolerance on the running flux total between
/// consecutive steps; recovery aborts (std::runtime_error) if stabilization
/// takes longer than cap_factor / lambda1.
EnergyRecovery recover_energy_static(const Mesh& mesh, const CoefficientTriple& triple,
                                     const BoundaryData& f, double tol,
                                     double cap_factor = 50.0, JouleCache* cache = nullptr);

/// Relative discrepancy between two flux histories on matching grids:
/// L2 over boundary x time (trapezoid in time), normalized by the first.
double measurement_discrepancy(const MeasurementRecord& a, const MeasurementRecord& b);

/// CSV export, one row per (time, boundary node).
std::string measurement_csv(const MeasurementRecord& rec);

/// JSON sidecar: generating triple and schedule identifiers plus grid shape.
std::string measurement_sidecar(const MeasurementRecord& rec);

} // namespace voltherm
