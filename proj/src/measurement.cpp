#include "voltherm/measurement.hpp"

#include "voltherm/report.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace voltherm {

namespace {

// FNV-1a over the raw bytes of the trace values: a deterministic in-process
// fingerprint for cache keys (profiles are bitwise-identical or distinct).
std::string trace_fingerprint(const BoundaryData& h) {
    uint64_t acc = 1469598103934665603ull;
    for (double v : h.f) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int s = 0; s < 64; s += 8) {
            acc ^= (bits >> s) & 0xffu;
            acc *= 1099511628211ull;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(acc));
    return buf;
}

std::vector<double> boundary_arcs(const Mesh& mesh) {
    std::vector<double> s(mesh.n_bnodes(), 0.0);
    for (int b = 1; b < mesh.n_bnodes(); ++b) {
        const Vec2& a = mesh.nodes[mesh.boundary_nodes[b - 1]];
        const Vec2& c = mesh.nodes[mesh.boundary_nodes[b]];
        s[b] = s[b - 1] + (c - a).norm();
    }
    return s;
}

} // namespace

ExcitationSchedule ExcitationSchedule::statics(std::string id, BoundaryData h) {
    ExcitationSchedule s;
    s.id = std::move(id);
    s.profile = std::move(h);
    s.is_static = true;
    return s;
}

ExcitationSchedule ExcitationSchedule::modulated(std::string id, BoundaryData h,
                                                 std::vector<double> g) {
    ExcitationSchedule s;
    s.id = std::move(id);
    s.profile = std::move(h);
    s.g = std::move(g);
    return s;
}

std::shared_ptr<const ScalarField> JouleCache::profile(const Mesh& mesh,
                                                       const CoefficientTriple& triple,
                                                       const BoundaryData& h) {
    const std::string key =
        triple.id + '|' + std::to_string(mesh.n_nodes()) + '|' + trace_fingerprint(h);
    {
        std::shared_lock lock(mu_);
        if (auto it = store_.find(key); it != store_.end()) return it->second;
    }
    const VoltageField u = solve_conductivity(mesh, triple.gamma, h);
    auto w = std::make_shared<const ScalarField>(energy_density(mesh, triple.gamma, u));
    std::unique_lock lock(mu_);
    return store_.try_emplace(key, std::move(w)).first->second;
}

int JouleCache::size() const {
    std::shared_lock lock(mu_);
    return static_cast<int>(store_.size());
}

namespace {

std::shared_ptr<const ScalarField> joule_profile(const Mesh& mesh,
                                                 const CoefficientTriple& triple,
                                                 const BoundaryData& h, JouleCache* cache) {
    if (cache) return cache->profile(mesh, triple, h);
    const VoltageField u = solve_conductivity(mesh, triple.gamma, h);
    return std::make_shared<const ScalarField>(energy_density(mesh, triple.gamma, u));
}

} // namespace

MeasurementRecord voltage_to_heat_flow(const Mesh& mesh, const CoefficientTriple& triple,
                                       const ExcitationSchedule& sched, double T_final,
                                       double dt, JouleCache* cache) {
    if (!(T_final > 0.0)) throw std::invalid_argument("voltage_to_heat_flow: T_final must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("voltage_to_heat_flow: dt must be > 0");
    const int steps = static_cast<int>(std::max<long long>(1, std::llround(T_final / dt)));
    const auto times = uniform_times(T_final, steps);

    const auto w = joule_profile(mesh, triple, sched.profile, cache);

    SourceHistory S = SourceHistory::statics(*w);
    if (!sched.is_static) {
        if (static_cast<int>(sched.g.size()) != steps + 1)
            throw std::invalid_argument("voltage_to_heat_flow: schedule tabulates " +
                                        std::to_string(sched.g.size()) + " samples but the grid has " +
                                        std::to_string(steps + 1) + " nodes");
        std::vector<double> g2(sched.g.size());
        for (size_t n = 0; n < g2.size(); ++n) g2[n] = sched.g[n] * sched.g[n];
        S = SourceHistory::separable(*w, std::move(g2));
    }

    const TemperatureField psi =
        solve_transient_timestep(mesh, triple.kappa, triple.thermal, S, times, 0.5);

    MeasurementRecord rec;
    rec.triple_id = triple.id;
    rec.schedule_id = sched.id;
    rec.times = times;
    rec.arc_s = boundary_arcs(mesh);
    rec.flux = boundary_heat_flux(mesh, triple.kappa, triple.thermal, S, psi);
    rec.mesh_nodes = mesh.n_nodes();
    return rec;
}

SourceHistory separable_source(const Mesh& mesh, const CoefficientTriple& triple,
                               const BoundaryData& h, std::vector<double> g, JouleCache* cache) {
    const auto w = joule_profile(mesh, triple, h, cache);
    if (g.empty()) return SourceHistory::statics(*w);
    return SourceHistory::separable(*w, std::move(g));
}

EnergyRecovery recover_energy_static(const Mesh& mesh, const CoefficientTriple& triple,
                                     const BoundaryData& f, double tol, double cap_factor,
                                     JouleCache* cache) {
    if (!(tol >= 0.0)) throw std::invalid_argument("recover_energy_static: tol must be >= 0");
    const auto w = joule_profile(mesh, triple, f, cache);

    // Steady route: the stationary field's boundary flux integrates to minus
    // the source integral exactly, which is the conduction energy.
    const ScalarField psi0 = solve_static_heat(mesh, triple.thermal, *w);
    const FluxTrace steady = static_boundary_flux(mesh, triple.thermal, *w, psi0);
    EnergyRecovery out;
    out.steady_limit = -steady.integral();

    // Decay-rate estimate from the steady field's Rayleigh quotient (an upper
    // bound on the slowest rate, adequate for a time cap).
    const SpMat K = assemble_stiffness(mesh, triple.thermal);
    ScalarField kinv = triple.kappa;
    for (int i = 0; i < kinv.size(); ++i) {
        if (!(kinv[i] > 0.0))
            throw std::invalid_argument("recover_energy_static: kappa must be positive");
        kinv[i] = 1.0 / kinv[i];
    }
    const SpMat M = assemble_mass(mesh, kinv);
    VecXd p0(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) p0[i] = psi0[i];
    const double pk = p0.dot(K * p0);
    const double pm = p0.dot(M * p0);
    out.lambda1 = pm > 0.0 ? pk / pm : 1.0;
    const double t_cap = cap_factor / out.lambda1;

    // Implicit stepping from rest; the running total of outgoing flux equals
    // the source integral minus the stored-heat rate, because the interior
    // residual rows vanish identically for the implicit scheme when the rate
    // uses the same one-sided difference.
    const double dt = 0.25 / out.lambda1;
    const VecXd b_full = apply_mass(mesh, *w);
    const double src_total = b_full.sum();
    VecXd bi(mesh.n_interior()), psi(mesh.n_interior());
    for (int i = 0; i < mesh.n_interior(); ++i) bi[i] = b_full[mesh.interior_nodes[i]];
    psi.setZero();
    const SpMat Ki = interior_block(mesh, K);
    const SpMat Mi = interior_block(mesh, M);
    SpMat lhs = Mi + dt * Ki;
    lhs.makeCompressed();
    Eigen::SimplicialLDLT<SpMat> solver(lhs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("recover_energy_static: factorization failed");

    double q_prev = 0.0;
    double t = 0.0;
    while (true) {
        const VecXd next = solver.solve(Mi * psi + dt * bi);
        const double stored_rate = ((Mi * (next - psi)) / dt).sum();
        psi = next;
        t += dt;
        const double q = src_total - stored_rate;
        if (std::abs(q - q_prev) < tol) {
            out.stabilized = q;
            out.t_star = t;
            return out;
        }
        q_prev = q;
        if (t > t_cap)
            throw std::runtime_error(
                "recover_energy_static: flux total did not stabilize within the time cap");
    }
}

double measurement_discrepancy(const MeasurementRecord& a, const MeasurementRecord& b) {
    if (a.times.size() != b.times.size() || a.flux.size() != b.flux.size())
        throw std::invalid_argument("measurement_discrepancy: time grids differ");
    for (size_t n = 0; n < a.times.size(); ++n)
        if (std::abs(a.times[n] - b.times[n]) > 1e-12)
            throw std::invalid_argument("measurement_discrepancy: time grids differ");
    double num = 0.0, den = 0.0;
    for (size_t n = 0; n < a.flux.size(); ++n) {
        const auto& fa = a.flux[n];
        const auto& fb = b.flux[n];
        if (fa.flux.size() != fb.flux.size())
            throw std::invalid_argument("measurement_discrepancy: boundary grids differ");
        double dn = 0.0, an = 0.0;
        for (size_t i = 0; i < fa.flux.size(); ++i) {
            const double d = fa.flux[i] - fb.flux[i];
            dn += d * d * fa.arc_w[i];
            an += fa.flux[i] * fa.flux[i] * fa.arc_w[i];
        }
        double wt;
        if (n == 0)
            wt = 0.5 * (a.times[1] - a.times[0]);
        else if (n + 1 == a.flux.size())
            wt = 0.5 * (a.times[n] - a.times[n - 1]);
        else
            wt = 0.5 * (a.times[n + 1] - a.times[n - 1]);
        num += wt * dn;
        den += wt * an;
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

std::string measurement_csv(const MeasurementRecord& rec) {
    CsvWriter csv("t, node_index, arc_s, flux");
    for (size_t n = 0; n < rec.times.size(); ++n)
        for (size_t b = 0; b < rec.flux[n].flux.size(); ++b)
            csv.row({rec.times[n], static_cast<double>(b), rec.arc_s[b], rec.flux[n].flux[b]});
    return csv.str();
}

std::string measurement_sidecar(const MeasurementRecord& rec) {
    nlohmann::json j;
    j["triple"] = rec.triple_id;
    j["schedule"] = rec.schedule_id;
    j["mesh_nodes"] = rec.mesh_nodes;
    j["n_boundary"] = rec.flux.empty() ? 0 : static_cast<int>(rec.flux.front().flux.size());
    j["n_times"] = static_cast<int>(rec.times.size());
    j["t_final"] = rec.times.empty() ? 0.0 : rec.times.back();
    j["time_rule"] = "uniform";
    j["source_rule"] = "boundary drives square the time factor; injected sources use it verbatim";
    return j.dump(2) + "\n";
}

} // namespace voltherm
