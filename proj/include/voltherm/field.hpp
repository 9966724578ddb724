#pragma once

#include "voltherm/geometry.hpp"
#include "voltherm/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace voltherm {

/// Nodal piecewise-linear scalar field on a disk mesh.
struct ScalarField {
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(std::vector<double> vals) : v(std::move(vals)) {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};

/// Nodal symmetric 2x2 tensor field (a11, a12, a22 per node).
struct TensorField {
    std::vector<std::array<double, 3>> v;

    TensorField() = default;
    explicit TensorField(int n) : v(n, {1.0, 0.0, 1.0}) {}

    int size() const { return static_cast<int>(v.size()); }
    Mat2 at(int i) const {
        Mat2 m;
        m << v[i][0], v[i][1], v[i][1], v[i][2];
        return m;
    }
    void set(int i, const Mat2& m) { v[i] = {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }

    /// Smallest eigenvalue over all nodes (SPD floor check).
    double min_eigenvalue() const;
};

/// Closed-form fields; used for catalogs and exact pushforwards.
using AnalyticScalar = std::function<double(const Vec2&)>;
using AnalyticTensor = std::function<Mat2(const Vec2&)>;

ScalarField sample_scalar(const Mesh& mesh, const AnalyticScalar& f);
TensorField sample_tensor(const Mesh& mesh, const AnalyticTensor& f);

/// Coefficients of one forward model: conductivity gamma, inverse heat
/// capacity weight kappa, thermal conductivity A. All nodal.
struct CoefficientTriple {
    TensorField gamma;
    ScalarField kappa;
    TensorField thermal;
    std::string id;
};

/// P1-consistent integral of a nodal field: sum_i (patch_area_i / 3) v_i.
/// Identical to integrating against the consistent mass matrix.
double integrate(const Mesh& mesh, const ScalarField& f);

/// L2(Omega) norm via the consistent P1 mass quadrature.
double l2_norm(const Mesh& mesh, const ScalarField& f);

/// Per-triangle (P0) view of a nodal field: value at centroid.
std::vector<double> to_p0(const Mesh& mesh, const ScalarField& f);

} // namespace voltherm
