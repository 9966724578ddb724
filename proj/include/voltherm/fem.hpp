#pragma once

#include "voltherm/field.hpp"
#include "voltherm/mesh.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <array>

namespace voltherm {

using SpMat = Eigen::SparseMatrix<double>;
using VecXd = Eigen::VectorXd;

/// Gradients of the three linear shape functions on triangle t (constant).
std::array<Vec2, 3> shape_gradients(const Mesh& mesh, int t);

/// Gradient of a nodal field restricted to triangle t (constant).
Vec2 tri_gradient(const Mesh& mesh, int t, const ScalarField& v);

/// Stiffness matrix for a symmetric tensor coefficient; the coefficient is
/// evaluated at each triangle centroid (mean of the three nodal tensors).
SpMat assemble_stiffness(const Mesh& mesh, const TensorField& coeff);

/// Consistent mass matrix with a scalar weight evaluated at centroids:
/// per-triangle block w_c * area/12 * (1 + delta_ij).
SpMat assemble_mass(const Mesh& mesh, const ScalarField& weight);

/// Load vector b_i = integral of f * hat_i with piecewise-linear f
/// (equals the unweighted consistent mass applied to f's nodal values).
VecXd apply_mass(const Mesh& mesh, const ScalarField& f);

/// Solve A u = load with prescribed values on boundary nodes (listed in
/// Mesh::boundary_nodes order) by elimination. The returned field carries
/// the trace exactly. Throws on factorization failure.
ScalarField solve_dirichlet(const Mesh& mesh, const SpMat& A,
                            const std::vector<double>& trace, const VecXd& load);

/// Restriction of a full matrix to interior-by-interior DOFs.
SpMat interior_block(const Mesh& mesh, const SpMat& A);

/// Gather / scatter between full nodal vectors and interior DOF vectors.
VecXd gather_interior(const Mesh& mesh, const ScalarField& v);
ScalarField scatter_interior(const Mesh& mesh, const VecXd& vi);

} // namespace voltherm
