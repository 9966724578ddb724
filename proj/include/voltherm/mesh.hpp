#pragma once

#include "voltherm/geometry.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace voltherm {

/// Conforming triangle mesh of the closed unit disk.
///
/// Construction (build_disk_mesh) places M = ceil(1/h) concentric rings of
/// nodes: ring m (1 <= m < M) carries 6m nodes at radius m/M, and the
/// boundary ring carries 30M nodes exactly on the unit circle. Consecutive
/// rings are stitched by a deterministic angular-sweep triangulation. The
/// extra angular resolution of the boundary ring keeps the polygonal area
/// defect of the inscribed mesh within 0.02 h^2 relative of pi.
///
/// Invariants maintained here and asserted by the test suite:
///  - every triangle has strictly positive area (consistent orientation),
///  - maximum edge length <= 1.5 h,
///  - boundary nodes lie on the unit circle to 1e-10,
///  - boundary edges form a single closed loop.
struct Mesh {
    double h_target = 0;

    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;           // CCW node indices
    std::vector<std::array<int, 2>> boundary_edges; // loop order
    std::vector<int> boundary_nodes;                // loop order
    std::vector<char> on_boundary;                  // per node
    std::vector<int> interior_nodes;
    std::vector<int> interior_index;                // node -> interior slot or -1

    std::vector<double> tri_area;
    std::vector<double> node_patch_area; // sum of areas of incident triangles
    std::vector<double> arc_weight;      // per boundary node: half-sum of adjacent chords

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_tris() const { return static_cast<int>(tris.size()); }
    int n_interior() const { return static_cast<int>(interior_nodes.size()); }
    int n_bnodes() const { return static_cast<int>(boundary_nodes.size()); }

    Vec2 centroid(int t) const {
        const auto& tr = tris[t];
        return (nodes[tr[0]] + nodes[tr[1]] + nodes[tr[2]]) / 3.0;
    }

    /// Cumulative polygonal arc-length coordinate of boundary node i
    /// (i indexes boundary_nodes, not global nodes).
    double arc_coordinate(int i) const;

    /// Locate the triangle containing p (barycentric tolerance 1e-12);
    /// returns triangle index and barycentric coordinates. Points outside
    /// the mesh polygon are clamped to the nearest triangle found.
    int locate(const Vec2& p, std::array<double, 3>& bary) const;

    /// P1 interpolation of a nodal field at an arbitrary point.
    double interpolate(const std::vector<double>& nodal, const Vec2& p) const;

    void build_search_grid(); // called by build_disk_mesh and load_mesh

  private:
    // uniform bin grid over [-1,1]^2 for point location
    int grid_n_ = 0;
    std::vector<std::vector<int>> grid_bins_;
};

/// Build the structured disk mesh. Requires 0.005 <= h <= 0.5.
Mesh build_disk_mesh(double h_target);

/// Named nodal fields riding along with a serialized mesh.
/// Scalar fields carry one value per node, tensor fields three (a11 a12 a22).
struct MeshFields {
    std::map<std::string, std::vector<double>> scalars;
    std::map<std::string, std::vector<std::array<double, 3>>> tensors;
};

/// Plain-text serialization. Format (whitespace separated, '#' comments):
///   mesh 1
///   h <h_target>
///   nodes <N>         followed by N lines "x y"
///   triangles <T>     followed by T lines "i j k"
///   boundary_edges <B>    followed by B lines "i j"
///   fields <K>        followed by K blocks:
///     field <name> scalar   then N lines "v"
///     field <name> tensor   then N lines "a11 a12 a22"
void save_mesh(const std::string& path, const Mesh& mesh, const MeshFields& fields = {});
Mesh load_mesh(const std::string& path, MeshFields* fields = nullptr);

} // namespace voltherm
