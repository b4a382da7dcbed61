#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "elbp/errors.hpp"

namespace elbp {

using Vec3 = Eigen::Vector3d;

// Unordered vertex pair, stored with a < b.
struct Edge {
    int a = -1;
    int b = -1;

    int other(int v) const { return v == a ? b : a; }
    bool contains(int v) const { return v == a || v == b; }
};

/// Indexed polygon mesh with the adjacency maps the ring pipeline needs.
/// Faces are vertex-index cycles (length >= 3) of convex, planar polygons;
/// every edge belongs to 1 or 2 faces (2-manifold with boundary).
/// Immutable after construction; all queries are const.
class SurfaceTessellation {
  public:
    /// Builds the full index from raw positions and face cycles.
    /// Throws EmptyMeshError, IndexError, NonManifoldError, NonConvexFaceError.
    static SurfaceTessellation from_faces(std::vector<Vec3> vertices,
                                          std::vector<std::vector<int>> faces);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::vector<int>>& faces() const { return faces_; }
    const std::vector<Edge>& edges() const { return edges_; }

    int n_vertices() const { return static_cast<int>(vertices_.size()); }
    int n_faces() const { return static_cast<int>(faces_.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }

    const Vec3& position(int v) const { return vertices_[v]; }

    /// Faces incident to an edge; second entry is -1 on boundary edges.
    const std::array<int, 2>& edge_faces(int e) const { return edge_faces_[e]; }
    bool is_boundary_edge(int e) const { return edge_faces_[e][1] < 0; }

    /// Edge indices around face f; entry i is the edge from cycle vertex i to
    /// cycle vertex i+1 (wrapping).
    const std::vector<int>& face_edges(int f) const { return face_edges_[f]; }

    /// Edges incident to v, sorted by opposite-vertex index.
    const std::vector<int>& vertex_edges(int v) const;
    const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }

    bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
    const std::vector<bool>& boundary_flags() const { return boundary_vertex_; }

    double edge_length(int e) const {
        return (vertices_[edges_[e].a] - vertices_[edges_[e].b]).norm();
    }

    /// Edge index for an unordered vertex pair, or -1.
    int find_edge(int a, int b) const;

  private:
    std::vector<Vec3> vertices_;
    std::vector<std::vector<int>> faces_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 2>> edge_faces_;
    std::vector<std::vector<int>> face_edges_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<bool> boundary_vertex_;
};

/// Scalar function on the vertices of a tessellation (the coded quantity).
/// All values are finite; length always matches the owning mesh.
struct VertexField {
    std::string name;
    std::vector<double> values;

    double operator[](int v) const { return values[v]; }
    int size() const { return static_cast<int>(values.size()); }

    /// Throws on NaN/Inf or length mismatch against n_vertices.
    static VertexField checked(std::string name, std::vector<double> values,
                               int n_vertices);
};

/// Sum of face areas (faces fan-triangulated from their first vertex), mm^2.
double surface_area(const SurfaceTessellation& mesh);

/// Arithmetic mean of Euclidean edge lengths, mm. Throws EmptyMeshError.
double mean_edge_length(const SurfaceTessellation& mesh);

/// Area-weighted average of incident face normals (orientation from face
/// winding), unit length. Throws DegenerateNormalError when the weighted sum
/// is shorter than 1e-12.
Vec3 vertex_normal(const SurfaceTessellation& mesh, int v);

/// Newell normal of a face; magnitude is twice the face area.
Vec3 face_normal_raw(const SurfaceTessellation& mesh, int f);

/// Conservative boundary prefilter: marks false every vertex closer than
/// r_max (Euclidean) to some boundary vertex. Closed meshes: all true.
/// The authoritative admissibility test is the ring extraction itself.
std::vector<bool> boundary_distance_filter(const SurfaceTessellation& mesh,
                                           double r_max);

} // namespace elbp
