#include "elbp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace elbp {

namespace {

double bounding_box_diagonal(const std::vector<Vec3>& pts) {
    Vec3 lo = pts.front(), hi = pts.front();
    for (const Vec3& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

Vec3 newell_normal(const std::vector<Vec3>& pts, const std::vector<int>& cycle) {
    Vec3 n = Vec3::Zero();
    const int m = static_cast<int>(cycle.size());
    for (int i = 0; i < m; ++i) {
        const Vec3& p = pts[cycle[i]];
        const Vec3& q = pts[cycle[(i + 1) % m]];
        n.x() += (p.y() - q.y()) * (p.z() + q.z());
        n.y() += (p.z() - q.z()) * (p.x() + q.x());
        n.z() += (p.x() - q.x()) * (p.y() + q.y());
    }
    return n;
}

// Planarity and convexity of one face cycle, with an absolute tolerance in mm.
// Triangles pass unconditionally.
void check_face_shape(const std::vector<Vec3>& pts, const std::vector<int>& cycle,
                      int face_index, double tol) {
    const int m = static_cast<int>(cycle.size());
    if (m == 3) return;

    Vec3 n = newell_normal(pts, cycle);
    const double nn = n.norm();
    if (nn < 1e-300) return; // fully degenerate face, nothing to check against
    n /= nn;

    Vec3 centroid = Vec3::Zero();
    for (int v : cycle) centroid += pts[v];
    centroid /= m;

    for (int v : cycle) {
        if (std::abs((pts[v] - centroid).dot(n)) > tol)
            throw NonConvexFaceError("face " + std::to_string(face_index) +
                                     " is not planar within tolerance");
    }
    for (int i = 0; i < m; ++i) {
        const Vec3 e1 = pts[cycle[(i + 1) % m]] - pts[cycle[i]];
        const Vec3 e2 = pts[cycle[(i + 2) % m]] - pts[cycle[(i + 1) % m]];
        const double turn = e1.cross(e2).dot(n);
        if (turn < -tol * std::max(e1.norm(), e2.norm()))
            throw NonConvexFaceError("face " + std::to_string(face_index) +
                                     " has a reflex corner");
    }
}

} // namespace

SurfaceTessellation SurfaceTessellation::from_faces(
    std::vector<Vec3> vertices, std::vector<std::vector<int>> faces) {
    if (vertices.empty() || faces.empty())
        throw EmptyMeshError("tessellation has no vertices or no faces");

    SurfaceTessellation mesh;
    mesh.vertices_ = std::move(vertices);
    mesh.faces_ = std::move(faces);
    const int nv = mesh.n_vertices();

    const double tol = 1e-6 * bounding_box_diagonal(mesh.vertices_);

    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& cycle = mesh.faces_[f];
        if (cycle.size() < 3)
            throw ParseError("face " + std::to_string(f) + " has fewer than 3 vertices");
        for (size_t i = 0; i < cycle.size(); ++i) {
            if (cycle[i] < 0 || cycle[i] >= nv)
                throw IndexError("face " + std::to_string(f) + " references vertex " +
                                 std::to_string(cycle[i]));
            for (size_t j = i + 1; j < cycle.size(); ++j)
                if (cycle[i] == cycle[j])
                    throw ParseError("face " + std::to_string(f) + " repeats vertex " +
                                     std::to_string(cycle[i]));
        }
        check_face_shape(mesh.vertices_, cycle, f, tol);
    }

    // Derive the edge set in first-encounter order; deterministic for a given
    // face list, so OFF/OBJ encodings of the same mesh index identically.
    std::map<std::pair<int, int>, int> edge_index;
    mesh.face_edges_.resize(mesh.n_faces());
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& cycle = mesh.faces_[f];
        const int m = static_cast<int>(cycle.size());
        for (int i = 0; i < m; ++i) {
            int a = cycle[i], b = cycle[(i + 1) % m];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edge_index.try_emplace({a, b}, mesh.n_edges());
            if (inserted) {
                mesh.edges_.push_back({a, b});
                mesh.edge_faces_.push_back({f, -1});
            } else {
                auto& inc = mesh.edge_faces_[it->second];
                if (inc[1] >= 0)
                    throw NonManifoldError("edge (" + std::to_string(a) + "," +
                                           std::to_string(b) +
                                           ") is shared by more than 2 faces");
                inc[1] = f;
            }
            mesh.face_edges_[f].push_back(it->second);
        }
    }

    mesh.vertex_edges_.resize(nv);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        mesh.vertex_edges_[mesh.edges_[e].a].push_back(e);
        mesh.vertex_edges_[mesh.edges_[e].b].push_back(e);
    }
    for (int v = 0; v < nv; ++v) {
        auto& list = mesh.vertex_edges_[v];
        std::sort(list.begin(), list.end(), [&](int e1, int e2) {
            return mesh.edges_[e1].other(v) < mesh.edges_[e2].other(v);
        });
    }

    mesh.vertex_faces_.resize(nv);
    for (int f = 0; f < mesh.n_faces(); ++f)
        for (int v : mesh.faces_[f]) mesh.vertex_faces_[v].push_back(f);

    mesh.boundary_vertex_.assign(nv, false);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (mesh.edge_faces_[e][1] < 0) {
            mesh.boundary_vertex_[mesh.edges_[e].a] = true;
            mesh.boundary_vertex_[mesh.edges_[e].b] = true;
        }
    }
    return mesh;
}

const std::vector<int>& SurfaceTessellation::vertex_edges(int v) const {
    if (v < 0 || v >= n_vertices())
        throw IndexError("vertex index " + std::to_string(v) + " out of range");
    return vertex_edges_[v];
}

int SurfaceTessellation::find_edge(int a, int b) const {
    for (int e : vertex_edges(a))
        if (edges_[e].other(a) == b) return e;
    return -1;
}

VertexField VertexField::checked(std::string name, std::vector<double> values,
                                 int n_vertices) {
    if (static_cast<int>(values.size()) != n_vertices)
        throw IndexError("field '" + name + "' has " + std::to_string(values.size()) +
                         " values for " + std::to_string(n_vertices) + " vertices");
    for (double x : values)
        if (!std::isfinite(x))
            throw Error("field '" + name + "' contains a non-finite value");
    return VertexField{std::move(name), std::move(values)};
}

Vec3 face_normal_raw(const SurfaceTessellation& mesh, int f) {
    return newell_normal(mesh.vertices(), mesh.faces()[f]);
}

double surface_area(const SurfaceTessellation& mesh) {
    double area = 0.0;
    for (const auto& cycle : mesh.faces()) {
        const Vec3& p0 = mesh.position(cycle[0]);
        for (size_t i = 1; i + 1 < cycle.size(); ++i) {
            const Vec3 u = mesh.position(cycle[i]) - p0;
            const Vec3 v = mesh.position(cycle[i + 1]) - p0;
            area += 0.5 * u.cross(v).norm();
        }
    }
    return area;
}

double mean_edge_length(const SurfaceTessellation& mesh) {
    if (mesh.n_edges() == 0) throw EmptyMeshError("mesh has no edges");
    double total = 0.0;
    for (int e = 0; e < mesh.n_edges(); ++e) total += mesh.edge_length(e);
    return total / mesh.n_edges();
}

Vec3 vertex_normal(const SurfaceTessellation& mesh, int v) {
    if (v < 0 || v >= mesh.n_vertices())
        throw IndexError("vertex index " + std::to_string(v) + " out of range");
    Vec3 sum = Vec3::Zero();
    // Newell normals carry magnitude 2*area, so plain summation is the
    // area-weighted average.
    for (int f : mesh.vertex_faces(v)) sum += face_normal_raw(mesh, f);
    const double len = sum.norm();
    if (len < 1e-12)
        throw DegenerateNormalError("vertex " + std::to_string(v) +
                                    " has a degenerate normal");
    return sum / len;
}

std::vector<bool> boundary_distance_filter(const SurfaceTessellation& mesh,
                                           double r_max) {
    std::vector<int> rim;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (mesh.is_boundary_vertex(v)) rim.push_back(v);

    std::vector<bool> ok(mesh.n_vertices(), true);
    if (rim.empty()) return ok;

    const double r2 = r_max * r_max;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        for (int b : rim) {
            if ((mesh.position(v) - mesh.position(b)).squaredNorm() < r2) {
                ok[v] = false;
                break;
            }
        }
    }
    return ok;
}

} // namespace elbp
