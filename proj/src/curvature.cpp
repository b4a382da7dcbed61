#include "elbp/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <Eigen/Dense>

namespace elbp {

namespace {

// Fan triangulation of the tessellation plus everything the tensor
// accumulation needs: per-triangle contribution matrices and combinatorial
// adjacency (including fan diagonals).
struct TriangulatedView {
    std::vector<std::array<int, 3>> tris;
    std::vector<double> tri_area;
    std::vector<Eigen::Matrix3d> tri_tensor; // summed half-edge contributions
    std::vector<std::vector<int>> vertex_tris;
    std::vector<std::vector<int>> vertex_adj;
};

TriangulatedView build_view(const SurfaceTessellation& mesh) {
    TriangulatedView view;
    for (const auto& cycle : mesh.faces())
        for (size_t i = 1; i + 1 < cycle.size(); ++i)
            view.tris.push_back({cycle[0], cycle[i], cycle[i + 1]});

    const int nt = static_cast<int>(view.tris.size());
    const int nv = mesh.n_vertices();

    std::vector<Vec3> tri_normal(nt); // unit, zero for degenerate triangles
    view.tri_area.resize(nt);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = view.tris[t];
        const Vec3 n = (mesh.position(tri[1]) - mesh.position(tri[0]))
                           .cross(mesh.position(tri[2]) - mesh.position(tri[0]));
        const double len = n.norm();
        view.tri_area[t] = 0.5 * len;
        tri_normal[t] = len > 1e-300 ? Vec3(n / len) : Vec3(Vec3::Zero());
    }

    // tri-edge -> incident triangles (at most 2 after the manifold check)
    std::map<std::pair<int, int>, std::array<int, 2>> edge_tris;
    for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            int a = view.tris[t][k], b = view.tris[t][(k + 1) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edge_tris.try_emplace({a, b}, std::array<int, 2>{t, -1});
            if (!inserted) it->second[1] = t;
        }
    }

    view.tri_tensor.assign(nt, Eigen::Matrix3d::Zero());
    for (const auto& [key, inc] : edge_tris) {
        if (inc[1] < 0) continue; // boundary edge, no dihedral
        const Vec3&n1 = tri_normal[inc[0]], &n2 = tri_normal[inc[1]];
        if (n1.isZero() || n2.isZero()) continue;
        Vec3 dir = mesh.position(key.second) - mesh.position(key.first);
        const double len = dir.norm();
        if (len < 1e-300) continue;
        dir /= len;
        // Orient dir as the edge appears in the first triangle's winding so
        // the dihedral sign marks convex vs concave creases.
        const auto& tri = view.tris[inc[0]];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] == key.second && tri[(k + 1) % 3] == key.first) {
                dir = -dir;
                break;
            }
        }
        const double beta = std::atan2(n1.cross(n2).dot(dir), n1.dot(n2));
        const Eigen::Matrix3d contrib = 0.5 * beta * len * (dir * dir.transpose());
        view.tri_tensor[inc[0]] += contrib;
        view.tri_tensor[inc[1]] += contrib;
    }

    view.vertex_tris.resize(nv);
    for (int t = 0; t < nt; ++t)
        for (int v : view.tris[t]) view.vertex_tris[v].push_back(t);

    view.vertex_adj.resize(nv);
    for (const auto& [key, inc] : edge_tris) {
        view.vertex_adj[key.first].push_back(key.second);
        view.vertex_adj[key.second].push_back(key.first);
    }
    return view;
}

} // namespace

PrincipalCurvatures estimate_principal_curvatures(const SurfaceTessellation& mesh,
                                                  int averaging_ring_size) {
    if (averaging_ring_size < 1)
        throw Error("averaging_ring_size must be >= 1");

    const TriangulatedView view = build_view(mesh);
    const int nv = mesh.n_vertices();

    PrincipalCurvatures pc;
    pc.k1.resize(nv);
    pc.k2.resize(nv);

    std::vector<int> vstamp(nv, -1), tstamp(view.tris.size(), -1);
    std::vector<int> ball, frontier, next_frontier;

    for (int v = 0; v < nv; ++v) {
        ball.clear();
        frontier.assign(1, v);
        vstamp[v] = v;
        ball.push_back(v);
        for (int hop = 0; hop < averaging_ring_size; ++hop) {
            next_frontier.clear();
            for (int u : frontier) {
                for (int w : view.vertex_adj[u]) {
                    if (vstamp[w] != v) {
                        vstamp[w] = v;
                        ball.push_back(w);
                        next_frontier.push_back(w);
                    }
                }
            }
            frontier.swap(next_frontier);
        }

        Eigen::Matrix3d tensor = Eigen::Matrix3d::Zero();
        double area = 0.0;
        for (int u : ball) {
            for (int t : view.vertex_tris[u]) {
                if (tstamp[t] == v) continue;
                const auto& tri = view.tris[t];
                if (vstamp[tri[0]] != v || vstamp[tri[1]] != v || vstamp[tri[2]] != v)
                    continue;
                tstamp[t] = v;
                tensor += view.tri_tensor[t];
                area += view.tri_area[t];
            }
        }
        if (area < 1e-30)
            throw DegenerateNeighborhoodError("vertex " + std::to_string(v) +
                                              " has a zero-area neighborhood");
        tensor /= area;

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(tensor);
        const Vec3 normal = vertex_normal(mesh, v);
        int drop = 0;
        double best = -1.0;
        for (int i = 0; i < 3; ++i) {
            const double align = std::abs(eig.eigenvectors().col(i).dot(normal));
            if (align > best) {
                best = align;
                drop = i;
            }
        }
        double ka = eig.eigenvalues()((drop + 1) % 3);
        double kb = eig.eigenvalues()((drop + 2) % 3);
        if (ka > kb) std::swap(ka, kb);
        if (!std::isfinite(ka) || !std::isfinite(kb))
            throw Error("non-finite curvature at vertex " + std::to_string(v));
        pc.k1[v] = ka;
        pc.k2[v] = kb;
    }
    return pc;
}

VertexField mean_curvature(const PrincipalCurvatures& pc) {
    std::vector<double> out(pc.size());
    for (int i = 0; i < pc.size(); ++i) out[i] = 0.5 * (pc.k1[i] + pc.k2[i]);
    return VertexField{"H", std::move(out)};
}

VertexField gaussian_curvature(const PrincipalCurvatures& pc) {
    std::vector<double> out(pc.size());
    for (int i = 0; i < pc.size(); ++i) out[i] = pc.k1[i] * pc.k2[i];
    return VertexField{"K", std::move(out)};
}

VertexField shape_index(const PrincipalCurvatures& pc, double umbilic_epsilon) {
    std::vector<double> out(pc.size());
    for (int i = 0; i < pc.size(); ++i) {
        const double sum = pc.k1[i] + pc.k2[i];
        const double diff = pc.k1[i] - pc.k2[i];
        if (std::abs(diff) < umbilic_epsilon) {
            // spherical-cap limit; flat when the trace vanishes as well
            out[i] = std::abs(sum) < umbilic_epsilon ? 0.0 : (sum > 0 ? 1.0 : -1.0);
        } else {
            out[i] = (2.0 / M_PI) * std::atan(sum / diff);
        }
    }
    return VertexField{"SI", std::move(out)};
}

VertexField curvedness(const PrincipalCurvatures& pc) {
    std::vector<double> out(pc.size());
    for (int i = 0; i < pc.size(); ++i)
        out[i] = std::sqrt(0.5 * (pc.k1[i] * pc.k1[i] + pc.k2[i] * pc.k2[i]));
    return VertexField{"curvedness", std::move(out)};
}

VertexField curvature_field(const SurfaceTessellation& mesh, const std::string& name,
                            int averaging_ring_size) {
    const PrincipalCurvatures pc = estimate_principal_curvatures(mesh, averaging_ring_size);
    if (name == "k1") return VertexField{"k1", pc.k1};
    if (name == "k2") return VertexField{"k2", pc.k2};
    if (name == "H") return mean_curvature(pc);
    if (name == "K") return gaussian_curvature(pc);
    if (name == "SI") return shape_index(pc);
    if (name == "curvedness") return curvedness(pc);
    throw Error("unknown curvature field '" + name + "'");
}

void export_field_csv(const VertexField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "vertex," << field.name << "\n";
    char buf[48];
    for (size_t v = 0; v < field.values.size(); ++v) {
        std::snprintf(buf, sizeof(buf), "%.17g", field.values[v]);
        out << v << ',' << buf << '\n';
    }
}

} // namespace elbp
