#include "support/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>
#include <utility>

#include <Eigen/Geometry>

namespace elbp::testfx {

namespace {

SurfaceTessellation grid_mesh(int nx, int ny, double dx, bool quads,
                              double (*height)(double, double)) {
    std::vector<Vec3> verts;
    verts.reserve(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double x = i * dx, y = j * dx;
            verts.emplace_back(x, y, height ? height(x, y) : 0.0);
        }
    std::vector<std::vector<int>> faces;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const int a = j * nx + i, b = j * nx + i + 1;
            const int c = (j + 1) * nx + i + 1, d = (j + 1) * nx + i;
            if (quads) {
                faces.push_back({a, b, c, d});
            } else {
                faces.push_back({a, b, c});
                faces.push_back({a, c, d});
            }
        }
    return SurfaceTessellation::from_faces(std::move(verts), std::move(faces));
}

int g_pattern = 0; // forwarded to the stateless grid callback

double pattern_height(double x, double y) { return wavy_height(g_pattern, x, y); }

} // namespace

SurfaceTessellation flat_grid_tri(int nx, int ny, double dx) {
    return grid_mesh(nx, ny, dx, false, nullptr);
}

SurfaceTessellation flat_grid_quad(int nx, int ny, double dx) {
    return grid_mesh(nx, ny, dx, true, nullptr);
}

double wavy_height(int pattern, double x, double y) {
    switch (pattern) {
    case 0: return 0.45 * std::sin(2.1 * x) * std::sin(1.7 * y);
    case 1: return 0.45 * std::sin(2.3 * x + 0.37);
    case 2: return 0.45 * std::sin(1.9 * (0.6 * x + 0.8 * y) + 0.11);
    case 3:
        return 0.30 * std::sin(3.1 * x) * std::sin(2.9 * y) +
               0.15 * std::sin(5.3 * x + 1.0);
    default: throw Error("unknown pattern " + std::to_string(pattern));
    }
}

SurfaceTessellation wavy_patch_tri(int pattern, int nx, int ny, double dx) {
    g_pattern = pattern;
    return grid_mesh(nx, ny, dx, false, pattern_height);
}

SurfaceTessellation wavy_patch_quad(int pattern, int nx, int ny, double dx) {
    g_pattern = pattern;
    return grid_mesh(nx, ny, dx, true, pattern_height);
}

SurfaceTessellation icosphere(int subdivisions, double radius) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, phi, 0},  {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                           {0, -1, phi},  {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                           {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint_of;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint_of.find(key);
            if (it != midpoint_of.end()) return it->second;
            const int idx = static_cast<int>(v.size());
            v.push_back(((v[a] + v[b]) * 0.5).normalized());
            midpoint_of.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(f.size() * 4);
        for (const auto& t : f) {
            const int ab = midpoint(t[0], t[1]);
            const int bc = midpoint(t[1], t[2]);
            const int ca = midpoint(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }

    for (auto& p : v) p *= radius;
    std::vector<std::vector<int>> faces;
    faces.reserve(f.size());
    for (const auto& t : f) faces.push_back({t[0], t[1], t[2]});
    return SurfaceTessellation::from_faces(std::move(v), std::move(faces));
}

SurfaceTessellation open_cylinder(double radius, int n_circ, int n_rows,
                                  double row_step) {
    std::vector<Vec3> verts;
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_circ; ++j) {
            const double th = 2.0 * M_PI * j / n_circ;
            verts.emplace_back(radius * std::cos(th), radius * std::sin(th),
                               i * row_step);
        }
    std::vector<std::vector<int>> faces;
    for (int i = 0; i + 1 < n_rows; ++i)
        for (int j = 0; j < n_circ; ++j) {
            const int jn = (j + 1) % n_circ;
            const int a = i * n_circ + j, b = i * n_circ + jn;
            const int c = (i + 1) * n_circ + jn, d = (i + 1) * n_circ + j;
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
        }
    return SurfaceTessellation::from_faces(std::move(verts), std::move(faces));
}

SurfaceTessellation torus_grid(int nu, int nv, double hole_radius,
                               double tube_radius) {
    std::vector<Vec3> verts;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const double u = 2.0 * M_PI * i / nu;
            const double w = 2.0 * M_PI * j / nv;
            const double ring = hole_radius + tube_radius * std::cos(w);
            verts.emplace_back(ring * std::cos(u), ring * std::sin(u),
                               tube_radius * std::sin(w));
        }
    std::vector<std::vector<int>> faces;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const int in = (i + 1) % nu, jn = (j + 1) % nv;
            const int a = i * nv + j, b = in * nv + j;
            const int c = in * nv + jn, d = i * nv + jn;
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
        }
    return SurfaceTessellation::from_faces(std::move(verts), std::move(faces));
}

SurfaceTessellation bumpy_sphere(std::mt19937_64& rng, int subdivisions) {
    const SurfaceTessellation base = icosphere(subdivisions, 1.0);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    struct Bump {
        Vec3 dir;
        double amp, width;
    };
    std::vector<Bump> bumps(5);
    for (auto& b : bumps) {
        Vec3 d(uni(rng), uni(rng), uni(rng));
        while (d.norm() < 1e-3) d = Vec3(uni(rng), uni(rng), uni(rng));
        b.dir = d.normalized();
        b.amp = 0.2 * uni(rng);
        b.width = 0.08 + 0.12 * std::abs(uni(rng));
    }
    const Vec3 scale(1.0 + 0.3 * uni(rng), 1.0 + 0.3 * uni(rng),
                     1.0 + 0.3 * uni(rng));
    Vec3 axis(uni(rng), uni(rng), uni(rng));
    while (axis.norm() < 1e-3) axis = Vec3(uni(rng), uni(rng), uni(rng));
    const Eigen::AngleAxisd rot(M_PI * uni(rng), axis.normalized());

    std::vector<Vec3> verts = base.vertices();
    for (auto& p : verts) {
        double r = 1.0;
        for (const auto& b : bumps)
            r += b.amp * std::exp(-(1.0 - p.dot(b.dir)) / b.width);
        p = rot * (r * p.cwiseProduct(scale));
    }
    return SurfaceTessellation::from_faces(std::move(verts), base.faces());
}

SurfaceTessellation random_closed_mesh(std::mt19937_64& rng) {
    switch (rng() % 3) {
    case 0: return bumpy_sphere(rng, 2); // 162 vertices
    case 1: return bumpy_sphere(rng, 3); // 642 vertices
    default: {
        const int nu = 24 + static_cast<int>(rng() % 17);
        const int nv = 18 + static_cast<int>(rng() % 13);
        return torus_grid(nu, nv, 2.0, 0.55 + 0.3 * (rng() % 100) / 100.0);
    }
    }
}

SurfaceTessellation rigid_copy(const SurfaceTessellation& mesh, const Vec3& axis,
                               double angle, const Vec3& translation) {
    const Eigen::AngleAxisd rot(angle, axis.normalized());
    std::vector<Vec3> verts = mesh.vertices();
    for (auto& p : verts) p = rot * p + translation;
    return SurfaceTessellation::from_faces(std::move(verts), mesh.faces());
}

std::vector<int> hop_distances(const SurfaceTessellation& mesh,
                               const std::vector<int>& seeds) {
    std::vector<int> hops(mesh.n_vertices(), -1);
    std::queue<int> queue;
    for (int s : seeds) {
        hops[s] = 0;
        queue.push(s);
    }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (int e : mesh.vertex_edges(v)) {
            const int w = mesh.edges()[e].other(v);
            if (hops[w] < 0) {
                hops[w] = hops[v] + 1;
                queue.push(w);
            }
        }
    }
    return hops;
}

VertexField constant_field(const SurfaceTessellation& mesh, const std::string& name,
                           double value) {
    return VertexField::checked(name, std::vector<double>(mesh.n_vertices(), value),
                                mesh.n_vertices());
}

} // namespace elbp::testfx
