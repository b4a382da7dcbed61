#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <doctest.h>

#include "elbp/mesh.hpp"
#include "elbp/mesh_io.hpp"
#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"

using namespace elbp;
namespace fx = elbp::testfx;

namespace {

const char* kCubeOff = R"(OFF
8 6 0
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 3 2 1
4 4 5 6 7
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
)";

SurfaceTessellation unit_cube() {
    std::istringstream in(kCubeOff);
    return read_mesh(in, MeshFormat::Off, "cube");
}

SurfaceTessellation disk_fan(int spokes, double radius) {
    std::vector<Vec3> verts{{0, 0, 0}};
    for (int i = 0; i < spokes; ++i) {
        const double th = 2.0 * M_PI * i / spokes;
        verts.emplace_back(radius * std::cos(th), radius * std::sin(th), 0.0);
    }
    std::vector<std::vector<int>> faces;
    for (int i = 0; i < spokes; ++i)
        faces.push_back({0, 1 + i, 1 + (i + 1) % spokes});
    return SurfaceTessellation::from_faces(std::move(verts), std::move(faces));
}

} // namespace

TEST_CASE("cube OFF: counts, boundary, area, edge length") {
    const SurfaceTessellation cube = unit_cube();
    CHECK(cube.n_vertices() == 8);
    CHECK(cube.n_faces() == 6);
    CHECK(cube.n_edges() == 12); // V - E + F = 2
    for (int v = 0; v < cube.n_vertices(); ++v) {
        CHECK_FALSE(cube.is_boundary_vertex(v));
        CHECK(cube.vertex_edges(v).size() == 3);
    }
    CHECK(surface_area(cube) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(mean_edge_length(cube) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single triangle: everything is boundary") {
    std::istringstream in("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
    const SurfaceTessellation tri = read_mesh(in, MeshFormat::Off, "tri");
    CHECK(tri.n_vertices() == 3);
    CHECK(tri.n_edges() == 3);
    for (int v = 0; v < 3; ++v) {
        CHECK(tri.is_boundary_vertex(v));
        CHECK(tri.vertex_edges(v).size() == 2);
    }
}

TEST_CASE("edge shared by three faces is rejected") {
    std::istringstream in("OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 -1 0\n"
                          "3 0 1 2\n3 0 1 3\n3 0 1 4\n");
    CHECK_THROWS_AS(read_mesh(in, MeshFormat::Off, "nonmanifold"), NonManifoldError);
}

TEST_CASE("from_faces validation") {
    const std::vector<Vec3> tri{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    CHECK_THROWS_AS(SurfaceTessellation::from_faces({}, {{0, 1, 2}}), EmptyMeshError);
    CHECK_THROWS_AS(SurfaceTessellation::from_faces(tri, {}), EmptyMeshError);
    CHECK_THROWS_AS(SurfaceTessellation::from_faces(tri, {{0, 1, 3}}), IndexError);
    CHECK_THROWS_AS(SurfaceTessellation::from_faces(tri, {{0, 1, 1}}), ParseError);

    // strongly non-planar quad
    const std::vector<Vec3> bent{{0, 0, 0}, {1, 0, 0}, {1, 1, 0.5}, {0, 1, 0}};
    CHECK_THROWS_AS(SurfaceTessellation::from_faces(bent, {{0, 1, 2, 3}}),
                    NonConvexFaceError);

    // planar quad with a reflex corner
    const std::vector<Vec3> reflex{{0, 0, 0}, {2, 0, 0}, {0.2, 0.2, 0}, {0, 2, 0}};
    CHECK_THROWS_AS(SurfaceTessellation::from_faces(reflex, {{0, 1, 2, 3}}),
                    NonConvexFaceError);
}

TEST_CASE("vertex_edges ordering and valence") {
    const SurfaceTessellation grid = fx::flat_grid_tri(5, 5, 1.0);
    const int center = 2 * 5 + 2;
    const auto& edges = grid.vertex_edges(center);
    CHECK(edges.size() == 6); // interior vertex of a regular triangle grid
    int prev = -1;
    for (int e : edges) {
        const int other = grid.edges()[e].other(center);
        CHECK(other > prev); // sorted by opposite-vertex index
        prev = other;
    }
    CHECK_THROWS_AS(grid.vertex_edges(-1), IndexError);
    CHECK_THROWS_AS(grid.vertex_edges(25), IndexError);
}

TEST_CASE("face_edges matches the face cycle") {
    const SurfaceTessellation cube = unit_cube();
    for (int f = 0; f < cube.n_faces(); ++f) {
        const auto& cycle = cube.faces()[f];
        const auto& fe = cube.face_edges(f);
        REQUIRE(fe.size() == cycle.size());
        for (size_t i = 0; i < cycle.size(); ++i) {
            const Edge& e = cube.edges()[fe[i]];
            const int a = cycle[i], b = cycle[(i + 1) % cycle.size()];
            CHECK(e.contains(a));
            CHECK(e.contains(b));
        }
    }
}

TEST_CASE("adjacency round-trip") {
    const SurfaceTessellation mesh = fx::torus_grid(12, 8, 2.0, 0.7);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const Edge& edge = mesh.edges()[e];
        const auto& ea = mesh.vertex_edges(edge.a);
        const auto& eb = mesh.vertex_edges(edge.b);
        CHECK(std::count(ea.begin(), ea.end(), e) == 1);
        CHECK(std::count(eb.begin(), eb.end(), e) == 1);
        CHECK(mesh.find_edge(edge.a, edge.b) == e);
        CHECK(mesh.find_edge(edge.b, edge.a) == e);
    }
    CHECK(mesh.find_edge(0, mesh.n_vertices() - 1) >= -1);
}

TEST_CASE("surface_area is triangulation-invariant on planar faces") {
    const std::vector<Vec3> square{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    const auto tris =
        SurfaceTessellation::from_faces(square, {{0, 1, 2}, {0, 2, 3}});
    const auto quad = SurfaceTessellation::from_faces(square, {{0, 1, 2, 3}});
    CHECK(surface_area(tris) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(surface_area(quad) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("icosphere area approaches the analytic sphere") {
    const SurfaceTessellation sphere = fx::icosphere(4, 2.0); // 5120 faces
    CHECK(sphere.n_faces() == 5120);
    const double analytic = 16.0 * M_PI;
    CHECK(std::abs(surface_area(sphere) - analytic) / analytic < 0.01);
}

TEST_CASE("mean_edge_length: homogeneity and brute force") {
    const SurfaceTessellation mesh = fx::torus_grid(40, 25, 2.0, 0.7); // 1000 verts
    double brute = 0.0;
    for (int e = 0; e < mesh.n_edges(); ++e)
        brute += (mesh.position(mesh.edges()[e].a) - mesh.position(mesh.edges()[e].b))
                     .norm();
    brute /= mesh.n_edges();
    CHECK(mean_edge_length(mesh) == doctest::Approx(brute).epsilon(1e-12));

    std::vector<Vec3> scaled = mesh.vertices();
    for (auto& p : scaled) p *= 2.0;
    const auto doubled =
        SurfaceTessellation::from_faces(std::move(scaled), mesh.faces());
    CHECK(mean_edge_length(doubled) ==
          doctest::Approx(2.0 * mean_edge_length(mesh)).epsilon(1e-12));
}

TEST_CASE("vertex_normal: flat grid, cube corner, sphere") {
    const SurfaceTessellation grid = fx::flat_grid_tri(5, 5, 1.0);
    for (int v : {6, 7, 12, 18}) {
        const Vec3 n = vertex_normal(grid, v);
        CHECK(n.isApprox(Vec3(0, 0, 1), 1e-12));
    }

    const SurfaceTessellation cube = unit_cube();
    const Vec3 corner = vertex_normal(cube, 0); // at (0,0,0), outward = -(1,1,1)/sqrt 3
    CHECK(std::abs(std::abs(corner.dot(Vec3(1, 1, 1).normalized())) - 1.0) < 1e-12);

    const SurfaceTessellation sphere = fx::icosphere(3, 1.0);
    for (int v = 0; v < sphere.n_vertices(); v += 37) {
        const Vec3 radial = sphere.position(v).normalized();
        const double cosang = vertex_normal(sphere, v).dot(radial);
        CHECK(cosang > std::cos(2.0 * M_PI / 180.0)); // within 2 degrees
    }
}

TEST_CASE("rigid motion leaves area and edge length unchanged") {
    std::mt19937_64 rng(7);
    const SurfaceTessellation mesh = fx::bumpy_sphere(rng, 2);
    const SurfaceTessellation moved =
        fx::rigid_copy(mesh, Vec3(0.3, -0.8, 0.52), 1.234, Vec3(5, -3, 11));
    CHECK(std::abs(surface_area(moved) - surface_area(mesh)) /
              surface_area(mesh) < 1e-9);
    CHECK(std::abs(mean_edge_length(moved) - mean_edge_length(mesh)) /
              mean_edge_length(mesh) < 1e-9);
}

TEST_CASE("boundary_distance_filter") {
    const SurfaceTessellation cube = unit_cube();
    for (bool keep : boundary_distance_filter(cube, 100.0)) CHECK(keep);

    const SurfaceTessellation disk = disk_fan(16, 3.0);
    for (bool keep : boundary_distance_filter(disk, 3.5)) CHECK_FALSE(keep);

    // 40mm x 20mm strip, R_max = 5mm, against all-pairs brute force
    const SurfaceTessellation strip = fx::flat_grid_tri(41, 21, 1.0);
    const auto filter = boundary_distance_filter(strip, 5.0);
    const auto& flags = strip.boundary_flags();
    for (int v = 0; v < strip.n_vertices(); ++v) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int b = 0; b < strip.n_vertices(); ++b)
            if (flags[b])
                nearest = std::min(nearest,
                                   (strip.position(v) - strip.position(b)).norm());
        CHECK(filter[v] == (nearest >= 5.0));
    }
}

TEST_CASE("VertexField::checked rejects bad values") {
    CHECK_THROWS_AS(VertexField::checked("h", {1.0, std::nan("")}, 2), Error);
    CHECK_THROWS_AS(VertexField::checked("h", {1.0, 2.0}, 3), Error);
    const VertexField f = VertexField::checked("h", {1.0, 2.0}, 2);
    CHECK(f[1] == 2.0);
}

TEST_CASE("OFF and OBJ encodings load identically") {
    fx::TempDir dir;
    {
        std::ofstream off(dir.file("cube.off"));
        off << kCubeOff;
        std::ofstream obj(dir.file("cube.obj"));
        obj << "# cube\n";
        const SurfaceTessellation cube = unit_cube();
        for (const auto& p : cube.vertices())
            obj << "v " << p.x() << " " << p.y() << " " << p.z() << "\n";
        for (const auto& f : cube.faces()) {
            obj << "f";
            for (int v : f) obj << " " << v + 1;
            obj << "\n";
        }
    }
    const SurfaceTessellation a = load_mesh(dir.file("cube.off"));
    const SurfaceTessellation b = load_mesh(dir.file("cube.obj"));
    REQUIRE(a.n_vertices() == b.n_vertices());
    CHECK(a.faces() == b.faces());
    for (int v = 0; v < a.n_vertices(); ++v)
        CHECK((a.position(v) - b.position(v)).norm() < 1e-9);
}

TEST_CASE("ascii PLY loads") {
    std::istringstream in(R"(ply
format ascii 1.0
comment unit triangle
element vertex 3
property float x
property float y
property float z
element face 1
property list uchar int vertex_indices
end_header
0 0 0
1 0 0
0 1 0
3 0 1 2
)");
    const SurfaceTessellation tri = read_mesh(in, MeshFormat::PlyAscii, "tri.ply");
    CHECK(tri.n_vertices() == 3);
    CHECK(tri.n_faces() == 1);
    CHECK(tri.position(1).x() == 1.0);
}

TEST_CASE("write_off round-trips exactly") {
    std::mt19937_64 rng(11);
    const SurfaceTessellation mesh = fx::bumpy_sphere(rng, 1);
    fx::TempDir dir;
    write_off(mesh, dir.file("m.off"));
    const SurfaceTessellation back = load_mesh(dir.file("m.off"));
    REQUIRE(back.n_vertices() == mesh.n_vertices());
    CHECK(back.faces() == mesh.faces());
    for (int v = 0; v < mesh.n_vertices(); ++v)
        CHECK(back.position(v) == mesh.position(v)); // 17 digits: bit-exact
}

TEST_CASE("format_from_path and parse failures") {
    CHECK(format_from_path("a/b.off") == MeshFormat::Off);
    CHECK(format_from_path("a/B.OBJ") == MeshFormat::Obj);
    CHECK(format_from_path("c.Ply") == MeshFormat::PlyAscii);
    CHECK_THROWS_AS(format_from_path("mesh.stl"), ParseError);
    CHECK_THROWS_AS(format_from_path("noext"), ParseError);

    std::istringstream truncated("OFF\n8 6 0\n0 0 0\n");
    CHECK_THROWS_AS(read_mesh(truncated, MeshFormat::Off, "trunc"), ParseError);
    std::istringstream garbage("not a mesh at all\n");
    CHECK_THROWS_AS(read_mesh(garbage, MeshFormat::Off, "garbage"), ParseError);
    CHECK_THROWS_AS(load_mesh("/nonexistent/path.off"), ParseError);
}
