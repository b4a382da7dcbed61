#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "elbp/mesh.hpp"

// Procedural meshes and small helpers shared by the unit and acceptance
// tests. Everything is deterministic given the arguments.
namespace elbp::testfx {

// Planar grid in z=0, nx*ny vertices spaced dx, vertex (i,j) at index j*nx+i.
SurfaceTessellation flat_grid_tri(int nx, int ny, double dx);
SurfaceTessellation flat_grid_quad(int nx, int ny, double dx);

// Height of the synthetic relief patterns (mm). Patterns 0..3 are mutually
// distinct: bumps, ridges, diagonal waves, dense dimples. Pattern 1 depends
// on x only, so its quad tessellation has exactly planar faces.
double wavy_height(int pattern, double x, double y);

// Grid tessellations of the pattern height fields.
SurfaceTessellation wavy_patch_tri(int pattern, int nx, int ny, double dx);
SurfaceTessellation wavy_patch_quad(int pattern, int nx, int ny, double dx);

// Subdivided icosahedron scaled to the radius; vertices 0..11 are the
// original poles (valence 5). V = 10*4^s + 2.
SurfaceTessellation icosphere(int subdivisions, double radius);

// Open tube around the z axis: n_rows rings of n_circ vertices, open at both
// ends, closed around the circumference.
SurfaceTessellation open_cylinder(double radius, int n_circ, int n_rows,
                                  double row_step);

// Closed torus, nu major x nv minor vertices.
SurfaceTessellation torus_grid(int nu, int nv, double hole_radius,
                               double tube_radius);

// Icosphere with random smooth radial bumps, anisotropic scale and rotation;
// always a closed 2-manifold.
SurfaceTessellation bumpy_sphere(std::mt19937_64& rng, int subdivisions);

// Random closed triangle mesh (bumpy sphere or torus), <= 2000 vertices.
SurfaceTessellation random_closed_mesh(std::mt19937_64& rng);

// Same connectivity, rigidly moved vertices (rotation about the given axis
// through the origin, then translation).
SurfaceTessellation rigid_copy(const SurfaceTessellation& mesh, const Vec3& axis,
                               double angle, const Vec3& translation);

// Multi-source BFS hop counts over the vertex graph; unreachable = -1.
std::vector<int> hop_distances(const SurfaceTessellation& mesh,
                               const std::vector<int>& seeds);

VertexField constant_field(const SurfaceTessellation& mesh, const std::string& name,
                           double value);

} // namespace elbp::testfx
