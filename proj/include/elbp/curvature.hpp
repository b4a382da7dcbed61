#pragma once

#include <string>
#include <vector>

#include "elbp/mesh.hpp"

namespace elbp {

/// Per-vertex principal curvatures in 1/mm, with k2 >= k1 everywhere.
struct PrincipalCurvatures {
    std::vector<double> k1; // minimum normal curvature
    std::vector<double> k2; // maximum normal curvature

    int size() const { return static_cast<int>(k1.size()); }
};

/// Normal-cycle curvature tensor estimate.
///
/// Polygon faces are fan-triangulated internally; every interior edge of the
/// triangulation contributes (dihedral angle x length / 2) times the outer
/// product of its unit direction to both incident triangles. A vertex tensor
/// sums the triangle contributions over the combinatorial neighborhood of
/// hop radius `averaging_ring_size` and divides by the neighborhood area.
/// k1/k2 are the two eigenvalues whose eigenvectors span the tangent plane
/// (the eigenvector most parallel to the vertex normal is discarded).
///
/// Throws DegenerateNeighborhoodError for a vertex whose neighborhood has
/// zero area.
PrincipalCurvatures estimate_principal_curvatures(const SurfaceTessellation& mesh,
                                                  int averaging_ring_size = 3);

VertexField mean_curvature(const PrincipalCurvatures& pc);     // (k1+k2)/2
VertexField gaussian_curvature(const PrincipalCurvatures& pc); // k1*k2

/// (2/pi) * atan((k1+k2)/(k1-k2)). Near-umbilic vertices (|k1-k2| below
/// umbilic_epsilon) map to sign(k1+k2), and to 0 when |k1+k2| is also below
/// the epsilon.
VertexField shape_index(const PrincipalCurvatures& pc, double umbilic_epsilon = 1e-8);

VertexField curvedness(const PrincipalCurvatures& pc); // sqrt((k1^2+k2^2)/2)

/// Field selector used by the CLI: k1, k2, H, K, SI, curvedness.
VertexField curvature_field(const SurfaceTessellation& mesh, const std::string& name,
                            int averaging_ring_size = 3);

/// CSV export, one "vertex,value" row per vertex at 17 significant digits.
void export_field_csv(const VertexField& field, const std::string& path);

} // namespace elbp
