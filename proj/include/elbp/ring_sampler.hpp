#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elbp/mesh.hpp"

namespace elbp {

/// One sphere-edge crossing: a vertex of the ring polyline.
struct RingPoint {
    Vec3 position = Vec3::Zero();     // on the host edge, |position - center| = R
    int host_edge = -1;               // mesh edge carrying the point
    double edge_parameter = 0.0;      // t in [0,1] from the edge's first vertex
    double h_value = 0.0;             // field interpolated at t along the edge
};

/// Closed intersection curve of a sphere centered at a vertex with the
/// surface, as an ordered polyline of edge crossings. Ordering is
/// counterclockwise around the center's normal; points[start_index] is the
/// starting point chosen by sort_ring (or the inner-ring rule in multi_ring).
struct Ring {
    int center = -1;
    double radius = 0.0;
    std::vector<RingPoint> points;
    bool closed = false;
    int start_index = 0;
};

/// The nested rings of one vertex at radii k*r_max/n_rings. A vertex is
/// admissible iff every ring is a single closed curve bounding the grown
/// region that contains the vertex; only admissible vertices enter the
/// descriptor.
struct MultiRing {
    int center = -1;
    std::vector<Ring> rings;
    bool admissible = false;
};

/// Crossing of one edge with the sphere of the given radius around `center`:
/// returns the point at distance `radius` when the endpoint distances straddle
/// the radius, nothing when both endpoints are on the same side. Throws
/// TangentEdgeError when an endpoint sits within 1e-9*radius of the sphere
/// (measure-zero case; callers retry with a slightly larger radius).
/// h_value is interpolated from `h` when given, otherwise 0.
std::optional<RingPoint> edge_sphere_intersection(const SurfaceTessellation& mesh,
                                                  int edge, int center, double radius,
                                                  const VertexField* h = nullptr);

/// Reusable extraction engine for one mesh. Holds per-vertex scratch arrays
/// (epoch-stamped, no clearing between calls) plus the grown-region state that
/// lets consecutive radii of one vertex share work. One instance per thread;
/// instances never share mutable state.
class RingExtractor {
  public:
    explicit RingExtractor(const SurfaceTessellation& mesh);

    /// Single closed ring around `center`, ordered by sort_ring.
    /// Throws OpenRingError (sphere leaves through the surface boundary),
    /// MultiComponentBoundaryError (region boundary has several loops),
    /// DegenerateRingError (<3 points), TangentEdgeError (retries exhausted).
    Ring ring_extraction(int center, double radius, const VertexField& h);

    /// All n_rings rings at radii k*r_max/n_rings, grown incrementally from
    /// small to large. Never throws for geometric reasons: any extraction
    /// failure yields admissible=false (rings may then be a prefix).
    /// The outermost ring is ordered by sort_ring; inner rings start at their
    /// point closest to the outermost starting point, all counterclockwise.
    MultiRing multi_ring(int center, double r_max, int n_rings, const VertexField& h);

    const SurfaceTessellation& mesh() const { return mesh_; }

  private:
    struct Grown;
    Ring extract_with_retry(int center, double radius, const VertexField& h,
                            bool fresh_session);
    Ring chain_crossings(int center, double radius);
    void grow(int center, double radius, const VertexField& h, bool fresh_session);

    const SurfaceTessellation& mesh_;

    // distance-to-center cache, valid while dist_epoch_[v] == center_serial_
    std::vector<double> dist_;
    std::vector<int> dist_epoch_;
    int center_serial_ = 0;
    int current_center_ = -1;

    // grown-region session state (one session = one center's radius sweep)
    std::vector<int> face_session_;   // face in region iff == session_serial_
    int session_serial_ = 0;
    std::vector<int> scan_list_;      // faces to (re)scan for the active radius
    std::vector<int> halo_;           // region faces with an outside vertex

    // per-radius-attempt crossing bookkeeping
    std::vector<int> edge_attempt_;
    std::vector<int> edge_slot_;
    int attempt_serial_ = 0;
    std::vector<RingPoint> crossings_;
    std::vector<int> face_chorded_;
    std::vector<std::array<int, 2>> chord_of_; // two chord ids per crossing
    std::vector<std::array<int, 2>> chords_;   // crossing slot pairs

    double distance(int v);
};

/// Convenience wrappers constructing a throwaway RingExtractor.
Ring ring_extraction(const SurfaceTessellation& mesh, int center, double radius,
                     const VertexField& h);
MultiRing multi_ring(const SurfaceTessellation& mesh, int center, double r_max,
                     int n_rings, const VertexField& h);

/// Reorders a closed ring: the starting point maximizes h_value (ties: largest
/// summed distance to the other points, then lowest host edge index); the
/// sequence runs counterclockwise around the center's vertex normal, keeping
/// the polyline's chain adjacency. start_index becomes 0.
Ring sort_ring(Ring ring, const SurfaceTessellation& mesh);

/// Debug dump: ring polylines as OBJ line objects, one object per radius.
void export_rings_obj(const MultiRing& mr, const std::string& path);

} // namespace elbp
