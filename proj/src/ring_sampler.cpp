#include "elbp/ring_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace elbp {

namespace {

constexpr double kTangencyEps = 1e-9;  // relative to the radius
constexpr double kRetryFactor = 1.0 + 1e-7;
constexpr int kMaxTangencyRetries = 6;

// Parameter of the sphere crossing on segment pa->pb, given that the endpoint
// distances straddle the radius (exactly one root lies in (0,1)).
double crossing_parameter(const Vec3& pa, const Vec3& pb, const Vec3& c, double radius) {
    const Vec3 d = pb - pa;
    const Vec3 w = pa - c;
    const double qa = d.squaredNorm();
    const double qb = 2.0 * w.dot(d);
    const double qc = w.squaredNorm() - radius * radius;
    double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0) disc = 0;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
    const double t1 = qa > 0 ? q / qa : -1.0;
    const double t2 = q != 0 ? qc / q : -1.0;
    if (t1 > 0 && t1 < 1) return t1;
    if (t2 > 0 && t2 < 1) return t2;
    // numerical corner: fall back to the straight-line distance interpolant
    const double da = w.norm(), db = (pb - c).norm();
    return std::clamp((radius - da) / (db - da), 1e-12, 1.0 - 1e-12);
}

RingPoint make_ring_point(const SurfaceTessellation& mesh, int edge, int center,
                          double radius, const VertexField* h) {
    const Edge& e = mesh.edges()[edge];
    const Vec3& pa = mesh.position(e.a);
    const Vec3& pb = mesh.position(e.b);
    const double t = crossing_parameter(pa, pb, mesh.position(center), radius);
    RingPoint p;
    p.position = pa + t * (pb - pa);
    p.host_edge = edge;
    p.edge_parameter = t;
    // a + t*(b-a) keeps constant fields bit-exact along the edge
    p.h_value = h ? (*h)[e.a] + t * ((*h)[e.b] - (*h)[e.a]) : 0.0;
    return p;
}

// Reverses the point order in place when the cyclic sequence runs clockwise
// around `normal` as seen from the center.
void orient_ccw(std::vector<RingPoint>& pts, const Vec3& center, const Vec3& normal) {
    double area2 = 0.0;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i) {
        const Vec3 u = pts[i].position - center;
        const Vec3 v = pts[(i + 1) % n].position - center;
        area2 += u.cross(v).dot(normal);
    }
    if (area2 < 0) std::reverse(pts.begin(), pts.end());
}

} // namespace

std::optional<RingPoint> edge_sphere_intersection(const SurfaceTessellation& mesh,
                                                  int edge, int center, double radius,
                                                  const VertexField* h) {
    if (edge < 0 || edge >= mesh.n_edges())
        throw IndexError("edge index " + std::to_string(edge) + " out of range");
    if (radius <= 0) throw Error("radius must be positive");

    const Edge& e = mesh.edges()[edge];
    const Vec3& c = mesh.position(center);
    const double da = (mesh.position(e.a) - c).norm();
    const double db = (mesh.position(e.b) - c).norm();
    if (std::abs(da - radius) < kTangencyEps * radius ||
        std::abs(db - radius) < kTangencyEps * radius)
        throw TangentEdgeError("edge " + std::to_string(edge) +
                               " touches the sphere at an endpoint");
    if ((da - radius) * (db - radius) >= 0) return std::nullopt;
    return make_ring_point(mesh, edge, center, radius, h);
}

RingExtractor::RingExtractor(const SurfaceTessellation& mesh) : mesh_(mesh) {
    dist_.resize(mesh.n_vertices());
    dist_epoch_.assign(mesh.n_vertices(), 0);
    face_session_.assign(mesh.n_faces(), 0);
    edge_attempt_.assign(mesh.n_edges(), 0);
    edge_slot_.resize(mesh.n_edges());
    face_chorded_.assign(mesh.n_faces(), 0);
}

double RingExtractor::distance(int v) {
    if (dist_epoch_[v] != center_serial_) {
        dist_epoch_[v] = center_serial_;
        dist_[v] = (mesh_.position(v) - mesh_.position(current_center_)).norm();
    }
    return dist_[v];
}

// Region growing for one radius. Faces connect across edges that reach inside
// the sphere; crossings found along the way become the raw ring points. The
// scan list is whatever the session left behind: the center's face star for a
// fresh session, otherwise the previous radius' halo (plus faces added by an
// aborted attempt, which stay valid because the region only grows with the
// radius).
void RingExtractor::grow(int center, double radius, const VertexField& h,
                         bool fresh_session) {
    if (fresh_session) {
        ++session_serial_;
        scan_list_.clear();
        for (int f : mesh_.vertex_faces(center)) {
            face_session_[f] = session_serial_;
            scan_list_.push_back(f);
        }
    }
    ++attempt_serial_;
    crossings_.clear();

    // deferred so the classification covers the whole grown region and does
    // not depend on the scan order
    bool boundary_crossing = false, boundary_inside = false;

    const double eps = kTangencyEps * radius;
    for (size_t qi = 0; qi < scan_list_.size(); ++qi) {
        const int f = scan_list_[qi];
        const auto& cycle = mesh_.faces()[f];
        const auto& fe = mesh_.face_edges(f);
        const int m = static_cast<int>(cycle.size());
        for (int i = 0; i < m; ++i) {
            const int e = fe[i];
            const double da = distance(cycle[i]);
            const double db = distance(cycle[(i + 1) % m]);
            if (std::abs(da - radius) < eps || std::abs(db - radius) < eps)
                throw TangentEdgeError("edge " + std::to_string(e) +
                                       " touches the sphere at an endpoint");

            const bool crossing = (da - radius) * (db - radius) < 0;
            if (crossing && edge_attempt_[e] != attempt_serial_) {
                edge_attempt_[e] = attempt_serial_;
                edge_slot_[e] = static_cast<int>(crossings_.size());
                crossings_.push_back(make_ring_point(mesh_, e, center, radius, &h));
            }
            if (da < radius || db < radius) {
                const auto& sides = mesh_.edge_faces(e);
                const int g = sides[0] == f ? sides[1] : sides[0];
                if (g < 0) {
                    boundary_crossing |= crossing;
                    boundary_inside |= !crossing;
                } else if (face_session_[g] != session_serial_) {
                    face_session_[g] = session_serial_;
                    scan_list_.push_back(g);
                }
            }
        }
    }

    if (boundary_crossing)
        throw OpenRingError("ring exits through the surface boundary");
    if (boundary_inside)
        throw MultiComponentBoundaryError("surface boundary lies inside the sphere");
}

// Chains the crossings of the current attempt into a single closed polyline.
// Within each face, chord segments join the crossing pairs that flank a
// maximal run of outside vertices (the circle arcs of the face-ball
// intersection); every crossing then joins exactly two chords, so the chords
// decompose into disjoint cycles. A valid ring is exactly one cycle.
Ring RingExtractor::chain_crossings(int center, double radius) {
    const int nc = static_cast<int>(crossings_.size());
    if (nc < 3)
        throw DegenerateRingError("ring has " + std::to_string(nc) + " points");

    chords_.clear();
    chord_of_.assign(nc, {-1, -1});
    auto add_chord_end = [&](int slot, int chord) {
        auto& ends = chord_of_[slot];
        if (ends[0] < 0)
            ends[0] = chord;
        else if (ends[1] < 0)
            ends[1] = chord;
        else
            throw Error("ring point with more than two chords");
    };

    for (int s = 0; s < nc; ++s) {
        for (int f : mesh_.edge_faces(crossings_[s].host_edge)) {
            if (f < 0) throw OpenRingError("ring exits through the surface boundary");
            if (face_chorded_[f] == attempt_serial_) continue;
            face_chorded_[f] = attempt_serial_;

            const auto& cycle = mesh_.faces()[f];
            const auto& fe = mesh_.face_edges(f);
            const int m = static_cast<int>(cycle.size());
            int positions[8];
            std::vector<int> spill;
            int np = 0;
            for (int i = 0; i < m; ++i) {
                if (edge_attempt_[fe[i]] != attempt_serial_) continue;
                if (np < 8)
                    positions[np] = i;
                else
                    spill.push_back(i);
                ++np;
            }
            auto pos_at = [&](int k) { return k < 8 ? positions[k] : spill[k - 8]; };
            for (int k = 0; k < np; ++k) {
                const int p = pos_at(k);
                const int q = pos_at((k + 1) % np);
                // vertices strictly between crossings p and q share a side;
                // the chord spans the outside runs
                if (distance(cycle[(p + 1) % m]) > radius) {
                    const int chord = static_cast<int>(chords_.size());
                    chords_.push_back({edge_slot_[fe[p]], edge_slot_[fe[q]]});
                    add_chord_end(edge_slot_[fe[p]], chord);
                    add_chord_end(edge_slot_[fe[q]], chord);
                }
            }
        }
    }

    for (int s = 0; s < nc; ++s)
        if (chord_of_[s][0] < 0 || chord_of_[s][1] < 0)
            throw Error("ring point with fewer than two chords");

    Ring ring;
    ring.center = center;
    ring.radius = radius;
    ring.points.reserve(nc);
    int s = 0, depart = chord_of_[0][0];
    while (true) {
        ring.points.push_back(crossings_[s]);
        const auto& ch = chords_[depart];
        const int next = ch[0] == s ? ch[1] : ch[0];
        if (next == 0) break;
        depart = chord_of_[next][0] == depart ? chord_of_[next][1] : chord_of_[next][0];
        s = next;
    }
    if (static_cast<int>(ring.points.size()) != nc)
        throw MultiComponentBoundaryError("region boundary has multiple loops");
    ring.closed = true;
    ring.start_index = 0;
    return ring;
}

Ring RingExtractor::extract_with_retry(int center, double radius, const VertexField& h,
                                       bool fresh_session) {
    if (center < 0 || center >= mesh_.n_vertices())
        throw IndexError("vertex index " + std::to_string(center) + " out of range");
    if (radius <= 0) throw Error("radius must be positive");
    if (current_center_ != center) {
        current_center_ = center;
        ++center_serial_;
    }

    double r = radius;
    for (int attempt = 0;; ++attempt) {
        try {
            grow(center, r, h, fresh_session && attempt == 0);
            Ring ring = chain_crossings(center, r);
            // keep only region faces that still reach outside the sphere:
            // they are the only ones a larger radius can newly cross
            halo_.clear();
            for (int f : scan_list_) {
                for (int v : mesh_.faces()[f]) {
                    if (distance(v) > r) {
                        halo_.push_back(f);
                        break;
                    }
                }
            }
            scan_list_.swap(halo_);
            return ring;
        } catch (const TangentEdgeError&) {
            if (attempt + 1 == kMaxTangencyRetries) throw;
            r *= kRetryFactor;
        }
    }
}

Ring RingExtractor::ring_extraction(int center, double radius, const VertexField& h) {
    return sort_ring(extract_with_retry(center, radius, h, true), mesh_);
}

MultiRing RingExtractor::multi_ring(int center, double r_max, int n_rings,
                                    const VertexField& h) {
    if (center < 0 || center >= mesh_.n_vertices())
        throw IndexError("vertex index " + std::to_string(center) + " out of range");
    if (r_max <= 0) throw Error("r_max must be positive");
    if (n_rings < 1) throw Error("n_rings must be at least 1");

    MultiRing mr;
    mr.center = center;
    try {
        for (int k = 1; k <= n_rings; ++k)
            mr.rings.push_back(
                extract_with_retry(center, r_max * k / n_rings, h, k == 1));

        Ring& outer = mr.rings.back();
        outer = sort_ring(std::move(outer), mesh_);
        const Vec3 p_tilde = outer.points[outer.start_index].position;
        const Vec3& c = mesh_.position(center);
        const Vec3 normal = vertex_normal(mesh_, center);
        for (int k = 0; k + 1 < n_rings; ++k) {
            auto& pts = mr.rings[k].points;
            orient_ccw(pts, c, normal);
            int closest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < pts.size(); ++i) {
                // exact distance ties break on the host edge so the start does
                // not depend on the chaining order
                const double d = (pts[i].position - p_tilde).squaredNorm();
                if (d < best ||
                    (d == best && pts[i].host_edge < pts[closest].host_edge)) {
                    best = d;
                    closest = static_cast<int>(i);
                }
            }
            std::rotate(pts.begin(), pts.begin() + closest, pts.end());
            mr.rings[k].start_index = 0;
        }
        mr.admissible = true;
    } catch (const Error&) {
        mr.admissible = false;  // geometric failure demotes, never escapes
    }
    return mr;
}

Ring ring_extraction(const SurfaceTessellation& mesh, int center, double radius,
                     const VertexField& h) {
    return RingExtractor(mesh).ring_extraction(center, radius, h);
}

MultiRing multi_ring(const SurfaceTessellation& mesh, int center, double r_max,
                     int n_rings, const VertexField& h) {
    return RingExtractor(mesh).multi_ring(center, r_max, n_rings, h);
}

Ring sort_ring(Ring ring, const SurfaceTessellation& mesh) {
    if (!ring.closed || ring.points.size() < 3)
        throw Error("sort_ring requires a closed ring");
    auto& pts = ring.points;
    const int n = static_cast<int>(pts.size());

    double max_h = -std::numeric_limits<double>::infinity();
    for (const RingPoint& p : pts) max_h = std::max(max_h, p.h_value);

    // summed in ascending order so the value only depends on the point set,
    // not on the caller's point order (exact h ties do occur on symmetric
    // surfaces and must resolve identically everywhere)
    auto spread_of = [&](int i) {
        std::vector<double> d(n);
        for (int j = 0; j < n; ++j) d[j] = (pts[i].position - pts[j].position).norm();
        std::sort(d.begin(), d.end());
        double sum = 0.0;
        for (double v : d) sum += v;
        return sum;
    };

    int start = -1;
    double best_spread = -1.0;
    bool tied = false;
    for (int i = 0; i < n; ++i) {
        if (pts[i].h_value != max_h) continue;
        if (start < 0) {
            start = i;
            continue;
        }
        if (!tied) {  // first tie: compute the spread of the incumbent
            tied = true;
            best_spread = spread_of(start);
        }
        const double spread = spread_of(i);
        if (spread > best_spread ||
            (spread == best_spread && pts[i].host_edge < pts[start].host_edge)) {
            best_spread = spread;
            start = i;
        }
    }

    const Vec3& c = mesh.position(ring.center);
    const Vec3 normal = vertex_normal(mesh, ring.center);
    double area2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec3 u = pts[i].position - c;
        const Vec3 v = pts[(i + 1) % n].position - c;
        area2 += u.cross(v).dot(normal);
    }
    if (area2 < 0) {
        std::reverse(pts.begin(), pts.end());
        start = n - 1 - start;
    }
    std::rotate(pts.begin(), pts.begin() + start, pts.end());
    ring.start_index = 0;
    return ring;
}

void export_rings_obj(const MultiRing& mr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    char buf[128];
    int base = 1;
    for (size_t k = 0; k < mr.rings.size(); ++k) {
        const auto& pts = mr.rings[k].points;
        out << "o ring_" << k + 1 << "\n";
        for (const RingPoint& p : pts) {
            std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p.position.x(),
                          p.position.y(), p.position.z());
            out << buf;
        }
        out << "l";
        for (size_t i = 0; i < pts.size(); ++i) out << ' ' << base + static_cast<int>(i);
        if (mr.rings[k].closed) out << ' ' << base;
        out << '\n';
        base += static_cast<int>(pts.size());
    }
}

} // namespace elbp
