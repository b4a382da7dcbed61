#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elbp/mesh.hpp"
#include "elbp/ring_sampler.hpp"

namespace elbp {

/// Binarization weights: a1 counts the set bits (codes 0..P), a2 weighs bit j
/// by 2^j with j starting at 1 (codes 0..2^P+...-2).
enum class AlphaKind { A1, A2 };

/// Maps "a1"/"a2" to the enum; throws Error otherwise.
AlphaKind alpha_from_name(const std::string& name);
std::string alpha_name(AlphaKind alpha);

/// The h values of one ring at P equidistant arc-length positions, walked in
/// ring order from the starting point.
struct RingSamples {
    std::vector<double> values;

    int p() const { return static_cast<int>(values.size()); }
};

struct DescriptorParams {
    int p = 15;               // samples per ring
    int n_rings = 5;          // number of concentric rings
    double r_max = 0.0;       // outermost radius, mm
    std::string h_name = "k2";
    std::string alpha = "a1";

    bool operator==(const DescriptorParams&) const = default;
};

/// Pattern signature of one surface: per ring, the distribution of vertex
/// codes, normalized by the total vertex count n_vertices (so each row sums
/// to n_admissible/n_vertices <= 1). a1 rows are dense with p+1 bins indexed
/// by code; a2 rows hold only the observed codes.
struct EdgeLbpDescriptor {
    DescriptorParams params;
    std::int64_t n_vertices = 0;
    std::int64_t n_admissible = 0;
    std::vector<std::vector<double>> rows;                       // alpha = a1
    std::vector<std::map<std::uint64_t, double>> sparse_rows;    // alpha = a2

    bool is_sparse() const { return alpha_from_name(params.alpha) == AlphaKind::A2; }

    bool operator==(const EdgeLbpDescriptor&) const = default;
};

/// P samples of h along the closed ring polyline, equidistant in arc length
/// starting at the ring's start point: sample k sits at arc (k-1)*L/P and the
/// first sample is the start point's h value exactly. Values between ring
/// points are linearly interpolated. Throws DegenerateRingError when the
/// polyline length is below 1e-12.
RingSamples ring_resampling(const Ring& ring, int p);

/// Binary code of one ring: bit j is 1 iff samples[j] >= pivot (equality
/// counts as 1). a1 sums the bits; a2 weighs bit j by 2^j, j = 1..P.
std::uint64_t elbp_code(const RingSamples& samples, double pivot, AlphaKind alpha);

/// Codes of one vertex, one per ring (innermost first), or nothing when the
/// vertex is not admissible.
std::optional<std::vector<std::uint64_t>> vertex_codes(RingExtractor& extractor,
                                                       int center,
                                                       const VertexField& h,
                                                       const DescriptorParams& params);

/// Full descriptor of a surface: per-vertex codes of every admissible vertex
/// accumulated into per-ring histograms, then normalized by n_vertices.
/// Accumulation is integer-count based and merged across workers, so the
/// result is bit-identical for any worker count. workers = 0 uses the
/// hardware concurrency. Throws NoAdmissibleVertexError when no vertex
/// yields a full ring set.
EdgeLbpDescriptor compute_descriptor(const SurfaceTessellation& mesh,
                                     const VertexField& h,
                                     const DescriptorParams& params,
                                     unsigned workers = 1);

/// Scale-invariant radius heuristic: one tenth of the radius of the disk with
/// the surface's area, 0.1*sqrt(area/pi).
double rmax_from_area(double area);

/// Edge-length radius heuristic c*edge_length; warns on stderr when c is
/// outside the recommended [10,20] band.
double rmax_from_edge_length(double edge_length, double c);

/// Self-describing text format; load(save(d)) == d bit-exactly.
void save_descriptor(const EdgeLbpDescriptor& desc, const std::string& path);
EdgeLbpDescriptor load_descriptor(const std::string& path);

/// Tidy CSV (ring,code,value) for external tooling.
void export_descriptor_csv(const EdgeLbpDescriptor& desc, const std::string& path);

} // namespace elbp
