#include "elbp/edgelbp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace elbp {

AlphaKind alpha_from_name(const std::string& name) {
    if (name == "a1") return AlphaKind::A1;
    if (name == "a2") return AlphaKind::A2;
    throw Error("unknown alpha weight '" + name + "' (expected a1 or a2)");
}

std::string alpha_name(AlphaKind alpha) {
    return alpha == AlphaKind::A1 ? "a1" : "a2";
}

RingSamples ring_resampling(const Ring& ring, int p) {
    if (!ring.closed) throw Error("ring_resampling requires a closed ring");
    if (p < 3) throw Error("p must be at least 3");
    const auto& pts = ring.points;
    const int n = static_cast<int>(pts.size());
    if (n < 3) throw DegenerateRingError("ring has fewer than 3 points");

    // cumulative arc length from the start point, walking in ring order
    std::vector<double> cum(n + 1);
    cum[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& a = pts[(ring.start_index + i) % n];
        const auto& b = pts[(ring.start_index + i + 1) % n];
        cum[i + 1] = cum[i] + (a.position - b.position).norm();
    }
    const double total = cum[n];
    if (total < 1e-12) throw DegenerateRingError("ring polyline has zero length");

    RingSamples s;
    s.values.resize(p);
    s.values[0] = pts[ring.start_index].h_value;  // first sample is exact
    int seg = 0;
    for (int k = 1; k < p; ++k) {
        const double target = k * total / p;
        while (seg + 1 < n && cum[seg + 1] < target) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0 ? (target - cum[seg]) / len : 0.0;
        const double ha = pts[(ring.start_index + seg) % n].h_value;
        const double hb = pts[(ring.start_index + seg + 1) % n].h_value;
        s.values[k] = ha + t * (hb - ha);
    }
    return s;
}

std::uint64_t elbp_code(const RingSamples& samples, double pivot, AlphaKind alpha) {
    const int p = samples.p();
    if (alpha == AlphaKind::A2 && p > 63)
        throw Error("a2 codes support at most 63 samples");
    std::uint64_t code = 0;
    for (int j = 1; j <= p; ++j) {
        if (samples.values[j - 1] >= pivot)  // equality counts as 1
            code += alpha == AlphaKind::A1 ? 1 : std::uint64_t{1} << j;
    }
    return code;
}

std::optional<std::vector<std::uint64_t>> vertex_codes(RingExtractor& extractor,
                                                       int center,
                                                       const VertexField& h,
                                                       const DescriptorParams& params) {
    const MultiRing mr =
        extractor.multi_ring(center, params.r_max, params.n_rings, h);
    if (!mr.admissible) return std::nullopt;

    const AlphaKind alpha = alpha_from_name(params.alpha);
    std::vector<std::uint64_t> codes;
    codes.reserve(mr.rings.size());
    try {
        for (const Ring& ring : mr.rings)
            codes.push_back(elbp_code(ring_resampling(ring, params.p), h[center], alpha));
    } catch (const DegenerateRingError&) {
        return std::nullopt;  // zero-length polyline: treat as non-admissible
    }
    return codes;
}

EdgeLbpDescriptor compute_descriptor(const SurfaceTessellation& mesh,
                                     const VertexField& h,
                                     const DescriptorParams& params,
                                     unsigned workers) {
    const int nv = mesh.n_vertices();
    if (h.size() != nv) throw IndexError("field length does not match the mesh");
    if (params.p < 3) throw Error("p must be at least 3");
    if (params.n_rings < 1) throw Error("n_rings must be at least 1");
    if (params.r_max <= 0) throw Error("r_max must be positive");
    const AlphaKind alpha = alpha_from_name(params.alpha);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(nv));

    // integer counts per worker, merged before the single normalization, so
    // the result does not depend on the worker count
    struct Partial {
        std::vector<std::vector<std::int64_t>> dense;
        std::vector<std::map<std::uint64_t, std::int64_t>> sparse;
        std::int64_t admissible = 0;
        std::exception_ptr failure;
    };
    std::vector<Partial> partials(workers);

    auto run_range = [&](int lo, int hi, Partial& out) {
        try {
            if (alpha == AlphaKind::A1)
                out.dense.assign(params.n_rings,
                                 std::vector<std::int64_t>(params.p + 1, 0));
            else
                out.sparse.assign(params.n_rings, {});
            RingExtractor extractor(mesh);
            for (int v = lo; v < hi; ++v) {
                const auto codes = vertex_codes(extractor, v, h, params);
                if (!codes) continue;
                ++out.admissible;
                for (int n = 0; n < params.n_rings; ++n) {
                    if (alpha == AlphaKind::A1)
                        ++out.dense[n][(*codes)[n]];
                    else
                        ++out.sparse[n][(*codes)[n]];
                }
            }
        } catch (...) {
            out.failure = std::current_exception();
        }
    };

    if (workers <= 1) {
        run_range(0, nv, partials[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const int lo = static_cast<int>(std::int64_t{nv} * w / workers);
            const int hi = static_cast<int>(std::int64_t{nv} * (w + 1) / workers);
            pool.emplace_back(run_range, lo, hi, std::ref(partials[w]));
        }
        for (auto& t : pool) t.join();
    }
    for (const Partial& part : partials)
        if (part.failure) std::rethrow_exception(part.failure);

    EdgeLbpDescriptor desc;
    desc.params = params;
    desc.n_vertices = nv;
    for (const Partial& part : partials) desc.n_admissible += part.admissible;
    if (desc.n_admissible == 0)
        throw NoAdmissibleVertexError("no vertex has a full set of closed rings"
                                      " (r_max too large for this surface?)");

    const double scale = static_cast<double>(nv);
    if (alpha == AlphaKind::A1) {
        desc.rows.assign(params.n_rings, std::vector<double>(params.p + 1, 0.0));
        for (int n = 0; n < params.n_rings; ++n)
            for (int b = 0; b <= params.p; ++b) {
                std::int64_t count = 0;
                for (const Partial& part : partials) count += part.dense[n][b];
                desc.rows[n][b] = static_cast<double>(count) / scale;
            }
    } else {
        desc.sparse_rows.assign(params.n_rings, {});
        for (int n = 0; n < params.n_rings; ++n) {
            std::map<std::uint64_t, std::int64_t> merged;
            for (const Partial& part : partials)
                for (const auto& [code, count] : part.sparse[n]) merged[code] += count;
            for (const auto& [code, count] : merged)
                desc.sparse_rows[n][code] = static_cast<double>(count) / scale;
        }
    }
    return desc;
}

double rmax_from_area(double area) {
    if (area <= 0) throw Error("surface area must be positive");
    return 0.1 * std::sqrt(area / M_PI);
}

double rmax_from_edge_length(double edge_length, double c) {
    if (edge_length <= 0) throw Error("edge length must be positive");
    if (c < 10.0 || c > 20.0)
        std::cerr << "warning: edge-length factor " << c
                  << " is outside the recommended [10,20] band\n";
    return c * edge_length;
}

namespace {

std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

void save_descriptor(const EdgeLbpDescriptor& desc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "edgelbp 1\n";
    out << "p " << desc.params.p << "\n";
    out << "n_rings " << desc.params.n_rings << "\n";
    out << "r_max " << fmt17(desc.params.r_max) << "\n";
    out << "h " << desc.params.h_name << "\n";
    out << "alpha " << desc.params.alpha << "\n";
    out << "n_vertices " << desc.n_vertices << "\n";
    out << "n_admissible " << desc.n_admissible << "\n";
    if (!desc.is_sparse()) {
        for (int n = 0; n < static_cast<int>(desc.rows.size()); ++n) {
            out << "row " << n;
            for (double v : desc.rows[n]) out << ' ' << fmt17(v);
            out << '\n';
        }
    } else {
        for (int n = 0; n < static_cast<int>(desc.sparse_rows.size()); ++n)
            for (const auto& [code, value] : desc.sparse_rows[n])
                out << "cell " << n << ' ' << code << ' ' << fmt17(value) << '\n';
    }
    if (!out) throw Error("write to '" + path + "' failed");
}

EdgeLbpDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");

    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "edgelbp" || version != 1)
        throw ParseError("'" + path + "' is not an edgelbp descriptor file");

    EdgeLbpDescriptor desc;
    std::string key;
    while (in >> key) {
        if (key == "p") in >> desc.params.p;
        else if (key == "n_rings") in >> desc.params.n_rings;
        else if (key == "r_max") in >> desc.params.r_max;
        else if (key == "h") in >> desc.params.h_name;
        else if (key == "alpha") in >> desc.params.alpha;
        else if (key == "n_vertices") in >> desc.n_vertices;
        else if (key == "n_admissible") in >> desc.n_admissible;
        else if (key == "row") {
            int n = -1;
            in >> n;
            if (n < 0 || n >= desc.params.n_rings)
                throw ParseError("descriptor row index out of range");
            if (desc.rows.empty())
                desc.rows.assign(desc.params.n_rings,
                                 std::vector<double>(desc.params.p + 1, 0.0));
            for (double& v : desc.rows[n]) in >> v;
        } else if (key == "cell") {
            int n = -1;
            std::uint64_t code = 0;
            double value = 0;
            in >> n >> code >> value;
            if (n < 0 || n >= desc.params.n_rings)
                throw ParseError("descriptor cell ring index out of range");
            if (desc.sparse_rows.empty()) desc.sparse_rows.assign(desc.params.n_rings, {});
            desc.sparse_rows[n][code] = value;
        } else {
            throw ParseError("unknown descriptor record '" + key + "'");
        }
        if (in.fail()) throw ParseError("malformed descriptor record in '" + path + "'");
    }
    if (alpha_from_name(desc.params.alpha) == AlphaKind::A1 && desc.rows.empty())
        desc.rows.assign(desc.params.n_rings,
                         std::vector<double>(desc.params.p + 1, 0.0));
    if (alpha_from_name(desc.params.alpha) == AlphaKind::A2 && desc.sparse_rows.empty())
        desc.sparse_rows.assign(desc.params.n_rings, {});
    return desc;
}

void export_descriptor_csv(const EdgeLbpDescriptor& desc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "ring,code,value\n";
    if (!desc.is_sparse()) {
        for (int n = 0; n < static_cast<int>(desc.rows.size()); ++n)
            for (int b = 0; b < static_cast<int>(desc.rows[n].size()); ++b)
                out << n << ',' << b << ',' << fmt17(desc.rows[n][b]) << '\n';
    } else {
        for (int n = 0; n < static_cast<int>(desc.sparse_rows.size()); ++n)
            for (const auto& [code, value] : desc.sparse_rows[n])
                out << n << ',' << code << ',' << fmt17(value) << '\n';
    }
}

} // namespace elbp
