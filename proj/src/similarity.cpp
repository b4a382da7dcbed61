#include "elbp/similarity.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elbp {

namespace {

void require_compatible(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b) {
    if (a.params.p != b.params.p || a.params.n_rings != b.params.n_rings ||
        a.params.alpha != b.params.alpha)
        throw ParamMismatchError("descriptors use different P/N_r/alpha settings");
}

// Applies f(cell_a, cell_b) to every cell where either descriptor is nonzero
// (dense layout: every cell).
template <class F>
void for_each_cell(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b, F&& f) {
    if (!a.is_sparse()) {
        for (size_t n = 0; n < a.rows.size(); ++n)
            for (size_t c = 0; c < a.rows[n].size(); ++c) f(a.rows[n][c], b.rows[n][c]);
        return;
    }
    for (size_t n = 0; n < a.sparse_rows.size(); ++n) {
        auto ia = a.sparse_rows[n].begin(), ea = a.sparse_rows[n].end();
        auto ib = b.sparse_rows[n].begin(), eb = b.sparse_rows[n].end();
        while (ia != ea || ib != eb) {
            if (ib == eb || (ia != ea && ia->first < ib->first)) {
                f(ia->second, 0.0);
                ++ia;
            } else if (ia == ea || ib->first < ia->first) {
                f(0.0, ib->second);
                ++ib;
            } else {
                f(ia->second, ib->second);
                ++ia;
                ++ib;
            }
        }
    }
}

} // namespace

double bhattacharyya_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b) {
    require_compatible(a, b);
    // identical histograms sit at distance zero exactly; the coefficient sum
    // below can round a few ulp under 1, so don't rely on it for that case
    if (a.rows == b.rows && a.sparse_rows == b.sparse_rows) return 0.0;
    double bc = 0.0;
    for_each_cell(a, b, [&](double x, double y) { bc += std::sqrt(x * y); });
    // rows each carry mass <= 1; rescale so full-coverage descriptors have
    // unit mass and BC lands in [0,1]
    bc /= a.params.n_rings;
    return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, bc)));
}

double chi_squared_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b) {
    require_compatible(a, b);
    double sum = 0.0;
    for_each_cell(a, b, [&](double x, double y) {
        const double denom = x + y;
        if (denom > 0) sum += (x - y) * (x - y) / denom;
    });
    return sum;
}

double euclidean_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b) {
    require_compatible(a, b);
    double sum = 0.0;
    for_each_cell(a, b, [&](double x, double y) { sum += (x - y) * (x - y); });
    return std::sqrt(sum);
}

double descriptor_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b,
                           const std::string& metric) {
    if (metric == "bhattacharyya") return bhattacharyya_distance(a, b);
    if (metric == "chi2") return chi_squared_distance(a, b);
    if (metric == "euclidean") return euclidean_distance(a, b);
    throw Error("unknown metric '" + metric +
                "' (expected bhattacharyya, chi2 or euclidean)");
}

DistanceMatrix distance_matrix(const std::vector<EdgeLbpDescriptor>& descriptors,
                               const std::vector<std::string>& model_ids,
                               const std::string& metric) {
    if (descriptors.size() != model_ids.size())
        throw IndexError("descriptor and id counts differ");
    if (descriptors.empty()) throw Error("distance matrix needs at least one descriptor");

    const int n = static_cast<int>(descriptors.size());
    DistanceMatrix dist;
    dist.model_ids = model_ids;
    dist.metric = metric;
    dist.values.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = descriptor_distance(descriptors[i], descriptors[j], metric);
            dist.values[i][j] = d;
            dist.values[j][i] = d;
        }
    return dist;
}

void save_distance_matrix_csv(const DistanceMatrix& dist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    char buf[48];
    out << "id";
    for (const auto& id : dist.model_ids) out << ',' << id;
    out << '\n';
    for (int i = 0; i < dist.size(); ++i) {
        out << dist.model_ids[i];
        for (int j = 0; j < dist.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", dist.values[i][j]);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write to '" + path + "' failed");
}

DistanceMatrix load_distance_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");

    DistanceMatrix dist;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    std::stringstream header(line);
    std::string cell;
    if (!std::getline(header, cell, ',') || cell != "id")
        throw ParseError("'" + path + "' is not a distance-matrix CSV");
    while (std::getline(header, cell, ',')) dist.model_ids.push_back(cell);

    const int n = dist.size();
    if (n == 0) throw ParseError("distance-matrix CSV lists no models");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        if (!std::getline(row, cell, ','))
            throw ParseError("malformed distance-matrix row");
        const int i = static_cast<int>(dist.values.size());
        if (i >= n || cell != dist.model_ids[i])
            throw ParseError("distance-matrix rows do not match the header ids");
        std::vector<double> vals;
        vals.reserve(n);
        while (std::getline(row, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("bad distance value '" + cell + "'");
            }
        }
        if (static_cast<int>(vals.size()) != n)
            throw ParseError("distance-matrix row has the wrong length");
        dist.values.push_back(std::move(vals));
    }
    if (static_cast<int>(dist.values.size()) != n)
        throw ParseError("distance-matrix CSV is missing rows");
    return dist;
}

} // namespace elbp
