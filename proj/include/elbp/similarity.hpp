#pragma once

#include <string>
#include <vector>

#include "elbp/edgelbp.hpp"

namespace elbp {

/// Symmetric pairwise descriptor distances with a zero diagonal.
struct DistanceMatrix {
    std::vector<std::string> model_ids;
    std::string metric;
    std::vector<std::vector<double>> values;  // n x n

    int size() const { return static_cast<int>(model_ids.size()); }
    double at(int i, int j) const { return values[i][j]; }
};

/// sqrt(1 - BC) where BC sums sqrt(a*b) over cells of the descriptors
/// rescaled to unit total mass (the per-ring rows each carry mass up to 1, so
/// the raw cell sum is divided by the ring count). 0 for identical
/// full-coverage descriptors, 1 for disjoint supports; clamped into [0,1]
/// against float noise. Throws ParamMismatchError unless P, N_r and alpha
/// match.
double bhattacharyya_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b);

/// Symmetric histogram chi-squared: sum of (a-b)^2/(a+b) over cells, empty
/// cells (0/0) contributing 0. Throws ParamMismatchError.
double chi_squared_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b);

/// L2 norm of the cell-wise difference. Throws ParamMismatchError.
double euclidean_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b);

/// Dispatch by metric name: bhattacharyya, chi2 or euclidean.
double descriptor_distance(const EdgeLbpDescriptor& a, const EdgeLbpDescriptor& b,
                           const std::string& metric);

/// Full matrix over the descriptor list; each unordered pair evaluated once,
/// diagonal zero. model_ids must parallel descriptors.
DistanceMatrix distance_matrix(const std::vector<EdgeLbpDescriptor>& descriptors,
                               const std::vector<std::string>& model_ids,
                               const std::string& metric);

/// CSV with a header row/column of model ids; round-trips through load.
void save_distance_matrix_csv(const DistanceMatrix& dist, const std::string& path);
DistanceMatrix load_distance_matrix_csv(const std::string& path);

} // namespace elbp
