#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elbp/similarity.hpp"

namespace elbp {

/// Class labels for a model set. Classes of size 1 are allowed at
/// construction; measures that are undefined for them either throw
/// (nn_ft_st) or skip those queries (mAP, DCG, e-measure).
struct GroundTruth {
    std::vector<std::string> model_ids;            // insertion order
    std::map<std::string, std::string> class_of;   // id -> label
    std::map<std::string, int> class_sizes;        // label -> member count

    /// Builds from (id, label) pairs; throws ParseError on duplicate ids.
    static GroundTruth from_pairs(
        const std::vector<std::pair<std::string, std::string>>& labels);

    const std::string& label(const std::string& id) const;
};

/// CSV with rows `model_id,class` (a header row with exactly these names is
/// optional).
GroundTruth load_labels_csv(const std::string& path);

/// Retrieval order per query: for each model, every other model sorted by
/// ascending distance, ties broken lexicographically by model id.
struct RankLists {
    std::vector<std::string> model_ids;
    std::vector<std::vector<int>> order;  // per query, indices into model_ids
};

RankLists rank_lists(const DistanceMatrix& dist);

struct NnFtSt {
    double nn = 0, ft = 0, st = 0;
};

/// Fractions of same-class models within the top k retrievals, averaged over
/// queries: k = 1 for NN, |C|-1 for the first tier and 2(|C|-1) for the
/// second tier (both tiers divide by |C|-1). Throws
/// UndefinedForSingletonClassError when any query's class has a single
/// member.
NnFtSt nn_ft_st(const RankLists& ranks, const GroundTruth& gt);

struct PrecisionRecall {
    std::vector<std::pair<double, double>> curve;  // (recall, precision)
    double map = 0;                                // mean raw average precision
};

/// Raw (uninterpolated) average precision per query, averaged into mAP, plus
/// the precision-vs-recall curve averaged over queries at uniform recall
/// levels r/(|C|-1). Queries whose class is a singleton are skipped.
PrecisionRecall precision_recall(const RankLists& ranks, const GroundTruth& gt);

/// Harmonic mean of precision and recall over the top min(cutoff, n-1)
/// retrievals, averaged over queries; 0 when nothing relevant is retrieved
/// in the window. Singleton-class queries are skipped.
double e_measure(const RankLists& ranks, const GroundTruth& gt, int cutoff = 32);

/// Normalized discounted cumulative gain: gain 1 for same-class retrievals,
/// position 1 undiscounted, position k >= 2 discounted by 1/log2(k),
/// normalized by the ideal ordering and averaged over queries.
/// Singleton-class queries are skipped.
double dcg(const RankLists& ranks, const GroundTruth& gt);

/// Nearest-neighbor classification counts; classes sorted lexicographically.
/// counts[i][j] = queries of class i whose top retrieval is of class j.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<int>> counts;
};

ConfusionMatrix confusion_matrix(const RankLists& ranks, const GroundTruth& gt);

enum class TierLabel : unsigned char { None, NN, FT, ST };

/// Per query row, every model cell labelled by the rank threshold it falls
/// in: the top retrieval is NN, the next up to |C|-1 are FT, up to 2(|C|-1)
/// ST, the rest (and the diagonal) None. Rows and columns are ordered by
/// class, then id.
struct TierImage {
    std::vector<std::string> ordered_ids;
    std::vector<std::vector<TierLabel>> cells;
};

TierImage tier_image(const RankLists& ranks, const GroundTruth& gt);

/// Everything above in one pass over one distance matrix.
struct RetrievalReport {
    double nn = 0, ft = 0, st = 0;
    double map = 0;
    double e_measure = 0;
    double dcg = 0;
    std::vector<std::pair<double, double>> pr_curve;
    ConfusionMatrix confusion;
    TierImage tiers;
};

RetrievalReport evaluate(const DistanceMatrix& dist, const GroundTruth& gt,
                         int e_cutoff = 32);

/// Report artifacts: scalars + PR curve as JSON, confusion matrix and PR
/// curve as CSV, tier image as an ASCII portable pixmap (NN black, FT red,
/// ST blue, rest white).
void save_report_json(const RetrievalReport& report, const std::string& path);
void save_confusion_csv(const ConfusionMatrix& cm, const std::string& path);
void save_pr_curve_csv(const std::vector<std::pair<double, double>>& curve,
                       const std::string& path);
void save_tier_image_ppm(const TierImage& image, const std::string& path);

} // namespace elbp
