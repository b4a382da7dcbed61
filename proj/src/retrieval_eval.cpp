#include "elbp/retrieval_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace elbp {

GroundTruth GroundTruth::from_pairs(
    const std::vector<std::pair<std::string, std::string>>& labels) {
    GroundTruth gt;
    for (const auto& [id, cls] : labels) {
        if (id.empty() || cls.empty())
            throw ParseError("empty model id or class label");
        if (!gt.class_of.emplace(id, cls).second)
            throw ParseError("duplicate model id '" + id + "'");
        gt.model_ids.push_back(id);
        ++gt.class_sizes[cls];
    }
    return gt;
}

const std::string& GroundTruth::label(const std::string& id) const {
    const auto it = class_of.find(id);
    if (it == class_of.end()) throw Error("model '" + id + "' has no class label");
    return it->second;
}

GroundTruth load_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("labels row '" + line + "' is not id,class");
        std::string id = line.substr(0, comma);
        std::string cls = line.substr(comma + 1);
        if (id == "model_id" && cls == "class" && pairs.empty()) continue;  // header
        pairs.emplace_back(std::move(id), std::move(cls));
    }
    if (pairs.empty()) throw ParseError("'" + path + "' lists no labels");
    return GroundTruth::from_pairs(pairs);
}

RankLists rank_lists(const DistanceMatrix& dist) {
    const int n = dist.size();
    RankLists ranks;
    ranks.model_ids = dist.model_ids;
    ranks.order.resize(n);
    for (int i = 0; i < n; ++i) {
        auto& order = ranks.order[i];
        order.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (dist.values[i][a] != dist.values[i][b])
                return dist.values[i][a] < dist.values[i][b];
            return dist.model_ids[a] < dist.model_ids[b];
        });
    }
    return ranks;
}

namespace {

// Per-query view shared by the measures: the query's class size and the
// relevance of each ranked position.
struct QueryView {
    int class_size = 0;                  // |C|, including the query itself
    std::vector<char> relevant;          // per ranked position
};

QueryView query_view(const RankLists& ranks, const GroundTruth& gt, int q) {
    QueryView view;
    const std::string& cls = gt.label(ranks.model_ids[q]);
    view.class_size = gt.class_sizes.at(cls);
    view.relevant.reserve(ranks.order[q].size());
    for (int j : ranks.order[q])
        view.relevant.push_back(gt.label(ranks.model_ids[j]) == cls ? 1 : 0);
    return view;
}

} // namespace

NnFtSt nn_ft_st(const RankLists& ranks, const GroundTruth& gt) {
    const int n = static_cast<int>(ranks.model_ids.size());
    if (n < 2) throw Error("nn/ft/st need at least two models");
    NnFtSt out;
    for (int q = 0; q < n; ++q) {
        const QueryView view = query_view(ranks, gt, q);
        const int m = view.class_size - 1;
        if (m < 1)
            throw UndefinedForSingletonClassError(
                "class of '" + ranks.model_ids[q] + "' has a single member");
        const int list_len = static_cast<int>(view.relevant.size());
        int hits = 0, ft_hits = 0;
        const int st_k = std::min(2 * m, list_len);  // m <= list_len always
        for (int k = 0; k < st_k; ++k) {
            hits += view.relevant[k];
            if (k == m - 1) ft_hits = hits;
        }
        const int st_hits = hits;
        out.nn += view.relevant[0];
        out.ft += static_cast<double>(ft_hits) / m;
        out.st += static_cast<double>(st_hits) / m;
    }
    out.nn /= n;
    out.ft /= n;
    out.st /= n;
    return out;
}

PrecisionRecall precision_recall(const RankLists& ranks, const GroundTruth& gt) {
    const int n = static_cast<int>(ranks.model_ids.size());
    PrecisionRecall out;

    // per query: precision at its j-th relevant retrieval
    std::vector<std::vector<double>> prec_at_rel(n);
    int max_m = 0, scored = 0;
    double ap_sum = 0;
    for (int q = 0; q < n; ++q) {
        const QueryView view = query_view(ranks, gt, q);
        const int m = view.class_size - 1;
        if (m < 1) continue;  // singleton class: AP undefined
        max_m = std::max(max_m, m);
        auto& prec = prec_at_rel[q];
        prec.reserve(m);
        int hits = 0;
        for (size_t k = 0; k < view.relevant.size(); ++k) {
            if (!view.relevant[k]) continue;
            ++hits;
            prec.push_back(static_cast<double>(hits) / static_cast<double>(k + 1));
        }
        ap_sum += std::accumulate(prec.begin(), prec.end(), 0.0) /
                  static_cast<double>(m);
        ++scored;
    }
    out.map = scored ? ap_sum / scored : 0.0;

    for (int r = 1; r <= max_m; ++r) {
        const double recall = static_cast<double>(r) / max_m;
        double prec_sum = 0;
        int count = 0;
        for (int q = 0; q < n; ++q) {
            const auto& prec = prec_at_rel[q];
            if (prec.empty()) continue;
            const int m = static_cast<int>(prec.size());
            // precision once this query's recall first reaches `recall`
            const int j = std::min(m, std::max(1, static_cast<int>(
                                                      std::ceil(recall * m - 1e-12))));
            prec_sum += prec[j - 1];
            ++count;
        }
        if (count) out.curve.emplace_back(recall, prec_sum / count);
    }
    return out;
}

double e_measure(const RankLists& ranks, const GroundTruth& gt, int cutoff) {
    const int n = static_cast<int>(ranks.model_ids.size());
    if (cutoff < 1) throw Error("e-measure cutoff must be positive");
    double sum = 0;
    int scored = 0;
    for (int q = 0; q < n; ++q) {
        const QueryView view = query_view(ranks, gt, q);
        const int m = view.class_size - 1;
        if (m < 1) continue;
        const int window = std::min<int>(cutoff, static_cast<int>(view.relevant.size()));
        int hits = 0;
        for (int k = 0; k < window; ++k) hits += view.relevant[k];
        if (hits > 0) {
            const double precision = static_cast<double>(hits) / window;
            const double recall = static_cast<double>(hits) / m;
            sum += 2.0 * precision * recall / (precision + recall);
        }
        ++scored;
    }
    return scored ? sum / scored : 0.0;
}

double dcg(const RankLists& ranks, const GroundTruth& gt) {
    const int n = static_cast<int>(ranks.model_ids.size());
    double sum = 0;
    int scored = 0;
    for (int q = 0; q < n; ++q) {
        const QueryView view = query_view(ranks, gt, q);
        const int m = view.class_size - 1;
        if (m < 1) continue;
        double gain = view.relevant.empty() ? 0.0 : view.relevant[0];
        double ideal = 1.0;
        for (size_t k = 1; k < view.relevant.size(); ++k) {
            const double discount = 1.0 / std::log2(static_cast<double>(k + 1));
            if (view.relevant[k]) gain += discount;
            if (static_cast<int>(k) < m) ideal += discount;
        }
        sum += gain / ideal;
        ++scored;
    }
    return scored ? sum / scored : 0.0;
}

ConfusionMatrix confusion_matrix(const RankLists& ranks, const GroundTruth& gt) {
    ConfusionMatrix cm;
    for (const auto& [cls, size] : gt.class_sizes) cm.classes.push_back(cls);
    const int nc = static_cast<int>(cm.classes.size());
    cm.counts.assign(nc, std::vector<int>(nc, 0));
    const auto index_of = [&](const std::string& cls) {
        return static_cast<int>(std::lower_bound(cm.classes.begin(), cm.classes.end(),
                                                 cls) -
                                cm.classes.begin());
    };
    for (size_t q = 0; q < ranks.model_ids.size(); ++q) {
        if (ranks.order[q].empty()) throw Error("confusion matrix needs >= 2 models");
        const int qi = index_of(gt.label(ranks.model_ids[q]));
        const int ni = index_of(gt.label(ranks.model_ids[ranks.order[q][0]]));
        ++cm.counts[qi][ni];
    }
    return cm;
}

TierImage tier_image(const RankLists& ranks, const GroundTruth& gt) {
    const int n = static_cast<int>(ranks.model_ids.size());

    std::vector<int> by_class(n);
    std::iota(by_class.begin(), by_class.end(), 0);
    std::sort(by_class.begin(), by_class.end(), [&](int a, int b) {
        const std::string& ca = gt.label(ranks.model_ids[a]);
        const std::string& cb = gt.label(ranks.model_ids[b]);
        if (ca != cb) return ca < cb;
        return ranks.model_ids[a] < ranks.model_ids[b];
    });
    std::vector<int> grid_pos(n);  // model index -> column in the image
    for (int k = 0; k < n; ++k) grid_pos[by_class[k]] = k;

    TierImage image;
    image.ordered_ids.reserve(n);
    for (int k = 0; k < n; ++k) image.ordered_ids.push_back(ranks.model_ids[by_class[k]]);
    image.cells.assign(n, std::vector<TierLabel>(n, TierLabel::None));

    for (int q = 0; q < n; ++q) {
        const int m = gt.class_sizes.at(gt.label(ranks.model_ids[q])) - 1;
        const auto& order = ranks.order[q];
        auto& row = image.cells[grid_pos[q]];
        for (size_t k = 0; k < order.size(); ++k) {
            TierLabel label = TierLabel::None;
            const int pos = static_cast<int>(k) + 1;
            if (pos == 1)
                label = TierLabel::NN;
            else if (pos <= m)
                label = TierLabel::FT;
            else if (pos <= 2 * m)
                label = TierLabel::ST;
            else
                break;  // ranks only get worse
            row[grid_pos[order[k]]] = label;
        }
    }
    return image;
}

RetrievalReport evaluate(const DistanceMatrix& dist, const GroundTruth& gt,
                         int e_cutoff) {
    const RankLists ranks = rank_lists(dist);
    RetrievalReport report;
    const NnFtSt scores = nn_ft_st(ranks, gt);
    report.nn = scores.nn;
    report.ft = scores.ft;
    report.st = scores.st;
    const PrecisionRecall pr = precision_recall(ranks, gt);
    report.map = pr.map;
    report.pr_curve = pr.curve;
    report.e_measure = elbp::e_measure(ranks, gt, e_cutoff);
    report.dcg = elbp::dcg(ranks, gt);
    report.confusion = confusion_matrix(ranks, gt);
    report.tiers = tier_image(ranks, gt);
    return report;
}

void save_report_json(const RetrievalReport& report, const std::string& path) {
    nlohmann::json j;
    j["nn"] = report.nn;
    j["ft"] = report.ft;
    j["st"] = report.st;
    j["map"] = report.map;
    j["e_measure"] = report.e_measure;
    j["dcg"] = report.dcg;
    j["pr_curve"] = nlohmann::json::array();
    for (const auto& [recall, precision] : report.pr_curve)
        j["pr_curve"].push_back({recall, precision});
    j["classes"] = report.confusion.classes;
    j["confusion"] = report.confusion.counts;

    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

void save_confusion_csv(const ConfusionMatrix& cm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "class";
    for (const auto& cls : cm.classes) out << ',' << cls;
    out << '\n';
    for (size_t i = 0; i < cm.classes.size(); ++i) {
        out << cm.classes[i];
        for (int v : cm.counts[i]) out << ',' << v;
        out << '\n';
    }
}

void save_pr_curve_csv(const std::vector<std::pair<double, double>>& curve,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    char buf[48];
    out << "recall,precision\n";
    for (const auto& [recall, precision] : curve) {
        std::snprintf(buf, sizeof(buf), "%.17g", recall);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", precision);
        out << buf << '\n';
    }
}

void save_tier_image_ppm(const TierImage& image, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    const int n = static_cast<int>(image.ordered_ids.size());
    out << "P3\n" << n << ' ' << n << "\n255\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const char* rgb = "255 255 255";
            switch (image.cells[i][j]) {
                case TierLabel::NN: rgb = "0 0 0"; break;
                case TierLabel::FT: rgb = "255 0 0"; break;
                case TierLabel::ST: rgb = "0 0 255"; break;
                case TierLabel::None: break;
            }
            out << rgb << (j + 1 == n ? '\n' : ' ');
        }
    }
}

} // namespace elbp
