#include "modeshift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "modeshift/csv.hpp"

namespace modeshift {

FoldPlan FoldPlan::make(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("cross-validation needs k >= 2");
    const std::size_t n = data.n_individuals();
    if (n < static_cast<std::size_t>(k)) {
        throw DataError("fewer individuals than folds");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates with an explicit mixer so splits are platform-stable.
    std::uint64_t state = mix64(seed ^ 0x5bf03f2ad5f1e4cdULL);
    for (std::size_t i = n - 1; i > 0; --i) {
        state = mix64(state);
        std::size_t j = static_cast<std::size_t>(state % (i + 1));
        std::swap(order[i], order[j]);
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) plan.assignment[order[i]] = static_cast<int>(i % k);
    return plan;
}

namespace {

CvStat aggregate(const std::vector<double>& values) {
    CvStat s;
    s.n_folds = static_cast<int>(values.size());
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (values.size() - 1));
    }
    return s;
}

}  // namespace

FoldMetrics evaluate_predictions(const Dataset& test,
                                 const std::vector<std::array<double, kNumModes>>& probs,
                                 bool expected_accuracy) {
    if (probs.size() != test.n_rows()) {
        throw DataError("prediction list is not aligned to the held-out rows");
    }
    std::array<double, kNumModes> correct{}, chosen_count{}, pred_share{};
    for (std::size_t r = 0; r < test.n_rows(); ++r) {
        const auto& row = test.rows[r];
        const auto& p = probs[r];
        int best = 0;
        double bestp = -1.0;
        for (int m = 0; m < kNumModes; ++m) {
            pred_share[m] += p[m];
            if (row.availability.has(static_cast<Mode>(m)) && p[m] > bestp) {
                bestp = p[m];
                best = m;
            }
        }
        int ch = static_cast<int>(row.chosen);
        chosen_count[ch] += 1.0;
        correct[ch] += expected_accuracy ? p[ch] : (best == ch ? 1.0 : 0.0);
    }
    const double n_test = static_cast<double>(test.n_rows());
    FoldMetrics fm;
    for (int m = 0; m < kNumModes; ++m) {
        if (chosen_count[m] > 0.0) fm.accuracy[m] = correct[m] / chosen_count[m];
        fm.share_mad[m] = std::fabs(pred_share[m] / n_test - chosen_count[m] / n_test) * 100.0;
    }
    return fm;
}

CvReport cv_evaluate(const Dataset& data, const ModelConfig& cfg, const FoldPlan& plan,
                     bool expected_accuracy) {
    if (plan.assignment.size() != data.n_individuals()) {
        throw ConfigError("fold plan is not aligned to the dataset");
    }
    std::array<std::vector<double>, kNumModes> acc_folds;
    std::array<std::vector<double>, kNumModes> mad_folds;
    std::vector<double> mean_acc_folds, std_acc_folds;

    for (int fold = 0; fold < plan.k; ++fold) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < data.n_individuals(); ++i) {
            (plan.assignment[i] == fold ? test_idx : train_idx).push_back(i);
        }
        Dataset train = data.subset(train_idx);
        Dataset test = data.subset(test_idx);
        if (train.n_rows() == 0 || test.n_rows() == 0) {
            throw DataError("fold " + std::to_string(fold) + " leaves an empty split");
        }

        EstimationResult est = estimate(train, cfg);
        PredictionModel model = PredictionModel::from_estimation(est);

        std::vector<std::array<double, kNumModes>> probs;
        probs.reserve(test.n_rows());
        for (const auto& row : test.rows) {
            probs.push_back(predict_trip(row, model, row.ab_cost_rate, row.ab_wait_h * 60.0));
        }
        FoldMetrics fm = evaluate_predictions(test, probs, expected_accuracy);

        std::vector<double> fold_accs;
        for (int m = 0; m < kNumModes; ++m) {
            if (fm.accuracy[m]) {
                acc_folds[m].push_back(*fm.accuracy[m]);
                fold_accs.push_back(*fm.accuracy[m]);
            }
            mad_folds[m].push_back(fm.share_mad[m]);
        }
        if (!fold_accs.empty()) {
            double mean = std::accumulate(fold_accs.begin(), fold_accs.end(), 0.0) /
                          fold_accs.size();
            mean_acc_folds.push_back(mean);
            if (fold_accs.size() > 1) {
                double ss = 0.0;
                for (double a : fold_accs) ss += (a - mean) * (a - mean);
                std_acc_folds.push_back(std::sqrt(ss / (fold_accs.size() - 1)));
            }
        }
    }

    CvReport rep;
    for (int m = 0; m < kNumModes; ++m) {
        if (!acc_folds[m].empty()) rep.accuracy[m] = aggregate(acc_folds[m]);
        if (!mad_folds[m].empty()) rep.share_mad[m] = aggregate(mad_folds[m]);
    }
    rep.mean_accuracy = aggregate(mean_acc_folds);
    rep.per_mode_std = aggregate(std_acc_folds);
    return rep;
}

double vot(const ParameterSet& params, const std::string& component) {
    double b_cost = params.get("B_cost");
    if (b_cost == 0.0) throw std::domain_error("value of time is undefined when B_cost is 0");
    std::string name;
    if (component == "time") name = "B_time";
    else if (component == "active") name = "B_activetime";
    else if (component == "wait") name = "B_wait";
    else throw ConfigError("unknown value-of-time component: " + component);
    return 10.0 * params.get(name) / b_cost;
}

namespace {

std::string stat_csv(const char* metric,
                     const std::array<std::optional<CvStat>, kNumModes>& per_mode,
                     const CvStat* mean_row, const CvStat* std_row) {
    CsvWriter w({"mode", std::string(metric) + "_mean", std::string(metric) + "_sd"});
    for (int m = 0; m < kNumModes; ++m) {
        if (per_mode[m]) {
            w.add_row({kModeNames[m], format_number(per_mode[m]->mean),
                       format_number(per_mode[m]->sd)});
        } else {
            w.add_row({kModeNames[m], "", ""});
        }
    }
    if (mean_row) {
        w.add_row({"mean_accuracy", format_number(mean_row->mean), format_number(mean_row->sd)});
    }
    if (std_row) {
        w.add_row({"per_mode_std", format_number(std_row->mean), format_number(std_row->sd)});
    }
    return w.to_string();
}

}  // namespace

std::string cv_accuracy_csv(const CvReport& report) {
    return stat_csv("accuracy", report.accuracy, &report.mean_accuracy, &report.per_mode_std);
}

std::string cv_share_mad_csv(const CvReport& report) {
    return stat_csv("share_mad", report.share_mad, nullptr, nullptr);
}

}  // namespace modeshift
