#ifndef MODESHIFT_METRICS_HPP
#define MODESHIFT_METRICS_HPP

#include <optional>
#include <string>

#include "modeshift/estimation.hpp"
#include "modeshift/simulation.hpp"

namespace modeshift {

/// Seeded k-fold split by individual (all tasks of an individual share a
/// fold); fold sizes differ by at most one.
struct FoldPlan {
    int k = 5;
    std::uint64_t seed = 1;
    std::vector<int> assignment;  // aligned to Dataset::individuals

    static FoldPlan make(const Dataset& data, int k, std::uint64_t seed);
};

struct CvStat {
    double mean = 0.0;
    double sd = 0.0;
    int n_folds = 0;
};

struct CvReport {
    std::array<std::optional<CvStat>, kNumModes> accuracy;   // recall per chosen mode
    std::array<std::optional<CvStat>, kNumModes> share_mad;  // percentage points
    CvStat mean_accuracy;  // across modes, then folds
    CvStat per_mode_std;   // dispersion across modes, then folds
};

struct FoldMetrics {
    std::array<std::optional<double>, kNumModes> accuracy;  // absent when never chosen
    std::array<double, kNumModes> share_mad;                // percentage points
};

/// Metric arithmetic for one held-out set given per-task probability
/// vectors. Classification is argmax over the available alternatives;
/// `expected_accuracy` scores the chosen mode's probability instead.
FoldMetrics evaluate_predictions(const Dataset& test,
                                 const std::vector<std::array<double, kNumModes>>& probs,
                                 bool expected_accuracy = false);

/// Out-of-sample evaluation: per fold, estimate on the other folds and
/// classify held-out tasks by highest probability. A mode never chosen in
/// a fold has no defined accuracy there and is skipped, not zeroed.
CvReport cv_evaluate(const Dataset& data, const ModelConfig& cfg, const FoldPlan& plan,
                     bool expected_accuracy = false);

/// Marginal rate of substitution in USD/hour for component "time",
/// "active", or "wait" (x10 for the hours and tens-of-USD scaling).
double vot(const ParameterSet& params, const std::string& component);

std::string cv_accuracy_csv(const CvReport& report);
std::string cv_share_mad_csv(const CvReport& report);

}  // namespace modeshift

#endif
