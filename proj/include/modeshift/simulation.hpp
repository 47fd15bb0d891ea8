#ifndef MODESHIFT_SIMULATION_HPP
#define MODESHIFT_SIMULATION_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "modeshift/dataset.hpp"
#include "modeshift/estimation.hpp"

namespace modeshift {

/// Cost-rate x wait-time experiment grid (full cross product).
struct ScenarioGrid {
    std::vector<double> cost_levels = {0.1, 0.2, 0.4, 0.7, 1.5};  // USD/min
    std::vector<double> wait_levels_min = {1, 3, 5, 7, 10, 15};

    struct Cell {
        double cost_rate;
        double wait_min;
    };
    /// Cost-major enumeration of all cells.
    std::vector<Cell> cells() const;

    static ScenarioGrid parse(const std::string& text, const std::string& origin);
    static ScenarioGrid load(const std::string& path);
    void validate() const;
};

/// Estimated model packaged for prediction, with cached structural
/// coefficients and mixing layout.
struct PredictionModel {
    ModelKind kind = ModelKind::Mnl;
    ParameterSet params;
    DrawPlan plan;
    std::vector<std::string> random_coefs;
    CostBook book;
    int threads = 1;
    // Evaluate the hybrid model at the structural mean instead of
    // integrating over the latent distribution (faster, off by default).
    bool lv_point_estimate = false;

    static PredictionModel from_estimation(const EstimationResult& est, CostBook book = CostBook{});
};

/// Choice probabilities for one trip under a scenario cell. Availability
/// keeps the stated-preference structure (original mode plus the two
/// autonomous options). Mixed-logit and hybrid models average
/// probabilities over the individual's draw stream.
std::array<double, kNumModes> predict_trip(const ChoiceObservation& trip,
                                           const PredictionModel& model, double cost_rate,
                                           double wait_min);

/// Weighted mode shares over a trip population for one cell.
std::array<double, kNumModes> aggregate_shares(const std::vector<ChoiceObservation>& trips,
                                               const std::vector<double>& weights,
                                               const PredictionModel& model, double cost_rate,
                                               double wait_min);

inline constexpr int kNumOrigins = 5;  // walk..taxi

struct ShiftMatrix {
    // flows[origin][destination], normalized by total weight
    std::array<std::array<double, kNumModes>, kNumOrigins> flows{};
    std::array<double, kNumOrigins> origin_share{};
};

ShiftMatrix shift_matrix(const std::vector<ChoiceObservation>& trips,
                         const std::vector<double>& weights, const PredictionModel& model,
                         double cost_rate, double wait_min);

/// Convex combination of predicted bikeable shares with the unchanged
/// non-bikeable baseline.
std::array<double, kNumModes> combine_population(const std::array<double, kNumModes>& bikeable,
                                                 double bikeable_fraction,
                                                 const std::array<double, kNumModes>& nonbikeable);

struct ScenarioCell {
    double cost_rate = 0.0;
    double wait_min = 0.0;
    std::array<double, kNumModes> shares{};
    ShiftMatrix shifts;
};

std::vector<ScenarioCell> simulate_grid(const std::vector<ChoiceObservation>& trips,
                                        const std::vector<double>& weights,
                                        const PredictionModel& model, const ScenarioGrid& grid);

/// One trip per individual (its revealed trip re-parameterized per cell).
std::vector<ChoiceObservation> trips_from_dataset(const Dataset& data);

/// Align a weights map to a trip list; unweighted trips default to 1 only
/// when the map is empty, otherwise a missing id is a data error.
std::vector<double> align_weights(const std::vector<ChoiceObservation>& trips,
                                  const std::map<std::string, double>& weights);

std::string shares_csv(const std::vector<ScenarioCell>& cells);
std::string shifts_csv(const std::vector<ScenarioCell>& cells);

}  // namespace modeshift

#endif
