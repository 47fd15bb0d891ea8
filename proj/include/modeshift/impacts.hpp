#ifndef MODESHIFT_IMPACTS_HPP
#define MODESHIFT_IMPACTS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "modeshift/simulation.hpp"

namespace modeshift {

/// Background-fleet emission factors in gCO2e per passenger-km. The
/// transit factor has no bundled default and
/// must come from configuration; the presets below carry toolkit-default
/// transit values.
struct EmissionScenario {
    std::string name = "custom";
    double car = 0.0;
    double taxi = 0.0;
    double bike = 0.0;
    double walk = 0.0;
    double transit = 0.0;

    void validate() const;

    /// Built-in background fleets: "high" (ICE car/taxi, e-bike),
    /// "low" (BEV car/taxi, regular bike), "mixed" (averages). The
    /// transit factors bundled here are toolkit defaults.
    static EmissionScenario preset(const std::string& name);

    double factor(Mode m) const;  // AB modes are not backed by this table
};

/// Autonomous-bicycle lifecycle emissions (gCO2e/pkm) by variant and wait
/// level; factors fall as wait rises because utilization improves.
class AbLifecycleTable {
  public:
    AbLifecycleTable() = default;
    AbLifecycleTable(std::vector<double> wait_levels_min,
                     std::map<std::string, std::vector<double>> variants);

    static AbLifecycleTable defaults();

    const std::vector<std::string> variant_names() const;
    bool has_variant(const std::string& name) const;

    /// Factor at a wait level; non-grid levels are linearly interpolated
    /// when `interpolate`, otherwise an error. Outside the grid range is
    /// always an error.
    double factor(const std::string& variant, double wait_min, bool interpolate = true) const;

  private:
    std::vector<double> waits_;
    std::map<std::string, std::vector<double>> variants_;
};

struct EmissionConfig {
    EmissionScenario background;
    AbLifecycleTable ab_table;
    bool interpolate = true;

    static EmissionConfig parse(const std::string& text, const std::string& origin);
    static EmissionConfig load(const std::string& path);
};

/// Expected emissions (g) of one trip given mode probabilities. The
/// combined mode splits trip distance between the bike legs (AB factor)
/// and the transit leg in proportion to their travel times.
double trip_emissions(const ChoiceObservation& trip,
                      const std::array<double, kNumModes>& mode_probabilities, double wait_min,
                      const EmissionScenario& scenario, const AbLifecycleTable& ab_table,
                      const std::string& variant = "Baseline", bool interpolate = true);

/// Weighted expected emissions over a population for one scenario cell;
/// the baseline uses each trip's original mode with probability 1.
double scenario_total(const std::vector<ChoiceObservation>& trips,
                      const std::vector<double>& weights, const PredictionModel& model,
                      double cost_rate, double wait_min, const EmissionScenario& scenario,
                      const AbLifecycleTable& ab_table, const std::string& variant = "Baseline",
                      bool interpolate = true);

double baseline_total(const std::vector<ChoiceObservation>& trips,
                      const std::vector<double>& weights, const EmissionScenario& scenario);

/// 100 * (with - baseline) / baseline; negative means improvement.
double relative_change(double total_with_ab, double total_baseline);

struct ImpactCell {
    double cost_rate;
    double wait_min;
    double percent_change;
};

/// Relative-change grid for one (background, variant) pair.
std::vector<ImpactCell> impact_grid(const std::vector<ChoiceObservation>& trips,
                                    const std::vector<double>& weights,
                                    const PredictionModel& model, const ScenarioGrid& grid,
                                    const EmissionScenario& scenario,
                                    const AbLifecycleTable& ab_table, const std::string& variant,
                                    bool interpolate = true);

std::string impacts_csv(
    const std::vector<std::tuple<std::string, std::string, std::vector<ImpactCell>>>& tables);

}  // namespace modeshift

#endif
