#ifndef MODESHIFT_WEIGHTING_HPP
#define MODESHIFT_WEIGHTING_HPP

#include <map>
#include <string>
#include <vector>

#include "modeshift/dataset.hpp"

namespace modeshift {

/// Units x categorical-variables table raked by IPF. Variables are
/// one-way margins (binary flags or labeled categories).
struct CategoricalSample {
    std::vector<std::string> unit_ids;
    std::vector<std::string> variables;
    // category label per unit per variable: cells[unit][var]
    std::vector<std::vector<std::string>> cells;

    std::size_t n_units() const { return unit_ids.size(); }
    std::size_t var_index(const std::string& name) const;  // throws ConfigError
};

/// Target proportions per variable. Loaded proportions are validated to
/// sum to ~1 per variable and normalized exactly; a binary variable may
/// be given as a single `1 = p` line with the complement implied.
struct MarginTargets {
    // variable -> (category -> proportion); ordered for stable output
    std::map<std::string, std::map<std::string, double>> targets;

    static MarginTargets parse(const std::string& text, const std::string& origin);
    static MarginTargets load(const std::string& path);
    void validate_and_normalize();
};

struct IpfResult {
    std::vector<double> weights;  // mean 1 after convergence
    int sweeps = 0;
    bool converged = false;
    double max_deviation = 0.0;
};

/// Iterative proportional fitting: cyclic per-variable rescaling until
/// every weighted margin matches its target within tol. A positive
/// trim_quantile caps converged weights at that quantile (then
/// renormalizes to mean 1); trimming trades margin fidelity for
/// stability on sparse cells and is off by default.
IpfResult ipf_fit(const CategoricalSample& sample, const MarginTargets& targets,
                  double tol = 1e-6, int max_iter = 200, double trim_quantile = 0.0);

/// Weighted category proportions for one variable.
std::map<std::string, double> weighted_proportions(const CategoricalSample& sample,
                                                   const std::vector<double>& weights,
                                                   const std::string& variable);

/// Max absolute weighted-margin deviation from target, per variable.
std::map<std::string, double> margin_report(const CategoricalSample& sample,
                                            const std::vector<double>& weights,
                                            const MarginTargets& targets);

/// One unit per individual with the raking variables of the survey
/// sample: purpose, mode (origin), and the socio flags.
CategoricalSample sample_from_dataset(const Dataset& data);

/// weights CSV (individual_id, weight) helpers.
void write_weights_csv(const std::string& path, const std::vector<std::string>& ids,
                       const std::vector<double>& weights);
std::map<std::string, double> load_weights_csv(const std::string& path);

}  // namespace modeshift

#endif
