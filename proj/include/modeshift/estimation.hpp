#ifndef MODESHIFT_ESTIMATION_HPP
#define MODESHIFT_ESTIMATION_HPP

#include <string>

#include "modeshift/dataset.hpp"
#include "modeshift/likelihood.hpp"
#include "modeshift/model_config.hpp"

namespace modeshift {

struct FitStatistics {
    double ll0 = 0.0;
    double ll = 0.0;
    std::size_t k_free = 0;
    std::size_t n_obs = 0;
    double rho_bar_sq = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

/// AIC = 2K - 2LL, BIC = K ln(n) - 2LL, adjusted rho-square
/// 1 - (LL - K)/LL0.
FitStatistics fit_statistics(double ll, double ll0, std::size_t k_free, std::size_t n_obs);

struct EstimationResult {
    ModelKind kind = ModelKind::Mnl;
    ParameterSet params;  // robust_se filled on free parameters
    FitStatistics fit;
    std::size_t n_individuals = 0;
    bool converged = false;
    int iterations = 0;
    double gradient_inf_norm = 0.0;
    std::string message;
    DrawPlan plan;
    std::vector<std::string> random_coefs;
    bool estimate_sigma_s = false;

    std::string to_json() const;
    static EstimationResult from_json_text(const std::string& text);
    static EstimationResult load(const std::string& path);
    void save(const std::string& path) const;
};

/// Maximum-likelihood estimation over any LogLikelihood objective:
/// quasi-Newton search, robust clustered (sandwich) standard errors, and
/// fit statistics against the equal-shares null.
EstimationResult estimate(LogLikelihood& lik, const ModelConfig& cfg);

/// Estimation entry point for the choice kinds (mnl, mixl, hcm).
EstimationResult estimate(const Dataset& data, const ModelConfig& cfg);

}  // namespace modeshift

#endif
