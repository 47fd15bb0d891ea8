#ifndef MODESHIFT_MODEL_CONFIG_HPP
#define MODESHIFT_MODEL_CONFIG_HPP

#include <string>
#include <vector>

#include "modeshift/draws.hpp"
#include "modeshift/params.hpp"

namespace modeshift {

enum class ModelKind { Mnl, Mixl, Hcm, Binary };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

/// Everything needed to estimate one model: kind, draws, optimizer
/// settings, and the free/fixed parameter layout.
struct ModelConfig {
    ModelKind kind = ModelKind::Mnl;
    DrawPlan plan;
    std::vector<std::string> random_coefs;  // mixed logit mixing set
    bool estimate_sigma_s = false;          // hybrid: free the structural error sd
    int max_iterations = 500;
    double gradient_tol = 1e-5;
    double divergence_bound = 30.0;  // |working value| beyond this flags divergence
    int threads = 1;

    struct ParamInit {
        std::string name;
        double value = 0.0;
        bool fixed = false;
    };
    /// Overrides applied on top of the kind's default parameter set.
    std::vector<ParamInit> param_overrides;
};

/// Default mixing set for the panel mixed logit.
const std::vector<std::string>& default_random_coefs();

/// Full parameter set for a model kind with default starting values
/// (0 for unconstrained coefficients, 0.5 for positive-constrained ones).
ParameterSet default_parameter_set(ModelKind kind, bool estimate_sigma_s = false,
                                   const std::vector<std::string>& random_coefs = {});

/// Defaults plus config overrides.
ParameterSet build_parameter_set(const ModelConfig& cfg);

}  // namespace modeshift

#endif
