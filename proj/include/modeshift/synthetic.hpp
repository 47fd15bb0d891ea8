#ifndef MODESHIFT_SYNTHETIC_HPP
#define MODESHIFT_SYNTHETIC_HPP

#include "modeshift/dataset.hpp"
#include "modeshift/model_config.hpp"

namespace modeshift {

/// Deterministic synthetic stated-preference data generator: pivot-style
/// trips, demographic flags, grid-level scenario attributes, indicator
/// responses, and choices sampled from a generating model.
struct SyntheticSpec {
    std::size_t n_individuals = 200;
    int tasks_per_individual = 6;
    std::uint64_t seed = 7;
    ModelKind dgp = ModelKind::Mnl;             // choice-generating process
    ParameterSet params;                        // true parameters of the dgp
    std::vector<std::string> random_coefs;      // for a mixl dgp
    CostBook book;
};

Dataset make_synthetic(const SyntheticSpec& spec);

/// Reference hybrid-model coefficient estimates bundled with the toolkit
/// (threshold spacings and the structural error sd are toolkit defaults).
ParameterSet reference_hcm_params();

}  // namespace modeshift

#endif
