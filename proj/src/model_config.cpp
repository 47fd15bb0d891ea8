#include "modeshift/model_config.hpp"

#include "modeshift/types.hpp"
#include "modeshift/utility.hpp"

namespace modeshift {

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Mnl: return "mnl";
        case ModelKind::Mixl: return "mixl";
        case ModelKind::Hcm: return "hcm";
        case ModelKind::Binary: return "binary";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "mnl") return ModelKind::Mnl;
    if (name == "mixl") return ModelKind::Mixl;
    if (name == "hcm") return ModelKind::Hcm;
    if (name == "binary" || name == "bikeability") return ModelKind::Binary;
    throw ConfigError("unknown model kind: " + name);
}

const std::vector<std::string>& default_random_coefs() {
    static const std::vector<std::string> kSet = {"B_cost", "B_activetime", "ASC_ab", "ASC_abpt"};
    return kSet;
}

namespace {
constexpr double kPositiveStart = 0.5;

void add_choice_coefs(ParameterSet& p) {
    for (int i = 0; i < kNumCoefs; ++i) {
        Coef c = static_cast<Coef>(i);
        bool is_asc = i <= static_cast<int>(Coef::AscAbpt);
        // Car constant is the normalization anchor.
        bool fixed = (c == Coef::AscCar);
        p.add(coef_param_name(c), 0.0, fixed, is_asc ? ParamRole::Asc : ParamRole::Beta);
    }
}

void add_structural_and_measurement(ParameterSet& p, bool estimate_sigma_s) {
    p.add("B_lv", 0.0, false, ParamRole::Beta);
    for (const char* name : {"coef_intercept", "coef_children", "coef_higher_ed",
                             "coef_highincome", "coef_hotsummer", "coef_white", "coef_woman",
                             "coef_young"}) {
        p.add(name, 0.0, false, ParamRole::Structural);
    }
    p.add("sigma_s", estimate_sigma_s ? kPositiveStart : 1.0, !estimate_sigma_s, ParamRole::Sd);
    // Reference indicator is fixed for identification: the latent variable
    // is a negative attitude while I10 is positively worded, so its
    // loading is pinned at -1 with unit scale.
    p.add("B_I10", -1.0, true, ParamRole::Loading);
    p.add("INTER_I10", 0.0, true, ParamRole::Intercept);
    p.add("SIGMA_I10", 1.0, true, ParamRole::Scale);
    p.add("B_I11", 0.0, false, ParamRole::Loading);
    p.add("INTER_I11", 0.0, false, ParamRole::Intercept);
    p.add("SIGMA_I11", kPositiveStart, false, ParamRole::Scale);
    p.add("delta1", kPositiveStart, false, ParamRole::Threshold);
    p.add("delta2", kPositiveStart, false, ParamRole::Threshold);
}

void add_bikeability_coefs(ParameterSet& p) {
    p.add("ASC", 0.0, false, ParamRole::Asc);
    for (const char* name : {"B_walk", "B_PT", "B_taxi", "B_time", "B_fulltime", "B_woman",
                             "B_older", "B_student", "B_higher_ed", "B_children",
                             "B_time_leisure", "B_harshwinter"}) {
        p.add(name, 0.0, false, ParamRole::Beta);
    }
}

}  // namespace

ParameterSet default_parameter_set(ModelKind kind, bool estimate_sigma_s,
                                   const std::vector<std::string>& random_coefs) {
    ParameterSet p;
    switch (kind) {
        case ModelKind::Mnl:
            add_choice_coefs(p);
            break;
        case ModelKind::Mixl: {
            add_choice_coefs(p);
            const auto& set = random_coefs.empty() ? default_random_coefs() : random_coefs;
            for (const auto& name : set) {
                if (!p.has(name)) throw ConfigError("random coefficient is not a utility parameter: " + name);
                p.add(name + "_sd", kPositiveStart, false, ParamRole::Sd);
            }
            break;
        }
        case ModelKind::Hcm:
            add_choice_coefs(p);
            add_structural_and_measurement(p, estimate_sigma_s);
            break;
        case ModelKind::Binary:
            add_bikeability_coefs(p);
            break;
    }
    return p;
}

ParameterSet build_parameter_set(const ModelConfig& cfg) {
    ParameterSet p = default_parameter_set(cfg.kind, cfg.estimate_sigma_s, cfg.random_coefs);
    for (const auto& init : cfg.param_overrides) {
        if (!p.has(init.name)) {
            throw ConfigError("unknown parameter in specification: " + init.name);
        }
        std::size_t i = p.index_of(init.name);
        if (param_role_positive(p.at(i).role) && !init.fixed && !(init.value > 0.0)) {
            throw ConfigError("starting value for " + init.name + " must be positive");
        }
        p.at(i).value = init.value;
        p.at(i).fixed = init.fixed;
    }
    return p;
}

}  // namespace modeshift
