#include "modeshift/params.hpp"

#include "modeshift/types.hpp"

namespace modeshift {

namespace {
constexpr const char* kRoleNames[] = {"asc",     "beta",      "sd",    "structural",
                                      "loading", "intercept", "scale", "threshold"};
}

const char* param_role_name(ParamRole role) { return kRoleNames[static_cast<int>(role)]; }

ParamRole param_role_from_name(const std::string& name) {
    for (int i = 0; i < 8; ++i) {
        if (name == kRoleNames[i]) return static_cast<ParamRole>(i);
    }
    throw ConfigError("unknown parameter role: " + name);
}

bool param_role_positive(ParamRole role) {
    return role == ParamRole::Sd || role == ParamRole::Scale || role == ParamRole::Threshold;
}

void ParameterSet::add(const std::string& name, double value, bool fixed, ParamRole role) {
    if (by_name_.count(name)) throw ConfigError("duplicate parameter name: " + name);
    by_name_[name] = params_.size();
    params_.push_back(Parameter{name, value, fixed, role, std::nullopt});
}

bool ParameterSet::has(const std::string& name) const { return by_name_.count(name) != 0; }

std::size_t ParameterSet::index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw ConfigError("parameter not defined: " + name);
    return it->second;
}

double ParameterSet::get(const std::string& name) const { return params_[index_of(name)].value; }

void ParameterSet::set_value(const std::string& name, double value) {
    params_[index_of(name)].value = value;
}

void ParameterSet::set_fixed(const std::string& name, bool fixed) {
    params_[index_of(name)].fixed = fixed;
}

void ParameterSet::set_robust_se(const std::string& name, double se) {
    params_[index_of(name)].robust_se = se;
}

std::size_t ParameterSet::n_free() const {
    std::size_t n = 0;
    for (const auto& p : params_)
        if (!p.fixed) ++n;
    return n;
}

std::vector<std::size_t> ParameterSet::free_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (!params_[i].fixed) idx.push_back(i);
    return idx;
}

}  // namespace modeshift
