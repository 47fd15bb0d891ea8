#ifndef MODESHIFT_PARAMS_HPP
#define MODESHIFT_PARAMS_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace modeshift {

enum class ParamRole {
    Asc,
    Beta,
    Sd,          // mixing standard deviation, positive
    Structural,  // latent-variable structural coefficient
    Loading,     // measurement loading
    Intercept,   // measurement intercept
    Scale,       // measurement scale, positive
    Threshold,   // ordered-probit threshold spacing, positive
};

const char* param_role_name(ParamRole role);
ParamRole param_role_from_name(const std::string& name);

/// Positive-constrained roles are optimized through a log transform.
bool param_role_positive(ParamRole role);

struct Parameter {
    std::string name;
    double value = 0.0;
    bool fixed = false;
    ParamRole role = ParamRole::Beta;
    std::optional<double> robust_se;  // filled by estimation, natural scale
};

/// Ordered, name-unique collection of model parameters.
class ParameterSet {
  public:
    void add(const std::string& name, double value, bool fixed, ParamRole role);

    bool has(const std::string& name) const;
    /// Value lookup; missing name is a specification error naming it.
    double get(const std::string& name) const;
    void set_value(const std::string& name, double value);
    void set_fixed(const std::string& name, bool fixed);
    void set_robust_se(const std::string& name, double se);

    const Parameter& at(std::size_t idx) const { return params_[idx]; }
    Parameter& at(std::size_t idx) { return params_[idx]; }
    std::size_t index_of(const std::string& name) const;  // throws ConfigError
    std::size_t size() const { return params_.size(); }
    std::size_t n_free() const;

    std::vector<std::size_t> free_indices() const;

    auto begin() const { return params_.begin(); }
    auto end() const { return params_.end(); }

  private:
    std::vector<Parameter> params_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

}  // namespace modeshift

#endif
