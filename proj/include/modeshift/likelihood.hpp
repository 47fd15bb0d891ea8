#ifndef MODESHIFT_LIKELIHOOD_HPP
#define MODESHIFT_LIKELIHOOD_HPP

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "modeshift/dataset.hpp"
#include "modeshift/model_config.hpp"
#include "modeshift/utility.hpp"

namespace modeshift {

/// Multinomial logit probabilities over the available alternatives
/// (softmax with max subtraction; unavailable entries exactly zero).
std::array<double, kNumModes> mnl_prob(const std::array<std::optional<double>, kNumModes>& utilities);

/// Latent attitude from demographics: intercept + sum of coefficients
/// times dummies + sigma_s * omega.
double structural_lv(const Sociodemographics& socio, const ParameterSet& params, double omega);

/// Bounded influence of the latent attitude on the autonomous-bicycle
/// utilities: -B_lv * tanh(LV).
double lv_effect(double lv, double b_lv);

/// Ordered-probit category probability with symmetric thresholds
/// (-d1-d2, -d1, d1, d1+d2) on the latent response alpha + lambda*LV.
double ordered_probit_prob(int y, double lv, double loading, double intercept, double scale,
                           double delta1, double delta2);

/// Abstract maximum-likelihood objective over the free parameters in
/// unconstrained (working) space. Positive-constrained parameters are
/// log-transformed. Evaluation is deterministic for a fixed plan and
/// bit-stable across thread counts (fixed-order reduction).
class LogLikelihood {
  public:
    virtual ~LogLikelihood() = default;

    virtual const ParameterSet& parameter_template() const = 0;
    virtual std::size_t n_obs() const = 0;
    virtual std::size_t n_clusters() const = 0;
    virtual double null_loglik() const = 0;

    /// Log-likelihood at `w`; optionally fills the working-space gradient
    /// and the per-cluster score matrix (n_clusters x n_free, row-major).
    virtual double eval(const std::vector<double>& w, std::vector<double>* grad,
                        std::vector<double>* scores) const = 0;

    std::size_t n_free() const { return parameter_template().n_free(); }
    std::vector<double> initial_working() const;
    ParameterSet params_from_working(const std::vector<double>& w) const;
    std::vector<double> working_from_params(const ParameterSet& p) const;
};

/// Joint likelihood of the choice kinds (mnl, mixl, hcm).
class ChoiceLikelihood : public LogLikelihood {
  public:
    ChoiceLikelihood(const Dataset& data, const ModelConfig& cfg, ParameterSet params);
    ~ChoiceLikelihood() override;

    const ParameterSet& parameter_template() const override;
    std::size_t n_obs() const override;
    std::size_t n_clusters() const override;
    double null_loglik() const override;
    double eval(const std::vector<double>& w, std::vector<double>* grad,
                std::vector<double>* scores) const override;

    /// First data row whose choice probability is not finite at the
    /// supplied parameters, if any (start-value diagnostics).
    std::optional<std::size_t> first_degenerate_row(const ParameterSet& p) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Spec-level operations: direct likelihood evaluation at a parameter set.
double mnl_loglik(const Dataset& data, const ParameterSet& params, int threads = 1);
double mixl_loglik(const Dataset& data, const ParameterSet& params, const DrawPlan& plan,
                   const std::vector<std::string>& random_coefs = default_random_coefs(),
                   int threads = 1);
double hcm_loglik(const Dataset& data, const ParameterSet& params, const DrawPlan& plan,
                  int threads = 1);

}  // namespace modeshift

#endif
