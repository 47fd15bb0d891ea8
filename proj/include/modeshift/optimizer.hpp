#ifndef MODESHIFT_OPTIMIZER_HPP
#define MODESHIFT_OPTIMIZER_HPP

#include <functional>
#include <string>
#include <vector>

namespace modeshift {

/// Objective callback: value at x, optionally filling the gradient.
using ObjectiveFn = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

struct MaximizeOptions {
    int max_iterations = 500;
    double gradient_tol = 1e-5;   // infinity norm
    double divergence_bound = 30.0;
    bool use_numeric_gradient = false;
    double numeric_step = 1e-6;  // relative
};

struct MaximizeResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_inf_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

/// Dense BFGS maximizer with backtracking line search on an unconstrained
/// space. Convergence means gradient infinity-norm under tolerance and no
/// parameter beyond the divergence bound.
MaximizeResult maximize_bfgs(const ObjectiveFn& fn, std::vector<double> x0,
                             const MaximizeOptions& opts);

/// Central-difference gradient with relative step h (default 1e-6).
std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& fn,
                                     const std::vector<double>& x, double h_rel = 1e-6);

/// Central-difference Hessian of fn at x (used for sandwich covariance).
/// Row-major n x n.
std::vector<double> numeric_hessian_of_gradient(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& grad_fn,
    const std::vector<double>& x, double h_rel = 1e-5);

}  // namespace modeshift

#endif
