#include "modeshift/optimizer.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace modeshift {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> from_eigen(const VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& fn,
                                     const std::vector<double>& x, double h_rel) {
    if (!(h_rel > 0.0)) throw std::domain_error("finite-difference step must be > 0");
    std::vector<double> g(x.size());
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double h = h_rel * std::max(1.0, std::fabs(x[i]));
        xp[i] = x[i] + h;
        double fp = fn(xp);
        xp[i] = x[i] - h;
        double fm = fn(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::vector<double> numeric_hessian_of_gradient(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& grad_fn,
    const std::vector<double>& x, double h_rel) {
    const std::size_t n = x.size();
    std::vector<double> H(n * n, 0.0);
    std::vector<double> xp = x, gp(n), gm(n);
    for (std::size_t j = 0; j < n; ++j) {
        double h = h_rel * std::max(1.0, std::fabs(x[j]));
        xp[j] = x[j] + h;
        grad_fn(xp, gp);
        xp[j] = x[j] - h;
        grad_fn(xp, gm);
        xp[j] = x[j];
        for (std::size_t i = 0; i < n; ++i) H[i * n + j] = (gp[i] - gm[i]) / (2.0 * h);
    }
    // symmetrize
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.5 * (H[i * n + j] + H[j * n + i]);
            H[i * n + j] = s;
            H[j * n + i] = s;
        }
    }
    return H;
}

MaximizeResult maximize_bfgs(const ObjectiveFn& fn, std::vector<double> x0,
                             const MaximizeOptions& opts) {
    const std::size_t n = x0.size();
    MaximizeResult res;
    res.x = x0;

    auto eval = [&](const std::vector<double>& x, std::vector<double>* grad) {
        if (opts.use_numeric_gradient && grad) {
            double f = fn(x, nullptr);
            *grad = numeric_gradient([&](const std::vector<double>& xx) { return fn(xx, nullptr); },
                                     x, opts.numeric_step);
            return f;
        }
        return fn(x, grad);
    };

    if (n == 0) {
        res.value = fn(x0, nullptr);
        res.converged = true;
        res.message = "no free parameters";
        return res;
    }

    VectorXd x = to_eigen(x0);
    std::vector<double> gvec(n);
    std::vector<double> xstd = x0;
    double f = eval(xstd, &gvec);
    if (!std::isfinite(f)) {
        res.value = f;
        res.message = "objective not finite at starting values";
        return res;
    }
    VectorXd g = to_eigen(gvec);

    MatrixXd H = MatrixXd::Identity(n, n);  // approximate inverse Hessian of -f
    constexpr double kArmijo = 1e-4;

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        res.gradient_inf_norm = g.lpNorm<Eigen::Infinity>();
        if (res.gradient_inf_norm < opts.gradient_tol) break;

        VectorXd p = H * g;  // ascent direction
        double gtp = g.dot(p);
        if (!(gtp > 0.0) || !p.allFinite()) {
            H.setIdentity();
            p = g;
            gtp = g.dot(p);
        }

        // Cap the trial step: a raw first-iteration gradient can be huge
        // and push log-transformed parameters into underflow.
        double p_inf = p.lpNorm<Eigen::Infinity>();
        double alpha = std::min(1.0, 10.0 / std::max(1.0, p_inf));
        double fnew = f;
        VectorXd xnew = x;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            xnew = x + alpha * p;
            std::vector<double> xn = from_eigen(xnew);
            try {
                fnew = fn(xn, nullptr);
            } catch (const std::domain_error&) {
                fnew = -HUGE_VAL;  // outside the computable region; shrink
            }
            if (std::isfinite(fnew) && fnew >= f + kArmijo * alpha * gtp) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            res.message = "line search failed";
            break;
        }

        std::vector<double> xn = from_eigen(xnew);
        std::vector<double> gnewvec(n);
        eval(xn, &gnewvec);
        VectorXd gnew = to_eigen(gnewvec);

        VectorXd s = xnew - x;
        VectorXd y = g - gnew;  // gradient change of -f
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            double rho = 1.0 / sy;
            MatrixXd I = MatrixXd::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
                rho * s * s.transpose();
        }
        x = xnew;
        f = fnew;
        g = gnew;
    }

    res.x = from_eigen(x);
    res.value = f;
    res.iterations = it;
    res.gradient_inf_norm = g.lpNorm<Eigen::Infinity>();

    bool diverged = false;
    for (double v : res.x) {
        if (std::fabs(v) > opts.divergence_bound) diverged = true;
    }
    if (diverged) {
        res.converged = false;
        if (res.message.empty()) res.message = "parameter diverged beyond bound";
    } else if (res.gradient_inf_norm < opts.gradient_tol) {
        res.converged = true;
        if (res.message.empty()) res.message = "gradient tolerance reached";
    } else {
        res.converged = false;
        if (res.message.empty()) res.message = "maximum iterations reached";
    }
    return res;
}

}  // namespace modeshift
