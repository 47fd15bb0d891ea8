#include "modeshift/estimation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "modeshift/optimizer.hpp"

namespace modeshift {

using nlohmann::json;

FitStatistics fit_statistics(double ll, double ll0, std::size_t k_free, std::size_t n_obs) {
    FitStatistics f;
    f.ll = ll;
    f.ll0 = ll0;
    f.k_free = k_free;
    f.n_obs = n_obs;
    double k = static_cast<double>(k_free);
    f.aic = 2.0 * k - 2.0 * ll;
    f.bic = k * std::log(static_cast<double>(n_obs)) - 2.0 * ll;
    f.rho_bar_sq = 1.0 - (ll - k) / ll0;
    return f;
}

EstimationResult estimate(LogLikelihood& lik, const ModelConfig& cfg) {
    EstimationResult res;
    res.kind = cfg.kind;
    res.plan = cfg.plan;
    res.random_coefs = cfg.random_coefs;
    res.estimate_sigma_s = cfg.estimate_sigma_s;
    res.n_individuals = lik.n_clusters();

    std::vector<double> w0 = lik.initial_working();

    ObjectiveFn fn = [&](const std::vector<double>& w, std::vector<double>* grad) {
        return lik.eval(w, grad, nullptr);
    };

    double f0 = lik.eval(w0, nullptr, nullptr);
    if (!std::isfinite(f0)) {
        throw DataError("log-likelihood is not finite at the starting values");
    }

    MaximizeOptions opts;
    opts.max_iterations = cfg.max_iterations;
    opts.gradient_tol = cfg.gradient_tol;
    opts.divergence_bound = cfg.divergence_bound;
    MaximizeResult opt = maximize_bfgs(fn, w0, opts);

    res.converged = opt.converged;
    res.iterations = opt.iterations;
    res.gradient_inf_norm = opt.gradient_inf_norm;
    res.message = opt.message;
    res.params = lik.params_from_working(opt.x);
    res.fit = fit_statistics(opt.value, lik.null_loglik(), lik.n_free(), lik.n_obs());

    // A log-likelihood at numerically zero means every choice is fitted
    // with probability one: the data are separated and at least one free
    // parameter is unidentified.
    if (res.converged && opt.value > -1e-6 * static_cast<double>(lik.n_obs())) {
        res.converged = false;
        res.message = "perfect separation suspected: fitted probabilities are numerically 1";
    }

    // Sandwich covariance H^-1 B H^-1 with per-cluster score outer
    // products (clustered by individual) and a finite-difference Hessian
    // of the analytic gradient.
    const std::size_t nf = lik.n_free();
    if (nf > 0) {
        const std::size_t nc = lik.n_clusters();
        std::vector<double> scores;
        lik.eval(opt.x, nullptr, &scores);

        auto grad_fn = [&](const std::vector<double>& w, std::vector<double>& g) {
            lik.eval(w, &g, nullptr);
        };
        std::vector<double> Hflat = numeric_hessian_of_gradient(grad_fn, opt.x);

        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            H(Hflat.data(), nf, nf);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            S(scores.data(), nc, nf);
        Eigen::MatrixXd B = S.transpose() * S;
        Eigen::MatrixXd Hinv = Eigen::MatrixXd(H).fullPivLu().inverse();
        Eigen::MatrixXd V = Hinv * B * Hinv.transpose();

        std::size_t f = 0;
        for (std::size_t i = 0; i < res.params.size(); ++i) {
            if (res.params.at(i).fixed) continue;
            double var = V(f, f);
            double se_w = var > 0.0 ? std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
            double se = param_role_positive(res.params.at(i).role)
                            ? se_w * res.params.at(i).value  // delta method through exp
                            : se_w;
            res.params.at(i).robust_se = se;
            ++f;
        }
    }
    return res;
}

EstimationResult estimate(const Dataset& data, const ModelConfig& cfg) {
    if (data.n_rows() == 0) throw DataError("estimation requires a nonempty dataset");
    ParameterSet params = build_parameter_set(cfg);
    ChoiceLikelihood lik(data, cfg, std::move(params));

    // Start-value diagnostics: name the first offending row when the
    // likelihood cannot be evaluated.
    std::vector<double> w0 = lik.initial_working();
    double f0 = lik.eval(w0, nullptr, nullptr);
    if (!std::isfinite(f0)) {
        auto row = lik.first_degenerate_row(lik.params_from_working(w0));
        std::string where = row ? " (row " + std::to_string(*row + 1) + ")" : "";
        throw DataError("log-likelihood is not finite at the starting values" + where);
    }
    return estimate(static_cast<LogLikelihood&>(lik), cfg);
}

std::string EstimationResult::to_json() const {
    json j;
    j["model"] = model_kind_name(kind);
    j["converged"] = converged;
    j["message"] = message;
    j["iterations"] = iterations;
    j["gradient_inf_norm"] = gradient_inf_norm;
    j["n_obs"] = fit.n_obs;
    j["n_individuals"] = n_individuals;
    j["k_free"] = fit.k_free;
    j["ll0"] = fit.ll0;
    j["ll"] = fit.ll;
    j["rho_bar_sq"] = fit.rho_bar_sq;
    j["aic"] = fit.aic;
    j["bic"] = fit.bic;
    j["draws"] = {{"n", plan.n_draws}, {"seed", plan.seed}, {"kind", draw_kind_name(plan.kind)}};
    j["random_coefs"] = random_coefs;
    j["estimate_sigma_s"] = estimate_sigma_s;
    json plist = json::array();
    for (const auto& p : params) {
        json pj;
        pj["name"] = p.name;
        pj["value"] = p.value;
        pj["fixed"] = p.fixed;
        pj["role"] = param_role_name(p.role);
        // a singular Hessian leaves no usable standard error; omit it
        if (p.robust_se && std::isfinite(*p.robust_se)) pj["robust_se"] = *p.robust_se;
        plist.push_back(pj);
    }
    j["parameters"] = plist;
    return j.dump(2) + "\n";
}

EstimationResult EstimationResult::from_json_text(const std::string& text) {
    json j = json::parse(text);
    EstimationResult r;
    r.kind = model_kind_from_name(j.at("model").get<std::string>());
    r.converged = j.at("converged").get<bool>();
    r.message = j.value("message", "");
    r.iterations = j.value("iterations", 0);
    r.gradient_inf_norm = j.value("gradient_inf_norm", 0.0);
    r.n_individuals = j.value("n_individuals", std::size_t{0});
    r.fit.n_obs = j.value("n_obs", std::size_t{0});
    r.fit.k_free = j.value("k_free", std::size_t{0});
    r.fit.ll0 = j.value("ll0", 0.0);
    r.fit.ll = j.value("ll", 0.0);
    r.fit.rho_bar_sq = j.value("rho_bar_sq", 0.0);
    r.fit.aic = j.value("aic", 0.0);
    r.fit.bic = j.value("bic", 0.0);
    if (j.contains("draws")) {
        r.plan.n_draws = j["draws"].value("n", 1000);
        r.plan.seed = j["draws"].value("seed", std::uint64_t{1});
        r.plan.kind = draw_kind_from_name(j["draws"].value("kind", "halton"));
    }
    if (j.contains("random_coefs")) {
        r.random_coefs = j["random_coefs"].get<std::vector<std::string>>();
    }
    r.estimate_sigma_s = j.value("estimate_sigma_s", false);
    for (const auto& pj : j.at("parameters")) {
        r.params.add(pj.at("name").get<std::string>(), pj.at("value").get<double>(),
                     pj.at("fixed").get<bool>(),
                     param_role_from_name(pj.at("role").get<std::string>()));
        if (pj.contains("robust_se")) {
            r.params.set_robust_se(pj.at("name").get<std::string>(), pj.at("robust_se").get<double>());
        }
    }
    return r;
}

EstimationResult EstimationResult::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open parameter file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return from_json_text(text);
    } catch (const json::exception& e) {
        throw DataError("cannot parse parameter file " + path + ": " + e.what());
    }
}

void EstimationResult::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << to_json();
}

}  // namespace modeshift
