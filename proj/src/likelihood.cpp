#include "modeshift/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "modeshift/parallel.hpp"

namespace modeshift {

namespace {

constexpr double kProbFloor = 1e-300;

// Socio regressors of the structural equation, in a fixed order.
double structural_z(const Sociodemographics& s, int id) {
    switch (id) {
        case 0: return s.children ? 1.0 : 0.0;
        case 1: return s.higher_ed ? 1.0 : 0.0;
        case 2: return s.high_income ? 1.0 : 0.0;
        case 3: return s.hot_summer ? 1.0 : 0.0;
        case 4: return s.white ? 1.0 : 0.0;
        case 5: return s.woman ? 1.0 : 0.0;
        case 6: return s.young ? 1.0 : 0.0;
    }
    return 0.0;
}

constexpr const char* kStructuralNames[7] = {"coef_children", "coef_higher_ed", "coef_highincome",
                                             "coef_hotsummer", "coef_white",    "coef_woman",
                                             "coef_young"};

struct OrderedProbitEval {
    double lnp;
    double d_lambda, d_alpha, d_sigma, d_lv, d_d1, d_d2;
};

OrderedProbitEval ordered_probit_eval(int y, double lv, double lambda, double alpha, double sigma,
                                      double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::domain_error("ordered-probit deltas must be > 0");
    if (!(sigma > 0.0)) throw std::domain_error("ordered-probit scale must be > 0");
    if (y < 1 || y > 5) throw std::domain_error("ordered response must be in 1..5");

    const double tau[4] = {-d1 - d2, -d1, d1, d1 + d2};
    const double dtau_d1[4] = {-1.0, -1.0, 1.0, 1.0};
    const double dtau_d2[4] = {-1.0, 0.0, 0.0, 1.0};
    const double center = alpha + lambda * lv;

    double phi_hi = 0.0, phi_lo = 0.0, u_hi = 0.0, u_lo = 0.0;
    double cdf_hi = 1.0, cdf_lo = 0.0;
    double a_hi = 0.0, a_lo = 0.0, b_hi = 0.0, b_lo = 0.0;
    if (y <= 4) {
        u_hi = (tau[y - 1] - center) / sigma;
        cdf_hi = normal_cdf(u_hi);
        phi_hi = normal_pdf(u_hi);
        a_hi = dtau_d1[y - 1];
        b_hi = dtau_d2[y - 1];
    }
    if (y >= 2) {
        u_lo = (tau[y - 2] - center) / sigma;
        cdf_lo = normal_cdf(u_lo);
        phi_lo = normal_pdf(u_lo);
        a_lo = dtau_d1[y - 2];
        b_lo = dtau_d2[y - 2];
    }
    double p = std::max(cdf_hi - cdf_lo, kProbFloor);
    OrderedProbitEval out;
    out.lnp = std::log(p);
    const double inv = 1.0 / (sigma * p);
    out.d_alpha = -(phi_hi - phi_lo) * inv;
    out.d_lambda = -lv * (phi_hi - phi_lo) * inv;
    out.d_lv = -lambda * (phi_hi - phi_lo) * inv;
    out.d_sigma = -(phi_hi * u_hi - phi_lo * u_lo) * inv;
    out.d_d1 = (phi_hi * a_hi - phi_lo * a_lo) * inv;
    out.d_d2 = (phi_hi * b_hi - phi_lo * b_lo) * inv;
    return out;
}

}  // namespace

std::array<double, kNumModes> mnl_prob(
    const std::array<std::optional<double>, kNumModes>& utilities) {
    std::array<double, kNumModes> p{};
    double vmax = -HUGE_VAL;
    int avail = 0;
    for (const auto& u : utilities) {
        if (u) {
            vmax = std::max(vmax, *u);
            ++avail;
        }
    }
    if (avail == 0) throw std::domain_error("mnl_prob requires at least one available alternative");
    double denom = 0.0;
    for (int m = 0; m < kNumModes; ++m) {
        if (utilities[m]) {
            p[m] = std::exp(*utilities[m] - vmax);
            denom += p[m];
        }
    }
    for (int m = 0; m < kNumModes; ++m) p[m] = utilities[m] ? p[m] / denom : 0.0;
    return p;
}

double structural_lv(const Sociodemographics& socio, const ParameterSet& params, double omega) {
    double lv = params.get("coef_intercept");
    for (int j = 0; j < 7; ++j) lv += params.get(kStructuralNames[j]) * structural_z(socio, j);
    lv += params.get("sigma_s") * omega;
    return lv;
}

double lv_effect(double lv, double b_lv) { return -b_lv * std::tanh(lv); }

double ordered_probit_prob(int y, double lv, double loading, double intercept, double scale,
                           double delta1, double delta2) {
    return std::exp(ordered_probit_eval(y, lv, loading, intercept, scale, delta1, delta2).lnp);
}

std::vector<double> LogLikelihood::initial_working() const {
    return working_from_params(parameter_template());
}

std::vector<double> LogLikelihood::working_from_params(const ParameterSet& p) const {
    const ParameterSet& tmpl = parameter_template();
    std::vector<double> w;
    w.reserve(tmpl.n_free());
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl.at(i).fixed) continue;
        double v = p.get(tmpl.at(i).name);
        if (param_role_positive(tmpl.at(i).role)) {
            if (!(v > 0.0)) {
                throw ConfigError("parameter " + tmpl.at(i).name + " must be positive, got " +
                                  std::to_string(v));
            }
            w.push_back(std::log(v));
        } else {
            w.push_back(v);
        }
    }
    return w;
}

ParameterSet LogLikelihood::params_from_working(const std::vector<double>& w) const {
    ParameterSet p = parameter_template();
    std::size_t f = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.at(i).fixed) continue;
        p.at(i).value = param_role_positive(p.at(i).role) ? std::exp(w[f]) : w[f];
        ++f;
    }
    return p;
}

struct ChoiceLikelihood::Impl {
    const Dataset& data;
    ModelConfig cfg;
    ParameterSet tmpl;

    std::vector<std::size_t> free_idx;
    std::vector<int> free_pos;  // param idx -> free slot or -1
    std::array<std::size_t, kNumCoefs> coef_pidx{};

    struct RandomCoef {
        int coef;  // Coef enum value
        std::size_t sd_pidx;
    };
    std::vector<RandomCoef> rand;

    bool hcm = false;
    std::size_t b_lv_pidx = 0, sigma_s_pidx = 0, intercept_pidx = 0;
    std::array<std::size_t, 7> structural_pidx{};
    struct MeasIdx {
        std::size_t loading, intercept, scale;
    };
    MeasIdx i10{}, i11{};
    std::size_t d1_pidx = 0, d2_pidx = 0;

    int n_dims = 0;
    int n_draws_eff = 1;
    std::vector<std::vector<double>> draws;  // per individual, row-major draws x dims
    double null_ll = 0.0;

    // Static term layout: coefficient index and free slot per term, and
    // per-row cached regressor values (sign folded in), flattened mode by
    // mode. Utilities are then plain dot products.
    struct TermInfo {
        int coef;
        int slot;  // free slot of the coefficient, or -1
    };
    std::array<std::vector<TermInfo>, kNumModes> term_info;
    std::array<int, kNumModes + 1> term_begin{};
    int terms_per_row = 0;
    std::vector<double> term_x;  // [row * terms_per_row + k]
    std::vector<double> rand_x;  // [row * 7 * n_dims + m * n_dims + d], mixl only
    std::vector<int> rand_slot;  // free slot per sd parameter

    Impl(const Dataset& d, ModelConfig c, ParameterSet p)
        : data(d), cfg(std::move(c)), tmpl(std::move(p)) {
        if (cfg.kind == ModelKind::Binary) {
            throw ConfigError("binary kind is estimated from bikeability records");
        }
        free_idx = tmpl.free_indices();
        free_pos.assign(tmpl.size(), -1);
        for (std::size_t f = 0; f < free_idx.size(); ++f) {
            free_pos[free_idx[f]] = static_cast<int>(f);
        }
        for (int ci = 0; ci < kNumCoefs; ++ci) {
            coef_pidx[ci] = tmpl.index_of(coef_param_name(static_cast<Coef>(ci)));
        }

        if (cfg.kind == ModelKind::Mixl) {
            const auto& set = cfg.random_coefs.empty() ? default_random_coefs() : cfg.random_coefs;
            for (const auto& name : set) {
                int coef = -1;
                for (int ci = 0; ci < kNumCoefs; ++ci) {
                    if (name == coef_param_name(static_cast<Coef>(ci))) coef = ci;
                }
                if (coef < 0) {
                    throw ConfigError("random coefficient is not a utility parameter: " + name);
                }
                rand.push_back(RandomCoef{coef, tmpl.index_of(name + "_sd")});
            }
            n_dims = static_cast<int>(rand.size());
            for (const auto& rc : rand) {
                rand_slot.push_back(free_pos[rc.sd_pidx]);
            }
        }
        if (cfg.kind == ModelKind::Hcm) {
            hcm = true;
            b_lv_pidx = tmpl.index_of("B_lv");
            sigma_s_pidx = tmpl.index_of("sigma_s");
            intercept_pidx = tmpl.index_of("coef_intercept");
            for (int j = 0; j < 7; ++j) structural_pidx[j] = tmpl.index_of(kStructuralNames[j]);
            i10 = MeasIdx{tmpl.index_of("B_I10"), tmpl.index_of("INTER_I10"),
                          tmpl.index_of("SIGMA_I10")};
            i11 = MeasIdx{tmpl.index_of("B_I11"), tmpl.index_of("INTER_I11"),
                          tmpl.index_of("SIGMA_I11")};
            d1_pidx = tmpl.index_of("delta1");
            d2_pidx = tmpl.index_of("delta2");
            n_dims = 1;
        }

        if (cfg.kind != ModelKind::Mnl) {
            if (cfg.plan.n_draws <= 0) throw ConfigError("number of draws must be positive");
            n_draws_eff = (n_dims > 0) ? cfg.plan.n_draws : 1;
        }

        int offset = 0;
        for (int m = 0; m < kNumModes; ++m) {
            term_begin[m] = offset;
            for (const UtilityTerm& t : utility_terms(static_cast<Mode>(m))) {
                term_info[m].push_back(
                    TermInfo{static_cast<int>(t.coef),
                             free_pos[coef_pidx[static_cast<int>(t.coef)]]});
                ++offset;
            }
        }
        term_begin[kNumModes] = offset;
        terms_per_row = offset;

        const std::size_t n_rows = data.rows.size();
        term_x.assign(n_rows * terms_per_row, 0.0);
        if (!rand.empty()) rand_x.assign(n_rows * kNumModes * n_dims, 0.0);
        for (std::size_t r = 0; r < n_rows; ++r) {
            const auto& obs = data.rows[r];
            if (!obs.availability.has(obs.chosen)) {
                throw DataError("row " + std::to_string(r + 1) +
                                ": chosen mode is not in the availability set");
            }
            null_ll += obs.weight * std::log(1.0 / obs.availability.count());
            double* x = &term_x[r * terms_per_row];
            int k = 0;
            for (int m = 0; m < kNumModes; ++m) {
                for (const UtilityTerm& t : utility_terms(static_cast<Mode>(m))) {
                    double v = t.sign * regressor_value(obs, t.reg, static_cast<Mode>(m));
                    x[k] = v;
                    for (std::size_t ri = 0; ri < rand.size(); ++ri) {
                        if (rand[ri].coef == static_cast<int>(t.coef)) {
                            rand_x[(r * kNumModes + m) * n_dims + static_cast<int>(ri)] = v;
                        }
                    }
                    ++k;
                }
            }
        }

        if (hcm) {
            for (const auto& ind : data.individuals) {
                const auto& first = data.rows[ind.rows[0]];
                if (first.indicator_i10 < 1 || first.indicator_i10 > 5 ||
                    first.indicator_i11 < 1 || first.indicator_i11 > 5) {
                    throw DataError("individual " + ind.id +
                                    ": missing attitudinal indicators required by the hybrid model");
                }
            }
        }
        if (n_dims > 0) {
            draws.resize(data.individuals.size());
            for (std::size_t i = 0; i < data.individuals.size(); ++i) {
                draws[i] = draws_for_individual(cfg.plan, data.individuals[i].id, n_dims);
            }
        }
    }

    struct Scratch {
        std::vector<double> S;       // per draw joint log-probability
        std::vector<double> base_v;  // tasks x 7 base utilities
        std::vector<double> D;       // tasks x 7 draw-averaged (delta - p)
        std::vector<double> DZ;      // tasks x 7 x dims, sd-chain weights
    };

    // Task probabilities for one draw, from cached base utilities plus the
    // draw-specific shift (mixing offsets and/or the latent effect).
    void draw_probs(const ChoiceObservation& obs, const double* base_v, const double* rx,
                    const double* sdz, double lv_eff, double* prob) const {
        double vmax = -HUGE_VAL;
        double v[kNumModes];
        for (int m = 0; m < kNumModes; ++m) {
            if (!obs.availability.has(static_cast<Mode>(m))) continue;
            double u = base_v[m];
            if (sdz) {
                const double* rxm = rx + m * n_dims;
                for (int dd = 0; dd < n_dims; ++dd) u += sdz[dd] * rxm[dd];
            }
            if (m >= static_cast<int>(Mode::Ab)) u += lv_eff;
            v[m] = u;
            vmax = std::max(vmax, u);
        }
        double denom = 0.0;
        for (int m = 0; m < kNumModes; ++m) {
            if (obs.availability.has(static_cast<Mode>(m))) {
                prob[m] = std::exp(v[m] - vmax);
                denom += prob[m];
            } else {
                prob[m] = 0.0;
            }
        }
        for (int m = 0; m < kNumModes; ++m) prob[m] /= denom;
    }

    void add_measurement(int y, const MeasIdx& idx, double lv, const std::vector<double>& vals,
                         double weight, double* g, double* g_lv, double* S) const {
        auto m = ordered_probit_eval(y, lv, vals[idx.loading], vals[idx.intercept],
                                     vals[idx.scale], vals[d1_pidx], vals[d2_pidx]);
        if (S) *S += m.lnp;
        if (g) {
            auto bump = [&](std::size_t pidx, double v) {
                int slot = free_pos[pidx];
                if (slot >= 0) g[slot] += weight * v;
            };
            bump(idx.loading, m.d_lambda);
            bump(idx.intercept, m.d_alpha);
            bump(idx.scale, m.d_sigma);
            bump(d1_pidx, m.d_d1);
            bump(d2_pidx, m.d_d2);
            *g_lv += weight * m.d_lv;
        }
    }

    double eval_individual(std::size_t i, const std::vector<double>& vals, const double* base_cv,
                           double* score, Scratch& s) const {
        const auto& ind = data.individuals[i];
        const ChoiceObservation& first = data.rows[ind.rows[0]];
        const double weight = first.weight;
        const std::size_t n_tasks = ind.rows.size();
        const std::size_t nf = free_idx.size();
        const int R = n_draws_eff;
        const double* zdata = (n_dims > 0) ? draws[i].data() : nullptr;

        // base utilities per task (draw-independent part)
        s.base_v.assign(n_tasks * kNumModes, 0.0);
        for (std::size_t t = 0; t < n_tasks; ++t) {
            const auto& obs = data.rows[ind.rows[t]];
            const double* x = &term_x[ind.rows[t] * terms_per_row];
            for (int m = 0; m < kNumModes; ++m) {
                if (!obs.availability.has(static_cast<Mode>(m))) continue;
                double u = 0.0;
                for (int k = term_begin[m]; k < term_begin[m + 1]; ++k) {
                    u += base_cv[term_info[m][k - term_begin[m]].coef] * x[k];
                }
                s.base_v[t * kNumModes + m] = u;
            }
        }

        double lv_base = 0.0;
        if (hcm) {
            lv_base = vals[intercept_pidx];
            for (int j = 0; j < 7; ++j) {
                lv_base += vals[structural_pidx[j]] * structural_z(first.socio, j);
            }
        }

        double sdz[8];
        double prob[kNumModes];

        // pass 1: joint log-probability per draw
        s.S.assign(R, 0.0);
        for (int r = 0; r < R; ++r) {
            const double* zrow = zdata ? zdata + static_cast<std::size_t>(r) * n_dims : nullptr;
            double lv_eff = 0.0, lv = 0.0;
            if (hcm) {
                lv = lv_base + vals[sigma_s_pidx] * zrow[0];
                lv_eff = -vals[b_lv_pidx] * std::tanh(lv);
            }
            if (!rand.empty()) {
                for (int dd = 0; dd < n_dims; ++dd) {
                    sdz[dd] = vals[rand[dd].sd_pidx] * zrow[dd];
                }
            }
            double S = 0.0;
            for (std::size_t t = 0; t < n_tasks; ++t) {
                const auto& obs = data.rows[ind.rows[t]];
                draw_probs(obs, &s.base_v[t * kNumModes],
                           rand.empty() ? nullptr : &rand_x[ind.rows[t] * kNumModes * n_dims],
                           rand.empty() ? nullptr : sdz, lv_eff, prob);
                S += std::log(std::max(prob[static_cast<int>(obs.chosen)], kProbFloor));
            }
            if (hcm) {
                add_measurement(first.indicator_i10, i10, lv, vals, 1.0, nullptr, nullptr, &S);
                add_measurement(first.indicator_i11, i11, lv, vals, 1.0, nullptr, nullptr, &S);
            }
            s.S[r] = S;
        }

        double ll, smax = 0.0, sum_exp = 0.0;
        if (R == 1) {
            ll = s.S[0];
        } else {
            smax = *std::max_element(s.S.begin(), s.S.end());
            for (int r = 0; r < R; ++r) sum_exp += std::exp(s.S[r] - smax);
            ll = smax + std::log(sum_exp / R);
        }

        // pass 2: gradient, factorized over draws
        if (score) {
            s.D.assign(n_tasks * kNumModes, 0.0);
            if (!rand.empty()) s.DZ.assign(n_tasks * kNumModes * n_dims, 0.0);
            for (int r = 0; r < R; ++r) {
                double sigma_r = 1.0;
                if (R > 1) {
                    sigma_r = std::exp(s.S[r] - smax) / sum_exp;
                    if (sigma_r == 0.0) continue;
                }
                const double* zrow = zdata ? zdata + static_cast<std::size_t>(r) * n_dims : nullptr;
                double lv_eff = 0.0, lv = 0.0, tanh_lv = 0.0, omega = 0.0;
                if (hcm) {
                    omega = zrow[0];
                    lv = lv_base + vals[sigma_s_pidx] * omega;
                    tanh_lv = std::tanh(lv);
                    lv_eff = -vals[b_lv_pidx] * tanh_lv;
                }
                if (!rand.empty()) {
                    for (int dd = 0; dd < n_dims; ++dd) {
                        sdz[dd] = vals[rand[dd].sd_pidx] * zrow[dd];
                    }
                }
                double g_lv = 0.0;
                for (std::size_t t = 0; t < n_tasks; ++t) {
                    const auto& obs = data.rows[ind.rows[t]];
                    draw_probs(obs, &s.base_v[t * kNumModes],
                               rand.empty() ? nullptr : &rand_x[ind.rows[t] * kNumModes * n_dims],
                               rand.empty() ? nullptr : sdz, lv_eff, prob);
                    int chosen = static_cast<int>(obs.chosen);
                    for (int m = 0; m < kNumModes; ++m) {
                        if (!obs.availability.has(static_cast<Mode>(m))) continue;
                        double dm = sigma_r * ((m == chosen ? 1.0 : 0.0) - prob[m]);
                        s.D[t * kNumModes + m] += dm;
                        if (!rand.empty()) {
                            double* dz = &s.DZ[(t * kNumModes + m) * n_dims];
                            for (int dd = 0; dd < n_dims; ++dd) dz[dd] += dm * zrow[dd];
                        }
                        if (hcm && m >= static_cast<int>(Mode::Ab)) g_lv += dm;
                    }
                }
                if (hcm) {
                    double g_L = 0.0;
                    add_measurement(first.indicator_i10, i10, lv, vals, sigma_r, score, &g_L,
                                    nullptr);
                    add_measurement(first.indicator_i11, i11, lv, vals, sigma_r, score, &g_L,
                                    nullptr);
                    double dtanh = 1.0 - tanh_lv * tanh_lv;
                    g_L += g_lv * (-vals[b_lv_pidx] * dtanh);
                    auto bump = [&](std::size_t pidx, double v) {
                        int slot = free_pos[pidx];
                        if (slot >= 0) score[slot] += v;
                    };
                    bump(b_lv_pidx, g_lv * (-tanh_lv));
                    bump(intercept_pidx, g_L);
                    for (int j = 0; j < 7; ++j) {
                        double z = structural_z(first.socio, j);
                        if (z != 0.0) bump(structural_pidx[j], g_L * z);
                    }
                    bump(sigma_s_pidx, g_L * omega);
                }
            }
            // apply the accumulated draw weights through the cached terms
            for (std::size_t t = 0; t < n_tasks; ++t) {
                const auto& obs = data.rows[ind.rows[t]];
                const double* x = &term_x[ind.rows[t] * terms_per_row];
                for (int m = 0; m < kNumModes; ++m) {
                    if (!obs.availability.has(static_cast<Mode>(m))) continue;
                    double dm = s.D[t * kNumModes + m];
                    const double* dz =
                        rand.empty() ? nullptr : &s.DZ[(t * kNumModes + m) * n_dims];
                    for (int k = term_begin[m]; k < term_begin[m + 1]; ++k) {
                        const TermInfo& ti = term_info[m][k - term_begin[m]];
                        double xv = x[k];
                        if (xv == 0.0) continue;
                        if (ti.slot >= 0) score[ti.slot] += dm * xv;
                        if (dz) {
                            for (int dd = 0; dd < n_dims; ++dd) {
                                if (rand[dd].coef == ti.coef && rand_slot[dd] >= 0) {
                                    score[rand_slot[dd]] += dz[dd] * xv;
                                }
                            }
                        }
                    }
                }
            }
            for (std::size_t f = 0; f < nf; ++f) score[f] *= weight;
        }
        return weight * ll;
    }
};

ChoiceLikelihood::ChoiceLikelihood(const Dataset& data, const ModelConfig& cfg, ParameterSet params)
    : impl_(std::make_unique<Impl>(data, cfg, std::move(params))) {}

ChoiceLikelihood::~ChoiceLikelihood() = default;

const ParameterSet& ChoiceLikelihood::parameter_template() const { return impl_->tmpl; }

std::size_t ChoiceLikelihood::n_obs() const { return impl_->data.n_rows(); }

std::size_t ChoiceLikelihood::n_clusters() const { return impl_->data.n_individuals(); }

double ChoiceLikelihood::null_loglik() const { return impl_->null_ll; }

double ChoiceLikelihood::eval(const std::vector<double>& w, std::vector<double>* grad,
                              std::vector<double>* scores) const {
    const Impl& im = *impl_;
    const std::size_t nf = im.free_idx.size();
    if (w.size() != nf) throw std::logic_error("working vector size mismatch");

    std::vector<double> vals(im.tmpl.size());
    for (std::size_t i = 0; i < im.tmpl.size(); ++i) vals[i] = im.tmpl.at(i).value;
    for (std::size_t f = 0; f < nf; ++f) {
        const auto& par = im.tmpl.at(im.free_idx[f]);
        vals[im.free_idx[f]] = param_role_positive(par.role) ? std::exp(w[f]) : w[f];
    }
    std::array<double, kNumCoefs> base_cv{};
    for (int ci = 0; ci < kNumCoefs; ++ci) base_cv[ci] = vals[im.coef_pidx[ci]];

    const std::size_t nind = im.data.n_individuals();
    std::vector<double> ll_i(nind);
    const bool want_g = grad != nullptr || scores != nullptr;
    std::vector<double> sc;
    if (want_g) sc.assign(nind * nf, 0.0);

    run_chunked(nind, im.cfg.threads, [&](std::size_t lo, std::size_t hi) {
        Impl::Scratch scratch;
        for (std::size_t i = lo; i < hi; ++i) {
            ll_i[i] = im.eval_individual(i, vals, base_cv.data(),
                                         want_g ? &sc[i * nf] : nullptr, scratch);
        }
    });

    if (want_g) {
        // chain rule into working space for log-transformed parameters
        for (std::size_t f = 0; f < nf; ++f) {
            const auto& par = im.tmpl.at(im.free_idx[f]);
            if (!param_role_positive(par.role)) continue;
            double factor = vals[im.free_idx[f]];
            for (std::size_t i = 0; i < nind; ++i) sc[i * nf + f] *= factor;
        }
        if (grad) {
            grad->assign(nf, 0.0);
            for (std::size_t i = 0; i < nind; ++i) {
                for (std::size_t f = 0; f < nf; ++f) (*grad)[f] += sc[i * nf + f];
            }
        }
        if (scores) *scores = std::move(sc);
    }
    double total = 0.0;
    for (double v : ll_i) total += v;
    return total;
}

std::optional<std::size_t> ChoiceLikelihood::first_degenerate_row(const ParameterSet& p) const {
    UtilityCoeffs coeffs = UtilityCoeffs::from(p);
    for (std::size_t r = 0; r < impl_->data.rows.size(); ++r) {
        auto probs = mnl_prob(assemble_utilities(impl_->data.rows[r], coeffs, 0.0));
        double pc = probs[static_cast<int>(impl_->data.rows[r].chosen)];
        if (!(pc > 0.0) || !std::isfinite(pc)) return r;
    }
    return std::nullopt;
}

namespace {

double eval_fixed(const Dataset& data, const ParameterSet& params, ModelConfig cfg) {
    ParameterSet frozen = params;
    for (std::size_t i = 0; i < frozen.size(); ++i) frozen.at(i).fixed = true;
    ChoiceLikelihood lik(data, cfg, std::move(frozen));
    return lik.eval({}, nullptr, nullptr);
}

}  // namespace

double mnl_loglik(const Dataset& data, const ParameterSet& params, int threads) {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    cfg.threads = threads;
    return eval_fixed(data, params, cfg);
}

double mixl_loglik(const Dataset& data, const ParameterSet& params, const DrawPlan& plan,
                   const std::vector<std::string>& random_coefs, int threads) {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mixl;
    cfg.plan = plan;
    cfg.random_coefs = random_coefs;
    cfg.threads = threads;
    return eval_fixed(data, params, cfg);
}

double hcm_loglik(const Dataset& data, const ParameterSet& params, const DrawPlan& plan,
                  int threads) {
    ModelConfig cfg;
    cfg.kind = ModelKind::Hcm;
    cfg.plan = plan;
    cfg.threads = threads;
    return eval_fixed(data, params, cfg);
}

}  // namespace modeshift
