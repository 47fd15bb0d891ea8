#include <cmath>

#include "doctest.h"
#include "modeshift/likelihood.hpp"
#include "modeshift/synthetic.hpp"
#include "support/oracles.hpp"

using namespace modeshift;
using modeshift::testing::GaussHermite;

namespace {

std::array<std::optional<double>, kNumModes> two_alternatives(double u0, double u1) {
    std::array<std::optional<double>, kNumModes> v{};
    v[0] = u0;
    v[1] = u1;
    return v;
}

}  // namespace

TEST_SUITE("likelihood") {

TEST_CASE("mnl_prob symmetry, analytic softmax, and overflow safety") {
    auto p = mnl_prob(two_alternatives(0.7, 0.7));
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));

    auto q = mnl_prob(two_alternatives(0.0, std::log(3.0)));
    CHECK(q[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.75).epsilon(1e-12));

    std::array<std::optional<double>, kNumModes> big{};
    big[0] = 800.0;
    big[3] = 800.0;
    big[6] = 800.0;
    auto r = mnl_prob(big);
    CHECK(r[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r[6] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r[1] == 0.0);

    std::array<std::optional<double>, kNumModes> none{};
    CHECK_THROWS_AS(mnl_prob(none), std::domain_error);
}

TEST_CASE("mnl_prob sums to one and is shift-invariant on random utilities") {
    std::uint64_t s = 4242;
    for (int rep = 0; rep < 50; ++rep) {
        std::array<std::optional<double>, kNumModes> v{};
        int avail = 0;
        for (int m = 0; m < kNumModes; ++m) {
            s = mix64(s);
            if (s % 3 != 0) {
                s = mix64(s);
                v[m] = -30.0 + 60.0 * (static_cast<double>(s >> 11) / 9007199254740992.0);
                ++avail;
            }
        }
        if (avail == 0) {
            v[2] = 0.0;
        }
        auto p = mnl_prob(v);
        double sum = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
            sum += x;
        }
        CHECK(std::fabs(sum - 1.0) < 1e-12);

        auto shifted = v;
        for (auto& u : shifted) {
            if (u) *u += 55.5;
        }
        auto p2 = mnl_prob(shifted);
        for (int m = 0; m < kNumModes; ++m) CHECK(p2[m] == doctest::Approx(p[m]).epsilon(1e-12));
    }
}

TEST_CASE("mnl_loglik closed forms and brute-force oracle") {
    SyntheticSpec spec = testing::small_mnl_spec(40, 17);
    Dataset data = make_synthetic(spec);

    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    ParameterSet zero = build_parameter_set(cfg);
    // availability is always three alternatives in the SP structure
    double ll0 = mnl_loglik(data, zero);
    CHECK(ll0 == doctest::Approx(data.n_rows() * std::log(1.0 / 3.0)).epsilon(1e-12));

    double ll = mnl_loglik(data, spec.params);
    double oracle = 0.0;
    for (const auto& row : data.rows) {
        oracle += testing::brute_force_row_logprob(row, spec.params, 0.0);
    }
    CHECK(ll == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("single observation with two equal alternatives gives ln 0.5") {
    SyntheticSpec spec = testing::small_mnl_spec(1, 23);
    Dataset data = make_synthetic(spec);
    data.rows.resize(1);
    data = Dataset::from_rows(std::move(data.rows));
    ChoiceObservation& o = data.rows[0];
    o.availability = Availability::of({o.origin_mode(), Mode::Ab, Mode::Abpt});
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    ParameterSet zero = build_parameter_set(cfg);
    double ll = mnl_loglik(data, zero);
    CHECK(ll == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("chosen mode outside availability is a data error naming the row") {
    SyntheticSpec spec = testing::small_mnl_spec(3, 31);
    Dataset data = make_synthetic(spec);
    data.rows[4].availability.remove(data.rows[4].chosen);
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    try {
        mnl_loglik(data, build_parameter_set(cfg));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("row 5") != std::string::npos);
    }
}

TEST_CASE("mixl collapses to mnl when all sds are fixed at zero, for any seed") {
    SyntheticSpec spec = testing::small_mnl_spec(30, 57);
    Dataset data = make_synthetic(spec);

    ModelConfig mcfg;
    mcfg.kind = ModelKind::Mixl;
    ParameterSet p = default_parameter_set(ModelKind::Mixl);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (spec.params.has(p.at(i).name)) p.at(i).value = spec.params.get(p.at(i).name);
    }
    for (const auto& name : default_random_coefs()) {
        p.set_value(name + "_sd", 0.0);
        p.set_fixed(name + "_sd", true);
    }
    double mnl_ll = mnl_loglik(data, spec.params);
    for (std::uint64_t seed : {1ull, 2ull, 99ull, 123456789ull, 0ull}) {
        for (DrawKind kind : {DrawKind::Halton, DrawKind::Pseudo}) {
            DrawPlan plan{64, seed, kind};
            double ll = mixl_loglik(data, p, plan);
            CHECK(std::fabs(ll - mnl_ll) < 1e-12 * std::fabs(mnl_ll));
        }
    }
}

TEST_CASE("mixl on one individual matches Gauss-Hermite quadrature") {
    SyntheticSpec spec = testing::small_mnl_spec(1, 77);
    Dataset data = make_synthetic(spec);

    // one random coefficient so the mixing integral is one-dimensional
    ParameterSet p = default_parameter_set(ModelKind::Mixl, false, {"B_cost"});
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (spec.params.has(p.at(i).name)) p.at(i).value = spec.params.get(p.at(i).name);
    }
    p.set_value("B_cost_sd", 0.8);

    GaussHermite gh(64);
    double expected_prob = gh.normal_expectation([&](double z) {
        ParameterSet pz = p;
        pz.set_value("B_cost", p.get("B_cost") + 0.8 * z);
        double lnp = 0.0;
        for (const auto& row : data.rows) {
            lnp += testing::brute_force_row_logprob(row, pz, 0.0);
        }
        return std::exp(lnp);
    });
    double oracle_ll = std::log(expected_prob);

    DrawPlan plan{20000, 5, DrawKind::Halton};
    double sim_ll = mixl_loglik(data, p, plan, {"B_cost"});
    CHECK(sim_ll == doctest::Approx(oracle_ll).epsilon(2e-3));

    // doubling the draw count moves the simulated value only marginally
    DrawPlan plan2{40000, 5, DrawKind::Halton};
    double sim_ll2 = mixl_loglik(data, p, plan2, {"B_cost"});
    CHECK(std::fabs(sim_ll2 - sim_ll) < 2e-3);
}

TEST_CASE("structural_lv evaluates the reference intercept cases") {
    ParameterSet p = reference_hcm_params();
    Sociodemographics s{};
    CHECK(structural_lv(s, p, 0.0) == doctest::Approx(-1.88).epsilon(1e-12));
    s.woman = true;
    CHECK(structural_lv(s, p, 0.0) == doctest::Approx(-1.88 + 0.31).epsilon(1e-12));
    s.woman = false;
    ParameterSet p2 = p;
    p2.set_value("sigma_s", 2.0);
    CHECK(structural_lv(s, p2, 1.0) == doctest::Approx(-1.88 + 2.0).epsilon(1e-12));
}

TEST_CASE("lv_effect is a bounded scaled tanh") {
    CHECK(lv_effect(0.0, 1.59) == 0.0);
    CHECK(lv_effect(50.0, 1.59) == doctest::Approx(-1.59).epsilon(1e-10));
    CHECK(lv_effect(1.0, 1.59) == doctest::Approx(-1.59 * std::tanh(1.0)).epsilon(1e-12));
    // bounded in (-|B|, |B|)
    for (double lv : {-9.0, -1.0, 0.3, 4.0}) {
        CHECK(std::fabs(lv_effect(lv, 1.59)) < 1.59);
    }
}

TEST_CASE("ordered probit partitions the real line") {
    std::uint64_t s = 7;
    for (int rep = 0; rep < 30; ++rep) {
        s = mix64(s);
        double lv = -3.0 + 6.0 * (static_cast<double>(s >> 11) / 9007199254740992.0);
        s = mix64(s);
        double lam = -2.0 + 4.0 * (static_cast<double>(s >> 11) / 9007199254740992.0);
        s = mix64(s);
        double alpha = -2.0 + 4.0 * (static_cast<double>(s >> 11) / 9007199254740992.0);
        s = mix64(s);
        double sigma = 0.3 + 2.0 * (static_cast<double>(s >> 11) / 9007199254740992.0);
        s = mix64(s);
        double d1 = 0.2 + 1.5 * (static_cast<double>(s >> 11) / 9007199254740992.0);
        s = mix64(s);
        double d2 = 0.2 + 1.5 * (static_cast<double>(s >> 11) / 9007199254740992.0);
        double sum = 0.0;
        for (int y = 1; y <= 5; ++y) {
            double p = ordered_probit_prob(y, lv, lam, alpha, sigma, d1, d2);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ordered probit central category and limits") {
    // lambda=0, alpha=0, sigma=1, d1=d2=1 -> P(y=3) = Phi(1) - Phi(-1)
    double p3 = ordered_probit_prob(3, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0);
    CHECK(p3 == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-12));

    // a large intercept drives the latent response through the top
    // threshold; a large negative one through the bottom
    double p5 = ordered_probit_prob(5, 0.0, 0.0, 40.0, 1.0, 1.0, 1.0);
    CHECK(p5 == doctest::Approx(1.0).epsilon(1e-12));
    double p1 = ordered_probit_prob(1, 0.0, 0.0, -40.0, 1.0, 1.0, 1.0);
    CHECK(p1 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(ordered_probit_prob(3, 0.0, 0.0, 0.0, 1.0, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ordered_probit_prob(3, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ordered_probit_prob(9, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("hcm decouples when the latent variable has no loadings") {
    SyntheticSpec spec;
    spec.n_individuals = 25;
    spec.seed = 303;
    spec.dgp = ModelKind::Hcm;
    spec.params = reference_hcm_params();
    Dataset data = make_synthetic(spec);

    ParameterSet p = reference_hcm_params();
    p.set_value("B_lv", 0.0);
    p.set_value("B_I10", 0.0);
    p.set_value("B_I11", 0.0);

    // choice part equals plain mnl; measurement part is constant in LV
    ParameterSet mnl_params = default_parameter_set(ModelKind::Mnl);
    for (std::size_t i = 0; i < mnl_params.size(); ++i) {
        mnl_params.at(i).value = p.get(mnl_params.at(i).name);
    }
    double choice_ll = mnl_loglik(data, mnl_params);

    double meas_ll = 0.0;
    for (const auto& ind : data.individuals) {
        const auto& first = data.rows[ind.rows[0]];
        meas_ll += std::log(ordered_probit_prob(first.indicator_i10, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0));
        meas_ll += std::log(
            ordered_probit_prob(first.indicator_i11, 0.0, 0.0, 1.17, 1.75, 1.0, 1.0));
    }

    DrawPlan plan{128, 9, DrawKind::Halton};
    double joint = hcm_loglik(data, p, plan);
    CHECK(joint == doctest::Approx(choice_ll + meas_ll).epsilon(1e-10));
}

TEST_CASE("hcm on one individual matches Gauss-Hermite quadrature") {
    SyntheticSpec spec;
    spec.n_individuals = 1;
    spec.seed = 404;
    spec.dgp = ModelKind::Hcm;
    spec.params = reference_hcm_params();
    Dataset data = make_synthetic(spec);
    const ParameterSet& p = spec.params;

    GaussHermite gh(64);
    const auto& first = data.rows[data.individuals[0].rows[0]];
    double expected = gh.normal_expectation([&](double omega) {
        double lv = structural_lv(first.socio, p, omega);
        double eff = lv_effect(lv, p.get("B_lv"));
        double lnp = 0.0;
        for (const auto& row : data.rows) {
            lnp += testing::brute_force_row_logprob(row, p, eff);
        }
        lnp += std::log(ordered_probit_prob(first.indicator_i10, lv, p.get("B_I10"),
                                            p.get("INTER_I10"), p.get("SIGMA_I10"),
                                            p.get("delta1"), p.get("delta2")));
        lnp += std::log(ordered_probit_prob(first.indicator_i11, lv, p.get("B_I11"),
                                            p.get("INTER_I11"), p.get("SIGMA_I11"),
                                            p.get("delta1"), p.get("delta2")));
        return std::exp(lnp);
    });
    double oracle_ll = std::log(expected);

    DrawPlan plan{20000, 11, DrawKind::Halton};
    double sim_ll = hcm_loglik(data, p, plan);
    CHECK(sim_ll == doctest::Approx(oracle_ll).epsilon(2e-3));
}

TEST_CASE("hcm requires indicators") {
    SyntheticSpec spec;
    spec.n_individuals = 4;
    spec.seed = 12;
    spec.dgp = ModelKind::Hcm;
    spec.params = reference_hcm_params();
    Dataset data = make_synthetic(spec);
    for (std::size_t r : data.individuals[2].rows) data.rows[r].indicator_i11 = 0;
    DrawPlan plan{16, 3, DrawKind::Halton};
    CHECK_THROWS_AS(hcm_loglik(data, spec.params, plan), DataError);
}

TEST_CASE("hcm full specification has 37 free parameters") {
    ParameterSet p = default_parameter_set(ModelKind::Hcm, /*estimate_sigma_s=*/true);
    CHECK(p.n_free() == 37);
    // and the sigma_s-fixed variant drops exactly one
    ParameterSet q = default_parameter_set(ModelKind::Hcm, false);
    CHECK(q.n_free() == 36);
}

TEST_CASE("panel likelihoods are invariant to row order and thread count") {
    SyntheticSpec spec;
    spec.n_individuals = 12;
    spec.seed = 88;
    spec.dgp = ModelKind::Hcm;
    spec.params = reference_hcm_params();
    Dataset data = make_synthetic(spec);

    DrawPlan plan{64, 21, DrawKind::Halton};
    double base = hcm_loglik(data, spec.params, plan, 1);

    // shuffle rows (tasks reversed per individual, individuals interleaved)
    std::vector<ChoiceObservation> shuffled;
    for (int t = 5; t >= 0; --t) {
        for (std::size_t i = 0; i < data.n_individuals(); ++i) {
            shuffled.push_back(data.rows[data.individuals[i].rows[t]]);
        }
    }
    Dataset reordered = Dataset::from_rows(std::move(shuffled));
    double permuted = hcm_loglik(reordered, spec.params, plan, 1);
    CHECK(permuted == base);  // bitwise: tasks are re-sorted internally

    double threaded = hcm_loglik(data, spec.params, plan, 4);
    CHECK(threaded == base);  // bitwise: fixed-order reduction
}

}  // TEST_SUITE
