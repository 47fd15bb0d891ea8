#include "modeshift/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "modeshift/likelihood.hpp"

namespace modeshift {

namespace {

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) / 9007199254740992.0; }
    bool bern(double p) { return uniform() < p; }
    int pick(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    double range(double a, double b) { return a + (b - a) * uniform(); }
    double normal() { return inverse_normal_cdf(uniform()); }
    double lognormal_jitter(double sd) { return std::exp(sd * normal()); }
};

int likert_from_latent(double ystar, double d1, double d2) {
    const double tau[4] = {-d1 - d2, -d1, d1, d1 + d2};
    int y = 1;
    for (double t : tau) {
        if (ystar > t) ++y;
    }
    return y;
}

int sample_categorical(Rng& rng, const std::array<double, kNumModes>& p) {
    double u = rng.uniform();
    double acc = 0.0;
    int last = 0;
    for (int m = 0; m < kNumModes; ++m) {
        if (p[m] <= 0.0) continue;
        acc += p[m];
        last = m;
        if (u <= acc) return m;
    }
    return last;
}

}  // namespace

Dataset make_synthetic(const SyntheticSpec& spec) {
    static const double kGridCosts[] = {0.1, 0.2, 0.4, 0.7, 1.5};
    static const double kGridWaits[] = {1, 3, 5, 7, 10, 15};

    Rng rng(mix64(spec.seed ^ 0xab5d11f5u));
    UtilityCoeffs coeffs = UtilityCoeffs::from(spec.params);

    struct MixEntry {
        Coef coef;
        double mean, sd;
    };
    std::vector<MixEntry> mix;
    if (spec.dgp == ModelKind::Mixl) {
        const auto& set = spec.random_coefs.empty() ? default_random_coefs() : spec.random_coefs;
        for (const auto& name : set) {
            for (int ci = 0; ci < kNumCoefs; ++ci) {
                if (name == coef_param_name(static_cast<Coef>(ci))) {
                    mix.push_back({static_cast<Coef>(ci), spec.params.get(name),
                                   spec.params.get(name + "_sd")});
                }
            }
        }
    }

    std::vector<ChoiceObservation> rows;
    rows.reserve(spec.n_individuals * spec.tasks_per_individual);

    for (std::size_t i = 0; i < spec.n_individuals; ++i) {
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "I%05zu", i + 1);

        Sociodemographics s;
        s.high_income = rng.bern(0.25);
        s.low_income = !s.high_income && rng.bern(0.35);
        s.full_time = rng.bern(0.5);
        s.higher_ed = rng.bern(0.5);
        s.children = rng.bern(0.35);
        s.car_owner = rng.bern(0.7);
        s.white = rng.bern(0.6);
        s.woman = rng.bern(0.5);
        s.older = rng.bern(0.25);
        s.young = !s.older && rng.bern(0.4);
        s.student = rng.bern(0.15);
        s.hot_summer = rng.bern(0.3);
        s.harsh_winter = rng.bern(0.3);
        switch (rng.pick(3)) {
            case 0: s.work_trip = true; break;
            case 1: s.leisure_trip = true; break;
            default: s.errands_trip = true; break;
        }

        TripAttributes a;
        a.distance_mi = std::exp(rng.range(std::log(0.4), std::log(10.0)));
        // generous jitter keeps times from being collinear with distance
        a.walk_time_h = a.distance_mi / 3.0 * rng.lognormal_jitter(0.35);
        a.bike_time_h = a.distance_mi / 10.5 * rng.lognormal_jitter(0.35);
        a.car_time_h = a.distance_mi / 17.0 * rng.lognormal_jitter(0.4) + 3.0 / 60.0;
        a.transit_time_h = a.distance_mi / 11.0 * rng.lognormal_jitter(0.4) + 8.0 / 60.0;
        a.taxi_wait_h = rng.range(1.0, 15.0) / 60.0;
        a.abpt_bike_time_h =
            std::min(0.25 * a.bike_time_h + rng.range(2.0, 6.0) / 60.0, 25.0 / 60.0);
        a.abpt_total_time_h = a.abpt_bike_time_h +
                              a.distance_mi / 14.0 * rng.lognormal_jitter(0.35) +
                              rng.range(4.0, 10.0) / 60.0;
        a.pt_short_wait = rng.bern(0.5);

        Mode origin = static_cast<Mode>(rng.pick(5));
        Availability avail = Availability::of({origin, Mode::Ab, Mode::Abpt});

        // Per-individual latent draws shared across the six tasks.
        double lv = 0.0;
        int i10 = 0, i11 = 0;
        if (spec.dgp == ModelKind::Hcm) {
            lv = structural_lv(s, spec.params, rng.normal());
            double d1 = spec.params.get("delta1");
            double d2 = spec.params.get("delta2");
            double y10 = spec.params.get("INTER_I10") + spec.params.get("B_I10") * lv +
                         spec.params.get("SIGMA_I10") * rng.normal();
            double y11 = spec.params.get("INTER_I11") + spec.params.get("B_I11") * lv +
                         spec.params.get("SIGMA_I11") * rng.normal();
            i10 = likert_from_latent(y10, d1, d2);
            i11 = likert_from_latent(y11, d1, d2);
        } else {
            i10 = 1 + rng.pick(5);
            i11 = 1 + rng.pick(5);
        }
        UtilityCoeffs draw = coeffs;
        for (const auto& e : mix) {
            draw.value[static_cast<int>(e.coef)] = e.mean + e.sd * rng.normal();
        }
        double lv_eff = 0.0;
        if (spec.dgp == ModelKind::Hcm) lv_eff = lv_effect(lv, spec.params.get("B_lv"));

        for (int t = 1; t <= spec.tasks_per_individual; ++t) {
            ChoiceObservation o;
            o.individual_id = idbuf;
            o.task_index = t;
            o.attributes = a;
            o.socio = s;
            o.availability = avail;
            o.ab_cost_rate = kGridCosts[rng.pick(5)];
            o.ab_wait_h = kGridWaits[rng.pick(6)] / 60.0;
            o.indicator_i10 = i10;
            o.indicator_i11 = i11;
            o.costs_usd = mode_costs(a, spec.book, o.ab_cost_rate);
            auto probs = mnl_prob(assemble_utilities(o, draw, lv_eff));
            o.chosen = static_cast<Mode>(sample_categorical(rng, probs));
            rows.push_back(std::move(o));
        }
    }
    return Dataset::from_rows(std::move(rows));
}

ParameterSet reference_hcm_params() {
    ParameterSet p = default_parameter_set(ModelKind::Hcm);
    p.set_value("ASC_ab", 0.712);
    p.set_value("ASC_abpt", -0.695);
    p.set_value("ASC_bike", 1.6);
    p.set_value("ASC_pt", -0.785);
    p.set_value("ASC_taxi", 0.591);
    p.set_value("ASC_walk", 1.87);
    p.set_value("B_activetime", -4.64);
    p.set_value("B_carowner", 0.124);
    p.set_value("B_children", 0.328);
    p.set_value("B_cost", -1.17);
    p.set_value("B_errands", 0.36);
    p.set_value("B_fulltime", 0.315);
    p.set_value("B_higher_ed", 0.22);
    p.set_value("B_highincome", -0.0873);
    p.set_value("B_hotsummer", 0.284);
    p.set_value("B_leisure", 0.0353);
    p.set_value("B_older", 0.878);
    p.set_value("B_ptshortwait", 0.374);
    p.set_value("B_time", -1.84);
    p.set_value("B_wait", -3.75);
    p.set_value("B_white", 0.477);
    p.set_value("B_work", 0.363);
    p.set_value("B_lv", 1.59);
    p.set_value("coef_intercept", -1.88);
    p.set_value("coef_children", -0.494);
    p.set_value("coef_higher_ed", 0.395);
    p.set_value("coef_highincome", -0.198);
    p.set_value("coef_hotsummer", -0.517);
    p.set_value("coef_white", 0.271);
    p.set_value("coef_woman", 0.31);
    p.set_value("coef_young", 0.0372);
    p.set_value("B_I11", 0.934);
    p.set_value("INTER_I11", 1.17);
    p.set_value("SIGMA_I11", 1.75);
    p.set_value("delta1", 1.0);
    p.set_value("delta2", 1.0);
    p.set_value("sigma_s", 1.0);
    return p;
}

}  // namespace modeshift
