#include <cmath>
#include <sstream>

#include "doctest.h"
#include "modeshift/dataset.hpp"
#include "modeshift/likelihood.hpp"
#include "modeshift/synthetic.hpp"
#include "modeshift/utility.hpp"
#include "support/oracles.hpp"

using namespace modeshift;

namespace {

ChoiceObservation fixture_obs() {
    ChoiceObservation o;
    o.individual_id = "F1";
    o.task_index = 1;
    o.attributes.walk_time_h = 40.0 / 60.0;
    o.attributes.bike_time_h = 14.0 / 60.0;
    o.attributes.car_time_h = 11.0 / 60.0;
    o.attributes.transit_time_h = 26.0 / 60.0;
    o.attributes.abpt_bike_time_h = 6.0 / 60.0;
    o.attributes.abpt_total_time_h = 24.0 / 60.0;
    o.attributes.distance_mi = 2.4;
    o.attributes.taxi_wait_h = 5.0 / 60.0;
    o.attributes.pt_short_wait = true;
    o.socio.high_income = true;
    o.socio.full_time = true;
    o.socio.higher_ed = true;
    o.socio.car_owner = true;
    o.socio.white = true;
    o.socio.woman = true;
    o.socio.work_trip = true;
    o.ab_cost_rate = 0.4;
    o.ab_wait_h = 5.0 / 60.0;
    o.availability = Availability::of({Mode::Car, Mode::Ab, Mode::Abpt});
    o.chosen = Mode::Car;
    o.indicator_i10 = 3;
    o.indicator_i11 = 2;
    o.costs_usd = mode_costs(o.attributes, CostBook{}, o.ab_cost_rate);
    return o;
}

}  // namespace

TEST_SUITE("choice_core") {

TEST_CASE("scale_inputs unit, zero, and mid-range cases") {
    auto s = scale_inputs(60.0, 10.0);
    CHECK(s.hours == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.cost_tens_usd == doctest::Approx(1.0).epsilon(1e-15));

    auto z = scale_inputs(0.0, 0.0);
    CHECK(z.hours == 0.0);
    CHECK(z.cost_tens_usd == 0.0);

    auto m = scale_inputs(15.0, 22.5);
    CHECK(m.hours == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.cost_tens_usd == doctest::Approx(2.25).epsilon(1e-15));

    CHECK_THROWS_AS(scale_inputs(-1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(scale_inputs(0.0, -0.5), std::domain_error);
}

TEST_CASE("mode_costs formulas") {
    TripAttributes a;
    a.distance_mi = 5.0;
    a.bike_time_h = 15.0 / 60.0;
    a.car_time_h = 15.0 / 60.0;
    a.abpt_bike_time_h = 8.0 / 60.0;
    a.abpt_total_time_h = 30.0 / 60.0;
    CostBook book;

    auto c = mode_costs(a, book, 0.1);
    CHECK(c[static_cast<int>(Mode::Ab)] == doctest::Approx(1.5).epsilon(1e-12));
    // taxi = 1.23 + 0.97*5 + 0.28*15
    CHECK(c[static_cast<int>(Mode::Taxi)] == doctest::Approx(10.28).epsilon(1e-12));
    CHECK(c[static_cast<int>(Mode::Walk)] == 0.0);
    CHECK(c[static_cast<int>(Mode::Bike)] == 0.0);
    CHECK(c[static_cast<int>(Mode::Car)] == doctest::Approx(5.0 * 0.72).epsilon(1e-12));
    CHECK(c[static_cast<int>(Mode::Transit)] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(c[static_cast<int>(Mode::Abpt)] == doctest::Approx(0.1 * 8.0 + 1.5).epsilon(1e-12));

    auto high = mode_costs(a, book, 1.5);
    CHECK(high[static_cast<int>(Mode::Ab)] == doctest::Approx(22.5).epsilon(1e-12));
}

TEST_CASE("assemble_utilities zero parameters") {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    ParameterSet zero = build_parameter_set(cfg);
    ChoiceObservation o = fixture_obs();
    auto v = assemble_utilities(o, zero, 0.0);
    for (int m = 0; m < kNumModes; ++m) {
        if (o.availability.has(static_cast<Mode>(m))) {
            CHECK(*v[m] == doctest::Approx(0.0).epsilon(1e-15));
        } else {
            CHECK_FALSE(v[m].has_value());
        }
    }
}

TEST_CASE("assemble_utilities isolates the cost term") {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    ParameterSet p = build_parameter_set(cfg);
    p.set_value("B_cost", -1.17);
    ChoiceObservation o = fixture_obs();
    // pin the autonomous cost at 10 USD -> scaled 1.0
    o.attributes.bike_time_h = 1.0;  // 60 riding minutes
    o.ab_cost_rate = 10.0 / 60.0;
    o.costs_usd = mode_costs(o.attributes, CostBook{}, o.ab_cost_rate);
    o.socio = Sociodemographics{};  // no dummies
    o.ab_wait_h = 0.0;
    auto v = assemble_utilities(o, p, 0.0);
    CHECK(*v[static_cast<int>(Mode::Ab)] == doctest::Approx(-1.17).epsilon(1e-12));
}

TEST_CASE("assemble_utilities matches a hand-evaluated oracle on the fixture trip") {
    ParameterSet p = reference_hcm_params();
    ChoiceObservation o = fixture_obs();
    o.availability = Availability::all();
    const double lv_eff = 0.37;  // arbitrary, enters only the two autonomous modes
    auto v = assemble_utilities(o, p, lv_eff);

    // Long-hand evaluation, written independently of the term table.
    const double cost_car = 2.4 * 0.72 / 10.0;
    const double cost_pt = 1.5 / 10.0;
    const double cost_taxi = (1.23 + 0.97 * 2.4 + 0.28 * 11.0) / 10.0;
    const double cost_ab = (0.4 * 14.0) / 10.0;
    const double cost_abpt = (0.4 * 6.0 + 1.5) / 10.0;
    const double walk_t = 40.0 / 60.0, bike_t = 14.0 / 60.0, car_t = 11.0 / 60.0;
    const double pt_t = 26.0 / 60.0, abpt_bike_t = 6.0 / 60.0, abpt_total_t = 24.0 / 60.0;
    const double taxi_wait = 5.0 / 60.0, ab_wait = 5.0 / 60.0;

    double v0 = 1.87 + (-4.64) * walk_t + 0.477 * 1 + 0.22 * 1 - 0.328 * 0 - 0.284 * 0;
    double v1 = 1.6 + (-4.64) * bike_t - 0.124 * 1 - (-0.0873) * 1 - 0.315 * 1 + 0.22 * 1 -
                0.0353 * 0 + 0.363 * 1;
    double v2 = 0.0 + (-1.17) * cost_car + (-1.84) * car_t + 0.124 * 1 - 0.477 * 1 + 0.878 * 0 -
                0.0353 * 0 - 0.363 * 1 + 0.36 * 0;
    double v3 = -0.785 + (-1.17) * cost_pt + (-1.84) * pt_t + 0.315 * 1 + 0.22 * 1 - 0.328 * 0 -
                0.0353 * 0 + 0.363 * 1 - 0.284 * 0 + 0.374 * 1;
    double v4 = 0.591 + (-1.17) * cost_taxi + (-1.84) * car_t + (-3.75) * taxi_wait +
                (-0.0873) * 1 + 0.0353 * 0 + 0.284 * 0;
    double v5 = 0.712 + lv_eff + (-1.17) * cost_ab + (-4.64) * bike_t + (-3.75) * ab_wait -
                0.315 * 1 - 0.878 * 0 - 0.22 * 1 - 0.363 * 1;
    double v6 = -0.695 + lv_eff + (-1.17) * cost_abpt + (-4.64) * abpt_bike_t +
                (-1.84) * (abpt_total_t - abpt_bike_t) + (-3.75) * ab_wait - 0.124 * 1 - 0.22 * 1 +
                0.284 * 0 + 0.374 * 1;

    CHECK(*v[0] == doctest::Approx(v0).epsilon(1e-9));
    CHECK(*v[1] == doctest::Approx(v1).epsilon(1e-9));
    CHECK(*v[2] == doctest::Approx(v2).epsilon(1e-9));
    CHECK(*v[3] == doctest::Approx(v3).epsilon(1e-9));
    CHECK(*v[4] == doctest::Approx(v4).epsilon(1e-9));
    CHECK(*v[5] == doctest::Approx(v5).epsilon(1e-9));
    CHECK(*v[6] == doctest::Approx(v6).epsilon(1e-9));
}

TEST_CASE("missing parameter raises a specification error naming it") {
    ParameterSet p;  // empty
    p.add("ASC_walk", 0.0, false, ParamRole::Asc);
    ChoiceObservation o = fixture_obs();
    try {
        assemble_utilities(o, p, 0.0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("ASC_bike") != std::string::npos);
    }
}

TEST_CASE("utility assembly is linear in the parameters when lv_effect is 0") {
    ParameterSet p = reference_hcm_params();
    ChoiceObservation o = fixture_obs();
    std::uint64_t s = 99;
    for (int rep = 0; rep < 20; ++rep) {
        s = mix64(s);
        double alpha = -2.0 + 4.0 * static_cast<double>(s >> 11) / 9007199254740992.0;
        ParameterSet scaled = p;
        for (std::size_t i = 0; i < scaled.size(); ++i) {
            scaled.at(i).value = p.at(i).value * alpha;
        }
        auto v1 = assemble_utilities(o, p, 0.0);
        auto v2 = assemble_utilities(o, scaled, 0.0);
        for (int m = 0; m < kNumModes; ++m) {
            if (!v1[m]) continue;
            CHECK(*v2[m] == doctest::Approx(alpha * *v1[m]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("adding a constant to all available utilities leaves choice probabilities unchanged") {
    ParameterSet p = reference_hcm_params();
    ChoiceObservation o = fixture_obs();
    auto v = assemble_utilities(o, p, 0.0);
    auto probs = mnl_prob(v);
    auto shifted = v;
    for (auto& u : shifted) {
        if (u) *u += 123.456;
    }
    auto probs2 = mnl_prob(shifted);
    for (int m = 0; m < kNumModes; ++m) {
        CHECK(probs2[m] == doctest::Approx(probs[m]).epsilon(1e-12));
    }
}

TEST_CASE("combined mode applies B_time to the transit leg and B_activetime to the bike leg") {
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    ParameterSet p = build_parameter_set(cfg);
    p.set_value("B_time", -1.0);
    ChoiceObservation o = fixture_obs();
    o.socio = Sociodemographics{};
    o.attributes.pt_short_wait = false;
    o.ab_cost_rate = 0.0;
    o.ab_wait_h = 0.0;
    o.costs_usd = {};  // zero all costs so only time terms remain
    auto v = assemble_utilities(o, p, 0.0);
    double pt_leg = o.attributes.abpt_total_time_h - o.attributes.abpt_bike_time_h;
    CHECK(*v[static_cast<int>(Mode::Abpt)] == doctest::Approx(-pt_leg).epsilon(1e-12));

    p.set_value("B_time", 0.0);
    p.set_value("B_activetime", -1.0);
    v = assemble_utilities(o, p, 0.0);
    CHECK(*v[static_cast<int>(Mode::Abpt)] ==
          doctest::Approx(-o.attributes.abpt_bike_time_h).epsilon(1e-12));
}

TEST_CASE("ingestion validates the stated-preference structure") {
    SyntheticSpec spec = testing::small_mnl_spec(5, 11);
    Dataset d = make_synthetic(spec);
    std::string csv = observations_to_csv(d);
    Dataset reread = parse_observations(csv, "roundtrip");
    CHECK(reread.n_rows() == d.n_rows());
    CHECK(reread.n_individuals() == d.n_individuals());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        CHECK(reread.rows[i].chosen == d.rows[i].chosen);
        CHECK(reread.rows[i].availability == d.rows[i].availability);
        CHECK(reread.rows[i].costs_usd[2] == doctest::Approx(d.rows[i].costs_usd[2]).epsilon(1e-12));
    }

    // missing column reported by name: strip the trailing column everywhere
    std::string broken;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty()) broken += line.substr(0, line.rfind(',')) + "\n";
    }
    try {
        parse_observations(broken, "broken");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("errands_trip") != std::string::npos);
    }
}

TEST_CASE("distance outside the ingestion range is rejected") {
    SyntheticSpec spec = testing::small_mnl_spec(2, 5);
    Dataset d = make_synthetic(spec);
    d.rows[0].attributes.distance_mi = 45.0;
    std::string csv = observations_to_csv(d);
    CHECK_THROWS_AS(parse_observations(csv, "bad"), DataError);
}

}  // TEST_SUITE
