#include <cmath>

#include "doctest.h"
#include "modeshift/impacts.hpp"
#include "modeshift/synthetic.hpp"
#include "support/oracles.hpp"

using namespace modeshift;

namespace {

ChoiceObservation km_trip(double km, Mode origin) {
    ChoiceObservation o;
    o.individual_id = "T1";
    o.attributes.distance_mi = km / kMilesToKm;
    o.attributes.bike_time_h = 0.4;
    o.attributes.abpt_bike_time_h = 0.1;
    o.attributes.abpt_total_time_h = 0.4;
    o.availability = Availability::of({origin, Mode::Ab, Mode::Abpt});
    o.chosen = origin;
    return o;
}

std::array<double, kNumModes> pure(Mode m) {
    std::array<double, kNumModes> p{};
    p[static_cast<int>(m)] = 1.0;
    return p;
}

}  // namespace

TEST_SUITE("impacts") {

TEST_CASE("single-mode trips reproduce the factor table arithmetic") {
    auto table = AbLifecycleTable::defaults();
    EmissionScenario high = EmissionScenario::preset("high");
    EmissionScenario mixed = EmissionScenario::preset("mixed");

    ChoiceObservation trip = km_trip(10.0, Mode::Car);
    CHECK(trip_emissions(trip, pure(Mode::Walk), 7.0, high, table) == doctest::Approx(0.0));
    CHECK(trip_emissions(trip, pure(Mode::Car), 7.0, high, table) ==
          doctest::Approx(1620.0).epsilon(1e-9));
    CHECK(trip_emissions(trip, pure(Mode::Car), 7.0, mixed, table) ==
          doctest::Approx(1350.0).epsilon(1e-9));
    CHECK(trip_emissions(trip, pure(Mode::Ab), 7.0, mixed, table) ==
          doctest::Approx(425.0).epsilon(1e-9));

    // combined mode splits distance by travel-time shares
    double bike_frac = 0.1 / 0.4;
    double expected = 42.5 * 10.0 * bike_frac + mixed.transit * 10.0 * (1.0 - bike_frac);
    CHECK(trip_emissions(trip, pure(Mode::Abpt), 7.0, mixed, table) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("emissions are linear in distance and probabilities") {
    auto table = AbLifecycleTable::defaults();
    EmissionScenario mixed = EmissionScenario::preset("mixed");
    ChoiceObservation t1 = km_trip(4.0, Mode::Car);
    ChoiceObservation t2 = km_trip(8.0, Mode::Car);
    auto p = pure(Mode::Car);
    CHECK(trip_emissions(t2, p, 5.0, mixed, table) ==
          doctest::Approx(2.0 * trip_emissions(t1, p, 5.0, mixed, table)).epsilon(1e-12));

    std::array<double, kNumModes> half{};
    half[2] = 0.5;
    half[5] = 0.5;
    double mixed_g = trip_emissions(t1, half, 5.0, mixed, table);
    double car_g = trip_emissions(t1, pure(Mode::Car), 5.0, mixed, table);
    double ab_g = trip_emissions(t1, pure(Mode::Ab), 5.0, mixed, table);
    CHECK(mixed_g == doctest::Approx(0.5 * car_g + 0.5 * ab_g).epsilon(1e-12));
}

TEST_CASE("lifecycle factors interpolate in wait and reject out-of-range") {
    auto table = AbLifecycleTable::defaults();
    CHECK(table.factor("Baseline", 7.0) == doctest::Approx(42.5).epsilon(1e-12));
    CHECK(table.factor("Baseline", 8.5) == doctest::Approx((42.5 + 40.0) / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(table.factor("Baseline", 0.5), std::domain_error);
    CHECK_THROWS_AS(table.factor("Baseline", 20.0), std::domain_error);
    CHECK_THROWS_AS(table.factor("Baseline", 8.5, /*interpolate=*/false), std::domain_error);
    CHECK_THROWS_AS(table.factor("NoSuchVariant", 7.0), ConfigError);

    // shipped variants are non-increasing in wait
    for (const auto& name : table.variant_names()) {
        double prev = 1e9;
        for (double w : {1.0, 3.0, 5.0, 7.0, 10.0, 15.0}) {
            double f = table.factor(name, w);
            CHECK(f <= prev + 1e-12);
            prev = f;
        }
    }
}

TEST_CASE("background ordering low <= mixed <= high for populations without biking") {
    auto table = AbLifecycleTable::defaults();
    ChoiceObservation trip = km_trip(6.0, Mode::Car);
    for (Mode m : {Mode::Walk, Mode::Car, Mode::Transit, Mode::Taxi}) {
        double lo = trip_emissions(trip, pure(m), 5.0, EmissionScenario::preset("low"), table);
        double mid = trip_emissions(trip, pure(m), 5.0, EmissionScenario::preset("mixed"), table);
        double hi = trip_emissions(trip, pure(m), 5.0, EmissionScenario::preset("high"), table);
        CHECK(lo <= mid + 1e-12);
        CHECK(mid <= hi + 1e-12);
    }
}

TEST_CASE("relative change arithmetic") {
    CHECK(relative_change(100.0, 100.0) == doctest::Approx(0.0));
    CHECK(relative_change(0.0, 500.0) == doctest::Approx(-100.0).epsilon(1e-12));
    CHECK(relative_change(425.0, 1350.0) ==
          doctest::Approx(100.0 * (425.0 - 1350.0) / 1350.0).epsilon(1e-12));
    CHECK(std::fabs(relative_change(425.0, 1350.0) + 68.5) < 0.1);
    CHECK_THROWS_AS(relative_change(1.0, 0.0), std::domain_error);
    // invariant to uniform weight rescaling happens upstream; here the
    // ratio itself is scale-free
    CHECK(relative_change(850.0, 2700.0) ==
          doctest::Approx(relative_change(425.0, 1350.0)).epsilon(1e-12));
}

TEST_CASE("population totals match a brute-force oracle") {
    SyntheticSpec spec;
    spec.n_individuals = 20;
    spec.seed = 5150;
    spec.dgp = ModelKind::Hcm;
    spec.params = reference_hcm_params();
    Dataset data = make_synthetic(spec);
    auto trips = trips_from_dataset(data);
    std::vector<double> weights;
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        s = mix64(s);
        weights.push_back(0.5 + (static_cast<double>(s >> 11) / 9007199254740992.0));
    }

    PredictionModel model;
    model.kind = ModelKind::Hcm;
    model.params = reference_hcm_params();
    model.plan = DrawPlan{60, 2, DrawKind::Halton};

    auto table = AbLifecycleTable::defaults();
    EmissionScenario mixed = EmissionScenario::preset("mixed");
    double total = scenario_total(trips, weights, model, 0.2, 5.0, mixed, table, "Baseline");

    double brute = 0.0;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        auto p = predict_trip(trips[i], model, 0.2, 5.0);
        double g = 0.0;
        double km = trips[i].attributes.distance_mi * kMilesToKm;
        double bike_frac =
            trips[i].attributes.abpt_bike_time_h / trips[i].attributes.abpt_total_time_h;
        g += p[0] * 0.0 + p[1] * 12.0 * km + p[2] * 135.0 * km + p[3] * mixed.transit * km +
             p[4] * 72.0 * km;
        g += p[5] * 45.2 * km;
        g += p[6] * (45.2 * km * bike_frac + mixed.transit * km * (1.0 - bike_frac));
        brute += weights[i] * g;
    }
    CHECK(total == doctest::Approx(brute).epsilon(1e-9));

    // baseline uses original modes with probability one
    double base = baseline_total(trips, weights, mixed);
    double brute_base = 0.0;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        double km = trips[i].attributes.distance_mi * kMilesToKm;
        brute_base += weights[i] * mixed.factor(trips[i].origin_mode()) * km;
    }
    CHECK(base == doctest::Approx(brute_base).epsilon(1e-12));

    // uniform weight rescaling leaves the relative change unchanged
    std::vector<double> scaled = weights;
    for (double& w : scaled) w *= 7.5;
    double total2 = scenario_total(trips, scaled, model, 0.2, 5.0, mixed, table, "Baseline");
    double base2 = baseline_total(trips, scaled, mixed);
    CHECK(relative_change(total2, base2) ==
          doctest::Approx(relative_change(total, base)).epsilon(1e-12));
}

TEST_CASE("impact grid emits one value per cell and zero when adoption is off") {
    SyntheticSpec spec;
    spec.n_individuals = 10;
    spec.seed = 31;
    spec.dgp = ModelKind::Hcm;
    spec.params = reference_hcm_params();
    Dataset data = make_synthetic(spec);
    auto trips = trips_from_dataset(data);
    std::vector<double> weights(trips.size(), 1.0);

    PredictionModel model;
    model.kind = ModelKind::Hcm;
    model.params = reference_hcm_params();
    model.plan = DrawPlan{40, 4, DrawKind::Halton};

    ScenarioGrid grid;
    auto table = AbLifecycleTable::defaults();
    auto cells = impact_grid(trips, weights, model, grid, EmissionScenario::preset("mixed"),
                             table, "Baseline");
    CHECK(cells.size() == 30);

    // forcing adoption off: autonomous modes made hopeless via the cost coefficient
    PredictionModel off = model;
    off.params.set_value("ASC_ab", -60.0);
    off.params.set_value("ASC_abpt", -60.0);
    off.params.set_value("B_lv", 0.0);
    auto zero_cells = impact_grid(trips, weights, off, grid, EmissionScenario::preset("mixed"),
                                  table, "Baseline");
    for (const auto& c : zero_cells) {
        CHECK(std::fabs(c.percent_change) < 1e-6);
    }
}

TEST_CASE("emission config parsing") {
    EmissionConfig cfg = EmissionConfig::parse(
        "[background]\npreset = mixed\n[options]\ninterpolate = false\n", "t");
    CHECK(cfg.background.car == doctest::Approx(135.0));
    CHECK_FALSE(cfg.interpolate);

    EmissionConfig custom = EmissionConfig::parse(
        "[background]\nname = city\ncar = 100\ntaxi = 60\nbike = 5\nwalk = 0\ntransit = 40\n"
        "[ab_lifecycle]\nwaits = 1, 5\nBaseline = 80, 40\n",
        "t");
    CHECK(custom.background.transit == doctest::Approx(40.0));
    CHECK(custom.ab_table.factor("Baseline", 5.0) == doctest::Approx(40.0));

    // transit factor is mandatory without a preset
    CHECK_THROWS_AS(
        EmissionConfig::parse("[background]\ncar = 100\ntaxi = 60\nbike = 5\nwalk = 0\n", "t"),
        ConfigError);

    // increasing lifecycle rows are rejected
    CHECK_THROWS_AS(EmissionConfig::parse("[background]\npreset = low\n[ab_lifecycle]\n"
                                          "waits = 1, 5\nBaseline = 40, 80\n",
                                          "t"),
                    ConfigError);
}

}  // TEST_SUITE
