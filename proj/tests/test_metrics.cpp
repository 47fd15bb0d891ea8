#include <cmath>

#include "doctest.h"
#include "modeshift/metrics.hpp"
#include "modeshift/synthetic.hpp"
#include "support/oracles.hpp"

using namespace modeshift;

TEST_SUITE("metrics") {

TEST_CASE("fold plan partitions individuals with near-equal sizes") {
    SyntheticSpec spec = testing::small_mnl_spec(53, 8);
    Dataset data = make_synthetic(spec);
    FoldPlan plan = FoldPlan::make(data, 5, 42);
    REQUIRE(plan.assignment.size() == 53);
    std::array<int, 5> sizes{};
    for (int f : plan.assignment) {
        REQUIRE(f >= 0);
        REQUIRE(f < 5);
        ++sizes[f];
    }
    int mn = *std::min_element(sizes.begin(), sizes.end());
    int mx = *std::max_element(sizes.begin(), sizes.end());
    CHECK(mx - mn <= 1);

    // deterministic given the seed, different across seeds
    FoldPlan again = FoldPlan::make(data, 5, 42);
    CHECK(again.assignment == plan.assignment);
    FoldPlan other = FoldPlan::make(data, 5, 43);
    CHECK(other.assignment != plan.assignment);

    CHECK_THROWS_AS(FoldPlan::make(data, 1, 1), ConfigError);
}

TEST_CASE("oracle predictions score perfect accuracy and zero share error") {
    SyntheticSpec spec = testing::small_mnl_spec(30, 17);
    Dataset data = make_synthetic(spec);
    std::vector<std::array<double, kNumModes>> probs;
    for (const auto& row : data.rows) {
        std::array<double, kNumModes> p{};
        p[static_cast<int>(row.chosen)] = 1.0;
        probs.push_back(p);
    }
    FoldMetrics fm = evaluate_predictions(data, probs);
    for (int m = 0; m < kNumModes; ++m) {
        if (fm.accuracy[m]) CHECK(*fm.accuracy[m] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(fm.share_mad[m] == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("uniform predictions give one-third expected accuracy per mode") {
    SyntheticSpec spec = testing::small_mnl_spec(800, 29);
    ModelConfig cfg;
    cfg.kind = ModelKind::Mnl;
    spec.params = build_parameter_set(cfg);  // all-zero utilities: uniform choices
    Dataset data = make_synthetic(spec);

    std::vector<std::array<double, kNumModes>> probs;
    for (const auto& row : data.rows) {
        std::array<double, kNumModes> p{};
        for (int m = 0; m < kNumModes; ++m) {
            if (row.availability.has(static_cast<Mode>(m))) p[m] = 1.0 / 3.0;
        }
        probs.push_back(p);
    }
    FoldMetrics fm = evaluate_predictions(data, probs, /*expected_accuracy=*/true);
    for (int m = 0; m < kNumModes; ++m) {
        REQUIRE(fm.accuracy[m].has_value());
        CHECK(*fm.accuracy[m] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("a mode never chosen in a fold is reported absent, not zero") {
    SyntheticSpec spec = testing::small_mnl_spec(10, 3);
    Dataset data = make_synthetic(spec);
    // force a dataset with no walk choices
    for (auto& row : data.rows) {
        if (row.chosen == Mode::Walk) row.chosen = row.origin_mode();
        if (row.chosen == Mode::Walk) row.chosen = Mode::Ab;
    }
    data = Dataset::from_rows(std::move(data.rows));
    std::vector<std::array<double, kNumModes>> probs(data.n_rows());
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        std::array<double, kNumModes> p{};
        p[static_cast<int>(data.rows[r].chosen)] = 1.0;
        probs[r] = p;
    }
    FoldMetrics fm = evaluate_predictions(data, probs);
    CHECK_FALSE(fm.accuracy[0].has_value());
}

TEST_CASE("cross-validation on an informative fixture beats chance") {
    SyntheticSpec spec = testing::small_mnl_spec(120, 404);
    Dataset data = make_synthetic(spec);
    ModelConfig cfg = testing::small_mnl_config();
    FoldPlan plan = FoldPlan::make(data, 5, 11);
    CvReport rep = cv_evaluate(data, cfg, plan);

    CHECK(rep.mean_accuracy.n_folds == 5);
    CHECK(rep.mean_accuracy.mean > 1.0 / 3.0);
    for (int m = 0; m < kNumModes; ++m) {
        if (rep.accuracy[m]) {
            CHECK(rep.accuracy[m]->mean >= 0.0);
            CHECK(rep.accuracy[m]->mean <= 1.0);
        }
        if (rep.share_mad[m]) CHECK(rep.share_mad[m]->mean >= 0.0);
    }

    // deterministic given the same plan
    CvReport rep2 = cv_evaluate(data, cfg, plan);
    CHECK(rep2.mean_accuracy.mean == rep.mean_accuracy.mean);

    std::string acc_csv = cv_accuracy_csv(rep);
    CHECK(acc_csv.find("mode,accuracy_mean,accuracy_sd") == 0);
    CHECK(acc_csv.find("mean_accuracy") != std::string::npos);
    CHECK(acc_csv.find("per_mode_std") != std::string::npos);
    std::string mad_csv = cv_share_mad_csv(rep);
    CHECK(mad_csv.find("mode,share_mad_mean,share_mad_sd") == 0);
}

TEST_CASE("value-of-time ratios from the reference estimates") {
    ParameterSet p = reference_hcm_params();
    CHECK(vot(p, "time") == doctest::Approx(10.0 * -1.84 / -1.17).epsilon(1e-12));
    CHECK(vot(p, "active") == doctest::Approx(10.0 * -4.64 / -1.17).epsilon(1e-12));
    CHECK(vot(p, "wait") == doctest::Approx(10.0 * -3.75 / -1.17).epsilon(1e-12));
    CHECK(std::fabs(vot(p, "time") - 15.7) < 0.1);
    CHECK(std::fabs(vot(p, "active") - 39.6) < 0.1);
    CHECK(std::fabs(vot(p, "wait") - 32.1) < 0.1);

    // invariant to a common rescaling of numerator and denominator
    ParameterSet q = p;
    q.set_value("B_time", p.get("B_time") * 4.0);
    q.set_value("B_cost", p.get("B_cost") * 4.0);
    CHECK(vot(q, "time") == doctest::Approx(vot(p, "time")).epsilon(1e-12));

    ParameterSet z = p;
    z.set_value("B_cost", 0.0);
    CHECK_THROWS_AS(vot(z, "time"), std::domain_error);
    CHECK_THROWS_AS(vot(p, "nonsense"), ConfigError);
}

}  // TEST_SUITE
