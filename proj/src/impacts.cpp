#include "modeshift/impacts.hpp"

#include <cmath>
#include <fstream>
#include <tuple>

#include "modeshift/csv.hpp"
#include "modeshift/parallel.hpp"
#include "modeshift/sections.hpp"

namespace modeshift {

void EmissionScenario::validate() const {
    if (car < 0 || taxi < 0 || bike < 0 || walk < 0 || transit < 0) {
        throw ConfigError("emission factors must be >= 0");
    }
}

EmissionScenario EmissionScenario::preset(const std::string& name) {
    // Car/taxi/bike/walk carry the bundled background assumptions; the
    // transit values are toolkit defaults (ICE bus high, metro low).
    if (name == "high") return {"high", 162, 91, 24, 0, 80};
    if (name == "low") return {"low", 108, 52, 0, 0, 30};
    if (name == "mixed") return {"mixed", 135, 72, 12, 0, 55};
    throw ConfigError("unknown emission preset: " + name);
}

double EmissionScenario::factor(Mode m) const {
    switch (m) {
        case Mode::Walk: return walk;
        case Mode::Bike: return bike;
        case Mode::Car: return car;
        case Mode::Transit: return transit;
        case Mode::Taxi: return taxi;
        default: throw std::domain_error("autonomous modes use the lifecycle table");
    }
}

AbLifecycleTable::AbLifecycleTable(std::vector<double> wait_levels_min,
                                   std::map<std::string, std::vector<double>> variants)
    : waits_(std::move(wait_levels_min)), variants_(std::move(variants)) {
    if (waits_.size() < 2) throw ConfigError("lifecycle table needs at least two wait levels");
    for (std::size_t i = 1; i < waits_.size(); ++i) {
        if (!(waits_[i] > waits_[i - 1])) {
            throw ConfigError("lifecycle wait levels must be strictly increasing");
        }
    }
    for (const auto& [name, vals] : variants_) {
        if (vals.size() != waits_.size()) {
            throw ConfigError("lifecycle variant " + name + " has " +
                              std::to_string(vals.size()) + " factors for " +
                              std::to_string(waits_.size()) + " wait levels");
        }
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!(vals[i] >= 0.0)) throw ConfigError("lifecycle factors must be >= 0");
            if (i > 0 && vals[i] > vals[i - 1] + 1e-12) {
                throw ConfigError("lifecycle variant " + name +
                                  " must be non-increasing in wait time");
            }
        }
    }
}

AbLifecycleTable AbLifecycleTable::defaults() {
    return AbLifecycleTable(
        {1, 3, 5, 7, 10, 15},
        {
            {"Baseline", {83.5, 57.5, 45.2, 42.5, 40.0, 38.1}},
            {"LongLifespan", {63.9, 48.3, 40.9, 39.3, 37.8, 36.7}},
            {"ShortLifespan", {181.8, 103.7, 66.9, 58.6, 51.2, 45.6}},
            {"HighInfrastructure", {104.6, 78.6, 66.4, 63.6, 61.2, 59.3}},
        });
}

const std::vector<std::string> AbLifecycleTable::variant_names() const {
    std::vector<std::string> out;
    for (const auto& [name, vals] : variants_) out.push_back(name);
    return out;
}

bool AbLifecycleTable::has_variant(const std::string& name) const {
    return variants_.count(name) != 0;
}

double AbLifecycleTable::factor(const std::string& variant, double wait_min,
                                bool interpolate) const {
    auto it = variants_.find(variant);
    if (it == variants_.end()) throw ConfigError("unknown lifecycle variant: " + variant);
    const auto& vals = it->second;
    if (wait_min < waits_.front() - 1e-12 || wait_min > waits_.back() + 1e-12) {
        throw std::domain_error("wait level " + format_number(wait_min) +
                                " is outside the lifecycle table range");
    }
    for (std::size_t i = 0; i < waits_.size(); ++i) {
        if (std::fabs(wait_min - waits_[i]) < 1e-9) return vals[i];
    }
    if (!interpolate) {
        throw std::domain_error("wait level " + format_number(wait_min) +
                                " is not in the lifecycle table and interpolation is disabled");
    }
    std::size_t hi = 1;
    while (waits_[hi] < wait_min) ++hi;
    double t = (wait_min - waits_[hi - 1]) / (waits_[hi] - waits_[hi - 1]);
    return vals[hi - 1] + t * (vals[hi] - vals[hi - 1]);
}

EmissionConfig EmissionConfig::parse(const std::string& text, const std::string& origin) {
    SectionFile f = SectionFile::parse(text, origin);
    EmissionConfig cfg;
    const auto& bg = f.require("background");
    if (auto v = SectionFile::value_of(bg, "preset")) {
        cfg.background = EmissionScenario::preset(*v);
    }
    auto set = [&](const char* key, double& field) {
        if (auto v = SectionFile::value_of(bg, key)) {
            field = parse_double(*v, origin + std::string(": background ") + key);
        }
    };
    if (auto v = SectionFile::value_of(bg, "name")) cfg.background.name = *v;
    set("car", cfg.background.car);
    set("taxi", cfg.background.taxi);
    set("bike", cfg.background.bike);
    set("walk", cfg.background.walk);
    set("transit", cfg.background.transit);
    if (!SectionFile::value_of(bg, "preset") && !SectionFile::value_of(bg, "transit")) {
        throw ConfigError(origin + ": a transit emission factor is required (no bundled default)");
    }
    cfg.background.validate();

    if (const auto* ab = f.find("ab_lifecycle")) {
        auto waits_s = SectionFile::value_of(*ab, "waits");
        if (!waits_s) throw ConfigError(origin + ": [ab_lifecycle] needs a waits list");
        std::vector<double> waits = parse_double_list(*waits_s, origin + ": waits");
        std::map<std::string, std::vector<double>> variants;
        for (const auto& e : ab->entries) {
            if (e.key == "waits") continue;
            variants[e.key] = parse_double_list(e.value, origin + ": " + e.key);
        }
        if (variants.empty()) throw ConfigError(origin + ": [ab_lifecycle] has no variants");
        cfg.ab_table = AbLifecycleTable(std::move(waits), std::move(variants));
    } else {
        cfg.ab_table = AbLifecycleTable::defaults();
    }
    if (const auto* opt = f.find("options")) {
        if (auto v = SectionFile::value_of(*opt, "interpolate")) {
            cfg.interpolate = parse_bool(*v, origin + ": interpolate");
        }
    }
    return cfg;
}

EmissionConfig EmissionConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open emissions file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, path);
}

double trip_emissions(const ChoiceObservation& trip,
                      const std::array<double, kNumModes>& mode_probabilities, double wait_min,
                      const EmissionScenario& scenario, const AbLifecycleTable& ab_table,
                      const std::string& variant, bool interpolate) {
    const double dist_km = trip.attributes.distance_mi * kMilesToKm;
    double total = 0.0;
    for (int m = 0; m < kNumModes; ++m) {
        double p = mode_probabilities[m];
        if (p == 0.0) continue;
        Mode mode = static_cast<Mode>(m);
        double g;
        if (mode == Mode::Ab) {
            g = ab_table.factor(variant, wait_min, interpolate) * dist_km;
        } else if (mode == Mode::Abpt) {
            double bike_frac = trip.attributes.abpt_total_time_h > 0.0
                                   ? trip.attributes.abpt_bike_time_h /
                                         trip.attributes.abpt_total_time_h
                                   : 0.0;
            g = ab_table.factor(variant, wait_min, interpolate) * dist_km * bike_frac +
                scenario.transit * dist_km * (1.0 - bike_frac);
        } else {
            g = scenario.factor(mode) * dist_km;
        }
        total += p * g;
    }
    return total;
}

double scenario_total(const std::vector<ChoiceObservation>& trips,
                      const std::vector<double>& weights, const PredictionModel& model,
                      double cost_rate, double wait_min, const EmissionScenario& scenario,
                      const AbLifecycleTable& ab_table, const std::string& variant,
                      bool interpolate) {
    if (trips.size() != weights.size()) throw DataError("weights not aligned to trips");
    double total = 0.0;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        auto p = predict_trip(trips[i], model, cost_rate, wait_min);
        total += weights[i] *
                 trip_emissions(trips[i], p, wait_min, scenario, ab_table, variant, interpolate);
    }
    return total;
}

double baseline_total(const std::vector<ChoiceObservation>& trips,
                      const std::vector<double>& weights, const EmissionScenario& scenario) {
    if (trips.size() != weights.size()) throw DataError("weights not aligned to trips");
    double total = 0.0;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        double g = scenario.factor(trips[i].origin_mode()) * trips[i].attributes.distance_mi *
                   kMilesToKm;
        total += weights[i] * g;
    }
    return total;
}

double relative_change(double total_with_ab, double total_baseline) {
    if (!(total_baseline > 0.0)) {
        throw std::domain_error("relative change requires a positive baseline total");
    }
    return 100.0 * (total_with_ab - total_baseline) / total_baseline;
}

std::vector<ImpactCell> impact_grid(const std::vector<ChoiceObservation>& trips,
                                    const std::vector<double>& weights,
                                    const PredictionModel& model, const ScenarioGrid& grid,
                                    const EmissionScenario& scenario,
                                    const AbLifecycleTable& ab_table, const std::string& variant,
                                    bool interpolate) {
    grid.validate();
    const double base = baseline_total(trips, weights, scenario);
    const auto cells = grid.cells();
    std::vector<ImpactCell> out(cells.size());
    run_chunked(cells.size(), model.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double with_ab = scenario_total(trips, weights, model, cells[i].cost_rate,
                                            cells[i].wait_min, scenario, ab_table, variant,
                                            interpolate);
            out[i] = ImpactCell{cells[i].cost_rate, cells[i].wait_min,
                                relative_change(with_ab, base)};
        }
    });
    return out;
}

std::string impacts_csv(
    const std::vector<std::tuple<std::string, std::string, std::vector<ImpactCell>>>& tables) {
    CsvWriter w({"scenario", "variant", "cost_usd_per_min", "wait_min", "percent_change"});
    for (const auto& [scenario, variant, cells] : tables) {
        for (const auto& c : cells) {
            w.add_row({scenario, variant, format_number(c.cost_rate), format_number(c.wait_min),
                       format_number(c.percent_change)});
        }
    }
    return w.to_string();
}

}  // namespace modeshift
