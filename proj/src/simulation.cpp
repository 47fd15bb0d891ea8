#include "modeshift/simulation.hpp"

#include <cmath>
#include <fstream>

#include "modeshift/csv.hpp"
#include "modeshift/parallel.hpp"
#include "modeshift/sections.hpp"

namespace modeshift {

std::vector<ScenarioGrid::Cell> ScenarioGrid::cells() const {
    std::vector<Cell> out;
    out.reserve(cost_levels.size() * wait_levels_min.size());
    for (double c : cost_levels) {
        for (double w : wait_levels_min) out.push_back(Cell{c, w});
    }
    return out;
}

void ScenarioGrid::validate() const {
    if (cost_levels.empty() || wait_levels_min.empty()) {
        throw ConfigError("scenario grid needs at least one cost and one wait level");
    }
    for (double c : cost_levels) {
        if (!(c >= 0.0)) throw ConfigError("grid cost levels must be >= 0");
    }
    for (double w : wait_levels_min) {
        if (!(w >= 0.0)) throw ConfigError("grid wait levels must be >= 0");
    }
}

ScenarioGrid ScenarioGrid::parse(const std::string& text, const std::string& origin) {
    SectionFile f = SectionFile::parse(text, origin);
    const auto& sec = f.require("grid");
    ScenarioGrid g;
    if (auto v = SectionFile::value_of(sec, "costs")) {
        g.cost_levels = parse_double_list(*v, origin + ": costs");
    }
    if (auto v = SectionFile::value_of(sec, "waits")) {
        g.wait_levels_min = parse_double_list(*v, origin + ": waits");
    }
    g.validate();
    return g;
}

ScenarioGrid ScenarioGrid::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, path);
}

PredictionModel PredictionModel::from_estimation(const EstimationResult& est, CostBook book) {
    PredictionModel m;
    m.kind = est.kind;
    m.params = est.params;
    m.plan = est.plan;
    m.random_coefs = est.random_coefs.empty() && est.kind == ModelKind::Mixl
                         ? default_random_coefs()
                         : est.random_coefs;
    m.book = book;
    return m;
}

namespace {

struct HcmCache {
    double intercept, sigma_s, b_lv;
    std::array<double, 7> coefs;  // children, higher_ed, highincome, hotsummer, white, woman, young
};

HcmCache hcm_cache(const ParameterSet& p) {
    HcmCache c{};
    c.intercept = p.get("coef_intercept");
    c.sigma_s = p.get("sigma_s");
    c.b_lv = p.get("B_lv");
    c.coefs = {p.get("coef_children"), p.get("coef_higher_ed"), p.get("coef_highincome"),
               p.get("coef_hotsummer"), p.get("coef_white"),    p.get("coef_woman"),
               p.get("coef_young")};
    return c;
}

double hcm_lv_mean(const HcmCache& c, const Sociodemographics& s) {
    double lv = c.intercept;
    lv += c.coefs[0] * (s.children ? 1 : 0);
    lv += c.coefs[1] * (s.higher_ed ? 1 : 0);
    lv += c.coefs[2] * (s.high_income ? 1 : 0);
    lv += c.coefs[3] * (s.hot_summer ? 1 : 0);
    lv += c.coefs[4] * (s.white ? 1 : 0);
    lv += c.coefs[5] * (s.woman ? 1 : 0);
    lv += c.coefs[6] * (s.young ? 1 : 0);
    return lv;
}

struct MixCache {
    struct Entry {
        Coef coef;
        double mean;
        double sd;
    };
    std::vector<Entry> entries;
};

MixCache mix_cache(const ParameterSet& p, const std::vector<std::string>& names) {
    MixCache c;
    for (const auto& name : names) {
        Coef coef = Coef::Count;
        for (int ci = 0; ci < kNumCoefs; ++ci) {
            if (name == coef_param_name(static_cast<Coef>(ci))) coef = static_cast<Coef>(ci);
        }
        if (coef == Coef::Count) {
            throw ConfigError("random coefficient is not a utility parameter: " + name);
        }
        c.entries.push_back({coef, p.get(name), p.get(name + "_sd")});
    }
    return c;
}

}  // namespace

std::array<double, kNumModes> predict_trip(const ChoiceObservation& trip,
                                           const PredictionModel& model, double cost_rate,
                                           double wait_min) {
    if (!(cost_rate >= 0.0) || !(wait_min >= 0.0)) {
        throw std::domain_error("scenario cost and wait must be >= 0");
    }
    ChoiceObservation obs = trip;
    obs.ab_cost_rate = cost_rate;
    obs.ab_wait_h = wait_min / 60.0;
    obs.costs_usd = mode_costs(obs.attributes, model.book, cost_rate);
    obs.origin_mode();  // throws when the availability structure is broken

    UtilityCoeffs coeffs = UtilityCoeffs::from(model.params);

    switch (model.kind) {
        case ModelKind::Mnl:
            return mnl_prob(assemble_utilities(obs, coeffs, 0.0));
        case ModelKind::Mixl: {
            MixCache mc = mix_cache(model.params, model.random_coefs.empty()
                                                      ? default_random_coefs()
                                                      : model.random_coefs);
            int dims = static_cast<int>(mc.entries.size());
            std::vector<double> z = draws_for_individual(model.plan, obs.individual_id, dims);
            std::array<double, kNumModes> acc{};
            UtilityCoeffs draw = coeffs;
            for (int r = 0; r < model.plan.n_draws; ++r) {
                for (int d = 0; d < dims; ++d) {
                    const auto& e = mc.entries[d];
                    draw.value[static_cast<int>(e.coef)] = e.mean + e.sd * z[r * dims + d];
                }
                auto p = mnl_prob(assemble_utilities(obs, draw, 0.0));
                for (int m = 0; m < kNumModes; ++m) acc[m] += p[m];
            }
            for (int m = 0; m < kNumModes; ++m) acc[m] /= model.plan.n_draws;
            return acc;
        }
        case ModelKind::Hcm: {
            HcmCache hc = hcm_cache(model.params);
            double lv_mean = hcm_lv_mean(hc, obs.socio);
            if (model.lv_point_estimate) {
                return mnl_prob(assemble_utilities(obs, coeffs, -hc.b_lv * std::tanh(lv_mean)));
            }
            std::vector<double> z = draws_for_individual(model.plan, obs.individual_id, 1);
            std::array<double, kNumModes> acc{};
            for (int r = 0; r < model.plan.n_draws; ++r) {
                double lv = lv_mean + hc.sigma_s * z[r];
                auto p = mnl_prob(assemble_utilities(obs, coeffs, -hc.b_lv * std::tanh(lv)));
                for (int m = 0; m < kNumModes; ++m) acc[m] += p[m];
            }
            for (int m = 0; m < kNumModes; ++m) acc[m] /= model.plan.n_draws;
            return acc;
        }
        case ModelKind::Binary:
            throw ConfigError("bikeability models do not predict mode choice");
    }
    throw std::logic_error("unhandled model kind");
}

std::array<double, kNumModes> aggregate_shares(const std::vector<ChoiceObservation>& trips,
                                               const std::vector<double>& weights,
                                               const PredictionModel& model, double cost_rate,
                                               double wait_min) {
    if (trips.size() != weights.size()) throw DataError("weights not aligned to trips");
    if (trips.empty()) throw DataError("no trips to simulate");
    std::array<double, kNumModes> acc{};
    double total = 0.0;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        auto p = predict_trip(trips[i], model, cost_rate, wait_min);
        for (int m = 0; m < kNumModes; ++m) acc[m] += weights[i] * p[m];
        total += weights[i];
    }
    for (int m = 0; m < kNumModes; ++m) acc[m] /= total;
    return acc;
}

ShiftMatrix shift_matrix(const std::vector<ChoiceObservation>& trips,
                         const std::vector<double>& weights, const PredictionModel& model,
                         double cost_rate, double wait_min) {
    if (trips.size() != weights.size()) throw DataError("weights not aligned to trips");
    ShiftMatrix sm;
    double total = 0.0;
    for (double w : weights) total += w;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        int origin = static_cast<int>(trips[i].origin_mode());
        auto p = predict_trip(trips[i], model, cost_rate, wait_min);
        for (int m = 0; m < kNumModes; ++m) sm.flows[origin][m] += weights[i] * p[m] / total;
        sm.origin_share[origin] += weights[i] / total;
    }
    return sm;
}

std::array<double, kNumModes> combine_population(const std::array<double, kNumModes>& bikeable,
                                                 double bikeable_fraction,
                                                 const std::array<double, kNumModes>& nonbikeable) {
    if (!(bikeable_fraction >= 0.0 && bikeable_fraction <= 1.0)) {
        throw std::domain_error("bikeable fraction must be in [0,1]");
    }
    auto check = [](const std::array<double, kNumModes>& s, const char* which) {
        double sum = 0.0;
        for (double v : s) sum += v;
        if (std::fabs(sum - 1.0) > 1e-9) {
            throw std::domain_error(std::string(which) + " shares must sum to 1");
        }
    };
    check(bikeable, "bikeable");
    check(nonbikeable, "non-bikeable");
    std::array<double, kNumModes> out{};
    for (int m = 0; m < kNumModes; ++m) {
        out[m] = bikeable_fraction * bikeable[m] + (1.0 - bikeable_fraction) * nonbikeable[m];
    }
    return out;
}

std::vector<ScenarioCell> simulate_grid(const std::vector<ChoiceObservation>& trips,
                                        const std::vector<double>& weights,
                                        const PredictionModel& model, const ScenarioGrid& grid) {
    grid.validate();
    const auto cells = grid.cells();
    std::vector<ScenarioCell> out(cells.size());
    run_chunked(cells.size(), model.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            ScenarioCell sc;
            sc.cost_rate = cells[i].cost_rate;
            sc.wait_min = cells[i].wait_min;
            sc.shifts = shift_matrix(trips, weights, model, cells[i].cost_rate, cells[i].wait_min);
            for (int o = 0; o < kNumOrigins; ++o) {
                for (int m = 0; m < kNumModes; ++m) sc.shares[m] += sc.shifts.flows[o][m];
            }
            out[i] = std::move(sc);
        }
    });
    return out;
}

std::vector<ChoiceObservation> trips_from_dataset(const Dataset& data) {
    std::vector<ChoiceObservation> trips;
    trips.reserve(data.n_individuals());
    for (const auto& ind : data.individuals) trips.push_back(data.rows[ind.rows[0]]);
    return trips;
}

std::vector<double> align_weights(const std::vector<ChoiceObservation>& trips,
                                  const std::map<std::string, double>& weights) {
    std::vector<double> out;
    out.reserve(trips.size());
    for (const auto& t : trips) {
        if (weights.empty()) {
            out.push_back(1.0);
        } else {
            auto it = weights.find(t.individual_id);
            if (it == weights.end()) {
                throw DataError("no weight for individual " + t.individual_id);
            }
            out.push_back(it->second);
        }
    }
    return out;
}

std::string shares_csv(const std::vector<ScenarioCell>& cells) {
    std::vector<std::string> header = {"cell_id", "cost_usd_per_min", "wait_min"};
    for (int m = 0; m < kNumModes; ++m) header.push_back(std::string("share_") + kModeNames[m]);
    CsvWriter w(header);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::vector<std::string> row = {std::to_string(i), format_number(cells[i].cost_rate),
                                        format_number(cells[i].wait_min)};
        for (int m = 0; m < kNumModes; ++m) row.push_back(format_number(cells[i].shares[m]));
        w.add_row(std::move(row));
    }
    return w.to_string();
}

std::string shifts_csv(const std::vector<ScenarioCell>& cells) {
    CsvWriter w({"cell_id", "cost_usd_per_min", "wait_min", "origin", "destination", "flow"});
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (int o = 0; o < kNumOrigins; ++o) {
            for (int m = 0; m < kNumModes; ++m) {
                w.add_row({std::to_string(i), format_number(cells[i].cost_rate),
                           format_number(cells[i].wait_min), kModeNames[o], kModeNames[m],
                           format_number(cells[i].shifts.flows[o][m])});
            }
        }
    }
    return w.to_string();
}

}  // namespace modeshift
