#include "modeshift/dataset.hpp"

#include <algorithm>
#include <unordered_map>

#include "modeshift/csv.hpp"
#include "modeshift/utility.hpp"

namespace modeshift {

namespace {

const std::vector<std::string> kColumns = {
    "individual_id", "task_index", "chosen",
    "avail_walk", "avail_bike", "avail_car", "avail_transit", "avail_taxi", "avail_ab",
    "avail_abpt",
    "walk_min", "bike_min", "car_min", "transit_min", "abpt_bike_min", "abpt_total_min",
    "distance_mi", "taxi_wait_min", "pt_short_wait", "ab_cost_rate", "ab_wait_min",
    "I10", "I11",
    "high_income", "low_income", "full_time", "higher_ed", "children", "car_owner", "white",
    "woman", "older", "young", "student", "hot_summer", "harsh_winter",
    "work_trip", "leisure_trip", "errands_trip",
};

void validate_sp_structure(const ChoiceObservation& obs, std::size_t row) {
    auto fail = [&](const std::string& msg) {
        throw DataError("row " + std::to_string(row + 1) + ": " + msg);
    };
    if (!obs.availability.has(obs.chosen)) fail("chosen mode is not in the availability set");
    if (!obs.availability.has(Mode::Ab) || !obs.availability.has(Mode::Abpt)) {
        fail("both autonomous-bicycle alternatives must be available");
    }
    int conventional = 0;
    for (int m = 0; m < static_cast<int>(Mode::Ab); ++m) {
        if (obs.availability.has(static_cast<Mode>(m))) ++conventional;
    }
    if (conventional != 1) fail("exactly one conventional mode must be available");
    if (obs.task_index < 1 || obs.task_index > 6) fail("task_index must be in 1..6");
    if (obs.indicator_i10 < 0 || obs.indicator_i10 > 5 || obs.indicator_i11 < 0 ||
        obs.indicator_i11 > 5) {
        fail("indicators must be 1..5 (0 when missing)");
    }
    if (!(obs.ab_cost_rate >= 0.0)) fail("ab_cost_rate must be >= 0");
    if (!(obs.ab_wait_h >= 0.0)) fail("ab_wait_min must be >= 0");
    try {
        obs.attributes.validate();
        obs.socio.validate();
    } catch (const std::domain_error& e) {
        fail(e.what());
    }
}

Dataset from_table(const CsvTable& t, const std::string& origin, const CostBook& book) {
    std::unordered_map<std::string, std::size_t> col;
    for (const auto& name : kColumns) col[name] = t.column(name);

    std::vector<ChoiceObservation> rows;
    rows.reserve(t.n_rows());
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        ChoiceObservation o;
        o.individual_id = t.cell(r, col["individual_id"]);
        if (o.individual_id.empty()) {
            throw DataError(origin + ": row " + std::to_string(r + 1) + ": empty individual_id");
        }
        o.task_index = static_cast<int>(t.integer(r, col["task_index"]));
        o.chosen = mode_from_index(static_cast<int>(t.integer(r, col["chosen"])));

        static constexpr const char* kAvailCols[kNumModes] = {
            "avail_walk", "avail_bike", "avail_car", "avail_transit",
            "avail_taxi", "avail_ab",   "avail_abpt"};
        for (int m = 0; m < kNumModes; ++m) {
            if (t.flag(r, col[kAvailCols[m]])) o.availability.add(static_cast<Mode>(m));
        }

        TripAttributes& a = o.attributes;
        a.walk_time_h = t.number(r, col["walk_min"]) / 60.0;
        a.bike_time_h = t.number(r, col["bike_min"]) / 60.0;
        a.car_time_h = t.number(r, col["car_min"]) / 60.0;
        a.transit_time_h = t.number(r, col["transit_min"]) / 60.0;
        a.abpt_bike_time_h = t.number(r, col["abpt_bike_min"]) / 60.0;
        a.abpt_total_time_h = t.number(r, col["abpt_total_min"]) / 60.0;
        a.distance_mi = t.number(r, col["distance_mi"]);
        a.taxi_wait_h = t.number(r, col["taxi_wait_min"]) / 60.0;
        a.pt_short_wait = t.flag(r, col["pt_short_wait"]);

        o.ab_cost_rate = t.number(r, col["ab_cost_rate"]);
        o.ab_wait_h = t.number(r, col["ab_wait_min"]) / 60.0;
        o.indicator_i10 = static_cast<int>(t.integer(r, col["I10"]));
        o.indicator_i11 = static_cast<int>(t.integer(r, col["I11"]));

        Sociodemographics& s = o.socio;
        s.high_income = t.flag(r, col["high_income"]);
        s.low_income = t.flag(r, col["low_income"]);
        s.full_time = t.flag(r, col["full_time"]);
        s.higher_ed = t.flag(r, col["higher_ed"]);
        s.children = t.flag(r, col["children"]);
        s.car_owner = t.flag(r, col["car_owner"]);
        s.white = t.flag(r, col["white"]);
        s.woman = t.flag(r, col["woman"]);
        s.older = t.flag(r, col["older"]);
        s.young = t.flag(r, col["young"]);
        s.student = t.flag(r, col["student"]);
        s.hot_summer = t.flag(r, col["hot_summer"]);
        s.harsh_winter = t.flag(r, col["harsh_winter"]);
        s.work_trip = t.flag(r, col["work_trip"]);
        s.leisure_trip = t.flag(r, col["leisure_trip"]);
        s.errands_trip = t.flag(r, col["errands_trip"]);

        validate_sp_structure(o, r);
        o.costs_usd = mode_costs(a, book, o.ab_cost_rate);
        rows.push_back(std::move(o));
    }
    return Dataset::from_rows(std::move(rows));
}

}  // namespace

const std::vector<std::string>& observation_csv_columns() { return kColumns; }

Dataset Dataset::from_rows(std::vector<ChoiceObservation> rows) {
    Dataset d;
    d.rows = std::move(rows);
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        auto it = pos.find(d.rows[i].individual_id);
        if (it == pos.end()) {
            pos.emplace(d.rows[i].individual_id, d.individuals.size());
            d.individuals.push_back(IndividualBlock{d.rows[i].individual_id, {i}});
        } else {
            d.individuals[it->second].rows.push_back(i);
        }
    }
    for (auto& ind : d.individuals) {
        std::stable_sort(ind.rows.begin(), ind.rows.end(), [&](std::size_t a, std::size_t b) {
            return d.rows[a].task_index < d.rows[b].task_index;
        });
    }
    return d;
}

Dataset Dataset::subset(const std::vector<std::size_t>& individual_idx) const {
    std::vector<ChoiceObservation> out;
    for (std::size_t i : individual_idx) {
        for (std::size_t r : individuals[i].rows) out.push_back(rows[r]);
    }
    return from_rows(std::move(out));
}

Dataset parse_observations(const std::string& csv_text, const std::string& origin,
                           const CostBook& book) {
    return from_table(CsvTable::parse(csv_text, origin), origin, book);
}

Dataset load_observations(const std::string& path, const CostBook& book) {
    return from_table(CsvTable::read_file(path), path, book);
}

std::string observations_to_csv(const Dataset& data) {
    CsvWriter w(kColumns);
    for (const auto& o : data.rows) {
        const TripAttributes& a = o.attributes;
        const Sociodemographics& s = o.socio;
        auto f = format_number;
        std::vector<std::string> row = {
            o.individual_id,
            std::to_string(o.task_index),
            std::to_string(static_cast<int>(o.chosen)),
        };
        for (int m = 0; m < kNumModes; ++m) {
            row.push_back(o.availability.has(static_cast<Mode>(m)) ? "1" : "0");
        }
        row.insert(row.end(), {
            f(a.walk_time_h * 60.0), f(a.bike_time_h * 60.0), f(a.car_time_h * 60.0),
            f(a.transit_time_h * 60.0), f(a.abpt_bike_time_h * 60.0), f(a.abpt_total_time_h * 60.0),
            f(a.distance_mi), f(a.taxi_wait_h * 60.0), a.pt_short_wait ? "1" : "0",
            f(o.ab_cost_rate), f(o.ab_wait_h * 60.0),
            std::to_string(o.indicator_i10), std::to_string(o.indicator_i11),
            s.high_income ? "1" : "0", s.low_income ? "1" : "0", s.full_time ? "1" : "0",
            s.higher_ed ? "1" : "0", s.children ? "1" : "0", s.car_owner ? "1" : "0",
            s.white ? "1" : "0", s.woman ? "1" : "0", s.older ? "1" : "0", s.young ? "1" : "0",
            s.student ? "1" : "0", s.hot_summer ? "1" : "0", s.harsh_winter ? "1" : "0",
            s.work_trip ? "1" : "0", s.leisure_trip ? "1" : "0", s.errands_trip ? "1" : "0",
        });
        w.add_row(std::move(row));
    }
    return w.to_string();
}

}  // namespace modeshift
