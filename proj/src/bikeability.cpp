#include "modeshift/bikeability.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "modeshift/csv.hpp"
#include "modeshift/model_config.hpp"

namespace modeshift {

namespace {

const std::vector<std::string> kColumns = {
    "mode",   "time_min", "work_trip",  "leisure_trip", "errands_trip", "full_time", "woman",
    "older",  "student",  "higher_ed",  "children",     "harsh_winter", "bikeable",
};

// Regressor vector in (name, value) pairs; the utility is the dot product
// with the named coefficients.
struct Term {
    const char* name;
    double value;
};

std::vector<Term> terms_for(const BikeabilityRecord& r) {
    return {
        {"ASC", 1.0},
        {"B_walk", r.mode == Mode::Walk ? 1.0 : 0.0},
        {"B_PT", r.mode == Mode::Transit ? 1.0 : 0.0},
        {"B_taxi", r.mode == Mode::Taxi ? 1.0 : 0.0},
        {"B_time", r.time_h},
        {"B_fulltime", r.full_time ? 1.0 : 0.0},
        {"B_woman", r.woman ? 1.0 : 0.0},
        {"B_older", r.older ? 1.0 : 0.0},
        {"B_student", r.student ? 1.0 : 0.0},
        {"B_higher_ed", r.higher_ed ? 1.0 : 0.0},
        {"B_children", r.children ? 1.0 : 0.0},
        {"B_time_leisure", r.leisure_trip ? r.time_h : 0.0},
        {"B_harshwinter", r.harsh_winter ? 1.0 : 0.0},
    };
}

}  // namespace

const std::vector<std::string>& bikeability_csv_columns() { return kColumns; }

BikeabilityData parse_bikeability(const std::string& csv_text, const std::string& origin,
                                  bool require_label) {
    CsvTable t = CsvTable::parse(csv_text, origin);
    std::unordered_map<std::string, std::size_t> col;
    for (const auto& name : kColumns) {
        if (name == "bikeable" && !require_label && !t.has_column(name)) continue;
        col[name] = t.column(name);
    }
    BikeabilityData data;
    data.records.reserve(t.n_rows());
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        BikeabilityRecord rec;
        rec.mode = mode_from_index(static_cast<int>(t.integer(r, col["mode"])));
        double time_min = t.number(r, col["time_min"]);
        if (!(time_min >= 0.0)) {
            throw DataError(origin + ": row " + std::to_string(r + 1) + ": time_min must be >= 0");
        }
        rec.time_h = time_min / 60.0;
        rec.work_trip = t.flag(r, col["work_trip"]);
        rec.leisure_trip = t.flag(r, col["leisure_trip"]);
        rec.errands_trip = t.flag(r, col["errands_trip"]);
        rec.full_time = t.flag(r, col["full_time"]);
        rec.woman = t.flag(r, col["woman"]);
        rec.older = t.flag(r, col["older"]);
        rec.student = t.flag(r, col["student"]);
        rec.higher_ed = t.flag(r, col["higher_ed"]);
        rec.children = t.flag(r, col["children"]);
        rec.harsh_winter = t.flag(r, col["harsh_winter"]);
        if (col.count("bikeable")) rec.bikeable = t.flag(r, col["bikeable"]);
        data.records.push_back(rec);
    }
    return data;
}

BikeabilityData load_bikeability(const std::string& path, bool require_label) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_bikeability(text, path, require_label);
}

ParameterSet bikeability_reference_params() {
    ParameterSet p = default_parameter_set(ModelKind::Binary);
    p.set_value("ASC", 1.370);
    p.set_value("B_PT", 0.691);
    p.set_value("B_children", 0.100);
    p.set_value("B_fulltime", 0.147);
    p.set_value("B_harshwinter", 0.154);
    p.set_value("B_higher_ed", -0.123);
    p.set_value("B_older", -0.262);
    p.set_value("B_student", 0.239);
    p.set_value("B_taxi", 0.389);
    p.set_value("B_time", -0.540);
    p.set_value("B_time_leisure", 0.164);
    p.set_value("B_walk", 0.649);
    p.set_value("B_woman", -0.271);
    return p;
}

double bikeability_utility(const BikeabilityRecord& rec, const ParameterSet& params) {
    double v = 0.0;
    for (const Term& t : terms_for(rec)) v += params.get(t.name) * t.value;
    return v;
}

double bikeability_prob(const BikeabilityRecord& rec, const ParameterSet& params) {
    return 1.0 / (1.0 + std::exp(-bikeability_utility(rec, params)));
}

bool classify(const BikeabilityRecord& rec, const ParameterSet& params, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::domain_error("classification threshold must be in (0,1)");
    }
    return bikeability_prob(rec, params) >= threshold;
}

BinaryLikelihood::BinaryLikelihood(const BikeabilityData& data, ParameterSet params)
    : data_(data), tmpl_(std::move(params)) {
    for (std::size_t i = 0; i < data_.records.size(); ++i) {
        if (!data_.records[i].bikeable) {
            throw DataError("row " + std::to_string(i + 1) + ": missing bikeable label");
        }
    }
    free_idx_ = tmpl_.free_indices();
    // resolve all names up front so a missing coefficient fails loudly
    if (!data_.records.empty()) {
        for (const Term& t : terms_for(data_.records.front())) tmpl_.index_of(t.name);
    }
}

double BinaryLikelihood::null_loglik() const {
    return static_cast<double>(data_.records.size()) * std::log(0.5);
}

double BinaryLikelihood::eval(const std::vector<double>& w, std::vector<double>* grad,
                              std::vector<double>* scores) const {
    const std::size_t nf = free_idx_.size();
    if (w.size() != nf) throw std::logic_error("working vector size mismatch");
    ParameterSet p = params_from_working(w);

    std::vector<int> free_pos(tmpl_.size(), -1);
    for (std::size_t f = 0; f < nf; ++f) free_pos[free_idx_[f]] = static_cast<int>(f);

    if (grad) grad->assign(nf, 0.0);
    if (scores) scores->assign(data_.records.size() * nf, 0.0);

    double ll = 0.0;
    for (std::size_t i = 0; i < data_.records.size(); ++i) {
        const auto& rec = data_.records[i];
        double v = bikeability_utility(rec, p);
        double prob = 1.0 / (1.0 + std::exp(-v));
        double y = *rec.bikeable ? 1.0 : 0.0;
        double pc = y > 0.5 ? prob : 1.0 - prob;
        ll += std::log(std::max(pc, 1e-300));
        if (grad || scores) {
            double d = y - prob;  // dln/dV
            for (const Term& t : terms_for(rec)) {
                if (t.value == 0.0) continue;
                int slot = free_pos[tmpl_.index_of(t.name)];
                if (slot < 0) continue;
                double contrib = d * t.value;
                if (grad) (*grad)[slot] += contrib;
                if (scores) (*scores)[i * nf + slot] += contrib;
            }
        }
    }
    return ll;
}

}  // namespace modeshift
