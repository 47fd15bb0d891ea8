#include "modeshift/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "modeshift/csv.hpp"
#include "modeshift/sections.hpp"

namespace modeshift {

std::size_t CategoricalSample::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == name) return i;
    throw ConfigError("raking variable not present in sample: " + name);
}

MarginTargets MarginTargets::parse(const std::string& text, const std::string& origin) {
    SectionFile f = SectionFile::parse(text, origin);
    MarginTargets t;
    for (const auto& sec : f.sections()) {
        auto& var = t.targets[sec.name];
        for (const auto& e : sec.entries) {
            if (e.value.empty()) {
                throw ConfigError(origin + ": [" + sec.name + "] " + e.key +
                                  ": expected 'category = proportion'");
            }
            var[e.key] = parse_double(e.value, origin + ": [" + sec.name + "] " + e.key);
        }
    }
    t.validate_and_normalize();
    return t;
}

MarginTargets MarginTargets::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open targets file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, path);
}

void MarginTargets::validate_and_normalize() {
    for (auto& [var, cats] : targets) {
        if (cats.empty()) throw ConfigError("margin targets for " + var + " are empty");
        for (auto& [cat, p] : cats) {
            if (!(p >= 0.0)) throw ConfigError("negative target proportion for " + var + "/" + cat);
        }
        // A lone 0/1 entry describes a binary flag; imply the complement.
        if (cats.size() == 1) {
            auto it = cats.begin();
            if (it->first == "1") {
                cats["0"] = 1.0 - it->second;
            } else if (it->first == "0") {
                cats["1"] = 1.0 - it->second;
            }
        }
        double sum = 0.0;
        for (auto& [cat, p] : cats) sum += p;
        if (std::fabs(sum - 1.0) > 0.05) {
            throw ConfigError("target proportions for " + var + " sum to " + format_number(sum) +
                              ", expected ~1");
        }
        // Margin tables are usually rounded; renormalize exactly.
        for (auto& [cat, p] : cats) p /= sum;
    }
}

IpfResult ipf_fit(const CategoricalSample& sample, const MarginTargets& targets, double tol,
                  int max_iter, double trim_quantile) {
    if (!(tol > 0.0)) throw ConfigError("ipf tolerance must be > 0");
    if (max_iter < 1) throw ConfigError("ipf max_iter must be >= 1");
    if (trim_quantile != 0.0 && !(trim_quantile > 0.0 && trim_quantile < 1.0)) {
        throw ConfigError("trim quantile must be in (0,1)");
    }
    const std::size_t n = sample.n_units();
    if (n == 0) throw DataError("ipf requires a nonempty sample");

    // Resolve variable/category structure once.
    struct Var {
        std::size_t col;
        std::vector<std::string> cats;
        std::vector<double> target;
        std::vector<int> unit_cat;  // per unit, index into cats
    };
    std::vector<Var> vars;
    for (const auto& [name, cats] : targets.targets) {
        Var v;
        v.col = sample.var_index(name);
        for (const auto& [cat, p] : cats) {
            v.cats.push_back(cat);
            v.target.push_back(p);
        }
        v.unit_cat.resize(n);
        std::vector<std::size_t> count(v.cats.size(), 0);
        for (std::size_t u = 0; u < n; ++u) {
            const std::string& label = sample.cells[u][v.col];
            auto it = std::find(v.cats.begin(), v.cats.end(), label);
            if (it == v.cats.end()) {
                throw DataError("sample category " + name + "/" + label +
                                " has no margin target");
            }
            v.unit_cat[u] = static_cast<int>(it - v.cats.begin());
            ++count[v.unit_cat[u]];
        }
        for (std::size_t c = 0; c < v.cats.size(); ++c) {
            if (v.target[c] > 0.0 && count[c] == 0) {
                throw DataError("margin target " + name + "/" + v.cats[c] +
                                " is positive but the sample cell is empty");
            }
        }
        vars.push_back(std::move(v));
    }

    IpfResult res;
    res.weights.assign(n, 1.0);
    std::vector<double> share;
    for (int sweep = 1; sweep <= max_iter; ++sweep) {
        for (const Var& v : vars) {
            share.assign(v.cats.size(), 0.0);
            double total = 0.0;
            for (std::size_t u = 0; u < n; ++u) {
                share[v.unit_cat[u]] += res.weights[u];
                total += res.weights[u];
            }
            for (std::size_t u = 0; u < n; ++u) {
                double s = share[v.unit_cat[u]];
                if (s > 0.0) res.weights[u] *= v.target[v.unit_cat[u]] * total / s;
            }
        }
        // convergence check on all margins
        double dev = 0.0;
        for (const Var& v : vars) {
            share.assign(v.cats.size(), 0.0);
            double total = 0.0;
            for (std::size_t u = 0; u < n; ++u) {
                share[v.unit_cat[u]] += res.weights[u];
                total += res.weights[u];
            }
            for (std::size_t c = 0; c < v.cats.size(); ++c) {
                dev = std::max(dev, std::fabs(share[c] / total - v.target[c]));
            }
        }
        res.sweeps = sweep;
        res.max_deviation = dev;
        if (dev < tol) {
            res.converged = true;
            break;
        }
    }
    if (trim_quantile > 0.0) {
        std::vector<double> sorted = res.weights;
        std::sort(sorted.begin(), sorted.end());
        double cap = sorted[static_cast<std::size_t>(trim_quantile * (n - 1))];
        for (double& w : res.weights) w = std::min(w, cap);
        // trimmed margins can drift; report the post-trim deviation
        double dev = 0.0;
        for (const auto& [var, gap] : margin_report(sample, res.weights, targets)) {
            (void)var;
            dev = std::max(dev, gap);
        }
        res.max_deviation = dev;
    }
    // mean weight 1
    double mean = 0.0;
    for (double w : res.weights) mean += w;
    mean /= static_cast<double>(n);
    for (double& w : res.weights) w /= mean;
    return res;
}

std::map<std::string, double> weighted_proportions(const CategoricalSample& sample,
                                                   const std::vector<double>& weights,
                                                   const std::string& variable) {
    if (weights.size() != sample.n_units()) {
        throw DataError("weight vector is not aligned to the sample");
    }
    std::size_t col = sample.var_index(variable);
    std::map<std::string, double> out;
    double total = 0.0;
    for (std::size_t u = 0; u < sample.n_units(); ++u) {
        out[sample.cells[u][col]] += weights[u];
        total += weights[u];
    }
    for (auto& [cat, w] : out) w /= total;
    return out;
}

std::map<std::string, double> margin_report(const CategoricalSample& sample,
                                            const std::vector<double>& weights,
                                            const MarginTargets& targets) {
    std::map<std::string, double> out;
    for (const auto& [name, cats] : targets.targets) {
        auto props = weighted_proportions(sample, weights, name);
        double dev = 0.0;
        for (const auto& [cat, p] : cats) {
            double share = props.count(cat) ? props[cat] : 0.0;
            dev = std::max(dev, std::fabs(share - p));
        }
        out[name] = dev;
    }
    return out;
}

CategoricalSample sample_from_dataset(const Dataset& data) {
    CategoricalSample s;
    s.variables = {"purpose",   "mode",    "woman",     "young",     "older",
                   "white",     "low_income", "high_income", "higher_ed", "student",
                   "full_time", "children", "hot_summer", "harsh_winter"};
    for (const auto& ind : data.individuals) {
        const ChoiceObservation& o = data.rows[ind.rows[0]];
        const Sociodemographics& d = o.socio;
        std::string purpose = d.work_trip ? "work"
                              : d.leisure_trip ? "leisure"
                              : d.errands_trip ? "errands"
                                               : "other";
        auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
        s.unit_ids.push_back(ind.id);
        s.cells.push_back({purpose, mode_name(o.origin_mode()), flag(d.woman), flag(d.young),
                           flag(d.older), flag(d.white), flag(d.low_income), flag(d.high_income),
                           flag(d.higher_ed), flag(d.student), flag(d.full_time), flag(d.children),
                           flag(d.hot_summer), flag(d.harsh_winter)});
    }
    return s;
}

void write_weights_csv(const std::string& path, const std::vector<std::string>& ids,
                       const std::vector<double>& weights) {
    CsvWriter w({"individual_id", "weight"});
    for (std::size_t i = 0; i < ids.size(); ++i) {
        w.add_row({ids[i], format_number(weights[i])});
    }
    w.write_file(path);
}

std::map<std::string, double> load_weights_csv(const std::string& path) {
    CsvTable t = CsvTable::read_file(path);
    std::size_t idc = t.column("individual_id");
    std::size_t wc = t.column("weight");
    std::map<std::string, double> out;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        double w = t.number(r, wc);
        if (!(w >= 0.0)) throw DataError(path + ": negative weight at row " + std::to_string(r + 1));
        out[t.cell(r, idc)] = w;
    }
    return out;
}

}  // namespace modeshift
