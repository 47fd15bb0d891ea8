#include "modeshift/model_spec.hpp"

#include <fstream>
#include <sstream>

#include "modeshift/sections.hpp"
#include "modeshift/types.hpp"

namespace modeshift {

ModelConfig parse_model_spec(const std::string& text, const std::string& origin) {
    SectionFile f = SectionFile::parse(text, origin);
    ModelConfig cfg;

    const auto& model = f.require("model");
    auto kind = SectionFile::value_of(model, "kind");
    if (!kind) throw ConfigError(origin + ": [model] needs kind = mnl|mixl|hcm|bikeability");
    cfg.kind = model_kind_from_name(*kind);
    if (auto v = SectionFile::value_of(model, "draws")) {
        cfg.plan.n_draws = static_cast<int>(parse_long(*v, origin + ": draws"));
    }
    if (auto v = SectionFile::value_of(model, "seed")) {
        cfg.plan.seed = static_cast<std::uint64_t>(parse_long(*v, origin + ": seed"));
    }
    if (auto v = SectionFile::value_of(model, "sequence")) {
        cfg.plan.kind = draw_kind_from_name(*v);
    }
    if (auto v = SectionFile::value_of(model, "max_iter")) {
        cfg.max_iterations = static_cast<int>(parse_long(*v, origin + ": max_iter"));
    }
    if (auto v = SectionFile::value_of(model, "grad_tol")) {
        cfg.gradient_tol = parse_double(*v, origin + ": grad_tol");
    }
    if (auto v = SectionFile::value_of(model, "divergence_bound")) {
        cfg.divergence_bound = parse_double(*v, origin + ": divergence_bound");
    }
    if (auto v = SectionFile::value_of(model, "estimate_sigma_s")) {
        cfg.estimate_sigma_s = parse_bool(*v, origin + ": estimate_sigma_s");
    }
    if (auto v = SectionFile::value_of(model, "threads")) {
        cfg.threads = static_cast<int>(parse_long(*v, origin + ": threads"));
    }

    if (const auto* rnd = f.find("random")) {
        for (const auto& e : rnd->entries) {
            if (!e.value.empty()) {
                throw ConfigError(origin + ": [random] lists coefficient names only");
            }
            cfg.random_coefs.push_back(e.key);
        }
    }
    if (cfg.kind == ModelKind::Mixl && cfg.random_coefs.empty()) {
        cfg.random_coefs = default_random_coefs();
    }

    if (const auto* pars = f.find("parameters")) {
        for (const auto& e : pars->entries) {
            ModelConfig::ParamInit init;
            init.name = e.key;
            std::istringstream ss(e.value);
            std::string value_tok, flag_tok;
            if (!(ss >> value_tok)) {
                throw ConfigError(origin + ": parameter " + e.key + " needs a starting value");
            }
            init.value = parse_double(value_tok, origin + ": parameter " + e.key);
            if (ss >> flag_tok) {
                if (flag_tok == "fixed") init.fixed = true;
                else if (flag_tok == "free") init.fixed = false;
                else throw ConfigError(origin + ": parameter " + e.key +
                                       ": expected 'fixed' or 'free', got '" + flag_tok + "'");
            }
            std::string extra;
            if (ss >> extra) {
                throw ConfigError(origin + ": parameter " + e.key + ": trailing token '" + extra + "'");
            }
            cfg.param_overrides.push_back(std::move(init));
        }
    }

    // Fail early on malformed layouts.
    build_parameter_set(cfg);
    return cfg;
}

ModelConfig load_model_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model spec: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_model_spec(text, path);
}

CostBook parse_cost_book(const std::string& text, const std::string& origin) {
    SectionFile f = SectionFile::parse(text, origin);
    const auto& sec = f.require("cost_book");
    CostBook book;
    auto set = [&](const char* key, double& field) {
        if (auto v = SectionFile::value_of(sec, key)) {
            field = parse_double(*v, origin + ": " + key);
        }
    };
    set("car_usd_per_mile", book.car_usd_per_mile);
    set("pt_usd_per_trip", book.pt_usd_per_trip);
    set("taxi_fixed_usd", book.taxi_fixed_usd);
    set("taxi_usd_per_mile", book.taxi_usd_per_mile);
    set("taxi_usd_per_min", book.taxi_usd_per_min);
    try {
        book.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return book;
}

CostBook load_cost_book(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open cost book: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_cost_book(text, path);
}

}  // namespace modeshift
