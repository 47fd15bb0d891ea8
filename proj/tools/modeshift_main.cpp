// Command-line front end for the demand toolkit: estimation, raking,
// scenario simulation, impact accounting, and cross-validation, wired
// together through CSV/JSON artifacts. Exit codes: 0 success,
// 1 non-convergence, 2 input error, 3 config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modeshift/bikeability.hpp"
#include "modeshift/csv.hpp"
#include "modeshift/estimation.hpp"
#include "modeshift/impacts.hpp"
#include "modeshift/manifest.hpp"
#include "modeshift/metrics.hpp"
#include "modeshift/model_spec.hpp"
#include "modeshift/sections.hpp"
#include "modeshift/simulation.hpp"
#include "modeshift/synthetic.hpp"
#include "modeshift/weighting.hpp"

namespace fs = std::filesystem;
using namespace modeshift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitInputError = 2;
constexpr int kExitConfigError = 3;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

// Config paths (only) may come from the environment when the flag is
// absent.
void env_fallback(std::string& value, const char* var) {
    if (!value.empty()) return;
    if (const char* v = std::getenv(var)) value = v;
}

CostBook cost_book_for(std::string path) {
    env_fallback(path, "MODESHIFT_COST_BOOK");
    return path.empty() ? CostBook{} : load_cost_book(path);
}

// Warn when the params file was estimated from different inputs than the
// ones supplied now (digest comparison against its sibling manifest).
void check_stale_inputs(const std::string& params_path, const std::string& data_path) {
    fs::path manifest = fs::path(params_path).parent_path() / "manifest.json";
    if (!fs::exists(manifest)) return;
    try {
        std::ifstream in(manifest);
        nlohmann::json j = nlohmann::json::parse(in);
        if (!j.contains("inputs") || !j["inputs"].contains("data")) return;
        std::string recorded = j["inputs"]["data"].value("digest", "");
        if (!recorded.empty() && recorded != file_digest(data_path)) {
            std::cerr << "warning: " << data_path
                      << " differs from the data the parameter file was estimated on"
                         " (stale manifest)\n";
        }
    } catch (...) {
        // unreadable manifest is not an error for downstream commands
    }
}

struct EstimateArgs {
    std::string model;  // defaults to mnl when no spec names a kind
    std::string data;
    std::string spec;
    std::string cost_book;
    std::string out = "out";
    int draws = -1;
    long seed = -1;
    std::string sequence;
    int threads = 1;
    int max_iter = -1;
};

int cmd_estimate(EstimateArgs a) {
    env_fallback(a.spec, "MODESHIFT_SPEC");
    ModelConfig cfg;
    if (!a.spec.empty()) {
        cfg = load_model_spec(a.spec);
        if (!a.model.empty() && model_kind_from_name(a.model) != cfg.kind) {
            throw ConfigError("--model disagrees with the spec file's kind");
        }
    } else {
        cfg.kind = model_kind_from_name(a.model.empty() ? "mnl" : a.model);
        if (cfg.kind == ModelKind::Mixl) cfg.random_coefs = default_random_coefs();
    }
    if (a.draws > 0) cfg.plan.n_draws = a.draws;
    if (a.seed >= 0) cfg.plan.seed = static_cast<std::uint64_t>(a.seed);
    if (!a.sequence.empty()) cfg.plan.kind = draw_kind_from_name(a.sequence);
    if (a.max_iter > 0) cfg.max_iterations = a.max_iter;
    cfg.threads = a.threads;

    EstimationResult res;
    if (cfg.kind == ModelKind::Binary) {
        BikeabilityData data = load_bikeability(a.data, /*require_label=*/true);
        BinaryLikelihood lik(data, build_parameter_set(cfg));
        res = estimate(lik, cfg);
    } else {
        Dataset data = load_observations(a.data, cost_book_for(a.cost_book));
        res = estimate(data, cfg);
    }

    fs::path dir = prepare_out_dir(a.out);
    res.save((dir / "estimate.json").string());

    RunManifest man;
    man.command = "estimate";
    man.version = kVersion;
    man.seed = cfg.plan.seed;
    man.add_input("data", a.data);
    if (!a.spec.empty()) man.add_input("spec", a.spec);
    man.outputs = {"estimate.json"};
    man.write(dir.string());

    std::cout << "model=" << model_kind_name(res.kind) << " ll=" << format_number(res.fit.ll)
              << " aic=" << format_number(res.fit.aic)
              << " converged=" << (res.converged ? "yes" : "no") << "\n";
    if (!res.converged) {
        std::cerr << "warning: estimation did not converge: " << res.message << "\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

struct WeightArgs {
    std::string data;
    std::string targets;
    std::string cost_book;
    std::string out = "out";
    double tol = 1e-6;
    int max_iter = 200;
    double trim = 0.0;  // 0 = no trimming
};

int cmd_weight(WeightArgs a) {
    env_fallback(a.targets, "MODESHIFT_TARGETS");
    if (a.targets.empty()) throw ConfigError("weight needs --targets (or MODESHIFT_TARGETS)");
    Dataset data = load_observations(a.data, cost_book_for(a.cost_book));
    MarginTargets targets = MarginTargets::load(a.targets);
    CategoricalSample sample = sample_from_dataset(data);
    IpfResult res = ipf_fit(sample, targets, a.tol, a.max_iter, a.trim);

    fs::path dir = prepare_out_dir(a.out);
    write_weights_csv((dir / "weights.csv").string(), sample.unit_ids, res.weights);

    CsvWriter margins({"variable", "max_abs_deviation"});
    for (const auto& [var, dev] : margin_report(sample, res.weights, targets)) {
        margins.add_row({var, format_number(dev)});
    }
    margins.write_file((dir / "margins.csv").string());

    RunManifest man;
    man.command = "weight";
    man.version = kVersion;
    man.add_input("data", a.data);
    man.add_input("targets", a.targets);
    man.outputs = {"weights.csv", "margins.csv"};
    man.write(dir.string());

    std::cout << "sweeps=" << res.sweeps << " max_deviation=" << format_number(res.max_deviation)
              << " converged=" << (res.converged ? "yes" : "no") << "\n";
    return res.converged ? kExitOk : kExitNotConverged;
}

struct SimulateArgs {
    std::string data;
    std::string params;
    std::string weights;
    std::string grid;
    std::string cost_book;
    bool lv_point = false;
    std::string out = "out";
    int draws = -1;
    long seed = -1;
    int threads = 1;
    double bikeable_fraction = -1.0;
    std::string nonbikeable_shares;  // comma list of 7
};

int cmd_simulate(SimulateArgs a) {
    env_fallback(a.grid, "MODESHIFT_GRID");
    CostBook book = cost_book_for(a.cost_book);
    Dataset data = load_observations(a.data, book);
    check_stale_inputs(a.params, a.data);
    EstimationResult est = EstimationResult::load(a.params);
    PredictionModel model = PredictionModel::from_estimation(est, book);
    if (a.draws > 0) model.plan.n_draws = a.draws;
    if (a.seed >= 0) model.plan.seed = static_cast<std::uint64_t>(a.seed);
    model.threads = a.threads;
    model.lv_point_estimate = a.lv_point;

    ScenarioGrid grid;
    if (!a.grid.empty()) grid = ScenarioGrid::load(a.grid);

    auto trips = trips_from_dataset(data);
    std::map<std::string, double> wmap;
    if (!a.weights.empty()) wmap = load_weights_csv(a.weights);
    auto weights = align_weights(trips, wmap);

    auto cells = simulate_grid(trips, weights, model, grid);

    fs::path dir = prepare_out_dir(a.out);
    write_text((dir / "shares.csv").string(), shares_csv(cells));
    write_text((dir / "shifts.csv").string(), shifts_csv(cells));
    std::vector<std::string> outputs = {"shares.csv", "shifts.csv"};

    if (a.bikeable_fraction >= 0.0) {
        if (a.nonbikeable_shares.empty()) {
            throw ConfigError("--bikeable-fraction needs --nonbikeable-shares");
        }
        auto baseline = parse_double_list(a.nonbikeable_shares, "--nonbikeable-shares");
        if (baseline.size() != static_cast<std::size_t>(kNumModes)) {
            throw ConfigError("--nonbikeable-shares must list 7 values");
        }
        std::array<double, kNumModes> nb{};
        for (int m = 0; m < kNumModes; ++m) nb[m] = baseline[m];
        std::vector<std::string> header = {"cell_id", "cost_usd_per_min", "wait_min"};
        for (int m = 0; m < kNumModes; ++m) {
            header.push_back(std::string("share_") + kModeNames[m]);
        }
        CsvWriter w(header);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            auto total = combine_population(cells[i].shares, a.bikeable_fraction, nb);
            std::vector<std::string> row = {std::to_string(i), format_number(cells[i].cost_rate),
                                            format_number(cells[i].wait_min)};
            for (int m = 0; m < kNumModes; ++m) row.push_back(format_number(total[m]));
            w.add_row(std::move(row));
        }
        w.write_file((dir / "total_shares.csv").string());
        outputs.push_back("total_shares.csv");
    }

    RunManifest man;
    man.command = "simulate";
    man.version = kVersion;
    man.seed = model.plan.seed;
    man.add_input("data", a.data);
    man.add_input("params", a.params);
    if (!a.weights.empty()) man.add_input("weights", a.weights);
    if (!a.grid.empty()) man.add_input("grid", a.grid);
    man.outputs = outputs;
    man.write(dir.string());

    std::cout << "cells=" << cells.size() << "\n";
    return kExitOk;
}

struct ImpactArgs {
    std::string data;
    std::string params;
    std::string weights;
    std::string grid;
    std::string emissions;
    std::string cost_book;
    bool lv_point = false;
    std::string variant = "all";
    std::string out = "out";
    int draws = -1;
    long seed = -1;
    int threads = 1;
};

int cmd_impact(ImpactArgs a) {
    env_fallback(a.grid, "MODESHIFT_GRID");
    env_fallback(a.emissions, "MODESHIFT_EMISSIONS");
    if (a.emissions.empty()) throw ConfigError("impact needs --emissions (or MODESHIFT_EMISSIONS)");
    CostBook book = cost_book_for(a.cost_book);
    Dataset data = load_observations(a.data, book);
    check_stale_inputs(a.params, a.data);
    EstimationResult est = EstimationResult::load(a.params);
    PredictionModel model = PredictionModel::from_estimation(est, book);
    if (a.draws > 0) model.plan.n_draws = a.draws;
    if (a.seed >= 0) model.plan.seed = static_cast<std::uint64_t>(a.seed);
    model.threads = a.threads;
    model.lv_point_estimate = a.lv_point;

    ScenarioGrid grid;
    if (!a.grid.empty()) grid = ScenarioGrid::load(a.grid);
    EmissionConfig emis = EmissionConfig::load(a.emissions);

    auto trips = trips_from_dataset(data);
    std::map<std::string, double> wmap;
    if (!a.weights.empty()) wmap = load_weights_csv(a.weights);
    auto weights = align_weights(trips, wmap);

    std::vector<std::string> variants;
    if (a.variant == "all") {
        variants = emis.ab_table.variant_names();
    } else {
        if (!emis.ab_table.has_variant(a.variant)) {
            throw ConfigError("unknown lifecycle variant: " + a.variant);
        }
        variants = {a.variant};
    }

    std::vector<std::tuple<std::string, std::string, std::vector<ImpactCell>>> tables;
    for (const auto& variant : variants) {
        tables.emplace_back(emis.background.name, variant,
                            impact_grid(trips, weights, model, grid, emis.background,
                                        emis.ab_table, variant, emis.interpolate));
    }

    fs::path dir = prepare_out_dir(a.out);
    write_text((dir / "impacts.csv").string(), impacts_csv(tables));

    RunManifest man;
    man.command = "impact";
    man.version = kVersion;
    man.seed = model.plan.seed;
    man.add_input("data", a.data);
    man.add_input("params", a.params);
    man.add_input("emissions", a.emissions);
    if (!a.weights.empty()) man.add_input("weights", a.weights);
    if (!a.grid.empty()) man.add_input("grid", a.grid);
    man.outputs = {"impacts.csv"};
    man.write(dir.string());

    std::cout << "tables=" << tables.size() << "\n";
    return kExitOk;
}

struct ValidateArgs {
    std::string data;
    std::string spec;
    std::string cost_book;
    std::string out = "out";
    int folds = 5;
    long seed = 1;
    int threads = 1;
};

int cmd_validate(ValidateArgs a) {
    env_fallback(a.spec, "MODESHIFT_SPEC");
    if (a.spec.empty()) throw ConfigError("validate needs --spec (or MODESHIFT_SPEC)");
    Dataset data = load_observations(a.data, cost_book_for(a.cost_book));
    ModelConfig cfg = load_model_spec(a.spec);
    cfg.threads = a.threads;
    FoldPlan plan = FoldPlan::make(data, a.folds, static_cast<std::uint64_t>(a.seed));
    CvReport rep = cv_evaluate(data, cfg, plan);

    fs::path dir = prepare_out_dir(a.out);
    write_text((dir / "cv_accuracy.csv").string(), cv_accuracy_csv(rep));
    write_text((dir / "cv_share_mad.csv").string(), cv_share_mad_csv(rep));

    RunManifest man;
    man.command = "validate";
    man.version = kVersion;
    man.seed = static_cast<std::uint64_t>(a.seed);
    man.add_input("data", a.data);
    man.add_input("spec", a.spec);
    man.outputs = {"cv_accuracy.csv", "cv_share_mad.csv"};
    man.write(dir.string());

    std::cout << "mean_accuracy=" << format_number(rep.mean_accuracy.mean) << "\n";
    return kExitOk;
}

struct ClassifyArgs {
    std::string data;
    std::string params;
    std::string out = "out";
    double threshold = 0.5;
    bool reference = false;
};

int cmd_classify(const ClassifyArgs& a) {
    BikeabilityData data = load_bikeability(a.data, /*require_label=*/false);
    ParameterSet params;
    if (a.reference) {
        params = bikeability_reference_params();
    } else {
        if (a.params.empty()) throw ConfigError("classify needs --params or --reference");
        params = EstimationResult::load(a.params).params;
    }

    // echo the input table with prob and class columns appended
    CsvTable raw = CsvTable::read_file(a.data);
    std::vector<std::string> header = raw.header();
    header.push_back("prob");
    header.push_back("bikeable_class");
    CsvWriter w(header);
    std::size_t n_bikeable = 0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        double prob = bikeability_prob(data.records[i], params);
        bool cls = classify(data.records[i], params, a.threshold);
        n_bikeable += cls ? 1 : 0;
        std::vector<std::string> row;
        for (std::size_t c = 0; c < raw.header().size(); ++c) row.push_back(raw.cell(i, c));
        row.push_back(format_number(prob));
        row.push_back(cls ? "1" : "0");
        w.add_row(std::move(row));
    }
    fs::path dir = prepare_out_dir(a.out);
    w.write_file((dir / "classified.csv").string());

    RunManifest man;
    man.command = "classify";
    man.version = kVersion;
    man.add_input("data", a.data);
    if (!a.params.empty()) man.add_input("params", a.params);
    man.outputs = {"classified.csv"};
    man.write(dir.string());

    std::cout << "bikeable=" << n_bikeable << "/" << data.records.size() << "\n";
    return kExitOk;
}

struct VotArgs {
    std::string params;
};

int cmd_vot(const VotArgs& a) {
    ParameterSet params = EstimationResult::load(a.params).params;
    std::cout << "time=" << format_number(vot(params, "time"))
              << " active=" << format_number(vot(params, "active"))
              << " wait=" << format_number(vot(params, "wait")) << " USD/h\n";
    return kExitOk;
}

struct FixtureArgs {
    std::string out = "fixture.csv";
    int individuals = 200;
    long seed = 7;
    std::string dgp = "hcm";
};

int cmd_make_fixture(const FixtureArgs& a) {
    SyntheticSpec spec;
    spec.n_individuals = static_cast<std::size_t>(a.individuals);
    spec.seed = static_cast<std::uint64_t>(a.seed);
    spec.dgp = model_kind_from_name(a.dgp);
    if (spec.dgp == ModelKind::Hcm) {
        spec.params = reference_hcm_params();
    } else if (spec.dgp == ModelKind::Mnl) {
        // shared utility block of the reference estimates, without the LV part
        ParameterSet ref = reference_hcm_params();
        ModelConfig cfg;
        cfg.kind = ModelKind::Mnl;
        ParameterSet mnl = build_parameter_set(cfg);
        for (std::size_t i = 0; i < mnl.size(); ++i) {
            mnl.at(i).value = ref.get(mnl.at(i).name);
        }
        spec.params = mnl;
    } else {
        throw ConfigError("--dgp must be mnl or hcm");
    }
    Dataset data = make_synthetic(spec);
    write_text(a.out, observations_to_csv(data));
    std::cout << "rows=" << data.n_rows() << " individuals=" << data.n_individuals() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modeshift: discrete-choice estimation and scenario simulation toolkit"};
    app.require_subcommand(1);

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "Estimate a choice or bikeability model");
    est->add_option("--model", ea.model, "mnl|mixl|hcm|bikeability");
    est->add_option("--data", ea.data, "observations CSV")->required();
    est->add_option("--spec", ea.spec, "model specification file");
    est->add_option("--draws", ea.draws, "simulation draws per individual");
    est->add_option("--seed", ea.seed, "draw seed");
    est->add_option("--sequence", ea.sequence, "halton|pseudo");
    est->add_option("--threads", ea.threads, "worker cap (does not affect results)");
    est->add_option("--max-iter", ea.max_iter, "optimizer iteration cap");
    est->add_option("--cost-book", ea.cost_book, "unit-cost config file");
    est->add_option("--out", ea.out, "output directory")->required();

    WeightArgs wa;
    auto* wgt = app.add_subcommand("weight", "Rake sample weights to margin targets");
    wgt->add_option("--data", wa.data, "observations CSV")->required();
    wgt->add_option("--targets", wa.targets, "margin targets file");
    wgt->add_option("--tol", wa.tol, "margin tolerance");
    wgt->add_option("--max-iter", wa.max_iter, "sweep cap");
    wgt->add_option("--trim", wa.trim, "cap weights at this quantile (0 = off)");
    wgt->add_option("--cost-book", wa.cost_book, "unit-cost config file");
    wgt->add_option("--out", wa.out, "output directory")->required();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Predict shares and shifts over the scenario grid");
    sim->add_option("--data", sa.data, "observations CSV")->required();
    sim->add_option("--params", sa.params, "estimate.json from a previous run")->required();
    sim->add_option("--weights", sa.weights, "weights CSV");
    sim->add_option("--grid", sa.grid, "grid config file");
    sim->add_option("--draws", sa.draws, "override prediction draws");
    sim->add_option("--seed", sa.seed, "override draw seed");
    sim->add_option("--threads", sa.threads, "worker cap (does not affect results)");
    sim->add_option("--bikeable-fraction", sa.bikeable_fraction,
                    "bikeable share of all trips, for combined totals");
    sim->add_option("--nonbikeable-shares", sa.nonbikeable_shares,
                    "7 comma-separated baseline shares of non-bikeable trips");
    sim->add_option("--cost-book", sa.cost_book, "unit-cost config file");
    sim->add_flag("--lv-point", sa.lv_point, "use the structural-mean attitude (no draws)");
    sim->add_option("--out", sa.out, "output directory")->required();

    ImpactArgs ia;
    auto* imp = app.add_subcommand("impact", "Relative emission change per scenario cell");
    imp->add_option("--data", ia.data, "observations CSV")->required();
    imp->add_option("--params", ia.params, "estimate.json from a previous run")->required();
    imp->add_option("--weights", ia.weights, "weights CSV");
    imp->add_option("--grid", ia.grid, "grid config file");
    imp->add_option("--emissions", ia.emissions, "emission config file");
    imp->add_option("--variant", ia.variant, "lifecycle variant or 'all'");
    imp->add_option("--cost-book", ia.cost_book, "unit-cost config file");
    imp->add_flag("--lv-point", ia.lv_point, "use the structural-mean attitude (no draws)");
    imp->add_option("--draws", ia.draws, "override prediction draws");
    imp->add_option("--seed", ia.seed, "override draw seed");
    imp->add_option("--threads", ia.threads, "worker cap (does not affect results)");
    imp->add_option("--out", ia.out, "output directory")->required();

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "K-fold out-of-sample evaluation");
    val->add_option("--data", va.data, "observations CSV")->required();
    val->add_option("--spec", va.spec, "model specification file");
    val->add_option("--folds", va.folds, "number of folds");
    val->add_option("--cost-book", va.cost_book, "unit-cost config file");
    val->add_option("--seed", va.seed, "fold split seed");
    val->add_option("--threads", va.threads, "worker cap (does not affect results)");
    val->add_option("--out", va.out, "output directory")->required();

    ClassifyArgs ca;
    auto* cls = app.add_subcommand("classify", "Score trips with a bikeability model");
    cls->add_option("--data", ca.data, "bikeability CSV")->required();
    cls->add_option("--params", ca.params, "estimate.json of a bikeability model");
    cls->add_flag("--reference", ca.reference, "use the bundled reference coefficients");
    cls->add_option("--threshold", ca.threshold, "classification threshold");
    cls->add_option("--out", ca.out, "output directory")->required();

    VotArgs vo;
    auto* votc = app.add_subcommand("vot", "Value-of-time ratios from estimated parameters");
    votc->add_option("--params", vo.params, "estimate.json")->required();

    FixtureArgs fa;
    auto* fix = app.add_subcommand("make-fixture", "Generate a synthetic observations CSV");
    fix->add_option("--out", fa.out, "output CSV path");
    fix->add_option("--individuals", fa.individuals, "number of individuals");
    fix->add_option("--seed", fa.seed, "generator seed");
    fix->add_option("--dgp", fa.dgp, "mnl|hcm generating model");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) return cmd_estimate(ea);
        if (wgt->parsed()) return cmd_weight(wa);
        if (sim->parsed()) return cmd_simulate(sa);
        if (imp->parsed()) return cmd_impact(ia);
        if (val->parsed()) return cmd_validate(va);
        if (cls->parsed()) return cmd_classify(ca);
        if (votc->parsed()) return cmd_vot(vo);
        if (fix->parsed()) return cmd_make_fixture(fa);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DataError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
