#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwpom/dynamics.hpp"
#include "dwpom/errors.hpp"
#include "dwpom/io.hpp"
#include "dwpom/simulation.hpp"
#include "dwpom/wpom.hpp"

namespace {

using dwpom::UsageError;
using nlohmann::json;

struct RunConfig {
    std::string command;
    std::string study = "1b";
    int households = 500;
    int replicates = 100;
    int scenario = 3;
    int study2_case = 1;
    std::string scheme = "m4";
    std::string schemes = "m4";
    int folds = 20;
    int replications = 25;
    std::uint64_t seed = 42;
    int replicate = 0;
    int stage = 0;
    std::string data_path;
    std::string spec_path;
    std::string fit_path;
    std::string out = ".";
    std::string config_path;
    int threads = 0;
    bool cv = false;
    bool strict_brant = false;
};

int env_threads() {
    const char* env = std::getenv("DWPOM_THREADS");
    if (env == nullptr) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

// Config file values fill in every option the command line left at its
// default; explicit flags always win. Unknown keys are rejected.
void apply_config_file(const RunConfig& cfg, CLI::App* sub,
                       const std::map<std::string, CLI::Option*>& options,
                       RunConfig& out) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw UsageError("cannot open config file '" + cfg.config_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw UsageError("config file '" + cfg.config_path + "': " + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
        auto it = options.find(key);
        if (it == options.end()) {
            throw UsageError("config file key '" + key + "' is not valid for command '" +
                             sub->get_name() + "'");
        }
        if (it->second->count() > 0) continue;  // flag overrides file
        try {
            if (key == "households") out.households = value;
            else if (key == "replicates") out.replicates = value;
            else if (key == "scenario") out.scenario = value;
            else if (key == "case") out.study2_case = value;
            else if (key == "scheme") out.scheme = value.get<std::string>();
            else if (key == "schemes") out.schemes = value.get<std::string>();
            else if (key == "folds") out.folds = value;
            else if (key == "replications") out.replications = value;
            else if (key == "seed") out.seed = value;
            else if (key == "replicate") out.replicate = value;
            else if (key == "stage") out.stage = value;
            else if (key == "study") out.study = value.get<std::string>();
            else if (key == "data") out.data_path = value.get<std::string>();
            else if (key == "spec") out.spec_path = value.get<std::string>();
            else if (key == "fit") out.fit_path = value.get<std::string>();
            else if (key == "out") out.out = value.get<std::string>();
            else if (key == "threads") out.threads = value;
            else if (key == "cv") out.cv = value;
            else if (key == "strict-brant") out.strict_brant = value;
        } catch (const json::exception& e) {
            throw UsageError("config file key '" + key + "': " + e.what());
        }
    }
}

dwpom::Study parse_study(const std::string& name) {
    if (name == "1a") return dwpom::Study::Study1a;
    if (name == "1b" || name == "1") return dwpom::Study::Study1b;
    if (name == "2") return dwpom::Study::Study2;
    throw UsageError("--study must be 1a, 1b or 2 (got '" + name + "')");
}

std::vector<dwpom::WeightScheme> parse_schemes(const std::string& csv) {
    std::vector<dwpom::WeightScheme> out;
    std::string token;
    std::stringstream ss(csv);
    while (std::getline(ss, token, ',')) {
        const auto scheme = dwpom::parse_scheme(token);
        if (!scheme) {
            throw UsageError("--schemes: unknown scheme '" + token + "'");
        }
        out.push_back(*scheme);
    }
    if (out.empty()) throw UsageError("--schemes: no schemes given");
    return out;
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["seed"] = cfg.seed;
    if (cfg.command == "simulate" || cfg.command == "montecarlo") {
        j["study"] = cfg.study;
        j["households"] = cfg.households;
    }
    if (cfg.command == "simulate") j["replicate"] = cfg.replicate;
    if (cfg.command == "montecarlo") {
        j["replicates"] = cfg.replicates;
        if (cfg.study == "1b") j["scenario"] = cfg.scenario;
        if (cfg.study == "2") {
            j["case"] = cfg.study2_case;
            j["replications"] = cfg.replications;
        }
        j["schemes"] = cfg.schemes;
        if (cfg.cv) j["folds"] = cfg.folds;
        j["cv"] = cfg.cv;
        j["threads"] = cfg.threads;
    }
    if (cfg.command == "estimate") {
        j["data"] = cfg.data_path;
        j["spec"] = cfg.spec_path;
        j["scheme"] = cfg.scheme;
        if (cfg.cv) j["folds"] = cfg.folds;
        j["cv"] = cfg.cv;
        j["replications"] = cfg.replications;
    }
    if (cfg.command == "decide") {
        j["fit"] = cfg.fit_path;
        j["data"] = cfg.data_path;
    }
    return j;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
}

void ensure_parent_dir(const std::string& file) {
    const std::filesystem::path parent = std::filesystem::path(file).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
}

int cmd_simulate(const RunConfig& cfg) {
    ensure_dir(cfg.out);
    const dwpom::Study study = parse_study(cfg.study);
    const dwpom::SimulatedData sim =
        study == dwpom::Study::Study2
            ? dwpom::gen_study2(cfg.households, cfg.seed, cfg.replicate)
            : dwpom::gen_study1(cfg.households, cfg.seed, cfg.replicate);

    const json echo = config_echo(cfg);
    dwpom::write_csv(cfg.out + "/dataset.csv", sim.data, echo);

    const int stages = static_cast<int>(sim.truth.optimal.size());
    std::vector<std::string> cols = {"household_id"};
    for (int j = 1; j <= stages; ++j) {
        cols.push_back("astar" + std::to_string(j) + "_s");
        cols.push_back("astar" + std::to_string(j) + "_r");
    }
    cols.push_back("mu");
    Eigen::MatrixXd values(sim.data.rows(), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index h = 0; h < sim.data.rows(); ++h) {
        Eigen::Index c = 0;
        values(h, c++) = static_cast<double>(h + 1);
        for (int j = 0; j < stages; ++j) {
            values(h, c++) = sim.truth.optimal[static_cast<std::size_t>(j)]
                                              [static_cast<std::size_t>(h)].a_s;
            values(h, c++) = sim.truth.optimal[static_cast<std::size_t>(j)]
                                              [static_cast<std::size_t>(h)].a_r;
        }
        values(h, c) = sim.truth.mu[h];
    }
    dwpom::write_csv(cfg.out + "/ground_truth.csv", dwpom::Dataset(cols, values), echo);
    std::cerr << "simulate: wrote " << cfg.out << "/dataset.csv and "
              << cfg.out << "/ground_truth.csv\n";
    return 0;
}

int cmd_estimate(const RunConfig& cfg) {
    const auto scheme = dwpom::parse_scheme(cfg.scheme);
    if (!scheme) throw UsageError("--scheme: unknown scheme '" + cfg.scheme + "'");
    const dwpom::Dataset data = dwpom::read_csv(cfg.data_path);
    if (!data.has("u")) {
        throw dwpom::SchemaError("'" + cfg.data_path + "': missing column u");
    }
    const std::vector<dwpom::ModelSpec> specs = dwpom::read_model_specs(cfg.spec_path);

    std::vector<dwpom::StageFitRecord> records;
    if (specs.size() == 1) {
        const dwpom::StageInputs inputs = resolve_spec(data, specs[0]);
        const Eigen::VectorXi u = data.int_col("u");
        dwpom::StageFitRecord rec;
        rec.stage = specs[0].stage;
        rec.spec = specs[0];
        rec.scheme = cfg.scheme;
        if (cfg.cv) {
            rec.fit = dwpom::cv_wpom(inputs, u, *scheme, cfg.folds, cfg.seed).averaged;
        } else {
            rec.fit = dwpom::wpom_fit(inputs, u, *scheme).final_fit;
        }
        records.push_back(rec);
    } else {
        dwpom::DwpomOptions options;
        options.scheme = *scheme;
        options.replications = cfg.replications;
        options.seed = cfg.seed;
        options.strict_brant = cfg.strict_brant;
        const dwpom::DwpomResult result = dwpom::dwpom_fit(data, specs, options);
        for (std::size_t j = 0; j < specs.size(); ++j) {
            for (const std::string& warning : result.per_stage[j].warnings) {
                std::cerr << "estimate: " << warning << "\n";
            }
            dwpom::StageFitRecord rec;
            rec.stage = specs[j].stage;
            rec.spec = specs[j];
            rec.scheme = cfg.scheme;
            rec.fit = result.per_stage[j].averaged;
            records.push_back(rec);
        }
    }
    ensure_parent_dir(cfg.out);
    dwpom::write_fit_json(cfg.out, records, config_echo(cfg));
    std::cerr << "estimate: wrote " << cfg.out << "\n";
    return 0;
}

int cmd_decide(const RunConfig& cfg) {
    const std::vector<dwpom::StageFitRecord> stages = dwpom::read_fit_json(cfg.fit_path);
    const dwpom::Dataset data = dwpom::read_csv(cfg.data_path);

    std::vector<std::string> cols;
    if (data.has("household_id")) cols.push_back("household_id");
    std::vector<const dwpom::StageFitRecord*> selected;
    for (const auto& s : stages) {
        if (cfg.stage != 0 && s.stage != cfg.stage) continue;
        selected.push_back(&s);
        cols.push_back("a" + std::to_string(s.stage) + "_s_rec");
        cols.push_back("a" + std::to_string(s.stage) + "_r_rec");
        cols.push_back("blip" + std::to_string(s.stage));
    }
    if (selected.empty()) {
        throw UsageError("--stage " + std::to_string(cfg.stage) +
                         " does not match any stage in '" + cfg.fit_path + "'");
    }

    Eigen::MatrixXd values(data.rows(), static_cast<Eigen::Index>(cols.size()));
    Eigen::Index c0 = 0;
    if (data.has("household_id")) {
        values.col(0) = data.col("household_id");
        c0 = 1;
    }
    for (const dwpom::StageFitRecord* s : selected) {
        const Eigen::MatrixXd xxi = select_columns(data, s->spec.xi_cols);
        const Eigen::MatrixXd xpsi = select_columns(data, s->spec.psi_cols);
        const Eigen::MatrixXd xphi = select_columns(data, s->spec.phi_cols);
        const dwpom::BlipParams blips{s->fit.xi, s->fit.psi, s->fit.phi};
        for (Eigen::Index h = 0; h < data.rows(); ++h) {
            const dwpom::TreatmentConfig rec =
                dwpom::optimal_config(xxi.row(h), xpsi.row(h), xphi.row(h), blips);
            values(h, c0) = rec.a_s;
            values(h, c0 + 1) = rec.a_r;
            values(h, c0 + 2) =
                dwpom::blip_value(rec, xxi.row(h), xpsi.row(h), xphi.row(h), blips);
        }
        c0 += 3;
    }
    ensure_parent_dir(cfg.out);
    dwpom::write_csv(cfg.out, dwpom::Dataset(cols, values), config_echo(cfg));
    std::cerr << "decide: wrote " << cfg.out << "\n";
    return 0;
}

int cmd_montecarlo(const RunConfig& cfg) {
    dwpom::MonteCarloConfig mc;
    mc.study = parse_study(cfg.study);
    mc.households = cfg.households;
    mc.replicates = cfg.replicates;
    mc.scenario = cfg.scenario;
    mc.study2_case = cfg.study2_case;
    mc.schemes = parse_schemes(cfg.schemes);
    mc.include_unaware = mc.study == dwpom::Study::Study1a;
    mc.include_cv = cfg.cv;
    mc.cv_folds = cfg.folds;
    mc.replications = cfg.replications;
    mc.seed = cfg.seed;
    mc.threads = cfg.threads;

    std::cerr << "montecarlo: study " << dwpom::study_name(mc.study) << ", H="
              << mc.households << ", B=" << mc.replicates << ", seed=" << mc.seed << "\n";
    ensure_dir(cfg.out);
    const dwpom::MonteCarloSummary summary = dwpom::run_monte_carlo(mc);
    const json echo = config_echo(cfg);
    dwpom::write_summary_csv(cfg.out + "/summary.csv", summary, echo);
    dwpom::write_summary_json(cfg.out + "/summary.json", summary, echo);
    std::cerr << "montecarlo: wrote " << cfg.out << "/summary.csv and "
              << cfg.out << "/summary.json";
    if (summary.replicates_failed > 0) {
        std::cerr << " (" << summary.replicates_failed << " replicates failed)";
    }
    std::cerr << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic weighted proportional odds models for household treatment decisions"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = env_threads();

    std::map<std::string, std::map<std::string, CLI::Option*>> opts;

    CLI::App* simulate = app.add_subcommand("simulate", "Generate a simulated dataset");
    opts["simulate"]["study"] = simulate->add_option("--study", cfg.study, "1a, 1b or 2");
    opts["simulate"]["households"] =
        simulate->add_option("--households", cfg.households, "number of households");
    opts["simulate"]["replicates"] =
        simulate->add_option("--replicates", cfg.replicates, "replicate budget (echoed)");
    opts["simulate"]["replicate"] =
        simulate->add_option("--replicate", cfg.replicate, "replicate index to generate");
    opts["simulate"]["seed"] = simulate->add_option("--seed", cfg.seed, "base seed");
    opts["simulate"]["out"] = simulate->add_option("--out", cfg.out, "output directory");
    simulate->add_option("--config", cfg.config_path, "JSON config file");

    CLI::App* estimate = app.add_subcommand("estimate", "Fit a decision model from CSV data");
    opts["estimate"]["data"] =
        estimate->add_option("--data", cfg.data_path, "household CSV")->required();
    opts["estimate"]["spec"] =
        estimate->add_option("--spec", cfg.spec_path, "model spec JSON")->required();
    opts["estimate"]["scheme"] =
        estimate->add_option("--scheme", cfg.scheme, "m0, m1, m2, m3 or m4");
    opts["estimate"]["cv"] = estimate->add_flag("--cv", cfg.cv, "cross-validated fit");
    opts["estimate"]["folds"] = estimate->add_option("--folds", cfg.folds, "CV folds");
    opts["estimate"]["replications"] = estimate->add_option(
        "--replications", cfg.replications, "pseudo-outcome draws per non-terminal stage");
    opts["estimate"]["strict-brant"] = estimate->add_flag(
        "--strict-brant", cfg.strict_brant, "abort when pseudo-outcomes fail the test");
    opts["estimate"]["seed"] = estimate->add_option("--seed", cfg.seed, "base seed");
    opts["estimate"]["out"] = estimate->add_option("--out", cfg.out, "fit JSON path");
    estimate->add_option("--config", cfg.config_path, "JSON config file");

    CLI::App* decide = app.add_subcommand("decide", "Apply a stored fit to households");
    opts["decide"]["fit"] =
        decide->add_option("--fit", cfg.fit_path, "fit JSON")->required();
    opts["decide"]["data"] =
        decide->add_option("--data", cfg.data_path, "household CSV")->required();
    opts["decide"]["stage"] =
        decide->add_option("--stage", cfg.stage, "stage to decide (default: all)");
    opts["decide"]["out"] = decide->add_option("--out", cfg.out, "output CSV path");
    decide->add_option("--config", cfg.config_path, "JSON config file");

    CLI::App* montecarlo =
        app.add_subcommand("montecarlo", "Run a simulation study and summarize");
    opts["montecarlo"]["study"] =
        montecarlo->add_option("--study", cfg.study, "1a, 1b or 2");
    opts["montecarlo"]["households"] =
        montecarlo->add_option("--households", cfg.households, "households per replicate");
    opts["montecarlo"]["replicates"] =
        montecarlo->add_option("--replicates", cfg.replicates, "Monte Carlo replicates");
    opts["montecarlo"]["scenario"] =
        montecarlo->add_option("--scenario", cfg.scenario, "study 1b scenario (1-4)");
    opts["montecarlo"]["case"] =
        montecarlo->add_option("--case", cfg.study2_case, "study 2 case (1 or 2)");
    opts["montecarlo"]["schemes"] =
        montecarlo->add_option("--schemes", cfg.schemes, "comma list of m0..m4");
    opts["montecarlo"]["cv"] =
        montecarlo->add_flag("--cv", cfg.cv, "also run the cross-validated variant (1a)");
    opts["montecarlo"]["folds"] = montecarlo->add_option("--folds", cfg.folds, "CV folds");
    opts["montecarlo"]["replications"] = montecarlo->add_option(
        "--replications", cfg.replications, "pseudo-outcome draws (study 2)");
    opts["montecarlo"]["seed"] = montecarlo->add_option("--seed", cfg.seed, "base seed");
    opts["montecarlo"]["threads"] =
        montecarlo->add_option("--threads", cfg.threads, "worker cap (DWPOM_THREADS)");
    opts["montecarlo"]["out"] = montecarlo->add_option("--out", cfg.out, "output directory");
    montecarlo->add_option("--config", cfg.config_path, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error [cli.usage]: " << e.what() << "\n";
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        apply_config_file(cfg, sub, opts[cfg.command], cfg);

        if (cfg.command == "simulate") return cmd_simulate(cfg);
        if (cfg.command == "estimate") return cmd_estimate(cfg);
        if (cfg.command == "decide") return cmd_decide(cfg);
        if (cfg.command == "montecarlo") return cmd_montecarlo(cfg);
        throw UsageError("unknown command");
    } catch (const UsageError& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 2;
    } catch (const dwpom::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return 1;
    }
}
