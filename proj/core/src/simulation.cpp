#include "dwpom/simulation.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "dwpom/errors.hpp"
#include "dwpom/math.hpp"

namespace dwpom {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reference cumulative probabilities behind the outcome thresholds.
const double kStudy1Zeta1 = logit(0.65);
const double kStudy1Zeta2 = logit(0.90);
const double kStudy2Zeta1 = logit(0.60);
const double kStudy2Zeta2 = logit(0.85);

int draw_outcome(double mu, double zeta1, double zeta2, Rng& rng) {
    const double c1 = expit(zeta1 - mu);
    const double c2 = expit(zeta2 - mu);
    const double p[3] = {c1, c2 - c1, 1.0 - c2};
    return 1 + rng.categorical(p, 3);
}

enum Channel : std::uint64_t { kGen = 0, kValue = 1, kCv = 2, kDynamic = 3 };

Rng replicate_stream(std::uint64_t seed, int replicate, Channel channel) {
    return Rng::stream(seed, static_cast<std::uint64_t>(replicate) * 8 + channel);
}

}  // namespace

TreatmentConfig gen_correlated_treatments(double p_s, double p_r, double tau, Rng& rng) {
    const PropensityTable t = propensity_table(p_s, p_r, tau);
    const double p[4] = {t.pi00, t.pi10, t.pi01, t.pi11};
    const int cell = rng.categorical(p, 4);
    return {cell == 1 || cell == 3 ? 1 : 0, cell == 2 || cell == 3 ? 1 : 0};
}

Study1Truth::Study1Truth() {
    blips.xi = Eigen::Vector2d(-0.5, 1.0);
    blips.psi = Eigen::Vector2d(-0.5, 1.0);
    blips.phi = Eigen::Vector2d(-1.0, 0.5);
}

SimulatedData gen_study1(int households, std::uint64_t seed, int replicate,
                         const Study1Truth& truth) {
    const int H = households;
    Rng rng = replicate_stream(seed, replicate, kGen);

    const std::vector<std::string> cols = {
        "household_id", "x1_s", "x2_s", "x3_s", "x4_s", "x1_r", "x2_r", "x3_r", "x4_r",
        "exp_x1_s", "exp_x1_r", "x2sq_s", "x2sq_r", "x1_sum", "x3_sum",
        "cos_x1_sum", "x1_sum_cu", "log_x1_s", "x1sq_r", "x3_sum_cu",
        "a1_s", "a1_r", "u"};
    Eigen::MatrixXd v(H, static_cast<Eigen::Index>(cols.size()));

    SimulatedData out;
    out.truth.blips = {truth.blips};
    out.truth.optimal.resize(1);
    out.truth.optimal[0].resize(static_cast<std::size_t>(H));
    out.truth.mu.resize(H);

    for (int h = 0; h < H; ++h) {
        const double x1s = rng.uniform();
        const double x2s = rng.normal();
        const double x3s = rng.bernoulli(0.5);
        const double x4s = rng.bernoulli(0.75);
        const double x1r = rng.uniform();
        const double x2r = rng.normal();
        const double x3r = rng.bernoulli(0.5);
        const double x4r = rng.bernoulli(0.75);

        auto marginal = [](double x1, double x2, double x3, double x4) {
            return expit(-1.15 + 0.5 * std::exp(x1) - 0.25 * x2 * x2 + 0.25 * x3 +
                         0.6 * x4);
        };
        const double ps = marginal(x1s, x2s, x3s, x4s);
        const double pr = marginal(x1r, x2r, x3r, x4r);
        const double tau = std::exp(-0.25 + 0.25 * (x1s + x1r) + 0.5 * (x3s + x3r));
        const TreatmentConfig a = gen_correlated_treatments(ps, pr, tau, rng);

        const double x1sum = x1s + x1r;
        const double x3sum = x3s + x3r;
        const double f = truth.zero_treatment_free
                             ? 0.0
                             : std::cos(x1sum) - x1sum * x1sum * x1sum + std::log(x1s) -
                                   2.0 * x1r * x1r + x3sum * x3sum * x3sum;

        Eigen::Vector2d xxi(1.0, x1s), xpsi(1.0, x1r), xphi(1.0, x3sum);
        const double gamma = blip_value(a, xxi, xpsi, xphi, truth.blips);
        const double mu = f + gamma;
        const int u = draw_outcome(mu, kStudy1Zeta1, kStudy1Zeta2, rng);

        out.truth.mu[h] = mu;
        out.truth.optimal[0][static_cast<std::size_t>(h)] =
            optimal_config(xxi, xpsi, xphi, truth.blips);

        int c = 0;
        v(h, c++) = h + 1;
        v(h, c++) = x1s;
        v(h, c++) = x2s;
        v(h, c++) = x3s;
        v(h, c++) = x4s;
        v(h, c++) = x1r;
        v(h, c++) = x2r;
        v(h, c++) = x3r;
        v(h, c++) = x4r;
        v(h, c++) = std::exp(x1s);
        v(h, c++) = std::exp(x1r);
        v(h, c++) = x2s * x2s;
        v(h, c++) = x2r * x2r;
        v(h, c++) = x1sum;
        v(h, c++) = x3sum;
        v(h, c++) = std::cos(x1sum);
        v(h, c++) = x1sum * x1sum * x1sum;
        v(h, c++) = std::log(x1s);
        v(h, c++) = x1r * x1r;
        v(h, c++) = x3sum * x3sum * x3sum;
        v(h, c++) = a.a_s;
        v(h, c++) = a.a_r;
        v(h, c++) = u;
    }
    out.data = Dataset(cols, std::move(v));
    return out;
}

SimulatedData gen_study2(int households, std::uint64_t seed, int replicate) {
    const int H = households;
    Rng rng = replicate_stream(seed, replicate, kGen);

    BlipParams stage_blips;
    stage_blips.xi = Eigen::Vector2d(-0.25, 0.5);
    stage_blips.psi = Eigen::Vector2d(-0.25, 0.5);
    stage_blips.phi = Eigen::Vector2d(-0.5, 0.25);

    const std::vector<std::string> cols = {
        "household_id", "x11_s", "x11_r", "x12_s", "x12_r",
        "x21_s", "x21_r", "x22_s", "x22_r",
        "exp_x11_s", "exp_x11_r", "exp_x21_s", "exp_x21_r",
        "x12_sum", "x22_sum",
        "cos_pix11_sum", "x12_sum_cu", "exp_half_x11_sum",
        "a1_s", "a1_r", "a1x_s", "a1x_r", "a1_both", "a1_both_x12sum",
        "a2_s", "a2_r", "u"};
    Eigen::MatrixXd v(H, static_cast<Eigen::Index>(cols.size()));

    SimulatedData out;
    out.truth.blips = {stage_blips, stage_blips};
    out.truth.optimal.resize(2);
    out.truth.optimal[0].resize(static_cast<std::size_t>(H));
    out.truth.optimal[1].resize(static_cast<std::size_t>(H));
    out.truth.mu.resize(H);

    auto marginal = [](double xj1, double xj2) {
        return expit(-1.0 + 1.15 * std::exp(xj1) - 0.5 * xj2);
    };

    for (int h = 0; h < H; ++h) {
        const double x11s = rng.normal();
        const double x11r = rng.normal();
        const double x12s = rng.bernoulli(0.5);
        const double x12r = rng.bernoulli(0.5);

        const double tau1 = std::exp(-0.15 + 0.25 * (x12s + x12r));
        const TreatmentConfig a1 = gen_correlated_treatments(
            marginal(x11s, x12s), marginal(x11r, x12r), tau1, rng);

        const double x21s = 0.5 * rng.normal(x11s, 1.0);
        const double x21r = 0.5 * rng.normal(x11r, 1.0);
        const double x22s = rng.bernoulli(0.1 + 0.5 * x12s);
        const double x22r = rng.bernoulli(0.1 + 0.5 * x12r);

        const double tau2 = std::exp(-0.15 + 0.25 * (x22s + x22r));
        const TreatmentConfig a2 = gen_correlated_treatments(
            marginal(x21s, x22s), marginal(x21r, x22r), tau2, rng);

        const double x12sum = x12s + x12r;
        const double x22sum = x22s + x22r;
        const double f = std::cos(kPi * (x11s + x11r)) +
                         0.5 * std::exp(x21s + x21r) + 0.2 * x12sum * x12sum * x12sum;

        Eigen::Vector2d x1xi(1.0, x11s), x1psi(1.0, x11r), x1phi(1.0, x12sum);
        Eigen::Vector2d x2xi(1.0, x21s), x2psi(1.0, x21r), x2phi(1.0, x22sum);
        const double gamma1 = blip_value(a1, x1xi, x1psi, x1phi, stage_blips);
        const double gamma2 = blip_value(a2, x2xi, x2psi, x2phi, stage_blips);
        const double mu = f + gamma1 + gamma2;
        const int u = draw_outcome(mu, kStudy2Zeta1, kStudy2Zeta2, rng);

        out.truth.mu[h] = mu;
        out.truth.optimal[0][static_cast<std::size_t>(h)] =
            optimal_config(x1xi, x1psi, x1phi, stage_blips);
        out.truth.optimal[1][static_cast<std::size_t>(h)] =
            optimal_config(x2xi, x2psi, x2phi, stage_blips);

        int c = 0;
        v(h, c++) = h + 1;
        v(h, c++) = x11s;
        v(h, c++) = x11r;
        v(h, c++) = x12s;
        v(h, c++) = x12r;
        v(h, c++) = x21s;
        v(h, c++) = x21r;
        v(h, c++) = x22s;
        v(h, c++) = x22r;
        v(h, c++) = std::exp(x11s);
        v(h, c++) = std::exp(x11r);
        v(h, c++) = std::exp(x21s);
        v(h, c++) = std::exp(x21r);
        v(h, c++) = x12sum;
        v(h, c++) = x22sum;
        v(h, c++) = std::cos(kPi * (x11s + x11r));
        v(h, c++) = x12sum * x12sum * x12sum;
        v(h, c++) = std::exp(0.5 * (x11s + x11r));
        v(h, c++) = a1.a_s;
        v(h, c++) = a1.a_r;
        v(h, c++) = a1.a_s * x11s;
        v(h, c++) = a1.a_r * x11r;
        v(h, c++) = a1.a_s * a1.a_r;
        v(h, c++) = a1.a_s * a1.a_r * x12sum;
        v(h, c++) = a2.a_s;
        v(h, c++) = a2.a_r;
        v(h, c++) = u;
    }
    out.data = Dataset(cols, std::move(v));
    return out;
}

ModelSpec study1_spec(int scenario) {
    if (scenario < 1 || scenario > 4) {
        throw UsageError("scenario must be 1, 2, 3 or 4");
    }
    const bool tf_correct = scenario == 2 || scenario == 4;
    const bool tm_correct = scenario == 3 || scenario == 4;

    ModelSpec spec;
    spec.stage = 1;
    spec.beta_cols = {"x1_s", "x2_s", "x3_s", "x4_s", "x1_r", "x2_r", "x3_r", "x4_r"};
    if (tf_correct) {
        for (const char* c : {"cos_x1_sum", "x1_sum_cu", "log_x1_s", "x1sq_r", "x3_sum_cu"}) {
            spec.beta_cols.push_back(c);
        }
    }
    spec.xi_cols = {"const", "x1_s"};
    spec.psi_cols = {"const", "x1_r"};
    spec.phi_cols = {"const", "x3_sum"};
    if (tm_correct) {
        spec.propensity_cols = {"exp_x1", "x2sq", "x3", "x4"};
        spec.or_pair_cols = {"x1_sum", "x3_sum"};
    } else {
        spec.propensity_cols = {"x1", "x2", "x3", "x4"};
        spec.or_pair_cols = {};
    }
    return spec;
}

UnawareSpec study1_unaware_spec() {
    UnawareSpec spec;
    spec.stage = 1;
    spec.beta_cols_s = {"x1_s", "x2_s", "x3_s", "x4_s", "x3_sum"};
    spec.beta_cols_r = {"x1_r", "x2_r", "x3_r", "x4_r", "x3_sum"};
    spec.blip_cols_s = {"const", "x1_s"};
    spec.blip_cols_r = {"const", "x1_r"};
    return spec;
}

std::vector<ModelSpec> study2_specs(int study_case) {
    if (study_case != 1 && study_case != 2) {
        throw UsageError("study 2 case must be 1 or 2");
    }
    ModelSpec s1;
    s1.stage = 1;
    s1.beta_cols = {"x11_s", "x11_r", "x12_s", "x12_r"};
    s1.xi_cols = {"const", "x11_s"};
    s1.psi_cols = {"const", "x11_r"};
    s1.phi_cols = {"const", "x12_sum"};
    if (study_case == 1) {
        s1.propensity_cols = {"exp_x11", "x12"};
        s1.or_pair_cols = {"x12_sum"};
    } else {
        for (const char* c : {"cos_pix11_sum", "x12_sum_cu", "exp_half_x11_sum"}) {
            s1.beta_cols.push_back(c);
        }
        s1.propensity_cols = {"x11", "x12"};
        s1.or_pair_cols = {};
    }

    ModelSpec s2;
    s2.stage = 2;
    s2.beta_cols = {"x11_s", "x11_r", "x12_s", "x12_r", "x21_s", "x21_r", "x22_s",
                    "x22_r", "a1_s", "a1x_s", "a1_r", "a1x_r", "a1_both",
                    "a1_both_x12sum"};
    s2.xi_cols = {"const", "x21_s"};
    s2.psi_cols = {"const", "x21_r"};
    s2.phi_cols = {"const", "x22_sum"};
    s2.propensity_cols = {"exp_x21", "x22"};
    s2.or_pair_cols = {"x22_sum"};
    return {s1, s2};
}

const char* study_name(Study study) {
    switch (study) {
        case Study::Study1a: return "1a";
        case Study::Study1b: return "1b";
        case Study::Study2: return "2";
    }
    return "?";
}

namespace {

using ReplicateMetrics = std::map<std::string, double>;

void add_blip_metrics(ReplicateMetrics& m, const std::string& prefix,
                      const BlipParams& blips) {
    m[prefix + "xi0"] = blips.xi[0];
    m[prefix + "xi1"] = blips.xi[1];
    m[prefix + "psi0"] = blips.psi[0];
    m[prefix + "psi1"] = blips.psi[1];
    m[prefix + "phi0"] = blips.phi[0];
    m[prefix + "phi1"] = blips.phi[1];
}

void add_regime_metrics(ReplicateMetrics& m, const std::string& prefix,
                        const RegimeMetrics& r) {
    m[prefix + "otr_h"] = r.otr_household;
    m[prefix + "otr_i"] = r.otr_individual;
    m[prefix + "mrv"] = r.mean_regret;
}

// Predicted outcomes when the estimated configurations are implemented,
// sampled from the fitted model.
Eigen::VectorXi predict_outcomes(const PomFit& fit, const PomDesign& design,
                                 const std::vector<TreatmentConfig>& configs, Rng& rng) {
    const Eigen::Index H = design.households();
    Eigen::VectorXi u_hat(H);
    for (Eigen::Index h = 0; h < H; ++h) {
        const CategoryProbs p = pseudo_utility_probs(fit, design.row(h),
                                                     configs[static_cast<std::size_t>(h)]);
        const double probs[3] = {p.p1, p.p2, p.p3};
        u_hat[h] = 1 + rng.categorical(probs, 3);
    }
    return u_hat;
}

ReplicateMetrics run_study1_replicate(const MonteCarloConfig& cfg, int b) {
    ReplicateMetrics m;
    const SimulatedData sim = gen_study1(cfg.households, cfg.seed, b);
    const Eigen::VectorXi u = sim.data.int_col("u");

    const int scenario = cfg.study == Study::Study1a ? 3 : cfg.scenario;
    const ModelSpec spec = study1_spec(scenario);
    const StageInputs inputs = resolve_spec(sim.data, spec);

    for (WeightScheme scheme : cfg.schemes) {
        const std::string prefix = std::string(scheme_name(scheme)) + ".";
        const WpomResult fit = wpom_fit(inputs, u, scheme);
        const std::vector<TreatmentConfig> decisions = stage_decisions(inputs, fit.blips());
        add_regime_metrics(m, prefix,
                           regime_metrics(decisions, sim.truth.optimal[0],
                                          sim.truth.blips[0], inputs.design.xi_X,
                                          inputs.design.psi_X, inputs.design.phi_X));
        add_blip_metrics(m, prefix, fit.blips());

        Rng value_rng = replicate_stream(cfg.seed, b, kValue);
        const Eigen::VectorXi u_hat =
            predict_outcomes(fit.final_fit, inputs.design, decisions, value_rng);
        const ValueOdds odds = value_odds_ratio(u_hat, u);
        m[prefix + "or_u3"] = odds.or_u3;
        m[prefix + "or_uge2"] = odds.or_u_ge2;
    }

    if (cfg.study == Study::Study1a && cfg.include_unaware) {
        const UnawareSpec uspec = study1_unaware_spec();
        const UnawareFit ufit = interference_unaware_fit(sim.data, uspec);
        const std::vector<TreatmentConfig> decisions =
            unaware_decide(ufit, sim.data, uspec);
        add_regime_metrics(m, "unaware.",
                           regime_metrics(decisions, sim.truth.optimal[0],
                                          sim.truth.blips[0], inputs.design.xi_X,
                                          inputs.design.psi_X, inputs.design.phi_X));
    }

    if (cfg.study == Study::Study1a && cfg.include_cv) {
        for (WeightScheme scheme : cfg.schemes) {
            const std::string prefix = std::string("cv_") + scheme_name(scheme) + ".";
            const CvWpomResult cv = cv_wpom(inputs, u, scheme, cfg.cv_folds,
                                            cfg.seed + static_cast<std::uint64_t>(b));
            const BlipParams blips{cv.averaged.xi, cv.averaged.psi, cv.averaged.phi};
            const std::vector<TreatmentConfig> decisions = stage_decisions(inputs, blips);
            add_regime_metrics(m, prefix,
                               regime_metrics(decisions, sim.truth.optimal[0],
                                              sim.truth.blips[0], inputs.design.xi_X,
                                              inputs.design.psi_X, inputs.design.phi_X));
            add_blip_metrics(m, prefix, blips);
        }
    }
    return m;
}

ReplicateMetrics run_study2_replicate(const MonteCarloConfig& cfg, int b) {
    ReplicateMetrics m;
    const SimulatedData sim = gen_study2(cfg.households, cfg.seed, b);
    const Eigen::VectorXi u = sim.data.int_col("u");
    const std::vector<ModelSpec> specs = study2_specs(cfg.study2_case);

    for (WeightScheme scheme : cfg.schemes) {
        const std::string prefix = std::string(scheme_name(scheme)) + ".";
        DwpomOptions options;
        options.scheme = scheme;
        options.replications = cfg.replications;
        options.seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(b));
        const DwpomResult fit = dwpom_fit(sim.data, specs, options);

        std::vector<std::vector<TreatmentConfig>> decisions(2);
        for (int j = 0; j < 2; ++j) {
            const StageInputs in = resolve_spec(sim.data, specs[static_cast<std::size_t>(j)]);
            decisions[static_cast<std::size_t>(j)] = stage_decisions(
                in, fit.per_stage[static_cast<std::size_t>(j)].blips());
            const std::string sp = prefix + "s" + std::to_string(j + 1) + "_";
            add_blip_metrics(m, sp, fit.per_stage[static_cast<std::size_t>(j)].blips());
            add_regime_metrics(
                m, sp,
                regime_metrics(decisions[static_cast<std::size_t>(j)],
                               sim.truth.optimal[static_cast<std::size_t>(j)],
                               sim.truth.blips[static_cast<std::size_t>(j)], in.design.xi_X,
                               in.design.psi_X, in.design.phi_X));
        }

        const StageEstimate& s1 = fit.per_stage[0];
        m[prefix + "brant_rate"] =
            s1.brant_tests > 0
                ? static_cast<double>(s1.brant_warnings) / s1.brant_tests
                : 0.0;

        // Implement the estimated regime at both stages: stage-one columns
        // of the terminal-stage design are rebuilt at the recommended
        // configurations before predicting outcomes.
        Dataset applied = sim.data;
        const Eigen::Index H = applied.rows();
        Eigen::VectorXd a1s(H), a1r(H);
        for (Eigen::Index h = 0; h < H; ++h) {
            a1s[h] = decisions[0][static_cast<std::size_t>(h)].a_s;
            a1r[h] = decisions[0][static_cast<std::size_t>(h)].a_r;
        }
        applied.set_col("a1_s", a1s);
        applied.set_col("a1_r", a1r);
        applied.set_col("a1x_s", a1s.cwiseProduct(applied.col("x11_s")));
        applied.set_col("a1x_r", a1r.cwiseProduct(applied.col("x11_r")));
        const Eigen::VectorXd both = a1s.cwiseProduct(a1r);
        applied.set_col("a1_both", both);
        applied.set_col("a1_both_x12sum", both.cwiseProduct(applied.col("x12_sum")));

        const StageInputs applied_in = resolve_spec(applied, specs[1]);
        Rng value_rng = replicate_stream(cfg.seed, b, kValue);
        const Eigen::VectorXi u_hat = predict_outcomes(
            fit.per_stage[1].averaged, applied_in.design, decisions[1], value_rng);
        const ValueOdds odds = value_odds_ratio(u_hat, u);
        m[prefix + "or_u3"] = odds.or_u3;
        m[prefix + "or_uge2"] = odds.or_u_ge2;
    }
    return m;
}

ReplicateMetrics run_replicate(const MonteCarloConfig& cfg, int b) {
    switch (cfg.study) {
        case Study::Study1a:
        case Study::Study1b:
            return run_study1_replicate(cfg, b);
        case Study::Study2:
            return run_study2_replicate(cfg, b);
    }
    throw UsageError("unknown study");
}

}  // namespace

const MetricRow& MonteCarloSummary::row(const std::string& scheme,
                                        const std::string& metric) const {
    for (const MetricRow& r : rows) {
        if (r.scheme == scheme && r.metric == metric) return r;
    }
    throw SchemaError("summary: no row for " + scheme + "." + metric);
}

MonteCarloSummary run_monte_carlo(const MonteCarloConfig& cfg) {
    if (cfg.households < 10 || cfg.replicates < 1) {
        throw UsageError("monte carlo: households must be >= 10 and replicates >= 1");
    }

    std::vector<ReplicateMetrics> results(static_cast<std::size_t>(cfg.replicates));
    std::vector<std::string> errors(static_cast<std::size_t>(cfg.replicates));
    std::atomic<int> next{0};

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, cfg.replicates);

    auto worker = [&]() {
        for (;;) {
            const int b = next.fetch_add(1);
            if (b >= cfg.replicates) return;
            try {
                results[static_cast<std::size_t>(b)] = run_replicate(cfg, b);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(b)] = e.what();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    MonteCarloSummary summary;
    summary.config = cfg;

    std::map<std::string, std::vector<double>> series;
    for (int b = 0; b < cfg.replicates; ++b) {
        if (!errors[static_cast<std::size_t>(b)].empty()) {
            ++summary.replicates_failed;
            if (summary.failure_messages.size() < 10) {
                summary.failure_messages.push_back(
                    "replicate " + std::to_string(b) + ": " +
                    errors[static_cast<std::size_t>(b)]);
            }
            continue;
        }
        for (const auto& [key, value] : results[static_cast<std::size_t>(b)]) {
            series[key].push_back(value);
        }
    }

    if (summary.replicates_failed >
        static_cast<int>(cfg.failure_budget * cfg.replicates)) {
        std::string detail = summary.failure_messages.empty()
                                 ? std::string()
                                 : " (" + summary.failure_messages.front() + ")";
        throw ReplicateBudgetError(std::to_string(summary.replicates_failed) + " of " +
                                   std::to_string(cfg.replicates) +
                                   " replicates failed" + detail);
    }

    for (const auto& [key, values] : series) {
        const auto dot = key.find('.');
        MetricRow row;
        row.scheme = key.substr(0, dot);
        row.metric = key.substr(dot + 1);
        row.n = static_cast<int>(values.size());
        double mean = 0.0;
        for (double x : values) mean += x;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double x : values) var += (x - mean) * (x - mean);
        row.mean = mean;
        row.sd = values.size() > 1
                     ? std::sqrt(var / static_cast<double>(values.size() - 1))
                     : 0.0;
        summary.rows.push_back(row);
    }
    return summary;
}

}  // namespace dwpom
