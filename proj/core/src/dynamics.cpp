#include "dwpom/dynamics.hpp"

#include <cmath>

#include "dwpom/brant.hpp"
#include "dwpom/errors.hpp"

namespace dwpom {

CategoryProbs pseudo_utility_probs(const PomFit& fit, const DesignRow& row,
                                   const TreatmentConfig& d_star) {
    return category_probs(linear_predictors(fit, row, d_star.a_s, d_star.a_r));
}

PseudoUtilityDraws sample_pseudo_utilities(const Eigen::MatrixXd& probs, int replications,
                                           Rng& rng) {
    const Eigen::Index H = probs.rows();
    PseudoUtilityDraws out;
    out.draws.resize(replications, H);
    for (int r = 0; r < replications; ++r) {
        for (Eigen::Index h = 0; h < H; ++h) {
            const double p[3] = {probs(h, 0), probs(h, 1), probs(h, 2)};
            out.draws(r, h) = 1 + rng.categorical(p, 3);
        }
    }
    return out;
}

std::vector<TreatmentConfig> stage_decisions(const StageInputs& in, const BlipParams& blips) {
    const Eigen::Index H = in.design.households();
    std::vector<TreatmentConfig> configs(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) {
        configs[static_cast<std::size_t>(h)] =
            optimal_config(in.design.xi_X.row(h), in.design.psi_X.row(h),
                           in.design.phi_X.row(h), blips);
    }
    return configs;
}

namespace {

PomFit average_fits(const std::vector<PomFit>& fits) {
    PomFit avg = fits.front();
    Eigen::VectorXd acc = pack_params(fits.front());
    for (std::size_t i = 1; i < fits.size(); ++i) {
        acc += pack_params(fits[i]);
        avg.converged = avg.converged && fits[i].converged;
    }
    acc /= static_cast<double>(fits.size());
    avg.zeta1 = acc[0];
    avg.zeta2 = acc[1];
    Eigen::Index c = 2;
    avg.beta = acc.segment(c, avg.beta.size());
    c += avg.beta.size();
    avg.xi = acc.segment(c, avg.xi.size());
    c += avg.xi.size();
    avg.psi = acc.segment(c, avg.psi.size());
    c += avg.psi.size();
    avg.phi = acc.segment(c, avg.phi.size());
    return avg;
}

}  // namespace

DwpomResult dwpom_fit(const std::vector<StageInputs>& stages, const Eigen::VectorXi& u,
                      const DwpomOptions& options) {
    const int K = static_cast<int>(stages.size());
    if (K < 1) throw SchemaError("dwpom: at least one stage required");
    if (options.replications < 1) throw SchemaError("dwpom: replications must be >= 1");

    DwpomResult result;
    result.per_stage.resize(static_cast<std::size_t>(K));

    // Terminal stage: weighted POM on the observed outcomes.
    {
        const WpomResult fit = wpom_fit(stages[static_cast<std::size_t>(K - 1)], u,
                                        options.scheme);
        StageEstimate& est = result.per_stage[static_cast<std::size_t>(K - 1)];
        est.averaged = fit.final_fit;
        est.draws_used = 1;
    }

    for (int j = K - 1; j >= 1; --j) {
        const StageInputs& next = stages[static_cast<std::size_t>(j)];
        const StageInputs& cur = stages[static_cast<std::size_t>(j - 1)];
        const StageEstimate& next_est = result.per_stage[static_cast<std::size_t>(j)];
        const Eigen::Index H = next.design.households();

        // Pseudo-utility distribution under the next stage's estimated
        // optimal configurations.
        const std::vector<TreatmentConfig> opt =
            stage_decisions(next, next_est.blips());
        Eigen::MatrixXd probs(H, 3);
        for (Eigen::Index h = 0; h < H; ++h) {
            const CategoryProbs p = pseudo_utility_probs(
                next_est.averaged, next.design.row(h), opt[static_cast<std::size_t>(h)]);
            probs(h, 0) = p.p1;
            probs(h, 1) = p.p2;
            probs(h, 2) = p.p3;
        }
        Rng rng = Rng::stream(options.seed, 0x70736575ULL + static_cast<std::uint64_t>(j));
        const PseudoUtilityDraws draws =
            sample_pseudo_utilities(probs, options.replications, rng);

        StageEstimate& est = result.per_stage[static_cast<std::size_t>(j - 1)];
        const Eigen::MatrixXd brant_design = slope_design(cur.design);
        std::vector<PomFit> fits;
        for (int r = 0; r < options.replications; ++r) {
            const Eigen::VectorXi u_r = draws.draws.row(r).transpose();
            bool brant_failed = false;
            try {
                const BrantResult brant = brant_wald(brant_design, u_r);
                ++est.brant_tests;
                if (brant.pvalue < options.brant_alpha) {
                    ++est.brant_warnings;
                    brant_failed = true;
                    est.warnings.push_back("stage " + std::to_string(j) +
                                           " draw " + std::to_string(r) +
                                           ": proportional odds test p < " +
                                           std::to_string(options.brant_alpha));
                }
            } catch (const DegenerateCutError&) {
                if (options.strict_brant) throw;
                est.warnings.push_back("stage " + std::to_string(j) + " draw " +
                                       std::to_string(r) +
                                       ": proportional odds test not applicable");
            }
            if (brant_failed && options.strict_brant) {
                throw DegenerateCutError(
                    "dwpom: pseudo-outcomes failed the proportional odds test");
            }
            try {
                fits.push_back(wpom_fit(cur, u_r, options.scheme).final_fit);
            } catch (const Error& e) {
                est.warnings.push_back("stage " + std::to_string(j) + " draw " +
                                       std::to_string(r) + " dropped: " + e.what());
            }
        }
        if (fits.empty()) {
            throw AllDrawsDegenerateError("dwpom: every pseudo-outcome fit failed at stage " +
                                          std::to_string(j));
        }
        est.averaged = average_fits(fits);
        est.draws_used = static_cast<int>(fits.size());
    }
    return result;
}

DwpomResult dwpom_fit(const Dataset& panel, const std::vector<ModelSpec>& specs,
                      const DwpomOptions& options) {
    std::vector<StageInputs> stages;
    stages.reserve(specs.size());
    for (const ModelSpec& spec : specs) {
        stages.push_back(resolve_spec(panel, spec));
    }
    return dwpom_fit(stages, panel.int_col("u"), options);
}

}  // namespace dwpom
