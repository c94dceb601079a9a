#include "dwpom/model_spec.hpp"

#include "dwpom/errors.hpp"

namespace dwpom {

namespace {

Eigen::MatrixXd role_design(const Dataset& data, const std::vector<std::string>& bases,
                            const char* suffix) {
    Eigen::MatrixXd X(data.rows(), static_cast<Eigen::Index>(bases.size()) + 1);
    X.col(0).setOnes();
    for (std::size_t j = 0; j < bases.size(); ++j) {
        const auto c = static_cast<Eigen::Index>(j) + 1;
        if (bases[j] == "const" || bases[j] == "1") {
            X.col(c).setOnes();
        } else {
            X.col(c) = data.col(bases[j] + suffix);
        }
    }
    return X;
}

}  // namespace

StageInputs resolve_spec(const Dataset& data, const ModelSpec& spec) {
    StageInputs in;
    in.design.beta_X = select_columns(data, spec.beta_cols);
    in.design.xi_X = select_columns(data, spec.xi_cols);
    in.design.psi_X = select_columns(data, spec.psi_cols);
    in.design.phi_X = select_columns(data, spec.phi_cols);
    in.design.a_s = data.int_col(spec.a_s_col());
    in.design.a_r = data.int_col(spec.a_r_col());
    for (Eigen::Index h = 0; h < in.design.a_s.size(); ++h) {
        if ((in.design.a_s[h] != 0 && in.design.a_s[h] != 1) ||
            (in.design.a_r[h] != 0 && in.design.a_r[h] != 1)) {
            throw SchemaError("treatments must be 0/1 in columns " + spec.a_s_col() +
                              ", " + spec.a_r_col());
        }
    }
    in.prop_Xs = role_design(data, spec.propensity_cols, "_s");
    in.prop_Xr = role_design(data, spec.propensity_cols, "_r");

    in.or_X.resize(data.rows(), static_cast<Eigen::Index>(spec.or_pair_cols.size()) + 1);
    in.or_X.col(0).setOnes();
    for (std::size_t j = 0; j < spec.or_pair_cols.size(); ++j) {
        const auto c = static_cast<Eigen::Index>(j) + 1;
        const auto& name = spec.or_pair_cols[j];
        if (name == "const" || name == "1") {
            in.or_X.col(c).setOnes();
        } else {
            in.or_X.col(c) = data.col(name);
        }
    }
    return in;
}

}  // namespace dwpom
