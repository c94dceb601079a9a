#pragma once

#include <string>
#include <vector>

#include "dwpom/data.hpp"
#include "dwpom/pom.hpp"
#include "dwpom/propensity.hpp"

namespace dwpom {

// Column selection for one decision stage. Individual-level blocks
// (propensity regressors) are given as base names; the dataset is expected
// to carry "<base>_s" and "<base>_r" columns. "const" selects a column of
// ones anywhere.
struct ModelSpec {
    std::vector<std::string> beta_cols;
    std::vector<std::string> xi_cols;
    std::vector<std::string> psi_cols;
    std::vector<std::string> phi_cols;
    std::vector<std::string> propensity_cols;  // base names, intercept implied
    std::vector<std::string> or_pair_cols;     // household columns, intercept implied
    Pooling pooling = Pooling::Pooled;
    int stage = 1;  // reads a{stage}_s / a{stage}_r

    std::string a_s_col() const { return "a" + std::to_string(stage) + "_s"; }
    std::string a_r_col() const { return "a" + std::to_string(stage) + "_r"; }
};

// Resolved per-stage inputs for the weighted POM pipeline.
struct StageInputs {
    PomDesign design;
    Eigen::MatrixXd prop_Xs;  // H x (1 + k), intercept first
    Eigen::MatrixXd prop_Xr;
    Eigen::MatrixXd or_X;     // H x (1 + m), intercept first
};

StageInputs resolve_spec(const Dataset& data, const ModelSpec& spec);

}  // namespace dwpom
