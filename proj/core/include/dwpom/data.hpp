#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace dwpom {

// Rectangular dataset with named numeric columns, one row per household.
// Treatments and outcomes are ordinary columns (a1_s, a1_r, ..., u).
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> names, Eigen::MatrixXd values);

    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    const std::vector<std::string>& names() const { return names_; }
    const Eigen::MatrixXd& values() const { return values_; }

    bool has(const std::string& name) const;
    // Throws SchemaError when the column is missing.
    Eigen::VectorXd col(const std::string& name) const;
    Eigen::VectorXi int_col(const std::string& name) const;

    void add_col(const std::string& name, const Eigen::VectorXd& v);
    void set_col(const std::string& name, const Eigen::VectorXd& v);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Eigen::Index> index_;
    Eigen::MatrixXd values_;
};

// Select named columns into a matrix; the pseudo-column "const" (or "1")
// yields a column of ones.
Eigen::MatrixXd select_columns(const Dataset& data, const std::vector<std::string>& cols);

}  // namespace dwpom
