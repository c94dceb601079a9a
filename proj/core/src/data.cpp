#include "dwpom/data.hpp"

#include <cmath>

#include "dwpom/errors.hpp"

namespace dwpom {

Dataset::Dataset(std::vector<std::string> names, Eigen::MatrixXd values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
        throw SchemaError("dataset: column name count does not match value columns");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], static_cast<Eigen::Index>(i)).second) {
            throw SchemaError("dataset: duplicate column name '" + names_[i] + "'");
        }
    }
}

bool Dataset::has(const std::string& name) const { return index_.count(name) > 0; }

Eigen::VectorXd Dataset::col(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw SchemaError("dataset: missing column '" + name + "'");
    }
    return values_.col(it->second);
}

Eigen::VectorXi Dataset::int_col(const std::string& name) const {
    const Eigen::VectorXd v = col(name);
    Eigen::VectorXi out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = static_cast<int>(std::lround(v[i]));
    }
    return out;
}

void Dataset::add_col(const std::string& name, const Eigen::VectorXd& v) {
    if (has(name)) {
        throw SchemaError("dataset: duplicate column name '" + name + "'");
    }
    if (values_.cols() > 0 && v.size() != values_.rows()) {
        throw SchemaError("dataset: column length mismatch for '" + name + "'");
    }
    if (values_.cols() == 0) {
        values_.resize(v.size(), 1);
        values_.col(0) = v;
    } else {
        values_.conservativeResize(Eigen::NoChange, values_.cols() + 1);
        values_.col(values_.cols() - 1) = v;
    }
    index_.emplace(name, values_.cols() - 1);
    names_.push_back(name);
}

void Dataset::set_col(const std::string& name, const Eigen::VectorXd& v) {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw SchemaError("dataset: missing column '" + name + "'");
    }
    if (v.size() != values_.rows()) {
        throw SchemaError("dataset: column length mismatch for '" + name + "'");
    }
    values_.col(it->second) = v;
}

Eigen::MatrixXd select_columns(const Dataset& data, const std::vector<std::string>& cols) {
    Eigen::MatrixXd out(data.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] == "const" || cols[j] == "1") {
            out.col(static_cast<Eigen::Index>(j)).setOnes();
        } else {
            out.col(static_cast<Eigen::Index>(j)) = data.col(cols[j]);
        }
    }
    return out;
}

}  // namespace dwpom
