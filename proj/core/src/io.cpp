#include "dwpom/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dwpom/errors.hpp"

namespace dwpom {

std::string format_g6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

double round_g6(double x) { return std::strtod(format_g6(x).c_str(), nullptr); }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

nlohmann::json json_vector(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(round_g6(v[i]));
    return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i];
    return v;
}

std::vector<std::string> strings_from_json(const nlohmann::json& arr) {
    std::vector<std::string> out;
    for (const auto& x : arr) out.push_back(x.get<std::string>());
    return out;
}

}  // namespace

Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw SchemaError("'" + path + "': no header row");

    std::vector<double> flat;
    Eigen::Index rows = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw SchemaError("'" + path + "': row with " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(header.size()));
        }
        for (const std::string& f : fields) {
            if (f.empty()) {
                throw SchemaError("'" + path + "': missing cell in data row " +
                                  std::to_string(lineno));
            }
            char* end = nullptr;
            const double x = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0') {
                throw SchemaError("'" + path + "': non-numeric cell '" + f + "'");
            }
            flat.push_back(x);
        }
        ++rows;
    }

    Eigen::MatrixXd values(rows, static_cast<Eigen::Index>(header.size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            values(r, c) = flat[static_cast<std::size_t>(r * values.cols() + c)];
        }
    }
    return Dataset(header, std::move(values));
}

void write_csv(const std::string& path, const Dataset& data,
               const nlohmann::json& config) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << "# " << config.dump() << "\n";
    for (std::size_t j = 0; j < data.names().size(); ++j) {
        out << (j ? "," : "") << data.names()[j];
    }
    out << "\n";
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            out << (c ? "," : "") << format_g6(data.values()(r, c));
        }
        out << "\n";
    }
}

void write_fit_json(const std::string& path, const std::vector<StageFitRecord>& stages,
                    const nlohmann::json& config) {
    nlohmann::json doc;
    doc["config"] = config;
    doc["stages"] = nlohmann::json::array();
    for (const StageFitRecord& s : stages) {
        nlohmann::json j;
        j["stage"] = s.stage;
        j["scheme"] = s.scheme;
        j["zeta1"] = round_g6(s.fit.zeta1);
        j["zeta2"] = round_g6(s.fit.zeta2);
        j["beta"] = json_vector(s.fit.beta);
        j["xi"] = json_vector(s.fit.xi);
        j["psi"] = json_vector(s.fit.psi);
        j["phi"] = json_vector(s.fit.phi);
        j["beta_cols"] = s.spec.beta_cols;
        j["xi_cols"] = s.spec.xi_cols;
        j["psi_cols"] = s.spec.psi_cols;
        j["phi_cols"] = s.spec.phi_cols;
        j["propensity_cols"] = s.spec.propensity_cols;
        j["or_pair_cols"] = s.spec.or_pair_cols;
        j["converged"] = s.fit.converged;
        j["iterations"] = s.fit.iterations;
        doc["stages"].push_back(j);
    }
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

std::vector<StageFitRecord> read_fit_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("'" + path + "': invalid JSON: " + e.what());
    }
    if (!doc.contains("stages") || !doc["stages"].is_array() || doc["stages"].empty()) {
        throw SchemaError("'" + path + "': fit document must contain stages");
    }
    std::vector<StageFitRecord> out;
    try {
        for (const auto& j : doc["stages"]) {
            StageFitRecord s;
            s.stage = j.value("stage", static_cast<int>(out.size()) + 1);
            s.scheme = j.value("scheme", "m4");
            s.fit.zeta1 = j.at("zeta1");
            s.fit.zeta2 = j.at("zeta2");
            s.fit.beta = vector_from_json(j.at("beta"));
            s.fit.xi = vector_from_json(j.at("xi"));
            s.fit.psi = vector_from_json(j.at("psi"));
            s.fit.phi = vector_from_json(j.at("phi"));
            s.fit.converged = j.value("converged", true);
            s.fit.iterations = j.value("iterations", 0);
            s.spec.beta_cols = strings_from_json(j.at("beta_cols"));
            s.spec.xi_cols = strings_from_json(j.at("xi_cols"));
            s.spec.psi_cols = strings_from_json(j.at("psi_cols"));
            s.spec.phi_cols = strings_from_json(j.at("phi_cols"));
            if (j.contains("propensity_cols"))
                s.spec.propensity_cols = strings_from_json(j["propensity_cols"]);
            if (j.contains("or_pair_cols"))
                s.spec.or_pair_cols = strings_from_json(j["or_pair_cols"]);
            s.spec.stage = s.stage;
            out.push_back(s);
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("'" + path + "': " + e.what());
    }
    return out;
}

namespace {

ModelSpec spec_from_json(const nlohmann::json& j, int stage) {
    ModelSpec spec;
    spec.stage = j.value("stage", stage);
    spec.beta_cols = strings_from_json(j.at("beta"));
    spec.xi_cols = strings_from_json(j.at("xi"));
    spec.psi_cols = strings_from_json(j.at("psi"));
    spec.phi_cols = strings_from_json(j.at("phi"));
    if (j.contains("propensity")) spec.propensity_cols = strings_from_json(j["propensity"]);
    if (j.contains("or_pair")) spec.or_pair_cols = strings_from_json(j["or_pair"]);
    const std::string pooling = j.value("pooling", "pooled");
    if (pooling == "pooled") {
        spec.pooling = Pooling::Pooled;
    } else if (pooling == "per-role") {
        spec.pooling = Pooling::PerRole;
    } else {
        throw SchemaError("model spec: unknown pooling '" + pooling + "'");
    }
    return spec;
}

}  // namespace

std::vector<ModelSpec> parse_model_specs(const nlohmann::json& doc) {
    std::vector<ModelSpec> specs;
    try {
        if (doc.contains("stages")) {
            int stage = 1;
            for (const auto& j : doc["stages"]) specs.push_back(spec_from_json(j, stage++));
        } else {
            specs.push_back(spec_from_json(doc, 1));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model spec: ") + e.what());
    }
    if (specs.empty()) throw SchemaError("model spec: no stages");
    return specs;
}

std::vector<ModelSpec> read_model_specs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("'" + path + "': invalid JSON: " + e.what());
    }
    return parse_model_specs(doc);
}

void write_summary_csv(const std::string& path, const MonteCarloSummary& summary,
                       const nlohmann::json& config) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << "# " << config.dump() << "\n";
    out << "study,scenario,scheme,metric,mean,sd,n\n";
    const char* study = study_name(summary.config.study);
    for (const MetricRow& r : summary.rows) {
        out << study << "," << summary.config.scenario << "," << r.scheme << ","
            << r.metric << "," << format_g6(r.mean) << "," << format_g6(r.sd) << ","
            << r.n << "\n";
    }
}

void write_summary_json(const std::string& path, const MonteCarloSummary& summary,
                        const nlohmann::json& config) {
    nlohmann::json doc;
    doc["config"] = config;
    doc["replicates_failed"] = summary.replicates_failed;
    doc["failures"] = summary.failure_messages;
    doc["rows"] = nlohmann::json::array();
    for (const MetricRow& r : summary.rows) {
        nlohmann::json j;
        j["scheme"] = r.scheme;
        j["metric"] = r.metric;
        j["mean"] = round_g6(r.mean);
        j["sd"] = round_g6(r.sd);
        j["n"] = r.n;
        doc["rows"].push_back(j);
    }
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

}  // namespace dwpom
