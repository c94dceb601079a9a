#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dwpom/data.hpp"
#include "dwpom/model_spec.hpp"
#include "dwpom/pom.hpp"
#include "dwpom/simulation.hpp"

namespace dwpom {

// Double formatted to 6 significant digits, the precision of every numeric
// value the tools emit.
std::string format_g6(double x);
// The same rounding applied to the value itself (for JSON output).
double round_g6(double x);

// CSV files carry one leading '#' metadata line with the resolved run
// configuration, then a header row. Readers skip any '#' lines.
Dataset read_csv(const std::string& path);
void write_csv(const std::string& path, const Dataset& data,
               const nlohmann::json& config);

struct StageFitRecord {
    int stage = 1;
    PomFit fit;
    ModelSpec spec;
    std::string scheme = "m4";
};

void write_fit_json(const std::string& path, const std::vector<StageFitRecord>& stages,
                    const nlohmann::json& config);
std::vector<StageFitRecord> read_fit_json(const std::string& path);

// Model specification document: either a top-level block set or
// {"stages": [...]}; stages are numbered in order starting at 1.
std::vector<ModelSpec> parse_model_specs(const nlohmann::json& doc);
std::vector<ModelSpec> read_model_specs(const std::string& path);

void write_summary_csv(const std::string& path, const MonteCarloSummary& summary,
                       const nlohmann::json& config);
void write_summary_json(const std::string& path, const MonteCarloSummary& summary,
                        const nlohmann::json& config);

}  // namespace dwpom
