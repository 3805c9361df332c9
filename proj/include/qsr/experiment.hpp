#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsr/code.hpp"
#include "qsr/resampling.hpp"

namespace qsr {

// A full sweep: for each distance and flip rate, one batch per decoder, then
// one result row per (alpha, confidence-cut) combination.
struct ExperimentConfig {
    Layout layout = Layout::Rotated;
    std::vector<int> distances;
    std::vector<double> ps;
    std::vector<std::string> methods;  // "mwpm" and/or "mld"
    std::vector<int> alphas;           // 1 = plain Monte Carlo
    std::vector<double> cuts;          // gap post-selection cuts; may be empty
    uint64_t samples = 0;
    uint64_t seed = 0;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig read_experiment_config(const std::string& path);

struct ExperimentRow {
    int d = 0;
    double p = 0.0;
    std::string method;
    int alpha = 1;
    double c = std::numeric_limits<double>::quiet_NaN();  // NaN = no cut
    Estimate estimate;
    uint64_t n = 0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    nlohmann::json manifest;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// d,p,method,alpha,c,p_l,std_err,acceptance,n,n_effective
void write_experiment_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace qsr
