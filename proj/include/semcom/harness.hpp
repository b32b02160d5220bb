#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semcom/link_model.hpp"
#include "semcom/planner.hpp"
#include "semcom/scenario.hpp"
#include "semcom/task_perf.hpp"

namespace semcom::harness {

// One solve request, possibly swept along an axis.
struct RunConfig {
    std::string scenario;          // preset name or file path
    std::string algo = "crra";     // crra | crraus | fcr | fra | msr
    std::string model = "resnet0db"; // fixture name or model file path
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000000;
    std::string axis;              // empty | bmax | pmax | users | ratio
    double lo = 0.0, hi = 0.0, step = 0.0;
    std::string out_path;
    double tol = 1e-6;
    int max_rounds = 50;
    bool timing = false;           // real wall times break bit reproducibility

    // flag-overridable scenario defaults (<= 0 means keep)
    double override_t0 = 0.0;
    double override_bmax = 0.0;
    double override_pmax = 0.0;
    double override_delta = 0.0;
    int override_users = 0;
};

struct ResultRow {
    std::string scenario_id;
    std::string algo;
    std::string axis;
    double axis_value = 0.0;
    double phi_exact = 0.0;
    double phi_surrogate = 0.0;
    int rounds = 0;
    double wall_ms = 0.0;
    Eigen::VectorXd o, B, P;
    Eigen::VectorXi beta;
    std::string error;
};

// Preset `paper` (Table-style constants), preset `desk` (normalized
// small parameters), or a scenario file.
Scenario load_scenario(const std::string& path_or_preset);

taskperf::TaskPerfModel load_model(const std::string& name_or_path);

// Resize to a different user count by cycling the per-user vectors.
Scenario with_users(const Scenario& base, int users);

plan::Solution solve_one(const Scenario& s, const std::string& algo,
                         const taskperf::TaskPerfModel& model, double tol,
                         int max_rounds, double fixed_ratio = 0.8);

std::vector<ResultRow> run(const RunConfig& config);

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::string render_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(const std::string& path);

struct Lemma1Report {
    link::LinkParams params;
    double ratio = 0.0;
    std::uint64_t trials = 0;
    double closed_form = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    bool pass = false;

    std::string lines() const;
};

// Closed form versus Monte Carlo at 3 binomial standard errors.
Lemma1Report verify_lemma1(const link::LinkParams& params, double ratio,
                           std::uint64_t trials, std::uint64_t seed);

} // namespace semcom::harness
