#pragma once

#include <Eigen/Core>

#include <vector>

#include "semcom/allocator.hpp"
#include "semcom/scenario.hpp"
#include "semcom/task_perf.hpp"

namespace semcom::plan {

enum class PhiMode { exact, surrogate };

// Full outcome of one solve: ratios, selection, allocation and the
// success probability of tasks evaluated both with the exact Q tail and
// with the smooth surrogate.
struct Solution {
    Eigen::VectorXd o;
    Eigen::VectorXi beta;
    Eigen::VectorXd B, P;
    Eigen::VectorXd phi_user_exact, phi_user_surrogate;
    double phi_exact = 0.0;
    double phi_surrogate = 0.0;
    int rounds = 0;
};

// Per-round objective values plus the inner SCA traces, for convergence
// checks and reporting.
struct SolveTrace {
    std::vector<double> round_objective;
    std::vector<std::vector<double>> sca_inner;
};

// eta(o_i) times the transmission success factor of user i.
double phi_user(const Scenario& s, const taskperf::TaskPerfModel& model,
                const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                const Eigen::VectorXd& o, int i, PhiMode mode = PhiMode::exact);

// Weighted sum of the already-evaluated per-user values in sol.
double phi_total(const Scenario& s, const Solution& sol,
                 PhiMode mode = PhiMode::exact);

// Fill the phi fields of sol from (o, beta, B, P).
void evaluate_solution(const Scenario& s, const taskperf::TaskPerfModel& model,
                       Solution& sol);

// Per-user grid argmax of g * eta given the allocation. When `current`
// is supplied, a user's ratio only moves to a grid point at least as
// good as its current one. Users decouple; the scan runs in parallel.
Eigen::VectorXd optimal_ratios(const Scenario& s, const taskperf::TaskPerfModel& model,
                               const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                               double grid_step = 0.01,
                               const Eigen::VectorXd* current = nullptr);

// Reference implementation without OpenMP.
Eigen::VectorXd optimal_ratios_serial(const Scenario& s,
                                      const taskperf::TaskPerfModel& model,
                                      const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                                      double grid_step = 0.01,
                                      const Eigen::VectorXd* current = nullptr);

// Alternating ratio enumeration and SCA allocation with every user
// selected and unit weights.
Solution crra(const Scenario& s, const taskperf::TaskPerfModel& model,
              double tol = 1e-6, int max_rounds = 50, SolveTrace* trace = nullptr);

// The 0-1 program of the selection block: maximize value . beta under
// two resource constraints.
struct SelectionInstance {
    Eigen::VectorXd value;
    Eigen::VectorXd b_cost;
    Eigen::VectorXd p_cost;
    double b_cap = 0.0;
    double p_cap = 0.0;
};

struct LpResult {
    Eigen::VectorXd beta; // fractional
    double bound = 0.0;
};

// Exact optimum of the relaxation with box bounds, by primal simplex.
LpResult lp_relaxation(const SelectionInstance& inst);

// Exact 0-1 optimum: best-bound-first search branching on the most
// fractional variable, pruning against the incumbent.
Eigen::VectorXi branch_and_bound(const SelectionInstance& inst);

// Ratio enumeration, branch-and-bound selection and SCA allocation in
// turn, for scenarios with heterogeneous service levels.
Solution crraus(const Scenario& s, const taskperf::TaskPerfModel& model,
                double tol = 1e-6, int max_rounds = 50, SolveTrace* trace = nullptr);

// Fixed compression ratio (0.8 unless overridden), allocation by SCA.
Solution baseline_fcr(const Scenario& s, const taskperf::TaskPerfModel& model,
                      double fixed_ratio = 0.8);

// Equal-split allocation, ratios by enumeration.
Solution baseline_fra(const Scenario& s, const taskperf::TaskPerfModel& model);

// Sum-rate maximizing allocation at the mean gain magnitude, then
// ratios by enumeration.
Solution baseline_msr(const Scenario& s, const taskperf::TaskPerfModel& model);

} // namespace semcom::plan
