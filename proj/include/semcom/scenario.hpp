#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "semcom/link_model.hpp"

namespace semcom {

enum class ScenarioMode { physical, normalized };

// Every system constant of the resource-allocation problem. Normalized
// scenarios are stated as per-user (a, b, delta) at the equal-split
// reference allocation and converted to an equivalent physical
// parameterization with t0 = 1 and N0 = 1, so the same machinery runs
// both flavors.
struct Scenario {
    ScenarioMode mode = ScenarioMode::physical;
    std::string id = "scenario";
    int users = 0;

    Eigen::VectorXd d0_bits;   // per-user semantic payload before compression
    double t0_s = 0.0;
    double n0_w_per_hz = 0.0;
    double b_min_hz = 0.0;
    double b_max_hz = 0.0;
    double p_min_w = 0.0;
    double p_max_w = 0.0;
    Eigen::VectorXd delta;     // effective channel-gain spread per user

    Eigen::VectorXd level_weights; // epsilon, one entry per service level
    Eigen::MatrixXd assignment;    // r, users x levels, 0/1 with unit row sums

    // Caps that cannot admit every user at the minimums are rejected
    // unless this is set; selection-based solves may exclude users.
    bool allow_partial_selection = false;

    // Normalized-mode inputs echoed for serialization.
    Eigen::VectorXd norm_a, norm_b, norm_delta;

    double user_weight(int i) const;
    link::LinkParams link_params(int i, double bandwidth_hz, double power_w) const;
    double payload_bits(int i, double ratio) const;

    // Empty when the scenario is well formed; otherwise one line per
    // violated constraint.
    std::vector<std::string> validate() const;
    void require_valid() const;

    // Same caps and constants restricted to the given users.
    Scenario subset(const std::vector<int>& users_kept) const;

    static Scenario physical(int users, double d0_bits, double t0_s, double n0,
                             double b_min, double b_max, double p_min, double p_max,
                             Eigen::VectorXd delta, Eigen::VectorXd level_weights,
                             Eigen::MatrixXd assignment);

    static Scenario normalized(Eigen::VectorXd a, Eigen::VectorXd b,
                               Eigen::VectorXd delta, Eigen::VectorXd level_weights,
                               Eigen::MatrixXd assignment, double b_min = -1.0,
                               double b_max = -1.0, double p_min = -1.0,
                               double p_max = -1.0);
};

// Round-robin 0/1 assignment matrix over the given number of levels.
Eigen::MatrixXd round_robin_assignment(int users, int levels);

} // namespace semcom
