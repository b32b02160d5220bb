#include "semcom/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace semcom {

double Scenario::user_weight(int i) const {
    double w = 0.0;
    for (Eigen::Index n = 0; n < level_weights.size(); ++n) {
        w += level_weights(n) * assignment(i, n);
    }
    return w;
}

link::LinkParams Scenario::link_params(int i, double bandwidth_hz, double power_w) const {
    link::LinkParams p;
    p.a = d0_bits(i) / (bandwidth_hz * t0_s);
    p.b = power_w / (n0_w_per_hz * bandwidth_hz);
    p.delta = delta(i);
    return p;
}

double Scenario::payload_bits(int i, double ratio) const {
    return d0_bits(i) * (1.0 - ratio);
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> bad;
    auto fail = [&bad](const std::string& msg) { bad.push_back(msg); };

    if (users < 1) fail("user count must be >= 1");
    if (!(t0_s > 0.0)) fail("t0 must be positive");
    if (!(n0_w_per_hz > 0.0)) fail("N0 must be positive");
    if (!(b_min_hz > 0.0)) fail("B_min must be positive (14b)");
    if (!(p_min_w > 0.0)) fail("P_min must be positive (14d)");
    if (!(b_max_hz >= b_min_hz)) fail("B_max must be >= B_min (14a)/(14b)");
    if (!(p_max_w >= p_min_w)) fail("P_max must be >= P_min (14c)/(14d)");
    if (!allow_partial_selection && users >= 1) {
        if (users * b_min_hz > b_max_hz) {
            fail("U * B_min exceeds B_max: minimum bandwidths cannot fit (14a)/(14b)");
        }
        if (users * p_min_w > p_max_w) {
            fail("U * P_min exceeds P_max: minimum powers cannot fit (14c)/(14d)");
        }
    }
    if (d0_bits.size() != users) {
        fail("payload vector length must equal the user count");
    } else {
        for (int i = 0; i < users; ++i) {
            if (!(d0_bits(i) >= 0.0)) fail("payload bits must be nonnegative");
        }
    }
    if (delta.size() != users) {
        fail("delta vector length must equal the user count");
    } else {
        for (int i = 0; i < users; ++i) {
            if (!(delta(i) > 0.0)) fail("channel spread delta must be positive");
        }
    }
    if (level_weights.size() < 1) {
        fail("at least one service level is required");
    } else {
        for (Eigen::Index n = 0; n < level_weights.size(); ++n) {
            if (!(level_weights(n) > 0.0 && level_weights(n) <= 1.0)) {
                fail("service level weights must lie in (0, 1]");
            }
        }
    }
    if (assignment.rows() != users || assignment.cols() != level_weights.size()) {
        fail("assignment matrix must be users x levels");
    } else {
        for (int i = 0; i < users; ++i) {
            double row = 0.0;
            for (Eigen::Index n = 0; n < assignment.cols(); ++n) {
                const double v = assignment(i, n);
                if (v != 0.0 && v != 1.0) fail("assignment entries must be 0 or 1 (14g)");
                row += v;
            }
            if (std::fabs(row - 1.0) > 1e-12) {
                fail("each user must belong to exactly one service level (14g)");
            }
        }
    }
    return bad;
}

void Scenario::require_valid() const {
    const auto bad = validate();
    if (bad.empty()) return;
    std::ostringstream msg;
    msg << "invalid scenario '" << id << "':";
    for (const auto& line : bad) msg << "\n  - " << line;
    throw std::invalid_argument(msg.str());
}

Scenario Scenario::physical(int users, double d0_bits, double t0_s, double n0,
                            double b_min, double b_max, double p_min, double p_max,
                            Eigen::VectorXd delta, Eigen::VectorXd level_weights,
                            Eigen::MatrixXd assignment) {
    Scenario s;
    s.mode = ScenarioMode::physical;
    s.users = users;
    s.d0_bits = Eigen::VectorXd::Constant(users, d0_bits);
    s.t0_s = t0_s;
    s.n0_w_per_hz = n0;
    s.b_min_hz = b_min;
    s.b_max_hz = b_max;
    s.p_min_w = p_min;
    s.p_max_w = p_max;
    s.delta = std::move(delta);
    s.level_weights = std::move(level_weights);
    s.assignment = std::move(assignment);
    return s;
}

Scenario Scenario::normalized(Eigen::VectorXd a, Eigen::VectorXd b,
                              Eigen::VectorXd delta, Eigen::VectorXd level_weights,
                              Eigen::MatrixXd assignment, double b_min, double b_max,
                              double p_min, double p_max) {
    const int users = static_cast<int>(a.size());
    if (b.size() != users || delta.size() != users) {
        throw std::invalid_argument("normalized scenario requires a, b, delta of equal length");
    }
    Scenario s;
    s.mode = ScenarioMode::normalized;
    s.users = users;
    s.t0_s = 1.0;
    s.n0_w_per_hz = 1.0;
    s.b_max_hz = b_max > 0.0 ? b_max : static_cast<double>(users);
    s.p_max_w = p_max > 0.0 ? p_max : static_cast<double>(users);
    const double b_ref = s.b_max_hz / users;
    const double p_ref = s.p_max_w / users;
    s.b_min_hz = b_min > 0.0 ? b_min : 0.01 * b_ref;
    s.p_min_w = p_min > 0.0 ? p_min : 0.01 * p_ref;

    // (a_i, b_i, delta_i) describe the link at the equal-split reference
    // point; fold b_i into the effective spread so N0 can stay at 1.
    s.d0_bits.resize(users);
    s.delta.resize(users);
    for (int i = 0; i < users; ++i) {
        s.d0_bits(i) = a(i) * b_ref * s.t0_s;
        s.delta(i) = b(i) * delta(i) * s.n0_w_per_hz * b_ref / p_ref;
    }
    s.norm_a = std::move(a);
    s.norm_b = std::move(b);
    s.norm_delta = std::move(delta);
    s.level_weights = std::move(level_weights);
    s.assignment = std::move(assignment);
    return s;
}

Scenario Scenario::subset(const std::vector<int>& users_kept) const {
    Scenario s = *this;
    const int k = static_cast<int>(users_kept.size());
    s.users = k;
    s.d0_bits.resize(k);
    s.delta.resize(k);
    s.assignment.resize(k, level_weights.size());
    for (int r = 0; r < k; ++r) {
        const int i = users_kept[r];
        s.d0_bits(r) = d0_bits(i);
        s.delta(r) = delta(i);
        s.assignment.row(r) = assignment.row(i);
    }
    if (norm_a.size() == users) {
        s.norm_a.resize(k);
        s.norm_b.resize(k);
        s.norm_delta.resize(k);
        for (int r = 0; r < k; ++r) {
            s.norm_a(r) = norm_a(users_kept[r]);
            s.norm_b(r) = norm_b(users_kept[r]);
            s.norm_delta(r) = norm_delta(users_kept[r]);
        }
    }
    s.allow_partial_selection = true;
    return s;
}

Eigen::MatrixXd round_robin_assignment(int users, int levels) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(users, levels);
    for (int i = 0; i < users; ++i) r(i, i % levels) = 1.0;
    return r;
}

} // namespace semcom
