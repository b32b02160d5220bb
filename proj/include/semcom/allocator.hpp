#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

#include "semcom/scenario.hpp"

namespace semcom::alloc {

struct Allocation {
    Eigen::VectorXd B; // Hz per user
    Eigen::VectorXd P; // W per user
};

// One iterate of the slack-augmented subproblem. B, P and z carry
// physical units; f, l, x, m, q are dimensionless. At a squeezed state
// f = exp(l), l = -x^2/2, x = N0*B*m/(delta*P), m = 2^q - 1 and
// q = d0(1-o)/(B*t0) hold with equality.
struct SlackState {
    Eigen::VectorXd B, P, f, l, x, m, q, z;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AllocError : std::runtime_error {
    AllocError(const std::string& what, SlackState best_state)
        : std::runtime_error(what), best(std::move(best_state)) {}
    SlackState best;
};

// Equal split of both caps with the slack chain squeezed tight on top.
SlackState init_feasible(const Scenario& s, const Eigen::VectorXd& o,
                         const Eigen::VectorXd& alpha);

// Rebuild the chain tight at the given allocation.
SlackState tighten(const Scenario& s, const Eigen::VectorXd& o, const Allocation& at);

// Solve the convexified subproblem linearized at prev: maximize
// sum alpha_i f_i under the Taylor-expanded outage chain, the
// conservative product surrogates and the resource caps. Returns prev
// itself when the solve cannot improve on it.
SlackState convex_step(const Scenario& s, const Eigen::VectorXd& o,
                       const Eigen::VectorXd& alpha, const SlackState& prev,
                       double tol);

// sum_i alpha_i * g_term_i at the given allocation.
double surrogate_objective(const Scenario& s, const Eigen::VectorXd& o,
                           const Eigen::VectorXd& alpha, const Allocation& at);

// Iterated convex steps, re-linearized each round, until the surrogate
// objective stalls. The per-round objective values are appended to
// trace when given and are non-decreasing.
Allocation sca_allocate(const Scenario& s, const Eigen::VectorXd& o,
                        const Eigen::VectorXd& alpha, double tol = 1e-6,
                        int max_outer = 50, const Allocation* warm = nullptr,
                        std::vector<double>* trace = nullptr);

// Equal split of both caps over all users.
Allocation equal_split(const Scenario& s);

} // namespace semcom::alloc
