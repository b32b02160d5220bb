#include "semcom/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "semcom/barrier.hpp"
#include "semcom/link_model.hpp"

namespace semcom::plan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_allocation(const Scenario& s, const Eigen::VectorXd& B,
                      const Eigen::VectorXd& P) {
    if (B.size() != s.users || P.size() != s.users) {
        throw std::invalid_argument("allocation vectors must match the user count");
    }
    for (int i = 0; i < s.users; ++i) {
        if (!(B(i) > 0.0) || !(P(i) > 0.0)) {
            throw std::invalid_argument("allocations must be positive");
        }
    }
}

std::vector<double> ratio_grid(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.5)) {
        throw std::invalid_argument("grid step must lie in (0, 0.5]");
    }
    const double count = 1.0 / grid_step;
    if (std::fabs(count - std::round(count)) > 1e-9) {
        throw std::invalid_argument("grid step must divide the unit interval");
    }
    const int n = static_cast<int>(std::round(count)) - 1;
    std::vector<double> grid(n);
    for (int k = 1; k <= n; ++k) grid[k - 1] = k * grid_step;
    return grid;
}

double ratio_value(const Scenario& s, const taskperf::TaskPerfModel& model,
                   double B, double P, int i, double o) {
    return link::g_term(s.link_params(i, B, P), o) * taskperf::eta(model, o);
}

double best_ratio_for_user(const Scenario& s, const taskperf::TaskPerfModel& model,
                           const std::vector<double>& grid, double B, double P,
                           int i, const double* current) {
    double best_o = current ? *current : grid.front();
    double best_v = current ? ratio_value(s, model, B, P, i, *current) : -kInf;
    for (double o : grid) {
        const double v = ratio_value(s, model, B, P, i, o);
        if (v > best_v || (v == best_v && o < best_o)) {
            best_v = v;
            best_o = o;
        }
    }
    return best_o;
}

Eigen::VectorXd optimal_ratios_impl(const Scenario& s,
                                    const taskperf::TaskPerfModel& model,
                                    const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                                    double grid_step, const Eigen::VectorXd* current,
                                    bool parallel) {
    check_allocation(s, B, P);
    const auto grid = ratio_grid(grid_step);
    Eigen::VectorXd out(s.users);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < s.users; ++i) {
            out(i) = best_ratio_for_user(s, model, grid, B(i), P(i), i,
                                         current ? &(*current)(i) : nullptr);
        }
    } else {
        for (int i = 0; i < s.users; ++i) {
            out(i) = best_ratio_for_user(s, model, grid, B(i), P(i), i,
                                         current ? &(*current)(i) : nullptr);
        }
    }
    return out;
}

// sum_i beta_i w_i g_i eta_i with the scenario's service-level weights
double weighted_surrogate(const Scenario& s, const taskperf::TaskPerfModel& model,
                          const Eigen::VectorXd& o, const Eigen::VectorXi& beta,
                          const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                          bool unit_weights) {
    double total = 0.0;
    for (int i = 0; i < s.users; ++i) {
        if (!beta(i)) continue;
        const double w = unit_weights ? 1.0 : s.user_weight(i);
        total += w * ratio_value(s, model, B(i), P(i), i, o(i));
    }
    return total;
}

Solution make_solution(const Scenario& s, const taskperf::TaskPerfModel& model,
                       Eigen::VectorXd o, Eigen::VectorXi beta, Eigen::VectorXd B,
                       Eigen::VectorXd P, int rounds) {
    Solution sol;
    sol.o = std::move(o);
    sol.beta = std::move(beta);
    sol.B = std::move(B);
    sol.P = std::move(P);
    sol.rounds = rounds;
    evaluate_solution(s, model, sol);
    return sol;
}

void check_instance(const SelectionInstance& inst) {
    const Eigen::Index n = inst.value.size();
    if (n < 1 || inst.b_cost.size() != n || inst.p_cost.size() != n) {
        throw std::invalid_argument("selection instance vectors must share a length >= 1");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(inst.value(i) >= 0.0) || !(inst.b_cost(i) >= 0.0) ||
            !(inst.p_cost(i) >= 0.0)) {
            throw std::invalid_argument("selection instance entries must be nonnegative");
        }
    }
    if (!(inst.b_cap >= 0.0) || !(inst.p_cap >= 0.0)) {
        throw std::invalid_argument("selection caps must be nonnegative");
    }
}

// Primal simplex with Bland's rule on: max v.x, costs <= caps, 0 <= x <= 1.
// Rows: the two caps then one upper bound per variable; slacks form the
// starting basis (x = 0 is feasible).
Eigen::VectorXd simplex_box_lp(const Eigen::VectorXd& value, const Eigen::VectorXd& bc,
                               const Eigen::VectorXd& pc, double bcap, double pcap) {
    const int n = static_cast<int>(value.size());
    const int m = 2 + n;
    const int cols = n + m;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
    for (int j = 0; j < n; ++j) {
        t(0, j) = bc(j);
        t(1, j) = pc(j);
        t(2 + j, j) = 1.0;
    }
    for (int i = 0; i < m; ++i) t(i, n + i) = 1.0;
    t(0, cols) = bcap;
    t(1, cols) = pcap;
    for (int j = 0; j < n; ++j) t(2 + j, cols) = 1.0;
    for (int j = 0; j < n; ++j) t(m, j) = -value(j); // minimize -v.x

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    const double eps = 1e-11;
    for (int iter = 0; iter < 20000; ++iter) {
        int enter = -1;
        for (int j = 0; j < cols; ++j) {
            if (t(m, j) < -eps) {
                enter = j;
                break; // Bland: lowest eligible index
            }
        }
        if (enter < 0) break;

        int leave = -1;
        double best_ratio = kInf;
        for (int i = 0; i < m; ++i) {
            if (t(i, enter) > eps) {
                const double ratio = t(i, cols) / t(i, enter);
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps &&
                     (leave < 0 || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) break; // unbounded cannot happen with box bounds

        const double piv = t(leave, enter);
        t.row(leave) /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double factor = t(i, enter);
            if (factor != 0.0) t.row(i) -= factor * t.row(leave);
        }
        basis[leave] = enter;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) x(basis[i]) = t(i, cols);
    }
    for (int j = 0; j < n; ++j) x(j) = std::clamp(x(j), 0.0, 1.0);
    return x;
}

double subset_value(const SelectionInstance& inst, const Eigen::VectorXi& beta) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        if (beta(i)) v += inst.value(i);
    }
    return v;
}

struct BnbNode {
    double bound = 0.0;
    int id = 0;
    std::vector<int8_t> fixed; // -1 free, else 0/1
};

struct BnbNodeOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound < b.bound; // max-heap on bound
        return a.id > b.id;                               // then oldest first
    }
};

// LP bound of a node; returns false when the fixed-to-one users already
// break a cap.
bool node_relaxation(const SelectionInstance& inst, const std::vector<int8_t>& fixed,
                     Eigen::VectorXd& beta_out, double& bound_out) {
    const int n = static_cast<int>(inst.value.size());
    double bcap = inst.b_cap, pcap = inst.p_cap;
    std::vector<int> free_idx;
    beta_out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (fixed[i] == 1) {
            beta_out(i) = 1.0;
            bcap -= inst.b_cost(i);
            pcap -= inst.p_cost(i);
        } else if (fixed[i] < 0) {
            free_idx.push_back(i);
        }
    }
    if (bcap < -1e-12 || pcap < -1e-12) return false;
    bcap = std::max(bcap, 0.0);
    pcap = std::max(pcap, 0.0);
    if (!free_idx.empty()) {
        const int k = static_cast<int>(free_idx.size());
        Eigen::VectorXd v(k), bc(k), pc(k);
        for (int j = 0; j < k; ++j) {
            v(j) = inst.value(free_idx[j]);
            bc(j) = inst.b_cost(free_idx[j]);
            pc(j) = inst.p_cost(free_idx[j]);
        }
        const Eigen::VectorXd sub = simplex_box_lp(v, bc, pc, bcap, pcap);
        for (int j = 0; j < k; ++j) beta_out(free_idx[j]) = sub(j);
    }
    bound_out = 0.0;
    for (int i = 0; i < n; ++i) bound_out += inst.value(i) * beta_out(i);
    return true;
}

bool subset_feasible(const SelectionInstance& inst, const Eigen::VectorXi& beta) {
    double b = 0.0, p = 0.0;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        if (beta(i)) {
            b += inst.b_cost(i);
            p += inst.p_cost(i);
        }
    }
    return b <= inst.b_cap * (1.0 + 1e-12) + 1e-12 &&
           p <= inst.p_cap * (1.0 + 1e-12) + 1e-12;
}

// MSR allocation: maximize the deterministic sum rate at the mean gain
// magnitude under the caps.
alloc::Allocation msr_allocate(const Scenario& s) {
    const double s_b = s.b_max_hz / s.users;
    const double s_p = s.p_max_w / s.users;
    const double n0 = s.n0_w_per_hz * s_b / s_p;

    std::vector<opt::NegSumRateTerm::Pair> pairs;
    std::vector<std::unique_ptr<opt::Term>> cons;
    std::vector<std::pair<int, double>> cap_b, cap_p;
    const double b_min = s.b_min_hz / s_b, p_min = s.p_min_w / s_p;
    for (int i = 0; i < s.users; ++i) {
        const double mean_gain = s.delta(i) * std::sqrt(2.0 / M_PI);
        pairs.push_back({2 * i, 2 * i + 1, mean_gain / n0});
        cons.push_back(std::make_unique<opt::LinearTerm>(
            std::vector<std::pair<int, double>>{{2 * i, -1.0}}, b_min));
        cons.push_back(std::make_unique<opt::LinearTerm>(
            std::vector<std::pair<int, double>>{{2 * i + 1, -1.0}}, p_min));
        cap_b.emplace_back(2 * i, 1.0);
        cap_p.emplace_back(2 * i + 1, 1.0);
    }
    cons.push_back(std::make_unique<opt::LinearTerm>(std::move(cap_b),
                                                     -static_cast<double>(s.users)));
    cons.push_back(std::make_unique<opt::LinearTerm>(std::move(cap_p),
                                                     -static_cast<double>(s.users)));
    const opt::NegSumRateTerm objective(std::move(pairs));

    Eigen::VectorXd start(2 * s.users);
    for (int i = 0; i < s.users; ++i) {
        start(2 * i) = b_min + (1.0 - b_min) * (1.0 - 1e-7);
        start(2 * i + 1) = p_min + (1.0 - p_min) * (1.0 - 1e-7);
    }
    opt::BarrierOptions bo;
    const auto res = opt::minimize_with_barrier(objective, cons, start, bo);

    alloc::Allocation a;
    a.B.resize(s.users);
    a.P.resize(s.users);
    for (int i = 0; i < s.users; ++i) {
        a.B(i) = res.v(2 * i) * s_b;
        a.P(i) = res.v(2 * i + 1) * s_p;
    }
    return a;
}

} // namespace

double phi_user(const Scenario& s, const taskperf::TaskPerfModel& model,
                const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                const Eigen::VectorXd& o, int i, PhiMode mode) {
    const link::LinkParams lp = s.link_params(i, B(i), P(i));
    const double transmit = mode == PhiMode::exact ? link::success_prob(lp, o(i))
                                                   : link::g_term(lp, o(i));
    return taskperf::eta(model, o(i)) * transmit;
}

double phi_total(const Scenario& s, const Solution& sol, PhiMode mode) {
    for (int i = 0; i < s.users; ++i) {
        double row = 0.0;
        for (Eigen::Index n = 0; n < s.assignment.cols(); ++n) {
            row += s.assignment(i, n);
        }
        if (std::fabs(row - 1.0) > 1e-12) {
            throw std::invalid_argument("assignment rows must sum to 1 (14g)");
        }
    }
    const Eigen::VectorXd& phi = mode == PhiMode::exact ? sol.phi_user_exact
                                                        : sol.phi_user_surrogate;
    double total = 0.0;
    for (int i = 0; i < s.users; ++i) {
        if (sol.beta(i)) total += s.user_weight(i) * phi(i);
    }
    return total;
}

void evaluate_solution(const Scenario& s, const taskperf::TaskPerfModel& model,
                       Solution& sol) {
    sol.phi_user_exact.resize(s.users);
    sol.phi_user_surrogate.resize(s.users);
    for (int i = 0; i < s.users; ++i) {
        sol.phi_user_exact(i) = phi_user(s, model, sol.B, sol.P, sol.o, i, PhiMode::exact);
        sol.phi_user_surrogate(i) =
            phi_user(s, model, sol.B, sol.P, sol.o, i, PhiMode::surrogate);
    }
    sol.phi_exact = phi_total(s, sol, PhiMode::exact);
    sol.phi_surrogate = phi_total(s, sol, PhiMode::surrogate);
}

Eigen::VectorXd optimal_ratios(const Scenario& s, const taskperf::TaskPerfModel& model,
                               const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                               double grid_step, const Eigen::VectorXd* current) {
    return optimal_ratios_impl(s, model, B, P, grid_step, current, true);
}

Eigen::VectorXd optimal_ratios_serial(const Scenario& s,
                                      const taskperf::TaskPerfModel& model,
                                      const Eigen::VectorXd& B, const Eigen::VectorXd& P,
                                      double grid_step, const Eigen::VectorXd* current) {
    return optimal_ratios_impl(s, model, B, P, grid_step, current, false);
}

Solution crra(const Scenario& s, const taskperf::TaskPerfModel& model, double tol,
              int max_rounds, SolveTrace* trace) {
    s.require_valid();
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");

    alloc::Allocation bp = alloc::equal_split(s);
    Eigen::VectorXd o = optimal_ratios(s, model, bp.B, bp.P);
    const Eigen::VectorXi all = Eigen::VectorXi::Ones(s.users);

    double prev = -kInf;
    int rounds = 0;
    Eigen::VectorXd alpha(s.users);
    for (int r = 0; r < max_rounds; ++r) {
        if (r > 0) o = optimal_ratios(s, model, bp.B, bp.P, 0.01, &o);
        for (int i = 0; i < s.users; ++i) alpha(i) = taskperf::eta(model, o(i));

        std::vector<double> inner;
        bp = alloc::sca_allocate(s, o, alpha, 1e-8, 50, &bp,
                                 trace ? &inner : nullptr);
        if (trace) trace->sca_inner.push_back(std::move(inner));

        const double phi = weighted_surrogate(s, model, o, all, bp.B, bp.P, true);
        if (trace) trace->round_objective.push_back(phi);
        ++rounds;
        if (prev > -kInf && phi - prev <= tol) {
            prev = phi;
            break;
        }
        prev = phi;
    }
    return make_solution(s, model, o, all, bp.B, bp.P, rounds);
}

LpResult lp_relaxation(const SelectionInstance& inst) {
    check_instance(inst);
    LpResult out;
    out.beta = simplex_box_lp(inst.value, inst.b_cost, inst.p_cost, inst.b_cap,
                              inst.p_cap);
    out.bound = 0.0;
    for (Eigen::Index i = 0; i < inst.value.size(); ++i) {
        out.bound += inst.value(i) * out.beta(i);
    }
    return out;
}

Eigen::VectorXi branch_and_bound(const SelectionInstance& inst) {
    check_instance(inst);
    const int n = static_cast<int>(inst.value.size());

    Eigen::VectorXi incumbent = Eigen::VectorXi::Zero(n);
    double incumbent_val = 0.0;

    auto try_candidate = [&](const Eigen::VectorXi& beta) {
        if (!subset_feasible(inst, beta)) return;
        const double val = subset_value(inst, beta);
        if (val > incumbent_val) {
            incumbent_val = val;
            incumbent = beta;
        }
    };

    std::priority_queue<BnbNode, std::vector<BnbNode>, BnbNodeOrder> queue;
    int next_id = 0;

    auto push_node = [&](std::vector<int8_t> fixed) {
        Eigen::VectorXd rel;
        double bound = 0.0;
        if (!node_relaxation(inst, fixed, rel, bound)) return;
        // rounding the relaxation down gives a feasible incumbent
        Eigen::VectorXi down(n);
        for (int i = 0; i < n; ++i) down(i) = rel(i) >= 1.0 - 1e-9 ? 1 : 0;
        try_candidate(down);
        if (bound <= incumbent_val - 1e-9 * (1.0 + std::fabs(incumbent_val))) return;
        BnbNode node;
        node.bound = bound;
        node.id = next_id++;
        node.fixed = std::move(fixed);
        queue.push(std::move(node));
    };

    push_node(std::vector<int8_t>(n, -1));

    while (!queue.empty()) {
        BnbNode node = queue.top();
        queue.pop();
        if (node.bound <= incumbent_val - 1e-9 * (1.0 + std::fabs(incumbent_val))) {
            continue;
        }
        Eigen::VectorXd rel;
        double bound = 0.0;
        if (!node_relaxation(inst, node.fixed, rel, bound)) continue;

        int branch_var = -1;
        double most_fractional = 1e-9;
        for (int i = 0; i < n; ++i) {
            if (node.fixed[i] >= 0) continue;
            const double frac = std::min(rel(i), 1.0 - rel(i));
            if (frac > most_fractional) {
                most_fractional = frac;
                branch_var = i;
            }
        }
        if (branch_var < 0) {
            Eigen::VectorXi beta(n);
            for (int i = 0; i < n; ++i) beta(i) = rel(i) >= 0.5 ? 1 : 0;
            try_candidate(beta);
            continue;
        }
        for (int8_t v : {static_cast<int8_t>(0), static_cast<int8_t>(1)}) {
            std::vector<int8_t> fixed = node.fixed;
            fixed[branch_var] = v;
            push_node(std::move(fixed));
        }
    }
    return incumbent;
}

Solution crraus(const Scenario& s, const taskperf::TaskPerfModel& model, double tol,
                int max_rounds, SolveTrace* trace) {
    s.require_valid();
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");

    // seed selection: heaviest users first while the minimums fit
    std::vector<int> order(s.users);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return s.user_weight(a) > s.user_weight(b);
    });
    int fit = s.users;
    fit = std::min(fit, static_cast<int>(std::floor(s.b_max_hz / s.b_min_hz + 1e-12)));
    fit = std::min(fit, static_cast<int>(std::floor(s.p_max_w / s.p_min_w + 1e-12)));
    if (fit < 1) {
        throw alloc::InfeasibleError("caps cannot admit even one user at the minimums");
    }

    Eigen::VectorXi beta = Eigen::VectorXi::Zero(s.users);
    for (int k = 0; k < fit && k < s.users; ++k) beta(order[k]) = 1;
    const int selected0 = beta.sum();

    Eigen::VectorXd B = Eigen::VectorXd::Constant(s.users, s.b_min_hz);
    Eigen::VectorXd P = Eigen::VectorXd::Constant(s.users, s.p_min_w);
    for (int i = 0; i < s.users; ++i) {
        if (beta(i)) {
            B(i) = s.b_max_hz / selected0;
            P(i) = s.p_max_w / selected0;
        }
    }

    Eigen::VectorXd o = optimal_ratios(s, model, B, P);
    double prev = -kInf;
    int rounds = 0;
    for (int r = 0; r < max_rounds; ++r) {
        if (r > 0) o = optimal_ratios(s, model, B, P, 0.01, &o);

        SelectionInstance inst;
        inst.value.resize(s.users);
        inst.b_cost.resize(s.users);
        inst.p_cost.resize(s.users);
        inst.b_cap = s.b_max_hz;
        inst.p_cap = s.p_max_w;
        for (int i = 0; i < s.users; ++i) {
            inst.value(i) =
                s.user_weight(i) * phi_user(s, model, B, P, o, i, PhiMode::surrogate);
            inst.b_cost(i) = beta(i) ? B(i) : s.b_min_hz;
            inst.p_cost(i) = beta(i) ? P(i) : s.p_min_w;
        }
        const Eigen::VectorXi beta_new = branch_and_bound(inst);
        for (int i = 0; i < s.users; ++i) {
            if (!beta_new(i) || !beta(i)) {
                // entering users start from the minimums; dropped users
                // revert to the placeholder costs
                B(i) = s.b_min_hz;
                P(i) = s.p_min_w;
            }
        }
        beta = beta_new;

        std::vector<int> selected;
        for (int i = 0; i < s.users; ++i) {
            if (beta(i)) selected.push_back(i);
        }
        if (!selected.empty()) {
            const Scenario sub = s.subset(selected);
            Eigen::VectorXd o_sub(sub.users), mu(sub.users);
            alloc::Allocation warm;
            warm.B.resize(sub.users);
            warm.P.resize(sub.users);
            for (int u = 0; u < sub.users; ++u) {
                const int i = selected[u];
                o_sub(u) = o(i);
                mu(u) = s.user_weight(i) * taskperf::eta(model, o(i));
                warm.B(u) = B(i);
                warm.P(u) = P(i);
            }
            std::vector<double> inner;
            const alloc::Allocation got = alloc::sca_allocate(
                sub, o_sub, mu, 1e-8, 50, &warm, trace ? &inner : nullptr);
            if (trace) trace->sca_inner.push_back(std::move(inner));
            for (int u = 0; u < sub.users; ++u) {
                B(selected[u]) = got.B(u);
                P(selected[u]) = got.P(u);
            }
        }

        const double phi = weighted_surrogate(s, model, o, beta, B, P, false);
        if (trace) trace->round_objective.push_back(phi);
        ++rounds;
        if (prev > -kInf && phi - prev <= tol) {
            prev = phi;
            break;
        }
        prev = phi;
    }
    return make_solution(s, model, o, beta, B, P, rounds);
}

Solution baseline_fcr(const Scenario& s, const taskperf::TaskPerfModel& model,
                      double fixed_ratio) {
    s.require_valid();
    if (!(fixed_ratio > 0.0 && fixed_ratio < 1.0)) {
        throw std::invalid_argument("fixed ratio must lie in (0, 1) (14e)");
    }
    const Eigen::VectorXd o = Eigen::VectorXd::Constant(s.users, fixed_ratio);
    Eigen::VectorXd alpha(s.users);
    for (int i = 0; i < s.users; ++i) {
        alpha(i) = s.user_weight(i) * taskperf::eta(model, fixed_ratio);
    }
    const alloc::Allocation warm = alloc::equal_split(s);
    const alloc::Allocation bp = alloc::sca_allocate(s, o, alpha, 1e-8, 50, &warm);
    return make_solution(s, model, o, Eigen::VectorXi::Ones(s.users), bp.B, bp.P, 1);
}

Solution baseline_fra(const Scenario& s, const taskperf::TaskPerfModel& model) {
    s.require_valid();
    const alloc::Allocation bp = alloc::equal_split(s);
    const Eigen::VectorXd o = optimal_ratios(s, model, bp.B, bp.P);
    return make_solution(s, model, o, Eigen::VectorXi::Ones(s.users), bp.B, bp.P, 1);
}

Solution baseline_msr(const Scenario& s, const taskperf::TaskPerfModel& model) {
    s.require_valid();
    const alloc::Allocation bp = msr_allocate(s);
    const Eigen::VectorXd o = optimal_ratios(s, model, bp.B, bp.P);
    return make_solution(s, model, o, Eigen::VectorXi::Ones(s.users), bp.B, bp.P, 1);
}

} // namespace semcom::plan
