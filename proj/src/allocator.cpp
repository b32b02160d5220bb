#include "semcom/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "semcom/barrier.hpp"
#include "semcom/link_model.hpp"

namespace semcom::alloc {

namespace {

// Users whose outage argument exceeds this carry g below e^{-32}; their
// objective signal is invisible to the Newton system and keeping their
// squeezed slack chains in it destroys its conditioning. They sit at
// the minimums for the round and contribute (numerically) zero.
constexpr double kAliveArg = 8.0;

// Per-user variable block in the subproblem.
enum Var { VB = 0, VP, VF, VL, VX, VM, VQ, VZ, kVars };

struct Scaled {
    double s_b, s_p;   // Hz and W per solver unit
    double n0;         // noise density in solver units
    double b_min, b_max, p_min, p_max;
    Eigen::VectorXd d;      // payload bits over (t0 * s_b)
    Eigen::VectorXd delta;
};

Scaled make_scaled(const Scenario& s, const Eigen::VectorXd& o) {
    Scaled sc;
    sc.s_b = s.b_max_hz / s.users;
    sc.s_p = s.p_max_w / s.users;
    sc.n0 = s.n0_w_per_hz * sc.s_b / sc.s_p;
    sc.b_min = s.b_min_hz / sc.s_b;
    sc.b_max = s.b_max_hz / sc.s_b;
    sc.p_min = s.p_min_w / sc.s_p;
    sc.p_max = s.p_max_w / sc.s_p;
    sc.d.resize(s.users);
    for (int i = 0; i < s.users; ++i) {
        sc.d(i) = s.d0_bits(i) * (1.0 - o(i)) / (s.t0_s * sc.s_b);
    }
    sc.delta = s.delta;
    return sc;
}

// Solver-unit copy of a slack state restricted to the given users.
struct Chain {
    Eigen::VectorXd B, P, f, l, x, m, q, z;

    explicit Chain(int n)
        : B(n), P(n), f(n), l(n), x(n), m(n), q(n), z(n) {}
    int size() const { return static_cast<int>(B.size()); }
};

// Squeeze every slack to equality at the given (scaled) allocation.
Chain tight_chain(const Scaled& sc, const std::vector<int>& users,
                  const Eigen::VectorXd& b, const Eigen::VectorXd& p) {
    Chain c(static_cast<int>(users.size()));
    for (int u = 0; u < c.size(); ++u) {
        const int i = users[u];
        c.B(u) = b(u);
        c.P(u) = p(u);
        c.q(u) = sc.d(i) / c.B(u);
        c.m(u) = std::exp2(c.q(u)) - 1.0;
        c.z(u) = c.B(u) * c.m(u);
        c.x(u) = sc.n0 * c.z(u) / (sc.delta(i) * c.P(u));
        c.l(u) = -0.5 * c.x(u) * c.x(u);
        c.f(u) = std::exp(c.l(u));
    }
    return c;
}

// Per-user variable scales taken from the linearization point. Squeezed
// users carry f ~ e^{l_j} many orders below 1 and m, z, x far above it;
// normalizing every block keeps the Newton system conditioned.
struct VarScales {
    Eigen::VectorXd f, x, m, z;

    static VarScales at(const Chain& lin) {
        const int n = lin.size();
        VarScales s{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                    Eigen::VectorXd(n)};
        for (int u = 0; u < n; ++u) {
            s.f(u) = std::exp(lin.l(u));
            s.x(u) = std::max(lin.x(u), 1.0);
            s.m(u) = std::max(lin.m(u), 1.0);
            s.z(u) = std::max(lin.z(u), 1.0);
        }
        return s;
    }
};

// Nudge a tight chain strictly inside every constraint of the
// subproblem linearized at `lin`. Fails (nullopt) when the chain holds
// non-finite values or the tangent planes leave no interior.
std::optional<Chain> strict_start(const Chain& lin, const Scaled& sc,
                                  const std::vector<int>& users,
                                  double b_cap, double p_cap) {
    const int n = lin.size();
    const double eps = 1e-6;
    const double tiny = 1e-10;
    Chain c = lin;

    for (int u = 0; u < n; ++u) {
        c.B(u) = sc.b_min + std::max((lin.B(u) - sc.b_min) * (1.0 - 1e-7), 1e-9);
        c.P(u) = sc.p_min + std::max((lin.P(u) - sc.p_min) * (1.0 - 1e-7), 1e-9);
    }
    for (int pass = 0; pass < 80; ++pass) {
        bool ok = c.B.sum() < b_cap && c.P.sum() < p_cap;
        if (ok) break;
        for (int u = 0; u < n; ++u) {
            c.B(u) = sc.b_min + (c.B(u) - sc.b_min) * 0.5;
            c.P(u) = sc.p_min + (c.P(u) - sc.p_min) * 0.5;
        }
        if (pass == 79) return std::nullopt;
    }

    for (int u = 0; u < n; ++u) {
        const int i = users[u];
        c.q(u) = (sc.d(i) / c.B(u)) * (1.0 + eps) + tiny;
        const double m_eq = std::exp2(c.q(u)) - 1.0;
        if (!std::isfinite(m_eq)) return std::nullopt;
        c.m(u) = m_eq * (1.0 + eps) + tiny;

        const double K = lin.B(u) - lin.m(u);
        const double bm = c.B(u) + c.m(u);
        const double rhs25 =
            0.25 * (bm * bm - 2.0 * (c.B(u) - c.m(u)) * K + K * K);
        c.z(u) = rhs25 * (1.0 + eps) + tiny;

        const double S = lin.x(u) + lin.P(u);
        const double d2 = c.P(u) * S - sc.n0 * c.z(u) / sc.delta(i);
        if (!(d2 > 0.0)) return std::nullopt;
        const double x_lo = (c.P(u) + S) - 2.0 * std::sqrt(d2);
        c.x(u) = std::max(x_lo, 0.0) * (1.0 + eps) + tiny;

        c.l(u) = -0.5 * c.x(u) * c.x(u) * (1.0 + eps) - tiny;
        const double el = std::exp(lin.l(u));
        const double tangent = el * (1.0 + c.l(u) - lin.l(u));
        if (!(tangent > 0.0)) return std::nullopt;
        double f = tangent * (1.0 - eps);
        if (!(f > 0.0 && f < tangent)) f = tangent * 0.5;
        if (!(f > 0.0)) return std::nullopt;
        c.f(u) = f;
    }
    return c;
}

Eigen::VectorXd pack(const Chain& c, const VarScales& s) {
    const int n = c.size();
    Eigen::VectorXd v(n * kVars);
    for (int u = 0; u < n; ++u) {
        v(u * kVars + VB) = c.B(u);
        v(u * kVars + VP) = c.P(u);
        v(u * kVars + VF) = c.f(u) / s.f(u);
        v(u * kVars + VL) = c.l(u);
        v(u * kVars + VX) = c.x(u) / s.x(u);
        v(u * kVars + VM) = c.m(u) / s.m(u);
        v(u * kVars + VQ) = c.q(u);
        v(u * kVars + VZ) = c.z(u) / s.z(u);
    }
    return v;
}

Chain unpack(const Eigen::VectorXd& v, const VarScales& s) {
    const int n = static_cast<int>(v.size()) / kVars;
    Chain c(n);
    for (int u = 0; u < n; ++u) {
        c.B(u) = v(u * kVars + VB);
        c.P(u) = v(u * kVars + VP);
        c.f(u) = v(u * kVars + VF) * s.f(u);
        c.l(u) = v(u * kVars + VL);
        c.x(u) = v(u * kVars + VX) * s.x(u);
        c.m(u) = v(u * kVars + VM) * s.m(u);
        c.q(u) = v(u * kVars + VQ);
        c.z(u) = v(u * kVars + VZ) * s.z(u);
    }
    return c;
}

std::vector<std::unique_ptr<opt::Term>> build_constraints(
    const Scaled& sc, const std::vector<int>& users, const Chain& lin,
    const VarScales& vs, double b_cap, double p_cap) {
    using opt::LinearTerm;
    using opt::QuadTerm;
    const int n = lin.size();
    std::vector<std::unique_ptr<opt::Term>> cons;
    cons.reserve(static_cast<std::size_t>(n) * 10 + 2);

    std::vector<std::pair<int, double>> cap_b, cap_p;
    for (int u = 0; u < n; ++u) {
        const int i = users[u];
        const int oB = u * kVars + VB, oP = u * kVars + VP, oF = u * kVars + VF,
                  oL = u * kVars + VL, oX = u * kVars + VX, oM = u * kVars + VM,
                  oQ = u * kVars + VQ, oZ = u * kVars + VZ;
        const double sf = vs.f(u), sx = vs.x(u), sm = vs.m(u), sz = vs.z(u);
        (void)sf;

        // (30a) f <= e^{l_j} (1 + l - l_j), divided through by e^{l_j}
        cons.push_back(std::make_unique<LinearTerm>(
            std::vector<std::pair<int, double>>{{oF, 1.0}, {oL, -1.0}},
            lin.l(u) - 1.0));
        // (30b) l + x^2/2 <= 0
        cons.push_back(std::make_unique<QuadTerm>(
            std::vector<QuadTerm::QuadEntry>{{oX, oX, sx * sx}},
            std::vector<std::pair<int, double>>{{oL, 1.0}}, 0.0));
        // (30c) 2^q - 1 <= m
        cons.push_back(std::make_unique<opt::Exp2Term>(oQ, oM, 1.0 / sm));
        // (30d) d/B <= q
        cons.push_back(std::make_unique<opt::InverseTerm>(sc.d(i), oB, oQ));
        // (25) bilinear z >= B*m, inner-approximated at (B_j, m_j) and
        // divided through by the z scale
        const double K = lin.B(u) - lin.m(u);
        cons.push_back(std::make_unique<QuadTerm>(
            std::vector<QuadTerm::QuadEntry>{{oB, oB, 0.5 / sz},
                                             {oM, oM, 0.5 * sm * sm / sz},
                                             {oB, oM, 0.5 * sm / sz}},
            std::vector<std::pair<int, double>>{{oB, -0.5 * K / sz},
                                                {oM, 0.5 * K * sm / sz},
                                                {oZ, -1.0}},
            0.25 * K * K / sz));
        // power coupling x*P >= N0*z/delta, inner-approximated at
        // (x_j, P_j); only (x+P)^2 is linearized, -(x-P)^2 stays
        // quadratic and convex
        const double S = lin.x(u) + lin.P(u);
        const double cs = std::max(1.0, S * S);
        cons.push_back(std::make_unique<QuadTerm>(
            std::vector<QuadTerm::QuadEntry>{{oX, oX, 2.0 * sx * sx / cs},
                                             {oP, oP, 2.0 / cs},
                                             {oX, oP, -2.0 * sx / cs}},
            std::vector<std::pair<int, double>>{
                {oZ, 4.0 * sc.n0 * sz / (sc.delta(i) * cs)},
                {oX, -2.0 * S * sx / cs},
                {oP, -2.0 * S / cs}},
            S * S / cs));
        // boxes
        cons.push_back(std::make_unique<LinearTerm>(
            std::vector<std::pair<int, double>>{{oB, -1.0}}, sc.b_min));
        cons.push_back(std::make_unique<LinearTerm>(
            std::vector<std::pair<int, double>>{{oP, -1.0}}, sc.p_min));
        cons.push_back(std::make_unique<LinearTerm>(
            std::vector<std::pair<int, double>>{{oX, -1.0}}, 0.0));
        cons.push_back(std::make_unique<LinearTerm>(
            std::vector<std::pair<int, double>>{{oF, -1.0}}, 0.0));

        cap_b.emplace_back(oB, 1.0);
        cap_p.emplace_back(oP, 1.0);
    }
    cons.push_back(std::make_unique<LinearTerm>(std::move(cap_b), -b_cap));
    cons.push_back(std::make_unique<LinearTerm>(std::move(cap_p), -p_cap));
    return cons;
}

void check_inputs(const Scenario& s, const Eigen::VectorXd& o,
                  const Eigen::VectorXd& alpha) {
    if (o.size() != s.users || alpha.size() != s.users) {
        throw std::invalid_argument("ratio and weight vectors must match the user count");
    }
    for (int i = 0; i < s.users; ++i) {
        if (!(o(i) > 0.0 && o(i) < 1.0)) {
            throw std::invalid_argument("compression ratios must lie in (0, 1) (14e)");
        }
        if (!(alpha(i) >= 0.0)) {
            throw std::invalid_argument("objective weights must be nonnegative");
        }
    }
}

void check_caps(const Scenario& s) {
    if (s.users * s.b_min_hz > s.b_max_hz) {
        throw InfeasibleError("U * B_min exceeds B_max (14a)/(14b)");
    }
    if (s.users * s.p_min_w > s.p_max_w) {
        throw InfeasibleError("U * P_min exceeds P_max (14c)/(14d)");
    }
}

SlackState unscale(const Chain& c, const Scaled& sc, const std::vector<int>& users,
                   int total_users, const SlackState* fill) {
    SlackState st;
    if (fill) {
        st = *fill;
    } else {
        st.B = Eigen::VectorXd::Zero(total_users);
        st.P = Eigen::VectorXd::Zero(total_users);
        st.f = Eigen::VectorXd::Zero(total_users);
        st.l = Eigen::VectorXd::Zero(total_users);
        st.x = Eigen::VectorXd::Zero(total_users);
        st.m = Eigen::VectorXd::Zero(total_users);
        st.q = Eigen::VectorXd::Zero(total_users);
        st.z = Eigen::VectorXd::Zero(total_users);
    }
    for (int u = 0; u < c.size(); ++u) {
        const int i = users[u];
        st.B(i) = c.B(u) * sc.s_b;
        st.P(i) = c.P(u) * sc.s_p;
        st.f(i) = c.f(u);
        st.l(i) = c.l(u);
        st.x(i) = c.x(u);
        st.m(i) = c.m(u);
        st.q(i) = c.q(u);
        st.z(i) = c.z(u) * sc.s_b;
    }
    return st;
}

Chain to_chain(const SlackState& st, const Scaled& sc, const std::vector<int>& users) {
    Chain c(static_cast<int>(users.size()));
    for (int u = 0; u < c.size(); ++u) {
        const int i = users[u];
        c.B(u) = st.B(i) / sc.s_b;
        c.P(u) = st.P(i) / sc.s_p;
        c.f(u) = st.f(i);
        c.l(u) = st.l(i);
        c.x(u) = st.x(i);
        c.m(u) = st.m(i);
        c.q(u) = st.q(i);
        c.z(u) = st.z(i) / sc.s_b;
    }
    return c;
}

std::vector<int> all_users(int n) {
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

} // namespace

Allocation equal_split(const Scenario& s) {
    Allocation a;
    a.B = Eigen::VectorXd::Constant(s.users, s.b_max_hz / s.users);
    a.P = Eigen::VectorXd::Constant(s.users, s.p_max_w / s.users);
    return a;
}

SlackState init_feasible(const Scenario& s, const Eigen::VectorXd& o,
                         const Eigen::VectorXd& alpha) {
    check_inputs(s, o, alpha);
    check_caps(s);
    const Scaled sc = make_scaled(s, o);
    const auto ids = all_users(s.users);
    const Eigen::VectorXd ones = Eigen::VectorXd::Constant(s.users, sc.b_max / s.users);
    const Eigen::VectorXd onesp = Eigen::VectorXd::Constant(s.users, sc.p_max / s.users);
    const Chain c = tight_chain(sc, ids, ones, onesp);
    return unscale(c, sc, ids, s.users, nullptr);
}

SlackState tighten(const Scenario& s, const Eigen::VectorXd& o, const Allocation& at) {
    const Scaled sc = make_scaled(s, o);
    const auto ids = all_users(s.users);
    const Chain c = tight_chain(sc, ids, at.B / sc.s_b, at.P / sc.s_p);
    return unscale(c, sc, ids, s.users, nullptr);
}

double surrogate_objective(const Scenario& s, const Eigen::VectorXd& o,
                           const Eigen::VectorXd& alpha, const Allocation& at) {
    double total = 0.0;
    for (int i = 0; i < s.users; ++i) {
        if (alpha(i) == 0.0) continue;
        total += alpha(i) * link::g_term(s.link_params(i, at.B(i), at.P(i)), o(i));
    }
    return total;
}

SlackState convex_step(const Scenario& s, const Eigen::VectorXd& o,
                       const Eigen::VectorXd& alpha, const SlackState& prev,
                       double tol) {
    check_inputs(s, o, alpha);
    const Scaled sc = make_scaled(s, o);
    const auto ids = all_users(s.users);
    const Chain lin = to_chain(prev, sc, ids);

    const auto start = strict_start(lin, sc, ids, sc.b_max, sc.p_max);
    if (!start) return prev; // no interior around this linearization

    const VarScales vs = VarScales::at(lin);
    auto cons = build_constraints(sc, ids, lin, vs, sc.b_max, sc.p_max);
    std::vector<std::pair<int, double>> obj;
    obj.reserve(s.users);
    for (int u = 0; u < s.users; ++u) {
        obj.emplace_back(u * kVars + VF, -alpha(u) * vs.f(u));
    }
    const opt::LinearTerm objective(std::move(obj), 0.0);

    opt::BarrierOptions bo;
    bo.tol = tol;
    const auto res = opt::minimize_with_barrier(objective, cons, pack(*start, vs), bo);
    const Chain out = unpack(res.v, vs);
    if (!res.converged) {
        throw AllocError("inner convex solve did not reach its tolerance",
                         unscale(out, sc, ids, s.users, nullptr));
    }

    const double obj_prev = -(alpha.array() * prev.f.array()).sum();
    const double obj_new = -(alpha.array() * out.f.array()).sum();
    if (obj_new > obj_prev) return prev; // already at a fixed point
    return unscale(out, sc, ids, s.users, nullptr);
}

Allocation sca_allocate(const Scenario& s, const Eigen::VectorXd& o,
                        const Eigen::VectorXd& alpha, double tol, int max_outer,
                        const Allocation* warm, std::vector<double>* trace) {
    check_inputs(s, o, alpha);
    check_caps(s);
    if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");

    const Scaled sc = make_scaled(s, o);
    Allocation cur = warm ? *warm : equal_split(s);

    double obj = surrogate_objective(s, o, alpha, cur);
    if (trace) trace->push_back(obj);

    for (int outer = 0; outer < max_outer; ++outer) {
        // refresh the active set: once a user has been squeezed below
        // the representable outage range it is parked at the minimums
        std::vector<int> alive;
        for (int i = 0; i < s.users; ++i) {
            const double arg =
                link::outage_argument(s.link_params(i, cur.B(i), cur.P(i)), o(i));
            if (alpha(i) > 0.0 && arg <= kAliveArg) {
                alive.push_back(i);
            } else {
                cur.B(i) = s.b_min_hz;
                cur.P(i) = s.p_min_w;
            }
        }
        if (alive.empty()) break;
        const double pinned =
            static_cast<double>(s.users - static_cast<int>(alive.size()));
        const double b_cap = sc.b_max - pinned * sc.b_min;
        const double p_cap = sc.p_max - pinned * sc.p_min;

        Eigen::VectorXd b(alive.size()), p(alive.size());
        for (int u = 0; u < static_cast<int>(alive.size()); ++u) {
            b(u) = cur.B(alive[u]) / sc.s_b;
            p(u) = cur.P(alive[u]) / sc.s_p;
        }
        const Chain lin = tight_chain(sc, alive, b, p);
        const auto start = strict_start(lin, sc, alive, b_cap, p_cap);
        if (!start) break;

        const VarScales vs = VarScales::at(lin);
        auto cons = build_constraints(sc, alive, lin, vs, b_cap, p_cap);
        std::vector<std::pair<int, double>> obj_coeffs;
        for (int u = 0; u < static_cast<int>(alive.size()); ++u) {
            obj_coeffs.emplace_back(u * kVars + VF, -alpha(alive[u]) * vs.f(u));
        }
        const opt::LinearTerm objective(std::move(obj_coeffs), 0.0);
        opt::BarrierOptions bo;
        bo.tol = 1e-8;
        const auto res = opt::minimize_with_barrier(objective, cons, pack(*start, vs), bo);
        if (!res.converged) {
            throw AllocError("SCA inner solve did not converge",
                             tighten(s, o, cur));
        }
        const Chain out = unpack(res.v, vs);

        Allocation cand = cur;
        for (int u = 0; u < static_cast<int>(alive.size()); ++u) {
            cand.B(alive[u]) = out.B(u) * sc.s_b;
            cand.P(alive[u]) = out.P(u) * sc.s_p;
        }
        double cand_obj = surrogate_objective(s, o, alpha, cand);

        // the inner approximations contract slowly along resource
        // swaps; extrapolating the step on the true surrogate keeps
        // monotonicity and cuts the round count by an order
        const Eigen::VectorXd step_b = cand.B - cur.B;
        const Eigen::VectorXd step_p = cand.P - cur.P;
        double scale_max = std::numeric_limits<double>::infinity();
        for (int i = 0; i < s.users; ++i) {
            if (step_b(i) < 0.0) {
                scale_max = std::min(scale_max, (cur.B(i) - s.b_min_hz) / -step_b(i));
            }
            if (step_p(i) < 0.0) {
                scale_max = std::min(scale_max, (cur.P(i) - s.p_min_w) / -step_p(i));
            }
        }
        const double grow_b = step_b.sum(), grow_p = step_p.sum();
        if (grow_b > 0.0) {
            scale_max = std::min(scale_max, (s.b_max_hz - cur.B.sum()) / grow_b);
        }
        if (grow_p > 0.0) {
            scale_max = std::min(scale_max, (s.p_max_w - cur.P.sum()) / grow_p);
        }
        for (double scale = 2.0; scale <= scale_max; scale *= 2.0) {
            Allocation shot = cur;
            shot.B += scale * step_b;
            shot.P += scale * step_p;
            const double shot_obj = surrogate_objective(s, o, alpha, shot);
            if (shot_obj <= cand_obj) break;
            cand = shot;
            cand_obj = shot_obj;
        }

        if (cand_obj < obj) break; // re-linearizing cannot help further
        const double gain = cand_obj - obj;
        cur = cand;
        obj = cand_obj;
        if (trace) trace->push_back(obj);
        if (gain <= tol) break;
    }
    return cur;
}

} // namespace semcom::alloc
