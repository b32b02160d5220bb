#include "semcom/barrier.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcom::opt {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

double LinearTerm::value(const Eigen::VectorXd& v) const {
    double s = constant_;
    for (const auto& [i, c] : coeffs_) s += c * v(i);
    return s;
}

void LinearTerm::gradient_into(const Eigen::VectorXd&, Eigen::VectorXd& out) const {
    for (const auto& [i, c] : coeffs_) out(i) += c;
}

double QuadTerm::value(const Eigen::VectorXd& v) const {
    double s = constant_;
    for (const auto& [i, c] : lin_) s += c * v(i);
    for (const auto& q : quad_) {
        s += 0.5 * q.coef * v(q.i) * v(q.j) * (q.i == q.j ? 1.0 : 2.0);
    }
    return s;
}

void QuadTerm::gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    for (const auto& [i, c] : lin_) out(i) += c;
    for (const auto& q : quad_) {
        if (q.i == q.j) {
            out(q.i) += q.coef * v(q.i);
        } else {
            out(q.i) += q.coef * v(q.j);
            out(q.j) += q.coef * v(q.i);
        }
    }
}

void QuadTerm::add_hessian(const Eigen::VectorXd&, double w, Eigen::MatrixXd& hess) const {
    for (const auto& q : quad_) {
        if (q.i == q.j) {
            hess(q.i, q.i) += w * q.coef;
        } else {
            hess(q.i, q.j) += w * q.coef;
            hess(q.j, q.i) += w * q.coef;
        }
    }
}

double Exp2Term::value(const Eigen::VectorXd& v) const {
    return coef_ * (std::exp2(v(exp_var_)) - 1.0) - v(lin_var_);
}

void Exp2Term::gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    out(exp_var_) += coef_ * kLn2 * std::exp2(v(exp_var_));
    out(lin_var_) += -1.0;
}

void Exp2Term::add_hessian(const Eigen::VectorXd& v, double w, Eigen::MatrixXd& hess) const {
    hess(exp_var_, exp_var_) += w * coef_ * kLn2 * kLn2 * std::exp2(v(exp_var_));
}

double InverseTerm::value(const Eigen::VectorXd& v) const {
    const double den = v(den_var_);
    if (!(den > 0.0)) return kInf;
    return numerator_ / den - v(lin_var_);
}

void InverseTerm::gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    const double den = v(den_var_);
    out(den_var_) += -numerator_ / (den * den);
    out(lin_var_) += -1.0;
}

void InverseTerm::add_hessian(const Eigen::VectorXd& v, double w, Eigen::MatrixXd& hess) const {
    const double den = v(den_var_);
    hess(den_var_, den_var_) += w * 2.0 * numerator_ / (den * den * den);
}

double NegSumRateTerm::value(const Eigen::VectorXd& v) const {
    double s = 0.0;
    for (const auto& pr : pairs_) {
        const double b = v(pr.b_var);
        const double p = v(pr.p_var);
        if (!(b > 0.0) || p < 0.0) return kInf;
        s -= b * std::log1p(pr.c * p / b);
    }
    return s;
}

void NegSumRateTerm::gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    for (const auto& pr : pairs_) {
        const double b = v(pr.b_var);
        const double p = v(pr.p_var);
        const double u = pr.c * p / b;
        out(pr.b_var) += -(std::log1p(u) - u / (1.0 + u));
        out(pr.p_var) += -pr.c / (1.0 + u);
    }
}

void NegSumRateTerm::add_hessian(const Eigen::VectorXd& v, double w,
                                 Eigen::MatrixXd& hess) const {
    for (const auto& pr : pairs_) {
        const double b = v(pr.b_var);
        const double p = v(pr.p_var);
        const double u = pr.c * p / b;
        const double common = w / (b * (1.0 + u) * (1.0 + u));
        hess(pr.b_var, pr.b_var) += common * u * u;
        hess(pr.p_var, pr.p_var) += common * pr.c * pr.c;
        hess(pr.b_var, pr.p_var) += -common * pr.c * u;
        hess(pr.p_var, pr.b_var) += -common * pr.c * u;
    }
}

namespace {

// t * f(v) - sum ln(-g_k(v)); +inf outside the strict interior
double merit(const Term& objective, const std::vector<std::unique_ptr<Term>>& cons,
             const Eigen::VectorXd& v, double t) {
    double psi = t * objective.value(v);
    if (!std::isfinite(psi)) return kInf;
    for (const auto& c : cons) {
        const double g = c->value(v);
        if (!(g < 0.0) || !std::isfinite(g)) return kInf;
        psi -= std::log(-g);
    }
    return psi;
}

} // namespace

BarrierResult minimize_with_barrier(const Term& objective,
                                    const std::vector<std::unique_ptr<Term>>& constraints,
                                    Eigen::VectorXd start, const BarrierOptions& options) {
    const int n = static_cast<int>(start.size());
    const int m = static_cast<int>(constraints.size());
    for (const auto& c : constraints) {
        const double g = c->value(start);
        if (!(g < 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument("barrier start point is not strictly feasible");
        }
    }

    Eigen::VectorXd v = std::move(start);
    Eigen::VectorXd grad(n), cgrad(n), step(n);
    Eigen::MatrixXd hess(n, n);

    BarrierResult result;
    double t = 1.0 / options.mu0;

    for (int stage = 0; stage < options.max_stages; ++stage) {
        for (int it = 0; it < options.max_newton; ++it) {
            grad.setZero();
            objective.gradient_into(v, grad);
            grad *= t;
            hess.setZero();
            objective.add_hessian(v, t, hess);
            for (const auto& c : constraints) {
                const double g = c->value(v);
                cgrad.setZero();
                c->gradient_into(v, cgrad);
                const double inv = -1.0 / g; // positive
                grad += inv * cgrad;
                hess += (inv * inv) * (cgrad * cgrad.transpose());
                c->add_hessian(v, inv, hess);
            }

            // damped Newton step with a ridge fallback for flat directions
            double lambda_sq = -1.0;
            double ridge = 0.0;
            for (int attempt = 0; attempt < 12; ++attempt) {
                Eigen::MatrixXd h = hess;
                if (ridge > 0.0) h.diagonal().array() += ridge;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
                if (ldlt.info() == Eigen::Success) {
                    step = ldlt.solve(-grad);
                    lambda_sq = -grad.dot(step);
                    if (std::isfinite(lambda_sq) && lambda_sq >= 0.0 &&
                        step.allFinite()) {
                        break;
                    }
                }
                ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
                lambda_sq = -1.0;
            }
            if (lambda_sq < 0.0) break; // numerically stuck; move to next stage

            if (0.5 * lambda_sq <= options.newton_tol) break;

            const double psi0 = merit(objective, constraints, v, t);
            const double slope = grad.dot(step);
            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 70; ++ls) {
                const Eigen::VectorXd cand = v + alpha * step;
                const double psi = merit(objective, constraints, cand, t);
                if (psi <= psi0 + 1e-4 * alpha * slope) {
                    v = cand;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++result.newton_steps;
            if (!moved) break;
        }

        result.duality_measure = static_cast<double>(m) / t;
        if (result.duality_measure <= options.tol) {
            result.converged = true;
            break;
        }
        t /= options.mu_factor;
    }

    // stationarity residual with the barrier multipliers lambda_k = -1/(t g_k)
    grad.setZero();
    objective.gradient_into(v, grad);
    for (const auto& c : constraints) {
        const double g = c->value(v);
        cgrad.setZero();
        c->gradient_into(v, cgrad);
        grad += (-1.0 / (t * g)) * cgrad;
    }
    result.kkt_residual = grad.lpNorm<Eigen::Infinity>();
    result.objective = objective.value(v);
    result.v = std::move(v);
    return result;
}

} // namespace semcom::opt
