#pragma once

#include <Eigen/Core>

#include <memory>
#include <utility>
#include <vector>

namespace semcom::opt {

// Smooth scalar term over the full variable vector. Used both for
// objectives and for constraints in g(v) <= 0 form.
class Term {
public:
    virtual ~Term() = default;
    virtual double value(const Eigen::VectorXd& v) const = 0;
    // out is zeroed by the caller; write dg/dv into it.
    virtual void gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const = 0;
    // hess += w * d2g/dv2
    virtual void add_hessian(const Eigen::VectorXd& v, double w,
                             Eigen::MatrixXd& hess) const = 0;
};

// g = sum_i coeffs[i].second * v[coeffs[i].first] + constant
class LinearTerm : public Term {
public:
    LinearTerm(std::vector<std::pair<int, double>> coeffs, double constant)
        : coeffs_(std::move(coeffs)), constant_(constant) {}
    double value(const Eigen::VectorXd& v) const override;
    void gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    void add_hessian(const Eigen::VectorXd&, double, Eigen::MatrixXd&) const override {}

private:
    std::vector<std::pair<int, double>> coeffs_;
    double constant_;
};

// g = (1/2) sum q.coef * v[q.i] * v[q.j]  (i != j contributes both
// orders) + linear + constant
class QuadTerm : public Term {
public:
    struct QuadEntry {
        int i;
        int j;
        double coef;
    };
    QuadTerm(std::vector<QuadEntry> quad, std::vector<std::pair<int, double>> lin,
             double constant)
        : quad_(std::move(quad)), lin_(std::move(lin)), constant_(constant) {}
    double value(const Eigen::VectorXd& v) const override;
    void gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    void add_hessian(const Eigen::VectorXd& v, double w, Eigen::MatrixXd& hess) const override;

private:
    std::vector<QuadEntry> quad_;
    std::vector<std::pair<int, double>> lin_;
    double constant_;
};

// g = coef * (2^{v[exp_var]} - 1) - v[lin_var]
class Exp2Term : public Term {
public:
    Exp2Term(int exp_var, int lin_var, double coef = 1.0)
        : exp_var_(exp_var), lin_var_(lin_var), coef_(coef) {}
    double value(const Eigen::VectorXd& v) const override;
    void gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    void add_hessian(const Eigen::VectorXd& v, double w, Eigen::MatrixXd& hess) const override;

private:
    int exp_var_;
    int lin_var_;
    double coef_;
};

// g = numerator / v[den_var] - v[lin_var], valid on v[den_var] > 0
class InverseTerm : public Term {
public:
    InverseTerm(double numerator, int den_var, int lin_var)
        : numerator_(numerator), den_var_(den_var), lin_var_(lin_var) {}
    double value(const Eigen::VectorXd& v) const override;
    void gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    void add_hessian(const Eigen::VectorXd& v, double w, Eigen::MatrixXd& hess) const override;

private:
    double numerator_;
    int den_var_;
    int lin_var_;
};

// f = -sum_i v[b_var] * ln(1 + c_i * v[p_var] / v[b_var]); concave sum
// rate negated for minimization. Valid on b > 0, p >= 0.
class NegSumRateTerm : public Term {
public:
    struct Pair {
        int b_var;
        int p_var;
        double c;
    };
    explicit NegSumRateTerm(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {}
    double value(const Eigen::VectorXd& v) const override;
    void gradient_into(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    void add_hessian(const Eigen::VectorXd& v, double w, Eigen::MatrixXd& hess) const override;

private:
    std::vector<Pair> pairs_;
};

struct BarrierOptions {
    double tol = 1e-8;        // target duality measure m/t
    double mu0 = 1.0;         // initial barrier parameter
    double mu_factor = 0.2;   // geometric decrease per stage
    double newton_tol = 1e-9; // stop centering at lambda^2/2 below this
    int max_newton = 80;
    int max_stages = 80;
};

struct BarrierResult {
    Eigen::VectorXd v;
    double objective = 0.0;
    double duality_measure = 0.0;
    // max-norm residual of grad f + sum lambda_k grad g_k at the final point
    double kkt_residual = 0.0;
    int newton_steps = 0;
    bool converged = false;
};

// Path-following barrier method for min f(v) s.t. g_k(v) <= 0 from a
// strictly feasible start. Deterministic; dense Newton steps with
// backtracking line search.
BarrierResult minimize_with_barrier(const Term& objective,
                                    const std::vector<std::unique_ptr<Term>>& constraints,
                                    Eigen::VectorXd start, const BarrierOptions& options);

} // namespace semcom::opt
