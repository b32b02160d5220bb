#include <doctest.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "semcom/barrier.hpp"

using namespace semcom::opt;

namespace {

// finite-difference check of one term's derivatives at a point
void check_term(const Term& term, const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    const double h = 1e-6;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    term.gradient_into(v, grad);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd up = v, dn = v;
        up(k) += h;
        dn(k) -= h;
        const double fd = (term.value(up) - term.value(dn)) / (2.0 * h);
        CHECK(grad(k) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
    term.add_hessian(v, 1.0, hess);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd up = v, dn = v;
        up(k) += h;
        dn(k) -= h;
        Eigen::VectorXd gu = Eigen::VectorXd::Zero(n), gd = Eigen::VectorXd::Zero(n);
        term.gradient_into(up, gu);
        term.gradient_into(dn, gd);
        for (int r = 0; r < n; ++r) {
            const double fd = (gu(r) - gd(r)) / (2.0 * h);
            CHECK(hess(r, k) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
        }
    }
}

} // namespace

TEST_CASE("term derivatives agree with finite differences") {
    std::mt19937_64 eng(55);
    Eigen::VectorXd v(4);
    for (int rep = 0; rep < 5; ++rep) {
        for (int k = 0; k < 4; ++k) v(k) = oracle::uniform(eng, 0.3, 2.0);
        check_term(LinearTerm({{0, 1.4}, {2, -0.3}}, 0.7), v);
        check_term(QuadTerm({{0, 0, 0.8}, {1, 2, -0.5}}, {{3, 1.1}}, -0.2), v);
        check_term(Exp2Term(1, 3, 0.6), v);
        check_term(InverseTerm(1.7, 0, 2), v);
        check_term(NegSumRateTerm({{0, 1, 2.5}, {2, 3, 0.8}}), v);
    }
}

TEST_CASE("barrier solves a box-constrained quadratic") {
    // min (x-2)^2 + (y+1)^2 s.t. x <= 1, y >= 0, x + y <= 4
    std::vector<std::unique_ptr<Term>> cons;
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{0, 1.0}}, -1.0));
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{1, -1.0}}, 0.0));
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{0, 1.0}, {1, 1.0}}, -4.0));
    QuadTerm obj({{0, 0, 2.0}, {1, 1, 2.0}}, {{0, -4.0}, {1, 2.0}}, 5.0);

    Eigen::VectorXd start(2);
    start << 0.5, 0.5;
    BarrierOptions bo;
    const auto res = minimize_with_barrier(obj, cons, start, bo);
    CHECK(res.converged);
    CHECK(res.v(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.v(1) == doctest::Approx(0.0).epsilon(1e-5).scale(1.0));
    CHECK(res.kkt_residual <= 1e-5);
}

TEST_CASE("barrier pushes a linear objective to the active cap") {
    // max x + 2y s.t. x, y >= 0, x + y <= 3  ->  (0, 3)
    std::vector<std::unique_ptr<Term>> cons;
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{0, -1.0}}, 0.0));
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{1, -1.0}}, 0.0));
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{0, 1.0}, {1, 1.0}}, -3.0));
    LinearTerm obj({{0, -1.0}, {1, -2.0}}, 0.0);

    Eigen::VectorXd start(2);
    start << 1.0, 1.0;
    const auto res = minimize_with_barrier(obj, cons, start, BarrierOptions{});
    CHECK(res.converged);
    CHECK(res.v(1) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(res.objective == doctest::Approx(-6.0).epsilon(1e-6));
}

TEST_CASE("barrier rejects infeasible starts") {
    std::vector<std::unique_ptr<Term>> cons;
    cons.push_back(std::make_unique<LinearTerm>(
        std::vector<std::pair<int, double>>{{0, 1.0}}, -1.0));
    LinearTerm obj({{0, 1.0}}, 0.0);
    Eigen::VectorXd start(1);
    start << 2.0;
    CHECK_THROWS_AS(minimize_with_barrier(obj, cons, start, BarrierOptions{}),
                    std::invalid_argument);
}
