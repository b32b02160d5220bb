#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "semcom/semantics.hpp"

using namespace semcom::semantics;

namespace {

DiscreteJoint bsc_joint(double flip) {
    DiscreteJoint j;
    j.p.resize(2, 2);
    j.p << 0.5 * (1.0 - flip), 0.5 * flip, 0.5 * flip, 0.5 * (1.0 - flip);
    return j;
}

} // namespace

TEST_CASE("importance weights are spatial means") {
    Tensor3 g(2, 2, 2, 1.0);
    g.at(1, 0, 0) = 1.0;
    g.at(1, 0, 1) = 2.0;
    g.at(1, 1, 0) = 3.0;
    g.at(1, 1, 1) = 6.0;
    const auto w = importance_weights(g, "cat");
    CHECK(w.omega(0) == doctest::Approx(1.0));
    CHECK(w.omega(1) == doctest::Approx(3.0));
    CHECK(w.concept_id == "cat");

    Tensor3 z(1, 3, 3, 0.0);
    CHECK(importance_weights(z).omega(0) == 0.0);
}

TEST_CASE("importance pooling is linear in the gradients") {
    std::mt19937_64 eng(3);
    Tensor3 g1(3, 2, 4), g2(3, 2, 4);
    for (auto& v : g1.values) v = oracle::uniform(eng, -1.0, 1.0);
    for (auto& v : g2.values) v = oracle::uniform(eng, -1.0, 1.0);
    const double a = 0.7, b = -1.3;
    Tensor3 mix = g1;
    for (std::size_t n = 0; n < mix.values.size(); ++n) {
        mix.values[n] = a * g1.values[n] + b * g2.values[n];
    }
    const auto w1 = importance_weights(g1);
    const auto w2 = importance_weights(g2);
    const auto wm = importance_weights(mix);
    for (int k = 0; k < 3; ++k) {
        CHECK(wm.omega(k) == doctest::Approx(a * w1.omega(k) + b * w2.omega(k)));
    }
}

TEST_CASE("threshold selection follows the order statistics") {
    ImportanceWeights w;
    w.omega = (Eigen::VectorXd(4) << 0.9, 0.5, 0.3, 0.1).finished();
    CHECK(threshold_for_ratio(w, 0.5) == doctest::Approx(0.5));
    CHECK(threshold_for_ratio(w, 0.75) == doctest::Approx(0.9));
    // zero ratio keeps everything
    const double t0 = threshold_for_ratio(w, 0.0);
    CHECK(t0 <= w.omega.minCoeff());
    CHECK(achieved_ratio(w, t0) == 0.0);
    CHECK_THROWS_AS(threshold_for_ratio(w, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_for_ratio(w, -0.1), std::invalid_argument);
}

TEST_CASE("achieved ratio counts strictly-below weights") {
    ImportanceWeights w;
    w.omega = (Eigen::VectorXd(4) << 0.9, 0.5, 0.3, 0.1).finished();
    CHECK(achieved_ratio(w, 0.05) == 0.0);
    CHECK(achieved_ratio(w, 1.5) == 1.0);
    CHECK(achieved_ratio(w, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("threshold then achieved ratio gives the smallest feasible cut") {
    std::mt19937_64 eng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const int k = 1 + static_cast<int>(eng() % 12);
        ImportanceWeights w;
        w.omega.resize(k);
        for (int i = 0; i < k; ++i) {
            // duplicates exercised on purpose
            w.omega(i) = std::round(oracle::uniform(eng, 0.0, 4.0)) / 4.0;
        }
        // the largest requestable cut still keeps the top tie group
        std::vector<double> sorted(w.omega.data(), w.omega.data() + k);
        std::sort(sorted.begin(), sorted.end());
        const int top_ties = static_cast<int>(
            sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), sorted[k - 1]));
        const double max_cut = static_cast<double>(k - top_ties) / k;
        const double o = oracle::uniform(eng, 0.0, max_cut);
        const double t = threshold_for_ratio(w, o);
        const double achieved = achieved_ratio(w, t);
        CHECK(achieved >= o);
        // no feasible grid cut sits strictly between o and achieved
        for (int c = 0; c < k; ++c) {
            const double frac = achieved_ratio(w, sorted[c]);
            if (frac >= o) CHECK(frac >= achieved);
        }
    }
}

TEST_CASE("asc keeps maps at or above the threshold and zeros the rest") {
    Tensor3 f(2, 2, 2, 1.0);
    ImportanceWeights w;
    w.omega = (Eigen::VectorXd(2) << 0.9, 0.1).finished();
    const auto out = asc_compress(f, w, 0.5);
    CHECK(out.at(0, 1, 1) == 1.0);
    CHECK(out.at(1, 1, 1) == 0.0);
    // identity below the minimum, all-zero above the maximum
    const auto ident = asc_compress(f, w, 0.05);
    CHECK(ident.values == f.values);
    const auto none = asc_compress(f, w, 2.0);
    for (double v : none.values) CHECK(v == 0.0);
    // boundary weights are kept, matching the >= rule
    const auto edge = asc_compress(f, w, 0.9);
    CHECK(edge.at(0, 0, 0) == 1.0);

    ImportanceWeights bad;
    bad.omega = Eigen::VectorXd::Ones(3);
    CHECK_THROWS_AS(asc_compress(f, bad, 0.5), std::invalid_argument);
}

TEST_CASE("asc is idempotent") {
    std::mt19937_64 eng(29);
    Tensor3 f(5, 3, 2);
    for (auto& v : f.values) v = oracle::uniform(eng, -2.0, 2.0);
    ImportanceWeights w;
    w.omega.resize(5);
    for (int k = 0; k < 5; ++k) w.omega(k) = oracle::uniform(eng, 0.0, 1.0);
    const double t = threshold_for_ratio(w, 0.4);
    const auto once = asc_compress(f, w, t);
    const auto twice = asc_compress(once, w, t);
    CHECK(once.values == twice.values);
}

TEST_CASE("mutual information of canonical joints") {
    DiscreteJoint indep;
    indep.p = Eigen::MatrixXd::Constant(2, 3, 1.0 / 6.0);
    CHECK(mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-14));

    DiscreteJoint ident = bsc_joint(0.0);
    CHECK(mutual_information(ident) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK(mutual_information(bsc_joint(0.25)) ==
          doctest::Approx(0.130812035941137).epsilon(1e-9));

    DiscreteJoint bad;
    bad.p = Eigen::MatrixXd::Constant(2, 2, 0.3);
    CHECK_THROWS_AS(mutual_information(bad), std::invalid_argument);
}

TEST_CASE("upper bound expectations on canonical joints") {
    DiscreteJoint indep;
    indep.p = Eigen::MatrixXd::Constant(3, 3, 1.0 / 9.0);
    CHECK(mi_upper_bound(indep) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(mi_upper_bound(bsc_joint(0.25)) ==
          doctest::Approx(0.27465307216702745).epsilon(1e-9));
    CHECK(mi_gap(bsc_joint(0.25)) ==
          doctest::Approx(0.14384103622589045).epsilon(1e-9));

    // deterministic channel: the cross expectation hits ln 0
    CHECK(std::isinf(mi_upper_bound(bsc_joint(0.0))));
    CHECK(std::isinf(mi_gap(bsc_joint(0.0))));

    CHECK(mi_gap(indep) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("upper bound dominates mutual information on random joints") {
    std::mt19937_64 eng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        const int rows = 2 + static_cast<int>(eng() % 7);
        const int cols = 2 + static_cast<int>(eng() % 7);
        const auto j = oracle::random_joint(eng, rows, cols);
        const double mi = mutual_information(j);
        const double up = mi_upper_bound(j);
        CHECK(up >= mi - 1e-12);
        CHECK(mi >= 0.0);
        if (std::isfinite(up)) CHECK(mi_gap(j) >= -1e-12);
    }
}
