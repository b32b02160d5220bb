#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "semcom/link_model.hpp"

using namespace semcom;

TEST_CASE("transmission rate matches the Shannon form") {
    CHECK(link::transmission_rate(1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(link::transmission_rate(5.0, 0.0, 1.0, 1.0) == 0.0);
    CHECK(link::transmission_rate(5.0, 3.0, 0.0, 1.0) == 0.0);
    // 2e7 Hz at snr 1023 -> 2e7 * log2(1024)
    CHECK(link::transmission_rate(2e7, 1023.0 * 2e7, 1.0, 1.0) ==
          doctest::Approx(2e8).epsilon(1e-12));
    CHECK_THROWS_AS(link::transmission_rate(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(link::transmission_rate(1.0, 1.0, 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("transmission delay handles the zero-rate sentinel") {
    CHECK(link::transmission_delay(100.0, 50.0) == doctest::Approx(2.0));
    CHECK(link::transmission_delay(0.0, 123.0) == 0.0);
    CHECK(link::transmission_delay(0.0, 0.0) == 0.0);
    CHECK(std::isinf(link::transmission_delay(1.0, 0.0)));
    // 24.5 MB at 8e6 bits/MB over 2e8 bits/s
    CHECK(link::transmission_delay(1.96e8, 2e8) == doctest::Approx(0.98));
}

TEST_CASE("q_exact agrees with the quadrature oracle") {
    CHECK(link::q_exact(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(link::q_exact(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    CHECK(link::q_exact(-1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
    for (double x : {0.0, 0.3, 1.0, 2.2, 3.0, 4.5}) {
        CHECK(link::q_exact(x) == doctest::Approx(oracle::normal_tail(x)).epsilon(1e-10));
    }
    CHECK(link::q_exact(2.0) + link::q_exact(-2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("q_approx evaluates the exponential tail bound") {
    CHECK(link::q_approx(0.0) == 0.5);
    CHECK(link::q_approx(1.0) == doctest::Approx(0.3032653298563167).epsilon(1e-14));
    CHECK(link::q_approx(3.0) == doctest::Approx(0.005554498269121153).epsilon(1e-14));
    CHECK_THROWS_AS(link::q_approx(-0.5), std::invalid_argument);
}

TEST_CASE("q_approx dominates q_exact on the nonnegative axis") {
    for (int k = 0; k <= 350; ++k) {
        const double x = 0.1 * k;
        const double qa = link::q_approx(x);
        const double qe = link::q_exact(x);
        CHECK(qa >= qe);
        CHECK(qa <= 0.5);
        CHECK(qe > 0.0);
    }
}

TEST_CASE("success probability reproduces the closed form") {
    link::LinkParams p{2.0, 1.0, 1.0};
    CHECK(link::success_prob(p, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(link::success_prob(p, 0.5) ==
          doctest::Approx(0.31731050786291415).epsilon(1e-12));
    // exponent 1960 bits forces the log-domain clamp
    CHECK(link::success_prob({9800.0, 1e6, 1.0}, 0.8) == 0.0);
    CHECK_THROWS_AS(link::success_prob(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(link::success_prob(p, 1.5), std::invalid_argument);
}

TEST_CASE("g_term is the smooth surrogate of the success probability") {
    link::LinkParams p{2.0, 1.0, 1.0};
    CHECK(link::g_term(p, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(link::g_term(p, 0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(link::g_term(p, 0.9) == doctest::Approx(0.9890052881674805).epsilon(1e-12));
    CHECK(link::g_term({9800.0, 1e6, 1.0}, 0.8) == 0.0);
    // surrogate sits above the exact probability wherever both are positive
    for (double o : {0.2, 0.5, 0.8, 0.95}) {
        CHECK(link::g_term(p, o) >= link::success_prob(p, o));
    }
}

TEST_CASE("success probability is monotone in each parameter") {
    const double tol = 1e-12;
    for (double o = 0.1; o < 0.95; o += 0.1) {
        CHECK(link::success_prob({2.0, 1.0, 1.0}, o + 0.05) + tol >=
              link::success_prob({2.0, 1.0, 1.0}, o));
    }
    for (double b = 0.5; b < 4.0; b += 0.25) {
        CHECK(link::success_prob({2.0, b + 0.25, 1.0}, 0.5) + tol >=
              link::success_prob({2.0, b, 1.0}, 0.5));
    }
    for (double d = 0.5; d < 4.0; d += 0.25) {
        CHECK(link::success_prob({2.0, 1.0, d + 0.25}, 0.5) + tol >=
              link::success_prob({2.0, 1.0, d}, 0.5));
    }
    for (double a = 1.0; a < 8.0; a += 0.5) {
        CHECK(link::success_prob({a + 0.5, 1.0, 1.0}, 0.5) <=
              link::success_prob({a, 1.0, 1.0}, 0.5) + tol);
    }
}

TEST_CASE("monte carlo matches the closed form within 3 sigma") {
    std::mt19937_64 eng(7);
    int checked = 0;
    while (checked < 6) {
        link::LinkParams p{oracle::uniform(eng, 0.5, 5.0), oracle::uniform(eng, 0.3, 3.0),
                           oracle::uniform(eng, 0.5, 2.0)};
        const double o = oracle::uniform(eng, 0.1, 0.9);
        const double exact = link::success_prob(p, o);
        if (exact < 0.01 || exact > 0.99) continue;
        const std::uint64_t trials = 200000;
        const double est = link::monte_carlo_success(p, o, trials, 42 + checked);
        const double se = std::sqrt(exact * (1.0 - exact) / trials);
        CHECK(std::fabs(est - exact) <= 3.0 * se);
        ++checked;
    }
}

TEST_CASE("monte carlo edge cases") {
    link::LinkParams p{2.0, 1.0, 1.0};
    CHECK(link::monte_carlo_success(p, 1.0, 1000, 3) == 1.0);
    CHECK(link::monte_carlo_success({2.0, 1.0, 1e-9}, 0.5, 1000, 3) == 0.0);
    CHECK_THROWS_AS(link::monte_carlo_success(p, 0.5, 0, 3), std::invalid_argument);
}

TEST_CASE("parallel and serial monte carlo agree bitwise") {
    link::LinkParams p{2.0, 1.0, 1.0};
    for (std::uint64_t trials : {1ull, 100ull, 4097ull, 100000ull}) {
        const double a = link::monte_carlo_success(p, 0.5, trials, 11);
        const double b = link::monte_carlo_success_serial(p, 0.5, trials, 11);
        CHECK(a == b);
    }
    // same seed, same answer; different seed, usually different
    CHECK(link::monte_carlo_success(p, 0.5, 50000, 5) ==
          link::monte_carlo_success(p, 0.5, 50000, 5));
}

TEST_CASE("two-sided tail identity used in the outage proof") {
    // 2 q_exact(t) equals P(|h| >= t*delta) for h ~ N(0, delta^2)
    std::mt19937_64 eng(19);
    for (int rep = 0; rep < 3; ++rep) {
        const double t = oracle::uniform(eng, 0.2, 2.0);
        const double delta = oracle::uniform(eng, 0.5, 2.0);
        // via the scale-free monte carlo: threshold t equals argument
        link::LinkParams p{4.0, 1.0, delta};
        // choose o so that the outage argument equals t: 2^{a(1-o)}-1 = t*b*delta
        const double o = 1.0 - std::log2(1.0 + t * delta) / p.a;
        const double emp = link::monte_carlo_success(p, o, 400000, 77 + rep);
        const double closed = 2.0 * link::q_exact(t);
        CHECK(std::fabs(emp - closed) <=
              3.0 * std::sqrt(closed * (1.0 - closed) / 400000.0) + 1e-12);
    }
}
