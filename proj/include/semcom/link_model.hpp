#pragma once

#include <cstdint>

namespace semcom::link {

// Dimensionless description of one uplink. With bandwidth B, power P,
// deadline t0, payload-before-compression d0 and noise density N0:
//   a = d0 / (B * t0)   (bits per channel use the deadline demands)
//   b = P / (N0 * B)    (transmit SNR factor)
//   delta               (std dev of the Gaussian channel gain)
struct LinkParams {
    double a = 0.0;
    double b = 0.0;
    double delta = 1.0;
};

// Shannon rate B*log2(1 + h*P/(N0*B)) in bits/s. h is the gain magnitude.
double transmission_rate(double bandwidth_hz, double power_w, double gain, double n0);

// d/R seconds; zero payload takes zero time even on a dead link.
double transmission_delay(double data_bits, double rate_bps);

// Standard normal tail probability Q(x).
double q_exact(double x);

// Tail approximation Q(x) ~ (1/2) exp(-x^2/2), valid for x >= 0.
double q_approx(double x);

// Argument of the Q-function in the outage expression,
// (2^{a(1-o)} - 1) / (b*delta). Exponents beyond the representable range
// collapse to +inf, which downstream code maps to probability 0.
double outage_argument(const LinkParams& p, double ratio);

// Probability that the payload d0*(1-o) arrives within the deadline,
// 2*Q(outage_argument). Clamped to [0,1]; values below 1e-300 become 0.
double success_prob(const LinkParams& p, double ratio);

// Smooth surrogate exp(-outage_argument^2/2) = 2*q_approx(argument).
// This is the g factor every optimizer works with.
double g_term(const LinkParams& p, double ratio);

// Empirical success fraction over `trials` draws h ~ N(0, delta^2),
// counting delay(d0*(1-o), rate(|h|)) <= t0. Deterministic for a fixed
// seed regardless of thread count: trials are split into fixed chunks,
// each with its own seed stream, and the per-chunk counts are summed.
double monte_carlo_success(const LinkParams& p, double ratio,
                           std::uint64_t trials, std::uint64_t seed);

// Same chunked computation without OpenMP, kept as the reference path.
double monte_carlo_success_serial(const LinkParams& p, double ratio,
                                  std::uint64_t trials, std::uint64_t seed);

} // namespace semcom::link
