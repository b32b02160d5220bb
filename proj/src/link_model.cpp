#include "semcom/link_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace semcom::link {

namespace {

constexpr double kLn2 = 0.6931471805599453;
// 2^x stays finite below this; above it the chain is evaluated in logs.
constexpr double kExpBits = 700.0;
constexpr double kProbFloor = 1e-300;

void check_params(const LinkParams& p) {
    if (!(p.a > 0.0) || !(p.b > 0.0) || !(p.delta > 0.0) ||
        !std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.delta)) {
        throw std::invalid_argument("link params require a > 0, b > 0, delta > 0");
    }
}

void check_ratio(double o) {
    if (!(o > 0.0) || !(o <= 1.0)) {
        throw std::invalid_argument("compression ratio must be in (0, 1]");
    }
}

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Box-Muller over a dedicated engine; no stdlib distribution so the
// stream is identical across library implementations.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

constexpr int kMcChunks = 256;

std::uint64_t chunk_hits(const LinkParams& p, double threshold,
                         std::uint64_t n, std::uint64_t seed, int chunk) {
    (void)p;
    NormalSampler normal(splitmix64(seed ^ (0x51ed270b0a1563d5ULL * (chunk + 1))));
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (std::fabs(normal()) >= threshold) ++hits;
    }
    return hits;
}

double monte_carlo_impl(const LinkParams& p, double ratio, std::uint64_t trials,
                        std::uint64_t seed, bool parallel) {
    check_params(p);
    check_ratio(ratio);
    if (trials == 0) throw std::invalid_argument("monte carlo requires trials >= 1");

    // success  <=>  delay <= t0  <=>  |h|/delta >= outage argument
    const double threshold = outage_argument(p, ratio);
    std::uint64_t counts[kMcChunks];
    const std::uint64_t base = trials / kMcChunks;
    const std::uint64_t rem = trials % kMcChunks;

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int c = 0; c < kMcChunks; ++c) {
            const std::uint64_t n = base + (static_cast<std::uint64_t>(c) < rem ? 1 : 0);
            counts[c] = chunk_hits(p, threshold, n, seed, c);
        }
    } else {
        for (int c = 0; c < kMcChunks; ++c) {
            const std::uint64_t n = base + (static_cast<std::uint64_t>(c) < rem ? 1 : 0);
            counts[c] = chunk_hits(p, threshold, n, seed, c);
        }
    }

    std::uint64_t hits = 0;
    for (int c = 0; c < kMcChunks; ++c) hits += counts[c];
    return static_cast<double>(hits) / static_cast<double>(trials);
}

} // namespace

double transmission_rate(double bandwidth_hz, double power_w, double gain, double n0) {
    if (!std::isfinite(bandwidth_hz) || !std::isfinite(n0) ||
        bandwidth_hz <= 0.0 || n0 <= 0.0) {
        throw std::invalid_argument("transmission_rate requires finite B > 0 and N0 > 0");
    }
    if (power_w < 0.0 || gain < 0.0) {
        throw std::invalid_argument("transmission_rate requires P >= 0 and gain >= 0");
    }
    const double snr = gain * power_w / (n0 * bandwidth_hz);
    return bandwidth_hz * std::log2(1.0 + snr);
}

double transmission_delay(double data_bits, double rate_bps) {
    if (data_bits < 0.0 || rate_bps < 0.0) {
        throw std::invalid_argument("transmission_delay requires d >= 0 and R >= 0");
    }
    if (rate_bps == 0.0) {
        return data_bits == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return data_bits / rate_bps;
}

double q_exact(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("q_exact requires finite x");
    return 0.5 * std::erfc(x / M_SQRT2);
}

double q_approx(double x) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("q_approx is a tail approximation, x >= 0 required");
    }
    return 0.5 * std::exp(-0.5 * x * x);
}

double outage_argument(const LinkParams& p, double ratio) {
    check_params(p);
    check_ratio(ratio);
    const double bits = p.a * (1.0 - ratio);
    const double scale = p.b * p.delta;
    if (bits <= kExpBits) {
        return (std::exp2(bits) - 1.0) / scale;
    }
    // 2^bits - 1 ~ 2^bits up to relative 2^-700 here
    const double log_arg = bits * kLn2 - std::log(scale);
    if (log_arg >= 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_arg);
}

double success_prob(const LinkParams& p, double ratio) {
    const double x = outage_argument(p, ratio);
    if (std::isinf(x)) return 0.0;
    double prob = std::erfc(x / M_SQRT2); // = 2 Q(x)
    if (prob < kProbFloor) return 0.0;
    if (prob > 1.0) prob = 1.0;
    return prob;
}

double g_term(const LinkParams& p, double ratio) {
    const double x = outage_argument(p, ratio);
    if (std::isinf(x)) return 0.0;
    const double g = std::exp(-0.5 * x * x);
    if (g < kProbFloor) return 0.0;
    return g;
}

double monte_carlo_success(const LinkParams& p, double ratio,
                           std::uint64_t trials, std::uint64_t seed) {
    return monte_carlo_impl(p, ratio, trials, seed, true);
}

double monte_carlo_success_serial(const LinkParams& p, double ratio,
                                  std::uint64_t trials, std::uint64_t seed) {
    return monte_carlo_impl(p, ratio, trials, seed, false);
}

} // namespace semcom::link
