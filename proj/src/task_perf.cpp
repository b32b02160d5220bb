#include "semcom/task_perf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace semcom::taskperf {

namespace {

constexpr double kExpClamp = 300.0; // bound for the exponent parameters

void check_points(const PerfPointSet& points) {
    if (points.empty()) throw std::invalid_argument("point set must be non-empty");
    for (const auto& pt : points) {
        if (!(pt.o >= 0.0 && pt.o <= 1.0) || !std::isfinite(pt.eta_star)) {
            throw std::invalid_argument("perf points require o in [0,1] and finite eta*");
        }
    }
}

// Exact least squares for the amplitudes (z1, z3) at fixed exponents.
// Columns are normalized before the solve; exp(z2*o) spans many orders
// of magnitude for Table-scale exponents.
void project_amplitudes(TaskPerfModel& m, const PerfPointSet& points) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd basis(n, 2);
    Eigen::VectorXd target(n);
    for (int d = 0; d < n; ++d) {
        basis(d, 0) = std::exp(m.zeta[1] * points[d].o);
        basis(d, 1) = std::exp(m.zeta[3] * points[d].o);
        target(d) = points[d].eta_star;
    }
    Eigen::Vector2d scale;
    for (int c = 0; c < 2; ++c) {
        const double nrm = basis.col(c).norm();
        scale(c) = nrm > 0.0 ? nrm : 1.0;
        basis.col(c) /= scale(c);
    }
    Eigen::Vector2d sol = basis.colPivHouseholderQr().solve(target);
    m.zeta[0] = sol(0) / scale(0);
    m.zeta[2] = sol(1) / scale(1);
}

} // namespace

double TaskPerfModel::raw(double o) const {
    return zeta[0] * std::exp(zeta[1] * o) + zeta[2] * std::exp(zeta[3] * o);
}

double eta(const TaskPerfModel& model, double o) {
    if (!(o >= 0.0 && o <= 1.0)) {
        throw std::invalid_argument("eta requires o in [0, 1]");
    }
    return std::clamp(model.raw(o), 0.0, 1.0);
}

double fit_loss(const TaskPerfModel& model, const PerfPointSet& points) {
    check_points(points);
    double sum = 0.0;
    for (const auto& pt : points) {
        const double r = model.raw(pt.o) - pt.eta_star;
        sum += r * r;
    }
    return sum / (2.0 * static_cast<double>(points.size()));
}

std::array<double, 4> fit_loss_gradient(const TaskPerfModel& model,
                                        const PerfPointSet& points) {
    check_points(points);
    std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
    const double inv = 1.0 / static_cast<double>(points.size());
    for (const auto& pt : points) {
        const double e2 = std::exp(model.zeta[1] * pt.o);
        const double e4 = std::exp(model.zeta[3] * pt.o);
        const double r = model.zeta[0] * e2 + model.zeta[2] * e4 - pt.eta_star;
        g[0] += r * e2;
        g[1] += r * model.zeta[0] * pt.o * e2;
        g[2] += r * e4;
        g[3] += r * model.zeta[2] * pt.o * e4;
    }
    for (double& v : g) v *= inv;
    return g;
}

FitReport fit_perf_model(const PerfPointSet& points, const TaskPerfModel& init,
                         double step, double loss_threshold, int max_iters) {
    check_points(points);
    if (!(step > 0.0) || loss_threshold < 0.0 || max_iters < 1) {
        throw std::invalid_argument("fit requires step > 0, threshold >= 0, max_iters >= 1");
    }

    const double initial_loss = fit_loss(init, points);

    TaskPerfModel m = init;
    project_amplitudes(m, points);
    double loss = fit_loss(m, points);

    // The projected loss is a narrow valley in the exponent pair; a
    // coarse scan picks the basin before the descent refines it.
    for (double z2 = -60.0; z2 <= 60.0; z2 += 2.0) {
        for (double z4 : {-1.0, -0.5, -0.2, -0.1, -0.05, -0.02, 0.0, 0.02, 0.05}) {
            TaskPerfModel cand = m;
            cand.zeta[1] = z2;
            cand.zeta[3] = z4;
            project_amplitudes(cand, points);
            const double cand_loss = fit_loss(cand, points);
            if (cand_loss < loss) {
                m = cand;
                loss = cand_loss;
            }
        }
    }

    FitReport best;
    best.model = m;
    best.loss = loss;

    // Levenberg-Marquardt on the exponent pair with the amplitudes
    // re-projected at every trial point. `step` seeds the damping.
    const int n = static_cast<int>(points.size());
    double lambda = 1.0 / step;
    int it = 0;
    bool reached = loss <= loss_threshold;
    const int lm_budget = std::max(max_iters / 2, 1);
    for (; it < lm_budget && !reached; ++it) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (int d = 0; d < n; ++d) {
            const double o = points[d].o;
            const double r = m.raw(o) - points[d].eta_star;
            const Eigen::Vector2d jac(m.zeta[0] * o * std::exp(m.zeta[1] * o),
                                      m.zeta[2] * o * std::exp(m.zeta[3] * o));
            jtj += jac * jac.transpose();
            jtr += jac * r;
        }

        bool accepted = false;
        for (int damp = 0; damp < 40; ++damp) {
            Eigen::Matrix2d lhs = jtj;
            lhs(0, 0) += lambda * std::max(jtj(0, 0), 1e-12);
            lhs(1, 1) += lambda * std::max(jtj(1, 1), 1e-12);
            const Eigen::Vector2d delta = lhs.ldlt().solve(-jtr);
            TaskPerfModel cand = m;
            cand.zeta[1] = std::clamp(m.zeta[1] + delta(0), -kExpClamp, kExpClamp);
            cand.zeta[3] = std::clamp(m.zeta[3] + delta(1), -kExpClamp, kExpClamp);
            project_amplitudes(cand, points);
            const double cand_loss = fit_loss(cand, points);
            if (std::isfinite(cand_loss) && cand_loss <= loss) {
                const double drop = loss - cand_loss;
                m = cand;
                loss = cand_loss;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = drop > 1e-10 * (1.0 + loss);
                break;
            }
            lambda *= 4.0;
        }
        if (loss < best.loss) {
            best.model = m;
            best.loss = loss;
        }
        if (loss > 1e6 * std::max(initial_loss, 1e-30)) {
            best.iterations = it + 1;
            best.rmse = std::sqrt(2.0 * best.loss);
            throw FitDivergence("fit diverged: loss exceeded 1e6x the initial loss", best);
        }
        if (loss <= loss_threshold) {
            reached = true;
            break;
        }
        if (!accepted) break; // stalled at this basin's floor
    }

    // Pattern-search polish: the Jacobian model above holds the
    // amplitudes fixed and underestimates curvature along the cliff
    // exponent, so finish with coordinate probes on (z2, z4).
    double step2 = 1.0, step4 = 0.02;
    while (it < max_iters && !reached && (step2 > 1e-11 || step4 > 1e-13)) {
        ++it;
        bool improved = false;
        for (int coord : {1, 3}) {
            const double h = coord == 1 ? step2 : step4;
            for (double dir : {1.0, -1.0}) {
                TaskPerfModel cand = m;
                cand.zeta[coord] =
                    std::clamp(m.zeta[coord] + dir * h, -kExpClamp, kExpClamp);
                project_amplitudes(cand, points);
                const double cand_loss = fit_loss(cand, points);
                if (cand_loss < loss) {
                    m = cand;
                    loss = cand_loss;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step2 *= 0.5;
            step4 *= 0.5;
        }
        if (loss <= loss_threshold) reached = true;
    }
    if (loss < best.loss) {
        best.model = m;
        best.loss = loss;
    }

    FitReport rep;
    rep.model = best.model;
    rep.loss = best.loss;
    rep.rmse = std::sqrt(2.0 * best.loss);
    rep.iterations = it;
    rep.reached_threshold = reached;
    return rep;
}

FitReport fit_perf_model(const PerfPointSet& points) {
    check_points(points);
    double peak = 0.0;
    for (const auto& pt : points) peak = std::max(peak, pt.eta_star);
    TaskPerfModel init;
    init.zeta = {-1e-12, 30.0, peak, -0.05};
    return fit_perf_model(points, init, 0.05, 1e-10, 20000);
}

const std::vector<ModelFixture>& model_fixtures() {
    static const std::vector<ModelFixture> table = {
        {"vgg-5db", {{-9.503e-17, 36.77, 0.9044, -0.01869}}, 0.0449},
        {"vgg0db", {{-2.202e-16, 35.94, 0.9137, -0.02349}}, 0.0488},
        {"vgg5db", {{-2.76e-18, 40.33, 0.9205, -0.02257}}, 0.0510},
        {"resnet-5db", {{-6.205e-08, 16.45, 0.9228, -0.06917}}, 0.0272},
        {"resnet0db", {{-2.893e-16, 35.68, 0.9482, -0.04151}}, 0.0282},
        {"resnet5db", {{-8.875e-16, 34.54, 0.9458, 0.007934}}, 0.0491},
    };
    return table;
}

const ModelFixture& model_fixture(const std::string& name) {
    for (const auto& f : model_fixtures()) {
        if (f.name == name) return f;
    }
    throw std::invalid_argument("unknown model fixture: " + name);
}

} // namespace semcom::taskperf
