#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace semcom::taskperf {

// eta(o) = z1*exp(z2*o) + z3*exp(z4*o): probability the task succeeds
// given a successful transmission at compression ratio o.
struct TaskPerfModel {
    std::array<double, 4> zeta{0.0, 0.0, 0.0, 0.0};

    // Raw two-exponential value, used inside the fit loss.
    double raw(double o) const;
};

struct PerfPoint {
    double o = 0.0;
    double eta_star = 0.0;
};

using PerfPointSet = std::vector<PerfPoint>;

// Clamped evaluation; o must lie in [0, 1].
double eta(const TaskPerfModel& model, double o);

// (1/2D) * sum_d (eta(o_d) - eta*_d)^2 on the unclamped model.
double fit_loss(const TaskPerfModel& model, const PerfPointSet& points);

// Analytic gradient of fit_loss with respect to the four parameters.
std::array<double, 4> fit_loss_gradient(const TaskPerfModel& model,
                                        const PerfPointSet& points);

struct FitReport {
    TaskPerfModel model;
    double loss = 0.0;
    double rmse = 0.0;
    int iterations = 0;
    bool reached_threshold = false;
};

struct FitDivergence : std::runtime_error {
    FitDivergence(const std::string& what, FitReport best_so_far)
        : std::runtime_error(what), best(std::move(best_so_far)) {}
    FitReport best;
};

// Descent on fit_loss until loss <= loss_threshold or max_iters. The two
// amplitudes are solved exactly by linear least squares each iteration
// and the exponents follow the analytic gradient with per-coordinate
// step scaling; the returned loss never exceeds the initial loss.
FitReport fit_perf_model(const PerfPointSet& points, const TaskPerfModel& init,
                         double step, double loss_threshold, int max_iters);

// Default init (-1e-12, 30, max eta*, -0.05) and default controls.
FitReport fit_perf_model(const PerfPointSet& points);

// Named Table-style parameter sets, keyed vgg-5db, vgg0db, vgg5db,
// resnet-5db, resnet0db, resnet5db.
struct ModelFixture {
    std::string name;
    TaskPerfModel model;
    double rmse = 0.0;
};

const std::vector<ModelFixture>& model_fixtures();
const ModelFixture& model_fixture(const std::string& name);

} // namespace semcom::taskperf
