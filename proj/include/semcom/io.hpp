#pragma once

#include <string>

#include "semcom/scenario.hpp"
#include "semcom/semantics.hpp"
#include "semcom/task_perf.hpp"

namespace semcom::io {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Two-column point set with header `o,eta`.
taskperf::PerfPointSet load_point_set_csv(const std::string& path);
void save_point_set_csv(const taskperf::PerfPointSet& points, const std::string& path);

// Model record carrying the four zeta fields and the fit RMSE.
void save_model_json(const taskperf::FitReport& fit, const std::string& path);
taskperf::FitReport load_model_json(const std::string& path);

// Importance weights as `k,omega` rows; the shared knowledge-base file.
void save_weights_csv(const semantics::ImportanceWeights& w, const std::string& path);
semantics::ImportanceWeights load_weights_csv(const std::string& path);

// Tensors as a 3-integer shape header followed by values; `.bin` holds
// little-endian int64/double, anything else is treated as CSV.
void save_tensor(const semantics::Tensor3& t, const std::string& path);
semantics::Tensor3 load_tensor(const std::string& path);

// Scenario files in JSON syntax with unit-bearing field names.
Scenario load_scenario_json(const std::string& path);
void save_scenario_json(const Scenario& s, const std::string& path);

} // namespace semcom::io
