#include "semcom/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "semcom/io.hpp"

namespace semcom::harness {

namespace {

Scenario paper_preset() {
    // Table-style constants: d0 = 24.5 MB at 8e6 bits/MB, t0 = 10 ms,
    // N0 = -174 dBm/Hz, B in [0.01, 20] MHz, P in [-20 dBm, 1 W],
    // 10 users over four service levels. The per-user channel spread is
    // not published; it defaults to 1 and is flag-overridable.
    const int users = 10;
    Scenario s = Scenario::physical(
        users,
        24.5 * 8e6,
        10e-3,
        std::pow(10.0, -17.4) * 1e-3,
        0.01e6,
        20e6,
        1e-5,
        1.0,
        Eigen::VectorXd::Ones(users),
        (Eigen::VectorXd(4) << 0.2, 0.4, 0.6, 0.8).finished(),
        round_robin_assignment(users, 4));
    s.id = "paper";
    return s;
}

Scenario desk_preset() {
    // Normalized-mode small parameters: tight enough that the optimal
    // ratio is interior and the algorithms separate.
    const int users = 4;
    Scenario s = Scenario::normalized(
        Eigen::VectorXd::Constant(users, 20.0),
        Eigen::VectorXd::Constant(users, 100.0),
        Eigen::VectorXd::Ones(users),
        (Eigen::VectorXd(4) << 0.2, 0.4, 0.6, 0.8).finished(),
        round_robin_assignment(users, 4),
        0.05, static_cast<double>(users), 5.0, 100.0 * users);
    s.id = "desk";
    return s;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace

Scenario load_scenario(const std::string& path_or_preset) {
    if (path_or_preset == "paper") return paper_preset();
    if (path_or_preset == "desk") return desk_preset();
    return io::load_scenario_json(path_or_preset);
}

taskperf::TaskPerfModel load_model(const std::string& name_or_path) {
    for (const auto& f : taskperf::model_fixtures()) {
        if (f.name == name_or_path) return f.model;
    }
    return io::load_model_json(name_or_path).model;
}

Scenario with_users(const Scenario& base, int users) {
    if (users < 1) throw std::invalid_argument("user count must be >= 1");
    Scenario s = base;
    s.users = users;
    s.d0_bits.resize(users);
    s.delta.resize(users);
    for (int i = 0; i < users; ++i) {
        s.d0_bits(i) = base.d0_bits(i % base.users);
        s.delta(i) = base.delta(i % base.users);
    }
    if (base.norm_a.size() == base.users) {
        s.norm_a.resize(users);
        s.norm_b.resize(users);
        s.norm_delta.resize(users);
        for (int i = 0; i < users; ++i) {
            s.norm_a(i) = base.norm_a(i % base.users);
            s.norm_b(i) = base.norm_b(i % base.users);
            s.norm_delta(i) = base.norm_delta(i % base.users);
        }
    }
    s.assignment = round_robin_assignment(users, static_cast<int>(base.level_weights.size()));
    return s;
}

plan::Solution solve_one(const Scenario& s, const std::string& algo,
                         const taskperf::TaskPerfModel& model, double tol,
                         int max_rounds, double fixed_ratio) {
    if (algo == "crra") return plan::crra(s, model, tol, max_rounds);
    if (algo == "crraus") return plan::crraus(s, model, tol, max_rounds);
    if (algo == "fcr") return plan::baseline_fcr(s, model, fixed_ratio);
    if (algo == "fra") return plan::baseline_fra(s, model);
    if (algo == "msr") return plan::baseline_msr(s, model);
    throw std::invalid_argument("unknown algorithm: " + algo);
}

std::vector<ResultRow> run(const RunConfig& config) {
    Scenario base = load_scenario(config.scenario);
    if (config.override_t0 > 0.0) base.t0_s = config.override_t0;
    if (config.override_bmax > 0.0) base.b_max_hz = config.override_bmax;
    if (config.override_pmax > 0.0) base.p_max_w = config.override_pmax;
    if (config.override_delta > 0.0) base.delta.setConstant(config.override_delta);
    if (config.override_users > 0) base = with_users(base, config.override_users);
    base.require_valid();

    const taskperf::TaskPerfModel model = load_model(config.model);

    std::vector<double> axis_values;
    if (config.axis.empty()) {
        axis_values.push_back(0.0);
    } else {
        if (!(config.step > 0.0) || config.hi < config.lo) {
            throw std::invalid_argument("sweep range must satisfy lo <= hi with step > 0");
        }
        for (double v = config.lo; v <= config.hi + 1e-12 * std::fabs(config.hi);
             v += config.step) {
            axis_values.push_back(v);
        }
        if (config.axis == "ratio" && config.algo != "fcr") {
            throw std::invalid_argument("axis 'ratio' sweeps the fixed ratio of fcr");
        }
    }

    std::vector<ResultRow> rows(axis_values.size());
    for (std::size_t k = 0; k < axis_values.size(); ++k) {
        ResultRow& row = rows[k];
        row.scenario_id = base.id;
        row.algo = config.algo;
        row.axis = config.axis.empty() ? "none" : config.axis;
        row.axis_value = axis_values[k];
        const auto started = std::chrono::steady_clock::now();
        try {
            Scenario s = base;
            double ratio = 0.8;
            if (config.axis == "bmax") {
                s.b_max_hz = axis_values[k];
            } else if (config.axis == "pmax") {
                s.p_max_w = axis_values[k];
            } else if (config.axis == "users") {
                s = with_users(base, static_cast<int>(std::lround(axis_values[k])));
            } else if (config.axis == "ratio") {
                ratio = axis_values[k];
            }
            s.require_valid();
            const plan::Solution sol =
                solve_one(s, config.algo, model, config.tol, config.max_rounds, ratio);
            row.phi_exact = sol.phi_exact;
            row.phi_surrogate = sol.phi_surrogate;
            row.rounds = sol.rounds;
            row.o = sol.o;
            row.B = sol.B;
            row.P = sol.P;
            row.beta = sol.beta;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        if (config.timing) {
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - started)
                              .count();
        }
    }
    return rows;
}

std::string render_csv(const std::vector<ResultRow>& rows) {
    int max_users = 0;
    for (const auto& r : rows) {
        max_users = std::max(max_users, static_cast<int>(r.o.size()));
    }
    std::ostringstream out;
    out << "scenario,algo,axis,axis_value,phi_exact,phi_surrogate,rounds,wall_ms";
    for (const char* name : {"o", "B", "P", "beta"}) {
        for (int i = 0; i < max_users; ++i) out << ',' << name << '_' << i;
    }
    out << ",error\n";
    for (const auto& r : rows) {
        out << csv_quote(r.scenario_id) << ',' << csv_quote(r.algo) << ','
            << csv_quote(r.axis) << ',' << io::format_double(r.axis_value) << ','
            << io::format_double(r.phi_exact) << ','
            << io::format_double(r.phi_surrogate) << ',' << r.rounds << ','
            << io::format_double(r.wall_ms);
        const int n = static_cast<int>(r.o.size());
        for (int i = 0; i < max_users; ++i) {
            out << ',';
            if (i < n) out << io::format_double(r.o(i));
        }
        for (int i = 0; i < max_users; ++i) {
            out << ',';
            if (i < n) out << io::format_double(r.B(i));
        }
        for (int i = 0; i < max_users; ++i) {
            out << ',';
            if (i < n) out << io::format_double(r.P(i));
        }
        for (int i = 0; i < max_users; ++i) {
            out << ',';
            if (i < n) out << r.beta(i);
        }
        out << ',' << csv_quote(r.error) << '\n';
    }
    return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << render_csv(rows);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> parse_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty results file: " + path);
    const auto header = split_line(line);
    int users = 0;
    for (const auto& h : header) {
        if (h.rfind("o_", 0) == 0) ++users;
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_line(line);
        if (f.size() != header.size()) {
            throw std::runtime_error("ragged results row in " + path);
        }
        ResultRow r;
        r.scenario_id = f[0];
        r.algo = f[1];
        r.axis = f[2];
        r.axis_value = std::stod(f[3]);
        r.phi_exact = std::stod(f[4]);
        r.phi_surrogate = std::stod(f[5]);
        r.rounds = std::stoi(f[6]);
        r.wall_ms = std::stod(f[7]);
        std::vector<double> o, B, P;
        std::vector<int> beta;
        for (int i = 0; i < users; ++i) {
            const std::string& v = f[8 + i];
            if (!v.empty()) o.push_back(std::stod(v));
        }
        for (int i = 0; i < users; ++i) {
            const std::string& v = f[8 + users + i];
            if (!v.empty()) B.push_back(std::stod(v));
        }
        for (int i = 0; i < users; ++i) {
            const std::string& v = f[8 + 2 * users + i];
            if (!v.empty()) P.push_back(std::stod(v));
        }
        for (int i = 0; i < users; ++i) {
            const std::string& v = f[8 + 3 * users + i];
            if (!v.empty()) beta.push_back(std::stoi(v));
        }
        r.o = Eigen::Map<Eigen::VectorXd>(o.data(), o.size());
        r.B = Eigen::Map<Eigen::VectorXd>(B.data(), B.size());
        r.P = Eigen::Map<Eigen::VectorXd>(P.data(), P.size());
        r.beta = Eigen::Map<Eigen::VectorXi>(beta.data(), beta.size());
        r.error = f.back();
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string Lemma1Report::lines() const {
    std::ostringstream out;
    out << "lemma1 check: a=" << io::format_double(params.a)
        << " b=" << io::format_double(params.b)
        << " delta=" << io::format_double(params.delta)
        << " o=" << io::format_double(ratio) << " trials=" << trials << '\n';
    out << "  closed_form   = " << io::format_double(closed_form) << '\n';
    out << "  monte_carlo   = " << io::format_double(estimate) << '\n';
    out << "  binomial_se   = " << io::format_double(std_error) << '\n';
    out << "  verdict       = " << (pass ? "pass" : "FAIL") << " (3 sigma)\n";
    return out.str();
}

Lemma1Report verify_lemma1(const link::LinkParams& params, double ratio,
                           std::uint64_t trials, std::uint64_t seed) {
    if (trials < 10000) {
        throw std::invalid_argument("verification needs at least 1e4 trials");
    }
    Lemma1Report rep;
    rep.params = params;
    rep.ratio = ratio;
    rep.trials = trials;
    rep.closed_form = link::success_prob(params, ratio);
    rep.estimate = link::monte_carlo_success(params, ratio, trials, seed);
    rep.std_error = std::sqrt(rep.closed_form * (1.0 - rep.closed_form) /
                              static_cast<double>(trials));
    rep.pass = std::fabs(rep.estimate - rep.closed_form) <=
               3.0 * rep.std_error + 1e-12;
    return rep;
}

} // namespace semcom::harness
