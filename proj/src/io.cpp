#include "semcom/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semcom::io {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

json load_json(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("cannot parse " + path + ": " + e.what());
    }
    return j;
}

Eigen::VectorXd vector_field(const json& j, const std::string& key, int users) {
    const auto& field = j.at(key);
    Eigen::VectorXd out(users);
    if (field.is_number()) {
        out.setConstant(field.get<double>());
    } else {
        if (static_cast<int>(field.size()) != users) {
            throw std::runtime_error("field '" + key + "' must have one entry per user");
        }
        for (int i = 0; i < users; ++i) out(i) = field[i].get<double>();
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
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

double parse_double(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad number '" + text + "' in " + where);
    }
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

taskperf::PerfPointSet load_point_set_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty point set: " + path);
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "o" || header[1] != "eta") {
        throw std::runtime_error("point set header must be 'o,eta': " + path);
    }
    taskperf::PerfPointSet points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw std::runtime_error("bad point row in " + path);
        points.push_back({parse_double(fields[0], path), parse_double(fields[1], path)});
    }
    return points;
}

void save_point_set_csv(const taskperf::PerfPointSet& points, const std::string& path) {
    auto out = open_out(path);
    out << "o,eta\n";
    for (const auto& pt : points) {
        out << format_double(pt.o) << ',' << format_double(pt.eta_star) << '\n';
    }
}

void save_model_json(const taskperf::FitReport& fit, const std::string& path) {
    json j;
    j["zeta"] = {fit.model.zeta[0], fit.model.zeta[1], fit.model.zeta[2],
                 fit.model.zeta[3]};
    j["rmse"] = fit.rmse;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

taskperf::FitReport load_model_json(const std::string& path) {
    const json j = load_json(path);
    taskperf::FitReport fit;
    const auto& z = j.at("zeta");
    if (z.size() != 4) throw std::runtime_error("model file needs 4 zeta values: " + path);
    for (int k = 0; k < 4; ++k) fit.model.zeta[k] = z[k].get<double>();
    fit.rmse = j.value("rmse", 0.0);
    fit.loss = 0.5 * fit.rmse * fit.rmse;
    return fit;
}

void save_weights_csv(const semantics::ImportanceWeights& w, const std::string& path) {
    auto out = open_out(path);
    out << "k,omega\n";
    for (Eigen::Index k = 0; k < w.omega.size(); ++k) {
        out << k << ',' << format_double(w.omega(k)) << '\n';
    }
}

semantics::ImportanceWeights load_weights_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty weights file: " + path);
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "k" || header[1] != "omega") {
        throw std::runtime_error("weights header must be 'k,omega': " + path);
    }
    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw std::runtime_error("bad weights row in " + path);
        vals.push_back(parse_double(fields[1], path));
    }
    semantics::ImportanceWeights w;
    w.omega = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
    return w;
}

void save_tensor(const semantics::Tensor3& t, const std::string& path) {
    const bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
    if (binary) {
        auto out = open_out(path, true);
        const std::int64_t shape[3] = {t.maps, t.width, t.height};
        out.write(reinterpret_cast<const char*>(shape), sizeof(shape));
        out.write(reinterpret_cast<const char*>(t.values.data()),
                  static_cast<std::streamsize>(t.values.size() * sizeof(double)));
        return;
    }
    auto out = open_out(path);
    out << t.maps << ',' << t.width << ',' << t.height << '\n';
    for (int k = 0; k < t.maps; ++k) {
        for (int i = 0; i < t.width; ++i) {
            for (int j = 0; j < t.height; ++j) {
                out << format_double(t.at(k, i, j));
                out << (j + 1 == t.height ? '\n' : ',');
            }
        }
    }
}

semantics::Tensor3 load_tensor(const std::string& path) {
    const bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
    if (binary) {
        auto in = open_in(path, true);
        std::int64_t shape[3];
        in.read(reinterpret_cast<char*>(shape), sizeof(shape));
        if (!in) throw std::runtime_error("truncated tensor header: " + path);
        semantics::Tensor3 t(static_cast<int>(shape[0]), static_cast<int>(shape[1]),
                             static_cast<int>(shape[2]));
        in.read(reinterpret_cast<char*>(t.values.data()),
                static_cast<std::streamsize>(t.values.size() * sizeof(double)));
        if (!in) throw std::runtime_error("truncated tensor payload: " + path);
        return t;
    }
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty tensor file: " + path);
    auto header = split_csv_line(line);
    if (header.size() != 3) {
        throw std::runtime_error("tensor header must be 'K,W,H': " + path);
    }
    semantics::Tensor3 t(static_cast<int>(parse_double(header[0], path)),
                         static_cast<int>(parse_double(header[1], path)),
                         static_cast<int>(parse_double(header[2], path)));
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (const auto& field : split_csv_line(line)) {
            if (field.empty()) continue;
            if (n >= t.values.size()) {
                throw std::runtime_error("tensor file has too many values: " + path);
            }
            t.values[n++] = parse_double(field, path);
        }
    }
    if (n != t.values.size()) {
        throw std::runtime_error("tensor file has too few values: " + path);
    }
    return t;
}

Scenario load_scenario_json(const std::string& path) {
    const json j = load_json(path);
    const std::string mode = j.value("mode", "physical");
    Scenario s;

    if (mode == "normalized") {
        const auto& a = j.at("a");
        const int users = static_cast<int>(a.size());
        Eigen::VectorXd av(users), bv(users), dv(users);
        for (int i = 0; i < users; ++i) av(i) = a[i].get<double>();
        bv = vector_field(j, "b", users);
        dv = vector_field(j, "delta", users);

        Eigen::VectorXd eps;
        if (j.contains("level_weights")) {
            const auto& lw = j.at("level_weights");
            eps.resize(lw.size());
            for (std::size_t n = 0; n < lw.size(); ++n) eps(n) = lw[n].get<double>();
        } else {
            eps = Eigen::VectorXd::Ones(1);
        }
        Eigen::MatrixXd r;
        if (j.contains("assignment") && j.at("assignment").is_array()) {
            const auto& jr = j.at("assignment");
            r.resize(users, eps.size());
            for (int i = 0; i < users; ++i) {
                for (Eigen::Index n = 0; n < eps.size(); ++n) {
                    r(i, n) = jr[i][n].get<double>();
                }
            }
        } else {
            r = round_robin_assignment(users, static_cast<int>(eps.size()));
        }
        s = Scenario::normalized(av, bv, dv, eps, r, j.value("b_min", -1.0),
                                 j.value("b_max", -1.0), j.value("p_min", -1.0),
                                 j.value("p_max", -1.0));
    } else if (mode == "physical") {
        const int users = j.at("users").get<int>();
        Eigen::VectorXd eps;
        const auto& lw = j.at("level_weights");
        eps.resize(lw.size());
        for (std::size_t n = 0; n < lw.size(); ++n) eps(n) = lw[n].get<double>();
        Eigen::MatrixXd r;
        if (j.contains("assignment") && j.at("assignment").is_array()) {
            const auto& jr = j.at("assignment");
            r.resize(users, eps.size());
            for (int i = 0; i < users; ++i) {
                for (Eigen::Index n = 0; n < eps.size(); ++n) {
                    r(i, n) = jr[i][n].get<double>();
                }
            }
        } else {
            r = round_robin_assignment(users, static_cast<int>(eps.size()));
        }
        s = Scenario::physical(users, j.at("d0_bits").get<double>(),
                               j.at("t0_s").get<double>(),
                               j.at("N0_w_per_hz").get<double>(),
                               j.at("b_min_hz").get<double>(),
                               j.at("b_max_hz").get<double>(),
                               j.at("p_min_w").get<double>(),
                               j.at("p_max_w").get<double>(),
                               vector_field(j, "delta", users), eps, r);
    } else {
        throw std::runtime_error("scenario mode must be physical or normalized: " + path);
    }

    s.id = j.value("id", path);
    s.allow_partial_selection = j.value("allow_partial_selection", false);
    s.require_valid();
    return s;
}

void save_scenario_json(const Scenario& s, const std::string& path) {
    json j;
    j["id"] = s.id;
    j["allow_partial_selection"] = s.allow_partial_selection;
    j["level_weights"] = std::vector<double>(
        s.level_weights.data(), s.level_weights.data() + s.level_weights.size());
    std::vector<std::vector<double>> r(s.users);
    for (int i = 0; i < s.users; ++i) {
        r[i].resize(s.assignment.cols());
        for (Eigen::Index n = 0; n < s.assignment.cols(); ++n) {
            r[i][n] = s.assignment(i, n);
        }
    }
    j["assignment"] = r;

    if (s.mode == ScenarioMode::normalized) {
        j["mode"] = "normalized";
        j["a"] = std::vector<double>(s.norm_a.data(), s.norm_a.data() + s.norm_a.size());
        j["b"] = std::vector<double>(s.norm_b.data(), s.norm_b.data() + s.norm_b.size());
        j["delta"] = std::vector<double>(s.norm_delta.data(),
                                         s.norm_delta.data() + s.norm_delta.size());
        j["b_min"] = s.b_min_hz;
        j["b_max"] = s.b_max_hz;
        j["p_min"] = s.p_min_w;
        j["p_max"] = s.p_max_w;
    } else {
        j["mode"] = "physical";
        j["users"] = s.users;
        j["d0_bits"] = s.d0_bits(0);
        j["t0_s"] = s.t0_s;
        j["N0_w_per_hz"] = s.n0_w_per_hz;
        j["b_min_hz"] = s.b_min_hz;
        j["b_max_hz"] = s.b_max_hz;
        j["p_min_w"] = s.p_min_w;
        j["p_max_w"] = s.p_max_w;
        j["delta"] = std::vector<double>(s.delta.data(), s.delta.data() + s.delta.size());
    }
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace semcom::io
