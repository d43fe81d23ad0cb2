#include "replicator/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace replicator::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const char* what) {
    const std::string t = trim(token);
    if (t.empty()) throw ArgumentError(std::string(what) + ": empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) throw ArgumentError(std::string(what) + ": bad number '" + t + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

Vector vector_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ArgumentError(std::string(what) + ": expected a nonempty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ArgumentError(std::string(what) + ": entries must be numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Json vector_to_json(const Vector& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

}  // namespace

Vector parse_vector_list(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.empty()) throw ArgumentError("expected a comma-separated list of numbers");
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(parts[i], "vector");
    return v;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ArgumentError("matrix: expected a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw ArgumentError("matrix: rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ArgumentError("matrix: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw ArgumentError("matrix: entries must be numbers");
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return M;
}

Json matrix_to_json(const Matrix& M) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        j.push_back(std::move(row));
    }
    return j;
}

FitnessModel model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ArgumentError("model: expected an object with a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    auto field = [&](const char* key) -> const Json& {
        if (!j.contains(key)) throw ArgumentError("model of type " + type + " needs field \"" + key + "\"");
        return j[key];
    };
    if (type == "constant") return FitnessModel::constant(vector_from_json(field("a"), "constant model"));
    if (type == "linear") return FitnessModel::linear(matrix_from_json(field("B")));
    if (type == "generator") return FitnessModel::generator(matrix_from_json(field("R")));
    throw ArgumentError("model: unknown type '" + type + "'");
}

Json model_to_json(const FitnessModel& f) {
    if (const auto* c = f.as_constant()) return Json{{"type", "constant"}, {"a", vector_to_json(c->a)}};
    if (const auto* l = f.as_linear()) return Json{{"type", "linear"}, {"B", matrix_to_json(l->B)}};
    if (const auto* g = f.as_generator()) return Json{{"type", "generator"}, {"R", matrix_to_json(g->R)}};
    throw ArgumentError("model: custom fitness maps cannot be serialized");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ArgumentError("'" + path + "': " + e.what());
    }
}

FitnessModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

Matrix load_matrix(const std::string& path) {
    const Json j = read_json_file(path);
    if (j.is_array()) return matrix_from_json(j);
    for (const char* key : {"A", "B", "R"})
        if (j.is_object() && j.contains(key)) return matrix_from_json(j[key]);
    throw ArgumentError("'" + path + "': expected a matrix or an object with \"A\", \"B\" or \"R\"");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().dim();
    os << "t";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
    os << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << format_double(traj.times[k]);
        for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(traj.states[k][i]);
        os << '\n';
    }
}

namespace {

std::vector<std::string> read_header(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw ArgumentError(std::string(what) + ": empty input");
    return split(trim(line), ',');
}

std::vector<double> read_row(const std::string& line, std::size_t expected, std::size_t row, const char* what) {
    const auto cells = split(line, ',');
    if (cells.size() != expected) {
        std::ostringstream os;
        os << what << ": row " << row << " has " << cells.size() << " fields, expected " << expected;
        throw ArgumentError(os.str());
    }
    std::vector<double> v;
    v.reserve(expected);
    for (const auto& c : cells) v.push_back(parse_double(c, what));
    return v;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& is) {
    const auto header = read_header(is, "trajectory csv");
    if (header.size() < 3 || header[0] != "t") throw ArgumentError("trajectory csv: header must be t,x1,...,xn");
    for (std::size_t i = 1; i < header.size(); ++i)
        if (header[i] != "x" + std::to_string(i)) throw ArgumentError("trajectory csv: unexpected column '" + header[i] + "'");

    Trajectory traj;
    traj.method = "csv";
    std::string line;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto v = read_row(trim(line), header.size(), row, "trajectory csv");
        traj.times.push_back(v[0]);
        traj.states.emplace_back(Eigen::Map<const Vector>(v.data() + 1, static_cast<Eigen::Index>(v.size() - 1)));
    }
    if (traj.times.size() >= 2) traj.dt = traj.times[1] - traj.times[0];
    return traj;
}

void write_phase_csv(std::ostream& os, const PhaseTrajectory& traj) {
    const Eigen::Index m = traj.ys.empty() ? 0 : traj.ys.front().size();
    os << "t";
    for (Eigen::Index i = 1; i <= m; ++i) os << ",y" << i;
    for (Eigen::Index i = 1; i <= m; ++i) os << ",p" << i;
    os << ",H\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << format_double(traj.times[k]);
        for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_double(traj.ys[k][i]);
        for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_double(traj.ps[k][i]);
        os << ',' << format_double(traj.hs[k]) << '\n';
    }
}

PhaseTrajectory read_phase_csv(std::istream& is) {
    const auto header = read_header(is, "phase csv");
    if (header.size() < 4 || (header.size() - 2) % 2 != 0 || header.front() != "t" || header.back() != "H")
        throw ArgumentError("phase csv: header must be t,y1..,p1..,H");
    const std::size_t m = (header.size() - 2) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        if (header[1 + i] != "y" + std::to_string(i + 1) || header[1 + m + i] != "p" + std::to_string(i + 1))
            throw ArgumentError("phase csv: unexpected column order");
    }
    PhaseTrajectory traj;
    std::string line;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto v = read_row(trim(line), header.size(), row, "phase csv");
        traj.times.push_back(v[0]);
        traj.ys.emplace_back(Eigen::Map<const Vector>(v.data() + 1, static_cast<Eigen::Index>(m)));
        traj.ps.emplace_back(Eigen::Map<const Vector>(v.data() + 1 + m, static_cast<Eigen::Index>(m)));
        traj.hs.push_back(v.back());
    }
    if (traj.times.size() >= 2) traj.dt = traj.times[1] - traj.times[0];
    return traj;
}

Json to_json(const BracketReport& r) {
    Json samples = Json::array();
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        Json s{{"x", vector_to_json(r.samples[i].values())},
               {"skew", r.skew.at(i)},
               {"linearity", r.linearity.at(i)},
               {"jacobi", r.jacobi.at(i)}};
        if (i < r.homomorphism.size()) s["homomorphism"] = r.homomorphism[i];
        samples.push_back(std::move(s));
    }
    return Json{{"samples", std::move(samples)},
                {"max_residual", r.max_residual},
                {"tolerance", r.tolerance},
                {"passed", r.passed()}};
}

Json to_json(const PeriodicOrbitReport& r) {
    Json j{{"c", r.c}, {"turning_points", r.turning_points}, {"verdict", to_string(r.verdict)}};
    j["return_distance"] = r.return_distance ? Json(*r.return_distance) : Json(nullptr);
    j["period_estimate"] = r.period_estimate ? Json(*r.period_estimate) : Json(nullptr);
    return j;
}

Json to_json(const ControllabilityReport& r) {
    Json hyps = Json::object();
    for (const auto& h : r.hypotheses) hyps[h.name] = Json{{"passed", h.passed}, {"detail", h.detail}};

    Json bundle = nullptr;
    if (r.bundle) {
        Json rows = Json::array();
        for (const auto& row : r.bundle->r_rows) rows.push_back(vector_to_json(row));
        bundle = Json{{"dets", Json{{"v_tilde", r.bundle->det_v_tilde}, {"minors", r.bundle->minor_dets}}},
                      {"r_rows", std::move(rows)},
                      {"sigma_min_R", r.bundle->sigma_min_R}};
    }

    Json samples = Json::array();
    for (const auto& s : r.samples)
        samples.push_back(Json{{"x", vector_to_json(s.point.values())},
                               {"chosen_k", s.chosen_k},
                               {"key_value", s.key_value},
                               {"rank", s.rank},
                               {"verdict", s.spans ? "spans" : "deficient"}});

    return Json{{"label", r.label},
                {"hypotheses", std::move(hyps)},
                {"bundle", std::move(bundle)},
                {"samples", std::move(samples)},
                {"verdict", to_string(r.verdict)}};
}

}  // namespace replicator::io
