#include "qpdnls/artifacts.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpdnls/errors.hpp"

namespace qpdnls {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ConfigError("cannot create directory " + path + ": " + ec.message());
}

std::string trajectory_csv(const Trajectory& traj, int nu) {
    std::string out = "t";
    for (int i = 1; i <= nu; ++i) out += ",n_" + std::to_string(i);
    out += ",re,im\n";
    for (const FourierState& s : traj.states) {
        const std::string t = fmt_double(s.time());
        for (const auto& [key, value] : s.data()) {
            const LatticePoint n = packed::decode(key, nu);
            out += t;
            for (Coord c : n.coords) out += "," + std::to_string(c);
            out += "," + fmt_double(value.real()) + "," + fmt_double(value.imag()) + "\n";
        }
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& csv, const TruncationBox& box) {
    Trajectory traj;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty trajectory csv");
    const int nu = box.nu();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (static_cast<int>(cells.size()) != nu + 3)
            throw ConfigError("trajectory csv row has wrong arity: " + line);
        const double t = std::strtod(cells[0].c_str(), nullptr);
        std::vector<Coord> coords;
        for (int i = 0; i < nu; ++i) coords.push_back(std::strtoll(cells[static_cast<std::size_t>(1 + i)].c_str(), nullptr, 10));
        const double re = std::strtod(cells[static_cast<std::size_t>(nu + 1)].c_str(), nullptr);
        const double im = std::strtod(cells[static_cast<std::size_t>(nu + 2)].c_str(), nullptr);
        if (traj.states.empty() || traj.states.back().time() != t) traj.states.emplace_back(t, box);
        traj.states.back().set(LatticePoint(coords), Complex(re, im));
    }
    return traj;
}

std::string monitors_csv(const Trajectory& traj) {
    std::string out = "t,M,H,E\n";
    for (std::size_t i = 0; i < traj.monitors.size(); ++i) {
        out += fmt_double(traj.states[i].time());
        out += "," + fmt_double(traj.monitors[i].M);
        out += "," + fmt_double(traj.monitors[i].H);
        out += "," + fmt_double(traj.monitors[i].E);
        out += "\n";
    }
    return out;
}

std::string table_json(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
    nlohmann::json j;
    j["header"] = header;
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string trajectory_json(const Trajectory& traj, int nu) {
    std::vector<std::string> header = {"t"};
    for (int i = 1; i <= nu; ++i) header.push_back("n_" + std::to_string(i));
    header.push_back("re");
    header.push_back("im");
    std::vector<std::vector<double>> rows;
    for (const FourierState& s : traj.states) {
        for (const auto& [key, value] : s.data()) {
            std::vector<double> row = {s.time()};
            for (Coord c : packed::decode(key, nu).coords) row.push_back(static_cast<double>(c));
            row.push_back(value.real());
            row.push_back(value.imag());
            rows.push_back(std::move(row));
        }
    }
    return table_json(header, rows);
}

std::string monitors_json(const Trajectory& traj) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < traj.monitors.size(); ++i)
        rows.push_back({traj.states[i].time(), traj.monitors[i].M, traj.monitors[i].H, traj.monitors[i].E});
    return table_json({"t", "M", "H", "E"}, rows);
}

std::string checks_csv(const std::vector<CheckRow>& rows) {
    std::string out = "lemma,instance,expected,actual,pass\n";
    for (const CheckRow& r : rows)
        out += r.lemma + "," + r.instance + "," + r.expected + "," + r.actual + "," +
               (r.pass ? "1" : "0") + "\n";
    return out;
}

bool all_pass(const std::vector<CheckRow>& rows) {
    for (const CheckRow& r : rows)
        if (!r.pass) return false;
    return true;
}

} // namespace qpdnls
