#ifndef HYBRIDQ_CONFIG_HPP
#define HYBRIDQ_CONFIG_HPP

// key = value run configuration. One assignment per line, '#' starts a
// comment. Grids are written either as a comma list "0.1, 0.5, 1" or as an
// inclusive range "start:step:stop".

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hybridq/basis.hpp"
#include "hybridq/error.hpp"
#include "hybridq/model.hpp"

namespace hybridq {

enum class Task { solve, stabilize, sweep_bsl, sweep_w0, sweep_B0, quartic_gap, contour_fit };

inline std::string to_string(Task t) {
    switch (t) {
    case Task::solve: return "solve";
    case Task::stabilize: return "stabilize";
    case Task::sweep_bsl: return "sweep-bsl";
    case Task::sweep_w0: return "sweep-w0";
    case Task::sweep_B0: return "sweep-B0";
    case Task::quartic_gap: return "quartic-gap";
    case Task::contour_fit: return "contour-fit";
    }
    return "?";
}

inline std::optional<Task> parse_task(std::string_view s) {
    for (Task t : {Task::solve, Task::stabilize, Task::sweep_bsl, Task::sweep_w0, Task::sweep_B0,
                   Task::quartic_gap, Task::contour_fit})
        if (s == to_string(t)) return t;
    return std::nullopt;
}

inline bool is_quartic(Task t) { return t == Task::quartic_gap || t == Task::contour_fit; }

struct RunConfig {
    Task task = Task::solve;
    PhysicalParams physical;
    bool b_set = false;          ///< false: b follows a
    BasisSpec basis;
    std::optional<double> quartic_eta; ///< 1D basis width; unset selects it from r_a
    int quartic_N = 20;
    std::string stabilize_parameter = "mu";
    std::vector<double> grid;    ///< stabilisation grid (mu or eta)
    std::vector<double> bsl_grid;   ///< T
    std::vector<double> hw0_grid;   ///< meV
    std::vector<double> B0_grid;    ///< T
    std::vector<double> a_grid;     ///< nm
    std::vector<double> targets;    ///< scaled gaps for contour-fit
    double tolerance = 1e-4;
    int levels = 8;
    int workers = 1;
    std::string out = "out";

    /// b in nm, resolved against a.
    double b() const { return b_set ? physical.b : physical.a; }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& text, std::size_t line, const std::string& key) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError("malformed number '" + t + "' for " + key, line);
    }
    if (used != t.size() || !std::isfinite(v)) throw ConfigError("malformed number '" + t + "' for " + key, line);
    return v;
}

inline int parse_int(const std::string& text, std::size_t line, const std::string& key) {
    const double v = parse_number(text, line, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("expected an integer for " + key, line);
    return static_cast<int>(v);
}

inline std::vector<double> parse_grid(const std::string& text, std::size_t line, const std::string& key) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("range for " + key + " must be start:step:stop", line);
        const double a = parse_number(parts[0], line, key), h = parse_number(parts[1], line, key),
                     b = parse_number(parts[2], line, key);
        if (!(h > 0) || b < a) throw ConfigError("range for " + key + " needs step > 0 and stop >= start", line);
        const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
        if (n > 100000) throw ConfigError("range for " + key + " is too long", line);
        for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
        return out;
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p, line, key));
    return out;
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_grid(const std::vector<double>& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ", " : "") + format_number(g[i]);
    return s;
}

inline bool strictly_monotone(const std::vector<double>& g) {
    if (g.size() < 2) return true;
    const bool up = g[1] > g[0];
    for (std::size_t i = 1; i < g.size(); ++i)
        if (up ? !(g[i] > g[i - 1]) : !(g[i] < g[i - 1])) return false;
    return true;
}

} // namespace detail

/// Grids present and monotone, task-specific fields set, model preconditions hold.
inline void validate(const RunConfig& c) {
    auto need = [&](const std::vector<double>& g, const char* key) {
        if (g.empty()) throw ConfigError(std::string("task ") + to_string(c.task) + " requires a nonempty " + key, 0);
    };
    for (const auto* g : {&c.grid, &c.bsl_grid, &c.hw0_grid, &c.B0_grid, &c.a_grid, &c.targets})
        if (!detail::strictly_monotone(*g)) throw ConfigError("grids must be strictly monotone", 0);
    switch (c.task) {
    case Task::solve: break;
    case Task::stabilize: need(c.grid, "grid"); break;
    case Task::sweep_bsl: need(c.bsl_grid, "bsl_grid"); break;
    case Task::sweep_w0: need(c.hw0_grid, "hw0_grid"); need(c.bsl_grid, "bsl_grid"); break;
    case Task::sweep_B0: need(c.B0_grid, "B0_grid"); need(c.bsl_grid, "bsl_grid"); break;
    case Task::quartic_gap: need(c.hw0_grid, "hw0_grid"); need(c.a_grid, "a_grid"); break;
    case Task::contour_fit:
        need(c.hw0_grid, "hw0_grid");
        need(c.a_grid, "a_grid");
        need(c.targets, "targets");
        break;
    }
    if (c.stabilize_parameter != "mu" && c.stabilize_parameter != "eta")
        throw ConfigError("stabilize_parameter must be mu or eta", 0);
    if (c.levels < 1) throw ConfigError("levels must be positive", 0);
    if (c.workers < 1) throw ConfigError("workers must be positive", 0);
    if (!(c.tolerance > 0)) throw ConfigError("tolerance must be positive", 0);
    if (c.quartic_N < 1 || (c.quartic_eta && !(*c.quartic_eta > 0)))
        throw ConfigError("quartic basis needs N >= 1 and eta > 0", 0);
    try {
        PhysicalParams p = c.physical;
        p.b = c.b();
        if (is_quartic(c.task)) {
            p.B0 = 1.0;
            p.bSLa = 0.0;
        }
        validate(p);
        if (!is_quartic(c.task)) validate(c.basis);
        for (double b : c.bsl_grid) {
            p.bSLa = b;
            validate(p);
        }
        for (double w : c.hw0_grid)
            if (!(w > 0)) throw ParameterError("hw0 grid values must be positive");
        for (double a : c.a_grid)
            if (!(a > 0)) throw ParameterError("a grid values must be positive");
        for (double t : c.targets)
            if (!(t > 0)) throw ParameterError("targets must be positive");
        if (c.task == Task::sweep_B0)
            for (double b0 : c.B0_grid) {
                p.B0 = b0;
                for (double b : c.bsl_grid) {
                    p.bSLa = b;
                    validate(p);
                }
            }
    } catch (const ParameterError& e) {
        throw ConfigError(e.what(), 0);
    }
}

/// Parses configuration text. `implied` supplies the task when no task key is present.
inline RunConfig parse_config(std::string_view text, std::optional<Task> implied = {}) {
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    std::size_t task_line = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
        const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", lineno);
        if (value.empty()) throw ConfigError("missing value for " + key, lineno);
        if (!seen.insert(key).second) throw ConfigError("duplicate key " + key, lineno);
        auto num = [&] { return detail::parse_number(value, lineno, key); };
        auto integer = [&] { return detail::parse_int(value, lineno, key); };
        auto grid = [&] { return detail::parse_grid(value, lineno, key); };
        if (key == "task") {
            const auto t = parse_task(value);
            if (!t) throw ConfigError("unknown task '" + value + "'", lineno);
            c.task = *t;
            task_line = lineno;
        } else if (key == "hw0") c.physical.hw0 = num();
        else if (key == "a") c.physical.a = num();
        else if (key == "b") {
            c.physical.b = num();
            c.b_set = true;
        } else if (key == "gamma") c.physical.gamma = num();
        else if (key == "B0") c.physical.B0 = num();
        else if (key == "bSLa") c.physical.bSLa = num();
        else if (key == "m_ratio") c.physical.m_ratio = num();
        else if (key == "eta") c.basis.eta = num();
        else if (key == "mu") c.basis.mu = num();
        else if (key == "L") c.basis.L = integer();
        else if (key == "N") c.basis.N = integer();
        else if (key == "quartic_eta") c.quartic_eta = num();
        else if (key == "quartic_N") c.quartic_N = integer();
        else if (key == "stabilize_parameter") c.stabilize_parameter = value;
        else if (key == "grid") c.grid = grid();
        else if (key == "bsl_grid") c.bsl_grid = grid();
        else if (key == "hw0_grid") c.hw0_grid = grid();
        else if (key == "B0_grid") c.B0_grid = grid();
        else if (key == "a_grid") c.a_grid = grid();
        else if (key == "targets") c.targets = grid();
        else if (key == "tolerance") c.tolerance = num();
        else if (key == "levels") c.levels = integer();
        else if (key == "workers") c.workers = integer();
        else if (key == "out") c.out = value;
        else throw ConfigError("unknown key " + key, lineno);
    }
    if (!seen.count("task")) {
        if (!implied) throw ConfigError("missing required key task", 0);
        c.task = *implied;
    }
    // physical parameters the task actually uses must be given explicitly
    std::vector<std::string> required;
    if (is_quartic(c.task)) {
        required = {"gamma"};
    } else {
        required = {"gamma"};
        if (c.task != Task::sweep_w0) required.push_back("hw0");
        required.push_back("a");
        if (c.task != Task::sweep_B0) required.push_back("B0");
        if (c.task == Task::solve || c.task == Task::stabilize) required.push_back("bSLa");
    }
    for (const auto& k : required)
        if (!seen.count(k)) throw ConfigError("missing required key " + k + " for task " + to_string(c.task), task_line);
    validate(c);
    return c;
}

inline RunConfig load_config(const std::string& path, std::optional<Task> implied = {}) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path, 0);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), implied);
}

/// Writes every field, so that parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c) {
    using detail::format_grid;
    using detail::format_number;
    std::ostringstream o;
    o << "task = " << to_string(c.task) << '\n';
    o << "hw0 = " << format_number(c.physical.hw0) << '\n';
    o << "a = " << format_number(c.physical.a) << '\n';
    if (c.b_set) o << "b = " << format_number(c.physical.b) << '\n';
    o << "gamma = " << format_number(c.physical.gamma) << '\n';
    o << "B0 = " << format_number(c.physical.B0) << '\n';
    o << "bSLa = " << format_number(c.physical.bSLa) << '\n';
    o << "m_ratio = " << format_number(c.physical.m_ratio) << '\n';
    o << "eta = " << format_number(c.basis.eta) << '\n';
    o << "mu = " << format_number(c.basis.mu) << '\n';
    o << "L = " << c.basis.L << '\n';
    o << "N = " << c.basis.N << '\n';
    if (c.quartic_eta) o << "quartic_eta = " << format_number(*c.quartic_eta) << '\n';
    o << "quartic_N = " << c.quartic_N << '\n';
    o << "stabilize_parameter = " << c.stabilize_parameter << '\n';
    auto grid = [&](const char* key, const std::vector<double>& g) {
        if (!g.empty()) o << key << " = " << format_grid(g) << '\n';
    };
    grid("grid", c.grid);
    grid("bsl_grid", c.bsl_grid);
    grid("hw0_grid", c.hw0_grid);
    grid("B0_grid", c.B0_grid);
    grid("a_grid", c.a_grid);
    grid("targets", c.targets);
    o << "tolerance = " << format_number(c.tolerance) << '\n';
    o << "levels = " << c.levels << '\n';
    o << "workers = " << c.workers << '\n';
    o << "out = " << c.out << '\n';
    return o.str();
}

} // namespace hybridq

#endif // HYBRIDQ_CONFIG_HPP
