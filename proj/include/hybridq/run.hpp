#ifndef HYBRIDQ_RUN_HPP
#define HYBRIDQ_RUN_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hybridq/assembly.hpp"
#include "hybridq/config.hpp"
#include "hybridq/observables.hpp"
#include "hybridq/parallel.hpp"
#include "hybridq/quartic1d.hpp"
#include "hybridq/solver.hpp"

namespace hybridq {

// ---------------------------------------------------------------------------
// CSV with '#' comment lines, one header row and 17-digit numbers.

struct CsvTable {
    std::vector<std::string> comments; ///< without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error("no CSV column " + name);
    }
    double number(std::size_t row, const std::string& name) const {
        const std::string& s = rows.at(row).at(column(name));
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        return std::stod(s);
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(detail::trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    bool have_header = false;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        auto cells = split_csv_line(line);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != t.header.size()) throw Error("CSV row width differs from the header");
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw Error("CSV has no header row");
    return t;
}

inline const std::string config_echo_prefix = "config: ";

/// Rebuilds the run configuration from the parameter-echo comments.
inline RunConfig config_from_echo(const CsvTable& t) {
    std::string text;
    for (const auto& c : t.comments)
        if (c.rfind(config_echo_prefix, 0) == 0) text += c.substr(config_echo_prefix.size()) + '\n';
    return parse_config(text);
}

inline std::string csv_number(double v) { return std::isnan(v) ? "nan" : detail::format_number(v); }

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
    void comment(const std::string& c) { comments_.push_back(c); }
    void echo(const RunConfig& cfg) {
        std::istringstream in(serialize(cfg));
        for (std::string l; std::getline(in, l);) comments_.push_back(config_echo_prefix + l);
    }
    void row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) throw Error("CSV row width differs from the header");
        rows_.push_back(std::move(cells));
    }
    std::string str() const {
        std::ostringstream o;
        for (const auto& c : comments_) o << "# " << c << '\n';
        for (std::size_t i = 0; i < header_.size(); ++i) o << (i ? "," : "") << header_[i];
        o << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
            o << '\n';
        }
        return o.str();
    }
    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header_.size(); ++i)
            if (header_[i] == name) return i + 1; // gnuplot columns are 1-based
        throw Error("no CSV column " + name);
    }

private:
    std::vector<std::string> header_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------

struct RunOutcome {
    int exit_code = 0;
    std::size_t points = 0, failed = 0;
    std::filesystem::path csv, plot, summary;
    std::string summary_text;
};

namespace detail {

struct Emit {
    std::string csv, plot, summary;
};

inline PhysicalParams resolved(const RunConfig& c) {
    PhysicalParams p = c.physical;
    p.b = c.b();
    return p;
}

inline std::string plot_preamble(const std::string& stem, const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream o;
    o << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set terminal pngcairo size 900,650\n"
      << "set output '" << stem << ".png'\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set ylabel '" << ylabel << "'\n";
    return o.str();
}

/// One solved 2D point reduced to value objects.
struct PointResult {
    bool ok = false;
    std::string error;
    Eigen::VectorXd energies; ///< hbar*omega_0
    std::vector<StateReport> states;
    QubitReport qubit;
    double condition = std::numeric_limits<double>::quiet_NaN();
};

inline PointResult solve_point(const PhysicalParams& p, const BasisSpec& spec, const OneDimensionalTables& tables,
                               int levels) {
    PointResult r;
    try {
        const auto prob = assemble(scale(p), spec, tables);
        const auto sol = solve(prob, std::min<int>(levels, static_cast<int>(prob.dimension())));
        r.energies = sol.energies;
        for (int j = 0; j < sol.size(); ++j) r.states.push_back(state_report(sol, j, prob));
        if (sol.size() >= 2) r.qubit = qubit_report(sol, prob, p.hw0);
        r.condition = prob.overlap_condition();
        r.ok = true;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

inline std::vector<std::string> level_columns(int levels) {
    std::vector<std::string> h;
    for (int j = 0; j < levels; ++j) h.push_back("E" + std::to_string(j) + "_hw0");
    for (int j = 0; j < levels; ++j) h.push_back("E" + std::to_string(j) + "_meV");
    return h;
}

inline void append_levels(std::vector<std::string>& row, const PointResult& r, int levels, double hw0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < levels; ++j) row.push_back(csv_number(r.ok && j < r.energies.size() ? r.energies[j] : nan));
    for (int j = 0; j < levels; ++j)
        row.push_back(csv_number(r.ok && j < r.energies.size() ? r.energies[j] * hw0 : nan));
}

inline Emit run_solve(const RunConfig& c, RunOutcome& out) {
    const PhysicalParams p = resolved(c);
    PointResult r;
    try {
        r = solve_point(p, c.basis, make_tables(c.basis), c.levels);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    out.points = 1;
    out.failed = r.ok ? 0 : 1;
    CsvWriter w({"level", "status", "E_hw0", "E_meV", "z_mean", "sx_mean", "norm_check"});
    w.comment("hybridq solve: lowest levels of the 2D spin Hamiltonian");
    w.comment("units: E_hw0 in hbar*omega_0, E_meV in meV, z_mean = <z>/a, sx_mean = <sigma_x>");
    w.echo(c);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (r.ok) {
        for (const auto& s : r.states)
            w.row({std::to_string(s.index), "ok", csv_number(s.energy), csv_number(s.energy * p.hw0),
                   csv_number(s.z_mean), csv_number(s.sx_mean), csv_number(s.norm_check)});
    } else {
        w.comment("error: " + r.error);
        w.row({"0", "error", csv_number(nan), csv_number(nan), csv_number(nan), csv_number(nan), csv_number(nan)});
    }
    std::ostringstream s;
    s << "task solve, M = " << c.basis.dimension() << "\n";
    if (r.ok) {
        s << "overlap condition number: " << format_number(r.condition) << "\n";
        if (r.states.size() >= 2) {
            s << "gap (E1-E0): " << format_number(r.qubit.gap) << " hbar*omega_0 = " << format_number(r.qubit.gap_ueV)
              << " ueV\n"
              << "<z/a>_0 = " << format_number(r.qubit.z0) << ", <z/a>_1 = " << format_number(r.qubit.z1)
              << ", opposite wells: " << (r.qubit.pair_flag ? "yes" : "no") << "\n"
              << "<sigma_x> contrast: " << format_number(r.qubit.sx_contrast) << "\n";
        }
        for (const auto& st : r.states)
            s << "  E" << st.index << " = " << format_number(st.energy) << " hbar*omega_0 = "
              << format_number(st.energy * p.hw0) << " meV, <z/a> = " << format_number(st.z_mean)
              << ", <sigma_x> = " << format_number(st.sx_mean) << "\n";
    } else {
        s << "failed: " << r.error << "\n";
    }
    std::string plot = plot_preamble("solve", "level index", "E / hbar omega_0");
    plot += "plot 'solve.csv' using " + std::to_string(w.column("level")) + ":" +
            std::to_string(w.column("E_hw0")) + " with points pt 7\n";
    return {w.str(), plot, s.str()};
}

inline Emit run_stabilize(const RunConfig& c, RunOutcome& out) {
    const auto param = c.stabilize_parameter == "eta" ? StabilizedParameter::eta : StabilizedParameter::mu;
    const PhysicalParams p = resolved(c);
    const int n_track = std::min<int>(c.levels, static_cast<int>(c.basis.dimension()));
    const auto t = stabilize(p, c.basis, param, c.grid, n_track, c.tolerance, c.workers);
    std::vector<std::string> h = {c.stabilize_parameter, "status"};
    for (const auto& col : level_columns(n_track)) h.push_back(col);
    CsvWriter w(h);
    w.comment("hybridq stabilize: lowest levels vs the nonlinear parameter " + c.stabilize_parameter);
    w.comment("units: E*_hw0 in hbar*omega_0, E*_meV in meV");
    w.echo(c);
    out.points = t.grid.size();
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        PointResult r;
        r.ok = t.failures[i].empty();
        if (r.ok) r.energies = t.levels.row(static_cast<Eigen::Index>(i)).transpose();
        else {
            ++out.failed;
            w.comment("error at " + c.stabilize_parameter + " = " + format_number(t.grid[i]) + ": " + t.failures[i]);
        }
        std::vector<std::string> row = {csv_number(t.grid[i]), r.ok ? "ok" : "error"};
        append_levels(row, r, n_track, p.hw0);
        w.row(row);
    }
    std::ostringstream s;
    s << "task stabilize over " << c.stabilize_parameter << ", " << t.grid.size() << " points, " << n_track
      << " levels, window tolerance " << format_number(c.tolerance) << "\n";
    const Eigen::VectorXd e0 = t.levels.col(0);
    s << "ground level relative variation over the grid: "
      << format_number(relative_variation(std::span<const double>(e0.data(), e0.size()))) << "\n";
    for (int l = 0; l < n_track; ++l) {
        const auto& pl = t.plateaus[static_cast<std::size_t>(l)];
        s << "  level " << l << ": ";
        if (pl.found)
            s << "plateau [" << format_number(pl.lo) << ", " << format_number(pl.hi)
              << "], relative variation " << format_number(pl.relative_variation) << "\n";
        else
            s << "no plateau\n";
    }
    std::string plot = plot_preamble("stabilize", c.stabilize_parameter, "E / hbar omega_0");
    plot += "set key off\nplot for [j=3:" + std::to_string(2 + n_track) + "] 'stabilize.csv' using 1:j with linespoints pt 7 ps 0.5\n";
    return {w.str(), plot, s.str()};
}

/// Shared driver for the 2D sweeps: outer groups (hw0 or B0, or a single
/// group) times the bSLa grid.
inline Emit run_2d_sweep(const RunConfig& c, RunOutcome& out) {
    const PhysicalParams base = resolved(c);
    std::string group_key;
    std::vector<double> groups;
    if (c.task == Task::sweep_w0) {
        group_key = "hw0";
        groups = c.hw0_grid;
    } else if (c.task == Task::sweep_B0) {
        group_key = "B0";
        groups = c.B0_grid;
    } else {
        groups = {base.hw0};
    }
    const std::size_t nb = c.bsl_grid.size(), total = groups.size() * nb;
    std::optional<OneDimensionalTables> tables;
    std::string table_error;
    try {
        tables = make_tables(c.basis);
    } catch (const std::exception& e) {
        table_error = e.what();
    }
    std::vector<PhysicalParams> params(total, base);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t k = 0; k < nb; ++k) {
            auto& p = params[g * nb + k];
            if (c.task == Task::sweep_w0) p.hw0 = groups[g];
            if (c.task == Task::sweep_B0) p.B0 = groups[g];
            p.bSLa = c.bsl_grid[k];
        }
    const auto results = parallel_map(total, c.workers, [&](std::size_t i) {
        if (!tables) {
            PointResult r;
            r.error = table_error;
            return r;
        }
        return solve_point(params[i], c.basis, *tables, c.levels);
    });

    std::vector<std::string> h;
    if (!group_key.empty()) h.push_back(group_key);
    for (const char* col : {"bSLa", "status", "gap_hw0", "gap_ueV", "z0", "z1", "sx0", "sx1", "sx_contrast"})
        h.emplace_back(col);
    for (const auto& col : level_columns(c.levels)) h.push_back(col);
    CsvWriter w(h);
    w.comment("hybridq " + to_string(c.task) + ": spectrum and qubit observables vs bSLa");
    w.comment("units: bSLa in T, hw0 in meV, B0 in T, gap_hw0 in hbar*omega_0, gap_ueV in ueV, "
              "z = <z>/a, sx = <sigma_x>, E*_hw0 in hbar*omega_0, E*_meV in meV");
    w.echo(c);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.points = total;
    for (std::size_t i = 0; i < total; ++i) {
        const auto& r = results[i];
        const auto& p = params[i];
        std::vector<std::string> row;
        if (!group_key.empty()) row.push_back(csv_number(groups[i / nb]));
        row.push_back(csv_number(p.bSLa));
        row.push_back(r.ok ? "ok" : "error");
        const bool two = r.ok && r.states.size() >= 2;
        for (double v : {two ? r.qubit.gap : nan, two ? r.qubit.gap_ueV : nan, two ? r.qubit.z0 : nan,
                         two ? r.qubit.z1 : nan, r.ok ? r.states[0].sx_mean : nan,
                         two ? r.states[1].sx_mean : nan, two ? r.qubit.sx_contrast : nan})
            row.push_back(csv_number(v));
        append_levels(row, r, c.levels, p.hw0);
        w.row(row);
        if (!r.ok) {
            ++out.failed;
            w.comment("error at row " + std::to_string(i) + ": " + r.error);
        }
    }

    std::ostringstream s;
    s << "task " << to_string(c.task) << ", " << total << " points, M = " << c.basis.dimension() << "\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!group_key.empty()) s << group_key << " = " << format_number(groups[g]) << ":\n";
        std::vector<SweepSample> sweep;
        double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
        for (std::size_t k = 0; k < nb; ++k) {
            const auto& r = results[g * nb + k];
            if (!r.ok || r.states.size() < 2) continue;
            gmin = std::min(gmin, r.qubit.gap);
            gmax = std::max(gmax, r.qubit.gap);
            SweepSample smp;
            smp.parameter = c.bsl_grid[k];
            smp.energies = r.energies;
            smp.z_means.resize(static_cast<Eigen::Index>(r.states.size()));
            for (std::size_t j = 0; j < r.states.size(); ++j)
                smp.z_means[static_cast<Eigen::Index>(j)] = r.states[j].z_mean;
            sweep.push_back(std::move(smp));
        }
        if (sweep.empty()) {
            s << "  all points failed\n";
            continue;
        }
        s << "  gap range: [" << format_number(gmin) << ", " << format_number(gmax) << "] hbar*omega_0\n";
        const auto& last = results[g * nb + nb - 1];
        if (last.ok && last.states.size() >= 2)
            s << "  at bSLa = " << format_number(c.bsl_grid.back()) << " T: gap " << format_number(last.qubit.gap_ueV)
              << " ueV, <sigma_x>_0 = " << format_number(last.states[0].sx_mean)
              << ", <z/a>_0 = " << format_number(last.qubit.z0) << "\n";
        if (sweep.size() >= 3) {
            const int nl = std::min<int>(c.levels, static_cast<int>(sweep.front().energies.size()));
            const auto xs = crossing_scan(sweep, nl);
            s << "  avoided crossings among the lowest " << nl << " levels: " << xs.size() << "\n";
            for (const auto& x : xs)
                s << "    levels " << x.lower_level << "/" << x.lower_level + 1 << " at bSLa = "
                  << format_number(x.parameter) << " T, gap " << format_number(x.gap) << "\n";
        }
    }
    const std::string stem = to_string(c.task);
    std::string plot = plot_preamble(stem, "b_SL a [T]", c.task == Task::sweep_bsl ? "E / hbar omega_0" : "<sigma_x>_0");
    if (c.task == Task::sweep_bsl) {
        const auto first = w.column("E0_hw0");
        plot += "plot for [j=" + std::to_string(first) + ":" + std::to_string(first + c.levels - 1) + "] '" + stem +
                ".csv' using 1:j with linespoints pt 7 ps 0.5\n";
    } else {
        const auto gc = w.column(group_key), xc = w.column("bSLa"), yc = w.column("sx0");
        plot += "plot ";
        for (std::size_t g = 0; g < groups.size(); ++g)
            plot += std::string(g ? ", \\\n     " : "") + "'" + stem + ".csv' using " + std::to_string(xc) +
                    ":(abs($" + std::to_string(gc) + "-" + format_number(groups[g]) + ")<1e-12 ? $" +
                    std::to_string(yc) + " : 1/0) with linespoints title '" + group_key + " = " +
                    format_number(groups[g]) + "'";
        plot += "\n";
    }
    return {w.str(), plot, s.str()};
}

inline quartic::GapSurface quartic_surface(const RunConfig& c) {
    quartic::Spec1d spec{c.quartic_eta, c.quartic_N};
    return quartic::gap_surface(c.hw0_grid, c.a_grid, c.physical.gamma,
                                c.b_set ? std::optional<double>(c.physical.b) : std::nullopt, spec, c.workers,
                                c.physical.m_ratio);
}

inline Emit run_quartic_gap(const RunConfig& c, RunOutcome& out) {
    const auto s = quartic_surface(c);
    CsvWriter w({"hw0", "a", "r_a", "status", "gap_hw0", "gap_ueV", "log_slope", "regime"});
    w.comment("hybridq quartic-gap: scaled 1D double-well gap (E1-E0)/hbar*omega_0");
    w.comment("units: hw0 in meV, a in nm, gap_ueV in ueV, log_slope = d ln gap / d ln a");
    w.echo(c);
    out.points = s.hw0.size() * s.a.size();
    for (std::size_t i = 0; i < s.hw0.size(); ++i)
        for (std::size_t j = 0; j < s.a.size(); ++j) {
            const double g = s.gap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const bool ok = std::isfinite(g);
            if (!ok) ++out.failed;
            const auto& cv = s.curves[i];
            const bool classified = !cv.regime.empty();
            w.row({csv_number(s.hw0[i]), csv_number(s.a[j]),
                   csv_number(quartic::ratio_a(s.hw0[i], s.a[j], c.physical.m_ratio)), ok ? "ok" : "error",
                   csv_number(g), csv_number(g * s.hw0[i] * 1e3),
                   csv_number(classified ? cv.log_slope[j] : std::numeric_limits<double>::quiet_NaN()),
                   classified ? quartic::to_string(cv.regime[j]) : "none"});
        }
    for (const auto& f : s.failures) w.comment("error: " + f);
    std::ostringstream o;
    o << "task quartic-gap, gamma = " << format_number(s.gamma) << ", " << out.points << " points\n";
    for (std::size_t i = 0; i < s.hw0.size(); ++i) {
        const auto& cv = s.curves[i];
        o << "hw0 = " << format_number(s.hw0[i]) << " meV: regimes algebraic=" << cv.has_algebraic
          << " exponential=" << cv.has_exponential << " floor=" << cv.has_floor;
        if (cv.exp_fit_valid)
            o << ", exponential fit over a in [" << format_number(cv.exp_fit_lo) << ", " << format_number(cv.exp_fit_hi)
              << "] nm: slope " << format_number(cv.exp_fit_slope) << " /nm, R^2 " << format_number(cv.exp_fit_r2);
        if (cv.has_floor) o << ", floor " << format_number(cv.floor_value) << " (2|gamma| = " << format_number(2 * std::abs(s.gamma)) << ")";
        o << "\n";
    }
    std::string plot = plot_preamble("quartic-gap", "a [nm]", "(E_1 - E_0) / hbar omega_0");
    plot += "set logscale y\nplot ";
    for (std::size_t i = 0; i < s.hw0.size(); ++i)
        plot += std::string(i ? ", \\\n     " : "") + "'quartic-gap.csv' using 2:(abs($1-" + format_number(s.hw0[i]) +
                ")<1e-12 ? $5 : 1/0) with lines title 'hw0 = " + format_number(s.hw0[i]) + " meV'";
    plot += "\n";
    return {w.str(), plot, o.str()};
}

inline Emit run_contour_fit(const RunConfig& c, RunOutcome& out) {
    const auto s = quartic_surface(c);
    CsvWriter w({"target", "hw0", "a", "status"});
    w.comment("hybridq contour-fit: smallest a with (E1-E0)/hbar*omega_0 <= target");
    w.comment("units: target in hbar*omega_0, hw0 in meV, a in nm; fit a = A * hw0^p");
    w.echo(c);
    std::ostringstream o;
    o << "task contour-fit, gamma = " << format_number(s.gamma) << "\n";
    for (const auto& f : s.failures) w.comment("error: " + f);
    for (double target : c.targets) {
        const auto f = quartic::contour_fit(s, target);
        for (const auto& p : f.points) w.row({csv_number(target), csv_number(p.hw0), csv_number(p.a), "ok"});
        for (double hw : f.omitted_hw0) {
            w.row({csv_number(target), csv_number(hw), "nan", "unreached"});
            ++out.failed;
        }
        out.points += f.points.size() + f.omitted_hw0.size();
        o << "target " << format_number(target) << ": ";
        if (f.fitted)
            o << "A = " << format_number(f.A) << " nm meV^" << format_number(-f.exponent) << ", exponent "
              << format_number(f.exponent) << ", R^2 " << format_number(f.r2);
        else
            o << "no fit (fewer than two contour points)";
        if (!f.omitted_hw0.empty()) {
            o << ", omitted hw0:";
            for (double hw : f.omitted_hw0) o << ' ' << format_number(hw);
        }
        o << "\n";
    }
    std::string plot = plot_preamble("contour-fit", "hbar omega_0 [meV]", "a [nm]");
    plot += "plot ";
    for (std::size_t i = 0; i < c.targets.size(); ++i)
        plot += std::string(i ? ", \\\n     " : "") + "'contour-fit.csv' using 2:(abs($1/" + format_number(c.targets[i]) +
                "-1)<1e-9 ? $3 : 1/0) with linespoints title 'gap = " + format_number(c.targets[i]) + "'";
    plot += "\n";
    return {w.str(), plot, o.str()};
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
}

} // namespace detail

/// Executes the configured task and writes <out>/<task>.{csv,plt,txt}.
/// Exit code 0 unless every grid point failed.
inline RunOutcome run(const RunConfig& c, std::ostream* log = nullptr) {
    validate(c);
    RunOutcome out;
    detail::Emit e;
    switch (c.task) {
    case Task::solve: e = detail::run_solve(c, out); break;
    case Task::stabilize: e = detail::run_stabilize(c, out); break;
    case Task::sweep_bsl:
    case Task::sweep_w0:
    case Task::sweep_B0: e = detail::run_2d_sweep(c, out); break;
    case Task::quartic_gap: e = detail::run_quartic_gap(c, out); break;
    case Task::contour_fit: e = detail::run_contour_fit(c, out); break;
    }
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    const std::string stem = to_string(c.task);
    out.csv = dir / (stem + ".csv");
    out.plot = dir / (stem + ".plt");
    out.summary = dir / (stem + ".txt");
    out.summary_text = e.summary + "points: " + std::to_string(out.points) + ", failed: " + std::to_string(out.failed) + "\n";
    detail::write_file(out.csv, e.csv);
    detail::write_file(out.plot, e.plot);
    detail::write_file(out.summary, out.summary_text);
    out.exit_code = out.points > 0 && out.failed == out.points ? 1 : 0;
    if (log) *log << out.summary_text;
    return out;
}

} // namespace hybridq

#endif // HYBRIDQ_RUN_HPP
