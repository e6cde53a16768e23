#ifndef HYBRIDQ_QUARTIC1D_HPP
#define HYBRIDQ_QUARTIC1D_HPP

// Spinless one-dimensional double well: gap tabulation, regime analysis and
// gap contours in the (hbar*omega_0, a) plane.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridq/basis.hpp"
#include "hybridq/dense_eigen.hpp"
#include "hybridq/model.hpp"
#include "hybridq/parallel.hpp"

namespace hybridq::quartic {

struct Spec1d {
    std::optional<double> eta; ///< unset: matched to the local well curvature
    int N = 20;
};

/// r_a = hbar*omega_a / hbar*omega_0 for the given dot.
inline double ratio_a(double hw0, double a, double m_ratio = 0.041) {
    if (!(hw0 > 0) || !(a > 0) || !(m_ratio > 0)) throw ParameterError("hw0, a and m_ratio must be positive");
    return constants::hbar2_over_me_meV_nm2 / (m_ratio * a * a) / hw0;
}

/// Width matched to the harmonic well bottom for separated wells and to the
/// pure quartic scale once the wells merge.
inline double auto_eta(double r_a) { return r_a < 1.0 ? 1.0 / std::sqrt(r_a) : std::pow(r_a, -1.0 / 3.0); }

inline constexpr double canonical_cutoff = 1e-10;

struct Result1d {
    Eigen::VectorXd energies; ///< ascending, hbar*omega_0
    double eta = 0.0;
    dense::Reduction reduction = dense::Reduction::cholesky;
    int retained = 0;
};

/// Lowest eigenvalues of -(r_a/2) d^2 + (a/b)^2 (z^2-1)^2 / (8 r_a) - gamma z
/// in the parity-adapted shifted oscillator basis.
inline Result1d solve_scaled(double r_a, double ab_ratio, double gamma, const Spec1d& spec, int count = 4) {
    if (!(r_a > 0) || !(ab_ratio > 0)) throw ParameterError("r_a and (a/b)^2 must be positive");
    if (spec.N < 1) throw ParameterError("N must be positive");
    BasisSpec bs;
    bs.eta = spec.eta.value_or(auto_eta(r_a));
    bs.mu = 1.0;
    bs.L = 1;
    bs.N = spec.N;
    const ZTables zt = make_z_tables(bs);
    const Eigen::MatrixXd h = -0.5 * r_a * zt[ZKind::d2] + (ab_ratio / (8.0 * r_a)) * zt[ZKind::quartic] -
                              gamma * zt[ZKind::z];
    Eigen::MatrixXd hs = 0.5 * (h + h.transpose());
    // the overlap is badly conditioned for strongly overlapping wells
    auto r = dense::canonical_lowest<double>(hs, zt[ZKind::identity], std::min(count, 2 * spec.N),
                                             canonical_cutoff);
    return {r.pairs.values, bs.eta, r.reduction, r.retained};
}

inline Result1d solve_1d(double hw0, double a, double b, double gamma, const Spec1d& spec, int count = 4,
                         double m_ratio = 0.041) {
    if (!(b > 0)) throw ParameterError("b must be positive");
    if (!(std::abs(gamma) < 1)) throw ParameterError("|gamma| must be below 1");
    return solve_scaled(ratio_a(hw0, a, m_ratio), (a / b) * (a / b), gamma, spec, count);
}

enum class Regime { algebraic, exponential, floor, transition, unresolved };

inline std::string to_string(Regime r) {
    switch (r) {
    case Regime::algebraic: return "algebraic";
    case Regime::exponential: return "exponential";
    case Regime::floor: return "floor";
    case Regime::transition: return "transition";
    case Regime::unresolved: return "unresolved";
    }
    return "?";
}

struct RegimeThresholds {
    double exponential_slope = -1.5; ///< d ln g / d ln a below this: exponential
    double floor_slope = 0.25;       ///< |d ln g / d ln a| below this: floor
};

struct CurveAnalysis {
    std::vector<double> log_slope;   ///< d ln g / d ln a per grid point
    std::vector<Regime> regime;
    bool has_algebraic = false, has_exponential = false, has_floor = false;
    // log-linear fit ln g = c0 + c1 a over the middle decade of the exponential part
    bool exp_fit_valid = false;
    double exp_fit_slope = 0.0, exp_fit_r2 = 0.0, exp_fit_lo = 0.0, exp_fit_hi = 0.0;
    double floor_value = 0.0;        ///< mean gap over the floor points
};

struct LineFit {
    double intercept = 0.0, slope = 0.0, r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("line fit needs two or more points");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = x[static_cast<std::size_t>(i)];
        b[i] = y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    const double mean = b.mean();
    const double ss_res = (A * c - b).squaredNorm();
    const double ss_tot = (b.array() - mean).square().sum();
    return {c[0], c[1], ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

/// Classify one gap curve g(a) by its logarithmic derivative.
inline CurveAnalysis analyze_curve(const std::vector<double>& a, const std::vector<double>& g,
                                   const RegimeThresholds& th = {}) {
    const std::size_t n = a.size();
    if (n != g.size() || n < 3) throw ParameterError("curve needs three or more points");
    for (std::size_t i = 0; i < n; ++i)
        if (!(a[i] > 0) || !(g[i] > 0)) throw ParameterError("curve values must be positive");
    CurveAnalysis c;
    c.log_slope.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = i == 0 ? 0 : i - 1, r = i + 1 == n ? n - 1 : i + 1;
        c.log_slope[i] = (std::log(g[r]) - std::log(g[l])) / (std::log(a[r]) - std::log(a[l]));
    }
    c.regime.assign(n, Regime::transition);
    bool seen_exp = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = c.log_slope[i];
        if (s < th.exponential_slope) {
            c.regime[i] = Regime::exponential;
            seen_exp = true;
        } else if (!seen_exp) {
            c.regime[i] = Regime::algebraic;
        }
    }
    // floor: trailing points with a flat logarithmic derivative
    for (std::size_t i = n; i-- > 0;) {
        if (std::abs(c.log_slope[i]) >= th.floor_slope || c.regime[i] == Regime::exponential) break;
        if (seen_exp) c.regime[i] = Regime::floor;
    }
    double floor_sum = 0.0;
    int floor_count = 0;
    std::size_t e_first = n, e_last = 0;
    for (std::size_t i = 0; i < n; ++i) {
        switch (c.regime[i]) {
        case Regime::algebraic: c.has_algebraic = true; break;
        case Regime::exponential:
            c.has_exponential = true;
            e_first = std::min(e_first, i);
            e_last = i;
            break;
        case Regime::floor:
            c.has_floor = true;
            floor_sum += g[i];
            ++floor_count;
            break;
        case Regime::transition:
        case Regime::unresolved: break;
        }
    }
    if (floor_count > 0) c.floor_value = floor_sum / floor_count;
    if (c.has_exponential) {
        // middle decade: one decade of g centred geometrically in the exponential part
        const double centre = std::sqrt(g[e_first] * g[e_last]);
        const double lo = centre / std::sqrt(10.0), hi = centre * std::sqrt(10.0);
        std::vector<double> xs, ys;
        for (std::size_t i = e_first; i <= e_last; ++i)
            if (g[i] >= lo && g[i] <= hi) {
                xs.push_back(a[i]);
                ys.push_back(std::log(g[i]));
            }
        if (xs.size() >= 3) {
            const auto f = fit_line(xs, ys);
            c.exp_fit_valid = true;
            c.exp_fit_slope = f.slope;
            c.exp_fit_r2 = f.r2;
            c.exp_fit_lo = xs.front();
            c.exp_fit_hi = xs.back();
        }
    }
    return c;
}

/// Gaps below this (in hbar*omega_0) are at the level of the eigenvalue
/// rounding error and are not used for regime classification.
inline constexpr double gap_resolution = 1e-9;

struct GapSurface {
    std::vector<double> hw0;   ///< meV
    std::vector<double> a;     ///< nm, strictly increasing
    Eigen::MatrixXd gap;       ///< hw0.size() x a.size(), (E1 - E0) / hbar*omega_0; NaN on failure
    double gamma = 0.0;
    std::optional<double> b;   ///< nm; unset means b = a
    double m_ratio = 0.041;
    std::vector<CurveAnalysis> curves; ///< per hw0; points past the first unresolved gap are unresolved
    std::vector<std::string> failures; ///< "hw0=..., a=...: message"
};

/// Tabulates the scaled gap on the (hw0, a) grid and classifies every curve.
inline GapSurface gap_surface(std::vector<double> hw0, std::vector<double> a, double gamma,
                              std::optional<double> b, const Spec1d& spec, int workers = 1,
                              double m_ratio = 0.041) {
    if (hw0.empty() || a.empty()) throw ParameterError("gap surface grids must be nonempty");
    for (std::size_t i = 1; i < a.size(); ++i)
        if (!(a[i] > a[i - 1])) throw ParameterError("a grid must be strictly increasing");
    GapSurface s;
    s.hw0 = std::move(hw0);
    s.a = std::move(a);
    s.gamma = gamma;
    s.b = b;
    s.m_ratio = m_ratio;
    const std::size_t na = s.a.size();
    struct Cell {
        double gap;
        std::string error;
    };
    const auto cells = parallel_map(s.hw0.size() * na, workers, [&](std::size_t idx) {
        const double w = s.hw0[idx / na], ai = s.a[idx % na];
        try {
            const auto r = solve_1d(w, ai, b.value_or(ai), gamma, spec, 2, m_ratio);
            return Cell{r.energies[1] - r.energies[0], {}};
        } catch (const std::exception& e) {
            return Cell{std::numeric_limits<double>::quiet_NaN(), e.what()};
        }
    });
    s.gap.resize(static_cast<Eigen::Index>(s.hw0.size()), static_cast<Eigen::Index>(na));
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto i = static_cast<Eigen::Index>(idx / na), j = static_cast<Eigen::Index>(idx % na);
        s.gap(i, j) = cells[idx].gap;
        if (!cells[idx].error.empty())
            s.failures.push_back("hw0=" + std::to_string(s.hw0[static_cast<std::size_t>(i)]) +
                                 ", a=" + std::to_string(s.a[static_cast<std::size_t>(j)]) + ": " +
                                 cells[idx].error);
    }
    for (std::size_t i = 0; i < s.hw0.size(); ++i) {
        // classify the leading part of the curve where the gap is resolved
        std::vector<double> a_ok, g_ok;
        for (std::size_t j = 0; j < na; ++j) {
            const double g = s.gap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (!(g > gap_resolution)) break;
            a_ok.push_back(s.a[j]);
            g_ok.push_back(g);
        }
        CurveAnalysis c;
        if (a_ok.size() >= 3) {
            c = analyze_curve(a_ok, g_ok);
            c.log_slope.resize(na, std::numeric_limits<double>::quiet_NaN());
            c.regime.resize(na, Regime::unresolved);
        }
        s.curves.push_back(std::move(c));
    }
    return s;
}

struct ContourPoint {
    double hw0 = 0.0, a = 0.0;
};

struct ContourFit {
    double target = 0.0;
    std::vector<ContourPoint> points;
    std::vector<double> omitted_hw0; ///< target not reached on the tabulated a range
    bool fitted = false;
    double A = 0.0;         ///< nm meV^(-exponent)
    double exponent = 0.0;
    double r2 = 0.0;
};

/// Smallest a with gap <= target along one tabulated curve: bisection over
/// the grid index, then log-linear interpolation inside the bracketing cell.
inline std::optional<double> contour_crossing(const std::vector<double>& a, const std::vector<double>& g,
                                              double target) {
    const std::size_t n = a.size();
    if (n == 0 || !(target > 0)) return std::nullopt;
    if (!(g[0] > target)) return a[0];
    // the first index below target, assuming the curve decreases up to that point
    std::size_t first_below = n;
    for (std::size_t i = 0; i < n; ++i)
        if (g[i] <= target) {
            first_below = i;
            break;
        }
    if (first_below == n) return std::nullopt;
    std::size_t lo = 0, hi = first_below; // g[lo] > target >= g[hi]
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (g[mid] > target ? lo : hi) = mid;
    }
    const double l0 = std::log(g[lo]), l1 = std::log(g[hi]);
    const double t = (l0 - std::log(target)) / (l0 - l1);
    return a[lo] + t * (a[hi] - a[lo]);
}

/// Contour of the scaled gap and the fit log a = log A + exponent log hw0.
inline ContourFit contour_fit(const GapSurface& s, double target) {
    if (!(target > 0)) throw ParameterError("contour target must be positive");
    ContourFit f;
    f.target = target;
    const std::size_t na = s.a.size();
    for (std::size_t i = 0; i < s.hw0.size(); ++i) {
        std::vector<double> g(na);
        bool finite = true;
        for (std::size_t j = 0; j < na; ++j) {
            g[j] = s.gap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            finite = finite && std::isfinite(g[j]);
        }
        const auto x = finite ? contour_crossing(s.a, g, target) : std::nullopt;
        if (x) f.points.push_back({s.hw0[i], *x});
        else f.omitted_hw0.push_back(s.hw0[i]);
    }
    if (f.points.size() >= 2) {
        std::vector<double> lx, ly;
        for (const auto& p : f.points) {
            lx.push_back(std::log(p.hw0));
            ly.push_back(std::log(p.a));
        }
        const auto lf = fit_line(lx, ly);
        f.fitted = true;
        f.A = std::exp(lf.intercept);
        f.exponent = lf.slope;
        f.r2 = lf.r2;
    }
    return f;
}

} // namespace hybridq::quartic

#endif // HYBRIDQ_QUARTIC1D_HPP
