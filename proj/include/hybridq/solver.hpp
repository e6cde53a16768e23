#ifndef HYBRIDQ_SOLVER_HPP
#define HYBRIDQ_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridq/assembly.hpp"
#include "hybridq/dense_eigen.hpp"
#include "hybridq/parallel.hpp"

namespace hybridq {

struct SolveOptions {
    /// Enables canonical orthogonalisation when Cholesky breaks down; the
    /// value is the relative eigenvalue cutoff for retained overlap directions.
    std::optional<double> canonical_cutoff;
    /// Energies closer than this are ordered by ascending <z'>.
    double tie_tolerance = 1e-12;
};

inline constexpr double default_canonical_cutoff = 1e-10;

struct EigenSolution {
    Eigen::VectorXd energies;        ///< ascending, units of hbar*omega_0
    Eigen::MatrixXcd coefficients;   ///< S-orthonormal columns
    BasisSpec spec;
    ScaledParams scaled;
    double overlap_condition = 0.0;
    dense::Reduction reduction = dense::Reduction::cholesky;
    int retained = 0;

    int size() const { return static_cast<int>(energies.size()); }
};

/// S c, using the block-diagonal spin structure.
inline Eigen::VectorXcd apply_overlap(const SpectralProblem& prob, const Eigen::VectorXcd& c) {
    return prob.S * c;
}

/// (1_spin x 1_y x z') c.
inline Eigen::VectorXcd apply_position(const SpectralProblem& prob, const Eigen::VectorXcd& c) {
    const auto half = static_cast<Eigen::Index>(prob.spec.spatial_dimension());
    const auto& y1 = (*prob.y_tables)[YKind::identity];
    const auto& zz = (*prob.z_tables)[ZKind::z];
    Eigen::VectorXcd out(c.size());
    out.head(half) = apply_spatial(y1, zz, Eigen::VectorXcd(c.head(half)), prob.spec);
    out.tail(half) = apply_spatial(y1, zz, Eigen::VectorXcd(c.tail(half)), prob.spec);
    return out;
}

namespace detail {

/// Within clusters of (near-)degenerate energies, rotate to eigenvectors of
/// the projected z' operator and order them by ascending <z'>.
inline void order_ties(const SpectralProblem& prob, EigenSolution& sol, double tol) {
    const int n = sol.size();
    int i = 0;
    while (i < n) {
        int j = i + 1;
        while (j < n && sol.energies[j] - sol.energies[j - 1] < tol) ++j;
        if (j - i > 1) {
            const int w = j - i;
            Eigen::MatrixXcd block = sol.coefficients.middleCols(i, w);
            Eigen::MatrixXcd zb(block.rows(), w);
            for (int c = 0; c < w; ++c) zb.col(c) = apply_position(prob, block.col(c));
            Eigen::MatrixXcd proj = block.adjoint() * zb;
            proj = (0.5 * (proj + proj.adjoint())).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj);
            sol.coefficients.middleCols(i, w) = block * es.eigenvectors();
        }
        i = j;
    }
}

} // namespace detail

inline EigenSolution solve(const SpectralProblem& prob, int n_lowest, const SolveOptions& opts = {}) {
    const int dim = static_cast<int>(prob.dimension());
    if (n_lowest < 1 || n_lowest > dim) throw ParameterError("n_lowest must be in [1, M]");
    EigenSolution sol;
    sol.spec = prob.spec;
    sol.scaled = prob.scaled;
    sol.overlap_condition = prob.overlap_condition();
    const bool real = prob.H.imag().cwiseAbs().maxCoeff() == 0.0;
    if (real) {
        auto r = dense::generalized_lowest<double>(prob.H.real(), prob.S, n_lowest, opts.canonical_cutoff);
        sol.energies = r.pairs.values;
        sol.coefficients = r.pairs.vectors.cast<Complex>();
        sol.reduction = r.reduction;
        sol.retained = r.retained;
    } else {
        auto r = dense::generalized_lowest<Complex>(prob.H, prob.S, n_lowest, opts.canonical_cutoff);
        sol.energies = r.pairs.values;
        sol.coefficients = std::move(r.pairs.vectors);
        sol.reduction = r.reduction;
        sol.retained = r.retained;
    }
    detail::order_ties(prob, sol, opts.tie_tolerance);
    return sol;
}

struct SolutionChecks {
    double orthonormality_error = 0.0; ///< max |C^dagger S C - 1|
    double max_relative_residual = 0.0; ///< max_j |H c_j - E_j S c_j| / |S c_j| / max|E|
};

inline SolutionChecks check(const SpectralProblem& prob, const EigenSolution& sol) {
    SolutionChecks c;
    const Eigen::MatrixXcd sc = prob.S * sol.coefficients;
    const Eigen::MatrixXcd gram = sol.coefficients.adjoint() * sc;
    c.orthonormality_error =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd hc = prob.H * sol.coefficients;
    const double emax = std::max(sol.energies.cwiseAbs().maxCoeff(), 1e-300);
    for (int j = 0; j < sol.size(); ++j) {
        const double r = (hc.col(j) - sol.energies[j] * sc.col(j)).norm() / sc.col(j).norm();
        c.max_relative_residual = std::max(c.max_relative_residual, r / emax);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Stabilisation with respect to the nonlinear parameters.

enum class StabilizedParameter { mu, eta };

inline std::string to_string(StabilizedParameter p) { return p == StabilizedParameter::mu ? "mu" : "eta"; }

struct Plateau {
    bool found = false;
    std::size_t first = 0, last = 0; ///< grid indices, inclusive
    double lo = 0.0, hi = 0.0;
    double relative_variation = 0.0;
};

/// (max - min) / max(|max|, |min|); NaN if any value is NaN.
inline double relative_variation(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v) {
        if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double ref = std::max(std::abs(lo), std::abs(hi));
    return ref > 0 ? (hi - lo) / ref : 0.0;
}

/// Widest (in parameter span) contiguous window of grid points whose relative
/// variation does not exceed tol. Windows of a single point do not count.
inline Plateau widest_plateau(std::span<const double> grid, std::span<const double> values, double tol) {
    if (grid.size() != values.size()) throw ParameterError("grid/value size mismatch");
    Plateau best;
    const std::size_t n = grid.size();
    std::size_t left = 0;
    for (std::size_t right = 0; right < n; ++right) {
        if (std::isnan(values[right])) {
            left = right + 1;
            continue;
        }
        while (left < right && relative_variation(values.subspan(left, right - left + 1)) > tol) ++left;
        if (right > left) {
            const double width = grid[right] - grid[left];
            if (!best.found || width > best.hi - best.lo) {
                best.found = true;
                best.first = left;
                best.last = right;
                best.lo = grid[left];
                best.hi = grid[right];
                best.relative_variation = relative_variation(values.subspan(left, right - left + 1));
            }
        }
    }
    return best;
}

struct StabilizationTable {
    StabilizedParameter parameter = StabilizedParameter::mu;
    std::vector<double> grid;
    Eigen::MatrixXd levels;            ///< grid.size() x n_track, NaN where a point failed
    std::vector<std::string> failures; ///< per grid point, empty on success
    std::vector<Plateau> plateaus;     ///< per level
    double tolerance = 1e-4;

    int tracked() const { return static_cast<int>(levels.cols()); }
    /// Values of one level restricted to grid points inside [lo, hi].
    std::vector<double> level_in(int level, double lo, double hi) const {
        std::vector<double> out;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i] >= lo && grid[i] <= hi) out.push_back(levels(static_cast<Eigen::Index>(i), level));
        return out;
    }
};

inline void require_increasing(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw ParameterError(std::string(what) + " grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ParameterError(std::string(what) + " grid must be strictly increasing");
}

/// Re-assembles and solves at every grid point of mu or eta, then scans each
/// tracked level for its widest plateau.
inline StabilizationTable stabilize(const PhysicalParams& params, const BasisSpec& base,
                                    StabilizedParameter parameter, std::vector<double> grid,
                                    int n_track, double tol = 1e-4, int workers = 1) {
    require_increasing(grid, "stabilisation");
    if (!(grid.front() > 0)) throw ParameterError("stabilisation grid must be positive");
    if (n_track < 1 || static_cast<std::size_t>(n_track) > base.dimension())
        throw ParameterError("n_track must be in [1, M]");
    const ScaledParams sp = scale(params);

    struct Point {
        Eigen::VectorXd energies;
        std::string error;
    };
    const auto points = parallel_map(grid.size(), workers, [&](std::size_t i) {
        Point pt;
        BasisSpec spec = base;
        (parameter == StabilizedParameter::mu ? spec.mu : spec.eta) = grid[i];
        try {
            const auto prob = assemble(sp, spec);
            pt.energies = solve(prob, n_track).energies;
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        return pt;
    });

    StabilizationTable t;
    t.parameter = parameter;
    t.grid = grid;
    t.tolerance = tol;
    t.levels = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(grid.size()), n_track,
                                         std::numeric_limits<double>::quiet_NaN());
    t.failures.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.failures[i] = points[i].error;
        if (points[i].error.empty())
            t.levels.row(static_cast<Eigen::Index>(i)) = points[i].energies.transpose();
    }
    for (int l = 0; l < n_track; ++l) {
        const Eigen::VectorXd col = t.levels.col(l);
        t.plateaus.push_back(widest_plateau(grid, std::span<const double>(col.data(), col.size()), tol));
    }
    return t;
}

} // namespace hybridq

#endif // HYBRIDQ_SOLVER_HPP
