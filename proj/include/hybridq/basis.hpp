#ifndef HYBRIDQ_BASIS_HPP
#define HYBRIDQ_BASIS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridq/error.hpp"

namespace hybridq {

/// Nonlinear parameters and counts of the Hermite-Gaussian spin-orbital basis.
///
/// The z-functions are parity combinations of oscillator functions centred at
/// z' = +1 and z' = -1 with inverse width eta; the y-functions are oscillator
/// functions centred at y' = 0 with inverse width mu.
struct BasisSpec {
    double eta = 4.0;
    double mu = 0.7;
    int L = 20; ///< y-functions phi_k, k = 0..L-1
    int N = 20; ///< z-functions per parity psi_n^+-, n = 0..N-1

    std::size_t dimension() const { return 4u * static_cast<std::size_t>(L) * N; }
    /// Number of spatial functions (one spin block).
    std::size_t spatial_dimension() const { return 2u * static_cast<std::size_t>(L) * N; }
    /// Number of z-functions (both parities).
    int z_dimension() const { return 2 * N; }

    friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

inline void validate(const BasisSpec& spec) {
    if (!(spec.eta > 0) || !(spec.mu > 0))
        throw ParameterError("basis widths eta and mu must be positive");
    if (spec.L < 1 || spec.N < 1)
        throw ParameterError("basis counts L and N must be at least 1");
}

enum class Parity : int { plus = 0, minus = 1 };
enum class Spin : int { up = 0, down = 1 }; ///< sigma_z = +1 / -1

inline int sign(Parity p) { return p == Parity::plus ? 1 : -1; }

struct BasisIndex {
    int k = 0;
    int n = 0;
    Parity p = Parity::plus;
    Spin s = Spin::up;

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Lexicographic flattening in (s, p, k, n), n fastest.
inline std::size_t flatten(const BasisIndex& idx, const BasisSpec& spec) {
    const auto s = static_cast<std::size_t>(idx.s);
    const auto p = static_cast<std::size_t>(idx.p);
    return ((s * 2 + p) * spec.L + idx.k) * spec.N + idx.n;
}

inline BasisIndex unflatten(std::size_t i, const BasisSpec& spec) {
    BasisIndex idx;
    idx.n = static_cast<int>(i % spec.N);
    i /= spec.N;
    idx.k = static_cast<int>(i % spec.L);
    i /= spec.L;
    idx.p = static_cast<Parity>(i % 2);
    idx.s = static_cast<Spin>(i / 2);
    return idx;
}

/// Index of (n, p) inside a z-table.
inline int z_index(int n, Parity p, int N) { return static_cast<int>(p) * N + n; }

/// Physicists' Hermite polynomial by the three-term recurrence.
template <typename Real>
Real hermite(int n, Real x) {
    if (n <= 0) return Real(1);
    Real h0 = 1, h1 = 2 * x;
    for (int j = 1; j < n; ++j) {
        const Real h2 = 2 * x * h1 - 2 * Real(j) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

inline double hermite(int n, double x) { return hermite<double>(n, x); }

enum class ZKind { identity, z, z2, z4, d1, d2, quartic, z_quartic };
enum class YKind { identity, y2, d1, d2 };

inline constexpr std::array<ZKind, 8> all_z_kinds = {
    ZKind::identity, ZKind::z, ZKind::z2, ZKind::z4,
    ZKind::d1, ZKind::d2, ZKind::quartic, ZKind::z_quartic};
inline constexpr std::array<YKind, 4> all_y_kinds = {
    YKind::identity, YKind::y2, YKind::d1, YKind::d2};

inline std::string to_string(ZKind k) {
    switch (k) {
    case ZKind::identity: return "1";
    case ZKind::z: return "z";
    case ZKind::z2: return "z^2";
    case ZKind::z4: return "z^4";
    case ZKind::d1: return "d/dz";
    case ZKind::d2: return "d2/dz2";
    case ZKind::quartic: return "(z^2-1)^2";
    case ZKind::z_quartic: return "z(z^2-1)^2";
    }
    throw ParameterError("unsupported z operator kind");
}

inline std::string to_string(YKind k) {
    switch (k) {
    case YKind::identity: return "1";
    case YKind::y2: return "y^2";
    case YKind::d1: return "d/dy";
    case YKind::d2: return "d2/dy2";
    }
    throw ParameterError("unsupported y operator kind");
}

namespace detail {

using Real = long double;

/// Coefficients of a ket over the oscillator functions of one centre.
using Expansion = std::vector<Real>;

/// x -> (x - centre) * width is the oscillator coordinate u, so
/// x = centre + (a + a^dagger) / (sqrt(2) width) and d/dx = width (a - a^dagger) / sqrt(2).
inline Expansion apply_position(const Expansion& v, Real width, Real centre) {
    Expansion out(v.size() + 1, 0);
    const Real f = 1 / (std::sqrt(Real(2)) * width);
    for (std::size_t m = 0; m < v.size(); ++m) {
        if (v[m] == 0) continue;
        out[m] += centre * v[m];
        if (m > 0) out[m - 1] += f * std::sqrt(Real(m)) * v[m];
        out[m + 1] += f * std::sqrt(Real(m + 1)) * v[m];
    }
    return out;
}

inline Expansion apply_derivative(const Expansion& v, Real width) {
    Expansion out(v.size() + 1, 0);
    const Real f = width / std::sqrt(Real(2));
    for (std::size_t m = 0; m < v.size(); ++m) {
        if (v[m] == 0) continue;
        if (m > 0) out[m - 1] += f * std::sqrt(Real(m)) * v[m];
        out[m + 1] -= f * std::sqrt(Real(m + 1)) * v[m];
    }
    return out;
}

inline Expansion axpy(Real alpha, const Expansion& x, Expansion y) {
    if (y.size() < x.size()) y.resize(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
    return y;
}

/// Expansion of O |m> for the oscillator function m of the given centre.
inline Expansion apply_z_kind(ZKind kind, int m, Real width, Real centre) {
    Expansion ket(static_cast<std::size_t>(m) + 1, 0);
    ket[m] = 1;
    auto pos = [&](const Expansion& v) { return apply_position(v, width, centre); };
    switch (kind) {
    case ZKind::identity: return ket;
    case ZKind::z: return pos(ket);
    case ZKind::z2: return pos(pos(ket));
    case ZKind::z4: return pos(pos(pos(pos(ket))));
    case ZKind::d1: return apply_derivative(ket, width);
    case ZKind::d2: return apply_derivative(apply_derivative(ket, width), width);
    case ZKind::quartic:
    case ZKind::z_quartic: {
        const Expansion z2 = pos(pos(ket));
        const Expansion z4 = pos(pos(z2));
        Expansion q = axpy(-2, z2, z4);
        q = axpy(1, ket, q);
        return kind == ZKind::quartic ? q : pos(q);
    }
    }
    throw ParameterError("unsupported z operator kind");
}

inline Expansion apply_y_kind(YKind kind, int l, Real width) {
    Expansion ket(static_cast<std::size_t>(l) + 1, 0);
    ket[l] = 1;
    switch (kind) {
    case YKind::identity: return ket;
    case YKind::y2: return apply_position(apply_position(ket, width, 0), width, 0);
    case YKind::d1: return apply_derivative(ket, width);
    case YKind::d2: return apply_derivative(apply_derivative(ket, width), width);
    }
    throw ParameterError("unsupported y operator kind");
}

/// O(n, m) = <g_n^{c1} | g_m^{c2}> for unit-normalised oscillator functions of a
/// common width. With s = width (c2 - c1) / sqrt(2), the ladder operators obey
/// a_1 = a_2 + s, which yields the two recurrences below.
inline std::vector<std::vector<Real>> displaced_overlaps(int nmax, int mmax, Real width,
                                                         Real c1, Real c2) {
    const Real s = width * (c2 - c1) / std::sqrt(Real(2));
    std::vector<std::vector<Real>> o(nmax + 1, std::vector<Real>(mmax + 1, 0));
    o[0][0] = std::exp(-s * s / 2);
    for (int n = 0; n < nmax; ++n) o[n + 1][0] = s * o[n][0] / std::sqrt(Real(n + 1));
    for (int m = 0; m < mmax; ++m) {
        for (int n = 0; n <= nmax; ++n) {
            Real v = -s * o[n][m];
            if (n > 0) v += std::sqrt(Real(n)) * o[n - 1][m];
            o[n][m + 1] = v / std::sqrt(Real(m + 1));
        }
    }
    return o;
}

inline Real contract(const std::vector<Real>& bra_row, const Expansion& ket) {
    Real acc = 0;
    for (std::size_t j = 0; j < ket.size(); ++j) acc += bra_row[j] * ket[j];
    return acc;
}

inline constexpr int max_ladder_reach = 6; // z(z^2-1)^2 raises by five

} // namespace detail

/// +1 for even operators, -1 for odd ones under z' -> -z'.
inline int parity_of(ZKind kind) {
    switch (kind) {
    case ZKind::z:
    case ZKind::d1:
    case ZKind::z_quartic: return -1;
    default: return 1;
    }
}

/// psi_n^+ has parity (-1)^n, psi_n^- has parity (-1)^(n+1).
inline int parity_of(int n, Parity p) { return ((n + static_cast<int>(p)) % 2 == 0) ? 1 : -1; }

/// <g_n^{c1} | g_m^{c2}> for unit-normalised oscillator functions of inverse
/// width eta centred at c1 and c2.
inline double shifted_overlap(int n, int m, double eta, double c1, double c2) {
    const auto o = detail::displaced_overlaps(n, m, eta, c1, c2);
    return static_cast<double>(o[n][m]);
}

/// <psi_n^{+a} | psi_m^{-a}> with the single-well centres at z' = +1 and -1.
inline double cross_overlap(int n, int m, const BasisSpec& spec) {
    return shifted_overlap(n, m, spec.eta, 1.0, -1.0);
}

/// C_n^+- making the parity combination unit-normalised.
inline double normalization(int n, Parity p, const BasisSpec& spec) {
    const double arg = 2.0 * (1.0 + sign(p) * cross_overlap(n, n, spec));
    if (!(arg > 0))
        throw DegenerateBasisError("parity combination n=" + std::to_string(n) +
                                   " has vanishing norm");
    return 1.0 / std::sqrt(arg);
}

/// All one-dimensional z-tables for a basis: 2N x 2N, indexed by z_index().
struct ZTables {
    std::array<Eigen::MatrixXd, all_z_kinds.size()> table;
    const Eigen::MatrixXd& operator[](ZKind k) const { return table[static_cast<int>(k)]; }
    Eigen::MatrixXd& operator[](ZKind k) { return table[static_cast<int>(k)]; }
};

/// All one-dimensional y-tables: L x L.
struct YTables {
    std::array<Eigen::MatrixXd, all_y_kinds.size()> table;
    const Eigen::MatrixXd& operator[](YKind k) const { return table[static_cast<int>(k)]; }
    Eigen::MatrixXd& operator[](YKind k) { return table[static_cast<int>(k)]; }
};

inline ZTables make_z_tables(const BasisSpec& spec) {
    validate(spec);
    using detail::Real;
    const int N = spec.N;
    const int reach = N + detail::max_ladder_reach;
    const Real eta = spec.eta;
    const std::array<Real, 2> centres = {1, -1};

    // overlaps[a][b] between centre a (bra) and centre b (ket)
    std::array<std::array<std::vector<std::vector<Real>>, 2>, 2> overlaps;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            overlaps[a][b] = detail::displaced_overlaps(N - 1, reach, eta, centres[a], centres[b]);

    std::vector<Real> cnorm[2];
    for (int p = 0; p < 2; ++p) {
        cnorm[p].resize(N);
        for (int n = 0; n < N; ++n) {
            const Real arg = 2 * (1 + (p == 0 ? 1 : -1) * overlaps[0][1][n][n]);
            if (!(arg > 0))
                throw DegenerateBasisError("parity combination n=" + std::to_string(n) +
                                           " has vanishing norm");
            cnorm[p][n] = 1 / std::sqrt(arg);
        }
    }

    ZTables out;
    for (ZKind kind : all_z_kinds) {
        Eigen::MatrixXd t(2 * N, 2 * N);
        for (int m = 0; m < N; ++m) {
            const std::array<detail::Expansion, 2> kets = {
                detail::apply_z_kind(kind, m, eta, centres[0]),
                detail::apply_z_kind(kind, m, eta, centres[1])};
            for (int n = 0; n < N; ++n) {
                // prim[a][b] = <g_n^{a}| O |g_m^{b}>
                Real prim[2][2];
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        prim[a][b] = detail::contract(overlaps[a][b][n], kets[b]);
                for (int p = 0; p < 2; ++p) {
                    const Real sp = p == 0 ? 1 : -1;
                    for (int q = 0; q < 2; ++q) {
                        const Real sq = q == 0 ? 1 : -1;
                        if (parity_of(n, Parity(p)) * parity_of(kind) * parity_of(m, Parity(q)) < 0) {
                            t(p * N + n, q * N + m) = 0.0;
                            continue;
                        }
                        const Real v = prim[0][0] + sq * prim[0][1] + sp * prim[1][0] +
                                       sp * sq * prim[1][1];
                        t(p * N + n, q * N + m) =
                            static_cast<double>(cnorm[p][n] * cnorm[q][m] * v);
                    }
                }
            }
        }
        out[kind] = std::move(t);
    }
    return out;
}

inline YTables make_y_tables(const BasisSpec& spec) {
    validate(spec);
    using detail::Real;
    const int L = spec.L;
    const Real mu = spec.mu;
    YTables out;
    for (YKind kind : all_y_kinds) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(L, L);
        for (int l = 0; l < L; ++l) {
            const auto ket = detail::apply_y_kind(kind, l, mu);
            for (int k = 0; k < L && k < static_cast<int>(ket.size()); ++k)
                t(k, l) = static_cast<double>(ket[k]);
        }
        out[kind] = std::move(t);
    }
    return out;
}

struct ZState {
    int n = 0;
    Parity p = Parity::plus;
};

/// <psi_n^p | kind | psi_m^q> over z'.
inline double op_element_z(ZKind kind, ZState bra, ZState ket, const BasisSpec& spec) {
    using detail::Real;
    validate(spec);
    if (bra.n < 0 || ket.n < 0 || bra.n >= spec.N || ket.n >= spec.N)
        throw ParameterError("z quantum number out of range");
    if (parity_of(bra.n, bra.p) * parity_of(kind) * parity_of(ket.n, ket.p) < 0) return 0.0;
    const Real eta = spec.eta;
    const std::array<Real, 2> centres = {1, -1};
    const int reach = ket.n + detail::max_ladder_reach;
    Real acc = 0;
    for (int b = 0; b < 2; ++b) {
        const auto k = detail::apply_z_kind(kind, ket.n, eta, centres[b]);
        const Real sb = b == 0 ? 1 : static_cast<Real>(sign(ket.p));
        for (int a = 0; a < 2; ++a) {
            const auto o = detail::displaced_overlaps(bra.n, reach, eta, centres[a], centres[b]);
            const Real sa = a == 0 ? 1 : static_cast<Real>(sign(bra.p));
            acc += sa * sb * detail::contract(o[bra.n], k);
        }
    }
    return normalization(bra.n, bra.p, spec) * normalization(ket.n, ket.p, spec) *
           static_cast<double>(acc);
}

/// <phi_k | kind | phi_l> over y'.
inline double op_element_y(YKind kind, int k, int l, const BasisSpec& spec) {
    validate(spec);
    if (k < 0 || l < 0 || k >= spec.L || l >= spec.L)
        throw ParameterError("y quantum number out of range");
    const auto ket = detail::apply_y_kind(kind, l, spec.mu);
    return k < static_cast<int>(ket.size()) ? static_cast<double>(ket[k]) : 0.0;
}

/// Oscillator function N_n H_n(w (x - c)) exp(-w^2 (x - c)^2 / 2), unit-normalised.
inline double oscillator_function(int n, double width, double centre, double x) {
    const double u = width * (x - centre);
    // normalisation computed in log space to stay finite for large n
    const double log_norm = 0.5 * (std::log(width) - n * std::numbers::ln2 -
                                   std::lgamma(n + 1.0) - 0.5 * std::log(std::numbers::pi));
    return std::exp(log_norm - 0.5 * u * u) * hermite(n, u);
}

/// psi_n^p(z') of the basis.
inline double z_function(int n, Parity p, const BasisSpec& spec, double zp) {
    return normalization(n, p, spec) *
           (oscillator_function(n, spec.eta, 1.0, zp) +
            sign(p) * oscillator_function(n, spec.eta, -1.0, zp));
}

} // namespace hybridq

#endif // HYBRIDQ_BASIS_HPP
