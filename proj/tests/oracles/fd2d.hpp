#ifndef HYBRIDQ_TEST_ORACLE_FD2D_HPP
#define HYBRIDQ_TEST_ORACLE_FD2D_HPP

// Finite-difference reference for the scaled two-component (spinor)
// Hamiltonian on a Dirichlet box in (z', y'):
//   -(r_a/2)(d_zz + d_yy) + c (z^2-1)^2 - gamma z + (r_c^2/(2 r_a))(y^2/4 + beta^2 z^4)
//   - i r_c beta z^2 d_y - (r_c/2)(2 beta z sigma_x + sigma_z),  c = (a/b)^2 / (8 r_a).
// Second-order central differences in both directions; the lowest levels
// come from shift-invert block subspace iteration with Rayleigh-Ritz
// projection, then Richardson extrapolation between h and h/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace oracle {

struct Fd2dProblem {
    double r_a = 0.0688, r_c = 0.0471, beta = 2.0, ab_ratio = 1.0, gamma = -1e-3;
};

struct Fd2dGrid {
    double z_half = 2.2, y_half = 11.0;
    int nz = 109, ny = 87; ///< interior nodes
};

using SpMat = Eigen::SparseMatrix<std::complex<double>>;

inline SpMat fd2d_operator(const Fd2dProblem& p, const Fd2dGrid& g) {
    using C = std::complex<double>;
    const double hz = 2.0 * g.z_half / (g.nz + 1), hy = 2.0 * g.y_half / (g.ny + 1);
    const int nsp = g.nz * g.ny;
    auto id = [&](int s, int i, int j) { return s * nsp + i * g.ny + j; };
    std::vector<Eigen::Triplet<C>> t;
    t.reserve(static_cast<std::size_t>(2 * nsp * 8));
    const double kz = 0.5 * p.r_a / (hz * hz), ky = 0.5 * p.r_a / (hy * hy);
    const double dia = p.r_c * p.r_c / (2.0 * p.r_a);
    for (int i = 0; i < g.nz; ++i) {
        const double z = -g.z_half + (i + 1) * hz;
        const double q = z * z - 1.0;
        const double vz = p.ab_ratio * q * q / (8.0 * p.r_a) - p.gamma * z + dia * p.beta * p.beta * z * z * z * z;
        const double para = p.r_c * p.beta * z * z / (2.0 * hy); // -i para (psi_{j+1} - psi_{j-1})
        const double sx = -p.r_c * p.beta * z;
        for (int j = 0; j < g.ny; ++j) {
            const double y = -g.y_half + (j + 1) * hy;
            for (int s = 0; s < 2; ++s) {
                const double sz = s == 0 ? -0.5 * p.r_c : 0.5 * p.r_c;
                const int r = id(s, i, j);
                t.emplace_back(r, r, C(2.0 * kz + 2.0 * ky + vz + dia * y * y / 4.0 + sz, 0.0));
                if (i > 0) t.emplace_back(r, id(s, i - 1, j), C(-kz, 0.0));
                if (i + 1 < g.nz) t.emplace_back(r, id(s, i + 1, j), C(-kz, 0.0));
                if (j > 0) t.emplace_back(r, id(s, i, j - 1), C(-ky, para));
                if (j + 1 < g.ny) t.emplace_back(r, id(s, i, j + 1), C(-ky, -para));
                t.emplace_back(r, id(1 - s, i, j), C(sx, 0.0));
            }
        }
    }
    SpMat h(2 * nsp, 2 * nsp);
    h.setFromTriplets(t.begin(), t.end());
    return h;
}

/// Lowest `count` eigenvalues of the discrete operator; `shift` must lie below the spectrum.
inline std::vector<double> fd2d_levels(const Fd2dProblem& p, const Fd2dGrid& g, int count, double shift,
                                       int block = 12, double tol = 1e-12, int max_iter = 500) {
    using C = std::complex<double>;
    SpMat a = fd2d_operator(p, g);
    const auto n = a.rows();
    SpMat sh(n, n);
    sh.setIdentity();
    a -= C(shift) * sh;
    Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> llt(a);
    if (llt.info() != Eigen::Success) throw std::runtime_error("fd2d: shift is not below the spectrum");

    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, block);
    for (int k = 0; k < block; ++k)
        for (Eigen::Index r = 0; r < n; ++r)
            x(r, k) = C(std::cos(0.37 * (r + 1) * (k + 1)), std::sin(0.11 * (r + 3) * (k + 2)));
    std::vector<double> prev(static_cast<std::size_t>(count), 0.0), cur(prev);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
        const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, block);
        Eigen::MatrixXcd y(n, block);
        for (int k = 0; k < block; ++k) y.col(k) = llt.solve(q.col(k));
        // Rayleigh-Ritz for (A - shift)^-1: eigenvalues theta = 1 / (E - shift)
        Eigen::MatrixXcd m = q.adjoint() * y;
        m = (0.5 * (m + m.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        x = y * es.eigenvectors().rowwise().reverse();
        for (int k = 0; k < count; ++k)
            cur[static_cast<std::size_t>(k)] = shift + 1.0 / es.eigenvalues()[block - 1 - k];
        double change = 0.0;
        for (int k = 0; k < count; ++k)
            change = std::max(change, std::abs(cur[static_cast<std::size_t>(k)] - prev[static_cast<std::size_t>(k)]));
        prev = cur;
        if (it > 2 && change < tol) break;
    }
    return cur;
}

/// Richardson extrapolation between the given grid and the grid with both steps halved.
inline std::vector<double> fd2d_reference(const Fd2dProblem& p, const Fd2dGrid& g, int count, double shift) {
    Fd2dGrid fine = g;
    fine.nz = 2 * g.nz + 1;
    fine.ny = 2 * g.ny + 1;
    const auto e1 = fd2d_levels(p, g, count, shift);
    const auto e2 = fd2d_levels(p, fine, count, shift);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (4.0 * e2[k] - e1[k]) / 3.0;
    return out;
}

} // namespace oracle

#endif // HYBRIDQ_TEST_ORACLE_FD2D_HPP
