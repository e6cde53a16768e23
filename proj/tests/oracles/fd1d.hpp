#ifndef HYBRIDQ_TEST_ORACLE_FD1D_HPP
#define HYBRIDQ_TEST_ORACLE_FD1D_HPP

// Finite-difference reference for the scaled 1D double well:
// -(r_a/2) d^2/dz^2 + c (z^2-1)^2 - gamma z, c = (a/b)^2 / (8 r_a),
// Dirichlet box, 3-point Laplacian, Richardson extrapolation h -> h/2.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace oracle {

struct Fd1dProblem {
    double r_a = 0.07;
    double ab_ratio = 1.0;
    double gamma = 0.0;
};

inline double fd1d_potential(const Fd1dProblem& p, double z) {
    const double q = z * z - 1.0;
    return p.ab_ratio * q * q / (8.0 * p.r_a) - p.gamma * z;
}

/// Lowest `count` eigenvalues on [-half_width, half_width] with `points` interior nodes.
inline std::vector<double> fd1d_levels(const Fd1dProblem& p, double half_width, int points, int count) {
    const double h = 2.0 * half_width / (points + 1);
    Eigen::VectorXd diag(points), off(points - 1);
    for (int i = 0; i < points; ++i) {
        const double z = -half_width + (i + 1) * h;
        diag[i] = p.r_a / (h * h) + fd1d_potential(p, z);
    }
    off.setConstant(-0.5 * p.r_a / (h * h));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = es.eigenvalues()[k];
    return out;
}

/// Box half-width: at least 3, wide enough that the WKB decay from the
/// outer turning point of level `count` exceeds exp(-30).
inline double fd1d_box(const Fd1dProblem& p, int count) {
    const auto coarse = fd1d_levels(p, 12.0, 3000, count);
    const double e = coarse.back() + 1.0;
    double z = 1.0;
    while (fd1d_potential(p, z) < e) z += 1e-3;
    double action = 0.0, x = z;
    const double dz = 1e-3;
    while (action < 30.0 && x < 50.0) {
        action += std::sqrt(2.0 * std::max(0.0, fd1d_potential(p, x) - e) / p.r_a) * dz;
        x += dz;
    }
    return std::max(3.0, x);
}

/// Richardson-extrapolated eigenvalues; the coarse grid has at least 4000 nodes.
inline std::vector<double> fd1d_reference(const Fd1dProblem& p, int count, int points = 4000) {
    const double half = fd1d_box(p, count);
    const int n1 = std::max(points, static_cast<int>(std::ceil(2.0 * half / 1.5e-3)));
    const auto e1 = fd1d_levels(p, half, n1, count);
    const auto e2 = fd1d_levels(p, half, 2 * n1 + 1, count); // h exactly halved
    std::vector<double> out(static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (4.0 * e2[k] - e1[k]) / 3.0;
    return out;
}

} // namespace oracle

#endif // HYBRIDQ_TEST_ORACLE_FD1D_HPP
