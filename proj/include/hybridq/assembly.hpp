#ifndef HYBRIDQ_ASSEMBLY_HPP
#define HYBRIDQ_ASSEMBLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridq/basis.hpp"
#include "hybridq/error.hpp"
#include "hybridq/model.hpp"

namespace hybridq {

using Complex = std::complex<double>;

/// One spatial operator written as a sum of products (y-factor) x (z-factor).
struct SeparableTerm {
    Complex weight;
    const Eigen::MatrixXd* y;
    const Eigen::MatrixXd* z;
};

/// Dense spatial matrix, rows/cols ordered (p, k, n) as within one spin block.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron_spatial(const std::vector<SeparableTerm>& terms, const BasisSpec& spec) {
    const int L = spec.L, N = spec.N;
    const Eigen::Index dim = static_cast<Eigen::Index>(spec.spatial_dimension());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
    for (const auto& t : terms) {
        Scalar w;
        if constexpr (std::is_same_v<Scalar, double>) w = t.weight.real();
        else w = t.weight;
        for (int q = 0; q < 2; ++q)
            for (int l = 0; l < L; ++l)
                for (int k = 0; k < L; ++k) {
                    const double yv = (*t.y)(k, l);
                    if (yv == 0.0) continue;
                    for (int p = 0; p < 2; ++p)
                        for (int m = 0; m < N; ++m) {
                            const Eigen::Index col = (q * L + l) * N + m;
                            const Eigen::Index row0 = (p * L + k) * N;
                            for (int n = 0; n < N; ++n)
                                out(row0 + n, col) += w * (yv * (*t.z)(p * N + n, q * N + m));
                        }
                }
    }
    return out;
}

/// (Y x Z) v for a spin-block vector ordered (p, k, n).
template <typename Vec>
Eigen::Matrix<typename Vec::Scalar, Eigen::Dynamic, 1>
apply_spatial(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z, const Vec& v, const BasisSpec& spec) {
    using Scalar = typename Vec::Scalar;
    using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const int L = spec.L, N = spec.N;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(v.size());
    for (int q = 0; q < 2; ++q) {
        const RowMat vq = Eigen::Map<const RowMat>(v.data() + q * L * N, L, N);
        const RowMat wq = y.template cast<Scalar>() * vq;
        for (int p = 0; p < 2; ++p) {
            Eigen::Map<RowMat> rp(out.data() + p * L * N, L, N);
            rp += wq * z.block(p * N, q * N, N, N).transpose().template cast<Scalar>();
        }
    }
    return out;
}

/// Hamiltonian and overlap of the scaled spin Hamiltonian in the 4LN basis.
///
/// Spin ordering is (up, down) with sigma_z = diag(+1, -1), so H has the block
/// form [[H0 + H2, H1], [H1, H0 - H2]] with H2 = -(r_c / 2) S_spatial and
/// H1 = -r_c beta Z.
struct SpectralProblem {
    Eigen::MatrixXcd H;
    Eigen::MatrixXd S;
    BasisSpec spec;
    ScaledParams scaled;
    std::shared_ptr<const ZTables> z_tables;
    std::shared_ptr<const YTables> y_tables;
    double overlap_min_eigenvalue = 0.0;
    double overlap_max_eigenvalue = 0.0;

    std::size_t dimension() const { return static_cast<std::size_t>(S.rows()); }
    double overlap_condition() const { return overlap_max_eigenvalue / overlap_min_eigenvalue; }
};

struct OneDimensionalTables {
    std::shared_ptr<const ZTables> z;
    std::shared_ptr<const YTables> y;
};

inline OneDimensionalTables make_tables(const BasisSpec& spec) {
    return {std::make_shared<const ZTables>(make_z_tables(spec)),
            std::make_shared<const YTables>(make_y_tables(spec))};
}

/// Relative floor below which the overlap is considered numerically singular.
inline constexpr double overlap_singularity_threshold = 1e-12;

/// Assemble from precomputed one-dimensional tables (reusable across
/// physical parameters at fixed eta, mu, L, N).
inline SpectralProblem assemble(const ScaledParams& sp, const BasisSpec& spec,
                                const OneDimensionalTables& tables) {
    validate(spec);
    if (!(sp.r_a > 0) || !(sp.r_c >= 0) || !(sp.beta >= 0))
        throw ParameterError("scaled parameters out of range");
    const ZTables& zt = *tables.z;
    const YTables& yt = *tables.y;

    // overlap eigenvalues follow from the factors: spec(S) = spec(Y) * spec(Z)
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ze(zt[ZKind::identity], Eigen::EigenvaluesOnly);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ye(yt[YKind::identity], Eigen::EigenvaluesOnly);
    const double smin = ze.eigenvalues().minCoeff() * ye.eigenvalues().minCoeff();
    const double smax = ze.eigenvalues().maxCoeff() * ye.eigenvalues().maxCoeff();
    if (!(smin >= overlap_singularity_threshold * smax)) {
        char ratio[32];
        std::snprintf(ratio, sizeof ratio, "%.3e", smin / smax);
        throw IllConditionedBasisError(std::string("overlap matrix numerically singular (lambda_min / lambda_max = ") +
                                           ratio + ")",
                                       smin);
    }

    const double ra = sp.r_a, rc = sp.r_c, beta = sp.beta;
    const Eigen::MatrixXd kinetic_z_potential =
        -0.5 * ra * zt[ZKind::d2] + (sp.ab_ratio / (8.0 * ra)) * zt[ZKind::quartic] -
        sp.gamma * zt[ZKind::z] + (rc * rc * beta * beta / (2.0 * ra)) * zt[ZKind::z4];
    const Eigen::MatrixXd kinetic_y_diamagnetic =
        -0.5 * ra * yt[YKind::d2] + (rc * rc / (8.0 * ra)) * yt[YKind::y2];

    const auto& y1 = yt[YKind::identity];
    const auto& z1 = zt[ZKind::identity];
    const std::vector<SeparableTerm> h0_terms = {
        {1.0, &y1, &kinetic_z_potential},
        {1.0, &kinetic_y_diamagnetic, &z1},
        {Complex(0.0, -rc * beta), &yt[YKind::d1], &zt[ZKind::z2]},
    };
    const Eigen::MatrixXcd h0 = kron_spatial<Complex>(h0_terms, spec);
    const Eigen::MatrixXd s_sp = kron_spatial<double>({{1.0, &y1, &z1}}, spec);
    const Eigen::MatrixXd h1 = kron_spatial<double>({{-rc * beta, &y1, &zt[ZKind::z]}}, spec);

    const Eigen::Index half = static_cast<Eigen::Index>(spec.spatial_dimension());
    SpectralProblem prob;
    prob.spec = spec;
    prob.scaled = sp;
    prob.z_tables = tables.z;
    prob.y_tables = tables.y;
    prob.overlap_min_eigenvalue = smin;
    prob.overlap_max_eigenvalue = smax;
    prob.H.resize(2 * half, 2 * half);
    prob.H.topLeftCorner(half, half) = h0 - Complex(0.5 * rc) * s_sp.cast<Complex>();
    prob.H.bottomRightCorner(half, half) = h0 + Complex(0.5 * rc) * s_sp.cast<Complex>();
    prob.H.topRightCorner(half, half) = h1.cast<Complex>();
    prob.H.bottomLeftCorner(half, half) = h1.cast<Complex>();
    // exact Hermiticity: mirror the upper triangle
    for (Eigen::Index j = 0; j < prob.H.cols(); ++j) {
        prob.H(j, j) = Complex(prob.H(j, j).real(), 0.0);
        for (Eigen::Index i = j + 1; i < prob.H.rows(); ++i) prob.H(i, j) = std::conj(prob.H(j, i));
    }
    prob.S = Eigen::MatrixXd::Zero(2 * half, 2 * half);
    prob.S.topLeftCorner(half, half) = s_sp;
    prob.S.bottomRightCorner(half, half) = s_sp;
    for (Eigen::Index j = 0; j < prob.S.cols(); ++j)
        for (Eigen::Index i = j + 1; i < prob.S.rows(); ++i) prob.S(i, j) = prob.S(j, i);
    return prob;
}

inline SpectralProblem assemble(const ScaledParams& sp, const BasisSpec& spec) {
    validate(spec);
    return assemble(sp, spec, make_tables(spec));
}

struct ProblemDiagnostics {
    double hermiticity_residual = 0.0;   ///< max |H - H^dagger|
    double overlap_symmetry_residual = 0.0; ///< max |S - S^T|
    double overlap_condition = 0.0;
    double overlap_min_eigenvalue = 0.0;
    double spin_block_residual = 0.0;    ///< deviation from the spin-block structure
    bool ok(double tol = 1e-12) const {
        return hermiticity_residual <= tol && overlap_symmetry_residual <= tol &&
               spin_block_residual <= tol && std::isfinite(overlap_condition) &&
               overlap_min_eigenvalue > 0;
    }
};

inline ProblemDiagnostics validate(const SpectralProblem& prob) {
    ProblemDiagnostics d;
    d.hermiticity_residual = (prob.H - prob.H.adjoint()).cwiseAbs().maxCoeff();
    d.overlap_symmetry_residual = (prob.S - prob.S.transpose()).cwiseAbs().maxCoeff();
    d.overlap_condition = prob.overlap_condition();
    d.overlap_min_eigenvalue = prob.overlap_min_eigenvalue;

    const Eigen::Index half = prob.H.rows() / 2;
    const auto up = prob.H.topLeftCorner(half, half);
    const auto dn = prob.H.bottomRightCorner(half, half);
    const auto ud = prob.H.topRightCorner(half, half);
    const auto du = prob.H.bottomLeftCorner(half, half);
    const auto s_up = prob.S.topLeftCorner(half, half);
    // H2 = (up - dn) / 2 must equal -(r_c / 2) S_spatial, H1 must be real and symmetric in spin
    const Eigen::MatrixXcd h2 = 0.5 * (up - dn);
    double r = (h2 + Complex(0.5 * prob.scaled.r_c) * s_up.cast<Complex>()).cwiseAbs().maxCoeff();
    r = std::max(r, (ud - du).cwiseAbs().maxCoeff());
    r = std::max(r, ud.imag().cwiseAbs().maxCoeff());
    r = std::max(r, prob.S.topRightCorner(half, half).cwiseAbs().maxCoeff());
    r = std::max(r, (prob.S.bottomRightCorner(half, half) - s_up).cwiseAbs().maxCoeff());
    d.spin_block_residual = r;
    return d;
}

} // namespace hybridq

#endif // HYBRIDQ_ASSEMBLY_HPP
