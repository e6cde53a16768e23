#ifndef HYBRIDQ_DENSE_EIGEN_HPP
#define HYBRIDQ_DENSE_EIGEN_HPP

// Thin LAPACK-backed kernels for the dense Hermitian (generalized) eigenproblem.

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>

#include <Eigen/Dense>
#include <lapacke.h>

#include "hybridq/error.hpp"

namespace hybridq::dense {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct EigenPairs {
    Eigen::VectorXd values;     ///< ascending
    Matrix<Scalar> vectors;     ///< columns
};

/// Lowest `count` eigenpairs of a Hermitian matrix (lower triangle referenced).
template <typename Scalar>
EigenPairs<Scalar> hermitian_lowest(Matrix<Scalar> a, int count) {
    const auto n = static_cast<lapack_int>(a.rows());
    count = std::clamp(count, 1, static_cast<int>(n));
    EigenPairs<Scalar> out;
    out.values.resize(n);
    out.vectors.resize(n, count);
    Eigen::Matrix<lapack_int, Eigen::Dynamic, 1> support(2 * std::max<lapack_int>(count, 1));
    lapack_int found = 0;
    lapack_int info = 0;
    if constexpr (std::is_same_v<Scalar, double>) {
        info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, count,
                              0.0, &found, out.values.data(), out.vectors.data(), n,
                              support.data());
    } else {
        static_assert(std::is_same_v<Scalar, std::complex<double>>);
        info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0, 1,
                              count, 0.0, &found, out.values.data(),
                              reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
                              support.data());
    }
    if (info != 0 || found != count)
        throw Error("Hermitian eigensolver failed (info=" + std::to_string(info) + ")");
    out.values.conservativeResize(count);
    return out;
}

/// In-place lower Cholesky factor of a real SPD matrix; returns the failing
/// leading-minor order (0 on success).
inline int cholesky_lower(Eigen::MatrixXd& s) {
    const auto n = static_cast<lapack_int>(s.rows());
    const lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, s.data(), n);
    if (info < 0) throw Error("dpotrf: invalid argument");
    s.triangularView<Eigen::StrictlyUpper>().setZero();
    return static_cast<int>(info);
}

/// All eigenvalues (ascending) and vectors of a real symmetric matrix.
inline EigenPairs<double> symmetric_full(Eigen::MatrixXd a) {
    const auto n = static_cast<lapack_int>(a.rows());
    EigenPairs<double> out;
    out.values.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.values.data());
    if (info != 0) throw Error("dsyevd failed (info=" + std::to_string(info) + ")");
    out.vectors = std::move(a);
    return out;
}

enum class Reduction { cholesky, canonical };

template <typename Scalar>
struct GeneralizedResult {
    EigenPairs<Scalar> pairs;
    Reduction reduction = Reduction::cholesky;
    int retained = 0; ///< dimension of the orthogonalised space
};

/// Canonical orthogonalisation: S = U diag(s) U^T, keep s_i > cutoff * max(s),
/// X = U_k diag(s_k)^-1/2, solve X^T H X and back-transform with X.
template <typename Scalar>
GeneralizedResult<Scalar> canonical_lowest(const Matrix<Scalar>& h, const Eigen::MatrixXd& s, int count,
                                           double cutoff) {
    GeneralizedResult<Scalar> res;
    const auto se = symmetric_full(s);
    const double smax = se.values.maxCoeff();
    int first = 0;
    while (first < se.values.size() && !(se.values[first] > cutoff * smax)) ++first;
    const int kept = static_cast<int>(se.values.size()) - first;
    if (kept < 1) throw IllConditionedBasisError("overlap has no retained directions", se.values[0]);
    Eigen::MatrixXd xr = se.vectors.rightCols(kept);
    for (int j = 0; j < kept; ++j) xr.col(j) /= std::sqrt(se.values[first + j]);
    const Matrix<Scalar> xs = xr.template cast<Scalar>();
    Matrix<Scalar> c = xs.adjoint() * h * xs;
    res.pairs = hermitian_lowest<Scalar>(std::move(c), std::min(count, kept));
    res.pairs.vectors = xs * res.pairs.vectors;
    res.reduction = Reduction::canonical;
    res.retained = kept;
    return res;
}

/// Lowest eigenpairs of H c = E S c with S real symmetric positive definite.
///
/// Cholesky S = L L^T, standard problem for L^-1 H L^-T, c = L^-T v. When the
/// factorisation breaks down and `canonical_cutoff` is set, falls back to
/// canonical orthogonalisation.
template <typename Scalar>
GeneralizedResult<Scalar> generalized_lowest(const Matrix<Scalar>& h, const Eigen::MatrixXd& s,
                                             int count,
                                             std::optional<double> canonical_cutoff = {}) {
    GeneralizedResult<Scalar> res;
    Eigen::MatrixXd l = s;
    const int fail = cholesky_lower(l);
    if (fail == 0) {
        const auto n = static_cast<lapack_int>(s.rows());
        Matrix<Scalar> c = h;
        lapack_int info = 0;
        if constexpr (std::is_same_v<Scalar, double>) {
            info = LAPACKE_dsygst(LAPACK_COL_MAJOR, 1, 'L', n, c.data(), n, l.data(), n);
        } else {
            Matrix<Scalar> lc = l.template cast<Scalar>();
            info = LAPACKE_zhegst(LAPACK_COL_MAJOR, 1, 'L', n,
                                  reinterpret_cast<lapack_complex_double*>(c.data()), n,
                                  reinterpret_cast<lapack_complex_double*>(lc.data()), n);
        }
        if (info != 0) throw Error("reduction to standard form failed");
        res.pairs = hermitian_lowest<Scalar>(std::move(c), count);
        // c = L^-T v, solved separately on real and imaginary parts since L is real
        const auto lt = l.transpose().template triangularView<Eigen::Upper>();
        if constexpr (std::is_same_v<Scalar, double>) {
            lt.solveInPlace(res.pairs.vectors);
        } else {
            Eigen::MatrixXd re = res.pairs.vectors.real(), im = res.pairs.vectors.imag();
            lt.solveInPlace(re);
            lt.solveInPlace(im);
            res.pairs.vectors.real() = re;
            res.pairs.vectors.imag() = im;
        }
        res.reduction = Reduction::cholesky;
        res.retained = static_cast<int>(s.rows());
        return res;
    }
    if (!canonical_cutoff)
        throw IllConditionedBasisError("Cholesky factorisation of the overlap failed at order " +
                                           std::to_string(fail),
                                       l(fail - 1, fail - 1));
    return canonical_lowest<Scalar>(h, s, count, *canonical_cutoff);
}

} // namespace hybridq::dense

#endif // HYBRIDQ_DENSE_EIGEN_HPP
