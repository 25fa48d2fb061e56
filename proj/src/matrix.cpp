#include "slr/matrix.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace slr {

Matrix makeMatrix(Index rows, Index cols, std::span<const double> rowMajor) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("makeMatrix: dimensions must be positive");
    if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != rowMajor.size())
        throw std::invalid_argument("makeMatrix: entry count does not match rows * cols");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            double value = rowMajor[static_cast<std::size_t>(i * cols + j)];
            if (!std::isfinite(value))
                throw std::invalid_argument("makeMatrix: non-finite entry at (" +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
            m(i, j) = value;
        }
    return m;
}

bool allFinite(const Matrix& m) { return m.allFinite(); }

void requireFinite(const Matrix& m, std::string_view what) {
    if (!m.allFinite())
        throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
}

double l1Norm(const Matrix& m) {
    requireFinite(m, "l1Norm");
    return m.cwiseAbs().sum();
}

double linfNorm(const Matrix& m) {
    requireFinite(m, "linfNorm");
    return m.cwiseAbs().maxCoeff();
}

namespace {

struct RawSvd {
    Matrix u, v;
    Vector sigma;
};

// BDCSVD can emit NaN factors with a Success status when the spectrum is
// heavily clustered; fall back to the slower, robust Jacobi variant whenever
// its output is not finite.
RawSvd rawSvd(const Matrix& m, bool wantUv) {
    unsigned options = wantUv ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
    {
        Eigen::BDCSVD<Matrix> dec(m, options);
        bool ok = dec.info() == Eigen::Success && dec.singularValues().allFinite() &&
                  (!wantUv || (dec.matrixU().allFinite() && dec.matrixV().allFinite()));
        if (ok) {
            RawSvd out;
            out.sigma = dec.singularValues();
            if (wantUv) {
                out.u = dec.matrixU();
                out.v = dec.matrixV();
            }
            return out;
        }
    }
    Eigen::JacobiSVD<Matrix> dec(m, options);
    if (dec.info() != Eigen::Success || !dec.singularValues().allFinite())
        throw std::runtime_error("svd: factorization did not converge");
    RawSvd out;
    out.sigma = dec.singularValues();
    if (wantUv) {
        out.u = dec.matrixU();
        out.v = dec.matrixV();
    }
    return out;
}

}  // namespace

double spectralNorm(const Matrix& m) {
    requireFinite(m, "spectralNorm");
    return rawSvd(m, false).sigma(0);
}

double nuclearNorm(const Matrix& m) {
    requireFinite(m, "nuclearNorm");
    return rawSvd(m, false).sigma.sum();
}

double defaultRankTol(const Matrix& m) {
    return static_cast<double>(std::max(m.rows(), m.cols())) *
           std::numeric_limits<double>::epsilon();
}

SvdResult svd(const Matrix& m, double rankTol) {
    requireFinite(m, "svd");
    if (!(rankTol >= 0))
        throw std::invalid_argument("svd: rankTol must be nonnegative");
    RawSvd dec = rawSvd(m, true);
    const Vector& sigma = dec.sigma;
    double cutoff = sigma.size() > 0 ? rankTol * sigma(0) : 0.0;
    Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cutoff && sigma(rank) > 0) ++rank;
    SvdResult out;
    out.u = dec.u.leftCols(rank);
    out.singularValues = sigma.head(rank);
    out.v = dec.v.leftCols(rank);
    out.numericalRank = rank;
    return out;
}

SvdResult svd(const Matrix& m) { return svd(m, defaultRankTol(m)); }

SupportPattern supportOf(const Matrix& m, double zeroTol) {
    requireFinite(m, "supportOf");
    if (zeroTol < 0) throw std::invalid_argument("supportOf: zeroTol must be nonnegative");
    SupportPattern out;
    out.rows = m.rows();
    out.cols = m.cols();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > zeroTol) out.indices.emplace_back(i, j);
    return out;
}

Matrix indicatorMatrix(const SupportPattern& omega) {
    if (omega.rows <= 0 || omega.cols <= 0)
        throw std::invalid_argument("indicatorMatrix: empty ambient shape");
    Matrix m = Matrix::Zero(omega.rows, omega.cols);
    for (auto [i, j] : omega.indices) {
        if (i < 0 || i >= omega.rows || j < 0 || j >= omega.cols)
            throw std::invalid_argument("indicatorMatrix: index outside ambient shape");
        m(i, j) = 1.0;
    }
    return m;
}

Matrix signMatrix(const Matrix& m, double zeroTol) {
    requireFinite(m, "signMatrix");
    if (zeroTol < 0) throw std::invalid_argument("signMatrix: zeroTol must be nonnegative");
    Matrix s = Matrix::Zero(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > zeroTol) s(i, j) = m(i, j) > 0 ? 1.0 : -1.0;
    return s;
}

}  // namespace slr
