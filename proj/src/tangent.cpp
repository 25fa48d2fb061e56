#include "slr/tangent.hpp"

#include "slr/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slr {

namespace {

void requireShape(const Matrix& m, Index rows, Index cols, const char* what) {
    if (m.rows() != rows || m.cols() != cols)
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

void requireOrthonormal(const Matrix& basis, const char* what) {
    if (basis.cols() > basis.rows())
        throw std::invalid_argument(std::string(what) + ": more columns than rows");
    if (basis.cols() == 0) return;
    Matrix gram = basis.transpose() * basis;
    double defect = (gram - Matrix::Identity(basis.cols(), basis.cols()))
                        .cwiseAbs()
                        .maxCoeff();
    if (defect > 1e-8)
        throw std::invalid_argument(std::string(what) +
                                    ": basis is not orthonormal (defect " +
                                    std::to_string(defect) + ")");
}

// Largest row norm of an orthonormal basis: since P_S e_i = Q Q' e_i and Q has
// orthonormal columns, ||P_S e_i||_2 equals the norm of the i-th row of Q.
double maxRowNorm(const Matrix& basis) {
    return std::sqrt(basis.rowwise().squaredNorm().maxCoeff());
}

// Orthogonal matrix whose first column and first row both equal the given
// unit vector (a Householder reflection, hence symmetric).
Matrix reflectionWithFirstColumn(const Vector& unit) {
    Index n = unit.size();
    Vector p = Vector::Unit(n, 0) - unit;
    double pp = p.squaredNorm();
    if (pp < 1e-30) return Matrix::Identity(n, n);
    return Matrix::Identity(n, n) - (2.0 / pp) * (p * p.transpose());
}

Matrix randomTangentElement(const TangentSpaceLR& t, SplitMix64& rng) {
    Index k = t.rank();
    Matrix x(t.cols(), k), y(t.rows(), k);
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < k; ++j) x(i, j) = rng.gaussian();
    for (Index i = 0; i < y.rows(); ++i)
        for (Index j = 0; j < k; ++j) y(i, j) = rng.gaussian();
    return t.u * x.transpose() + y * t.v.transpose();
}

}  // namespace

TangentSpaceLR tangentSpaceOf(const Matrix& b, double rankTol) {
    SvdResult dec = rankTol < 0 ? svd(b) : svd(b, rankTol);
    return TangentSpaceLR{std::move(dec.u), std::move(dec.v)};
}

Matrix projectOmega(const Matrix& m, const SupportPattern& omega) {
    requireFinite(m, "projectOmega");
    requireShape(m, omega.rows, omega.cols, "projectOmega");
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (auto [i, j] : omega.indices) out(i, j) = m(i, j);
    return out;
}

Matrix projectOmegaComplement(const Matrix& m, const SupportPattern& omega) {
    requireFinite(m, "projectOmegaComplement");
    requireShape(m, omega.rows, omega.cols, "projectOmegaComplement");
    Matrix out = m;
    for (auto [i, j] : omega.indices) out(i, j) = 0.0;
    return out;
}

Matrix projectT(const Matrix& m, const TangentSpaceLR& t) {
    requireFinite(m, "projectT");
    requireShape(m, t.rows(), t.cols(), "projectT");
    if (t.rank() == 0) return Matrix::Zero(m.rows(), m.cols());
    Matrix utm = t.u.transpose() * m;   // k x n2
    Matrix mv = m * t.v;                // n1 x k
    // P_U M + M P_V - P_U M P_V, with the shared k-dim pieces factored out.
    return t.u * utm + (mv - t.u * (utm * t.v)) * t.v.transpose();
}

Matrix projectTPerp(const Matrix& m, const TangentSpaceLR& t) {
    requireFinite(m, "projectTPerp");
    requireShape(m, t.rows(), t.cols(), "projectTPerp");
    if (t.rank() == 0) return m;
    // (I - P_U) M (I - P_V)
    Matrix left = m - t.u * (t.u.transpose() * m);
    return left - (left * t.v) * t.v.transpose();
}

double muExact(const SupportPattern& omega) {
    if (omega.empty()) throw std::invalid_argument("muExact: empty support");
    Matrix ind = indicatorMatrix(omega);
    // Work with the smaller Gram factor; its entries are exact small integers.
    Matrix gram = ind.rows() <= ind.cols() ? Matrix(ind * ind.transpose())
                                           : Matrix(ind.transpose() * ind);
    double lambda;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() == Eigen::Success) {
        lambda = eig.eigenvalues().maxCoeff();
    } else {
        double s = spectralNorm(ind);
        lambda = s * s;
    }
    // The top eigenvalue of an entrywise-nonnegative matrix lies between its
    // smallest and largest row sums. The Gram row sums are exact integers
    // (bounded by the squared max degree and, when no row or column of the
    // support is empty, bounded below by the squared min degree), so clamping
    // removes the eigensolver's last-ulp rounding and keeps the degree
    // sandwich on the returned value exact.
    Vector rowSums = gram.rowwise().sum();
    lambda = std::clamp(lambda, rowSums.minCoeff(), rowSums.maxCoeff());
    return std::sqrt(std::max(lambda, 0.0));
}

DegreeSummary degrees(const SupportPattern& omega) {
    if (omega.empty()) throw std::invalid_argument("degrees: empty support");
    std::vector<Index> rowCount(static_cast<std::size_t>(omega.rows), 0);
    std::vector<Index> colCount(static_cast<std::size_t>(omega.cols), 0);
    for (auto [i, j] : omega.indices) {
        if (i < 0 || i >= omega.rows || j < 0 || j >= omega.cols)
            throw std::invalid_argument("degrees: index outside ambient shape");
        ++rowCount[static_cast<std::size_t>(i)];
        ++colCount[static_cast<std::size_t>(j)];
    }
    DegreeSummary out;
    out.degMin = static_cast<Index>(omega.size());
    out.degMax = 0;
    for (auto counts : {&rowCount, &colCount})
        for (Index c : *counts) {
            if (c == 0) {
                out.degenerate = true;
                continue;
            }
            out.degMin = std::min(out.degMin, c);
            out.degMax = std::max(out.degMax, c);
        }
    return out;
}

double beta(const Matrix& basis) {
    requireFinite(basis, "beta");
    if (basis.cols() == 0) throw std::invalid_argument("beta: empty basis");
    requireOrthonormal(basis, "beta");
    return maxRowNorm(basis);
}

double incoherence(const TangentSpaceLR& t) {
    if (t.rank() == 0) throw std::invalid_argument("incoherence: rank-0 tangent space");
    return std::max(beta(t.u), beta(t.v));
}

XiBounds xiBounds(const TangentSpaceLR& t) {
    double inc = incoherence(t);
    return XiBounds{inc, 2.0 * inc};
}

double xiSampledLower(const TangentSpaceLR& t, int samples, std::uint64_t seed) {
    if (samples < 0) throw std::invalid_argument("xiSampledLower: samples must be >= 0");
    if (t.rank() == 0) throw std::invalid_argument("xiSampledLower: rank-0 tangent space");

    double best = 0.0;

    // Witness aligned with the worst row of u: an orthogonal M whose first
    // column is the normalized projection of that coordinate axis. P_U M then
    // has spectral norm exactly 1 and largest entry exactly beta(u); the
    // analogous row-aligned witness does the same for v.
    Index shared = std::min(t.rows(), t.cols());
    {
        Index iStar = 0;
        t.u.rowwise().squaredNorm().maxCoeff(&iStar);
        Vector w = t.u * t.u.row(iStar).transpose();
        double norm = w.norm();
        if (norm > 0) {
            Matrix reflector = reflectionWithFirstColumn(w / norm);  // n1 x n1
            Matrix witness = Matrix::Zero(t.rows(), t.cols());
            witness.leftCols(shared) = reflector.leftCols(shared);
            Matrix n = t.u * (t.u.transpose() * witness);
            double spec = spectralNorm(n);
            if (spec > 0) best = std::max(best, linfNorm(n) / spec);
        }
    }
    {
        Index jStar = 0;
        t.v.rowwise().squaredNorm().maxCoeff(&jStar);
        Vector w = t.v * t.v.row(jStar).transpose();
        double norm = w.norm();
        if (norm > 0) {
            Matrix reflector = reflectionWithFirstColumn(w / norm);  // n2 x n2
            Matrix witness = Matrix::Zero(t.rows(), t.cols());
            witness.topRows(shared) = reflector.topRows(shared);
            Matrix n = (witness * t.v) * t.v.transpose();
            double spec = spectralNorm(n);
            if (spec > 0) best = std::max(best, linfNorm(n) / spec);
        }
    }

    SplitMix64 rng = streamRng(seed, RngStream::XiSamples);
    for (int s = 0; s < samples; ++s) {
        Matrix n = randomTangentElement(t, rng);
        double spec = spectralNorm(n);
        if (spec > 0) best = std::max(best, linfNorm(n) / spec);
    }
    return best;
}

double transversalitySigma(const SupportPattern& omega, const TangentSpaceLR& t,
                           int iters) {
    if (iters < 1) throw std::invalid_argument("transversalitySigma: iters must be >= 1");
    if (omega.rows != t.rows() || omega.cols != t.cols())
        throw std::invalid_argument("transversalitySigma: shape mismatch");
    if (t.rank() == 0 || omega.empty()) return 0.0;

    // Power iteration on the self-adjoint contraction N -> P_T P_Omega P_T N
    // over T; its top eigenvalue is sigma^2.
    SplitMix64 rng = streamRng(0x5ca1ab1e, RngStream::PowerIterationStart);
    Matrix n = projectT(randomTangentElement(t, rng), t);
    double norm = n.norm();
    if (norm == 0) return 0.0;
    n /= norm;

    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Matrix mapped = projectT(projectOmega(projectT(n, t), omega), t);
        double rayleigh = (n.array() * mapped.array()).sum();
        double mappedNorm = mapped.norm();
        if (mappedNorm == 0) return 0.0;
        n = mapped / mappedNorm;
        if (it > 0 && std::abs(rayleigh - lambda) < 1e-10) {
            lambda = rayleigh;
            break;
        }
        lambda = rayleigh;
    }
    return std::sqrt(std::max(0.0, lambda));
}

}  // namespace slr
