// Independent reference implementations used to validate library results.
// Everything here deliberately avoids the code paths under test: spectral
// norms come from power iteration instead of a direct SVD, proximal values
// from ternary search instead of the closed form, transversality from an
// explicit Gram matrix instead of operator power iteration.
#pragma once

#include "slr/matrix.hpp"
#include "slr/tangent.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace oracle {

using slr::Index;
using slr::Matrix;
using slr::Vector;

/// Largest singular value via power iteration on M' * M with two
/// deterministic starts (the second guards against an unlucky first).
inline double spectralNorm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Matrix gram = m.transpose() * m;
    double best = 0.0;
    for (int start = 0; start < 2; ++start) {
        Vector v(gram.rows());
        for (Index i = 0; i < v.size(); ++i) {
            double base = start == 0 ? 1.0 : (i % 2 ? -1.0 : 1.0);
            v(i) = base + 0.01 * static_cast<double>(i + 1) / static_cast<double>(v.size());
        }
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < 5000; ++it) {
            Vector w = gram * v;
            double norm = w.norm();
            if (norm == 0.0) break;
            w /= norm;
            double next = w.dot(gram * w);
            bool settled = std::abs(next - lambda) <= 1e-15 * std::max(1.0, next);
            lambda = next;
            v = std::move(w);
            if (settled) break;
        }
        best = std::max(best, lambda);
    }
    return std::sqrt(std::max(0.0, best));
}

/// Nuclear norm via Jacobi SVD (the library uses bidiagonal divide & conquer).
inline double nuclearNorm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues().sum();
}

/// argmin_x 0.5 (x - v)^2 + tau |x| by ternary search; the objective is
/// convex, so the bracket shrinks to the minimizer.
inline double scalarProx(double v, double tau) {
    double lo = -(std::abs(v) + tau + 1.0);
    double hi = -lo;
    // f(a) - f(b) in factored form; evaluating the two objectives separately
    // and subtracting loses the sign once |a - b| drops below sqrt(eps).
    auto fDiff = [&](double a, double b) {
        return 0.5 * (a + b - 2.0 * v) * (a - b) + tau * (std::abs(a) - std::abs(b));
    };
    for (int it = 0; it < 300; ++it) {
        double a = lo + (hi - lo) / 3.0;
        double b = hi - (hi - lo) / 3.0;
        if (fDiff(a, b) <= 0)
            hi = b;
        else
            lo = a;
    }
    return 0.5 * (lo + hi);
}

/// Eigenvalues of [[a, b], [b, c]], descending.
inline std::pair<double, double> sym2x2Eigs(double a, double b, double c) {
    double mean = 0.5 * (a + c);
    double radius = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return {mean + radius, mean - radius};
}

/// Full orthonormal extension of a column-orthonormal basis: the first
/// basis.cols() columns span the same space, the rest span the complement.
inline Matrix orthonormalExtension(const Matrix& basis) {
    Eigen::HouseholderQR<Matrix> qr(basis);
    return qr.householderQ() * Matrix::Identity(basis.rows(), basis.rows());
}

/// sigma(omega, T) from the explicit Gram matrix of P_Omega restricted to an
/// orthonormal basis of T. Exact up to the dense symmetric eigensolver.
inline double transversalityGram(const slr::SupportPattern& omega,
                                 const slr::TangentSpaceLR& t) {
    const Index n1 = t.rows(), n2 = t.cols(), k = t.rank();
    if (k == 0) return 0.0;
    Matrix uFull = orthonormalExtension(t.u);
    Matrix vFull = orthonormalExtension(t.v);

    // Orthonormal basis of T: u_a v_b' for a,b < k, then u_a w_c' with w in
    // the row-space complement, then z_d v_b' with z in the column-space
    // complement. Sizes k*k + k*(n2-k) + (n1-k)*k = k*(n1+n2-k) = dim T.
    std::vector<std::pair<Index, Index>> pairs;  // (column of uFull, column of vFull)
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) pairs.emplace_back(a, b);
    for (Index a = 0; a < k; ++a)
        for (Index c = k; c < n2; ++c) pairs.emplace_back(a, c);
    for (Index d = k; d < n1; ++d)
        for (Index b = 0; b < k; ++b) pairs.emplace_back(d, b);

    const auto dim = static_cast<Index>(pairs.size());
    Matrix gram = Matrix::Zero(dim, dim);
    for (Index p = 0; p < dim; ++p)
        for (Index q = p; q < dim; ++q) {
            double sum = 0.0;
            for (const auto& [i, j] : omega.indices)
                sum += uFull(i, pairs[p].first) * vFull(j, pairs[p].second) *
                       uFull(i, pairs[q].first) * vFull(j, pairs[q].second);
            gram(p, q) = gram(q, p) = sum;
        }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

/// Projection onto T by expansion in the same orthonormal basis.
inline Matrix projectTByBasis(const Matrix& m, const slr::TangentSpaceLR& t) {
    const Index n1 = t.rows(), n2 = t.cols(), k = t.rank();
    Matrix out = Matrix::Zero(n1, n2);
    if (k == 0) return out;
    Matrix uFull = orthonormalExtension(t.u);
    Matrix vFull = orthonormalExtension(t.v);
    auto addComponents = [&](Index aLo, Index aHi, Index bLo, Index bHi) {
        for (Index a = aLo; a < aHi; ++a)
            for (Index b = bLo; b < bHi; ++b) {
                Matrix element = uFull.col(a) * vFull.col(b).transpose();
                out += (element.array() * m.array()).sum() * element;
            }
    };
    addComponents(0, k, 0, k);
    addComponents(0, k, k, n2);
    addComponents(k, n1, 0, k);
    return out;
}

/// Sylvester construction: 2^p x 2^p orthogonal-after-scaling sign matrix.
inline Matrix hadamard(int p) {
    Matrix h(1, 1);
    h(0, 0) = 1.0;
    for (int step = 0; step < p; ++step) {
        Matrix next(2 * h.rows(), 2 * h.cols());
        next << h, h, h, -h;
        h = std::move(next);
    }
    return h;
}

/// True when an empirical frequency sits within z standard errors of p.
inline bool withinBinomialBand(long successes, long trials, double p, double z = 3.0) {
    double fraction = static_cast<double>(successes) / static_cast<double>(trials);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return std::abs(fraction - p) <= z * se;
}

}  // namespace oracle
