#pragma once

#include "slr/matrix.hpp"

#include <cstdint>

namespace slr {

// Geometry of the two structured families the decomposition lives on:
//
//   omega(A) -- matrices supported on a fixed index set, with the entrywise
//               projection projectOmega;
//   T(B)     -- the tangent space { U*X' + Y*V' } at a rank-k matrix with
//               column space span(U) and row space span(V).
//
// The degree and incoherence quantities below measure how concentrated those
// spaces are; they drive the identifiability conditions and the gamma ranges.

/// Tangent space at a low-rank matrix, represented by orthonormal bases of
/// its column space (u, rows x k) and row space (v, cols x k).
struct TangentSpaceLR {
    Matrix u;
    Matrix v;

    Index rows() const { return u.rows(); }
    Index cols() const { return v.rows(); }
    Index rank() const { return u.cols(); }
};

/// Tangent space of b via thin SVD at the given relative rank threshold
/// (negative -> defaultRankTol(b)). A zero matrix yields rank 0.
TangentSpaceLR tangentSpaceOf(const Matrix& b, double rankTol = -1.0);

Matrix projectOmega(const Matrix& m, const SupportPattern& omega);
Matrix projectOmegaComplement(const Matrix& m, const SupportPattern& omega);

/// P_T(M) = P_U M + M P_V - P_U M P_V. Rank 0 projects to zero.
Matrix projectT(const Matrix& m, const TangentSpaceLR& t);

/// P_T_perp(M) = (I - P_U) M (I - P_V); complements projectT.
Matrix projectTPerp(const Matrix& m, const TangentSpaceLR& t);

/// mu(omega): largest singular value of the 0/1 indicator of the support.
/// Equals max over unit x, y of sum_{(i,j) in omega} |x_i y_j|, i.e. the
/// tightest constant with ||M|| <= mu * ||M||_inf over matrices in omega.
/// Throws on an empty support.
double muExact(const SupportPattern& omega);

struct DegreeSummary {
    Index degMin = 0;  // over nonempty rows/columns only
    Index degMax = 0;
    bool degenerate = false;  // some row or column of the ambient shape is empty
};

/// Min/max count of support cells per row and per column. Throws on an
/// empty support. When rows or columns are empty the summary is flagged
/// degenerate and degMin only reflects the nonempty ones.
DegreeSummary degrees(const SupportPattern& omega);

/// beta(S) = max_i || P_S e_i ||_2 for the column span S of `basis`, i.e. the
/// largest row norm of the basis. Requires orthonormal columns (within 1e-8).
/// Always in [sqrt(k/n), 1].
double beta(const Matrix& basis);

/// inc(B) = max(beta(u), beta(v)): incoherence of the two spaces.
/// Requires rank >= 1.
double incoherence(const TangentSpaceLR& t);

struct XiBounds {
    double lower = 0;  // inc
    double upper = 0;  // 2 * inc
};

/// Brackets xi(B) = max { ||N||_inf : N in T, ||N|| <= 1 }, which is hard to
/// evaluate exactly: inc <= xi <= 2 * inc.
XiBounds xiBounds(const TangentSpaceLR& t);

/// Certified lower bound on xi: the best ||N||_inf / ||N|| over an explicit
/// witness aligned with the worst row of each basis (value exactly inc) plus
/// `samples` random elements of T. Always in [inc, 2 * inc].
double xiSampledLower(const TangentSpaceLR& t, int samples, std::uint64_t seed);

/// sigma = max { ||P_Omega(N)||_F : N in T, ||N||_F = 1 }, estimated by power
/// iteration on N -> P_T(P_Omega(P_T(N))) with a deterministic start vector.
/// sigma < 1 certifies transversality of omega and T; sigma = 1 whenever the
/// spaces intersect (e.g. omega is the full support). iters must be >= 1.
double transversalitySigma(const SupportPattern& omega, const TangentSpaceLR& t,
                           int iters = 200);

}  // namespace slr
