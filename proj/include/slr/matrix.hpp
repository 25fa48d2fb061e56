#pragma once

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace slr {

// Dense real matrices are the universal value type of the library. Storage,
// arithmetic, and factorizations are delegated to Eigen; the helpers here add
// the validation and the handful of quantities the rest of the library is
// built on.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Builds a rows x cols matrix from entries given in row-major order.
/// Rejects non-positive dimensions, size mismatches, and non-finite values.
Matrix makeMatrix(Index rows, Index cols, std::span<const double> rowMajor);

bool allFinite(const Matrix& m);

/// Throws std::invalid_argument naming `what` if any entry is NaN or Inf.
void requireFinite(const Matrix& m, std::string_view what);

double l1Norm(const Matrix& m);        // sum of absolute entries
double linfNorm(const Matrix& m);      // largest absolute entry
double spectralNorm(const Matrix& m);  // largest singular value
double nuclearNorm(const Matrix& m);   // sum of singular values

struct SvdResult {
    Matrix u;               // rows x rank, orthonormal columns
    Vector singularValues;  // rank values, nonincreasing, all positive
    Matrix v;               // cols x rank, orthonormal columns
    Index numericalRank = 0;
};

/// Default relative rank threshold: max(rows, cols) * machine epsilon.
double defaultRankTol(const Matrix& m);

/// Thin SVD truncated to singular values strictly above rankTol * sigma_1.
/// rankTol is relative and must be nonnegative. A zero matrix yields empty
/// factors and rank 0. Throws std::runtime_error if the factorization fails.
SvdResult svd(const Matrix& m, double rankTol);
SvdResult svd(const Matrix& m);  // uses defaultRankTol(m)

/// Sorted, duplicate-free index set identifying the nonzero cells of a
/// sparse component. rows/cols record the ambient shape.
struct SupportPattern {
    Index rows = 0;
    Index cols = 0;
    std::vector<std::pair<Index, Index>> indices;

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
};

/// Index set of entries with |m(i,j)| > zeroTol. zeroTol must be >= 0;
/// the default keeps every entry that is not exactly zero.
SupportPattern supportOf(const Matrix& m, double zeroTol = 0.0);

/// 0/1 matrix with ones exactly on the support.
Matrix indicatorMatrix(const SupportPattern& omega);

/// Entrywise sign with a dead zone: 0 wherever |m(i,j)| <= zeroTol.
Matrix signMatrix(const Matrix& m, double zeroTol = 0.0);

}  // namespace slr
