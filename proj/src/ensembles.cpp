#include "slr/ensembles.hpp"

#include "slr/tangent.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slr {

namespace {

void validateSparse(const EnsembleSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("randomSparse: n must be >= 1");
    if (spec.m < 1 || spec.m > spec.n * spec.n)
        throw std::invalid_argument("randomSparse: m must lie in [1, n^2]");
}

// Uniform size-m subset of the n x n grid via a partial Fisher-Yates shuffle
// of the flattened cell indices; returned sorted.
std::vector<std::pair<Index, Index>> sampleSupport(Index n, Index m, SplitMix64& rng) {
    std::vector<std::uint32_t> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::iota(cells.begin(), cells.end(), 0u);
    for (Index i = 0; i < m; ++i) {
        std::size_t j = static_cast<std::size_t>(i) +
                        static_cast<std::size_t>(rng.below(cells.size() - static_cast<std::size_t>(i)));
        std::swap(cells[static_cast<std::size_t>(i)], cells[j]);
    }
    std::vector<std::pair<Index, Index>> support(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        std::uint32_t cell = cells[static_cast<std::size_t>(i)];
        support[static_cast<std::size_t>(i)] = {static_cast<Index>(cell / n),
                                                static_cast<Index>(cell % n)};
    }
    std::sort(support.begin(), support.end());
    return support;
}

Matrix gaussianMatrix(Index rows, Index cols, SplitMix64& rng) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
    return m;
}

Matrix thinQ(const Matrix& m) {
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

}  // namespace

Matrix randomSparse(const EnsembleSpec& spec) {
    validateSparse(spec);
    SplitMix64 supportRng = streamRng(spec.seed, RngStream::SparseSupport);
    auto support = sampleSupport(spec.n, spec.m, supportRng);
    SplitMix64 valueRng = streamRng(spec.seed, RngStream::SparseValues);
    Matrix a = Matrix::Zero(spec.n, spec.n);
    for (auto [i, j] : support) a(i, j) = valueRng.gaussian();
    return a;
}

Matrix randomLowrank(const EnsembleSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("randomLowrank: n must be >= 1");
    if (spec.k < 1 || spec.k > spec.n)
        throw std::invalid_argument("randomLowrank: k must lie in [1, n]");
    SplitMix64 xRng = streamRng(spec.seed, RngStream::LowrankX);
    SplitMix64 yRng = streamRng(spec.seed, RngStream::LowrankY);
    Matrix x = gaussianMatrix(spec.n, spec.k, xRng);
    Matrix y = gaussianMatrix(spec.n, spec.k, yRng);
    return x * y.transpose();
}

LemmaReport checkDegreeLemma(Index n, Index m, int trials, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("checkDegreeLemma: n must be >= 2");
    if (m < n || m > n * n)
        throw std::invalid_argument("checkDegreeLemma: m must lie in [n, n^2]");
    if (trials < 1) throw std::invalid_argument("checkDegreeLemma: trials must be >= 1");

    double bound = (static_cast<double>(m) / static_cast<double>(n)) *
                   std::log(static_cast<double>(n));
    LemmaReport out;
    out.trials = trials;
    out.boundFormula = "(m/n) * ln(n)";
    out.constant = 1.0;
    for (int trial = 0; trial < trials; ++trial) {
        SplitMix64 rng = streamRng(deriveSeed(seed, RngStream::LemmaTrial, trial),
                                   RngStream::SparseSupport);
        auto support = sampleSupport(n, m, rng);
        SupportPattern omega;
        omega.rows = n;
        omega.cols = n;
        omega.indices = std::move(support);
        if (static_cast<double>(degrees(omega).degMax) <= bound) ++out.satisfied;
    }
    out.fraction = static_cast<double>(out.satisfied) / trials;
    return out;
}

LemmaReport checkIncoherenceLemma(Index n, Index k, int trials, double constant,
                                  std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("checkIncoherenceLemma: n must be >= 2");
    if (k < 1 || k > n)
        throw std::invalid_argument("checkIncoherenceLemma: k must lie in [1, n]");
    if (trials < 1) throw std::invalid_argument("checkIncoherenceLemma: trials must be >= 1");
    if (!(constant > 0))
        throw std::invalid_argument("checkIncoherenceLemma: constant must be positive");

    double logN = std::log(static_cast<double>(n));
    double bound = constant * std::sqrt(std::max(static_cast<double>(k), logN) /
                                        static_cast<double>(n));
    LemmaReport out;
    out.trials = trials;
    out.boundFormula = "c * sqrt(max(k, ln n) / n)";
    out.constant = constant;
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t trialSeed = deriveSeed(seed, RngStream::LemmaTrial, trial);
        SplitMix64 xRng = streamRng(trialSeed, RngStream::LowrankX);
        SplitMix64 yRng = streamRng(trialSeed, RngStream::LowrankY);
        // The spanned spaces of X Y' are col(X) and col(Y); orthonormalizing
        // the factors directly avoids forming and decomposing the product.
        double incoherence = std::max(beta(thinQ(gaussianMatrix(n, k, xRng))),
                                      beta(thinQ(gaussianMatrix(n, k, yRng))));
        if (incoherence <= bound) ++out.satisfied;
    }
    out.fraction = static_cast<double>(out.satisfied) / trials;
    return out;
}

double corollaryRegime(Index n, Index k) {
    if (n < 2) throw std::invalid_argument("corollaryRegime: n must be >= 2");
    if (k < 1 || k > n) throw std::invalid_argument("corollaryRegime: k must lie in [1, n]");
    double logN = std::log(static_cast<double>(n));
    return std::pow(static_cast<double>(n), 1.5) /
           (logN * std::sqrt(std::max(static_cast<double>(k), logN)));
}

}  // namespace slr
