#pragma once

#include "slr/matrix.hpp"
#include "slr/rng.hpp"

#include <cstdint>
#include <string>

namespace slr {

// The two random models the experiments draw from, plus checks of the
// high-probability bounds that make randomly drawn instances well behaved:
// a uniformly random size-m support has all degrees <= (m/n) ln n, and a
// random n x k Gaussian factor pair spans spaces with incoherence
// <= c * sqrt(max(k, ln n) / n), both with probability approaching 1.

struct EnsembleSpec {
    Index n = 0;            // square ambient size
    Index m = 0;            // sparse support size, 1 <= m <= n^2
    Index k = 0;            // target rank, 1 <= k <= n
    std::uint64_t seed = 0;
};

/// Exactly m support cells chosen uniformly among all size-m subsets of the
/// n x n grid, filled with iid standard normal values.
Matrix randomSparse(const EnsembleSpec& spec);

/// B = X * Y' with X, Y n x k iid standard normal; rank k almost surely.
Matrix randomLowrank(const EnsembleSpec& spec);

struct LemmaReport {
    int trials = 0;
    int satisfied = 0;
    double fraction = 0;
    std::string boundFormula;
    double constant = 0;
};

/// Fraction of random size-m supports with deg_max <= (m/n) * ln(n).
/// Requires m >= n so the bound is at least 1, and trials >= 1.
LemmaReport checkDegreeLemma(Index n, Index m, int trials, std::uint64_t seed);

/// Fraction of random rank-k factor pairs with
/// inc <= constant * sqrt(max(k, ln n) / n). Natural log throughout.
LemmaReport checkIncoherenceLemma(Index n, Index k, int trials, double constant,
                                  std::uint64_t seed);

/// Support budget n^1.5 / (ln n * sqrt(max(k, ln n))) under which random
/// instances of rank k are identifiable with high probability.
double corollaryRegime(Index n, Index k);

}  // namespace slr
