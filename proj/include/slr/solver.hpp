#pragma once

#include "slr/matrix.hpp"

#include <optional>

namespace slr {

// Splits C into a sparse piece A and a low-rank piece B by solving
//
//     minimize  gamma * ||A||_1 + ||B||_*   subject to  A + B = C
//
// with the alternating direction method of multipliers. Both subproblems
// have closed-form proximal solutions (entrywise shrinkage and singular
// value shrinkage), so each iteration costs one SVD of a C-sized matrix.

struct SolverConfig {
    double gamma = 1.0;       // trade-off weight on the l1 term, > 0
    double rhoInit = 0.0;     // penalty parameter; <= 0 selects the
                              // scale-aware default 0.25 * n1 * n2 / ||C||_1
    double tolPrimal = 1e-7;  // on ||C - A - B||_F / max(1, ||C||_F)
    double tolChange = 1e-9;  // on the relative iterate change
    int maxIters = 50000;
    bool adaptiveRho = true;  // rebalance rho x2 / /2 when the primal and
                              // dual residuals drift more than 10x apart
};

struct DecompositionResult {
    Matrix aHat;
    Matrix bHat;
    Matrix lambda;  // dual variable at exit; useful for warm starts
    int iterations = 0;
    double primalResidual = 0;
    double objective = 0;
    bool converged = false;
    double gammaUsed = 0;
    std::optional<double> tUsed;  // set by decomposeT
};

/// Entrywise shrinkage: sign(m) * max(|m| - tau, 0). Ties (|m| == tau) give 0.
Matrix softThreshold(const Matrix& m, double tau);

/// Singular value shrinkage: U * max(S - tau, 0) * V'. tau == 0 returns m.
Matrix svThreshold(const Matrix& m, double tau);

DecompositionResult decompose(const Matrix& c, const SolverConfig& config);

/// Initial iterates for decompose; shapes must match C.
struct WarmStart {
    Matrix a;
    Matrix b;
    Matrix lambda;
};

DecompositionResult decompose(const Matrix& c, const SolverConfig& config,
                              const WarmStart& init);

/// Same program reparameterized as  t * ||A||_1 + (1 - t) * ||B||_*  for
/// t in (0, 1): solves with gamma = t / (1 - t) and records both.
DecompositionResult decomposeT(const Matrix& c, double t, SolverConfig config);

/// A-posteriori diagnostic for a candidate pair at a given gamma: builds the
/// dual certificate for (a, b) and reports how far it is from simultaneously
/// subgradient-feasible for both norms. Zero-lying candidates are fine: the
/// corresponding equality conditions are skipped and flagged.
struct OptimalityReport {
    double signEqualityInf = 0;        // || P_Omega(Q) - gamma * sign(a) ||_inf
    double omegaComplementExcess = 0;  // max(0, || P_Omega_c(Q) ||_inf - gamma)
    double tperpExcess = 0;            // max(0, || P_T_perp(Q) || - 1)
    double ptEqualityFro = 0;          // || P_T(Q) - U V' ||_F
    bool sparseSideSkipped = false;
    bool lowRankSideSkipped = false;
    bool fixedPointConverged = true;
};

OptimalityReport checkOptimality(const Matrix& a, const Matrix& b, double gamma,
                                 double zeroTol = 0.0);

}  // namespace slr
