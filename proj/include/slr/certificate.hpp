#pragma once

#include "slr/matrix.hpp"
#include "slr/tangent.hpp"

#include <cstdint>
#include <optional>

namespace slr {

// Dual certificate machinery. A pair (A, B) is the unique optimum of the
// weighted decomposition program at a given gamma whenever omega(A) and T(B)
// are transversal and some Q satisfies, simultaneously,
//
//   P_T(Q) = U V'            and   || P_T_perp(Q) ||     <  1,
//   P_Omega(Q) = gamma sign(A) and || P_Omega_c(Q) ||_inf < gamma.
//
// buildCertificate constructs the natural candidate by alternating
// projections: the unique Q of the form
//     Q = gamma sign(A) + epsOmega + U V' + epsT,
// with epsOmega supported on omega and epsT in T, solving
//     epsOmega = -P_Omega(U V' + epsT),   epsT = -P_T(gamma sign(A) + epsOmega).
// The iteration contracts whenever the spaces are transversal, and the
// strict-inequality conditions are then checked with a small safety margin.

struct GammaRange {
    double lower = 0;
    double upper = 0;
    double recommended = 0;
    bool valid = false;  // the open interval (lower, upper) is usable
};

/// Guaranteed-recovery gamma interval from (mu, xi):
///   ( xi / (1 - 4 mu xi),  (1 - 3 mu xi) / mu ),
/// nonempty iff mu * xi < 1/6; recommended point sqrt(3 xi / (2 mu)).
/// Inputs must be positive. lower/upper/recommended are always filled in;
/// they only delimit a usable interval when valid is true.
GammaRange gammaRangeTheorem(double mu, double xi);

/// Same interval stated in terms of the observable proxies deg = deg_max and
/// inc: equals gammaRangeTheorem(deg, 2 * inc), nonempty iff deg * inc < 1/12,
/// recommended sqrt(3 * inc / deg).
GammaRange gammaRangeCorollary(double degMax, double inc);

enum class Verdict { Pass, Fail, Inconclusive };
const char* toString(Verdict v);

struct CertificateResult {
    Matrix qHat;
    double epsOmegaInf = 0;  // || epsOmega ||_inf at the fixed point
    double epsTSpec = 0;     // || epsT || at the fixed point
    double condPtEqualsUv = 0;        // || P_T(Q) - U V' ||_F
    double condPomegaEqualsSign = 0;  // || P_Omega(Q) - gamma sign(A) ||_F
    double condTperpNorm = 0;         // || P_T_perp(Q) ||, must be < 1
    double condOmegacInf = 0;         // || P_Omega_c(Q) ||_inf, must be < gamma
    double transversalitySigma = 0;
    int fixedPointIters = 0;
    Verdict verdict = Verdict::Inconclusive;
};

struct CertificateOptions {
    double fpTol = 1e-12;    // Frobenius change of (epsOmega, epsT) per sweep
    int fpMaxIters = 20000;
    double zeroTol = 0.0;    // support/sign extraction on a
    double rankTol = -1.0;   // rank threshold on b; negative -> default
    double margin = 1e-6;    // relative margin on the strict inequalities
    int transversalityIters = 200;
};

/// Verdict semantics: Pass means (a, b) is certified as the unique optimum at
/// gamma. Fail means a condition is definitively violated (including the
/// non-transversal case sigma >= 1). Inconclusive means the fixed point did
/// not converge within fpMaxIters, so no conclusion is drawn. Throws if the
/// extracted sign pattern is empty or b has rank 0.
CertificateResult buildCertificate(const Matrix& a, const Matrix& b, double gamma,
                                   const CertificateOptions& opts = {});

/// One-stop identifiability summary for a candidate pair. The xi-based
/// quantities use the conservative upper bracket xi_upper = 2 * inc, so both
/// condition verdicts are sufficient, never necessary: a false verdict does
/// not rule recovery out.
struct IncoherenceReport {
    double mu = 0;
    Index degMin = 0;
    Index degMax = 0;
    bool degenerateSupport = false;
    double betaRow = 0;  // row space of b
    double betaCol = 0;  // column space of b
    double inc = 0;
    double xiLower = 0;
    double xiUpper = 0;
    std::optional<double> xiSampledLower;
    double uncertaintyProductUpper = 0;  // mu * xi_upper = 2 * inc * mu, >= 1
    bool theoremCondition = false;       // mu * xi_upper < 1/6
    bool corollaryCondition = false;     // deg_max * inc < 1/12
    GammaRange gammaRangeThm;            // from (mu exact, xi_upper)
    GammaRange gammaRangeCor;            // from (deg_max, inc)
    std::optional<double> gammaRecommended;  // from the strongest valid range
};

struct ReportOptions {
    double zeroTol = 0.0;
    double rankTol = -1.0;
    int xiSamples = 0;  // > 0 adds the sampled xi lower bound
    std::uint64_t seed = 0;
};

/// Throws if a has empty support or b has rank 0.
IncoherenceReport conditionReport(const Matrix& a, const Matrix& b,
                                  const ReportOptions& opts = {});

}  // namespace slr
