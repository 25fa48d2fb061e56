#include "slr/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace slr {

namespace {

void requirePositive(double value, const char* what) {
    if (!(value > 0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

GammaRange gammaRangeTheorem(double mu, double xi) {
    requirePositive(mu, "gammaRangeTheorem: mu");
    requirePositive(xi, "gammaRangeTheorem: xi");
    double product = mu * xi;
    GammaRange out;
    out.lower = xi / (1.0 - 4.0 * product);
    out.upper = (1.0 - 3.0 * product) / mu;
    out.recommended = std::sqrt(3.0 * xi / (2.0 * mu));
    out.valid = product < 1.0 / 6.0 && out.lower < out.upper;
    return out;
}

GammaRange gammaRangeCorollary(double degMax, double inc) {
    requirePositive(degMax, "gammaRangeCorollary: degMax");
    requirePositive(inc, "gammaRangeCorollary: inc");
    return gammaRangeTheorem(degMax, 2.0 * inc);
}

const char* toString(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

CertificateResult buildCertificate(const Matrix& a, const Matrix& b, double gamma,
                                   const CertificateOptions& opts) {
    requireFinite(a, "buildCertificate");
    requireFinite(b, "buildCertificate");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("buildCertificate: shape mismatch");
    requirePositive(gamma, "buildCertificate: gamma");
    if (!(opts.fpTol > 0)) throw std::invalid_argument("buildCertificate: fpTol must be positive");
    if (opts.fpMaxIters < 1)
        throw std::invalid_argument("buildCertificate: fpMaxIters must be >= 1");

    SupportPattern omega = supportOf(a, opts.zeroTol);
    if (omega.empty())
        throw std::invalid_argument("buildCertificate: sign pattern of a is empty");
    TangentSpaceLR t = tangentSpaceOf(b, opts.rankTol);
    if (t.rank() == 0) throw std::invalid_argument("buildCertificate: b has rank 0");

    const Matrix signA = gamma * signMatrix(a, opts.zeroTol);
    const Matrix uv = t.u * t.v.transpose();

    CertificateResult out;
    out.transversalitySigma = transversalitySigma(omega, t, opts.transversalityIters);

    // The correction pair solves a linear fixed point whose iteration matrix
    // has spectral radius sigma^2; without transversality it cannot converge
    // and the certificate is refuted outright.
    Matrix epsOmega = Matrix::Zero(a.rows(), a.cols());
    Matrix epsT = epsOmega;
    bool fpConverged = false;
    if (out.transversalitySigma < 1.0 - 1e-6) {
        for (int it = 1; it <= opts.fpMaxIters; ++it) {
            Matrix nextOmega = -projectOmega(uv + epsT, omega);
            Matrix nextT = -projectT(signA + nextOmega, t);
            double delta = (nextOmega - epsOmega).norm() + (nextT - epsT).norm();
            epsOmega = std::move(nextOmega);
            epsT = std::move(nextT);
            out.fixedPointIters = it;
            if (delta < opts.fpTol) {
                fpConverged = true;
                break;
            }
            if (!std::isfinite(delta) || delta > 1e12) break;  // diverged
        }
    }

    out.qHat = signA + epsOmega + uv + epsT;
    out.epsOmegaInf = linfNorm(epsOmega);
    out.epsTSpec = spectralNorm(epsT);
    out.condPtEqualsUv = (projectT(out.qHat, t) - uv).norm();
    out.condPomegaEqualsSign = (projectOmega(out.qHat, omega) - signA).norm();
    out.condTperpNorm = spectralNorm(projectTPerp(out.qHat, t));
    out.condOmegacInf = linfNorm(projectOmegaComplement(out.qHat, omega));

    if (out.transversalitySigma >= 1.0 - 1e-6) {
        out.verdict = Verdict::Fail;
    } else if (!fpConverged) {
        out.verdict = Verdict::Inconclusive;
    } else {
        bool pass = out.condPtEqualsUv <= 1e-8 && out.condPomegaEqualsSign <= 1e-8 &&
                    out.condTperpNorm < 1.0 - opts.margin &&
                    out.condOmegacInf < gamma * (1.0 - opts.margin);
        out.verdict = pass ? Verdict::Pass : Verdict::Fail;
    }
    return out;
}

IncoherenceReport conditionReport(const Matrix& a, const Matrix& b,
                                  const ReportOptions& opts) {
    requireFinite(a, "conditionReport");
    requireFinite(b, "conditionReport");
    SupportPattern omega = supportOf(a, opts.zeroTol);
    if (omega.empty()) throw std::invalid_argument("conditionReport: support of a is empty");
    TangentSpaceLR t = tangentSpaceOf(b, opts.rankTol);
    if (t.rank() == 0) throw std::invalid_argument("conditionReport: b has rank 0");

    IncoherenceReport out;
    out.mu = muExact(omega);
    DegreeSummary deg = degrees(omega);
    out.degMin = deg.degMin;
    out.degMax = deg.degMax;
    out.degenerateSupport = deg.degenerate;
    out.betaCol = beta(t.u);
    out.betaRow = beta(t.v);
    out.inc = std::max(out.betaCol, out.betaRow);
    XiBounds xi = xiBounds(t);
    out.xiLower = xi.lower;
    out.xiUpper = xi.upper;
    if (opts.xiSamples > 0)
        out.xiSampledLower = xiSampledLower(t, opts.xiSamples, opts.seed);
    out.uncertaintyProductUpper = out.mu * out.xiUpper;
    out.theoremCondition = out.mu * out.xiUpper < 1.0 / 6.0;
    out.corollaryCondition = static_cast<double>(out.degMax) * out.inc < 1.0 / 12.0;
    out.gammaRangeThm = gammaRangeTheorem(out.mu, out.xiUpper);
    out.gammaRangeCor = gammaRangeCorollary(static_cast<double>(out.degMax), out.inc);
    if (out.gammaRangeThm.valid)
        out.gammaRecommended = out.gammaRangeThm.recommended;
    else if (out.gammaRangeCor.valid)
        out.gammaRecommended = out.gammaRangeCor.recommended;
    return out;
}

}  // namespace slr
