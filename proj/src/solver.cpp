#include "slr/solver.hpp"

#include "slr/certificate.hpp"
#include "slr/tangent.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slr {

namespace {

void validate(const SolverConfig& cfg) {
    if (!(cfg.gamma > 0)) throw std::invalid_argument("decompose: gamma must be positive");
    if (!(cfg.tolPrimal > 0) || !(cfg.tolChange > 0))
        throw std::invalid_argument("decompose: tolerances must be positive");
    if (cfg.maxIters < 1) throw std::invalid_argument("decompose: maxIters must be >= 1");
    if (!std::isfinite(cfg.rhoInit))
        throw std::invalid_argument("decompose: rhoInit must be finite");
}

DecompositionResult runAdmm(const Matrix& c, const SolverConfig& cfg,
                            const WarmStart* init) {
    validate(cfg);
    requireFinite(c, "decompose");

    const double normC = c.norm();
    const double l1C = c.cwiseAbs().sum();

    DecompositionResult out;
    out.gammaUsed = cfg.gamma;
    if (l1C == 0.0) {
        out.aHat = Matrix::Zero(c.rows(), c.cols());
        out.bHat = out.aHat;
        out.lambda = out.aHat;
        out.converged = true;
        return out;
    }

    double rho = cfg.rhoInit > 0
                     ? cfg.rhoInit
                     : 0.25 * static_cast<double>(c.rows()) * static_cast<double>(c.cols()) / l1C;

    Matrix a, b, lambda;
    if (init) {
        if (init->a.rows() != c.rows() || init->a.cols() != c.cols() ||
            init->b.rows() != c.rows() || init->b.cols() != c.cols() ||
            init->lambda.rows() != c.rows() || init->lambda.cols() != c.cols())
            throw std::invalid_argument("decompose: warm start shape mismatch");
        a = init->a;
        b = init->b;
        lambda = init->lambda;
    } else {
        a = Matrix::Zero(c.rows(), c.cols());
        b = a;
        lambda = a;
    }

    int iter = 0;
    double primal = 0;
    bool converged = false;
    for (iter = 1; iter <= cfg.maxIters; ++iter) {
        Matrix aPrev = a;
        Matrix bPrev = b;

        a = softThreshold(c - b + lambda / rho, cfg.gamma / rho);
        b = svThreshold(c - a + lambda / rho, 1.0 / rho);
        Matrix r = c - a - b;
        lambda += rho * r;

        double rNorm = r.norm();
        primal = rNorm / std::max(1.0, normC);
        double change = ((a - aPrev).norm() + (b - bPrev).norm()) /
                        std::max(1.0, aPrev.norm() + bPrev.norm());

        if (!a.allFinite() || !b.allFinite())
            throw std::runtime_error("decompose: non-finite iterate at iteration " +
                                     std::to_string(iter));

        if (primal <= cfg.tolPrimal && change <= cfg.tolChange) {
            converged = true;
            break;
        }

        if (cfg.adaptiveRho) {
            // Dual residual of the splitting; keeping the two balanced keeps
            // both subproblem step sizes useful.
            double dual = rho * (b - bPrev).norm();
            if (rNorm > 10.0 * dual)
                rho = std::min(rho * 2.0, 1e10);
            else if (dual > 10.0 * rNorm)
                rho = std::max(rho / 2.0, 1e-10);
        }
    }

    out.aHat = std::move(a);
    out.bHat = std::move(b);
    out.lambda = std::move(lambda);
    out.iterations = std::min(iter, cfg.maxIters);
    out.primalResidual = primal;
    out.converged = converged;
    out.objective = cfg.gamma * out.aHat.cwiseAbs().sum() + nuclearNorm(out.bHat);
    return out;
}

}  // namespace

Matrix softThreshold(const Matrix& m, double tau) {
    requireFinite(m, "softThreshold");
    if (!(tau >= 0)) throw std::invalid_argument("softThreshold: tau must be nonnegative");
    return m.unaryExpr([tau](double x) {
        double shrunk = std::abs(x) - tau;
        return shrunk > 0 ? (x > 0 ? shrunk : -shrunk) : 0.0;
    });
}

namespace {

template <typename Svd>
Matrix shrinkFromSvd(const Svd& dec, double tau, Index rows, Index cols, bool* ok) {
    *ok = dec.info() == Eigen::Success && dec.singularValues().allFinite() &&
          dec.matrixU().allFinite() && dec.matrixV().allFinite();
    if (!*ok) return Matrix{};
    Vector shrunk = (dec.singularValues().array() - tau).max(0.0);
    Index kept = 0;
    while (kept < shrunk.size() && shrunk(kept) > 0) ++kept;
    if (kept == 0) return Matrix::Zero(rows, cols);
    return dec.matrixU().leftCols(kept) * shrunk.head(kept).asDiagonal() *
           dec.matrixV().leftCols(kept).transpose();
}

}  // namespace

Matrix svThreshold(const Matrix& m, double tau) {
    requireFinite(m, "svThreshold");
    if (!(tau >= 0)) throw std::invalid_argument("svThreshold: tau must be nonnegative");
    if (tau == 0) return m;
    // BDCSVD first for speed, Jacobi as the fallback: BDCSVD can emit NaN
    // factors with a Success status when the spectrum is heavily clustered.
    bool ok = false;
    Matrix out = shrinkFromSvd(
        Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV), tau,
        m.rows(), m.cols(), &ok);
    if (ok) return out;
    out = shrinkFromSvd(
        Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV), tau,
        m.rows(), m.cols(), &ok);
    if (!ok) throw std::runtime_error("svThreshold: factorization did not converge");
    return out;
}

DecompositionResult decompose(const Matrix& c, const SolverConfig& config) {
    return runAdmm(c, config, nullptr);
}

DecompositionResult decompose(const Matrix& c, const SolverConfig& config,
                              const WarmStart& init) {
    return runAdmm(c, config, &init);
}

DecompositionResult decomposeT(const Matrix& c, double t, SolverConfig config) {
    if (!(t > 0) || !(t < 1))
        throw std::invalid_argument("decomposeT: t must lie strictly inside (0, 1)");
    config.gamma = t / (1.0 - t);
    DecompositionResult out = runAdmm(c, config, nullptr);
    out.tUsed = t;
    return out;
}

OptimalityReport checkOptimality(const Matrix& a, const Matrix& b, double gamma,
                                 double zeroTol) {
    requireFinite(a, "checkOptimality");
    requireFinite(b, "checkOptimality");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("checkOptimality: shape mismatch");
    if (!(gamma > 0)) throw std::invalid_argument("checkOptimality: gamma must be positive");

    SupportPattern omega = supportOf(a, zeroTol);
    TangentSpaceLR t = tangentSpaceOf(b);

    OptimalityReport out;
    out.sparseSideSkipped = omega.empty();
    out.lowRankSideSkipped = t.rank() == 0;

    if (out.sparseSideSkipped && out.lowRankSideSkipped) return out;  // (0, 0): vacuous

    if (out.sparseSideSkipped) {
        // Candidate dual for (0, b): Q = U V'. The low-rank equalities hold by
        // construction; only the l1 bound is informative.
        Matrix q = t.u * t.v.transpose();
        out.omegaComplementExcess = std::max(0.0, linfNorm(q) - gamma);
        return out;
    }
    if (out.lowRankSideSkipped) {
        // Candidate dual for (a, 0): Q = gamma sign(a); only the spectral
        // bound is informative.
        Matrix q = gamma * signMatrix(a, zeroTol);
        out.tperpExcess = std::max(0.0, spectralNorm(q) - 1.0);
        return out;
    }

    CertificateOptions opts;
    opts.zeroTol = zeroTol;
    CertificateResult cert = buildCertificate(a, b, gamma, opts);
    out.fixedPointConverged = cert.verdict != Verdict::Inconclusive;
    out.signEqualityInf =
        linfNorm(projectOmega(cert.qHat, omega) - gamma * signMatrix(a, zeroTol));
    out.omegaComplementExcess = std::max(0.0, cert.condOmegacInf - gamma);
    out.tperpExcess = std::max(0.0, cert.condTperpNorm - 1.0);
    out.ptEqualityFro = cert.condPtEqualsUv;
    return out;
}

}  // namespace slr
