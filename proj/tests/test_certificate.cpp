#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "slr/certificate.hpp"
#include "slr/ensembles.hpp"
#include "slr/rng.hpp"
#include "slr/solver.hpp"
#include "slr/tangent.hpp"

#include <cmath>

using namespace slr;

namespace {

// Deterministic identifiable instance: a partial-permutation sparse part
// (every degree is 1) plus a flat +-1 rank-1 low-rank part, whose incoherence
// is exactly 1/sqrt(n). deg_max * inc < 1/12 as soon as n > 144.
struct FlatInstance {
    Matrix a;
    Matrix b;
    double gamma;
};

FlatInstance flatInstance(Index n, Index cells, std::uint64_t seed) {
    SplitMix64 rng = streamRng(seed, RngStream::TestData, 1);
    Matrix a = Matrix::Zero(n, n);
    // one cell per row/column pair: a partial permutation
    std::vector<Index> rows(static_cast<std::size_t>(n)), cols(rows);
    for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(i)] = i;
    for (Index i = n - 1; i > 0; --i) {
        std::swap(rows[static_cast<std::size_t>(i)],
                  rows[rng.below(static_cast<std::uint64_t>(i) + 1)]);
        std::swap(cols[static_cast<std::size_t>(i)],
                  cols[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    for (Index c = 0; c < cells; ++c)
        a(rows[static_cast<std::size_t>(c)], cols[static_cast<std::size_t>(c)]) =
            rng.gaussian() >= 0 ? 1.0 : -1.0;

    Vector u(n), v(n);
    for (Index i = 0; i < n; ++i) {
        u(i) = rng.gaussian() >= 0 ? 1.0 : -1.0;
        v(i) = rng.gaussian() >= 0 ? 1.0 : -1.0;
    }
    Matrix b = u * v.transpose() / static_cast<double>(n);  // flat rank-1, inc = 1/sqrt(n)

    double inc = 1.0 / std::sqrt(static_cast<double>(n));
    return FlatInstance{std::move(a), std::move(b), std::sqrt(3.0 * inc)};
}

}  // namespace

TEST_CASE("gamma range formulas: frozen values") {
    GammaRange r = gammaRangeTheorem(1.0, 0.1);
    CHECK(r.valid);
    CHECK(r.lower == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(r.upper == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(r.recommended == doctest::Approx(0.3872983346207417).epsilon(1e-12));
    CHECK(r.lower < r.recommended);
    CHECK(r.recommended < r.upper);

    // boundary mu * xi = 1/6: interval closes exactly
    GammaRange edge = gammaRangeTheorem(1.0, 1.0 / 6.0);
    CHECK(!edge.valid);
    CHECK(edge.lower == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(edge.upper == doctest::Approx(0.5).epsilon(1e-12));

    GammaRange far = gammaRangeTheorem(2.0, 1.0);
    CHECK(!far.valid);

    CHECK_THROWS_AS(gammaRangeTheorem(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gammaRangeTheorem(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("corollary range is the theorem at the conservative bracket") {
    GammaRange cor = gammaRangeCorollary(2.0, 0.02);
    GammaRange thm = gammaRangeTheorem(2.0, 0.04);
    CHECK(cor.lower == thm.lower);
    CHECK(cor.upper == thm.upper);
    CHECK(cor.recommended == thm.recommended);
    CHECK(cor.valid == thm.valid);
    // recommended simplifies to sqrt(3 inc / deg)
    CHECK(cor.recommended == doctest::Approx(std::sqrt(3.0 * 0.02 / 2.0)).epsilon(1e-12));
}

TEST_CASE("verdict strings") {
    CHECK(std::string(toString(Verdict::Pass)) == "pass");
    CHECK(std::string(toString(Verdict::Fail)) == "fail");
    CHECK(std::string(toString(Verdict::Inconclusive)) == "inconclusive");
}

TEST_CASE("certificate passes on a deterministic identifiable instance") {
    FlatInstance inst = flatInstance(150, 15, 21);
    CertificateResult cert = buildCertificate(inst.a, inst.b, inst.gamma);
    CHECK((cert.verdict == Verdict::Pass));
    CHECK(cert.transversalitySigma < 1.0);
    CHECK(cert.fixedPointIters > 0);

    // re-verify all four conditions directly from qHat
    SupportPattern omega = supportOf(inst.a);
    TangentSpaceLR t = tangentSpaceOf(inst.b);
    Matrix uv = t.u * t.v.transpose();
    CHECK((projectT(cert.qHat, t) - uv).norm() < 1e-8);
    CHECK(linfNorm(projectOmega(cert.qHat, omega) - inst.gamma * signMatrix(inst.a)) < 1e-8);
    CHECK(oracle::spectralNorm(projectTPerp(cert.qHat, t)) < 1.0);
    CHECK(linfNorm(projectOmegaComplement(cert.qHat, omega)) < inst.gamma);

    // the report agrees with the direct computation
    CHECK(cert.condTperpNorm ==
          doctest::Approx(oracle::spectralNorm(projectTPerp(cert.qHat, t))).epsilon(1e-8));
}

TEST_CASE("certificate fails when gamma leaves the usable range") {
    FlatInstance inst = flatInstance(150, 15, 22);
    // gamma far above the upper end: the omega-complement bound must break
    CertificateResult high = buildCertificate(inst.a, inst.b, 50.0);
    CHECK((high.verdict == Verdict::Fail));
    // gamma far below the lower end: the T-perp bound must break
    CertificateResult low = buildCertificate(inst.a, inst.b, 1e-4);
    CHECK((low.verdict == Verdict::Fail));
}

TEST_CASE("certificate detects non-transversal pairs without iterating") {
    // support cell inside the tangent space: sigma = 1
    Matrix a = Matrix::Zero(6, 6);
    a(0, 0) = 1.0;
    Matrix b = Matrix::Zero(6, 6);
    b(0, 0) = 2.0;
    CertificateResult cert = buildCertificate(a, b, 0.5);
    CHECK((cert.verdict == Verdict::Fail));
    CHECK(cert.transversalitySigma == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cert.fixedPointIters == 0);
}

TEST_CASE("certificate reports inconclusive when the budget is too small") {
    FlatInstance inst = flatInstance(150, 15, 23);
    CertificateOptions opts;
    opts.fpMaxIters = 2;
    CertificateResult cert = buildCertificate(inst.a, inst.b, inst.gamma, opts);
    CHECK((cert.verdict == Verdict::Inconclusive));
    CHECK(cert.fixedPointIters == 2);
}

TEST_CASE("certificate rejects degenerate inputs") {
    Matrix zero = Matrix::Zero(4, 4);
    Matrix some = Matrix::Identity(4, 4);
    CHECK_THROWS_AS(buildCertificate(zero, some, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(buildCertificate(some, zero, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(buildCertificate(some, some, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(buildCertificate(some, Matrix::Zero(3, 3), 1.0),
                    std::invalid_argument);
}

TEST_CASE("condition report on a diagnostic-friendly pair") {
    // single-cell sparse part (mu = 1, degrees 1) plus flat rank-1 at n = 256
    // (inc = 1/16): both sufficient conditions hold
    const Index n = 256;
    Matrix a = Matrix::Zero(n, n);
    a(3, 7) = -2.0;
    Vector ones = Vector::Ones(n);
    Matrix b = ones * ones.transpose() / static_cast<double>(n);

    IncoherenceReport report = conditionReport(a, b);
    CHECK(report.mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.degMin == 1);
    CHECK(report.degMax == 1);
    CHECK(report.degenerateSupport);  // most rows/columns are empty
    CHECK(report.inc == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(report.betaRow == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(report.betaCol == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(report.xiLower == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(report.xiUpper == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(!report.xiSampledLower.has_value());
    CHECK(report.uncertaintyProductUpper == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(report.theoremCondition);
    CHECK(report.corollaryCondition);
    CHECK(report.gammaRangeThm.valid);
    CHECK(report.gammaRangeCor.valid);
    REQUIRE(report.gammaRecommended.has_value());
    // both ranges recommend sqrt(3/16) here
    CHECK(*report.gammaRecommended == doctest::Approx(0.4330127018922193).epsilon(1e-12));

    ReportOptions withSamples;
    withSamples.xiSamples = 10;
    IncoherenceReport sampled = conditionReport(a, b, withSamples);
    REQUIRE(sampled.xiSampledLower.has_value());
    CHECK(*sampled.xiSampledLower >= report.xiLower - 1e-9);
    CHECK(*sampled.xiSampledLower <= report.xiUpper + 1e-9);
}

TEST_CASE("uncertainty product never dips below one") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EnsembleSpec spec{10, 12, 1 + static_cast<Index>(seed % 3), seed};
        Matrix candidates[] = {randomSparse(spec), randomLowrank(spec),
                               randomSparse(spec) + randomLowrank(spec)};
        for (const Matrix& m : candidates) {
            IncoherenceReport report = conditionReport(m, m);
            CHECK(report.uncertaintyProductUpper >= 1.0 - 1e-9);
        }
    }

    // the single-cell pair attains the principle with equality
    Matrix cell = Matrix::Zero(5, 5);
    cell(2, 4) = 1.0;
    IncoherenceReport tight = conditionReport(cell, cell);
    CHECK(tight.mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tight.inc == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tight.mu * tight.inc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("condition report rejects degenerate inputs") {
    Matrix zero = Matrix::Zero(3, 3);
    Matrix some = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(conditionReport(zero, some), std::invalid_argument);
    CHECK_THROWS_AS(conditionReport(some, zero), std::invalid_argument);
}
