// Command-line front end: decompose a matrix, analyze or certify a
// decomposition, and run the batch experiments.

#include "slr/certificate.hpp"
#include "slr/experiments.hpp"
#include "slr/io.hpp"
#include "slr/serialize.hpp"
#include "slr/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace slr;

void writeJsonFile(const Json& value, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << value.dump(2) << "\n";
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

Matrix readInput(const std::string& path) { return readMatrix(path, formatFromExtension(path)); }

void addSolverFlags(CLI::App* cmd, SolverConfig& config) {
    cmd->add_option("--rho", config.rhoInit, "initial penalty (<= 0 selects automatically)");
    cmd->add_option("--tol-primal", config.tolPrimal, "relative primal residual tolerance");
    cmd->add_option("--tol-change", config.tolChange, "relative iterate-change tolerance");
    cmd->add_option("--max-iters", config.maxIters, "iteration cap");
    cmd->add_flag("--no-adaptive-rho", [&config](std::int64_t) { config.adaptiveRho = false; },
                  "keep the penalty fixed");
}

int runAll(CLI::App& app, int argc, char** argv) {
    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse-plus-low-rank matrix decomposition toolkit"};
    app.require_subcommand(1);

    // decompose ------------------------------------------------------------
    auto* decomposeCmd = app.add_subcommand("decompose", "split a matrix into sparse + low-rank");
    std::string inputPath, outSparse, outLowrank, reportPath;
    std::optional<double> gammaOpt, tOpt;
    double decomposeZeroTol = 0;
    SolverConfig solverConfig;
    decomposeCmd->add_option("--input", inputPath, "matrix to decompose (.mtx/.mm/.csv)")
        ->required();
    decomposeCmd->add_option("--gamma", gammaOpt, "trade-off weight on the sparse term");
    decomposeCmd->add_option("--t", tOpt, "trade-off parameter in (0,1); gamma = t/(1-t)");
    decomposeCmd->add_option("--out-sparse", outSparse, "where to write the sparse part");
    decomposeCmd->add_option("--out-lowrank", outLowrank, "where to write the low-rank part");
    decomposeCmd->add_option("--report", reportPath, "write a JSON solve + optimality report");
    decomposeCmd->add_option("--zero-tol", decomposeZeroTol,
                             "support threshold used by the optimality report");
    addSolverFlags(decomposeCmd, solverConfig);
    decomposeCmd->callback([&] {
        if (gammaOpt.has_value() == tOpt.has_value())
            throw std::invalid_argument("decompose: pass exactly one of --gamma and --t");
        Matrix c = readInput(inputPath);
        DecompositionResult result;
        if (tOpt) {
            result = decomposeT(c, *tOpt, solverConfig);
        } else {
            solverConfig.gamma = *gammaOpt;
            result = decompose(c, solverConfig);
        }
        std::printf("iterations       %lld\n", static_cast<long long>(result.iterations));
        std::printf("converged        %s\n", result.converged ? "yes" : "no");
        std::printf("primal residual  %.6e\n", result.primalResidual);
        std::printf("objective        %.12g\n", result.objective);
        std::printf("gamma            %.12g\n", result.gammaUsed);
        if (!outSparse.empty())
            writeMatrix(result.aHat, outSparse, formatFromExtension(outSparse));
        if (!outLowrank.empty())
            writeMatrix(result.bHat, outLowrank, formatFromExtension(outLowrank));
        if (!reportPath.empty()) {
            Json report{{"decomposition", toJson(result)},
                        {"optimality", toJson(checkOptimality(result.aHat, result.bHat,
                                                              result.gammaUsed,
                                                              decomposeZeroTol))}};
            writeJsonFile(report, reportPath);
        }
    });

    // analyze ----------------------------------------------------------------
    auto* analyzeCmd = app.add_subcommand("analyze", "incoherence report for a known split");
    std::string analyzeSparse, analyzeLowrank, analyzeJson;
    ReportOptions reportOptions;
    analyzeCmd->add_option("--sparse", analyzeSparse, "sparse component")->required();
    analyzeCmd->add_option("--lowrank", analyzeLowrank, "low-rank component")->required();
    analyzeCmd->add_option("--samples", reportOptions.xiSamples,
                           "random tangent samples for the xi lower bound");
    analyzeCmd->add_option("--seed", reportOptions.seed, "seed for the sampled bound");
    analyzeCmd->add_option("--zero-tol", reportOptions.zeroTol, "support threshold");
    analyzeCmd->add_option("--json", analyzeJson, "write the report as JSON");
    analyzeCmd->callback([&] {
        Matrix a = readInput(analyzeSparse);
        Matrix b = readInput(analyzeLowrank);
        IncoherenceReport report = conditionReport(a, b, reportOptions);
        std::printf("mu               %.12g\n", report.mu);
        std::printf("degree           [%lld, %lld]%s\n", static_cast<long long>(report.degMin),
                    static_cast<long long>(report.degMax),
                    report.degenerateSupport ? " (degenerate)" : "");
        std::printf("inc              %.12g  (row %.12g, col %.12g)\n", report.inc,
                    report.betaRow, report.betaCol);
        std::printf("xi bracket       [%.12g, %.12g]\n", report.xiLower, report.xiUpper);
        if (report.xiSampledLower)
            std::printf("xi sampled lower %.12g\n", *report.xiSampledLower);
        std::printf("mu * xi <= %.12g  (theorem needs < 1/6: %s)\n",
                    report.uncertaintyProductUpper, report.theoremCondition ? "yes" : "no");
        auto printRange = [](const char* name, const GammaRange& r) {
            std::printf("%s  (%.12g, %.12g)%s\n", name, r.lower, r.upper,
                        r.valid ? "" : "  [conditions not met]");
        };
        printRange("gamma (theorem) ", report.gammaRangeThm);
        printRange("gamma (degree)  ", report.gammaRangeCor);
        if (report.gammaRecommended)
            std::printf("gamma recommended %.12g\n", *report.gammaRecommended);
        if (!analyzeJson.empty()) writeJsonFile(toJson(report), analyzeJson);
    });

    // certify ----------------------------------------------------------------
    auto* certifyCmd = app.add_subcommand("certify", "optimality certificate for a known split");
    std::string certifySparse, certifyLowrank, certifyJson;
    double certifyGamma = 0;
    CertificateOptions certOptions;
    certifyCmd->add_option("--sparse", certifySparse, "sparse component")->required();
    certifyCmd->add_option("--lowrank", certifyLowrank, "low-rank component")->required();
    certifyCmd->add_option("--gamma", certifyGamma, "trade-off weight")->required();
    certifyCmd->add_option("--zero-tol", certOptions.zeroTol, "support threshold");
    certifyCmd->add_option("--json", certifyJson, "write the certificate as JSON");
    certifyCmd->callback([&] {
        Matrix a = readInput(certifySparse);
        Matrix b = readInput(certifyLowrank);
        CertificateResult cert = buildCertificate(a, b, certifyGamma, certOptions);
        std::printf("verdict                %s\n", toString(cert.verdict));
        std::printf("transversality sigma   %.12g\n", cert.transversalitySigma);
        std::printf("fixed-point iterations %lld\n",
                    static_cast<long long>(cert.fixedPointIters));
        std::printf("|P_T(Q) - UV'|_F       %.6e\n", cert.condPtEqualsUv);
        std::printf("|P_Om(Q) - g sign|_F   %.6e\n", cert.condPomegaEqualsSign);
        std::printf("|P_Tperp(Q)|           %.12g  (needs < 1)\n", cert.condTperpNorm);
        std::printf("|P_Omc(Q)|_inf         %.12g  (needs < gamma = %.12g)\n",
                    cert.condOmegacInf, certifyGamma);
        if (!certifyJson.empty()) writeJsonFile(toJson(cert), certifyJson);
    });

    // phase ------------------------------------------------------------------
    auto* phaseCmd = app.add_subcommand("phase", "random-ensemble recovery phase diagram");
    PhaseDiagramConfig phaseConfig;
    std::string phaseM = "10:10:250", phaseK = "1:1:12", phaseOut, phasePgm,
                phasePolicy = "recommended";
    phaseCmd->add_option("--n", phaseConfig.n, "matrix side length");
    phaseCmd->add_option("--m", phaseM, "support-size grid lo:step:hi");
    phaseCmd->add_option("--k", phaseK, "rank grid lo:step:hi");
    phaseCmd->add_option("--trials", phaseConfig.trialsPerCell, "trials per cell");
    phaseCmd->add_option("--seed", phaseConfig.seed, "base seed");
    phaseCmd->add_option("--out", phaseOut, "write cells as CSV");
    phaseCmd->add_option("--pgm", phasePgm, "write success probabilities as PGM");
    phaseCmd->add_option("--gamma-policy", phasePolicy,
                         "recommended | fixed | sweep (sweep is much slower)")
        ->check(CLI::IsMember({"recommended", "fixed", "sweep"}));
    phaseCmd->add_option("--gamma", phaseConfig.fixedGamma, "weight for --gamma-policy fixed");
    phaseCmd->add_option("--success-tol", phaseConfig.successTol,
                         "recovery-error threshold counting a trial as success");
    phaseCmd->add_option("--threads", phaseConfig.threads, "worker threads (0 = all cores)");
    phaseCmd->callback([&] {
        phaseConfig.mGrid = parseIntGrid(phaseM);
        phaseConfig.kGrid = parseIntGrid(phaseK);
        phaseConfig.policy = phasePolicy == "fixed"
                                 ? GammaPolicy::Fixed
                                 : phasePolicy == "sweep" ? GammaPolicy::SweepMidpoint
                                                          : GammaPolicy::RecommendedFromTruth;
        PhaseDiagram diagram = phaseDiagram(phaseConfig);
        double total = 0;
        for (const PhaseCell& cell : diagram.cells) total += cell.successProb;
        std::printf("cells %zu, mean success %.4f\n", diagram.cells.size(),
                    total / static_cast<double>(diagram.cells.size()));
        if (!phaseOut.empty()) writePhaseCsv(diagram, phaseOut);
        if (!phasePgm.empty()) writePhasePgm(diagram, phasePgm);
    });

    // gamma-sweep --------------------------------------------------------------
    auto* sweepCmd = app.add_subcommand("gamma-sweep", "trace solutions across the trade-off");
    std::string sweepInput, sweepSparse, sweepLowrank, sweepOut, sweepJson,
                sweepGrid = "0.05:0.05:0.95";
    SweepConfig sweepConfig;
    sweepCmd->add_option("--input", sweepInput, "matrix to sweep")->required();
    sweepCmd->add_option("--sparse", sweepSparse, "ground-truth sparse part (optional)");
    sweepCmd->add_option("--lowrank", sweepLowrank, "ground-truth low-rank part (optional)");
    sweepCmd->add_option("--t-grid", sweepGrid, "t grid lo:step:hi inside (0,1)");
    sweepCmd->add_option("--eps", sweepConfig.eps, "offset for the difference curve");
    sweepCmd->add_option("--threshold", sweepConfig.diffThreshold,
                         "difference level below which points join a plateau");
    sweepCmd->add_option("--out", sweepOut, "write the curve as CSV");
    sweepCmd->add_option("--json", sweepJson, "write the full result as JSON");
    addSolverFlags(sweepCmd, sweepConfig.solver);
    sweepCmd->callback([&] {
        if (sweepSparse.empty() != sweepLowrank.empty())
            throw std::invalid_argument(
                "gamma-sweep: pass both --sparse and --lowrank or neither");
        Matrix c = readInput(sweepInput);
        sweepConfig.tGrid = parseGrid(sweepGrid).values();
        SweepResult result;
        if (!sweepSparse.empty()) {
            Matrix aTrue = readInput(sweepSparse);
            Matrix bTrue = readInput(sweepLowrank);
            result = gammaSweep(c, sweepConfig, &aTrue, &bTrue);
        } else {
            result = gammaSweep(c, sweepConfig);
        }
        std::printf("plateaus %zu\n", result.plateaus.size());
        for (const Plateau& p : result.plateaus)
            std::printf("  t in [%.6g, %.6g]  %s\n", p.tStart, p.tEnd, p.label.c_str());
        if (result.chosenT)
            std::printf("chosen t %.6g  (gamma %.6g)\n", *result.chosenT,
                        *result.chosenT / (1 - *result.chosenT));
        if (!sweepOut.empty()) writeSweepCsv(result, sweepOut);
        if (!sweepJson.empty()) writeJsonFile(toJson(result), sweepJson);
    });

    // rigidity -----------------------------------------------------------------
    auto* rigidityCmd = app.add_subcommand("rigidity", "planted sparse + low-rank demonstration");
    Index rigidityN = 50;
    double rigidityEps = 0.1;
    std::uint64_t rigiditySeed = 0;
    std::string rigidityJson;
    rigidityCmd->add_option("--n", rigidityN, "matrix side length");
    rigidityCmd->add_option("--epsilon", rigidityEps, "target rank fraction in (0,1]");
    rigidityCmd->add_option("--seed", rigiditySeed, "instance seed");
    rigidityCmd->add_option("--json", rigidityJson, "write the result as JSON");
    rigidityCmd->callback([&] {
        RigidityResult result = rigidityDemo(rigidityN, rigidityEps, rigiditySeed);
        std::printf("n %lld, planted support %lld, target rank %lld\n",
                    static_cast<long long>(result.n), static_cast<long long>(result.mPlanted),
                    static_cast<long long>(result.kTarget));
        std::printf("recovered support %lld, recovered rank %lld\n",
                    static_cast<long long>(result.supportSizeFound),
                    static_cast<long long>(result.rankFound));
        std::printf("gamma %.12g, certified %s\n", result.gammaUsed,
                    result.certified ? "yes" : "no");
        if (!rigidityJson.empty()) writeJsonFile(toJson(result), rigidityJson);
    });

    return runAll(app, argc, argv);
}
