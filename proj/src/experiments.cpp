#include "slr/experiments.hpp"

#include "slr/certificate.hpp"
#include "slr/ensembles.hpp"
#include "slr/rng.hpp"
#include "slr/tangent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace slr {

namespace {

std::string formatFixed(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string formatShort(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream openForWrite(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

double tolMetric(const Matrix& aHat, const Matrix& bHat, const Matrix& aTrue,
                 const Matrix& bTrue) {
    if (aHat.rows() != aTrue.rows() || aHat.cols() != aTrue.cols() ||
        bHat.rows() != bTrue.rows() || bHat.cols() != bTrue.cols())
        throw std::invalid_argument("tolMetric: shape mismatch");
    double aNorm = aTrue.norm();
    double bNorm = bTrue.norm();
    if (aNorm == 0 || bNorm == 0)
        throw std::invalid_argument("tolMetric: ground-truth components must be nonzero");
    return (aHat - aTrue).norm() / aNorm + (bHat - bTrue).norm() / bNorm;
}

double recommendedGammaFromTruth(const Matrix& aTrue, const Matrix& bTrue) {
    SupportPattern omega = supportOf(aTrue);
    if (omega.empty())
        throw std::invalid_argument("recommendedGammaFromTruth: sparse component is zero");
    TangentSpaceLR t = tangentSpaceOf(bTrue);
    if (t.rank() == 0)
        throw std::invalid_argument("recommendedGammaFromTruth: low-rank component is zero");
    double degMax = static_cast<double>(degrees(omega).degMax);
    return std::sqrt(3.0 * incoherence(t) / degMax);
}

namespace {

// Coarse sweep used only to pick a gamma: accuracy off the plateaus does not
// matter, so the iteration budget is capped hard. The range stops at t = 0.7
// because the all-lowrank plateau always extends past it when it exists at
// all, and the cap keeps the cost per resolved gamma around a second.
//
// On easy instances the all-sparse plateau can sit entirely below the grid
// floor, leaving only two detected plateaus; the midpoint of the unique
// plateau labeled "middle" is still the right pick, so selection is on the
// label rather than on the full three-plateau structure.
struct MidpointResolution {
    std::optional<double> gamma;  // midpoint of the stable middle window
    double bestTol = std::numeric_limits<double>::infinity();  // vs truth, when given
};

MidpointResolution sweepMidpointGamma(const Matrix& c, const Matrix* aTrue,
                                      const Matrix* bTrue) {
    SweepConfig sweep;
    sweep.tGrid = Grid{0.02, 0.01, 0.70}.values();
    sweep.solver.tolPrimal = 1e-6;
    sweep.solver.tolChange = 1e-8;
    sweep.solver.maxIters = 1000;
    SweepResult swept = gammaSweep(c, sweep, aTrue, bTrue);
    MidpointResolution out;
    if (swept.tolT)
        for (double tol : *swept.tolT) out.bestTol = std::min(out.bestTol, tol);
    // Near the recovery frontier the middle region can fragment into several
    // short runs; the longest one is the stable window (ties keep the first).
    const Plateau* middle = nullptr;
    for (const Plateau& p : swept.plateaus) {
        if (p.label != "middle") continue;
        if (!middle || (p.tEnd - p.tStart) > (middle->tEnd - middle->tStart)) middle = &p;
    }
    if (middle) {
        double t = 0.5 * (middle->tStart + middle->tEnd);
        out.gamma = t / (1.0 - t);
    }
    return out;
}

}  // namespace

double resolveGammaFromTruth(const Matrix& c, const Matrix& aTrue, const Matrix& bTrue) {
    SupportPattern omega = supportOf(aTrue);
    if (omega.empty())
        throw std::invalid_argument("resolveGammaFromTruth: sparse component is zero");
    TangentSpaceLR t = tangentSpaceOf(bTrue);
    if (t.rank() == 0)
        throw std::invalid_argument("resolveGammaFromTruth: low-rank component is zero");
    double degMax = static_cast<double>(degrees(omega).degMax);
    double inc = incoherence(t);
    double formula = std::sqrt(3.0 * inc / degMax);
    if (degMax * inc < 1.0 / 12.0) return formula;
    return sweepMidpointGamma(c, nullptr, nullptr).gamma.value_or(formula);
}

// ---------------------------------------------------------------------------
// grids

namespace {

std::array<std::string, 3> splitGrid(const std::string& text) {
    auto first = text.find(':');
    auto last = text.rfind(':');
    if (first == std::string::npos || first == last)
        throw std::invalid_argument("grid must be 'lo:step:hi', got '" + text + "'");
    return {text.substr(0, first), text.substr(first + 1, last - first - 1),
            text.substr(last + 1)};
}

double parseGridNumber(const std::string& token, const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used == token.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("bad grid number '" + token + "' in '" + text + "'");
}

}  // namespace

std::vector<double> Grid::values() const {
    if (!(step > 0)) throw std::invalid_argument("grid step must be positive");
    if (hi < lo) throw std::invalid_argument("grid hi must be >= lo");
    auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

std::vector<Index> IntGrid::values() const {
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    if (hi < lo) throw std::invalid_argument("grid hi must be >= lo");
    std::vector<Index> out;
    for (Index v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

Grid parseGrid(const std::string& text) {
    auto parts = splitGrid(text);
    Grid g{parseGridNumber(parts[0], text), parseGridNumber(parts[1], text),
           parseGridNumber(parts[2], text)};
    g.values();  // validate eagerly
    return g;
}

IntGrid parseIntGrid(const std::string& text) {
    auto parts = splitGrid(text);
    IntGrid g;
    for (auto [target, token] : {std::pair{&g.lo, &parts[0]}, {&g.step, &parts[1]},
                                 {&g.hi, &parts[2]}}) {
        double v = parseGridNumber(*token, text);
        if (v != std::floor(v)) throw std::invalid_argument("grid value '" + *token + "' is not an integer");
        *target = static_cast<Index>(v);
    }
    g.values();
    return g;
}

// ---------------------------------------------------------------------------
// gamma sweep

namespace {

// Cache key for a t value; the grids in play are far coarser than 1e-9.
long long quantize(double t) { return std::llround(t * 1e9); }

}  // namespace

SweepResult gammaSweep(const Matrix& c, const SweepConfig& config, const Matrix* aTrue,
                       const Matrix* bTrue) {
    requireFinite(c, "gammaSweep");
    if (config.tGrid.size() < 3)
        throw std::invalid_argument("gammaSweep: need at least 3 grid points");
    if (!(config.eps > 0)) throw std::invalid_argument("gammaSweep: eps must be positive");
    if (!(config.diffThreshold > 0))
        throw std::invalid_argument("gammaSweep: diffThreshold must be positive");
    for (double t : config.tGrid)
        if (!(t > config.eps) || !(t < 1))
            throw std::invalid_argument("gammaSweep: grid points must lie in (eps, 1)");
    if (!std::is_sorted(config.tGrid.begin(), config.tGrid.end()))
        throw std::invalid_argument("gammaSweep: grid must be ascending");
    if ((aTrue == nullptr) != (bTrue == nullptr))
        throw std::invalid_argument("gammaSweep: supply both ground-truth components or neither");

    // Every t the sweep needs, solved in ascending order so each solve warm
    // starts from its neighbor.
    std::map<long long, DecompositionResult> solutions;
    for (double t : config.tGrid) {
        solutions.emplace(quantize(t - config.eps), DecompositionResult{});
        solutions.emplace(quantize(t), DecompositionResult{});
    }
    const DecompositionResult* previous = nullptr;
    for (auto& [key, slot] : solutions) {
        double t = static_cast<double>(key) / 1e9;
        SolverConfig solver = config.solver;
        solver.gamma = t / (1.0 - t);
        slot = previous
                   ? decompose(c, solver, WarmStart{previous->aHat, previous->bHat,
                                                    previous->lambda})
                   : decompose(c, solver);
        slot.tUsed = t;
        previous = &slot;
    }

    SweepResult out;
    out.tGrid = config.tGrid;
    out.diffT.reserve(config.tGrid.size());
    if (aTrue) out.tolT.emplace();
    for (double t : config.tGrid) {
        const auto& at = solutions.at(quantize(t));
        const auto& before = solutions.at(quantize(t - config.eps));
        out.diffT.push_back((before.aHat - at.aHat).norm() + (before.bHat - at.bHat).norm());
        if (aTrue) out.tolT->push_back(tolMetric(at.aHat, at.bHat, *aTrue, *bTrue));
    }

    // Maximal runs below the threshold; runs shorter than 3 grid points are
    // noise, not plateaus.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < out.diffT.size();) {
        if (out.diffT[i] >= config.diffThreshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < out.diffT.size() && out.diffT[j + 1] < config.diffThreshold) ++j;
        if (j - i + 1 >= 3) runs.emplace_back(i, j);
        i = j + 1;
    }

    const double cFro = c.norm();
    const double cL1 = c.cwiseAbs().sum();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        auto [i, j] = runs[r];
        Plateau plateau;
        plateau.tStart = out.tGrid[i];
        plateau.tEnd = out.tGrid[j];
        plateau.label = "middle";
        const auto& mid = solutions.at(quantize(out.tGrid[(i + j) / 2]));
        if (r == 0 && mid.bHat.norm() <= 0.01 * std::max(cFro, 1e-300))
            plateau.label = "all-sparse";
        else if (r + 1 == runs.size() &&
                 mid.aHat.cwiseAbs().sum() <= 0.01 * std::max(cL1, 1e-300))
            plateau.label = "all-lowrank";
        out.plateaus.push_back(std::move(plateau));
    }
    if (out.plateaus.size() == 3) {
        out.plateaus[1].label = "middle";
        out.chosenT = 0.5 * (out.plateaus[1].tStart + out.plateaus[1].tEnd);
    }
    return out;
}

void writeSweepCsv(const SweepResult& result, const std::filesystem::path& path) {
    auto out = openForWrite(path);
    out << "t,diff_t";
    if (result.tolT) out << ",tol_t";
    out << "\n";
    for (std::size_t i = 0; i < result.tGrid.size(); ++i) {
        out << formatShort(result.tGrid[i]) << "," << formatShort(result.diffT[i]);
        if (result.tolT) out << "," << formatShort((*result.tolT)[i]);
        out << "\n";
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// phase diagram

const PhaseCell& PhaseDiagram::cell(std::size_t mi, std::size_t ki) const {
    return cells.at(ki * mValues.size() + mi);
}

PhaseDiagram phaseDiagram(const PhaseDiagramConfig& config) {
    if (config.n < 2) throw std::invalid_argument("phaseDiagram: n must be >= 2");
    if (config.trialsPerCell < 1)
        throw std::invalid_argument("phaseDiagram: trialsPerCell must be >= 1");
    if (!(config.successTol > 0))
        throw std::invalid_argument("phaseDiagram: successTol must be positive");
    std::vector<Index> mValues = config.mGrid.values();
    std::vector<Index> kValues = config.kGrid.values();
    for (Index m : mValues)
        if (m < 1 || m > config.n * config.n)
            throw std::invalid_argument("phaseDiagram: m grid leaves [1, n^2]");
    for (Index k : kValues)
        if (k < 1 || k > config.n)
            throw std::invalid_argument("phaseDiagram: k grid leaves [1, n]");

    PhaseDiagram diagram;
    diagram.n = config.n;
    diagram.mValues = mValues;
    diagram.kValues = kValues;
    diagram.cells.resize(mValues.size() * kValues.size());

    std::mutex logMutex;
    auto runCell = [&](std::size_t index) {
        Index m = mValues[index % mValues.size()];
        Index k = kValues[index / mValues.size()];
        std::uint64_t cellSeed = deriveSeed(
            config.seed, RngStream::PhaseCell,
            (static_cast<std::uint64_t>(m) << 20) | static_cast<std::uint64_t>(k));
        auto trialSpec = [&](int trial) {
            return EnsembleSpec{config.n, m, k,
                                deriveSeed(cellSeed, RngStream::PhaseTrial,
                                           static_cast<std::uint64_t>(trial))};
        };

        // One gamma per cell, recorded in the CSV and reused by every trial.
        // Resolution prefers the closed form inside its validity regime; the
        // sweep-midpoint path retries across the cell's first few instances,
        // because a single instance near the recovery frontier can lack a
        // stable middle plateau even when the cell as a whole is recoverable.
        double cellGamma = config.fixedGamma;
        if (config.policy != GammaPolicy::Fixed) {
            try {
                EnsembleSpec first = trialSpec(0);
                Matrix aFirst = randomSparse(first);
                Matrix bFirst = randomLowrank(first);
                double formula = recommendedGammaFromTruth(aFirst, bFirst);
                bool closedForm = false;
                if (config.policy == GammaPolicy::RecommendedFromTruth) {
                    double degMax =
                        static_cast<double>(degrees(supportOf(aFirst)).degMax);
                    closedForm =
                        degMax * incoherence(tangentSpaceOf(bFirst)) < 1.0 / 12.0;
                }
                if (closedForm) {
                    cellGamma = formula;
                } else {
                    MidpointResolution res =
                        sweepMidpointGamma(aFirst + bFirst, &aFirst, &bFirst);
                    std::optional<double> midpoint = res.gamma;
                    // Retry on the cell's next instances only when the first
                    // sweep came close to the truth somewhere without showing
                    // a stable window — the frontier signature, where one bad
                    // draw should not pin the whole cell to the out-of-regime
                    // closed form. Cells nowhere near the truth at any weight
                    // go straight to the fallback.
                    if (!midpoint && res.bestTol < 0.5) {
                        const int attempts = std::min(config.trialsPerCell, 3);
                        for (int attempt = 1; attempt < attempts && !midpoint;
                             ++attempt) {
                            EnsembleSpec spec = trialSpec(attempt);
                            midpoint = sweepMidpointGamma(randomSparse(spec) +
                                                              randomLowrank(spec),
                                                          nullptr, nullptr)
                                           .gamma;
                        }
                    }
                    cellGamma = midpoint.value_or(formula);
                }
            } catch (const std::exception& e) {
                std::scoped_lock lock(logMutex);
                std::cerr << "phase cell m=" << m << " k=" << k
                          << " gamma resolution failed: " << e.what() << "\n";
                diagram.cells[index] = PhaseCell{m, k, 0.0, 0.0};
                return;
            }
        }

        int successes = 0;
        for (int trial = 0; trial < config.trialsPerCell; ++trial) {
            try {
                EnsembleSpec spec = trialSpec(trial);
                Matrix aTrue = randomSparse(spec);
                Matrix bTrue = randomLowrank(spec);
                SolverConfig solver = config.solver;
                solver.gamma = cellGamma;
                DecompositionResult result = decompose(aTrue + bTrue, solver);
                if (tolMetric(result.aHat, result.bHat, aTrue, bTrue) < config.successTol)
                    ++successes;
            } catch (const std::exception& e) {
                std::scoped_lock lock(logMutex);
                std::cerr << "phase cell m=" << m << " k=" << k << " trial " << trial
                          << " failed: " << e.what() << "\n";
            }
        }
        diagram.cells[index] = PhaseCell{m, k,
                                         static_cast<double>(successes) / config.trialsPerCell,
                                         cellGamma};
    };

    unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(diagram.cells.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < diagram.cells.size(); ++i) runCell(i);
    } else {
        std::atomic<std::size_t> nextCell{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = nextCell.fetch_add(1); i < diagram.cells.size();
                     i = nextCell.fetch_add(1))
                    runCell(i);
            });
        for (auto& worker : pool) worker.join();
    }
    return diagram;
}

void writePhaseCsv(const PhaseDiagram& diagram, const std::filesystem::path& path) {
    auto out = openForWrite(path);
    out << "m,k,success_prob,gamma\n";
    for (std::size_t mi = 0; mi < diagram.mValues.size(); ++mi)
        for (std::size_t ki = 0; ki < diagram.kValues.size(); ++ki) {
            const PhaseCell& cell = diagram.cell(mi, ki);
            out << cell.m << "," << cell.k << "," << formatFixed(cell.successProb, 6)
                << "," << formatShort(cell.gammaMean) << "\n";
        }
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

void writePhasePgm(const PhaseDiagram& diagram, const std::filesystem::path& path) {
    auto out = openForWrite(path);
    out << "P2\n" << diagram.mValues.size() << " " << diagram.kValues.size() << "\n255\n";
    for (std::size_t ki = 0; ki < diagram.kValues.size(); ++ki) {
        for (std::size_t mi = 0; mi < diagram.mValues.size(); ++mi) {
            if (mi) out << " ";
            out << static_cast<int>(std::lround(255.0 * diagram.cell(mi, ki).successProb));
        }
        out << "\n";
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// rigidity demonstration

RigidityResult rigidityDemo(Index n, double epsilon, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("rigidityDemo: n must be >= 3");
    if (!(epsilon > 0) || !(epsilon <= 1))
        throw std::invalid_argument("rigidityDemo: epsilon must lie in (0, 1]");

    RigidityResult out;
    out.n = n;
    out.mPlanted = static_cast<Index>(std::floor(static_cast<double>(n) /
                                                 std::log(static_cast<double>(n))));
    out.kTarget = static_cast<Index>(std::ceil(epsilon * static_cast<double>(n)));

    EnsembleSpec sparseSpec{n, std::max<Index>(out.mPlanted, 1), out.kTarget,
                            deriveSeed(seed, RngStream::RigiditySparse)};
    EnsembleSpec lowrankSpec = sparseSpec;
    lowrankSpec.seed = deriveSeed(seed, RngStream::RigidityLowrank);
    Matrix aTrue = randomSparse(sparseSpec);
    Matrix bTrue = randomLowrank(lowrankSpec);
    Matrix c = aTrue + bTrue;

    SolverConfig solver;
    solver.gamma = resolveGammaFromTruth(c, aTrue, bTrue);
    out.gammaUsed = solver.gamma;
    DecompositionResult result = decompose(c, solver);

    double zeroTol = 1e-6 * linfNorm(result.aHat);
    SupportPattern omega = supportOf(result.aHat, zeroTol);
    out.supportSizeFound = static_cast<Index>(omega.size());
    out.rankFound = svd(result.bHat, 1e-6).numericalRank;

    if (!omega.empty() && out.rankFound > 0) {
        CertificateOptions opts;
        opts.zeroTol = zeroTol;
        opts.rankTol = 1e-6;
        out.certified =
            buildCertificate(result.aHat, result.bHat, solver.gamma, opts).verdict ==
            Verdict::Pass;
    }
    return out;
}

}  // namespace slr
