#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slr/ensembles.hpp"
#include "slr/experiments.hpp"
#include "slr/io.hpp"
#include "slr/tangent.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace slr;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("slr_experiments_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("tolMetric sums the relative component errors") {
    Matrix aTrue = Matrix::Identity(3, 3) * 2.0;  // Frobenius norm 2 sqrt(3)
    Matrix bTrue = Matrix::Ones(3, 3);            // Frobenius norm 3
    Matrix aHat = aTrue;
    aHat(0, 0) += 0.2;
    CHECK(tolMetric(aHat, bTrue, aTrue, bTrue) ==
          doctest::Approx(0.2 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(tolMetric(aTrue, bTrue, aTrue, bTrue) == 0.0);

    CHECK_THROWS_AS(tolMetric(aTrue, bTrue, Matrix::Zero(3, 3), bTrue),
                    std::invalid_argument);
    CHECK_THROWS_AS(tolMetric(Matrix::Zero(2, 2), bTrue, aTrue, bTrue),
                    std::invalid_argument);
}

TEST_CASE("recommendedGammaFromTruth reads the structure") {
    // single cell: deg_max 1; flat rank-1 at n=16: inc 1/4
    Matrix a = Matrix::Zero(16, 16);
    a(2, 5) = 3.0;
    Matrix b = Matrix::Ones(16, 16);
    CHECK(recommendedGammaFromTruth(a, b) ==
          doctest::Approx(0.8660254037844386).epsilon(1e-12));

    CHECK_THROWS_AS(recommendedGammaFromTruth(Matrix::Zero(4, 4), b),
                    std::invalid_argument);
    CHECK_THROWS_AS(recommendedGammaFromTruth(a, Matrix::Zero(16, 16)),
                    std::invalid_argument);
}

TEST_CASE("grid parsing") {
    Grid g = parseGrid("0.1:0.2:0.9");
    auto values = g.values();
    REQUIRE(values.size() == 5);
    CHECK(values.front() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(values.back() == doctest::Approx(0.9).epsilon(1e-12));

    // inclusive endpoint despite accumulated floating-point error
    CHECK(parseGrid("0.02:0.01:0.98").values().size() == 97);
    CHECK(parseGrid("5:1:5").values().size() == 1);

    IntGrid ig = parseIntGrid("10:10:250");
    auto ints = ig.values();
    REQUIRE(ints.size() == 25);
    CHECK(ints.front() == 10);
    CHECK(ints.back() == 250);

    CHECK_THROWS_AS(parseGrid("1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parseGrid("a:1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parseGrid("1:0:2"), std::invalid_argument);
    CHECK_THROWS_AS(parseGrid("2:1:1"), std::invalid_argument);
    CHECK_THROWS_AS(parseIntGrid("1:0.5:2"), std::invalid_argument);
}

TEST_CASE("gammaSweep validates its configuration") {
    Matrix c = Matrix::Ones(4, 4);
    SweepConfig config;
    config.tGrid = {0.2, 0.5};  // too few
    CHECK_THROWS_AS(gammaSweep(c, config), std::invalid_argument);
    config.tGrid = {0.5, 0.2, 0.8};  // unsorted
    CHECK_THROWS_AS(gammaSweep(c, config), std::invalid_argument);
    config.tGrid = {0.005, 0.2, 0.8};  // below eps
    CHECK_THROWS_AS(gammaSweep(c, config), std::invalid_argument);
    config.tGrid = {0.2, 0.5, 0.8};
    Matrix truth = Matrix::Ones(4, 4);
    CHECK_THROWS_AS(gammaSweep(c, config, &truth, nullptr), std::invalid_argument);
}

TEST_CASE("gammaSweep traces a planted instance") {
    EnsembleSpec spec{10, 8, 1, 17};
    Matrix aTrue = randomSparse(spec);
    Matrix bTrue = randomLowrank(spec);
    Matrix c = aTrue + bTrue;

    SweepConfig config;
    config.tGrid = parseGrid("0.05:0.05:0.95").values();
    config.solver.tolPrimal = 1e-6;
    config.solver.maxIters = 20000;

    SweepResult plain = gammaSweep(c, config);
    CHECK(plain.tGrid.size() == 19);
    CHECK(plain.diffT.size() == 19);
    CHECK(!plain.tolT.has_value());
    for (double d : plain.diffT) CHECK(std::isfinite(d));
    for (const Plateau& p : plain.plateaus) {
        CHECK(p.tStart <= p.tEnd);
        CHECK((p.label == "all-sparse" || p.label == "middle" || p.label == "all-lowrank"));
    }
    if (plain.plateaus.size() == 3) {
        REQUIRE(plain.chosenT.has_value());
        CHECK(*plain.chosenT == doctest::Approx(0.5 * (plain.plateaus[1].tStart +
                                                       plain.plateaus[1].tEnd))
                                    .epsilon(1e-12));
    } else {
        CHECK(!plain.chosenT.has_value());
    }

    SweepResult withTruth = gammaSweep(c, config, &aTrue, &bTrue);
    REQUIRE(withTruth.tolT.has_value());
    CHECK(withTruth.tolT->size() == 19);
    // identical solver work: the diff curves agree exactly
    for (std::size_t i = 0; i < plain.diffT.size(); ++i)
        CHECK(plain.diffT[i] == withTruth.diffT[i]);
}

TEST_CASE("sweep csv layout") {
    TempDir dir;
    SweepResult result;
    result.tGrid = {0.2, 0.3};
    result.diffT = {0.5, 0.00025};
    result.tolT = std::vector<double>{1.0, 2.0};
    auto path = dir.path / "sweep.csv";
    writeSweepCsv(result, path);
    CHECK(slurp(path) == "t,diff_t,tol_t\n0.2,0.5,1\n0.3,0.00025,2\n");

    result.tolT.reset();
    writeSweepCsv(result, path);
    CHECK(slurp(path) == "t,diff_t\n0.2,0.5\n0.3,0.00025\n");
}

TEST_CASE("phaseDiagram on a tiny grid") {
    PhaseDiagramConfig config;
    config.n = 8;
    config.mGrid = IntGrid{4, 4, 8};
    config.kGrid = IntGrid{1, 1, 2};
    config.trialsPerCell = 3;
    config.seed = 5;
    config.threads = 1;
    config.solver.maxIters = 4000;

    PhaseDiagram diagram = phaseDiagram(config);
    REQUIRE(diagram.mValues.size() == 2);
    REQUIRE(diagram.kValues.size() == 2);
    REQUIRE(diagram.cells.size() == 4);
    for (const PhaseCell& cell : diagram.cells) {
        CHECK(cell.successProb >= 0.0);
        CHECK(cell.successProb <= 1.0);
        CHECK(cell.gammaMean > 0.0);
    }
    CHECK(diagram.cell(0, 0).m == 4);
    CHECK(diagram.cell(0, 0).k == 1);
    CHECK(diagram.cell(1, 1).m == 8);
    CHECK(diagram.cell(1, 1).k == 2);

    // execution order must not matter
    PhaseDiagramConfig threaded = config;
    threaded.threads = 3;
    PhaseDiagram diagram2 = phaseDiagram(threaded);
    for (std::size_t i = 0; i < diagram.cells.size(); ++i) {
        CHECK(diagram.cells[i].successProb == diagram2.cells[i].successProb);
        CHECK(diagram.cells[i].gammaMean == diagram2.cells[i].gammaMean);
    }

    PhaseDiagramConfig bad = config;
    bad.kGrid = IntGrid{0, 1, 2};
    CHECK_THROWS_AS(phaseDiagram(bad), std::invalid_argument);
    bad = config;
    bad.mGrid = IntGrid{1, 1, 100};  // exceeds n^2 = 64
    CHECK_THROWS_AS(phaseDiagram(bad), std::invalid_argument);
}

TEST_CASE("phase diagram files are deterministic bytes") {
    PhaseDiagram diagram;
    diagram.n = 8;
    diagram.mValues = {4, 8};
    diagram.kValues = {1, 2};
    diagram.cells = {PhaseCell{4, 1, 1.0, 0.5}, PhaseCell{8, 1, 2.0 / 3.0, 0.25},
                     PhaseCell{4, 2, 1.0 / 3.0, 0.125}, PhaseCell{8, 2, 0.0, 1.0}};

    TempDir dir;
    auto csv = dir.path / "phase.csv";
    writePhaseCsv(diagram, csv);
    CHECK(slurp(csv) ==
          "m,k,success_prob,gamma\n"
          "4,1,1.000000,0.5\n"
          "4,2,0.333333,0.125\n"
          "8,1,0.666667,0.25\n"
          "8,2,0.000000,1\n");

    auto pgm = dir.path / "phase.pgm";
    writePhasePgm(diagram, pgm);
    CHECK(slurp(pgm) == "P2\n2 2\n255\n255 170\n85 0\n");
}

TEST_CASE("rigidityDemo recovers a planted instance") {
    RigidityResult result = rigidityDemo(20, 0.1, 1);
    CHECK(result.n == 20);
    CHECK(result.mPlanted == 6);   // floor(20 / ln 20)
    CHECK(result.kTarget == 2);    // ceil(0.1 * 20)
    CHECK(result.gammaUsed > 0.0);
    CHECK(result.supportSizeFound >= 0);
    CHECK(result.rankFound >= 1);

    RigidityResult repeat = rigidityDemo(20, 0.1, 1);
    CHECK(repeat.supportSizeFound == result.supportSizeFound);
    CHECK(repeat.rankFound == result.rankFound);
    CHECK(repeat.certified == result.certified);

    CHECK_THROWS_AS(rigidityDemo(2, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(rigidityDemo(20, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(rigidityDemo(20, 1.5, 0), std::invalid_argument);
}
