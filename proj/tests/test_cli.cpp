// Drives the ulab binary end to end: output formats, determinism, exit codes.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"
#include "ulab/ulab.hpp"

using namespace ulab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(ULAB_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ulab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        io::write_file_atomic(p, text);
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, BuildFftTwoHasOneGate) {
    const auto r = run("build-fft --n 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(io::circuit_from_json(r.out).size(), 1u);
}

TEST_F(Cli, BuildFftEightHasFourteenGates) {
    const auto r = run("build-fft --n 8");
    ASSERT_EQ(r.code, 0);
    const auto c = io::circuit_from_json(r.out);
    EXPECT_EQ(c.size(), 14u);
    const auto counts = count_kinds(c);
    EXPECT_EQ(counts.butterflies, 12u);
    EXPECT_EQ(counts.swaps, 2u);
    EXPECT_EQ(c, fft_circuit(8));
}

TEST_F(Cli, BuildFftRejectsSix) {
    const auto r = run("build-fft --n 6", true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("NotPowerOfTwo"), std::string::npos);
}

TEST_F(Cli, BuildFftWritesOutFile) {
    ASSERT_EQ(run("--out " + path("fft.json") + " build-fft --n 4").code, 0);
    EXPECT_EQ(io::circuit_from_json(io::read_file(path("fft.json"))), fft_circuit(4));
}

TEST_F(Cli, TraceFftFour) {
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(4)));
    const auto r = run("trace " + circuit + " --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("phi_final").get<double>(), 8.0, 1e-12);
    EXPECT_EQ(j.at("all_bounds_ok"), true);
}

TEST_F(Cli, TraceWritesCsvAndSummaryFiles) {
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(8)));
    ASSERT_EQ(run("trace " + circuit + " --out " + path("t.csv")).code, 0);
    const auto csv = io::read_file(path("t.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,k,l,kind,phi,delta_phi,bound_ok");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 1 + 14);
    const auto j = nlohmann::json::parse(io::read_file(path("t.summary.json")));
    EXPECT_EQ(j.at("m"), 14);
}

TEST_F(Cli, TraceEmptyCircuit) {
    const auto circuit = write("c.json", "{\"n\":3,\"gates\":[]}");
    const auto r = run("trace " + circuit + " --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("phi_final").get<double>(), 0.0);
}

TEST_F(Cli, TraceRejectsNonUnitary) {
    const auto circuit = write("bad.json", "{\"n\":2,\"gates\":[{\"k\":0,\"l\":1,\"a\":[[1,0],[1,0],[0,0],[1,0]]}]}");
    const auto r = run("trace " + circuit, true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("NotUnitary"), std::string::npos);
}

TEST_F(Cli, TraceRejectsMissingFileAndMorgensternAtLargeN) {
    EXPECT_EQ(run("trace " + path("nope.json")).code, 2);
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(16)));
    EXPECT_EQ(run("trace " + circuit + " --morgenstern").code, 2);
}

TEST_F(Cli, TraceMorgensternColumn) {
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(4)));
    const auto r = run("trace " + circuit + " --morgenstern --quiet");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "step,k,l,kind,phi,delta_phi,bound_ok,morgenstern");
}

TEST_F(Cli, RoundTripTraceMatchesInMemory) {
    ASSERT_EQ(run("--out " + path("fft.json") + " build-fft --n 32").code, 0);
    const auto r = run("trace " + path("fft.json") + " --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, io::trace_summary_json(trace_circuit(fft_circuit(32))));
}

TEST_F(Cli, SimulateImpulse) {
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(4)));
    const auto r = run("simulate " + circuit + " --impulse 0");
    ASSERT_EQ(r.code, 0);
    const auto v = io::vector_from_json(r.out);
    ASSERT_EQ(v.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(v[i] - Complex{0.5}), 0.0, 1e-15);
}

TEST_F(Cli, SimulateEmptyCircuitReturnsInput) {
    const StateVector v{Complex{0.25, -1.0}, Complex{3.5, 0.125}};
    const auto circuit = write("c.json", "{\"n\":2,\"gates\":[]}");
    const auto vec = write("v.json", io::vector_to_json(v));
    const auto r = run("simulate " + circuit + " " + vec);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(io::vector_from_json(r.out), v);
}

TEST_F(Cli, SimulateFftEightAgainstDirectDft) {
    std::mt19937_64 rng(4);
    const auto v = oracle::random_vector(8, rng);
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(8)));
    const auto vec = write("v.json", io::vector_to_json(StateVector(v)));
    const auto r = run("simulate " + circuit + " " + vec);
    ASSERT_EQ(r.code, 0);
    const auto out = io::vector_from_json(r.out);
    const auto ref = oracle::apply(oracle::dft(8, true), v);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_LT(std::abs(out[i] - ref[i]), 1e-10);
}

TEST_F(Cli, SimulateDimensionMismatch) {
    const auto circuit = write("c.json", io::circuit_to_json(fft_circuit(4)));
    const auto vec = write("v.json", "[[1,0],[0,0],[0,0]]");
    const auto r = run("simulate " + circuit + " " + vec, true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("DimensionMismatch"), std::string::npos);
    EXPECT_EQ(run("simulate " + circuit + " --impulse 4").code, 2);
}

TEST_F(Cli, VerifySuitesPass) {
    EXPECT_EQ(run("verify --suite fft --n 16").code, 0);
    EXPECT_EQ(run("verify --suite morgenstern --n 4 --trials 10").code, 0);
    EXPECT_EQ(run("verify --suite potentials --n 16 --trials 1000 --seed 1").code, 0);
    EXPECT_EQ(run("verify --suite core --n 8 --trials 5").code, 0);
}

TEST_F(Cli, VerifyPrintsOneLinePerInvariant) {
    const auto r = run("verify --suite fft --n 16 --trials 5");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7 + 1);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, VerifyRejectsBadInput) {
    EXPECT_EQ(run("verify --suite nosuch").code, 2);
    EXPECT_EQ(run("verify --suite fft --n 12").code, 2);
}

TEST_F(Cli, DecomposeIdentity) {
    const auto m = write("m.json", io::matrix_to_json(TransformMatrix::identity(4)));
    const auto r = run("decompose " + m, true);
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("reference bound 1/2 n log2 n = 4"), std::string::npos);
    const auto quiet = run("decompose " + m + " --quiet");
    EXPECT_TRUE(io::circuit_from_json(quiet.out).empty());
}

TEST_F(Cli, DecomposeDftFour) {
    const auto f = dft_matrix(4, true);
    const auto m = write("m.json", io::matrix_to_json(f));
    const auto r = run("decompose " + m);
    ASSERT_EQ(r.code, 0);
    const auto c = io::circuit_from_json(r.out);
    EXPECT_LE(c.size(), 10u);
    EXPECT_LE(max_abs_diff(final_matrix(c), f), 1e-8);
}

TEST_F(Cli, DecomposeRejectsNonSquareAndNonUnitary) {
    EXPECT_EQ(run("decompose " + write("m.json", "{\"n\":2,\"entries\":[[1,0],[0,0],[0,0]]}")).code, 2);
    EXPECT_EQ(run("decompose " + write("m2.json", "{\"n\":2,\"entries\":[[1,0],[1,0],[0,0],[1,0]]}")).code, 2);
}

TEST_F(Cli, RandomIsDeterministic) {
    const auto a = run("--seed 7 random --n 4 --m 10");
    const auto b = run("random --n 4 --m 10 --seed 7");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(io::circuit_from_json(a.out), random_circuit(4, 10, 7));
    EXPECT_NE(a.out, run("--seed 8 random --n 4 --m 10").out);
}

TEST_F(Cli, TraceOutputIsByteIdentical) {
    const auto circuit = write("c.json", io::circuit_to_json(random_circuit(8, 50, 2)));
    const auto a = run("trace " + circuit + " --quiet");
    const auto b = run("trace " + circuit + " --quiet");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, io::trace_to_csv(trace_circuit(random_circuit(8, 50, 2))));
}

TEST_F(Cli, UnknownSubcommandIsInputError) {
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("").code, 2);
}
