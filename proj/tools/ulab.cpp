// ulab: build, simulate and trace unitary layered circuits.
//
// Exit codes: 0 ok, 1 invariant failure (verify), 2 input or validation error,
// 3 per-step bound violated during a trace.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ulab/ulab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitInput = 2;
constexpr int kExitBound = 3;

struct RunConfig {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    bool quiet = false;

    std::size_t n = 0;
    std::size_t gate_count = 0;
    std::size_t trials = 100;
    std::string suite;
    std::string input;
    std::string vector_path;
    std::optional<std::size_t> impulse;
    std::string summary_path;
    bool morgenstern = false;
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        ulab::io::write_file_atomic(cfg.out, text);
    }
}

void note(const RunConfig& cfg, const std::string& line) {
    if (!cfg.quiet) std::cerr << line << "\n";
}

std::string bound_line(std::size_t n) {
    const double b = 0.5 * static_cast<double>(n) * std::log2(static_cast<double>(n));
    return "reference bound 1/2 n log2 n = " + ulab::io::fmt_real(b);
}

int cmd_build_fft(const RunConfig& cfg) {
    const auto c = ulab::fft_circuit(cfg.n);
    emit(cfg, ulab::io::circuit_to_json(c));
    const auto counts = ulab::count_kinds(c);
    note(cfg, "gates " + std::to_string(c.size()) + " (butterflies " + std::to_string(counts.butterflies) +
                  ", swaps " + std::to_string(counts.swaps) + "); " + bound_line(cfg.n));
    return kExitOk;
}

int cmd_random(const RunConfig& cfg) {
    emit(cfg, ulab::io::circuit_to_json(ulab::random_circuit(cfg.n, cfg.gate_count, cfg.seed)));
    return kExitOk;
}

int cmd_trace(const RunConfig& cfg) {
    const auto c = ulab::io::circuit_from_json(ulab::io::read_file(cfg.input));
    if (cfg.morgenstern && c.n() > ulab::kMorgensternMaxDim) {
        throw ulab::LabError(ulab::ErrorCode::TooLarge, "--morgenstern needs n <= 8");
    }
    const auto trace = ulab::trace_circuit(c, {.morgenstern = cfg.morgenstern});
    const std::string csv = ulab::io::trace_to_csv(trace);
    const std::string summary = ulab::io::trace_summary_json(trace);

    if (cfg.format == "json") {
        emit(cfg, summary);
    } else {
        emit(cfg, csv);
        std::string summary_to = cfg.summary_path;
        if (summary_to.empty() && !cfg.out.empty()) {
            summary_to = std::filesystem::path(cfg.out).replace_extension(".summary.json").string();
        }
        if (!summary_to.empty()) {
            ulab::io::write_file_atomic(summary_to, summary);
        } else if (!cfg.quiet) {
            std::cerr << summary;
        }
    }
    if (!trace.all_bounds_ok()) {
        std::cerr << "bound check failed: max delta_phi " << ulab::io::fmt_real(trace.max_delta()) << "\n";
        return kExitBound;
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto c = ulab::io::circuit_from_json(ulab::io::read_file(cfg.input));
    ulab::StateVector v;
    if (cfg.impulse) {
        if (!cfg.vector_path.empty()) {
            throw ulab::LabError(ulab::ErrorCode::ParseError, "give either a vector file or --impulse");
        }
        if (*cfg.impulse >= c.n()) {
            throw ulab::LabError(ulab::ErrorCode::DimensionMismatch, "--impulse index beyond n");
        }
        v = ulab::StateVector::basis(c.n(), *cfg.impulse);
    } else if (!cfg.vector_path.empty()) {
        v = ulab::io::vector_from_json(ulab::io::read_file(cfg.vector_path));
    } else {
        throw ulab::LabError(ulab::ErrorCode::ParseError, "simulate needs a vector file or --impulse");
    }
    emit(cfg, ulab::io::vector_to_json(ulab::simulate(c, std::move(v))));
    return kExitOk;
}

int cmd_decompose(const RunConfig& cfg) {
    const auto m = ulab::io::matrix_from_json(ulab::io::read_file(cfg.input));
    const auto c = ulab::givens_decompose(m);
    emit(cfg, ulab::io::circuit_to_json(c));
    note(cfg, "gates " + std::to_string(c.size()) + "; " + bound_line(m.dim()));
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    namespace v = ulab::verify;
    const v::SuiteParams params{cfg.n, cfg.trials, cfg.seed};
    v::SuiteReport rep;
    if (cfg.suite == "core") {
        rep = v::core_suite(params);
    } else if (cfg.suite == "potentials") {
        rep = v::potentials_suite(params);
    } else if (cfg.suite == "fft") {
        rep = v::fft_suite(params);
    } else if (cfg.suite == "morgenstern") {
        rep = v::morgenstern_suite(params);
    }
    for (const auto& chk : rep.checks) {
        std::cout << (chk.ok() ? "PASS " : "FAIL ") << chk.passed << "/" << chk.total << "  " << chk.name
                  << "  worst=" << ulab::io::fmt_real(chk.worst) << "\n";
    }
    std::cout << "suite " << rep.suite << ": " << (rep.ok() ? "PASS" : "FAIL") << "\n";
    return rep.ok() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unitary layered circuit laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--out", cfg.out, "Output path (stdout when absent)");
    app.add_option("--format", cfg.format, "Trace output: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_flag("--quiet", cfg.quiet, "Suppress informational stderr output");

    auto* build = app.add_subcommand("build-fft", "Emit the radix-2 FFT circuit as JSON");
    build->add_option("--n", cfg.n, "Wire count (power of two)")->required();

    auto* random = app.add_subcommand("random", "Emit a seeded random circuit as JSON");
    random->add_option("--n", cfg.n, "Wire count")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    random->add_option("--m", cfg.gate_count, "Gate count")->required();

    auto* trace = app.add_subcommand("trace", "Potential trace of a circuit file");
    trace->add_option("circuit", cfg.input, "Circuit JSON")->required();
    trace->add_flag("--morgenstern", cfg.morgenstern, "Annotate max-subdeterminant potential (n <= 8)");
    trace->add_option("--summary", cfg.summary_path,
                      "Summary JSON path in csv mode (default: <out>.summary.json, or stderr)");

    auto* sim = app.add_subcommand("simulate", "Run a circuit on an input vector");
    sim->add_option("circuit", cfg.input, "Circuit JSON")->required();
    sim->add_option("vector", cfg.vector_path, "Input vector JSON");
    sim->add_option("--impulse", cfg.impulse, "Use basis vector e_j as input");

    auto* ver = app.add_subcommand("verify", "Run an invariant suite");
    ver->add_option("--suite", cfg.suite, "core | potentials | fft | morgenstern")
        ->required()
        ->check(CLI::IsMember({"core", "potentials", "fft", "morgenstern"}));
    cfg.n = 16;
    ver->add_option("--n", cfg.n, "Wire count")->capture_default_str();
    ver->add_option("--trials", cfg.trials, "Trials (gates for the potentials suite)")->capture_default_str();

    auto* dec = app.add_subcommand("decompose", "Compile a unitary matrix file into 2x2 gates");
    dec->add_option("matrix", cfg.input, "Matrix JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (build->parsed()) return cmd_build_fft(cfg);
        if (random->parsed()) return cmd_random(cfg);
        if (trace->parsed()) return cmd_trace(cfg);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        if (dec->parsed()) return cmd_decompose(cfg);
    } catch (const ulab::LabError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
