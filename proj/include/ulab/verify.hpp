#pragma once

// Property suites behind `ulab verify`. Each suite returns per-invariant pass
// counts plus the worst observed value, so a failure says how far off it was.

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "ulab/builders.hpp"
#include "ulab/core.hpp"
#include "ulab/potentials.hpp"

namespace ulab::verify {

struct Check {
    std::string name;
    std::size_t passed = 0;
    std::size_t total = 0;
    double worst = 0.0;  // largest observed error (or violating value) for this invariant

    void record(bool ok, double observed = 0.0) {
        ++total;
        if (ok) ++passed;
        if (std::isnan(observed) || observed > worst) worst = observed;
    }
    bool ok() const { return passed == total; }
};

struct SuiteReport {
    std::string suite;
    std::deque<Check> checks;  // stable references across add()

    Check& add(std::string name) {
        checks.push_back(Check{std::move(name), 0, 0, 0.0});
        return checks.back();
    }
    bool ok() const {
        for (const auto& c : checks)
            if (!c.ok()) return false;
        return true;
    }
};

struct SuiteParams {
    std::size_t n = 16;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
};

inline StateVector random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    StateVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex{g(rng), g(rng)};
    return v;
}

/// Unitarity, locality, composition, norm, column reconstruction, inversion on
/// `trials` random circuits of 4n gates.
inline SuiteReport core_suite(const SuiteParams& p) {
    SuiteReport rep{"core", {}};
    if (p.n < 2) throw LabError(ErrorCode::InvalidCircuit, "core suite needs n >= 2");
    auto& unitary = rep.add("unitarity of every M_i (<= 1e-8)");
    auto& locality = rep.add("rows outside {k,l} bit-identical");
    auto& compose = rep.add("simulate == final matrix * v (<= 1e-9)");
    auto& norm = rep.add("norm preserved (<= 1e-10 rel)");
    auto& columns = rep.add("simulate(e_j) == column j (<= 1e-10)");
    auto& inverse = rep.add("inverse circuit round-trip (<= 1e-8)");

    std::mt19937_64 rng(p.seed);
    const bool check_every_step = p.n <= 64;
    for (std::size_t t = 0; t < p.trials; ++t) {
        const auto c = random_circuit(p.n, 4 * p.n, p.seed + t);
        Accumulator acc(c);
        while (!acc.done()) {
            TransformMatrix before = acc.current();
            const auto step = acc.advance();
            bool same = true;
            for (std::size_t r = 0; r < p.n && same; ++r) {
                if (r == step.gate.k || r == step.gate.l) continue;
                for (std::size_t q = 0; q < p.n; ++q) {
                    if (before(r, q) != step.matrix(r, q)) {
                        same = false;
                        break;
                    }
                }
            }
            locality.record(same, same ? 0.0 : 1.0);
            if (check_every_step || acc.done()) {
                const double res = unitarity_residual(step.matrix);
                unitary.record(res <= kProductUnitarityTol, res);
            }
        }
        const TransformMatrix& m = acc.current();

        const StateVector v = random_state(p.n, rng);
        const StateVector out = simulate(c, v);
        const double err = max_abs_diff(out, m * v);
        compose.record(err <= 1e-9, err);
        const double rel = std::abs(out.norm() - v.norm()) / v.norm();
        norm.record(rel <= 1e-10, rel);

        double col_err = 0.0;
        for (std::size_t j = 0; j < p.n; ++j) {
            const StateVector e = simulate(c, StateVector::basis(p.n, j));
            for (std::size_t r = 0; r < p.n; ++r) col_err = std::max(col_err, std::abs(e[r] - m(r, j)));
        }
        columns.record(col_err <= 1e-10, col_err);

        const TransformMatrix round = final_matrix(invert_circuit(c)) * m;
        const double inv_err = max_abs_diff(round, TransformMatrix::identity(p.n));
        inverse.record(inv_err <= kProductUnitarityTol, inv_err);
    }
    return rep;
}

/// Per-step entropy machinery on a random circuit with `trials` gates, plus
/// 10^4-sample dominance checks on a subset of the observed mass profiles.
inline SuiteReport potentials_suite(const SuiteParams& p) {
    SuiteReport rep{"potentials", {}};
    if (p.n < 2) throw LabError(ErrorCode::InvalidCircuit, "potentials suite needs n >= 2");
    auto& upper = rep.add("delta_phi <= 2 + 1e-6");
    auto& lower = rep.add("delta_phi >= -2 - 1e-6");
    auto& mass = rep.add("mass profile conserved, sums to 2 (<= 1e-10)");
    auto& feasible = rep.add("pre/post squared-moduli pairs feasible");
    auto& gap = rep.add("sup - inf_bound == sum r (<= 1e-10)");
    auto& incremental = rep.add("step_delta == full Phi difference (<= 1e-9)");
    auto& range = rep.add("0 <= Phi(M_i) <= n log2 n (+-1e-6)");
    auto& telescope = rep.add("phi_final - phi_initial == sum delta");
    auto& dominance = rep.add("sampled feasible pairs <= sup + 1e-9");
    auto& midpoint = rep.add("midpoint split attains sup (<= 1e-12)");

    const auto c = random_circuit(p.n, p.trials, p.seed);
    const double phi_max = static_cast<double>(p.n) * std::log2(static_cast<double>(p.n));
    const bool full_recompute = p.n <= 256;
    const std::size_t dominance_every = std::max<std::size_t>(1, p.trials / 10);
    std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);

    Accumulator acc(c);
    double phi_prev = entropy_potential(acc.current());
    const double phi_initial = phi_prev;
    double delta_sum = 0.0;
    while (!acc.done()) {
        const auto step = acc.advance();
        const double d = step_delta(step.pre_k, step.pre_l, step.gate);
        delta_sum += d;
        upper.record(d <= kStepBound + kStepBoundTol, d - kStepBound);
        lower.record(d >= -kStepBound - kStepBoundTol, -kStepBound - d);

        const auto post_k = step.matrix.row(step.gate.k);
        const auto post_l = step.matrix.row(step.gate.l);
        const MassProfile r_pre = mass_profile(step.pre_k, step.pre_l);
        const MassProfile r_post = mass_profile(post_k, post_l);
        double mass_err = std::abs(r_pre.total() - 2.0);
        for (std::size_t j = 0; j < p.n; ++j) mass_err = std::max(mass_err, std::abs(r_pre.r[j] - r_post.r[j]));
        mass.record(mass_err <= kMassTol, mass_err);

        const bool f_pre = feasible_pair_check(squared_moduli_pair(step.pre_k, step.pre_l), r_pre);
        const bool f_post = feasible_pair_check(squared_moduli_pair(post_k, post_l), r_pre);
        feasible.record(f_pre && f_post, (f_pre && f_post) ? 0.0 : 1.0);

        const double g = std::abs(sup_potential(r_pre) - inf_potential_bound(r_pre) - r_pre.total());
        gap.record(g <= 1e-10, g);

        if (full_recompute) {
            const double phi_now = entropy_potential(step.matrix);
            const double e = std::abs((phi_now - phi_prev) - d);
            incremental.record(e <= 1e-9, e);
            const double out_of_range = std::max(-phi_now, phi_now - phi_max);
            range.record(out_of_range <= 1e-6, out_of_range);
            phi_prev = phi_now;
        }

        if (step.index % dominance_every == 0) {
            const double sup = sup_potential(r_pre);
            double worst = -1e300;
            for (int s = 0; s < 10000; ++s) {
                const FeasiblePair fp = sample_feasible_pair(r_pre, rng);
                worst = std::max(worst, pair_entropy(fp) - sup);
            }
            dominance.record(worst <= 1e-9, worst);
            FeasiblePair mid{r_pre.r, r_pre.r};
            for (auto& a : mid.alpha) a /= 2.0;
            for (auto& b : mid.beta) b /= 2.0;
            const double me = std::abs(pair_entropy(mid) - sup);
            midpoint.record(me <= 1e-12 && feasible_pair_check(mid, r_pre), me);
        }
    }
    const double phi_final = entropy_potential(acc.current());
    const double tel = std::abs((phi_final - phi_initial) - delta_sum);
    telescope.record(tel <= 1e-6 + 1e-9 * static_cast<double>(c.size()), tel);
    return rep;
}

/// FFT construction at one power-of-two n: matrix, gate counts, endpoint
/// potentials, sharpness of every step, and `trials` random input vectors.
inline SuiteReport fft_suite(const SuiteParams& p) {
    SuiteReport rep{"fft", {}};
    auto& matrix = rep.add("final matrix == normalized DFT (<= 1e-9)");
    auto& counts = rep.add("butterflies == n/2 log2 n, swaps == #{j < rev(j)}");
    auto& bound = rep.add("m >= 1/2 n log2 n");
    auto& endpoints = rep.add("Phi(M_0) == 0, Phi(M_m) == n log2 n (<= 1e-6)");
    auto& butterfly = rep.add("butterfly delta_phi == 2 (<= 1e-9)");
    auto& swap = rep.add("swap delta_phi == 0 (<= 1e-12)");
    auto& vectors = rep.add("simulate == DFT * v (<= 1e-9)");

    const std::size_t n = p.n;
    const auto c = fft_circuit(n);
    const unsigned bits = log2_exact(n);
    const TransformMatrix f = dft_matrix(n, true);
    const double err = max_abs_diff(final_matrix(c), f);
    matrix.record(err <= 1e-9, err);

    const GateCounts gc = count_kinds(c);
    std::size_t expected_swaps = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (j < bit_reverse(j, bits)) ++expected_swaps;
    const bool counts_ok = gc.butterflies == (n / 2) * bits && gc.swaps == expected_swaps && gc.generic == 0;
    counts.record(counts_ok, counts_ok ? 0.0 : 1.0);
    bound.record(2 * c.size() >= n * bits);

    const auto trace = trace_circuit(c);
    const double end_err = std::abs(trace.phi_final - static_cast<double>(n * bits));
    endpoints.record(trace.phi_initial == 0.0 && end_err <= 1e-6, end_err);
    for (const auto& r : trace.records) {
        if (r.kind == GateKind::Butterfly) {
            const double e = std::abs(r.delta_phi - 2.0);
            butterfly.record(e <= 1e-9, e);
        } else if (r.kind == GateKind::Swap) {
            const double e = std::abs(r.delta_phi);
            swap.record(e <= 1e-12, e);
        }
    }

    std::mt19937_64 rng(p.seed);
    for (std::size_t t = 0; t < p.trials; ++t) {
        const StateVector v = random_state(n, rng);
        const double e = max_abs_diff(simulate(c, v), f * v);
        vectors.record(e <= 1e-9, e);
    }
    return rep;
}

/// Max-subdeterminant facts at n <= 8: the unnormalized DFT value n^{n/2} for
/// every size 2..n, and at-most-doubling along `trials` random 20-gate circuits.
inline SuiteReport morgenstern_suite(const SuiteParams& p) {
    SuiteReport rep{"morgenstern", {}};
    if (p.n < 2 || p.n > kMorgensternMaxDim) throw LabError(ErrorCode::TooLarge, "morgenstern suite needs 2 <= n <= 8");
    auto& dft = rep.add("max |det| of unnormalized DFT_k == k^{k/2} (<= 1e-9 rel)");
    auto& unit = rep.add("max |det| of normalized DFT_k == 1 (<= 1e-9)");
    auto& doubling = rep.add("potential at most doubles per step (<= 1e-9 rel)");

    for (std::size_t k = 2; k <= p.n; ++k) {
        const double expected = std::pow(static_cast<double>(k), static_cast<double>(k) / 2.0);
        const double got = morgenstern_potential(dft_matrix(k, false)).max_det;
        const double rel = std::abs(got - expected) / expected;
        dft.record(rel <= 1e-9, rel);
        const double un = std::abs(morgenstern_potential(dft_matrix(k, true)).max_det - 1.0);
        unit.record(un <= 1e-9, un);
    }
    for (std::size_t t = 0; t < p.trials; ++t) {
        const auto c = random_circuit(p.n, 20, p.seed + t);
        Accumulator acc(c);
        double prev = morgenstern_potential(acc.current()).max_det;
        while (!acc.done()) {
            const double now = morgenstern_potential(acc.advance().matrix).max_det;
            const double excess = now / (2.0 * prev) - 1.0;
            doubling.record(excess <= 1e-9, excess);
            prev = now;
        }
    }
    return rep;
}

}  // namespace ulab::verify
