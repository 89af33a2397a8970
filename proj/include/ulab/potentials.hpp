#pragma once

// Entropy potential Phi(M) = -sum |M(p,q)|^2 log2 |M(p,q)|^2 and the machinery
// that bounds its change across one 2x2 unitary layer, plus the max-subdeterminant
// potential used for bounded-coefficient linear algorithms.
//
// All entropies are in bits.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ulab/core.hpp"

namespace ulab {

/// Squared moduli at or below this count as exact zeros (0 log 0 = 0).
inline constexpr double kZeroMassFloor = 1e-300;
/// Absolute slack on the per-step bound.
inline constexpr double kStepBoundTol = 1e-6;
inline constexpr double kStepBound = 2.0;
/// Slack on the mass / feasibility checks.
inline constexpr double kMassTol = 1e-10;

/// -w log2 w, with 0 for w at or below the underflow floor.
inline double entropy_term(double w) {
    if (w <= kZeroMassFloor) return 0.0;
    return -w * std::log2(w);
}

/// Sum of entropy_term(|z|^2) over a row.
inline double row_entropy(std::span<const Complex> row) {
    double s = 0.0;
    for (const Complex& z : row) s += entropy_term(std::norm(z));
    return s;
}

inline double entropy_potential(const TransformMatrix& m) {
    double s = 0.0;
    for (std::size_t p = 0; p < m.dim(); ++p) s += row_entropy(m.row(p));
    return s;
}

// ---------------------------------------------------------------------------
// Row masses and the feasibility set
// ---------------------------------------------------------------------------

/// r(j) = |x(j)|^2 + |y(j)|^2 for two rows mixed by one gate.
struct MassProfile {
    std::vector<double> r;

    std::size_t size() const { return r.size(); }
    double total() const {
        double s = 0.0;
        for (double v : r) s += v;
        return s;
    }
};

inline MassProfile mass_profile(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw LabError(ErrorCode::DimensionMismatch, "mass_profile rows differ in length");
    MassProfile m;
    m.r.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) m.r[j] = std::norm(x[j]) + std::norm(y[j]);
    return m;
}

/// A split (alpha, beta) of a mass profile.
struct FeasiblePair {
    std::vector<double> alpha;
    std::vector<double> beta;
};

/// Squared moduli of two rows as a pair.
inline FeasiblePair squared_moduli_pair(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw LabError(ErrorCode::DimensionMismatch, "rows differ in length");
    FeasiblePair p;
    p.alpha.resize(x.size());
    p.beta.resize(y.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        p.alpha[j] = std::norm(x[j]);
        p.beta[j] = std::norm(y[j]);
    }
    return p;
}

inline double pair_entropy(const FeasiblePair& p) {
    double s = 0.0;
    for (double a : p.alpha) s += entropy_term(a);
    for (double b : p.beta) s += entropy_term(b);
    return s;
}

/// Entries in [0,1], sum(alpha) <= 1, sum(beta) <= 1, alpha + beta = r; all within 1e-10.
inline bool feasible_pair_check(std::span<const double> alpha, std::span<const double> beta, const MassProfile& r) {
    if (alpha.size() != beta.size() || alpha.size() != r.size()) {
        throw LabError(ErrorCode::DimensionMismatch, "feasible_pair_check length mismatch");
    }
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const double a = alpha[j];
        const double b = beta[j];
        if (!(a >= -kMassTol && a <= 1.0 + kMassTol)) return false;
        if (!(b >= -kMassTol && b <= 1.0 + kMassTol)) return false;
        if (!(std::abs(a + b - r.r[j]) <= kMassTol)) return false;
        sa += a;
        sb += b;
    }
    return sa <= 1.0 + kMassTol && sb <= 1.0 + kMassTol;
}

inline bool feasible_pair_check(const FeasiblePair& p, const MassProfile& r) {
    return feasible_pair_check(p.alpha, p.beta, r);
}

/// Draws a split of r inside the feasibility set: a target sum for alpha is chosen
/// uniformly from its admissible interval, then a random point of the box
/// [max(0, r-1), min(1, r)] is pulled toward one face until it hits that sum.
/// Requires a nonempty set, i.e. 0 <= r(j) <= 2 and sum r <= 2.
inline FeasiblePair sample_feasible_pair(const MassProfile& m, std::mt19937_64& rng) {
    const std::size_t n = m.size();
    std::vector<double> lo(n), hi(n);
    double sum_lo = 0.0, sum_hi = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        lo[j] = std::max(0.0, m.r[j] - 1.0);
        hi[j] = std::min(1.0, m.r[j]);
        sum_lo += lo[j];
        sum_hi += hi[j];
    }
    const double target_lo = std::max(sum_lo, m.total() - 1.0);
    const double target_hi = std::min(sum_hi, 1.0);
    if (target_lo > target_hi + kMassTol) {
        throw LabError(ErrorCode::DimensionMismatch, "mass profile admits no feasible split");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double target = target_lo + unit(rng) * std::max(0.0, target_hi - target_lo);

    FeasiblePair p;
    p.alpha.resize(n);
    p.beta.resize(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        p.alpha[j] = lo[j] + unit(rng) * (hi[j] - lo[j]);
        sum += p.alpha[j];
    }
    if (sum < target) {
        double room = 0.0;
        for (std::size_t j = 0; j < n; ++j) room += hi[j] - p.alpha[j];
        const double theta = room > 0.0 ? (target - sum) / room : 0.0;
        for (std::size_t j = 0; j < n; ++j) p.alpha[j] += theta * (hi[j] - p.alpha[j]);
    } else if (sum > target) {
        double room = 0.0;
        for (std::size_t j = 0; j < n; ++j) room += p.alpha[j] - lo[j];
        const double theta = room > 0.0 ? (sum - target) / room : 0.0;
        for (std::size_t j = 0; j < n; ++j) p.alpha[j] -= theta * (p.alpha[j] - lo[j]);
    }
    for (std::size_t j = 0; j < n; ++j) p.beta[j] = m.r[j] - p.alpha[j];
    return p;
}

/// Value at the midpoint split alpha = beta = r/2: -sum r log2(r/2).
inline double sup_potential(const MassProfile& m) {
    double s = 0.0;
    for (double r : m.r) {
        if (r <= kZeroMassFloor) continue;
        s -= r * std::log2(r / 2.0);
    }
    return s;
}

/// Value at the alternating split (alpha, beta) = (r, 0) / (0, r): -sum r log2 r.
/// The split may be infeasible; it only bounds the infimum from below.
inline double inf_potential_bound(const MassProfile& m) {
    double s = 0.0;
    for (double r : m.r) s += entropy_term(r);
    return s;
}

// ---------------------------------------------------------------------------
// Per-step change
// ---------------------------------------------------------------------------

/// Phi(M_i) - Phi(M_{i-1}) from the two rows the gate replaces, in O(n).
inline double step_delta(std::span<const Complex> x, std::span<const Complex> y, const Gate& g) {
    if (x.size() != y.size()) throw LabError(ErrorCode::DimensionMismatch, "step_delta rows differ in length");
    double before = 0.0;
    double after = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Complex xn = g.a(0, 0) * x[j] + g.a(0, 1) * y[j];
        const Complex yn = g.a(1, 0) * x[j] + g.a(1, 1) * y[j];
        before += entropy_term(std::norm(x[j])) + entropy_term(std::norm(y[j]));
        after += entropy_term(std::norm(xn)) + entropy_term(std::norm(yn));
    }
    return after - before;
}

// ---------------------------------------------------------------------------
// Max-subdeterminant potential (exhaustive)
// ---------------------------------------------------------------------------

/// Determinant by Gaussian elimination with partial pivoting. `a` is k x k row-major, consumed.
inline Complex determinant(std::vector<Complex> a, std::size_t k) {
    Complex det{1.0};
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        double best = std::abs(a[c * k + c]);
        for (std::size_t r = c + 1; r < k; ++r) {
            const double v = std::abs(a[r * k + c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return Complex{0.0};
        if (piv != c) {
            for (std::size_t q = 0; q < k; ++q) std::swap(a[c * k + q], a[piv * k + q]);
            det = -det;
        }
        const Complex d = a[c * k + c];
        det *= d;
        for (std::size_t r = c + 1; r < k; ++r) {
            const Complex f = a[r * k + c] / d;
            if (f == Complex{0.0}) continue;
            for (std::size_t q = c; q < k; ++q) a[r * k + q] -= f * a[c * k + q];
        }
    }
    return det;
}

inline constexpr std::size_t kMorgensternMaxDim = 8;

struct MorgensternResult {
    double max_det = 0.0;          // max |det M[I,J]| over |I| = |J| >= 1
    double with_empty = 1.0;       // max(1, max_det): the empty submatrix has det 1
    std::size_t submatrices = 0;   // how many (I, J) pairs were evaluated
};

/// Exhaustive max |det| over all square submatrices of size 1..min(n, cap).
/// Without a cap, n > 8 is refused (the enumeration is exponential).
inline MorgensternResult morgenstern_potential(const TransformMatrix& m,
                                               std::optional<std::size_t> max_dim = std::nullopt) {
    const std::size_t n = m.dim();
    if (!max_dim && n > kMorgensternMaxDim) {
        throw LabError(ErrorCode::TooLarge, "n = " + std::to_string(n) + " needs a submatrix size cap");
    }
    if (n >= 64) throw LabError(ErrorCode::TooLarge, "subset masks limited to n < 64");
    const std::size_t cap = std::min(n, max_dim.value_or(n));

    std::vector<std::vector<std::size_t>> by_size(cap + 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        if (k <= cap) by_size[k].push_back(mask);
    }

    MorgensternResult res;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::vector<Complex> sub;
    auto expand = [n](std::uint64_t mask, std::vector<std::size_t>& idx) {
        idx.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
    };
    for (std::size_t k = 1; k <= cap; ++k) {
        sub.resize(k * k);
        for (std::uint64_t rm : by_size[k]) {
            expand(rm, rows);
            for (std::uint64_t cm : by_size[k]) {
                expand(cm, cols);
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) sub[a * k + b] = m(rows[a], cols[b]);
                res.max_det = std::max(res.max_det, std::abs(determinant(sub, k)));
                ++res.submatrices;
            }
        }
    }
    res.with_empty = std::max(1.0, res.max_det);
    return res;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

struct TraceRecord {
    std::size_t step = 0;
    std::size_t k = 0;
    std::size_t l = 0;
    GateKind kind = GateKind::Generic;
    double phi = 0.0;        // running Phi(M_step)
    double delta_phi = 0.0;
    bool bound_ok = true;
    std::optional<double> morgenstern;
};

struct PotentialTrace {
    std::size_t n = 0;
    std::size_t m = 0;
    double phi_initial = 0.0;
    double phi_final = 0.0;  // recomputed from the final matrix, not summed
    std::optional<double> morgenstern_initial;
    std::vector<TraceRecord> records;  // one per gate; step 0 is the header

    double max_delta() const {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& r : records) v = std::max(v, r.delta_phi);
        return records.empty() ? 0.0 : v;
    }
    double min_delta() const {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& r : records) v = std::min(v, r.delta_phi);
        return records.empty() ? 0.0 : v;
    }
    bool all_bounds_ok() const {
        return std::all_of(records.begin(), records.end(), [](const TraceRecord& r) { return r.bound_ok; });
    }
    double delta_sum() const {
        double s = 0.0;
        for (const auto& r : records) s += r.delta_phi;
        return s;
    }
    /// Allowed gap between phi_final - phi_initial and the summed deltas.
    double telescoping_tol() const { return 1e-6 + 1e-9 * static_cast<double>(m); }
};

struct TraceOptions {
    bool morgenstern = false;  // requires n <= 8
};

inline PotentialTrace trace_circuit(const LayeredCircuit& c, TraceOptions opts = {}) {
    if (opts.morgenstern && c.n() > kMorgensternMaxDim) {
        throw LabError(ErrorCode::TooLarge, "Morgenstern annotation needs n <= 8");
    }
    PotentialTrace t;
    t.n = c.n();
    t.m = c.size();
    t.records.reserve(c.size());

    Accumulator acc(c);
    t.phi_initial = entropy_potential(acc.current());
    if (opts.morgenstern) t.morgenstern_initial = morgenstern_potential(acc.current()).max_det;
    double phi = t.phi_initial;
    while (!acc.done()) {
        const auto step = acc.advance();
        TraceRecord rec;
        rec.step = step.index;
        rec.k = step.gate.k;
        rec.l = step.gate.l;
        rec.kind = classify(step.gate);
        rec.delta_phi = step_delta(step.pre_k, step.pre_l, step.gate);
        phi += rec.delta_phi;
        rec.phi = phi;
        rec.bound_ok = rec.delta_phi <= kStepBound + kStepBoundTol;
        if (opts.morgenstern) rec.morgenstern = morgenstern_potential(step.matrix).max_det;
        t.records.push_back(rec);
    }
    t.phi_final = entropy_potential(acc.current());
    return t;
}

}  // namespace ulab
