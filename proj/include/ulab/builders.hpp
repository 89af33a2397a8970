#pragma once

// Reference transforms and circuit constructors.
//
// Twiddle convention: w = exp(-2 pi i / n), F(p,q) = w^{pq} / sqrt(n) when normalized.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ulab/core.hpp"

namespace ulab {

inline bool is_power_of_two(std::size_t n) { return n >= 1 && std::has_single_bit(n); }

inline unsigned log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) throw LabError(ErrorCode::NotPowerOfTwo, "n = " + std::to_string(n));
    return static_cast<unsigned>(std::countr_zero(n));
}

/// w^t for w = exp(-2 pi i / n), reduced mod n before evaluating so large exponents stay exact.
inline Complex root_of_unity(std::size_t t, std::size_t n) {
    t %= n;
    if (t == 0) return {1.0, 0.0};
    // Exact values at the quarter points keep the real-valued twiddles free of 1e-17 noise.
    if (4 * t == n) return {0.0, -1.0};
    if (2 * t == n) return {-1.0, 0.0};
    if (4 * t == 3 * n) return {0.0, 1.0};
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

inline TransformMatrix dft_matrix(std::size_t n, bool normalized) {
    if (n == 0) throw LabError(ErrorCode::DimensionMismatch, "dft_matrix needs n >= 1");
    std::vector<Complex> table(n);
    for (std::size_t t = 0; t < n; ++t) table[t] = root_of_unity(t, n);
    const double scale = normalized ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
    TransformMatrix f(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) f(p, q) = scale * table[(p * q) % n];
    return f;
}

inline std::size_t bit_reverse(std::size_t j, unsigned bits) {
    std::size_t r = 0;
    for (unsigned b = 0; b < bits; ++b) {
        r = (r << 1) | (j & 1u);
        j >>= 1;
    }
    return r;
}

/// One swap gate per index pair (j, rev(j)) with j < rev(j).
inline std::vector<Gate> bit_reversal_swaps(std::size_t n) {
    const unsigned bits = log2_exact(n);
    std::vector<Gate> swaps;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = bit_reverse(j, bits);
        if (j < r) swaps.push_back(Gate{j, r, gates::swap()});
    }
    return swaps;
}

/// Radix-2 decimation in time: bit-reversal swaps, then log2(n) stages of n/2 butterflies.
/// Stage s pairs wires (b + j, b + j + 2^{s-1}) inside blocks of size 2^s with twiddle
/// exp(-2 pi i j / 2^s). Each butterfly carries a 1/sqrt 2, so the product is the
/// normalized DFT.
inline LayeredCircuit fft_circuit(std::size_t n) {
    const unsigned stages = log2_exact(n);
    if (n < 2) throw LabError(ErrorCode::NotPowerOfTwo, "fft_circuit needs n >= 2");
    std::vector<Gate> g = bit_reversal_swaps(n);
    g.reserve(g.size() + (n / 2) * stages);
    for (unsigned s = 1; s <= stages; ++s) {
        const std::size_t block = std::size_t{1} << s;
        const std::size_t half = block / 2;
        for (std::size_t b = 0; b < n; b += block) {
            for (std::size_t j = 0; j < half; ++j) {
                g.push_back(Gate{b + j, b + j + half, gates::butterfly(root_of_unity(j * (n / block), n))});
            }
        }
    }
    return LayeredCircuit(n, std::move(g));
}

struct GateCounts {
    std::size_t butterflies = 0;
    std::size_t swaps = 0;
    std::size_t generic = 0;
    std::size_t total() const { return butterflies + swaps + generic; }
};

inline GateCounts count_kinds(const LayeredCircuit& c) {
    GateCounts counts;
    for (const Gate& g : c.gates()) {
        switch (classify(g)) {
            case GateKind::Butterfly: ++counts.butterflies; break;
            case GateKind::Swap: ++counts.swaps; break;
            case GateKind::Generic: ++counts.generic; break;
        }
    }
    return counts;
}

/// Compiles a unitary into 2x2 gates by column-major Givens elimination.
///
/// Rotations on (c, r), r > c, zero the below-diagonal entries of column c; a target
/// already below 1e-12 in modulus is skipped. What remains is a diagonal of phases,
/// which is folded into the first emitted gate when it shares wires with it and
/// otherwise emitted as diagonal gates two phases at a time. The result has at most
/// n(n-1)/2 rotations plus n phase gates and its accumulated product is M.
inline LayeredCircuit givens_decompose(const TransformMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 0) throw LabError(ErrorCode::DimensionMismatch, "empty matrix");
    if (!is_unitary(m, kProductUnitarityTol)) {
        throw LabError(ErrorCode::NotUnitary, "residual " + std::to_string(unitarity_residual(m)));
    }
    constexpr double skip_tol = 1e-12;

    TransformMatrix work = m;
    std::vector<Gate> rotations;  // in elimination order: R = G_r ... G_1, R M = D
    for (std::size_t c = 0; c + 1 < n; ++c) {
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex b = work(r, c);
            if (std::abs(b) < skip_tol) continue;
            const Complex a = work(c, c);
            const double rho = std::hypot(std::abs(a), std::abs(b));
            const Gate g{c, r, Mat2::from(std::conj(a) / rho, std::conj(b) / rho, -b / rho, a / rho)};
            apply_gate_rows(work, g);
            rotations.push_back(g);
        }
    }

    // M = G_1^dag ... G_r^dag D, so the circuit runs D first, then G_r^dag down to G_1^dag.
    std::vector<Complex> phase(n);
    for (std::size_t j = 0; j < n; ++j) phase[j] = work(j, j) / std::abs(work(j, j));
    auto trivial = [&](std::size_t j) { return std::abs(phase[j] - 1.0) < skip_tol; };

    std::vector<Gate> out;
    std::vector<Gate> inverse;
    inverse.reserve(rotations.size());
    for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) inverse.push_back(it->adjoint());

    std::vector<bool> handled(n, false);
    if (!inverse.empty()) {
        Gate& first = inverse.front();
        if (!trivial(first.k) || !trivial(first.l)) {
            first.a = first.a * gates::diagonal(phase[first.k], phase[first.l]);
        }
        handled[first.k] = handled[first.l] = true;
    }
    std::vector<std::size_t> pending;
    for (std::size_t j = 0; j < n; ++j)
        if (!handled[j] && !trivial(j)) pending.push_back(j);
    if (!pending.empty() && n < 2) {
        throw LabError(ErrorCode::InvalidCircuit, "a 1x1 phase cannot be realized by 2x2 gates");
    }
    for (std::size_t i = 0; i < pending.size(); i += 2) {
        if (i + 1 < pending.size()) {
            const std::size_t k = pending[i];
            const std::size_t l = pending[i + 1];
            out.push_back(Gate{k, l, gates::diagonal(phase[k], phase[l])});
        } else {
            // Odd one out: pair with any other wire, which gets phase 1.
            const std::size_t p = pending[i];
            const std::size_t q = (p == 0) ? 1 : 0;
            out.push_back(p < q ? Gate{p, q, gates::diagonal(phase[p], 1.0)}
                                : Gate{q, p, gates::diagonal(1.0, phase[p])});
        }
    }
    out.insert(out.end(), inverse.begin(), inverse.end());
    return LayeredCircuit(n, std::move(out));
}

/// e^{i delta} [[e^{i alpha} cos t, e^{i beta} sin t], [-e^{-i beta} sin t, e^{-i alpha} cos t]]
inline Mat2 unitary_from_angles(double global, double alpha, double beta, double theta) {
    const Complex g = std::polar(1.0, global);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return Mat2::from(g * std::polar(c, alpha), g * std::polar(s, beta), -g * std::polar(s, -beta),
                      g * std::polar(c, -alpha));
}

inline Gate random_gate(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::uniform_int_distribution<std::size_t> second(0, n - 2);
    const std::size_t k = first(rng);
    std::size_t l = second(rng);
    if (l >= k) ++l;
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
    const double global = phase(rng);
    const double alpha = phase(rng);
    const double beta = phase(rng);
    const double theta = angle(rng);
    return Gate{std::min(k, l), std::max(k, l), unitary_from_angles(global, alpha, beta, theta)};
}

/// m gates, each on a uniformly random wire pair with a block built from independent
/// uniform angles. Deterministic for a fixed seed.
inline LayeredCircuit random_circuit(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 2) throw LabError(ErrorCode::InvalidCircuit, "random_circuit needs n >= 2");
    std::mt19937_64 rng(seed);
    std::vector<Gate> g;
    g.reserve(m);
    for (std::size_t i = 0; i < m; ++i) g.push_back(random_gate(n, rng));
    return LayeredCircuit(n, std::move(g));
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix, done twice per column.
inline TransformMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TransformMatrix z(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) z(p, q) = Complex{gauss(rng), gauss(rng)};

    // Orthonormalize rows.
    for (std::size_t p = 0; p < n; ++p) {
        auto rp = z.row(p);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t q = 0; q < p; ++q) {
                auto rq = z.row(q);
                Complex dot{0.0};
                for (std::size_t j = 0; j < n; ++j) dot += std::conj(rq[j]) * rp[j];
                for (std::size_t j = 0; j < n; ++j) rp[j] -= dot * rq[j];
            }
        }
        double norm = 0.0;
        for (const Complex& x : rp) norm += std::norm(x);
        norm = std::sqrt(norm);
        for (Complex& x : rp) x /= norm;
    }
    return z;
}

}  // namespace ulab
