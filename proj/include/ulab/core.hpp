#pragma once

// Unitary layered circuits: n wires, each layer mixes one wire pair (k, l)
// with a 2x2 unitary and passes every other wire through unchanged.
//
// Wire indices are 0-based everywhere (code and file formats).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ulab {

using Complex = std::complex<double>;

/// Residual allowed on a single 2x2 gate.
inline constexpr double kGateUnitarityTol = 1e-10;
/// Residual allowed on products of many gates.
inline constexpr double kProductUnitarityTol = 1e-8;

enum class ErrorCode {
    IndexOutOfRange,
    NotUnitary,
    DimensionMismatch,
    NotPowerOfTwo,
    TooLarge,
    InvalidCircuit,
    ParseError,
    IoError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::InvalidCircuit: return "InvalidCircuit";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

class LabError : public std::runtime_error {
public:
    LabError(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// ---------------------------------------------------------------------------
// 2x2 blocks and gates
// ---------------------------------------------------------------------------

/// Row-major 2x2 complex matrix: (a11, a12, a21, a22).
struct Mat2 {
    std::array<Complex, 4> e{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};

    Complex& operator()(std::size_t r, std::size_t c) { return e[2 * r + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return e[2 * r + c]; }

    static Mat2 identity() { return {}; }
    static Mat2 from(Complex a11, Complex a12, Complex a21, Complex a22) {
        return Mat2{{a11, a12, a21, a22}};
    }

    Mat2 adjoint() const {
        return from(std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3]));
    }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return from(x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
                    x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]);
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// max |(a^dagger a - I)(p,q)|
inline double unitarity_residual(const Mat2& a) {
    const Mat2 g = a.adjoint() * a;
    double worst = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            const Complex target = (r == c) ? Complex{1.0} : Complex{0.0};
            worst = std::max(worst, std::abs(g(r, c) - target));
        }
    }
    return worst;
}

namespace gates {

inline Mat2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return Mat2::from(s, s, s, -s);
}

inline Mat2 swap() { return Mat2::from(0.0, 1.0, 1.0, 0.0); }

/// (1/sqrt 2) [[1, w], [1, -w]]; unitary whenever |w| = 1.
inline Mat2 butterfly(Complex twiddle) {
    const double s = 1.0 / std::sqrt(2.0);
    return Mat2::from(s, s * twiddle, s, -s * twiddle);
}

inline Mat2 diagonal(Complex d1, Complex d2) { return Mat2::from(d1, 0.0, 0.0, d2); }

}  // namespace gates

/// A 2x2 block acting on wires k < l.
struct Gate {
    std::size_t k = 0;
    std::size_t l = 1;
    Mat2 a;

    Gate adjoint() const { return Gate{k, l, a.adjoint()}; }

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// Throws LabError(IndexOutOfRange) unless 0 <= k < l < n, and
/// LabError(NotUnitary) if the block is non-finite or its residual exceeds 1e-10.
inline void validate_gate(const Gate& g, std::size_t n) {
    if (g.k >= g.l || g.l >= n) {
        throw LabError(ErrorCode::IndexOutOfRange,
                       "gate wires (" + std::to_string(g.k) + ", " + std::to_string(g.l) +
                           ") invalid for n = " + std::to_string(n));
    }
    for (const Complex& z : g.a.e) {
        if (!is_finite(z)) throw LabError(ErrorCode::NotUnitary, "gate has a non-finite entry");
    }
    const double res = unitarity_residual(g.a);
    if (!(res <= kGateUnitarityTol)) {
        throw LabError(ErrorCode::NotUnitary, "gate unitarity residual " + std::to_string(res));
    }
}

enum class GateKind { Butterfly, Swap, Generic };

inline const char* to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Butterfly: return "butterfly";
        case GateKind::Swap: return "swap";
        case GateKind::Generic: return "generic";
    }
    return "generic";
}

/// Recognizes gates by their block so that kinds survive a file round-trip.
/// Swap means exactly [[0,1],[1,0]]; butterfly means (1/sqrt 2)[[1,w],[1,-w]] with |w| = 1.
inline GateKind classify(const Gate& g) {
    if (g.a == gates::swap()) return GateKind::Swap;
    constexpr double tol = 1e-12;
    const double s = 1.0 / std::sqrt(2.0);
    const Mat2& a = g.a;
    if (std::abs(a(0, 0) - s) < tol && std::abs(a(1, 0) - s) < tol &&
        std::abs(a(0, 1) + a(1, 1)) < tol && std::abs(std::abs(a(0, 1)) - s) < tol) {
        return GateKind::Butterfly;
    }
    return GateKind::Generic;
}

// ---------------------------------------------------------------------------
// Vectors and matrices
// ---------------------------------------------------------------------------

/// The values on the n wires of one layer.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t n) : v_(n, Complex{0.0}) {}
    explicit StateVector(std::vector<Complex> values) : v_(std::move(values)) {}
    StateVector(std::initializer_list<Complex> values) : v_(values) {}

    static StateVector basis(std::size_t n, std::size_t j) {
        if (j >= n) throw LabError(ErrorCode::IndexOutOfRange, "basis index out of range");
        StateVector e(n);
        e.v_[j] = 1.0;
        return e;
    }

    std::size_t size() const { return v_.size(); }
    Complex& operator[](std::size_t i) { return v_[i]; }
    const Complex& operator[](std::size_t i) const { return v_[i]; }
    std::span<const Complex> values() const { return v_; }
    std::span<Complex> values() { return v_; }

    double norm() const {
        double s = 0.0;
        for (const Complex& z : v_) s += std::norm(z);
        return std::sqrt(s);
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::vector<Complex> v_;
};

/// Dense row-major n x n complex matrix.
class TransformMatrix {
public:
    TransformMatrix() = default;
    explicit TransformMatrix(std::size_t n) : n_(n), e_(n * n, Complex{0.0}) {}
    TransformMatrix(std::size_t n, std::vector<Complex> row_major) : n_(n), e_(std::move(row_major)) {
        if (e_.size() != n_ * n_) {
            throw LabError(ErrorCode::DimensionMismatch, "matrix needs n*n entries");
        }
    }

    static TransformMatrix identity(std::size_t n) {
        TransformMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return n_; }
    Complex& operator()(std::size_t p, std::size_t q) { return e_[p * n_ + q]; }
    const Complex& operator()(std::size_t p, std::size_t q) const { return e_[p * n_ + q]; }

    std::span<Complex> row(std::size_t p) { return {e_.data() + p * n_, n_}; }
    std::span<const Complex> row(std::size_t p) const { return {e_.data() + p * n_, n_}; }
    std::span<const Complex> entries() const { return e_; }

    TransformMatrix adjoint() const {
        TransformMatrix t(n_);
        for (std::size_t p = 0; p < n_; ++p)
            for (std::size_t q = 0; q < n_; ++q) t(q, p) = std::conj((*this)(p, q));
        return t;
    }

    friend TransformMatrix operator*(const TransformMatrix& x, const TransformMatrix& y) {
        if (x.n_ != y.n_) throw LabError(ErrorCode::DimensionMismatch, "matrix product");
        const std::size_t n = x.n_;
        TransformMatrix z(n);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = 0; r < n; ++r) {
                const Complex xr = x(p, r);
                if (xr == Complex{0.0}) continue;
                for (std::size_t q = 0; q < n; ++q) z(p, q) += xr * y(r, q);
            }
        }
        return z;
    }

    friend StateVector operator*(const TransformMatrix& m, const StateVector& v) {
        if (m.n_ != v.size()) throw LabError(ErrorCode::DimensionMismatch, "matrix-vector product");
        StateVector out(m.n_);
        for (std::size_t p = 0; p < m.n_; ++p) {
            Complex s{0.0};
            for (std::size_t q = 0; q < m.n_; ++q) s += m(p, q) * v[q];
            out[p] = s;
        }
        return out;
    }

    friend bool operator==(const TransformMatrix&, const TransformMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Complex> e_;
};

/// max |(M^dagger M - I)(p,q)|
inline double unitarity_residual(const TransformMatrix& m) {
    const std::size_t n = m.dim();
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            Complex s{0.0};
            for (std::size_t r = 0; r < n; ++r) s += std::conj(m(r, p)) * m(r, q);
            if (p == q) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

inline bool is_unitary(const TransformMatrix& m, double tol = kProductUnitarityTol) {
    for (const Complex& z : m.entries())
        if (!is_finite(z)) return false;
    return unitarity_residual(m) <= tol;
}

/// Entrywise max |x - y|.
inline double max_abs_diff(const TransformMatrix& x, const TransformMatrix& y) {
    if (x.dim() != y.dim()) throw LabError(ErrorCode::DimensionMismatch, "max_abs_diff");
    double worst = 0.0;
    auto xe = x.entries();
    auto ye = y.entries();
    for (std::size_t i = 0; i < xe.size(); ++i) worst = std::max(worst, std::abs(xe[i] - ye[i]));
    return worst;
}

inline double max_abs_diff(const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) throw LabError(ErrorCode::DimensionMismatch, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

// ---------------------------------------------------------------------------
// Circuits
// ---------------------------------------------------------------------------

/// Wire count plus an ordered gate sequence. Every gate is validated on construction.
class LayeredCircuit {
public:
    explicit LayeredCircuit(std::size_t n, std::vector<Gate> gates = {}) : n_(n), gates_(std::move(gates)) {
        if (n_ == 0) throw LabError(ErrorCode::InvalidCircuit, "circuit needs at least one wire");
        if (n_ < 2 && !gates_.empty()) {
            throw LabError(ErrorCode::InvalidCircuit, "gates need at least two wires");
        }
        for (const Gate& g : gates_) validate_gate(g, n_);
    }

    std::size_t n() const { return n_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }
    const std::vector<Gate>& gates() const { return gates_; }
    const Gate& operator[](std::size_t i) const { return gates_[i]; }

    friend bool operator==(const LayeredCircuit&, const LayeredCircuit&) = default;

private:
    std::size_t n_;
    std::vector<Gate> gates_;
};

/// The full n x n matrix with the gate block on rows/columns {k, l} and identity elsewhere.
inline TransformMatrix embed_gate(const Gate& g, std::size_t n) {
    validate_gate(g, n);
    TransformMatrix m = TransformMatrix::identity(n);
    m(g.k, g.k) = g.a(0, 0);
    m(g.k, g.l) = g.a(0, 1);
    m(g.l, g.k) = g.a(1, 0);
    m(g.l, g.l) = g.a(1, 1);
    return m;
}

namespace detail {

// Mixes two equal-length spans in place: x' = a11 x + a12 y, y' = a21 x + a22 y.
inline void mix(std::span<Complex> x, std::span<Complex> y, const Mat2& a) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Complex xj = x[j];
        const Complex yj = y[j];
        x[j] = a(0, 0) * xj + a(0, 1) * yj;
        y[j] = a(1, 0) * xj + a(1, 1) * yj;
    }
}

}  // namespace detail

inline StateVector apply_gate_state(StateVector v, const Gate& g) {
    if (g.l >= v.size()) throw LabError(ErrorCode::DimensionMismatch, "gate wire beyond state length");
    validate_gate(g, v.size());
    const Complex x = v[g.k];
    const Complex y = v[g.l];
    v[g.k] = g.a(0, 0) * x + g.a(0, 1) * y;
    v[g.l] = g.a(1, 0) * x + g.a(1, 1) * y;
    return v;
}

// In-place row update; callers guarantee the gate is valid for m.
inline void apply_gate_rows(TransformMatrix& m, const Gate& g) { detail::mix(m.row(g.k), m.row(g.l), g.a); }

/// Left-multiplies by the embedded gate, touching only rows k and l.
inline TransformMatrix apply_gate_matrix(TransformMatrix m, const Gate& g) {
    if (g.l >= m.dim()) throw LabError(ErrorCode::DimensionMismatch, "gate wire beyond matrix dimension");
    validate_gate(g, m.dim());
    apply_gate_rows(m, g);
    return m;
}

inline StateVector simulate(const LayeredCircuit& c, StateVector v) {
    if (v.size() != c.n()) {
        throw LabError(ErrorCode::DimensionMismatch,
                       "state length " + std::to_string(v.size()) + " vs n = " + std::to_string(c.n()));
    }
    for (const Gate& g : c.gates()) {
        const Complex x = v[g.k];
        const Complex y = v[g.l];
        v[g.k] = g.a(0, 0) * x + g.a(0, 1) * y;
        v[g.l] = g.a(1, 0) * x + g.a(1, 1) * y;
    }
    return v;
}

/// Lazy walk over M_0 = Id, M_i = embed(g_i) M_{i-1}. Holds one matrix plus
/// copies of the two rows the latest gate replaced.
class Accumulator {
public:
    struct Step {
        std::size_t index;  // 1-based gate number
        const Gate& gate;
        std::span<const Complex> pre_k;
        std::span<const Complex> pre_l;
        const TransformMatrix& matrix;  // M_index
    };

    explicit Accumulator(const LayeredCircuit& c)
        : circuit_(&c), m_(TransformMatrix::identity(c.n())), pre_k_(c.n()), pre_l_(c.n()) {}

    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == circuit_->size(); }
    const TransformMatrix& current() const { return m_; }

    Step advance() {
        if (done()) throw std::out_of_range("Accumulator advanced past the last gate");
        const Gate& g = (*circuit_)[pos_];
        auto rk = m_.row(g.k);
        auto rl = m_.row(g.l);
        std::copy(rk.begin(), rk.end(), pre_k_.begin());
        std::copy(rl.begin(), rl.end(), pre_l_.begin());
        apply_gate_rows(m_, g);
        ++pos_;
        return Step{pos_, g, pre_k_, pre_l_, m_};
    }

    TransformMatrix release() && { return std::move(m_); }

private:
    const LayeredCircuit* circuit_;
    std::size_t pos_ = 0;
    TransformMatrix m_;
    std::vector<Complex> pre_k_;
    std::vector<Complex> pre_l_;
};

/// Every M_i, i = 0..m. Memory is (m+1) n^2; prefer Accumulator or final_matrix for large circuits.
inline std::vector<TransformMatrix> accumulate(const LayeredCircuit& c) {
    std::vector<TransformMatrix> out;
    out.reserve(c.size() + 1);
    Accumulator acc(c);
    out.push_back(acc.current());
    while (!acc.done()) out.push_back(acc.advance().matrix);
    return out;
}

inline TransformMatrix final_matrix(const LayeredCircuit& c) {
    Accumulator acc(c);
    while (!acc.done()) acc.advance();
    return std::move(acc).release();
}

/// Reversed order, each block conjugate-transposed.
inline LayeredCircuit invert_circuit(const LayeredCircuit& c) {
    std::vector<Gate> inv;
    inv.reserve(c.size());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) inv.push_back(it->adjoint());
    return LayeredCircuit(c.n(), std::move(inv));
}

}  // namespace ulab
