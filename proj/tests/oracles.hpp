#pragma once

// Reference computations for the tests. Each one takes a different route from
// the library: dense products instead of row updates, long-double trig instead
// of a twiddle table, Leibniz expansion instead of elimination.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ulab/core.hpp"

namespace oracle {

using ulab::Complex;
using Dense = std::vector<std::vector<Complex>>;

inline Dense identity(std::size_t n) {
    Dense m(n, std::vector<Complex>(n, Complex{0.0}));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Dense multiply(const Dense& x, const Dense& y) {
    const std::size_t n = x.size();
    Dense z(n, std::vector<Complex>(n, Complex{0.0}));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r) z[p][q] += x[p][r] * y[r][q];
    return z;
}

/// Full n x n matrix of a gate, built from the block definition.
inline Dense embedded(const ulab::Gate& g, std::size_t n) {
    Dense m = identity(n);
    const std::size_t idx[2] = {g.k, g.l};
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) m[idx[a]][idx[b]] = g.a(a, b);
    return m;
}

/// Product of embedded gates by full dense multiplication.
inline Dense circuit_product(const ulab::LayeredCircuit& c) {
    Dense m = identity(c.n());
    for (const auto& g : c.gates()) m = multiply(embedded(g, c.n()), m);
    return m;
}

inline double max_diff(const Dense& x, const ulab::TransformMatrix& y) {
    double worst = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t q = 0; q < x.size(); ++q) worst = std::max(worst, std::abs(x[p][q] - y(p, q)));
    return worst;
}

/// DFT entries from long-double trigonometry of the exact angle 2 pi (pq mod n) / n.
inline Dense dft(std::size_t n, bool normalized) {
    Dense m(n, std::vector<Complex>(n));
    const long double scale = normalized ? 1.0L / std::sqrt(static_cast<long double>(n)) : 1.0L;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            const long double ang =
                -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((p * q) % n) / n;
            m[p][q] = Complex{static_cast<double>(scale * std::cos(ang)), static_cast<double>(scale * std::sin(ang))};
        }
    }
    return m;
}

inline std::vector<Complex> apply(const Dense& m, const std::vector<Complex>& v) {
    std::vector<Complex> out(m.size(), Complex{0.0});
    for (std::size_t p = 0; p < m.size(); ++p)
        for (std::size_t q = 0; q < m.size(); ++q) out[p] += m[p][q] * v[q];
    return out;
}

/// Index with its `bits` binary digits written backwards, via a string.
inline std::size_t bit_reverse(std::size_t j, unsigned bits) {
    std::string s(bits, '0');
    for (unsigned b = 0; b < bits; ++b) s[bits - 1 - b] = ((j >> b) & 1u) ? '1' : '0';
    std::reverse(s.begin(), s.end());
    return bits == 0 ? 0 : std::stoul(s, nullptr, 2);
}

/// Leibniz expansion over all permutations.
inline Complex leibniz_det(const Dense& a) {
    const std::size_t k = a.size();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    Complex det{0.0};
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Complex term = (inversions % 2) ? Complex{-1.0} : Complex{1.0};
        for (std::size_t i = 0; i < k; ++i) term *= a[i][perm[i]];
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

/// Max |det| over square submatrices, enumerating index combinations recursively.
inline double max_subdet(const Dense& m) {
    const std::size_t n = m.size();
    double best = 0.0;
    std::vector<std::vector<std::size_t>> subsets;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) s.push_back(i);
        subsets.push_back(s);
    }
    for (const auto& rows : subsets) {
        for (const auto& cols : subsets) {
            if (rows.size() != cols.size()) continue;
            Dense sub(rows.size(), std::vector<Complex>(rows.size()));
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = 0; b < cols.size(); ++b) sub[a][b] = m[rows[a]][cols[b]];
            best = std::max(best, std::abs(leibniz_det(sub)));
        }
    }
    return best;
}

/// Phi in long double with natural log, converted to bits at the end.
inline double entropy(const Dense& m) {
    long double s = 0.0L;
    for (const auto& row : m) {
        for (const auto& z : row) {
            const long double w = static_cast<long double>(std::norm(z));
            if (w > 0.0L) s -= w * std::log(w);
        }
    }
    return static_cast<double>(s / std::log(2.0L));
}

inline double entropy(const ulab::TransformMatrix& m) {
    Dense d(m.dim(), std::vector<Complex>(m.dim()));
    for (std::size_t p = 0; p < m.dim(); ++p)
        for (std::size_t q = 0; q < m.dim(); ++q) d[p][q] = m(p, q);
    return entropy(d);
}

inline std::vector<Complex> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex{g(rng), g(rng)};
    return v;
}

}  // namespace oracle
