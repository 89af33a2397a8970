#pragma once

// File formats. Complex numbers are [re, im] everywhere; reals print with 17
// significant digits so every double round-trips exactly.
//
//   circuit: {"n": N, "gates": [{"k": K, "l": L, "a": [[re,im] x4]}]}   (a row-major)
//   matrix:  {"n": N, "entries": [[re,im] x N*N]}                       (row-major)
//   vector:  [[re,im], ...]
//   trace:   CSV "step,k,l,kind,phi,delta_phi,bound_ok" + summary JSON

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "ulab/core.hpp"
#include "ulab/potentials.hpp"

namespace ulab::io {

inline std::string fmt_real(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_complex(Complex z) { return "[" + fmt_real(z.real()) + "," + fmt_real(z.imag()) + "]"; }

inline const char* fmt_bool(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

inline std::string circuit_to_json(const LayeredCircuit& c) {
    std::ostringstream os;
    os << "{\"n\":" << c.n() << ",\"gates\":[";
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Gate& g = c[i];
        if (i) os << ",";
        os << "\n{\"k\":" << g.k << ",\"l\":" << g.l << ",\"a\":[" << fmt_complex(g.a.e[0]) << ","
           << fmt_complex(g.a.e[1]) << "," << fmt_complex(g.a.e[2]) << "," << fmt_complex(g.a.e[3]) << "]}";
    }
    os << (c.empty() ? "]}\n" : "\n]}\n");
    return os.str();
}

inline std::string matrix_to_json(const TransformMatrix& m) {
    std::ostringstream os;
    os << "{\"n\":" << m.dim() << ",\"entries\":[";
    const auto e = m.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) os << ",";
        if (i % m.dim() == 0) os << "\n";
        os << fmt_complex(e[i]);
    }
    os << (e.empty() ? "]}\n" : "\n]}\n");
    return os.str();
}

inline std::string vector_to_json(const StateVector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt_complex(v[i]);
    }
    s += "]\n";
    return s;
}

/// Step 0 carries phi_initial with empty k, l, kind. An extra "morgenstern"
/// column is appended only when the trace was annotated.
inline std::string trace_to_csv(const PotentialTrace& t) {
    const bool morg = t.morgenstern_initial.has_value();
    std::ostringstream os;
    os << "step,k,l,kind,phi,delta_phi,bound_ok" << (morg ? ",morgenstern" : "") << "\n";
    os << "0,,,," << fmt_real(t.phi_initial) << ",0,true";
    if (morg) os << "," << fmt_real(*t.morgenstern_initial);
    os << "\n";
    for (const TraceRecord& r : t.records) {
        os << r.step << "," << r.k << "," << r.l << "," << to_string(r.kind) << "," << fmt_real(r.phi) << ","
           << fmt_real(r.delta_phi) << "," << fmt_bool(r.bound_ok);
        if (morg) os << "," << (r.morgenstern ? fmt_real(*r.morgenstern) : "");
        os << "\n";
    }
    return os.str();
}

inline std::string trace_summary_json(const PotentialTrace& t) {
    std::ostringstream os;
    os << "{\"n\":" << t.n << ",\"m\":" << t.m << ",\"phi_initial\":" << fmt_real(t.phi_initial)
       << ",\"phi_final\":" << fmt_real(t.phi_final) << ",\"max_delta\":" << fmt_real(t.max_delta())
       << ",\"min_delta\":" << fmt_real(t.min_delta()) << ",\"all_bounds_ok\":" << fmt_bool(t.all_bounds_ok())
       << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Readers
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json parse_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw LabError(ErrorCode::ParseError, e.what());
    }
}

inline double get_real(const nlohmann::json& j) {
    if (!j.is_number()) throw LabError(ErrorCode::ParseError, "expected a number, got " + j.dump());
    return j.get<double>();
}

inline std::size_t get_index(const nlohmann::json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw LabError(ErrorCode::ParseError, std::string(what) + " must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

inline Complex get_complex(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw LabError(ErrorCode::ParseError, "complex must be [re, im]");
    const Complex z{get_real(j[0]), get_real(j[1])};
    if (!is_finite(z)) throw LabError(ErrorCode::ParseError, "non-finite complex value");
    return z;
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw LabError(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
    }
    return obj.at(key);
}

}  // namespace detail

/// Parses and validates; gate errors surface as IndexOutOfRange / NotUnitary.
inline LayeredCircuit circuit_from_json(const std::string& text) {
    const auto j = detail::parse_json(text);
    const std::size_t n = detail::get_index(detail::field(j, "n"), "n");
    const auto& arr = detail::field(j, "gates");
    if (!arr.is_array()) throw LabError(ErrorCode::ParseError, "\"gates\" must be an array");
    std::vector<Gate> gates;
    gates.reserve(arr.size());
    for (const auto& gj : arr) {
        Gate g;
        g.k = detail::get_index(detail::field(gj, "k"), "k");
        g.l = detail::get_index(detail::field(gj, "l"), "l");
        const auto& a = detail::field(gj, "a");
        if (!a.is_array() || a.size() != 4) throw LabError(ErrorCode::ParseError, "\"a\" needs 4 entries");
        for (std::size_t i = 0; i < 4; ++i) g.a.e[i] = detail::get_complex(a[i]);
        gates.push_back(g);
    }
    return LayeredCircuit(n, std::move(gates));
}

inline TransformMatrix matrix_from_json(const std::string& text) {
    const auto j = detail::parse_json(text);
    const std::size_t n = detail::get_index(detail::field(j, "n"), "n");
    const auto& arr = detail::field(j, "entries");
    if (!arr.is_array()) throw LabError(ErrorCode::ParseError, "\"entries\" must be an array");
    if (n == 0 || arr.size() != n * n) {
        throw LabError(ErrorCode::DimensionMismatch, "matrix is not square: n = " + std::to_string(n) + " with " +
                                                         std::to_string(arr.size()) + " entries");
    }
    std::vector<Complex> e;
    e.reserve(arr.size());
    for (const auto& z : arr) e.push_back(detail::get_complex(z));
    return TransformMatrix(n, std::move(e));
}

inline StateVector vector_from_json(const std::string& text) {
    const auto j = detail::parse_json(text);
    if (!j.is_array()) throw LabError(ErrorCode::ParseError, "vector must be an array of [re, im]");
    std::vector<Complex> v;
    v.reserve(j.size());
    for (const auto& z : j) v.push_back(detail::get_complex(z));
    return StateVector(std::move(v));
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LabError(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to a sibling temp file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw LabError(ErrorCode::IoError, "cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw LabError(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw LabError(ErrorCode::IoError, "cannot rename onto " + path.string());
    }
}

}  // namespace ulab::io
