#pragma once

#include "core.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace pulsestream {

enum class SignalFormat { CsvDense, CsvSparse };

/// A signal read from disk together with the domain it lives on.
struct LoadedSignal {
    Vector values;
    Domain domain{1};
};

/// Decimal with 17 significant digits; parses back to the same double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Sidecar holding the domain shape: "<path>.json".
inline std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    auto p = path;
    p += ".json";
    return p;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed on " + path.string());
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

inline double parse_double(const std::string& tok, const std::filesystem::path& path, std::size_t line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (tok.empty() || ec != std::errc() || ptr != last)
        throw InvalidArgument(where(path, line) + "malformed number '" + tok + "'");
    if (!std::isfinite(v)) throw InvalidArgument(where(path, line) + "non-finite value '" + tok + "'");
    return v;
}

inline Index parse_index(const std::string& tok, const std::filesystem::path& path, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v < 0)
        throw InvalidArgument(where(path, line) + "malformed index '" + tok + "'");
    return static_cast<Index>(v);
}

}  // namespace detail

inline void write_shape(const std::filesystem::path& path, const Domain& d) {
    nlohmann::json j;
    j["shape"] = d.shape();
    auto out = detail::open_out(sidecar_path(path));
    out << j.dump() << '\n';
    detail::finish(out, sidecar_path(path));
}

/// Domain from the sidecar of `path`, if one exists.
inline std::optional<Domain> read_shape(const std::filesystem::path& path) {
    const auto side = sidecar_path(path);
    if (!std::filesystem::exists(side)) return std::nullopt;
    auto in = detail::open_in(side);
    nlohmann::json j;
    try {
        in >> j;
        const auto shape = j.at("shape").get<std::vector<Index>>();
        if (shape.size() == 1) return Domain(shape[0]);
        if (shape.size() == 2) return Domain(shape[0], shape[1]);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(side.string() + ": bad shape sidecar: " + e.what());
    }
    throw InvalidArgument(side.string() + ": shape must have one or two extents");
}

/// One value per line, row-major. Writes a shape sidecar for 2D domains.
inline void write_dense(const std::filesystem::path& path, const Vector& v, const Domain& d) {
    require(v.size() == d.size(), "dense vector does not span the domain");
    auto out = detail::open_out(path);
    for (Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
    detail::finish(out, path);
    if (d.dims() == 2) write_shape(path, d);
}

inline void write_dense(const std::filesystem::path& path, const Vector& v) { write_dense(path, v, Domain(v.size())); }

inline void write_dense(const std::filesystem::path& path, const std::vector<double>& v) {
    write_dense(path, Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
}

inline LoadedSignal read_dense(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::vector<double> vals;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        vals.push_back(detail::parse_double(t, path, lineno));
    }
    if (vals.empty()) throw InvalidArgument(path.string() + ": no values");
    LoadedSignal s;
    s.values = Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
    s.domain = read_shape(path).value_or(Domain(s.values.size()));
    if (s.domain.size() != s.values.size())
        throw InvalidArgument(path.string() + ": value count does not match the sidecar shape");
    return s;
}

/// Header `index,value`, one row per nonzero. Always writes a shape sidecar.
inline void write_sparse(const std::filesystem::path& path, const SpikeStream& x) {
    auto out = detail::open_out(path);
    out << "index,value\n";
    for (Index i = 0; i < x.support().size(); ++i)
        out << x.support().indices()[static_cast<std::size_t>(i)] << ',' << format_double(x.values()[i]) << '\n';
    detail::finish(out, path);
    write_shape(path, x.domain());
}

/**
 * Reads a sparse CSV. The domain comes from the sidecar when present,
 * otherwise from `fallback`; with neither, the length is max index + 1.
 */
inline LoadedSignal read_sparse(const std::filesystem::path& path, std::optional<Domain> fallback = std::nullopt) {
    auto in = detail::open_in(path);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<std::pair<Index, double>> rows;
    std::set<Index> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        if (!header) {
            if (t != "index,value") throw InvalidArgument(detail::where(path, lineno) + "expected header 'index,value'");
            header = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
            throw InvalidArgument(detail::where(path, lineno) + "expected two fields");
        const Index idx = detail::parse_index(detail::trim(t.substr(0, comma)), path, lineno);
        const double val = detail::parse_double(detail::trim(t.substr(comma + 1)), path, lineno);
        if (!seen.insert(idx).second)
            throw InvalidArgument(detail::where(path, lineno) + "duplicate index " + std::to_string(idx));
        rows.emplace_back(idx, val);
    }
    if (!header) throw InvalidArgument(path.string() + ": missing header 'index,value'");

    LoadedSignal s;
    if (auto d = read_shape(path))
        s.domain = *d;
    else if (fallback)
        s.domain = *fallback;
    else
        s.domain = Domain(seen.empty() ? 1 : *seen.rbegin() + 1);
    s.values = Vector::Zero(s.domain.size());
    for (const auto& [idx, val] : rows) {
        if (idx >= s.domain.size())
            throw InvalidArgument(path.string() + ": index " + std::to_string(idx) + " outside the domain");
        s.values[idx] = val;
    }
    return s;
}

inline LoadedSignal ingest_signal(const std::filesystem::path& path, SignalFormat format) {
    return format == SignalFormat::CsvDense ? read_dense(path) : read_sparse(path);
}

}  // namespace pulsestream
