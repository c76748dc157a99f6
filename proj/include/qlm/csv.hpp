#pragma once

// CSV interchange for every result kind. Schemas:
//   curve: n,P,Q
//   sweep: N,trials,halt_fraction,fidelity_mean,fidelity_std,n_c,n_c_r2,product_score_median
//   fit:   kind,param1,param2,r_squared,points_used
//   trace: iter,input,outcome,success,N0,N1,NT,halted
// Doubles are written with 17 significant digits (exact round trip). Files
// are written to a temporary sibling and renamed, so a file is either fully
// written or absent.

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "qlm/errors.hpp"
#include "qlm/experiment.hpp"
#include "qlm/learning.hpp"

namespace qlm {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("rename failed: " + path);
    }
}

inline void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& curve) {
    std::string out = "n,P,Q\n";
    char buf[96];
    for (const auto& pt : curve) {
        std::snprintf(buf, sizeof(buf), "%" PRIu64 ",", pt.n);
        out += buf;
        out += format_double(pt.learn_p);
        out += ',';
        out += format_double(pt.survive_q);
        out += '\n';
    }
    atomic_write_file(path, out);
}

inline void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::string out = "N,trials,halt_fraction,fidelity_mean,fidelity_std,n_c,n_c_r2,product_score_median\n";
    char buf[64];
    for (const auto& row : sweep.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,", row.memory_size, row.trials);
        out += buf;
        out += format_double(row.halt_fraction);
        out += ',';
        out += format_double(row.fidelity_mean);
        out += ',';
        out += format_double(row.fidelity_std);
        out += ',';
        out += format_double(row.n_c);
        out += ',';
        out += format_double(row.n_c_r2);
        out += ',';
        out += format_double(row.product_score_median);
        out += '\n';
    }
    atomic_write_file(path, out);
}

inline const char* fit_kind_name(FitKind kind) {
    return kind == FitKind::Exponential ? "exponential" : "power-law";
}

inline void write_fit_csv(const std::string& path, const CurveFit& fit) {
    std::string out = "kind,param1,param2,r_squared,points_used\n";
    out += fit_kind_name(fit.kind);
    out += ',';
    out += format_double(fit.param1);
    out += ',';
    out += format_double(fit.param2);
    out += ',';
    out += format_double(fit.r_squared);
    out += ',';
    out += std::to_string(fit.points_used);
    out += '\n';
    atomic_write_file(path, out);
}

inline void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
    std::string out = "iter,input,outcome,success,N0,N1,NT,halted\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%d,%d,%d,%d,%d,%d,%d\n", r.iter, r.input, r.outcome,
                      r.success, r.n0, r.n1, r.nt, r.halted);
        out += buf;
    }
    atomic_write_file(path, out);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_double(const std::string& s) {
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("malformed number in CSV: '" + s + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("malformed integer in CSV: '" + s + "'");
    return v;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace detail

inline std::vector<CurvePoint> read_curve_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "n,P,Q")
        throw std::invalid_argument("not a curve CSV (expected header 'n,P,Q'): " + path);
    std::vector<CurvePoint> curve;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = detail::split_csv_line(lines[i]);
        if (fields.size() != 3) throw std::invalid_argument("malformed curve CSV row: " + lines[i]);
        curve.push_back(CurvePoint{detail::parse_u64(fields[0]), detail::parse_double(fields[1]),
                                   detail::parse_double(fields[2])});
    }
    return curve;
}

inline SweepResult read_sweep_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    const std::string header =
        "N,trials,halt_fraction,fidelity_mean,fidelity_std,n_c,n_c_r2,product_score_median";
    if (lines.empty() || lines[0] != header)
        throw std::invalid_argument("not a sweep CSV (unexpected header): " + path);
    SweepResult sweep;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = detail::split_csv_line(lines[i]);
        if (fields.size() != 8) throw std::invalid_argument("malformed sweep CSV row: " + lines[i]);
        SweepRow row{};
        row.memory_size = static_cast<int>(detail::parse_u64(fields[0]));
        row.trials = static_cast<int>(detail::parse_u64(fields[1]));
        row.halt_fraction = detail::parse_double(fields[2]);
        row.fidelity_mean = detail::parse_double(fields[3]);
        row.fidelity_std = detail::parse_double(fields[4]);
        row.n_c = detail::parse_double(fields[5]);
        row.n_c_r2 = detail::parse_double(fields[6]);
        row.product_score_median = detail::parse_double(fields[7]);
        row.n_c_reliable = std::isfinite(row.n_c) && row.n_c > 0.0;
        sweep.rows.push_back(row);
    }
    return sweep;
}

/// Sniffs the file kind from its header and fits the matching model.
inline CurveFit analyze_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty()) throw std::invalid_argument("empty CSV: " + path);
    if (lines[0] == "n,P,Q") return fit_exponential_survival(read_curve_csv(path));
    return fit_power_law(read_sweep_csv(path));
}

} // namespace qlm
