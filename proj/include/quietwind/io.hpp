#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "quietwind/airfoil.hpp"
#include "quietwind/common.hpp"
#include "quietwind/turbine.hpp"

namespace quietwind {

class FileError : public std::runtime_error {
public:
    explicit FileError(const std::string& what) : std::runtime_error(what) {}
};

class MalformedRowError : public std::runtime_error {
public:
    MalformedRowError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyFileError : public std::runtime_error {
public:
    explicit EmptyFileError(const std::string& path)
        : std::runtime_error(path + ": no data rows") {}
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::vector<std::string> split_char(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.emplace_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

/// Shortest round-trip decimal form; stable across runs of the same build.
inline std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace detail

/// Polar table: columns alpha_deg, cl, cd[, dstar_over_chord]; '#' comments.
/// The polar name is the file stem.
inline AirfoilPolar load_polar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open polar file: " + path.string());
    std::vector<double> alpha, cl, cd, dstar;
    std::string line;
    std::size_t lineno = 0;
    bool saw_dstar = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cols = detail::split_ws(t);
        double a;
        if (!detail::parse_double(cols[0], a)) continue; // column header line
        if (cols.size() < 3)
            throw MalformedRowError(path.string(), lineno, "expected alpha_deg cl cd [dstar_over_chord]");
        double vcl, vcd, vd = 0.0;
        if (!detail::parse_double(cols[1], vcl) || !detail::parse_double(cols[2], vcd))
            throw MalformedRowError(path.string(), lineno, "non-numeric cl/cd");
        if (cols.size() >= 4) {
            if (!detail::parse_double(cols[3], vd))
                throw MalformedRowError(path.string(), lineno, "non-numeric dstar_over_chord");
            saw_dstar = true;
        }
        alpha.push_back(a);
        cl.push_back(vcl);
        cd.push_back(vcd);
        dstar.push_back(vd);
    }
    if (alpha.empty()) throw EmptyFileError(path.string());
    if (!saw_dstar) dstar.clear();
    return AirfoilPolar(path.stem().string(), std::move(alpha), std::move(cl), std::move(cd),
                        std::move(dstar));
}

inline std::vector<AirfoilPolar> load_polar_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw FileError("polar directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".dat") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<AirfoilPolar> polars;
    for (const auto& f : files) polars.push_back(load_polar(f));
    if (polars.empty()) throw FileError("no .dat polar files in " + dir.string());
    return polars;
}

/// Geometry file: `key value` preamble (blade_radius_m, hub_radius_m,
/// n_blades, rated_power_w) followed by the segment table
/// station_m width_m chord_m twist_deg airfoil_id.
inline TurbineGeometry load_turbine(const std::filesystem::path& geometry_path,
                                    const std::filesystem::path& polar_dir) {
    std::ifstream in(geometry_path);
    if (!in) throw FileError("cannot open geometry file: " + geometry_path.string());

    double blade_radius = 0.0, hub_radius = 0.0, rated_power = 0.0;
    int n_blades = 0;
    std::vector<BladeSegment> segments;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cols = detail::split_ws(t);
        if (cols.size() == 2) {
            double v;
            if (!detail::parse_double(cols[1], v))
                throw MalformedRowError(geometry_path.string(), lineno, "non-numeric value for " + cols[0]);
            if (cols[0] == "blade_radius_m") blade_radius = v;
            else if (cols[0] == "hub_radius_m") hub_radius = v;
            else if (cols[0] == "n_blades") n_blades = static_cast<int>(v);
            else if (cols[0] == "rated_power_w") rated_power = v;
            else throw MalformedRowError(geometry_path.string(), lineno, "unknown key " + cols[0]);
            continue;
        }
        if (cols.size() == 5) {
            double station;
            if (!detail::parse_double(cols[0], station)) continue; // column header line
            BladeSegment seg;
            seg.radial_station_m = station;
            if (!detail::parse_double(cols[1], seg.span_width_m) ||
                !detail::parse_double(cols[2], seg.chord_m) ||
                !detail::parse_double(cols[3], seg.twist_deg))
                throw MalformedRowError(geometry_path.string(), lineno, "non-numeric segment column");
            seg.airfoil_id = cols[4];
            segments.push_back(seg);
            continue;
        }
        throw MalformedRowError(geometry_path.string(), lineno, "unrecognized row layout");
    }
    if (segments.empty()) throw EmptyFileError(geometry_path.string());
    return TurbineGeometry(blade_radius, hub_radius, n_blades, rated_power, std::move(segments),
                           load_polar_dir(polar_dir));
}

/// Ingested wind record: clipped 60 s bin means for replay, raw bin stats
/// for the resource model.
struct WindSeries {
    std::vector<double> speeds_ms; // clipped to the admissible range
    int clip_count = 0;
    std::size_t raw_rows = 0;
    double raw_mean = 0.0;
    double raw_std = 0.0;
};

/// CSV schema: header `timestamp,wind_speed_ms[,direction_deg]`; timestamps
/// in seconds at any cadence. Rows are binned to 60 s means; the direction
/// column is ignored.
inline WindSeries ingest_wind_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open wind csv: " + path.string());

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw EmptyFileError(path.string());
    ++lineno;
    auto header = detail::split_char(detail::trim(line), ',');
    int t_col = -1, u_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "timestamp") t_col = static_cast<int>(i);
        if (header[i] == "wind_speed_ms") u_col = static_cast<int>(i);
    }
    if (t_col < 0)
        throw MalformedRowError(path.string(), 1, "missing required column 'timestamp'");
    if (u_col < 0)
        throw MalformedRowError(path.string(), 1, "missing required column 'wind_speed_ms'");

    // accumulate 60 s bins keyed on floor(t/60), in file order
    std::vector<std::pair<long long, std::pair<double, long>>> bins; // bin -> (sum, count)
    while (std::getline(in, line)) {
        ++lineno;
        auto t = detail::trim(line);
        if (t.empty()) continue;
        auto cols = detail::split_char(t, ',');
        if (cols.size() < header.size())
            throw MalformedRowError(path.string(), lineno, "expected " +
                                    std::to_string(header.size()) + " columns, got " +
                                    std::to_string(cols.size()));
        double ts, u;
        if (!detail::parse_double(cols[t_col], ts))
            throw MalformedRowError(path.string(), lineno, "non-numeric timestamp");
        if (!detail::parse_double(cols[u_col], u))
            throw MalformedRowError(path.string(), lineno, "non-numeric wind_speed_ms");
        const long long bin = static_cast<long long>(std::floor(ts / 60.0));
        if (bins.empty() || bins.back().first != bin)
            bins.push_back({bin, {0.0, 0}});
        bins.back().second.first += u;
        bins.back().second.second += 1;
    }
    if (bins.empty()) throw EmptyFileError(path.string());

    WindSeries out;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& [bin, acc] : bins) {
        (void)bin;
        const double mean = acc.first / acc.second;
        out.raw_rows += static_cast<std::size_t>(acc.second);
        sum += mean;
        sum2 += mean * mean;
        double clipped = mean;
        if (clipped < kWindSpeedMin) { clipped = kWindSpeedMin; ++out.clip_count; }
        if (clipped > kWindSpeedMax) { clipped = kWindSpeedMax; ++out.clip_count; }
        out.speeds_ms.push_back(clipped);
    }
    const double n = static_cast<double>(out.speeds_ms.size());
    out.raw_mean = sum / n;
    out.raw_std = std::sqrt(std::max(sum2 / n - out.raw_mean * out.raw_mean, 0.0));
    return out;
}

/// Plain-text table emitter. Every file carries the config fingerprint and
/// seed on a comment line followed by a header row.
class TableWriter {
public:
    TableWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
                std::uint64_t config_hash, std::uint64_t seed)
        : out_(path) {
        if (!out_) throw FileError("cannot write " + path.string());
        char hash_hex[17];
        std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                      static_cast<unsigned long long>(config_hash));
        out_ << "# config_hash=" << hash_hex << " seed=" << seed << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? " " : "") << columns[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? " " : "") << detail::format_double(values[i]);
        out_ << "\n";
    }

    void raw_row(const std::string& text) { out_ << text << "\n"; }

private:
    std::ofstream out_;
};

} // namespace quietwind
