#ifndef SGFIT_DATA_INGEST_HPP
#define SGFIT_DATA_INGEST_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgfit/eos.hpp"
#include "sgfit/errors.hpp"
#include "sgfit/fitting.hpp"

namespace sgfit {

/// An immutable collection of state points sorted by (p, T).
struct Dataset {
    std::vector<StatePoint> points;
    std::string source;
    std::vector<double> p_values; ///< sorted distinct pressures, Pa
    std::size_t dropped_rows = 0; ///< non-liquid-phase rows skipped during parsing
};

/// The (p, T) cell grid over which windows are formed.  Defaults match the
/// tabulated 25 MPa x 25 K layout.
struct WindowGrid {
    std::vector<double> p_edges; ///< Pa, strictly increasing
    std::vector<double> T_edges; ///< K, strictly increasing

    static WindowGrid standard() {
        WindowGrid g;
        for (int i = 0; i <= 11; ++i) g.p_edges.push_back(25e6 + 25e6 * i);
        for (int j = 0; j <= 13; ++j) g.T_edges.push_back(300.0 + 25.0 * j);
        return g;
    }

    void validate() const {
        if (p_edges.size() < 2 || T_edges.size() < 2)
            throw DomainError("WindowGrid: need at least 2 edges per axis");
        if (!std::is_sorted(p_edges.begin(), p_edges.end()) ||
            std::adjacent_find(p_edges.begin(), p_edges.end()) != p_edges.end())
            throw DomainError("WindowGrid: p_edges must be strictly increasing");
        if (!std::is_sorted(T_edges.begin(), T_edges.end()) ||
            std::adjacent_find(T_edges.begin(), T_edges.end()) != T_edges.end())
            throw DomainError("WindowGrid: T_edges must be strictly increasing");
    }

    std::size_t n_p_windows() const { return p_edges.size() - 1; }
    std::size_t n_T_windows() const { return T_edges.size() - 1; }
};

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view cell, std::size_t row, std::size_t col) {
    const std::string s(trim(cell));
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || end != s.c_str() + s.size())
        throw ParseError("unparseable numeric cell '" + s + "' at row " +
                         std::to_string(row) + ", column " + std::to_string(col));
    return v;
}

/// 17 significant digits: enough for exact double round-trips.
inline std::string format_full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace detail

/// Semantic roles of input columns.
enum class Column { Temperature, Pressure, Volume, Density, InternalEnergy, Phase };

/// Explicit column-index and unit-scale overrides for nonstandard files.
/// Scales are multipliers applied to reach SI.
struct ParseOptions {
    std::map<Column, std::size_t> column_map; ///< empty entries are auto-detected from headers
    std::optional<double> pressure_scale;     ///< default from header unit, else 1e6 (MPa)
    std::optional<double> energy_scale;       ///< default from header unit, else 1e3 (kJ/kg)
    std::optional<char> delimiter;            ///< default auto-detected among tab/comma
};

/// Parse a NIST-webbook-style delimited text file with a header row into SI
/// units.  Accepts either a specific-volume or a density column; rows whose
/// phase marker is not liquid are dropped (counted in Dataset::dropped_rows).
inline Dataset parse_isobaric_file(std::string_view text, const ParseOptions& opts = {},
                                   std::string source = "") {
    std::vector<std::string_view> lines;
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t pos = text.find('\n', start);
            if (pos == std::string_view::npos) pos = text.size();
            std::string_view line = text.substr(start, pos - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            start = pos + 1;
        }
        while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
    }
    if (lines.empty())
        throw ParseError("empty input");

    const char delim = opts.delimiter.value_or(
        lines[0].find('\t') != std::string_view::npos ? '\t' : ',');

    const auto header = detail::split(lines[0], delim);

    std::map<Column, std::size_t> cols = opts.column_map;
    double p_scale = opts.pressure_scale.value_or(0.0);
    double e_scale = opts.energy_scale.value_or(0.0);
    const bool user_chose_density =
        opts.column_map.count(Column::Density) && !opts.column_map.count(Column::Volume);

    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string h = detail::lower(header[i]);
        auto claim = [&](Column c) {
            if (!cols.count(c)) cols[c] = i;
        };
        // canonical CSV header names are recognized directly
        if (h == "t_k") {
            claim(Column::Temperature);
        } else if (h == "p_pa") {
            claim(Column::Pressure);
            if (p_scale == 0.0) p_scale = 1.0;
        } else if (h == "v_m3kg") {
            claim(Column::Volume);
        } else if (h == "e_jkg") {
            claim(Column::InternalEnergy);
            if (e_scale == 0.0) e_scale = 1.0;
        } else if (h.find("temperature") != std::string::npos) {
            claim(Column::Temperature);
        } else if (h.find("pressure") != std::string::npos) {
            claim(Column::Pressure);
            if (p_scale == 0.0) {
                if (h.find("mpa") != std::string::npos) p_scale = 1e6;
                else if (h.find("kpa") != std::string::npos) p_scale = 1e3;
                else if (h.find("pa") != std::string::npos) p_scale = 1.0;
            }
        } else if (h.find("internal energy") != std::string::npos ||
                   h.find("energy") != std::string::npos) {
            claim(Column::InternalEnergy);
            if (e_scale == 0.0) {
                if (h.find("kj/kg") != std::string::npos) e_scale = 1e3;
                else if (h.find("j/kg") != std::string::npos) e_scale = 1.0;
            }
        } else if (h.find("volume") != std::string::npos) {
            claim(Column::Volume);
        } else if (h.find("density") != std::string::npos) {
            claim(Column::Density);
        } else if (h.find("phase") != std::string::npos) {
            claim(Column::Phase);
        }
    }
    if (p_scale == 0.0) p_scale = 1e6;
    if (e_scale == 0.0) e_scale = 1e3;

    for (Column required : {Column::Temperature, Column::Pressure, Column::InternalEnergy})
        if (!cols.count(required))
            throw ParseError("missing required column (temperature, pressure, or internal energy)");
    if (!cols.count(Column::Volume) && !cols.count(Column::Density))
        throw ParseError("missing required column: specific volume or density");
    // a direct volume column wins over density unless the caller mapped density
    const bool density_not_volume = user_chose_density || !cols.count(Column::Volume);

    Dataset ds;
    ds.source = std::move(source);
    std::set<std::pair<double, double>> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (detail::trim(lines[r]).empty()) continue;
        const auto cells = detail::split(lines[r], delim);
        auto cell = [&](Column c) -> std::string_view {
            const std::size_t idx = cols.at(c);
            if (idx >= cells.size())
                throw ParseError("row " + std::to_string(r) + " has too few columns");
            return cells[idx];
        };
        if (cols.count(Column::Phase)) {
            const std::string phase = detail::lower(cell(Column::Phase));
            if (!phase.empty() && phase.find("liquid") == std::string::npos) {
                ++ds.dropped_rows;
                continue;
            }
        }
        StatePoint pt;
        pt.T = detail::parse_double(cell(Column::Temperature), r, cols.at(Column::Temperature));
        pt.p = detail::parse_double(cell(Column::Pressure), r, cols.at(Column::Pressure)) * p_scale;
        if (density_not_volume) {
            const double rho =
                detail::parse_double(cell(Column::Density), r, cols.at(Column::Density));
            if (!(rho > 0.0))
                throw ParseError("non-positive density at row " + std::to_string(r));
            pt.v = 1.0 / rho;
        } else {
            pt.v = detail::parse_double(cell(Column::Volume), r, cols.at(Column::Volume));
        }
        pt.e = detail::parse_double(cell(Column::InternalEnergy), r,
                                    cols.at(Column::InternalEnergy)) * e_scale;
        if (!(pt.T > 0.0 && pt.p > 0.0 && pt.v > 0.0))
            throw ParseError("non-positive T, p, or v at row " + std::to_string(r));
        if (!seen.insert({pt.p, pt.T}).second)
            throw ParseError("duplicate (p, T) key at row " + std::to_string(r) + ": p = " +
                             detail::format_full(pt.p) + " Pa, T = " +
                             detail::format_full(pt.T) + " K");
        ds.points.push_back(pt);
    }
    if (ds.points.empty())
        throw ParseError("no data rows");

    std::sort(ds.points.begin(), ds.points.end(), [](const StatePoint& a, const StatePoint& b) {
        return a.p != b.p ? a.p < b.p : a.T < b.T;
    });
    std::set<double> ps;
    for (const auto& pt : ds.points) ps.insert(pt.p);
    ds.p_values.assign(ps.begin(), ps.end());
    return ds;
}

/// Canonical CSV form: header `T_K,p_Pa,v_m3kg,e_Jkg`, full double precision.
inline std::string serialize_csv(const Dataset& ds) {
    std::string out = "T_K,p_Pa,v_m3kg,e_Jkg\n";
    for (const auto& pt : ds.points) {
        out += detail::format_full(pt.T);
        out += ',';
        out += detail::format_full(pt.p);
        out += ',';
        out += detail::format_full(pt.v);
        out += ',';
        out += detail::format_full(pt.e);
        out += '\n';
    }
    return out;
}

/// Parse the canonical CSV form back into a Dataset.
inline Dataset parse_canonical_csv(std::string_view text, std::string source = "") {
    ParseOptions opts;
    opts.column_map = {{Column::Temperature, 0}, {Column::Pressure, 1},
                       {Column::Volume, 2}, {Column::InternalEnergy, 3}};
    opts.pressure_scale = 1.0;
    opts.energy_scale = 1.0;
    opts.delimiter = ',';
    return parse_isobaric_file(text, opts, std::move(source));
}

/// Bin points into closed-range windows [p_i, p_{i+1}] x [T_j, T_{j+1}];
/// boundary points belong to every window containing them.  Windows failing
/// the rank requirement are kept (marked by FitWindow::fittable()).
inline std::vector<FitWindow> partition(const Dataset& ds, const WindowGrid& grid) {
    grid.validate();
    if (ds.points.empty())
        throw DomainError("partition: empty dataset");

    std::vector<FitWindow> windows;
    windows.reserve(grid.n_p_windows() * grid.n_T_windows());
    for (std::size_t i = 0; i + 1 < grid.p_edges.size(); ++i)
        for (std::size_t j = 0; j + 1 < grid.T_edges.size(); ++j)
            windows.push_back(FitWindow{grid.p_edges[i], grid.p_edges[i + 1],
                                        grid.T_edges[j], grid.T_edges[j + 1], {}});

    const std::size_t nt = grid.n_T_windows();
    for (const auto& pt : ds.points)
        for (std::size_t i = 0; i < grid.n_p_windows(); ++i) {
            if (pt.p < grid.p_edges[i] || pt.p > grid.p_edges[i + 1]) continue;
            for (std::size_t j = 0; j < nt; ++j)
                if (pt.T >= grid.T_edges[j] && pt.T <= grid.T_edges[j + 1])
                    windows[i * nt + j].points.push_back(pt);
        }
    return windows;
}

/// Generate an exact (or multiplicatively perturbed) dataset from known
/// parameters.  Deterministic for a fixed seed: the raw 64-bit generator
/// output is mapped to [1 - noise, 1 + noise] without distribution adapters,
/// so byte-identical output does not depend on the standard library.
inline Dataset synthesize(const SgParams& sg, std::span<const double> p_list,
                          std::span<const double> T_list, double noise = 0.0,
                          std::uint64_t seed = 0) {
    sg.validate();
    if (p_list.empty() || T_list.empty())
        throw DomainError("synthesize: empty pressure or temperature list");
    if (!(noise >= 0.0))
        throw DomainError("synthesize: noise must be >= 0");

    std::mt19937_64 rng(seed);
    auto factor = [&]() {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
        return 1.0 - noise + 2.0 * noise * u;
    };

    Dataset ds;
    ds.source = "synthetic";
    for (double p : p_list)
        for (double T : T_list) {
            StatePoint pt = state_from_pT(sg, p, T);
            if (noise > 0.0) {
                pt.e *= factor();
                pt.v *= factor();
            }
            ds.points.push_back(pt);
        }
    std::sort(ds.points.begin(), ds.points.end(), [](const StatePoint& a, const StatePoint& b) {
        return a.p != b.p ? a.p < b.p : a.T < b.T;
    });
    std::set<double> ps;
    for (const auto& pt : ds.points) ps.insert(pt.p);
    ds.p_values.assign(ps.begin(), ps.end());
    return ds;
}

/// Evenly spaced values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw DomainError("linspace: n must be positive");
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

} // namespace sgfit

#endif // SGFIT_DATA_INGEST_HPP
