#ifndef SGFIT_REPORT_HPP
#define SGFIT_REPORT_HPP

#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sgfit/data_ingest.hpp"
#include "sgfit/fitting.hpp"
#include "sgfit/param_tables.hpp"

namespace sgfit {

/// Fit outcomes for every cell of a window grid, in (p-range, T-range)
/// row-major order.  Cells without a FitResult were degenerate.
struct FitReport {
    WindowGrid grid;
    std::vector<std::optional<FitResult>> cells;
    std::vector<std::string> degenerate_reasons; ///< parallel to cells; empty when fitted

    std::size_t index(std::size_t i, std::size_t j) const { return i * grid.n_T_windows() + j; }

    bool any_invalid() const {
        for (const auto& c : cells)
            if (c && !c->valid()) return true;
        return false;
    }
    bool any_degenerate() const {
        for (const auto& c : cells)
            if (!c) return true;
        return false;
    }
};

/// Fit every window of the grid, optionally in parallel.  Cell order in the
/// report is fixed by the grid regardless of job count.
inline FitReport run_fit(const Dataset& ds, const WindowGrid& grid, unsigned jobs = 1) {
    const std::vector<FitWindow> windows = partition(ds, grid);
    FitReport report;
    report.grid = grid;
    report.cells.resize(windows.size());
    report.degenerate_reasons.resize(windows.size());

    auto fit_one = [&](std::size_t k) {
        try {
            report.cells[k] = fit_window(windows[k]);
        } catch (const std::exception& ex) {
            report.degenerate_reasons[k] = ex.what();
        }
    };

    if (jobs <= 1 || windows.size() < 2) {
        for (std::size_t k = 0; k < windows.size(); ++k) fit_one(k);
        return report;
    }

    const unsigned n_threads = std::min<unsigned>(jobs, std::thread::hardware_concurrency() > 0
                                                            ? std::thread::hardware_concurrency()
                                                            : jobs);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t k = next.fetch_add(1);
                if (k >= windows.size()) break;
                fit_one(k);
            }
        });
    for (auto& th : pool) th.join();
    return report;
}

namespace detail {

inline std::string range_label(double lo, double hi, double scale) {
    auto fmt = [&](double x) {
        char buf[32];
        const double v = x / scale;
        if (v == static_cast<double>(static_cast<long long>(v)))
            std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        else
            std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    return fmt(lo) + "-" + fmt(hi);
}

} // namespace detail

/// Which per-cell quantity a fitted table shows, in published scalings.
enum class ReportField { Gamma, MinusQScaled, PInfScaled, CvScaled, EpsP, EpsT };

inline double report_field_value(const FitResult& r, ReportField f) {
    switch (f) {
        case ReportField::Gamma: return r.params.gamma;
        case ReportField::MinusQScaled: return -r.params.q * 1e-6;
        case ReportField::PInfScaled: return r.params.p_inf * 1e-9;
        case ReportField::CvScaled: return r.params.c_v * 1e-4;
        case ReportField::EpsP: return r.eps_p;
        default: return r.eps_T;
    }
}

inline const char* report_field_name(ReportField f) {
    switch (f) {
        case ReportField::Gamma: return "gamma";
        case ReportField::MinusQScaled: return "minus_q_x1e-6";
        case ReportField::PInfScaled: return "p_inf_x1e-9";
        case ReportField::CvScaled: return "c_v_x1e-4";
        case ReportField::EpsP: return "eps_p";
        default: return "eps_T";
    }
}

/// One fitted table as CSV (pressure rows, temperature columns, full
/// precision).  Degenerate cells are emitted as "n/a".
inline std::string report_table_csv(const FitReport& rep, ReportField field) {
    const auto& g = rep.grid;
    std::string out = "p_range_MPa";
    for (std::size_t j = 0; j < g.n_T_windows(); ++j)
        out += "," + detail::range_label(g.T_edges[j], g.T_edges[j + 1], 1.0);
    out += '\n';
    for (std::size_t i = 0; i < g.n_p_windows(); ++i) {
        out += detail::range_label(g.p_edges[i], g.p_edges[i + 1], 1e6);
        for (std::size_t j = 0; j < g.n_T_windows(); ++j) {
            const auto& c = rep.cells[rep.index(i, j)];
            out += ',';
            out += c ? detail::format_full(report_field_value(*c, field)) : "n/a";
        }
        out += '\n';
    }
    return out;
}

/// Markdown rendering of one fitted table matching the published layout.
inline std::string report_table_markdown(const FitReport& rep, ReportField field) {
    const auto& g = rep.grid;
    std::string out = "| p (MPa) \\ T (K) |";
    for (std::size_t j = 0; j < g.n_T_windows(); ++j)
        out += " " + detail::range_label(g.T_edges[j], g.T_edges[j + 1], 1.0) + " |";
    out += "\n|---|";
    for (std::size_t j = 0; j < g.n_T_windows(); ++j) out += "---|";
    out += '\n';
    char buf[32];
    for (std::size_t i = 0; i < g.n_p_windows(); ++i) {
        out += "| " + detail::range_label(g.p_edges[i], g.p_edges[i + 1], 1e6) + " |";
        for (std::size_t j = 0; j < g.n_T_windows(); ++j) {
            const auto& c = rep.cells[rep.index(i, j)];
            if (c) {
                std::snprintf(buf, sizeof(buf), "%.5g", report_field_value(*c, field));
                out += " ";
                out += buf;
                out += " |";
            } else {
                out += " n/a |";
            }
        }
        out += '\n';
    }
    return out;
}

/// JSON rendering of one fitted table (degenerate cells are null).
inline nlohmann::json report_table_json(const FitReport& rep, ReportField field) {
    const auto& g = rep.grid;
    nlohmann::json j;
    j["parameter"] = report_field_name(field);
    for (std::size_t i = 0; i < g.n_p_windows(); ++i)
        j["p_ranges_MPa"].push_back(detail::range_label(g.p_edges[i], g.p_edges[i + 1], 1e6));
    for (std::size_t t = 0; t < g.n_T_windows(); ++t)
        j["T_ranges_K"].push_back(detail::range_label(g.T_edges[t], g.T_edges[t + 1], 1.0));
    auto& vals = j["values"];
    for (std::size_t i = 0; i < g.n_p_windows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t t = 0; t < g.n_T_windows(); ++t) {
            const auto& c = rep.cells[rep.index(i, t)];
            if (c)
                row.push_back(report_field_value(*c, field));
            else
                row.push_back(nullptr);
        }
        vals.push_back(row);
    }
    return j;
}

/// Per-window diagnostics: point counts, flags, degeneracy reasons.
inline std::string report_diagnostics_csv(const FitReport& rep) {
    const auto& g = rep.grid;
    std::string out =
        "p_range_MPa,T_range_K,n_points,gamma_gt_one,positive_pressure,positive_temperature,"
        "eps_p,eps_T,status\n";
    for (std::size_t i = 0; i < g.n_p_windows(); ++i)
        for (std::size_t j = 0; j < g.n_T_windows(); ++j) {
            out += detail::range_label(g.p_edges[i], g.p_edges[i + 1], 1e6) + ",";
            out += detail::range_label(g.T_edges[j], g.T_edges[j + 1], 1.0) + ",";
            const auto& c = rep.cells[rep.index(i, j)];
            if (c) {
                out += std::to_string(c->n_points) + ",";
                out += c->gamma_gt_one ? "1," : "0,";
                out += c->positive_pressure ? "1," : "0,";
                out += c->positive_temperature ? "1," : "0,";
                out += detail::format_full(c->eps_p) + "," + detail::format_full(c->eps_T) + ",";
                out += c->valid() ? "ok" : "invalid";
            } else {
                out += "0,,,,,,degenerate: " + rep.degenerate_reasons[rep.index(i, j)];
            }
            out += '\n';
        }
    return out;
}

/// Long-format curves of a fitted quantity vs temperature-range midpoint,
/// one series per pressure range.
inline std::string curves_vs_temperature_csv(const FitReport& rep, ReportField field) {
    const auto& g = rep.grid;
    std::string out = "series_p_range_MPa,T_mid_K,value\n";
    for (std::size_t i = 0; i < g.n_p_windows(); ++i)
        for (std::size_t j = 0; j < g.n_T_windows(); ++j) {
            const auto& c = rep.cells[rep.index(i, j)];
            if (!c) continue;
            out += detail::range_label(g.p_edges[i], g.p_edges[i + 1], 1e6) + ",";
            out += detail::format_full(0.5 * (g.T_edges[j] + g.T_edges[j + 1])) + ",";
            out += detail::format_full(report_field_value(*c, field)) + "\n";
        }
    return out;
}

/// Long-format error curves vs pressure-range midpoint, one series per
/// temperature range.
inline std::string curves_vs_pressure_csv(const FitReport& rep, ReportField field) {
    const auto& g = rep.grid;
    std::string out = "series_T_range_K,p_mid_MPa,value\n";
    for (std::size_t j = 0; j < g.n_T_windows(); ++j)
        for (std::size_t i = 0; i < g.n_p_windows(); ++i) {
            const auto& c = rep.cells[rep.index(i, j)];
            if (!c) continue;
            out += detail::range_label(g.T_edges[j], g.T_edges[j + 1], 1.0) + ",";
            out += detail::format_full(0.5 * (g.p_edges[i] + g.p_edges[i + 1]) / 1e6) + ",";
            out += detail::format_full(report_field_value(*c, field)) + "\n";
        }
    return out;
}

/// A FitReport whose parameter cells come from the embedded published tables
/// (errors unavailable); used for curve emission without input data.
inline FitReport report_from_embedded_tables() {
    FitReport rep;
    rep.grid = WindowGrid::standard();
    rep.cells.resize(ParamTable::kRows * ParamTable::kCols);
    rep.degenerate_reasons.resize(rep.cells.size());
    for (std::size_t i = 0; i < ParamTable::kRows; ++i)
        for (std::size_t j = 0; j < ParamTable::kCols; ++j) {
            FitResult r{};
            r.params = ParamTable::cell(i, j);
            r.eps_p = 0.0;
            r.eps_T = 0.0;
            r.n_points = 0;
            r.gamma_gt_one = r.positive_pressure = r.positive_temperature = true;
            rep.cells[rep.index(i, j)] = r;
        }
    return rep;
}

/// JSON export of one published table:
/// {parameter, p_ranges_MPa, T_ranges_K, values[11][13]} in published scalings.
inline nlohmann::json export_table_json(ParamTable::Parameter which) {
    nlohmann::json j;
    switch (which) {
        case ParamTable::Parameter::Gamma: j["parameter"] = "gamma"; break;
        case ParamTable::Parameter::MinusQ: j["parameter"] = "minus_q_x1e-6"; break;
        case ParamTable::Parameter::PInf: j["parameter"] = "p_inf_x1e-9"; break;
        default: j["parameter"] = "c_v_x1e-4"; break;
    }
    for (std::size_t i = 0; i < ParamTable::kRows; ++i)
        j["p_ranges_MPa"].push_back(ParamTable::range_label_p(i));
    for (std::size_t t = 0; t < ParamTable::kCols; ++t)
        j["T_ranges_K"].push_back(ParamTable::range_label_T(t));
    auto& vals = j["values"];
    for (std::size_t i = 0; i < ParamTable::kRows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t t = 0; t < ParamTable::kCols; ++t)
            row.push_back(ParamTable::scaled_value(which, i, t));
        vals.push_back(row);
    }
    return j;
}

} // namespace sgfit

#endif // SGFIT_REPORT_HPP
