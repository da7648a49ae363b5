// sgfit: stiffened-gas equation-of-state fitting and lookup tool.
//
// Subcommands: fit, curves, lookup, eval, synth, export-tables.
// Exit codes: 0 success, 1 input/IO error, 2 completed with invalid fits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgfit/data_ingest.hpp"
#include "sgfit/eos.hpp"
#include "sgfit/fitting.hpp"
#include "sgfit/param_tables.hpp"
#include "sgfit/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInvalidFits = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sgfit::ParseError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << content;
}

std::vector<double> parse_edges(const std::string& spec, double scale) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stod(tok) * scale);
    return out;
}

// "lo:hi" or "lo:hi:n" (n evenly spaced values, default 2 endpoints).
struct RangeSpec {
    double lo = 0, hi = 0;
    std::size_t n = 2;
};

RangeSpec parse_range(const std::string& spec) {
    RangeSpec r;
    std::stringstream ss(spec);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument("range must be lo:hi or lo:hi:n, got '" + spec + "'");
    r.lo = std::stod(parts[0]);
    r.hi = std::stod(parts[1]);
    if (parts.size() == 3) r.n = std::stoul(parts[2]);
    return r;
}

std::string params_json(const sgfit::SgParams& sg) {
    json j;
    j["si"] = {{"gamma", sg.gamma}, {"q_J_per_kg", sg.q}, {"p_inf_Pa", sg.p_inf},
               {"c_v_J_per_kgK", sg.c_v}};
    j["scaled"] = {{"gamma", sg.gamma}, {"minus_q_x1e-6", -sg.q * 1e-6},
                   {"p_inf_x1e-9", sg.p_inf * 1e-9}, {"c_v_x1e-4", sg.c_v * 1e-4}};
    return j.dump(2) + "\n";
}

void print_params_text(std::ostream& os, const sgfit::SgParams& sg) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "gamma = %.6g\nq     = %.6g J/kg   (-q x 1e-6 = %.5g)\n"
                  "p_inf = %.6g Pa     (p_inf x 1e-9 = %.5g)\n"
                  "c_v   = %.6g J/(kg K)  (c_v x 1e-4 = %.5g)\n",
                  sg.gamma, sg.q, -sg.q * 1e-6, sg.p_inf, sg.p_inf * 1e-9, sg.c_v,
                  sg.c_v * 1e-4);
    os << buf;
}

struct GlobalOpts {
    std::string format = "csv";
    std::string out;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
};

std::string table_ext(const std::string& format) {
    if (format == "json") return ".json";
    if (format == "markdown") return ".md";
    return ".csv";
}

void write_report_tables(const sgfit::FitReport& rep, const fs::path& dir,
                         const std::string& format) {
    using sgfit::ReportField;
    const std::pair<ReportField, const char*> tables[] = {
        {ReportField::Gamma, "gamma"},        {ReportField::MinusQScaled, "q"},
        {ReportField::PInfScaled, "p_inf"},   {ReportField::CvScaled, "c_v"},
        {ReportField::EpsP, "eps_p"},         {ReportField::EpsT, "eps_T"},
    };
    for (const auto& [field, name] : tables) {
        std::string content;
        if (format == "json")
            content = sgfit::report_table_json(rep, field).dump(2) + "\n";
        else if (format == "markdown")
            content = sgfit::report_table_markdown(rep, field);
        else
            content = sgfit::report_table_csv(rep, field);
        write_file(dir / (std::string(name) + table_ext(format)), content);
    }
    write_file(dir / "diagnostics.csv", sgfit::report_diagnostics_csv(rep));
}

int cmd_fit(const GlobalOpts& g, const std::string& input, const std::string& p_edges_spec,
            const std::string& T_edges_spec) {
    sgfit::Dataset ds = sgfit::parse_isobaric_file(read_file(input), {}, input);

    sgfit::WindowGrid grid = sgfit::WindowGrid::standard();
    if (!p_edges_spec.empty()) grid.p_edges = parse_edges(p_edges_spec, 1e6);
    if (!T_edges_spec.empty()) grid.T_edges = parse_edges(T_edges_spec, 1.0);
    grid.validate();

    const sgfit::FitReport rep = sgfit::run_fit(ds, grid, g.jobs);
    const fs::path dir = g.out.empty() ? fs::path("sgfit_report") : fs::path(g.out);
    write_report_tables(rep, dir, g.format);
    std::cout << "report written to " << dir.string() << "\n";

    if (rep.any_invalid() || rep.any_degenerate()) {
        std::cerr << "warning: some windows are degenerate or failed validity flags "
                     "(see diagnostics.csv)\n";
        return kExitInvalidFits;
    }
    return kExitOk;
}

int cmd_curves(const GlobalOpts& g, const std::string& input, bool from_tables,
               bool emit_script) {
    sgfit::FitReport rep;
    if (from_tables) {
        rep = sgfit::report_from_embedded_tables();
    } else {
        if (input.empty())
            throw sgfit::ParseError("curves: need --input data or --from-tables");
        sgfit::Dataset ds = sgfit::parse_isobaric_file(read_file(input), {}, input);
        rep = sgfit::run_fit(ds, sgfit::WindowGrid::standard(), g.jobs);
    }
    const fs::path dir = g.out.empty() ? fs::path("sgfit_curves") : fs::path(g.out);
    using sgfit::ReportField;
    write_file(dir / "gamma_vs_T.csv", sgfit::curves_vs_temperature_csv(rep, ReportField::Gamma));
    write_file(dir / "q_vs_T.csv", sgfit::curves_vs_temperature_csv(rep, ReportField::MinusQScaled));
    write_file(dir / "p_inf_vs_T.csv", sgfit::curves_vs_temperature_csv(rep, ReportField::PInfScaled));
    write_file(dir / "c_v_vs_T.csv", sgfit::curves_vs_temperature_csv(rep, ReportField::CvScaled));
    if (!from_tables) {
        write_file(dir / "eps_p_vs_p.csv", sgfit::curves_vs_pressure_csv(rep, ReportField::EpsP));
        write_file(dir / "eps_T_vs_p.csv", sgfit::curves_vs_pressure_csv(rep, ReportField::EpsT));
    }
    if (emit_script) {
        std::string script =
            "#!/usr/bin/env python3\n"
            "# Plot the curve CSVs emitted alongside this script.\n"
            "import csv, sys, collections\n"
            "import matplotlib.pyplot as plt\n"
            "from pathlib import Path\n"
            "here = Path(__file__).parent\n"
            "for name in ['gamma_vs_T', 'q_vs_T', 'p_inf_vs_T', 'c_v_vs_T',\n"
            "             'eps_p_vs_p', 'eps_T_vs_p']:\n"
            "    f = here / (name + '.csv')\n"
            "    if not f.exists():\n"
            "        continue\n"
            "    series = collections.defaultdict(list)\n"
            "    with open(f) as fh:\n"
            "        for row in csv.DictReader(fh):\n"
            "            keys = list(row)\n"
            "            series[row[keys[0]]].append((float(row[keys[1]]), float(row[keys[2]])))\n"
            "    plt.figure()\n"
            "    for label, pts in series.items():\n"
            "        pts.sort()\n"
            "        plt.plot([x for x, _ in pts], [y for _, y in pts], label=label)\n"
            "    plt.legend(fontsize=6)\n"
            "    plt.title(name)\n"
            "    plt.savefig(here / (name + '.png'), dpi=150)\n";
        write_file(dir / "plot_curves.py", script);
    }
    std::cout << "curves written to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_lookup(const GlobalOpts& g, std::optional<double> p, std::optional<double> T,
               const std::string& p_range, const std::string& T_range,
               const std::string& scheme) {
    sgfit::SgParams sg{};
    if (!p_range.empty() || !T_range.empty()) {
        if (p_range.empty() || T_range.empty())
            throw sgfit::TableRangeError("lookup: provide both --p-range and --T-range");
        const RangeSpec pr = parse_range(p_range);
        const RangeSpec tr = parse_range(T_range);
        const auto s = scheme == "uniform" ? sgfit::AveragingScheme::Uniform
                                           : sgfit::AveragingScheme::AreaWeighted;
        sg = sgfit::ParamTable::lookup_range(pr.lo, pr.hi, tr.lo, tr.hi, s);
    } else {
        if (!p || !T) throw sgfit::TableRangeError("lookup: provide --p and --T");
        sg = sgfit::ParamTable::lookup(*p, *T);
    }
    if (g.format == "json")
        std::cout << params_json(sg);
    else
        print_params_text(std::cout, sg);
    return kExitOk;
}

int cmd_eval(const GlobalOpts& g, const sgfit::SgParams& sg, std::optional<double> rho,
             std::optional<double> e, std::optional<double> p, std::optional<double> T) {
    sg.validate();
    double rho_v, e_v;
    if (rho && e) {
        rho_v = *rho;
        e_v = *e;
    } else if (p && T) {
        rho_v = sgfit::density_from_pT(sg, *p, *T);
        e_v = sgfit::internal_energy_from_rhoT(sg, rho_v, *T);
    } else {
        throw sgfit::DomainError("eval: provide a state as --rho/--e or --p/--T");
    }
    const double p_out = sgfit::pressure(sg, rho_v, e_v);
    const double T_out = sgfit::temperature(sg, rho_v, e_v);
    const double c2 = sgfit::sound_speed_sq(sg, rho_v, p_out);
    json j;
    j["rho_kg_per_m3"] = rho_v;
    j["e_J_per_kg"] = e_v;
    j["p_Pa"] = p_out;
    j["T_K"] = T_out;
    j["c2_m2_per_s2"] = c2;
    j["c_m_per_s"] = std::sqrt(c2);
    j["adiabatic_gamma"] = sgfit::adiabatic_gamma(sg, p_out);
    j["gruneisen"] = sgfit::gruneisen(sg);
    j["fundamental_derivative"] = sgfit::fundamental_derivative(sg);
    if (g.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [key, val] : j.items()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%-24s %.9g\n", key.c_str(), val.get<double>());
            std::cout << buf;
        }
    }
    return kExitOk;
}

int cmd_synth(const GlobalOpts& g, const sgfit::SgParams& sg, const std::string& p_range,
              const std::string& T_range, double noise) {
    sg.validate();
    RangeSpec pr{25e6, 300e6, 56};
    RangeSpec tr{300.0, 625.0, 326};
    if (!p_range.empty()) {
        pr = parse_range(p_range);
    }
    if (!T_range.empty()) {
        tr = parse_range(T_range);
    }
    const auto p_list = sgfit::linspace(pr.lo, pr.hi, pr.n);
    const auto T_list = sgfit::linspace(tr.lo, tr.hi, tr.n);
    const sgfit::Dataset ds = sgfit::synthesize(sg, p_list, T_list, noise, g.seed);
    const std::string csv = sgfit::serialize_csv(ds);
    if (g.out.empty())
        std::cout << csv;
    else
        write_file(g.out, csv);
    return kExitOk;
}

int cmd_export_tables(const GlobalOpts& g, const std::string& which) {
    using P = sgfit::ParamTable::Parameter;
    std::vector<std::pair<P, std::string>> wanted;
    const std::vector<std::pair<P, std::string>> all = {
        {P::Gamma, "gamma"}, {P::MinusQ, "q"}, {P::PInf, "p_inf"}, {P::Cv, "c_v"}};
    for (const auto& [param, name] : all)
        if (which == "all" || which == name) wanted.push_back({param, name});
    if (wanted.empty())
        throw sgfit::DomainError("export-tables: unknown parameter '" + which +
                                 "' (gamma|q|p_inf|c_v|all)");

    for (const auto& [param, name] : wanted) {
        std::string content;
        if (g.format == "json")
            content = sgfit::export_table_json(param).dump(2) + "\n";
        else if (g.format == "markdown")
            content = sgfit::export_table_markdown(param);
        else
            content = sgfit::export_table_csv(param);
        if (g.out.empty()) {
            std::cout << content;
        } else {
            fs::path dir(g.out);
            write_file(dir / (name + table_ext(g.format)), content);
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stiffened-gas equation-of-state fitting and table lookup for liquid water"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--format", g.format, "Output format: csv|json|markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--jobs", g.jobs, "Parallel window fits")->capture_default_str();
    app.add_option("--seed", g.seed, "RNG seed for synthetic data")->capture_default_str();

    // fit
    auto* fit = app.add_subcommand("fit", "Fit windowed stiffened-gas parameters from a data file");
    std::string fit_input, fit_p_edges, fit_T_edges;
    fit->add_option("--input", fit_input, "Isobaric data file")->required();
    fit->add_option("--p-edges", fit_p_edges, "Comma-separated pressure window edges, MPa");
    fit->add_option("--T-edges", fit_T_edges, "Comma-separated temperature window edges, K");

    // curves
    auto* curves = app.add_subcommand("curves", "Emit parameter and error curve CSVs");
    std::string curves_input;
    bool curves_from_tables = false, curves_script = false;
    curves->add_option("--input", curves_input, "Isobaric data file (fit first)");
    curves->add_flag("--from-tables", curves_from_tables, "Use the embedded published tables");
    curves->add_flag("--script", curves_script, "Also emit a plotting script");

    // lookup
    auto* lookup = app.add_subcommand("lookup", "Look up tabulated parameters at (p, T)");
    std::optional<double> lk_p, lk_T;
    std::string lk_p_range, lk_T_range, lk_scheme = "area-weighted";
    lookup->add_option("--p", lk_p, "Pressure, Pa");
    lookup->add_option("--T", lk_T, "Temperature, K");
    lookup->add_option("--p-range", lk_p_range, "Pressure range lo:hi, Pa");
    lookup->add_option("--T-range", lk_T_range, "Temperature range lo:hi, K");
    lookup->add_option("--scheme", lk_scheme, "Averaging scheme: area-weighted|uniform")
        ->check(CLI::IsMember({"area-weighted", "uniform"}));

    // shared parameter flags for eval/synth
    sgfit::SgParams ev_sg{1.4, 0.0, 0.0, 717.0};
    auto add_param_opts = [&](CLI::App* cmd) {
        cmd->add_option("--gamma", ev_sg.gamma, "gamma (> 1)");
        cmd->add_option("--q", ev_sg.q, "q, J/kg");
        cmd->add_option("--p-inf", ev_sg.p_inf, "p_inf, Pa");
        cmd->add_option("--c-v", ev_sg.c_v, "c_v, J/(kg K)");
    };

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate the equation of state at a state point");
    add_param_opts(eval);
    bool eval_from_table = false;
    std::optional<double> ev_rho, ev_e, ev_p, ev_T;
    eval->add_flag("--table", eval_from_table, "Take parameters from the tables at (--p, --T)");
    eval->add_option("--rho", ev_rho, "Density, kg/m^3");
    eval->add_option("--e", ev_e, "Internal energy, J/kg");
    eval->add_option("--p", ev_p, "Pressure, Pa");
    eval->add_option("--T", ev_T, "Temperature, K");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset in canonical CSV");
    add_param_opts(synth);
    std::string sy_p_range, sy_T_range;
    double sy_noise = 0.0;
    synth->add_option("--p-range", sy_p_range, "Pressure grid lo:hi:n, Pa (default 25-300 MPa, 5 MPa steps)");
    synth->add_option("--T-range", sy_T_range, "Temperature grid lo:hi:n, K (default 300-625 K, 1 K steps)");
    synth->add_option("--noise", sy_noise, "Relative multiplicative noise amplitude");

    // export-tables
    auto* exp = app.add_subcommand("export-tables", "Emit the embedded published tables");
    std::string exp_which = "all";
    exp->add_option("--param", exp_which, "gamma|q|p_inf|c_v|all")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(g, fit_input, fit_p_edges, fit_T_edges);
        if (curves->parsed()) return cmd_curves(g, curves_input, curves_from_tables, curves_script);
        if (lookup->parsed()) return cmd_lookup(g, lk_p, lk_T, lk_p_range, lk_T_range, lk_scheme);
        if (eval->parsed()) {
            if (eval_from_table) {
                if (!ev_p || !ev_T)
                    throw sgfit::TableRangeError("eval --table requires --p and --T");
                ev_sg = sgfit::ParamTable::lookup(*ev_p, *ev_T);
            }
            return cmd_eval(g, ev_sg, ev_rho, ev_e, ev_p, ev_T);
        }
        if (synth->parsed()) return cmd_synth(g, ev_sg, sy_p_range, sy_T_range, sy_noise);
        if (exp->parsed()) return cmd_export_tables(g, exp_which);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
