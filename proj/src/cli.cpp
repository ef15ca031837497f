#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mslv/io.hpp"
#include "mslv/phase_equilibria.hpp"
#include "mslv/stability.hpp"

namespace mslv {

namespace {

struct CommonOpts {
    std::string gas = "methane";
    bool dimensional = false;
    bool reduced = false;
    std::string format = "csv";
    std::string out;
    std::string plane;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_out = true) {
    cmd->add_option("--gas", o.gas, "built-in gas name or path to a gas JSON file");
    cmd->add_flag("--reduced", o.reduced, "dimensionless output (default)");
    cmd->add_flag("--dimensional", o.dimensional, "output in K, MPa, cm^3/mol");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* out = cmd->add_option("--out", o.out, "output path, '-' for stdout");
    if (needs_out) out->required();
}

struct LoadedGas {
    GasParameters gas;
    EosParams red;  // all solves run in reduced units
};

LoadedGas load(const CommonOpts& o) {
    if (o.reduced && o.dimensional)
        throw ValidationError("--reduced and --dimensional are mutually exclusive");
    LoadedGas lg{load_gas(o.gas), {}};
    for (const auto& w : lg.gas.warnings) std::cerr << "warning: " << w << "\n";
    lg.red = working_set_reduced(lg.gas);
    return lg;
}

// column kinds for unit scaling; everything is computed reduced and scaled
// at the output boundary so both systems come from one code path
double column_factor(const std::string& name, const GasParameters& g,
                     std::string& unit) {
    if (name == "v" || name == "v1" || name == "v2" || name == "v_s"
        || name == "v_l" || name == "v_v") {
        unit = "cm3/mol";
        return g.v_c;
    }
    if (name == "T") {
        unit = "K";
        return g.T_c;
    }
    if (name == "p") {
        unit = "MPa";
        return g.p_c;
    }
    if (name == "phi_vv") {
        unit = "mol2/cm6";
        return 1.0 / (g.v_c * g.v_c);
    }
    unit.clear();
    return 1.0;  // flags, counters, residuals stay as computed
}

void scale_dimensional(CurveSeries& cs, const GasParameters& g) {
    for (std::size_t c = 0; c < cs.columns.size(); ++c) {
        std::string unit;
        const double f = column_factor(cs.columns[c].name, g, unit);
        cs.columns[c].unit = unit;
        if (f != 1.0)
            for (auto& row : cs.rows) row[c] *= f;
    }
}

// log-scale companions: always for volume columns, for p only when the
// column is positive throughout (log of a melting curve that dips negative
// would poison the file with NaNs)
void append_log10(CurveSeries& cs) {
    const std::size_t ncol = cs.columns.size();
    for (std::size_t c = 0; c < ncol; ++c) {
        const std::string& nm = cs.columns[c].name;
        const bool vol = nm == "v" || nm == "v1" || nm == "v2";
        const bool pres = nm == "p";
        if (!vol && !pres) continue;
        bool all_pos = true;
        for (const auto& row : cs.rows)
            if (!(row[c] > 0.0)) {
                all_pos = false;
                break;
            }
        if (!all_pos) continue;
        cs.columns.push_back({"log10_" + nm, ""});
        for (auto& row : cs.rows) row.push_back(std::log10(row[c]));
    }
}

void reorder_for_plane(CurveSeries& cs, const std::string& plane) {
    if (plane.empty()) return;
    static const std::map<std::string, std::pair<std::string, std::string>> lead = {
        {"v1v2", {"v1", "v2"}}, {"vT", {"v", "T"}}, {"vp", {"v", "p"}},
        {"Tp", {"T", "p"}}};
    const auto it = lead.find(plane);
    if (it == lead.end())
        throw ValidationError("unknown plane '" + plane + "'");
    std::vector<std::size_t> order;
    auto push_named = [&](const std::string& nm) {
        for (std::size_t c = 0; c < cs.columns.size(); ++c)
            if (cs.columns[c].name == nm) {
                order.push_back(c);
                return;
            }
        throw ValidationError("plane '" + plane + "' not available for this command");
    };
    push_named(it->second.first);
    push_named(it->second.second);
    for (std::size_t c = 0; c < cs.columns.size(); ++c)
        if (c != order[0] && c != order[1]) order.push_back(c);

    std::vector<CurveSeries::Column> cols;
    for (std::size_t c : order) cols.push_back(cs.columns[c]);
    cs.columns = std::move(cols);
    for (auto& row : cs.rows) {
        std::vector<double> nr;
        nr.reserve(row.size());
        for (std::size_t c : order) nr.push_back(row[c]);
        row = std::move(nr);
    }
}

void emit(CurveSeries& cs, const CommonOpts& o, const GasParameters& gas) {
    cs.metadata["gas"] = gas.name;
    cs.metadata["system"] = o.dimensional ? "dimensional" : "reduced";
    if (o.dimensional) scale_dimensional(cs, gas);
    reorder_for_plane(cs, o.plane);
    append_log10(cs);
    if (o.out == "-") {
        if (o.format == "json")
            write_json(cs, std::cout);
        else
            write_csv(cs, std::cout);
        return;
    }
    if (o.format == "json")
        write_json(cs, o.out);
    else
        write_csv(cs, o.out);
}

Pair parse_pair(const std::string& s) {
    if (s == "sl") return Pair::SolidLiquid;
    if (s == "sv") return Pair::SolidVapor;
    if (s == "lv") return Pair::LiquidVapor;
    throw ValidationError("unknown pair '" + s + "' (expected sl, sv or lv)");
}

// input temperatures/volumes arrive in the selected system; solves run reduced
double t_to_reduced(double t, const CommonOpts& o, const GasParameters& g) {
    return o.dimensional ? t / g.T_c : t;
}
double v_to_reduced(double v, const CommonOpts& o, const GasParameters& g) {
    return o.dimensional ? v / g.v_c : v;
}

void run_isotherm(const CommonOpts& o, double t_in, double v_min_in,
                  double v_max_in, int n) {
    const LoadedGas lg = load(o);
    const EosParams& P = lg.red;
    const double T = t_to_reduced(t_in, o, lg.gas);
    double v_min = v_min_in > 0.0 ? v_to_reduced(v_min_in, o, lg.gas)
                                  : P.b + 1e-3 * (P.d - P.b);
    double v_max = v_max_in > 0.0 ? v_to_reduced(v_max_in, o, lg.gas) : 30.0;
    if (!(v_max > v_min)) throw ValidationError("isotherm: need v_max > v_min");
    if (n < 4) n = 4;

    CurveSeries cs;
    cs.name = "isotherm";
    cs.columns = {{"v", ""}, {"p", ""}, {"phi_vv", ""}, {"applicable", ""}};
    {
        std::ostringstream t_meta;
        t_meta << T;
        cs.metadata["T_r"] = t_meta.str();
    }

    int skipped = 0;
    auto sample = [&](double v) {
        try {
            const PotentialBundle pb = potential_bundle(v, T, P);
            const ApplicabilityReport ar = applicability(v, T, P);
            cs.add_row({v, P.R * T * pb.phi_v, pb.phi_vv,
                        ar.mechanical && ar.caloric ? 1.0 : 0.0});
        } catch (const DomainError&) {
            ++skipped;
        }
    };

    // solid window, linear
    const double s_lo = std::max(v_min, P.b + 1e-3 * (P.d - P.b));
    const double s_hi = std::min(v_max, P.d - 1e-3 * (P.d - P.b));
    const int n_solid = n / 3;
    if (s_hi > s_lo)
        for (int i = 0; i < n_solid; ++i)
            sample(s_lo + (s_hi - s_lo) * double(i) / (n_solid - 1));
    cs.break_segment();
    // fluid window, logarithmic
    const double f_lo = std::max(v_min, P.c + 1e-3 * (P.d - P.b));
    const double f_hi = v_max;
    const int n_fluid = n - n_solid;
    if (f_hi > f_lo)
        for (int i = 0; i < n_fluid; ++i)
            sample(f_lo * std::pow(f_hi / f_lo, double(i) / (n_fluid - 1)));

    if (skipped > 0)
        std::cerr << "warning: skipped " << skipped
                  << " isotherm points outside the model domain\n";
    emit(cs, o, lg.gas);
}

void run_singularity(const CommonOpts& o, double v_min_in, double v_max_in,
                     int n) {
    const LoadedGas lg = load(o);
    const EosParams& P = lg.red;
    const double v_min = v_min_in > 0.0 ? v_to_reduced(v_min_in, o, lg.gas)
                                        : P.b + 1e-3 * (P.d - P.b);
    const double v_max = v_max_in > 0.0 ? v_to_reduced(v_max_in, o, lg.gas) : 30.0;
    if (n < 4) n = 4;

    CurveSeries cs;
    cs.name = "singularity";
    cs.columns = {{"v", ""}, {"T", ""}, {"p", ""}, {"branch", ""}};

    const CurveSeries solid =
        trace_spinodal(Branch::Solid, v_min, v_max, n / 2, P);
    for (const auto& r : solid.rows) cs.add_row({r[0], r[1], r[2], 0.0});
    cs.break_segment();
    const CurveSeries fluid =
        trace_spinodal(Branch::Fluid, v_min, v_max, n - n / 2, P);
    for (const auto& r : fluid.rows) cs.add_row({r[0], r[1], r[2], 1.0});

    cs.metadata["branches"] = "0=solid,1=fluid";
    emit(cs, o, lg.gas);
}

void run_binodal(const CommonOpts& o, const std::string& pair_s, double t_min_in,
                 double t_max_in, int n) {
    const LoadedGas lg = load(o);
    const EosParams& P = lg.red;
    const Pair pair = parse_pair(pair_s);

    double t_min = t_min_in, t_max = t_max_in;
    if (t_min <= 0.0 || t_max <= 0.0) {
        switch (pair) {
            case Pair::LiquidVapor: t_min = 0.52; t_max = 1.0; break;
            case Pair::SolidVapor: t_min = 0.42; t_max = 0.56; break;
            case Pair::SolidLiquid: t_min = 0.51; t_max = 0.62; break;
        }
    } else {
        t_min = t_to_reduced(t_min, o, lg.gas);
        t_max = t_to_reduced(t_max, o, lg.gas);
    }
    if (n < 2) n = 60;

    const BinodalCurve bc = trace_binodal(pair, t_min, t_max, n, P);

    CurveSeries cs;
    cs.name = "binodal";
    cs.columns = {{"T", ""}, {"p", ""}, {"v1", ""}, {"v2", ""}};
    for (const auto& pt : bc.points) cs.add_row({pt.T, pt.p, pt.v1, pt.v2});
    cs.metadata["pair"] = to_string(pair);
    cs.metadata["terminus"] = to_string(bc.terminus);
    std::ostringstream term;
    if (bc.critical)
        term << "v=" << bc.critical->v << " T=" << bc.critical->T
             << " p=" << bc.critical->p;
    if (bc.triple)
        term << "T=" << bc.triple->T << " p=" << bc.triple->p
             << " v_s=" << bc.triple->v_s << " v_l=" << bc.triple->v_l
             << " v_v=" << bc.triple->v_v;
    if (!term.str().empty()) cs.metadata["terminus_at"] = term.str();
    emit(cs, o, lg.gas);
}

void run_critical(const CommonOpts& o) {
    const LoadedGas lg = load(o);
    const CriticalPoint cp = critical_point(lg.red);
    CurveSeries cs;
    cs.name = "critical_point";
    cs.columns = {{"v", ""}, {"T", ""}, {"p", ""}};
    cs.add_row({cp.v, cp.T, cp.p});
    emit(cs, o, lg.gas);
}

void run_triple(const CommonOpts& o) {
    const LoadedGas lg = load(o);
    const TriplePoint tp = triple_point(lg.red);
    CurveSeries cs;
    cs.name = "triple_point";
    cs.columns = {{"T", ""}, {"p", ""}, {"v_s", ""}, {"v_l", ""}, {"v_v", ""}};
    cs.add_row({tp.T, tp.p, tp.v_s, tp.v_l, tp.v_v});
    emit(cs, o, lg.gas);
}

void run_maxwell_check(const CommonOpts& o, double t_in, const std::string& pair_s) {
    const LoadedGas lg = load(o);
    const Pair pair = parse_pair(pair_s);
    const double T = t_to_reduced(t_in, o, lg.gas);
    const EquilibriumPoint pt = equilibrium_at_T(T, pair, lg.red);

    CurveSeries cs;
    cs.name = "maxwell_check";
    cs.columns = {{"T", ""}, {"p", ""}, {"v1", ""}, {"v2", ""},
                  {"res_dphi_v", ""}, {"res_dgamma", ""}};
    std::vector<double> row{pt.T, pt.p, pt.v1, pt.v2, pt.res_dphi_v, pt.res_dgamma};
    if (pair == Pair::LiquidVapor) {
        cs.columns.push_back({"maxwell", ""});
        row.push_back(pt.maxwell);
    }
    cs.add_row(std::move(row));
    cs.metadata["pair"] = to_string(pair);
    cs.metadata["residual_note"] = "residuals are reduced-system values";
    emit(cs, o, lg.gas);
}

void run_manifold(const CommonOpts& o, double v_min_in, double v_max_in,
                  double t_min_in, double t_max_in, int nv, int nt,
                  bool overlay) {
    const LoadedGas lg = load(o);
    const EosParams& P = lg.red;
    const double v_min = v_min_in > 0.0 ? v_to_reduced(v_min_in, o, lg.gas)
                                        : P.b + 1e-3 * (P.d - P.b);
    const double v_max = v_max_in > 0.0 ? v_to_reduced(v_max_in, o, lg.gas) : 3.0;
    const double t_min = t_min_in > 0.0 ? t_to_reduced(t_min_in, o, lg.gas) : 0.3;
    const double t_max = t_max_in > 0.0 ? t_to_reduced(t_max_in, o, lg.gas) : 1.2;
    if (nv < 4) nv = 80;
    if (nt < 2) nt = 40;
    if (!(v_max > v_min) || !(t_max > t_min))
        throw ValidationError("manifold: empty grid requested");

    CurveSeries cs;
    cs.name = "manifold";
    cs.columns = {{"v", ""}, {"T", ""}, {"p", ""}, {"branch", ""},
                  {"applicable", ""}, {"phi_vv", ""}};

    auto sheet = [&](double lo, double hi, int npts, bool log_grid, double tag) {
        if (!(hi > lo)) return;
        for (int i = 0; i < npts; ++i) {
            const double x = double(i) / (npts - 1);
            const double v = log_grid ? lo * std::pow(hi / lo, x) : lo + (hi - lo) * x;
            for (int k = 0; k < nt; ++k) {
                const double T = t_min + (t_max - t_min) * double(k) / (nt - 1);
                const PotentialBundle pb = potential_bundle(v, T, P);
                const ApplicabilityReport ar = applicability(v, T, P);
                cs.add_row({v, T, P.R * T * pb.phi_v, tag,
                            ar.mechanical && ar.caloric ? 1.0 : 0.0, pb.phi_vv});
            }
        }
    };

    const int n_solid = nv / 3;
    sheet(std::max(v_min, P.b + 1e-3 * (P.d - P.b)),
          std::min(v_max, P.d - 1e-3 * (P.d - P.b)), n_solid, false, 0.0);
    cs.break_segment();
    sheet(std::max(v_min, P.c + 1e-3 * (P.d - P.b)), v_max, nv - n_solid, true, 1.0);

    std::string segments = "solid,fluid";
    if (overlay) {
        for (Branch br : {Branch::Solid, Branch::Fluid}) {
            const CurveSeries sp = trace_spinodal(
                br, v_min, std::min(v_max, 1e4), nv, P);
            cs.break_segment();
            for (const auto& r : sp.rows) {
                if (r[1] < t_min || r[1] > t_max) continue;
                cs.add_row({r[0], r[1], r[2], br == Branch::Solid ? 0.0 : 1.0,
                            0.0, 0.0});
            }
            segments += br == Branch::Solid ? ",spinodal_solid" : ",spinodal_fluid";
        }
    }
    cs.metadata["segments"] = segments;
    cs.metadata["branches"] = "0=solid,1=fluid";
    emit(cs, o, lg.gas);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"mslv: solid-liquid-vapor equation of state toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    double t = 0.0, t_min = 0.0, t_max = 0.0;
    double v_min = 0.0, v_max = 0.0;
    // one count per subcommand: default_val writes the bound variable at
    // registration time, so sharing one int would leave every subcommand
    // with whichever default was registered last
    int n_iso = 0, n_sing = 0, n_bin = 0, nv = 0, nt = 0;
    std::string pair = "lv";
    bool overlay = false;

    auto* c_iso = app.add_subcommand("isotherm", "p(v) along one isotherm, both branches");
    add_common(c_iso, o);
    c_iso->add_option("--t", t, "temperature")->required();
    c_iso->add_option("--v-min", v_min);
    c_iso->add_option("--v-max", v_max);
    c_iso->add_option("--n", n_iso, "total sample count")->default_val(400);
    c_iso->add_option("--plane", o.plane);

    auto* c_sing = app.add_subcommand("singularity", "spinodal curves of both branches");
    add_common(c_sing, o);
    c_sing->add_option("--v-min", v_min);
    c_sing->add_option("--v-max", v_max);
    c_sing->add_option("--n", n_sing)->default_val(400);
    c_sing->add_option("--plane", o.plane);

    auto* c_bin = app.add_subcommand("binodal", "coexistence curve of a phase pair");
    add_common(c_bin, o);
    c_bin->add_option("--pair", pair, "sl, sv or lv")->default_val("lv");
    c_bin->add_option("--t-min", t_min);
    c_bin->add_option("--t-max", t_max);
    c_bin->add_option("--n", n_bin)->default_val(60);
    c_bin->add_option("--plane", o.plane);

    auto* c_crit = app.add_subcommand("critical", "critical point");
    add_common(c_crit, o);

    auto* c_trip = app.add_subcommand("triple", "triple point");
    add_common(c_trip, o);

    auto* c_max = app.add_subcommand("maxwell-check", "equilibrium residual report at one temperature");
    add_common(c_max, o);
    c_max->add_option("--t", t)->required();
    c_max->add_option("--pair", pair)->default_val("lv");

    auto* c_man = app.add_subcommand("manifold", "p(v, T) surface samples, both sheets");
    add_common(c_man, o);
    c_man->add_option("--v-min", v_min);
    c_man->add_option("--v-max", v_max);
    c_man->add_option("--t-min", t_min);
    c_man->add_option("--t-max", t_max);
    c_man->add_option("--nv", nv)->default_val(80);
    c_man->add_option("--nt", nt)->default_val(40);
    c_man->add_flag("--overlay", overlay, "append spinodal overlay segments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_iso->parsed()) run_isotherm(o, t, v_min, v_max, n_iso);
        else if (c_sing->parsed()) run_singularity(o, v_min, v_max, n_sing);
        else if (c_bin->parsed()) run_binodal(o, pair, t_min, t_max, n_bin);
        else if (c_crit->parsed()) run_critical(o);
        else if (c_trip->parsed()) run_triple(o);
        else if (c_max->parsed()) run_maxwell_check(o, t, pair);
        else if (c_man->parsed()) run_manifold(o, v_min, v_max, t_min, t_max, nv, nt, overlay);
        return 0;
    } catch (const NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BranchViolationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mslv
