// Command-line front end: tabulates the effective potential and its Fourier
// transform, runs transmission scans with resonance comparison, reproduces the
// Born cross-section figure, and validates the exact interior solution.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage/validation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wormhole/born.hpp"
#include "wormhole/common.hpp"
#include "wormhole/geometry.hpp"
#include "wormhole/heun.hpp"
#include "wormhole/io.hpp"
#include "wormhole/potential.hpp"
#include "wormhole/transmission.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Range {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    bool log = false;

    std::vector<double> points() const {
        std::vector<double> v;
        v.reserve(count);
        if (count == 1) {
            v.push_back(start);
            return v;
        }
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / (count - 1);
            v.push_back(log ? start * std::pow(stop / start, t)
                            : start + (stop - start) * t);
        }
        return v;
    }
};

// "start:stop:count", inclusive endpoints
Range parse_range(const std::string& text, const char* flag, bool log_spacing) {
    Range r;
    r.log = log_spacing;
    std::istringstream in(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3)
        throw std::domain_error(std::string(flag) + ": expected start:stop:count, got '" +
                                text + "'");
    try {
        std::size_t used = 0;
        r.start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        r.stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        r.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    } catch (const std::exception&) {
        throw std::domain_error(std::string(flag) + ": malformed range '" + text + "'");
    }
    if (r.count < 1)
        throw std::domain_error(std::string(flag) + ": count must be >= 1");
    if (!std::isfinite(r.start) || !std::isfinite(r.stop))
        throw std::domain_error(std::string(flag) + ": non-finite endpoint");
    if (r.count > 1 && !(r.stop > r.start))
        throw std::domain_error(std::string(flag) + ": stop must exceed start");
    if (log_spacing && !(r.start > 0.0))
        throw std::domain_error(std::string(flag) + ": log spacing needs start > 0");
    return r;
}

// documented override: WORMHOLE_DEFAULT_TOL (positive double); flags win
double default_tolerance() {
    const char* env = std::getenv("WORMHOLE_DEFAULT_TOL");
    if (!env) return 1e-10;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(
            "WORMHOLE_DEFAULT_TOL must be a positive finite number, got '" +
            std::string(env) + "'");
    return v;
}

struct OutputTarget {
    std::string path;    // empty = stdout
    std::string format;  // "csv" | "json"
    std::ofstream file;

    std::ostream& open() {
        if (path.empty()) return std::cout;
        file.open(path);
        if (!file)
            throw std::domain_error("output: cannot open '" + path + "' for writing");
        return file;
    }
};

void emit(OutputTarget& out, const wormhole::io::OutputMeta& meta,
          const std::vector<wormhole::io::Table>& tables) {
    std::ostream& os = out.path.empty() ? std::cout : out.file;
    if (out.format == "json")
        wormhole::io::write_json(os, meta, tables);
    else
        wormhole::io::write_csv(os, meta, tables);
    os.flush();
    if (!os) throw wormhole::NumericalError("output: write failed", 0.0, 0.0);
}

std::string fmt(double v) { return wormhole::io::format_double(v); }

// ---------------------------------------------------------------------------

struct PotentialCmd {
    double b0 = 1.0;
    int L = 0;
    std::string r_range, q_range;
    bool log_spacing = false;
    bool check_ft = false;
    double ft_tol = 0.0;  // 0 -> default tolerance
    OutputTarget out;

    int run() {
        using namespace wormhole;
        WormholeGeometry geom(b0);
        if (L < 0) throw std::domain_error("--L: must be non-negative");
        if (r_range.empty() == q_range.empty())
            throw std::domain_error("potential: give exactly one of --r-range/--q-range");
        const double tol = ft_tol > 0.0 ? ft_tol : default_tolerance();

        io::OutputMeta meta{"wormhole potential",
                            {{"b0", fmt(b0)},
                             {"L", std::to_string(L)},
                             {"spacing", log_spacing ? "log" : "linear"},
                             {"check_ft", check_ft ? "true" : "false"},
                             {"ft_tol", fmt(tol)}}};
        io::Table table;
        if (!r_range.empty()) {
            meta.config.emplace_back("r_range", r_range);
            table.name = "effective_potential";
            table.columns = {"r", "v_eff"};
            for (double r : parse_range(r_range, "--r-range", log_spacing).points())
                table.rows.push_back({r, v_eff(r, geom, L)});
        } else {
            meta.config.emplace_back("q_range", q_range);
            table.name = "fourier_transform";
            table.columns = {"q", "v_closed"};
            if (check_ft) {
                table.columns.push_back("v_numeric");
                table.columns.push_back("ft_rel_err");
            }
            for (double q : parse_range(q_range, "--q-range", log_spacing).points()) {
                const double closed = v_fourier_closed(q, geom, L);
                if (check_ft) {
                    const auto num = v_fourier_numeric(q, geom, L, tol);
                    table.rows.push_back(
                        {q, closed, num.value, std::fabs(num.value - closed) / closed});
                } else {
                    table.rows.push_back({q, closed});
                }
            }
        }
        out.open();
        emit(out, meta, {table});
        return kExitOk;
    }
};

struct TransmitCmd {
    double b0 = 1.0;
    int L = 0;
    bool experimental_L = false;
    std::string k_range;
    double k_single = 0.0;
    bool log_spacing = false;
    int resonances = 0;
    double rdom = 0.0;
    long steps = 0;
    double unitarity_threshold = 1e-8;
    unsigned threads = 0;
    OutputTarget out;

    int run() {
        using namespace wormhole;
        WormholeGeometry geom(b0);
        if (L < 0) throw std::domain_error("--L: must be non-negative");
        if (L >= 1 && !experimental_L)
            throw std::domain_error(
                "transmit: L >= 1 is gated behind --experimental-L (plane-wave "
                "asymptotics are not validated against the 1/r^2 tail)");
        if (k_range.empty() && !(k_single > 0.0))
            throw std::domain_error("transmit: give --k-range or a positive --k");
        if (!(unitarity_threshold > 0.0))
            throw std::domain_error("--unitarity-threshold: must be > 0");

        std::vector<double> grid;
        if (!k_range.empty())
            grid = parse_range(k_range, "--k-range", log_spacing).points();
        else
            grid.push_back(k_single);

        SolverOptions opts;
        opts.domain_halfwidth = rdom;
        opts.steps = steps;
        opts.unitarity_threshold = unitarity_threshold;
        opts.allow_experimental_L = experimental_L;

        auto scan = transmission_scan(geom, L, grid, opts, threads);

        io::OutputMeta meta{"wormhole transmit",
                            {{"b0", fmt(b0)},
                             {"L", std::to_string(L)},
                             {"k_range", k_range.empty() ? fmt(k_single) : k_range},
                             {"spacing", log_spacing ? "log" : "linear"},
                             {"unitarity_threshold", fmt(unitarity_threshold)},
                             {"resonances", std::to_string(resonances)}}};

        io::Table table;
        table.name = "transmission";
        table.columns = {"k", "L", "T", "R", "unitarity_defect", "domain_halfwidth",
                         "status"};
        for (std::size_t i = 0; i < scan.points.size(); ++i) {
            const auto& p = scan.points[i];
            table.rows.push_back({p.k, static_cast<long long>(p.L), p.T, p.R,
                                  p.unitarity_defect, p.domain_halfwidth,
                                  scan.point_errors[i].empty()
                                      ? std::string("ok")
                                      : std::string("failed")});
        }

        std::vector<io::Table> tables{table};
        if (resonances > 0) {
            io::Table rt;
            rt.name = "resonance_predictions";
            rt.columns = {"n", "lambda", "k_predicted", "phase_over_pi",
                          "validity_ratio", "validity_warning", "nearest_peak_k",
                          "nearest_peak_T", "peak_offset"};
            for (const auto& e : resonance_wavelengths(geom, resonances)) {
                auto rep = wkb_phase(e.k, geom);
                // nearest detected scan peak, if any
                std::string pk = "none", pT = "none", off = "none";
                double best = HUGE_VAL;
                for (const auto& peak : scan.peaks) {
                    if (std::fabs(peak.k - e.k) < best) {
                        best = std::fabs(peak.k - e.k);
                        pk = fmt(peak.k);
                        pT = fmt(peak.T);
                        off = fmt(peak.k - e.k);
                    }
                }
                rt.rows.push_back({static_cast<long long>(e.n), e.lambda, e.k,
                                   e.accumulated_phase / M_PI, rep.validity_ratio,
                                   rep.validity_warning, pk, pT, off});
            }
            tables.push_back(rt);
        }
        out.open();
        emit(out, meta, tables);

        const double frac_ok =
            scan.points.empty()
                ? 1.0
                : 1.0 - static_cast<double>(scan.failed_count) / scan.points.size();
        return frac_ok >= 0.99 ? kExitOk : kExitNumerical;
    }
};

struct BornCmd {
    double b0 = 1.0;
    int L = 0;
    double k = -1.0;
    std::string x_range;
    bool log_spacing = false;
    bool figure2 = false;
    bool dcs = false;
    bool eq15_roots = false;
    bool as_printed = false;
    int theta_count = 181;
    double tol = 0.0;
    unsigned threads = 0;
    OutputTarget out;

    int run() {
        using namespace wormhole;
        WormholeGeometry geom(b0);
        if (L < 0) throw std::domain_error("--L: must be non-negative");
        const int modes = int(figure2) + int(dcs) + int(eq15_roots);
        if (modes != 1)
            throw std::domain_error(
                "born: give exactly one of --figure2 / --dcs / --eq15-roots");
        const double qtol = tol > 0.0 ? tol : default_tolerance();
        const auto variant =
            as_printed ? ClosedFormVariant::as_printed : ClosedFormVariant::corrected;

        io::OutputMeta meta{"wormhole born",
                            {{"b0", fmt(b0)},
                             {"L", std::to_string(L)},
                             {"tol", fmt(qtol)},
                             {"closed_form",
                              as_printed ? "as_printed" : "corrected"}}};

        if (figure2) {
            if (x_range.empty())
                throw std::domain_error("born --figure2: needs --x-range");
            meta.config.emplace_back("x_range", x_range);
            auto rows = figure2_data(geom, parse_range(x_range, "--x-range",
                                                       log_spacing).points(),
                                     qtol, variant, threads);
            io::Table t;
            t.name = "figure2";
            t.columns = {"x", "sigma_quad", "sigma_quad_err", "sigma_closed",
                         "rel_discrepancy", "status"};
            bool any_fail = false;
            for (const auto& r : rows) {
                any_fail |= !r.ok;
                t.rows.push_back({r.x, r.sigma_quad, r.sigma_quad_err, r.sigma_closed,
                                  r.rel_discrepancy,
                                  r.ok ? std::string("ok") : std::string("failed")});
            }
            out.open();
            emit(out, meta, {t});
            return any_fail ? kExitNumerical : kExitOk;
        }

        if (dcs) {
            if (k < 0.0) throw std::domain_error("born --dcs: needs --k >= 0");
            if (theta_count < 2) throw std::domain_error("--theta-count: must be >= 2");
            meta.config.emplace_back("k", fmt(k));
            meta.config.emplace_back("theta_count", std::to_string(theta_count));
            ScatterContext ctx(k, L);
            io::Table t;
            t.name = "differential_cross_section";
            t.columns = {"theta", "amplitude", "dcs"};
            for (int i = 0; i < theta_count; ++i) {
                const double theta = M_PI * static_cast<double>(i) / (theta_count - 1);
                const auto bp = born_point(theta, ctx, geom);
                t.rows.push_back({theta, bp.amplitude, bp.dcs});
            }
            out.open();
            emit(out, meta, {t});
            return kExitOk;
        }

        // eq15 root report
        auto scan = eq15_root_scan(geom);
        io::Table t;
        t.name = "eq15_root_scan";
        t.columns = {"result", "detail"};
        if (scan.roots.empty()) {
            t.rows.push_back({std::string("no roots found on (0, 50]"),
                              std::string("minimum " + fmt(scan.min_value) + " at x = " +
                                          fmt(scan.min_location))});
        } else {
            for (double r : scan.roots)
                t.rows.push_back({std::string("root"), fmt(r)});
        }
        out.open();
        emit(out, meta, {t});
        return kExitOk;
    }
};

struct HeunCmd {
    double b0 = 1.0;
    double kb0 = -1.0;  // negative = full default grid
    int L = -1;         // negative = all of {0, 1, 2}
    double perturb_eta = 0.0;
    double threshold = 1e-8;
    double tol = 1e-12;
    int grid_points = 181;
    OutputTarget out;

    int run() {
        using namespace wormhole;
        WormholeGeometry geom(b0);
        if (!(threshold > 0.0)) throw std::domain_error("--threshold: must be > 0");
        if (grid_points < 2) throw std::domain_error("--grid-points: must be >= 2");
        if (kb0 >= 0.0 && !std::isfinite(kb0))
            throw std::domain_error("--kb0: must be finite");

        std::vector<double> kb_values =
            kb0 >= 0.0 ? std::vector<double>{kb0} : std::vector<double>{0.0, 0.5, 1.0, 2.0};
        std::vector<int> L_values = L >= 0 ? std::vector<int>{L}
                                           : std::vector<int>{0, 1, 2};

        io::OutputMeta meta{"wormhole heun",
                            {{"b0", fmt(b0)},
                             {"kb0", kb0 >= 0.0 ? fmt(kb0) : "grid{0,0.5,1,2}"},
                             {"L", L >= 0 ? std::to_string(L) : "grid{0,1,2}"},
                             {"perturb_eta", fmt(perturb_eta)},
                             {"threshold", fmt(threshold)},
                             {"grid_points", std::to_string(grid_points)}}};

        io::Table t;
        t.name = "ode_residuals";
        t.columns = {"k", "L", "branch", "max_residual", "truncation_order"};
        const auto grid = default_residual_grid(geom, grid_points);
        double worst = 0.0;
        std::string worst_case;
        for (double kb : kb_values) {
            for (int l : L_values) {
                ScatterContext ctx(kb / geom.b0, l);
                for (bool even : {true, false}) {
                    auto sol = make_interior_solution(geom, ctx, even ? 1.0 : 0.0,
                                                      even ? 0.0 : 1.0, tol, perturb_eta);
                    auto rep = ode_residual(sol, grid);
                    const auto& series = even ? sol.series_even : sol.series_odd;
                    t.rows.push_back({ctx.k, static_cast<long long>(l),
                                      std::string(even ? "even" : "odd"),
                                      rep.max_residual,
                                      static_cast<long long>(series.truncation_order())});
                    if (rep.max_residual > worst) {
                        worst = rep.max_residual;
                        worst_case = "k=" + fmt(ctx.k) + " L=" + std::to_string(l) +
                                     " branch=" + (even ? "even" : "odd");
                    }
                }
            }
        }
        out.open();
        emit(out, meta, {t});
        if (worst > threshold) {
            std::cerr << "heun: residual " << worst << " above threshold " << threshold
                      << " (" << worst_case << ")\n";
            return kExitNumerical;
        }
        return kExitOk;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Quantum scattering on the static wormhole geometry: effective 1D "
        "potential, exact transmission spectra, Born cross-sections, and the "
        "confluent-Heun interior solution (natural units hbar = 2 m0 = 1)."};
    app.set_version_flag("--version", wormhole::kVersion);
    app.require_subcommand(1);

    PotentialCmd pot;
    auto* cp = app.add_subcommand("potential",
                                  "Tabulate v_eff(r) or its Fourier transform V(q)");
    cp->add_option("--b0", pot.b0, "throat radius")->capture_default_str();
    cp->add_option("--L", pot.L, "angular momentum quantum number")
        ->capture_default_str();
    cp->add_option("--r-range", pot.r_range, "r grid start:stop:count");
    cp->add_option("--q-range", pot.q_range, "q grid start:stop:count");
    cp->add_flag("--log", pot.log_spacing, "log-spaced grid");
    cp->add_flag("--check-ft", pot.check_ft,
                 "add the quadrature FT oracle and its relative error");
    cp->add_option("--ft-tol", pot.ft_tol, "FT oracle tolerance (default env/1e-10)");
    cp->add_option("-o,--output", pot.out.path, "output file (default stdout)");
    cp->add_option("--format", pot.out.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("csv");

    TransmitCmd tr;
    auto* ct = app.add_subcommand("transmit",
                                  "Exact transmission/reflection across a k grid");
    ct->add_option("--b0", tr.b0, "throat radius")->capture_default_str();
    ct->add_option("--L", tr.L, "angular momentum (L >= 1 needs --experimental-L)")
        ->capture_default_str();
    ct->add_flag("--experimental-L", tr.experimental_L,
                 "allow L >= 1 outside the validated surface");
    ct->add_option("--k-range", tr.k_range, "k grid start:stop:count");
    ct->add_option("--k", tr.k_single, "single wavenumber");
    ct->add_flag("--log", tr.log_spacing, "log-spaced grid");
    ct->add_option("--resonances", tr.resonances,
                   "append predictions lambda = 4 n b0 for n = 1..N");
    ct->add_option("--rdom", tr.rdom, "domain halfwidth (default max(200 b0, 40/k))");
    ct->add_option("--steps", tr.steps, "Numerov intervals (default auto)");
    ct->add_option("--unitarity-threshold", tr.unitarity_threshold, "defect threshold")
        ->capture_default_str();
    ct->add_option("--threads", tr.threads, "worker threads (0 = auto)");
    ct->add_option("-o,--output", tr.out.path, "output file (default stdout)");
    ct->add_option("--format", tr.out.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("csv");

    BornCmd bo;
    auto* cb = app.add_subcommand("born",
                                  "First-Born amplitudes and cross-sections");
    cb->add_option("--b0", bo.b0, "throat radius")->capture_default_str();
    cb->add_option("--L", bo.L, "angular momentum quantum number")
        ->capture_default_str();
    cb->add_option("--k", bo.k, "wavenumber for --dcs");
    cb->add_option("--x-range", bo.x_range, "x = b0*k grid start:stop:count");
    cb->add_flag("--log", bo.log_spacing, "log-spaced grid");
    cb->add_flag("--figure2", bo.figure2, "total cross-section reproduction table");
    cb->add_flag("--dcs", bo.dcs, "differential cross-section table at fixed k");
    cb->add_flag("--eq15-roots", bo.eq15_roots,
                 "scan the L = 0 vanishing condition for roots on (0, 50]");
    cb->add_flag("--as-printed", bo.as_printed,
                 "use the closed form exactly as printed (known typo) instead of "
                 "the corrected coefficient");
    cb->add_option("--theta-count", bo.theta_count, "rows for --dcs")
        ->capture_default_str();
    cb->add_option("--tol", bo.tol, "quadrature tolerance (default env/1e-10)");
    cb->add_option("--threads", bo.threads, "worker threads (0 = auto)");
    cb->add_option("-o,--output", bo.out.path, "output file (default stdout)");
    cb->add_option("--format", bo.out.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("csv");

    HeunCmd he;
    auto* ch = app.add_subcommand("heun",
                                  "Validate the exact interior solution by its ODE "
                                  "residual");
    ch->add_option("--b0", he.b0, "throat radius")->capture_default_str();
    ch->add_option("--kb0", he.kb0, "single k*b0 (default grid {0, 0.5, 1, 2})");
    ch->add_option("--L", he.L, "single L (default grid {0, 1, 2})");
    ch->add_option("--perturb-eta", he.perturb_eta,
                   "shift eta by this amount (negative control)");
    ch->add_option("--threshold", he.threshold, "residual pass threshold")
        ->capture_default_str();
    ch->add_option("--series-tol", he.tol, "series truncation tolerance")
        ->capture_default_str();
    ch->add_option("--grid-points", he.grid_points, "residual grid size")
        ->capture_default_str();
    ch->add_option("-o,--output", he.out.path, "output file (default stdout)");
    ch->add_option("--format", he.out.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cp->parsed()) return pot.run();
        if (ct->parsed()) return tr.run();
        if (cb->parsed()) return bo.run();
        if (ch->parsed()) return he.run();
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const wormhole::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
