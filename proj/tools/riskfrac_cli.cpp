// riskfrac: command-line front end. Every subcommand writes CSV, either to
// stdout or to files below the output directory.

#include "riskfrac/riskfrac.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace riskfrac;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_method = 3;

struct Settings {
    std::string dist_path;
    std::string out_dir = ".";
    std::string output;
    int precision = 6;
    unsigned workers = 0;
    std::uint64_t cap = 20'000'000;

    std::string method = "auto";
    bool force_enum = false;
    bool force_dp = false;

    std::string M_spec;
    double f = 0.0;
    double f_min = 0.0;
    double f_max = 0.99;
    double f_step = 0.01;
    bool with_approx = false;
    bool per_ell = false;
    bool exact = false;

    double kelly_p = 0.0;
    double kelly_B = 0.0;

    std::size_t steps = 10'000;
    std::size_t runs = 1;
    std::size_t figure_runs = 200;
    std::uint64_t seed = 0;
    double capital = 1000.0;
    std::string prefix;
    std::string fractions = "0.25,0.16";
};

TradeDistribution toss_game() {
    return TradeDistribution::from_exact({-1.0, 2.0}, {Rational(1, 2), Rational(1, 2)});
}

TradeDistribution load_distribution(const Settings& s) {
    return s.dist_path.empty() ? toss_game() : read_distribution(s.dist_path);
}

CoefficientMethod chosen_method(const Settings& s) {
    if (s.force_enum) return CoefficientMethod::enumeration;
    if (s.force_dp) return CoefficientMethod::dp;
    if (s.method == "enumeration") return CoefficientMethod::enumeration;
    if (s.method == "dp") return CoefficientMethod::dp;
    return CoefficientMethod::automatic;
}

CoefficientOptions coefficient_options(const Settings& s) {
    CoefficientOptions o;
    o.cap = s.cap;
    o.workers = s.workers;
    return o;
}

EnumerationOptions enumeration_options(const Settings& s) {
    return EnumerationOptions{.cap = s.cap, .workers = s.workers};
}

// "2..10", "2..100:5", "3" and comma-separated combinations.
std::vector<std::size_t> parse_M_list(const std::string& spec) {
    auto to_size = [&](const std::string& t) -> std::size_t {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(t, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != t.size() || t.empty() || t.front() == '-') throw domain_error("bad horizon '" + t + "' in --M");
        if (v < 1 || v > 100'000) throw domain_error("horizon M must lie in [1, 100000], got " + t);
        return static_cast<std::size_t>(v);
    };
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_size(item));
            continue;
        }
        std::string rest = item.substr(dots + 2);
        std::size_t step = 1;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            step = to_size(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const std::size_t lo = to_size(item.substr(0, dots));
        const std::size_t hi = to_size(rest);
        if (lo > hi) throw domain_error("empty range '" + item + "' in --M");
        for (std::size_t M = lo; M <= hi; M += step) out.push_back(M);
    }
    if (out.empty()) throw domain_error("--M needs at least one horizon");
    return out;
}

std::size_t single_M(const Settings& s) {
    const auto Ms = parse_M_list(s.M_spec);
    if (Ms.size() != 1) throw domain_error("this subcommand takes a single horizon in --M");
    return Ms.front();
}

std::vector<double> f_grid(const Settings& s) {
    if (!(s.f_min >= 0.0 && s.f_min <= s.f_max && s.f_max < 1.0))
        throw domain_error("f-grid needs 0 <= --f-min <= --f-max < 1");
    if (!(s.f_step > 0.0)) throw domain_error("--f-step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((s.f_max - s.f_min) / s.f_step + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(std::min(s.f_min + static_cast<double>(i) * s.f_step, s.f_max));
    return grid;
}

std::vector<double> parse_fraction_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(Fraction(to_double(parse_rational(item))).value());
        } catch (const std::domain_error&) {
            throw domain_error("bad fraction '" + item + "' in --fractions");
        }
    }
    if (out.empty()) throw domain_error("--fractions needs at least one value");
    return out;
}

fs::path in_out_dir(const Settings& s, const fs::path& name) {
    const fs::path p = name.is_absolute() ? name : fs::path(s.out_dir) / name;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw domain_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw domain_error("failed writing '" + path.string() + "'");
}

// Writes the buffered text to --output (below the output directory) or to
// stdout.
void emit(const Settings& s, const std::string& text) {
    if (s.output.empty()) {
        std::cout << text;
        return;
    }
    write_file(in_out_dir(s, s.output), text);
}

std::vector<std::string> risk_averse_header(std::size_t N) {
    std::vector<std::string> h = {"M", "f_riskaverse", "f_opt"};
    for (std::size_t n = 1; n <= N; ++n) h.push_back("q" + std::to_string(n));
    return h;
}

void risk_averse_row(CsvWriter& w, const RiskAverseResult& r) {
    std::vector<std::string> cells = {std::to_string(r.M), w.num(r.f_riskaverse().value()), w.num(r.f_opt().value())};
    for (double q : r.q) cells.push_back(w.num(q));
    w.cells(cells);
}

RiskAverseOptions risk_averse_options(const Settings& s) {
    RiskAverseOptions o;
    o.coefficients = coefficient_options(s);
    o.sweep_workers = s.workers;
    return o;
}

// f, exact expectations and optionally their small-f approximations.
std::string exact_curves_csv(const Settings& s, const TradeDistribution& dist, std::size_t M) {
    std::ostringstream out;
    std::vector<std::string> header = {"f", "E_U", "E_D", "E_Dcur", "E_R", "E_Z"};
    std::optional<CoefficientSet> coeffs;
    if (s.with_approx) {
        header.insert(header.end(), {"U_approx", "D_approx", "Dcur_approx", "R_approx"});
        coeffs = coefficient_set(dist, M, chosen_method(s), coefficient_options(s));
    }
    CsvWriter w(out, header, s.precision);
    for (double fv : f_grid(s)) {
        const Fraction f(fv);
        const auto e = exact_expectations(dist, f, M, enumeration_options(s));
        std::vector<double> row = {fv, e.E_U, e.E_D, e.E_Dcur, e.E_R, e.E_Z};
        if (coeffs) {
            const auto a = smallf_expectation(*coeffs, dist, f);
            row.insert(row.end(), {a.u, a.d, a.d_cur, a.r});
        }
        w.row(row);
    }
    return out.str();
}

int cmd_optimal_f(const Settings& s) {
    const auto dist = load_distribution(s);
    const auto r = solve_optimal_f(WeightedObjective::classical(dist));
    std::ostringstream out;
    CsvWriter w(out, {"f_opt", "log_gamma", "boundary"}, s.precision);
    w.cells(std::vector<std::string>{w.num(r.f_opt.value()), w.num(log_gamma(dist, r.f_opt)), r.boundary ? "1" : "0"});
    emit(s, out.str());
    return 0;
}

int cmd_kelly(const Settings& s) {
    const double f = kelly_fraction(s.kelly_p, s.kelly_B);
    std::ostringstream out;
    CsvWriter w(out, {"p", "B", "f_kelly"}, s.precision);
    w.row({s.kelly_p, s.kelly_B, f});
    emit(s, out.str());
    return 0;
}

int cmd_coefficients(const Settings& s) {
    const auto dist = load_distribution(s);
    const std::size_t M = single_M(s);
    const auto c = coefficient_set(dist, M, chosen_method(s), coefficient_options(s));
    const auto& ud = c.updown;
    const auto& dd = c.drawdown;
    const bool exact = s.exact && ud.U_exact && dd.lambda_exact;
    std::ostringstream out;
    if (s.per_ell) {
        CsvWriter w(out, {"ell", "n", "lambda", "R"}, s.precision);
        for (std::size_t ell = 0; ell <= M; ++ell) {
            for (std::size_t n = 0; n < c.N; ++n) {
                w.cells(std::vector<std::string>{
                    std::to_string(ell), std::to_string(n + 1),
                    exact ? to_string((*dd.lambda_exact)(ell, n)) : w.num(dd.lambda(ell, n)),
                    exact ? to_string((*dd.run_up_exact)(ell, n)) : w.num(dd.run_up(ell, n))});
            }
        }
    } else {
        CsvWriter w(out, {"n", "U", "D", "sumLambda", "sumR"}, s.precision);
        const auto sl = dd.sum_lambda();
        const auto sr = dd.sum_run_up();
        std::vector<Rational> sl_exact, sr_exact;
        if (exact) {
            sl_exact = dd.lambda_exact->column_sums();
            sr_exact = dd.run_up_exact->column_sums();
        }
        for (std::size_t n = 0; n < c.N; ++n) {
            if (exact) {
                w.cells(std::vector<std::string>{std::to_string(n + 1), to_string((*ud.U_exact)[n]),
                                                 to_string((*ud.D_exact)[n]), to_string(sl_exact[n]),
                                                 to_string(sr_exact[n])});
            } else {
                w.cells(std::vector<std::string>{std::to_string(n + 1), w.num(ud.U[n]), w.num(ud.D[n]), w.num(sl[n]),
                                                 w.num(sr[n])});
            }
        }
    }
    emit(s, out.str());
    return 0;
}

int cmd_exact_curves(const Settings& s) {
    const auto dist = load_distribution(s);
    emit(s, exact_curves_csv(s, dist, single_M(s)));
    return 0;
}

int cmd_risk_averse(const Settings& s) {
    const auto dist = load_distribution(s);
    const auto r = risk_averse_fraction(dist, single_M(s), chosen_method(s), risk_averse_options(s));
    std::ostringstream out;
    CsvWriter w(out, risk_averse_header(dist.size()), s.precision);
    risk_averse_row(w, r);
    emit(s, out.str());
    return 0;
}

int cmd_sweep(const Settings& s) {
    const auto dist = load_distribution(s);
    const auto Ms = parse_M_list(s.M_spec);
    const auto sweep = sweep_M(dist, Ms, chosen_method(s), risk_averse_options(s));
    std::ostringstream out;
    CsvWriter w(out, risk_averse_header(dist.size()), s.precision);
    for (const auto& r : sweep.results) risk_averse_row(w, r);
    emit(s, out.str());
    return 0;
}

std::vector<EquityPath> run_simulation(const Settings& s, const TradeDistribution& dist, double f) {
    SimulationConfig cfg{dist, Fraction(f)};
    cfg.steps = s.steps;
    cfg.runs = s.runs;
    cfg.seed = s.seed;
    cfg.starting_capital = s.capital;
    return simulate(cfg);
}

// equity (first run), pooled drawdown histogram and per-run summary.
std::vector<fs::path> write_simulation(const Settings& s, const std::vector<EquityPath>& paths,
                                       const std::string& prefix, const std::string& suffix) {
    std::vector<fs::path> written;
    auto put = [&](const std::string& stem, auto&& writer) {
        std::ostringstream out;
        writer(out);
        const auto path = in_out_dir(s, prefix + stem + suffix + ".csv");
        write_file(path, out.str());
        written.push_back(path);
    };
    put("equity", [&](std::ostream& o) { write_equity_csv(o, paths.front(), s.precision); });
    put("dd_hist", [&](std::ostream& o) { write_histogram_csv(o, drawdown_distribution(paths), s.precision); });
    put("runs", [&](std::ostream& o) { write_runs_csv(o, paths, s.precision); });
    return written;
}

int cmd_simulate(const Settings& s) {
    const auto dist = load_distribution(s);
    const auto paths = run_simulation(s, dist, Fraction(s.f).value());
    for (const auto& p : write_simulation(s, paths, s.prefix, "")) std::cout << p.string() << '\n';
    return 0;
}

int cmd_figures(const Settings& s) {
    const auto dist = load_distribution(s);
    const auto fractions = parse_fraction_list(s.fractions);
    std::vector<fs::path> written;
    auto put = [&](const std::string& name, const std::string& text) {
        const auto path = in_out_dir(s, s.prefix + name);
        write_file(path, text);
        written.push_back(path);
    };

    {
        std::ostringstream out;
        CsvWriter w(out, {"f", "g"}, s.precision);
        const auto obj = WeightedObjective::classical(dist);
        for (double f : f_grid(s)) w.row({f, derivative_g(obj, Fraction(f))});
        put("g_function.csv", out.str());
    }

    Settings curves = s;
    curves.with_approx = true;
    put("exact_curves_M3.csv", exact_curves_csv(curves, dist, 3));
    {
        const auto c3 = coefficient_set(dist, 3, chosen_method(s), coefficient_options(s));
        const auto c100 = coefficient_set(dist, 100, chosen_method(s), coefficient_options(s));
        std::ostringstream m3, m100;
        CsvWriter w3(m3, {"f", "exact", "approx"}, s.precision);
        CsvWriter w100(m100, {"f", "approx"}, s.precision);
        for (double fv : f_grid(s)) {
            const Fraction f(fv);
            const auto e = exact_expectations(dist, f, 3, enumeration_options(s));
            const auto a3 = smallf_expectation(c3, dist, f);
            const auto a100 = smallf_expectation(c100, dist, f);
            w3.row({fv, e.E_U + e.E_Dcur, a3.u + a3.d_cur});
            w100.row({fv, a100.u + a100.d_cur});
        }
        put("objective_M3.csv", m3.str());
        put("objective_M100.csv", m100.str());
    }
    {
        const std::vector<std::size_t> Ms = {2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100};
        const auto sweep = sweep_M(dist, Ms, chosen_method(s), risk_averse_options(s));
        std::ostringstream out;
        CsvWriter w(out, risk_averse_header(dist.size()), s.precision);
        for (const auto& r : sweep.results) risk_averse_row(w, r);
        put("riskaverse_sweep.csv", out.str());
    }
    {
        // one short path split into run-up and current drawdown
        SimulationConfig cfg{dist, Fraction(fractions.front())};
        cfg.steps = 60;
        cfg.seed = s.seed;
        const auto p = simulate_run(cfg, 0);
        std::ostringstream out;
        CsvWriter w(out, {"t", "twr", "log_twr", "log_runup", "log_drawdown"}, s.precision);
        for (std::size_t t = 0; t <= p.steps(); ++t) {
            const double z = p.log_equity[t] - p.log_equity[0];
            const double peak = p.running_max_log[t] - p.log_equity[0];
            w.row({static_cast<double>(t), std::exp(z), z, peak, z - peak});
        }
        put("path_decomposition.csv", out.str());
    }
    Settings sim = s;
    sim.runs = s.figure_runs;
    for (double f : fractions) {
        const auto paths = run_simulation(sim, dist, f);
        for (auto& p : write_simulation(s, paths, s.prefix, "_f" + format_number(f, 4))) written.push_back(p);
    }
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
}

void add_distribution(CLI::App* sub, Settings& s) {
    sub->add_option("--dist", s.dist_path,
                    "Trade distribution file: CSV with header trade,prob or trade,count, or JSON "
                    "{\"trades\":[..],\"probs\":[..]}. Defaults to the 2:1 toss game (-1 and 2, each 1/2)")
        ->check(CLI::ExistingFile);
}

void add_output(CLI::App* sub, Settings& s) {
    sub->add_option("-o,--output", s.output,
                    "Write the CSV to this file (relative paths resolve against --out-dir) instead of stdout");
}

void add_method(CLI::App* sub, Settings& s) {
    auto* m = sub->add_option("--method", s.method,
                              "Drawdown coefficient route: auto (enumeration when N^M <= --cap, else dp), "
                              "enumeration or dp")
                  ->check(CLI::IsMember({"auto", "enumeration", "dp"}));
    auto* e = sub->add_flag("--enumeration", s.force_enum, "Shorthand for --method enumeration");
    auto* d = sub->add_flag("--dp", s.force_dp, "Shorthand for --method dp");
    m->excludes(e)->excludes(d);
    e->excludes(d);
}

void add_f_grid(CLI::App* sub, Settings& s) {
    sub->add_option("--f-min", s.f_min, "First fraction of the grid")->capture_default_str();
    sub->add_option("--f-max", s.f_max, "Last fraction of the grid (below 1)")->capture_default_str();
    sub->add_option("--f-step", s.f_step, "Grid spacing")->capture_default_str();
}

void add_simulation(CLI::App* sub, Settings& s, std::size_t& runs) {
    sub->add_option("--steps", s.steps, "Trades per run")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--runs", runs, "Independent runs")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", s.seed, "Base seed; run r uses a stream derived from (seed, r)")->capture_default_str();
    sub->add_option("--capital", s.capital, "Starting capital")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--prefix", s.prefix, "Prefix for the file names written to --out-dir");
}

int run(int argc, char** argv) {
    Settings s;
    CLI::App app{"Optimal fixed-fraction position sizing with current-drawdown risk.\n"
                 "All results are written as CSV with a dot decimal separator."};
    app.set_version_flag("--version", "riskfrac 0.1.0");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out-dir", s.out_dir, "Directory for output files")
        ->envname("RISKFRAC_OUT_DIR")
        ->capture_default_str();
    app.add_option("--precision", s.precision, "Significant digits for numeric output")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
    app.add_option("--workers", s.workers, "Worker threads for enumeration and sweeps (0: all cores)")
        ->capture_default_str();
    app.add_option("--cap", s.cap, "Largest number of paths or count vectors an exhaustive route may visit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* optimal = app.add_subcommand("optimal-f", "Growth-optimal fraction maximizing the expected log HPR");
    add_distribution(optimal, s);
    add_output(optimal, s);

    auto* kelly = app.add_subcommand("kelly", "Closed-form Kelly fraction p - (1 - p)/B of a two-outcome bet");
    kelly->add_option("--p", s.kelly_p, "Win probability in (0, 1)")->required();
    kelly->add_option("--B", s.kelly_B, "Win/loss payoff ratio, positive")->required();
    add_output(kelly, s);

    auto* coeffs = app.add_subcommand("coefficients", "Up/down and current-drawdown/run-up coefficients");
    add_distribution(coeffs, s);
    coeffs->add_option("--M", s.M_spec, "Horizon (number of trades)")->required();
    add_method(coeffs, s);
    coeffs->add_flag("--per-ell", s.per_ell, "Print the full tables by topping position: ell,n,lambda,R");
    coeffs->add_flag("--exact", s.exact, "Print exact rationals when the distribution has exact probabilities");
    add_output(coeffs, s);

    auto* curves = app.add_subcommand("exact-curves",
                                      "Exact E_U, E_D, E_Dcur, E_R, E_Z over an f-grid by full path enumeration");
    add_distribution(curves, s);
    curves->add_option("--M", s.M_spec, "Horizon (number of trades)")->required();
    add_f_grid(curves, s);
    curves->add_flag("--with-approx", s.with_approx, "Append the small-f coefficient approximations");
    add_method(curves, s);
    add_output(curves, s);

    auto* averse = app.add_subcommand("risk-averse", "Fraction maximizing E(U) + E(D_cur) in the small-f expansion");
    add_distribution(averse, s);
    averse->add_option("--M", s.M_spec, "Horizon (number of trades)")->required();
    add_method(averse, s);
    add_output(averse, s);

    auto* sweep = app.add_subcommand("sweep", "Risk-averse fraction over several horizons");
    add_distribution(sweep, s);
    sweep->add_option("--M", s.M_spec, "Horizons, e.g. 2..100, 2..100:5 or 3,5,10")->required();
    add_method(sweep, s);
    add_output(sweep, s);

    auto* sim = app.add_subcommand("simulate",
                                   "Monte Carlo equity curves; writes equity.csv, dd_hist.csv and runs.csv");
    add_distribution(sim, s);
    sim->add_option("--f", s.f, "Fraction in [0, 1)")->required();
    add_simulation(sim, s, s.runs);

    auto* figures = app.add_subcommand("figures", "Write every CSV behind the standard figure set to --out-dir");
    add_distribution(figures, s);
    add_f_grid(figures, s);
    add_method(figures, s);
    add_simulation(figures, s, s.figure_runs);
    figures->add_option("--fractions", s.fractions, "Fractions for the equity and drawdown files")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }
    if (optimal->parsed()) return cmd_optimal_f(s);
    if (kelly->parsed()) return cmd_kelly(s);
    if (coeffs->parsed()) return cmd_coefficients(s);
    if (curves->parsed()) return cmd_exact_curves(s);
    if (averse->parsed()) return cmd_risk_averse(s);
    if (sweep->parsed()) return cmd_sweep(s);
    if (sim->parsed()) return cmd_simulate(s);
    return cmd_figures(s);
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cap_exceeded& e) {
        std::cerr << "riskfrac: " << e.what() << '\n';
        return exit_method;
    } catch (const no_integer_scaling& e) {
        std::cerr << "riskfrac: " << e.what() << " (try --method enumeration)\n";
        return exit_method;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "riskfrac: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::logic_error& e) {
        std::cerr << "riskfrac: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "riskfrac: " << e.what() << '\n';
        return 1;
    }
}
