// Command-line laboratory for the nonlocal bistable reaction-diffusion
// equation u_t = J*u - u - f(u): evolution of indicator data, threshold
// bisection, traveling fronts, and energy diagnostics. CSV outputs plus a
// reproducibility manifest per run.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nrd/config.hpp"
#include "nrd/energy.hpp"
#include "nrd/errors.hpp"
#include "nrd/evolve.hpp"
#include "nrd/front.hpp"
#include "nrd/io.hpp"
#include "nrd/threshold.hpp"

namespace fs = std::filesystem;
using namespace nrd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;
constexpr int kExitInconclusive = 5;

std::string wall_clock_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                      const std::string& out_dir) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    for (const auto& o : overrides) text += "\n" + o;
    RunConfig c = parse_config_text(text);
    if (const char* env = std::getenv("NRDLAB_OUT")) c.output.dir = env;
    if (!out_dir.empty()) c.output.dir = out_dir;
    return c;
}

SnapshotSchedule schedule_from_config(const RunConfig& c) {
    if (c.output.snapshots == "all") return SnapshotSchedule::all();
    if (c.output.snapshots == "none") return SnapshotSchedule::none();
    return SnapshotSchedule::dyadic();
}

std::string trace_csv(const Trajectory& traj, int prec) {
    std::ostringstream os;
    os << "k,t,u_center,max_u,sym_defect,mono_defect\n";
    for (long k = 0; k <= traj.steps; ++k) {
        const auto i = static_cast<std::size_t>(k);
        os << k << ',' << format_double(traj.time_at(k), prec) << ','
           << format_double(traj.center[i], prec) << ',' << format_double(traj.max_u[i], prec)
           << ',' << format_double(traj.sym_defect[i], prec) << ','
           << format_double(traj.mono_defect[i], prec) << '\n';
    }
    return os.str();
}

void add_config_echo(Manifest& m, const RunConfig& c) {
    std::istringstream in(emit_config(c));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos)
            m.add("config." + line.substr(0, eq), line.substr(eq + 3));
    }
}

struct RunPieces {
    Grid grid;
    DiscreteKernel kernel;
    Nonlinearity nl;
    ValidationReport kernel_report;
    ValidationReport reaction_report;
};

RunPieces build_pieces(const RunConfig& c) {
    RunPieces p{c.make_grid(), {}, c.make_nonlinearity(), {}, {}};
    p.kernel = build_kernel(c.make_kernel_spec(), p.grid);
    p.kernel_report = validate_kernel(p.kernel);
    p.reaction_report = validate_hypotheses(p.nl);
    return p;
}

int cmd_validate(const RunConfig& c) {
    const RunPieces p = build_pieces(c);
    std::cout << p.kernel_report.summary() << '\n';
    std::cout << "  mass = " << format_double(p.kernel.mass)
              << "  int|x|J = " << format_double(p.kernel.first_abs_moment) << '\n';
    std::cout << p.reaction_report.summary() << '\n';
    std::cout << "  alpha = " << format_double(p.nl.alpha())
              << "  M_f = " << format_double(p.nl.max_abs_f_prime())
              << "  L_0 = " << format_double(p.nl.min_one_plus_f_prime()) << '\n';
    if (const auto* b = p.reaction_report.find("beta"))
        std::cout << "  beta = " << format_double(b->measured) << '\n';
    const bool ok = p.kernel_report.all_passed() && p.reaction_report.all_passed();
    std::cout << (ok ? "all hypothesis checks passed" : "hypothesis checks FAILED") << '\n';
    return ok ? kExitOk : kExitValidation;
}

void write_run_outputs(const RunConfig& c, const RunPieces& p, const Trajectory& traj,
                       const std::string& dir, Manifest& m) {
    fs::create_directories(dir);
    const int prec = c.output.precision;

    write_text_file(dir + "/trace.csv", trace_csv(traj, prec));
    std::vector<std::string> files{"trace.csv"};
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const std::string name = snapshot_filename(traj.time_at(traj.snapshot_steps[s]));
        write_text_file(dir + "/" + name, snapshot_csv(traj.snapshots[s], prec));
        files.push_back(name);
    }
    write_text_file(dir + "/config.resolved", emit_config(c));
    files.push_back("config.resolved");

    m.add("tool", tool_version());
    m.add("wall_clock", wall_clock_utc());
    add_config_echo(m, c);
    m.add_report(p.kernel_report);
    m.add_report(p.reaction_report);
    m.add("run.boundary_peak", traj.boundary_peak);
    m.add("run.domain_flagged", traj.domain_flagged ? "true" : "false");
    m.add("run.range_low", traj.range_low);
    m.add("run.range_high", traj.range_high);
    for (const auto& f : files) m.add_file(dir, f);
}

int cmd_evolve(const RunConfig& c) {
    const RunPieces p = build_pieces(c);
    if (!p.kernel_report.all_passed() || !p.reaction_report.all_passed()) {
        std::cerr << "validation failed:\n"
                  << p.kernel_report.summary() << '\n'
                  << p.reaction_report.summary() << '\n';
        return kExitValidation;
    }

    EvolveOptions eo;
    eo.dt = c.dt();
    eo.steps = c.time.N;
    eo.schedule = schedule_from_config(c);

    const Field u0 = initial_indicator(p.grid, c.init.L);
    const Trajectory traj = run(u0, p.kernel, p.nl, eo);
    if (traj.domain_flagged)
        std::cerr << "warning: boundary contamination " << format_double(traj.boundary_peak)
                  << " exceeds tolerance; domain may be too small\n";

    Manifest m;
    write_run_outputs(c, p, traj, c.output.dir, m);

    const double beta = compute_beta(p.nl);
    const Classification cls = classify(traj, beta);
    m.add("classification.verdict", to_string(cls.verdict));
    m.add("classification.terminal_center", cls.terminal_center);
    m.add("classification.trend", cls.trend);
    m.write(c.output.dir + "/manifest.txt");
    std::cout << "evolve: " << to_string(cls.verdict) << " (terminal center "
              << format_double(cls.terminal_center) << ") -> " << c.output.dir << '\n';
    return kExitOk;
}

int cmd_threshold(const RunConfig& c, double l_lo, double l_hi, double tol_l, long max_iter) {
    const RunPieces p = build_pieces(c);
    if (!p.kernel_report.all_passed() || !p.reaction_report.all_passed()) {
        std::cerr << "validation failed before threshold search\n";
        return kExitValidation;
    }

    BisectOptions bo;
    bo.dt = c.dt();
    bo.steps = c.time.N;
    bo.tol_L = tol_l;
    bo.max_iter = max_iter;
    const ThresholdResult res = bisect(p.grid, p.kernel, p.nl, l_lo, l_hi, bo);

    fs::create_directories(c.output.dir);
    std::ostringstream os;
    os << "iteration,L,verdict,terminal_center\n";
    for (const auto& it : res.log)
        os << it.iteration << ',' << format_double(it.L, c.output.precision) << ','
           << to_string(it.verdict) << (it.provisional ? "(provisional)" : "") << ','
           << format_double(it.terminal_center, c.output.precision) << '\n';
    write_text_file(c.output.dir + "/threshold.csv", os.str());
    write_text_file(c.output.dir + "/config.resolved", emit_config(c));

    Manifest m;
    m.add("tool", tool_version());
    m.add("wall_clock", wall_clock_utc());
    add_config_echo(m, c);
    m.add("threshold.l_lo", res.l_lo);
    m.add("threshold.l_hi", res.l_hi);
    m.add("threshold.width", res.width());
    m.add("threshold.converged", res.converged ? "true" : "false");
    m.add("threshold.probes", static_cast<double>(res.log.size()));
    m.add("threshold.provenance", res.provenance);
    m.add_file(c.output.dir, "threshold.csv");
    m.add_file(c.output.dir, "config.resolved");
    m.write(c.output.dir + "/manifest.txt");

    std::cout << "threshold bracket: [" << format_double(res.l_lo) << ", "
              << format_double(res.l_hi) << "] width " << format_double(res.width())
              << (res.converged ? "" : " (NOT converged)") << '\n';
    return res.converged ? kExitOk : kExitInconclusive;
}

int cmd_front(const RunConfig& c, double alpha, double ell, double dxi) {
    const long m = std::lround(2.0 * ell / dxi);
    const Grid xi_grid(ell, m);
    const KernelSpec spec = c.make_kernel_spec();
    const DiscreteKernel kernel = build_kernel(spec, xi_grid);
    const Nonlinearity nl =
        c.reaction.family == "cubic" ? Nonlinearity::cubic(alpha) : c.make_nonlinearity();

    const FrontSolution sol = front_solve(kernel, nl, ell, dxi);
    const auto [lam1, lam2] = char_roots(spec, nl, sol.speed);
    const auto [fit1, fit2] = measure_tail_rates(sol);

    fs::create_directories(c.output.dir);
    std::ostringstream os;
    os << "xi,U,residual\n";
    for (long j = 0; j <= xi_grid.intervals; ++j)
        os << format_double(xi_grid.node(j), c.output.precision) << ','
           << format_double(sol.profile[static_cast<std::size_t>(j)], c.output.precision) << ','
           << format_double(sol.residual[static_cast<std::size_t>(j)], c.output.precision) << '\n';
    write_text_file(c.output.dir + "/front.csv", os.str());

    Manifest man;
    man.add("tool", tool_version());
    man.add("wall_clock", wall_clock_utc());
    man.add("front.alpha", alpha);
    man.add("front.xi_half_width", ell);
    man.add("front.dxi", dxi);
    man.add("front.speed", sol.speed);
    man.add("front.residual_norm", sol.residual_norm);
    man.add("front.iterations", static_cast<double>(sol.iterations));
    man.add("front.monotone", sol.monotone ? "true" : "false");
    man.add("front.lambda1_dispersion", lam1);
    man.add("front.lambda2_dispersion", lam2);
    man.add("front.lambda1_fit", fit1);
    man.add("front.lambda2_fit", fit2);
    man.add("front.speed_identity_residual", speed_identity_residual(sol, nl));
    {
        std::ostringstream hs;
        for (std::size_t i = 0; i < sol.residual_history.size(); ++i) {
            if (i) hs << ' ';
            hs << format_double(sol.residual_history[i], 6);
        }
        man.add("front.residual_history", hs.str());
    }
    man.add_file(c.output.dir, "front.csv");
    man.write(c.output.dir + "/manifest.txt");

    std::cout << "front: c = " << format_double(sol.speed) << ", |R| = "
              << format_double(sol.residual_norm) << ", rates (" << format_double(lam1) << ", "
              << format_double(lam2) << ")\n";
    return kExitOk;
}

int cmd_energy(const std::string& run_dir, const std::string& out_override) {
    RunConfig c = parse_config(run_dir + "/config.resolved");
    c.output.dir = out_override.empty() ? run_dir : out_override;
    const RunPieces p = build_pieces(c);
    if (!p.kernel_report.all_passed() || !p.reaction_report.all_passed()) {
        std::cerr << "validation failed\n";
        return kExitValidation;
    }

    // deterministic re-run of the recorded config, snapshots on the energy
    // stride, per-step energies alongside
    EvolveOptions eo;
    eo.dt = c.dt();
    eo.steps = c.time.N;
    eo.record_energy = true;
    std::vector<long> sched;
    for (long k = 0; k <= c.time.N; k += c.energy.stride) sched.push_back(k);
    eo.schedule = SnapshotSchedule::at_steps(sched);

    const Field u0 = initial_indicator(p.grid, c.init.L);
    const Trajectory traj = run(u0, p.kernel, p.nl, eo);
    const CutoffProfile eta = CutoffProfile::on_grid(p.grid);
    const EnergyReport rep = monitor(traj, p.kernel, p.nl, eta);

    std::ostringstream os;
    os << "t,E,E1,V,Q,dissipation\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const long k = std::lround(rep.times[i] / c.dt());
        const double diss =
            traj.dissipation.empty()
                ? 0.0
                : traj.dissipation[static_cast<std::size_t>(std::min<long>(
                      k, static_cast<long>(traj.dissipation.size()) - 1))];
        os << format_double(rep.times[i], c.output.precision) << ','
           << format_double(rep.E[i], c.output.precision) << ','
           << format_double(rep.E1[i], c.output.precision) << ','
           << format_double(rep.V[i], c.output.precision) << ','
           << format_double(rep.Q[i], c.output.precision) << ','
           << format_double(diss, c.output.precision) << '\n';
    }
    fs::create_directories(c.output.dir);
    write_text_file(c.output.dir + "/energy.csv", os.str());
    std::cout << "energy: " << rep.times.size() << " rows -> " << c.output.dir << "/energy.csv\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
    if (c.sweep.pairs.empty()) {
        std::cerr << "sweep.pairs is empty; nothing to do\n";
        return kExitConfig;
    }
    fs::create_directories(c.output.dir);
    std::mutex progress_mutex;
    std::ofstream progress(c.output.dir + "/progress.log", std::ios::app);

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(c.sweep.pairs.size())));

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= c.sweep.pairs.size()) return;
            const auto [alpha, L] = c.sweep.pairs[i];
            RunConfig cell = c;
            cell.reaction.alpha = alpha;
            cell.init.L = L;
            cell.sweep.pairs.clear();
            std::ostringstream dir;
            dir << c.output.dir << "/cell_" << i << "_a" << format_double(alpha, 6) << "_L"
                << format_double(L, 6);
            cell.output.dir = dir.str();
            try {
                const RunPieces p = build_pieces(cell);
                EvolveOptions eo;
                eo.dt = cell.dt();
                eo.steps = cell.time.N;
                eo.schedule = schedule_from_config(cell);
                const Field u0 = initial_indicator(p.grid, cell.init.L);
                const Trajectory traj = run(u0, p.kernel, p.nl, eo);
                Manifest m;
                write_run_outputs(cell, p, traj, cell.output.dir, m);
                const Classification cls = classify(traj, compute_beta(p.nl));
                m.add("classification.verdict", to_string(cls.verdict));
                m.add("classification.terminal_center", cls.terminal_center);
                m.write(cell.output.dir + "/manifest.txt");
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress << "cell " << i << " alpha=" << alpha << " L=" << L << " -> "
                         << to_string(cls.verdict) << '\n'
                         << std::flush;
            } catch (const std::exception& e) {
                failures.fetch_add(1);
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress << "cell " << i << " alpha=" << alpha << " L=" << L << " FAILED: "
                         << e.what() << '\n'
                         << std::flush;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    std::cout << "sweep: " << c.sweep.pairs.size() << " cells, " << failures.load()
              << " failures -> " << c.output.dir << '\n';
    return failures.load() == 0 ? kExitOk : kExitOther;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal bistable reaction-diffusion laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--set", overrides, "override a config key, e.g. --set init.L=1.61");
    app.add_option("--out", out_dir, "output directory override");

    auto* validate = app.add_subcommand("validate", "check hypotheses on J and f");
    auto* evolve = app.add_subcommand("evolve", "march the scheme and record the trajectory");

    auto* threshold = app.add_subcommand("threshold", "bisect for the sharp threshold L*");
    double l_lo = 1.0, l_hi = 3.0, tol_l = 0.005;
    long max_iter = 40;
    threshold->add_option("--l-lo", l_lo, "extinction end of the initial bracket");
    threshold->add_option("--l-hi", l_hi, "propagation end of the initial bracket");
    threshold->add_option("--tol-l", tol_l, "bracket width to stop at");
    threshold->add_option("--max-iter", max_iter, "midpoint probe budget");

    auto* front = app.add_subcommand("front", "solve for a traveling front (U, c)");
    double alpha = 0.4, ell = 40.0, dxi = 0.02;
    front->add_option("--alpha", alpha, "cubic nonlinearity parameter");
    front->add_option("--xi-half-width", ell, "moving-frame half-width");
    front->add_option("--dxi", dxi, "moving-frame spacing");

    auto* energy = app.add_subcommand("energy", "evaluate E, E1, V, Q along a recorded run");
    std::string run_dir;
    energy->add_option("run_dir", run_dir, "directory of a previous evolve run")->required();

    auto* sweep = app.add_subcommand("sweep", "run the (alpha, L) cells of sweep.pairs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (energy->parsed()) return cmd_energy(run_dir, out_dir);
        const RunConfig c = load_config(config_path, overrides, out_dir);
        if (validate->parsed()) return cmd_validate(c);
        if (evolve->parsed()) return cmd_evolve(c);
        if (threshold->parsed()) return cmd_threshold(c, l_lo, l_hi, tol_l, max_iter);
        if (front->parsed()) return cmd_front(c, alpha, ell, dxi);
        if (sweep->parsed()) return cmd_sweep(c);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hypothesis_error& e) {
        std::cerr << "hypothesis violation: " << e.what() << '\n';
        return kExitValidation;
    } catch (const solver_error& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const numeric_error& e) {
        std::cerr << "numeric abort: " << e.what() << '\n';
        return kExitSolver;
    } catch (const bracket_error& e) {
        std::cerr << "bracket error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitOther;
}
