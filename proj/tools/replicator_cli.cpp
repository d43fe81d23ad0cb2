// Command-line front end for the replicator library.

#include "replicator/controllability.hpp"
#include "replicator/dynamics.hpp"
#include "replicator/fitness.hpp"
#include "replicator/io.hpp"
#include "replicator/parallel.hpp"
#include "replicator/variational.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace replicator;
namespace rio = replicator::io;

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitNumeric = 3;

// Writes to the file at `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ArgumentError("write failed for '" + path + "'");
}

std::string dump(const rio::Json& j) { return j.dump(2) + "\n"; }

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw ArgumentError(std::string(name) + " must be positive");
}

struct SimulateArgs {
    std::string model, x0, method = "rk4", out;
    double dt = 1e-3, t_end = 10.0;
};

int run_simulate(const SimulateArgs& a) {
    require_positive(a.dt, "--dt");
    require_positive(a.t_end, "--t-end");
    const FitnessModel f = rio::load_model(a.model);
    const SimplexPoint x0(rio::parse_vector_list(a.x0));
    if (x0.dim() != f.dim()) throw ArgumentError("--x0 dimension does not match the model");
    const Trajectory traj = integrate_replicator(f, x0, a.dt, a.t_end, parse_step_method(a.method));
    std::ostringstream os;
    rio::write_trajectory_csv(os, traj);
    emit(a.out, os.str());
    return kExitOk;
}

struct BracketArgs {
    std::string model_a, model_b, model_c, out;
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    double tol = 1e-6;
};

int run_bracket(const BracketArgs& a) {
    const FitnessModel f = rio::load_model(a.model_a);
    const FitnessModel g = rio::load_model(a.model_b);
    const FitnessModel h = a.model_c.empty() ? f : rio::load_model(a.model_c);
    if (f.dim() != g.dim() || g.dim() != h.dim()) throw ArgumentError("models have different dimensions");
    if (a.samples == 0) throw ArgumentError("--samples must be positive");
    const auto pts = sample_interior(f.dim(), a.samples, a.seed);
    BracketReport report = bracket_axiom_report(f, g, h, pts, a.tol);
    report.homomorphism = homomorphism_residuals(f, g, pts);
    report.refresh_max();
    rio::Json j = rio::to_json(report);
    j["seed"] = a.seed;
    emit(a.out, dump(j));
    return kExitOk;
}

struct HamiltonianArgs {
    std::string model, y0, p0, method = "implicit-midpoint", out;
    bool replicator_init = false;
    double dt = 1e-4, t_end = 5.0;
};

HamiltonianMethod parse_hamiltonian_method(const std::string& name) {
    if (name == "implicit-midpoint") return HamiltonianMethod::implicit_midpoint;
    if (name == "explicit-euler") return HamiltonianMethod::explicit_euler;
    throw ArgumentError("unknown method '" + name + "'");
}

int run_hamiltonian(const HamiltonianArgs& a) {
    require_positive(a.dt, "--dt");
    require_positive(a.t_end, "--t-end");
    const FitnessModel f = rio::load_model(a.model);
    Vector y0 = rio::parse_vector_list(a.y0);
    // A full simplex point is accepted and reduced to the drop-last chart.
    if (y0.size() == f.dim()) y0 = chart::project(SimplexPoint(y0));
    if (y0.size() + 1 != f.dim()) throw ArgumentError("--y0 must have n-1 (or n) entries");
    require_interior(chart::lift_raw(y0), "--y0");
    Vector p0;
    if (a.replicator_init) {
        p0 = replicator_momentum(f, y0);
    } else {
        p0 = rio::parse_vector_list(a.p0);
        if (p0.size() != y0.size()) throw ArgumentError("--p0 must have n-1 entries");
    }
    const PhaseTrajectory traj = integrate_hamiltonian(f, y0, p0, a.dt, a.t_end, parse_hamiltonian_method(a.method));
    std::ostringstream os;
    rio::write_phase_csv(os, traj);
    emit(a.out, os.str());
    return kExitOk;
}

struct PeriodicArgs {
    std::string payoff, out;
    double c = -1.0, dt = 1e-4, t_max = 50.0;
};

int run_periodic(const PeriodicArgs& a) {
    const Matrix A = rio::load_matrix(a.payoff);
    const PeriodicOrbitReport report = detect_periodic_orbit(A, a.c, a.dt, a.t_max);
    emit(a.out, dump(rio::to_json(report)));
    return kExitOk;
}

struct ControllabilityArgs {
    std::string a, B = "id", out;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
};

int run_controllability(const ControllabilityArgs& args) {
    const Vector a = rio::parse_vector_list(args.a);
    const Matrix B = args.B == "id" ? Matrix::Identity(a.size(), a.size()) : rio::load_matrix(args.B);
    if (B.rows() != a.size() || B.cols() != a.size()) throw ArgumentError("--B must be n x n with n = len(--a)");
    if (args.samples == 0) throw ArgumentError("--samples must be positive");
    const ControllabilityReport report = controllability_verdict(a, B, args.samples, args.seed);
    emit(args.out, dump(rio::to_json(report)));
    if (!report.hypotheses_hold()) {
        for (const auto& h : report.hypotheses)
            if (!h.passed) std::cerr << "hypothesis failed: " << h.name << ": " << h.detail << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

struct ElCheckArgs {
    std::string model, traj, out;
    int stride = EulerLagrangeOptions{}.stride;
};

int run_el_check(const ElCheckArgs& a) {
    const FitnessModel f = rio::load_model(a.model);
    std::ifstream in(a.traj);
    if (!in) throw ArgumentError("cannot open '" + a.traj + "'");
    const Trajectory traj = rio::read_trajectory_csv(in);
    if (traj.size() > 0 && traj.states.front().dim() != f.dim())
        throw ArgumentError("trajectory dimension does not match the model");
    EulerLagrangeOptions opts;
    opts.stride = a.stride;
    const double residual = euler_lagrange_residual(f, traj, opts);
    rio::Json j{{"residual", residual}, {"stride", opts.stride}, {"points", traj.size()}, {"dt", traj.dt}};
    emit(a.out, dump(j));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replicator dynamics toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (0 keeps the default)")->check(CLI::NonNegativeNumber);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate the replicator equation");
    simulate->add_option("--model", sim.model, "fitness model JSON")->required();
    simulate->add_option("--x0", sim.x0, "initial state, comma separated")->required();
    simulate->add_option("--dt", sim.dt, "step size");
    simulate->add_option("--t-end", sim.t_end, "final time");
    simulate->add_option("--method", sim.method, "rk4 or midpoint");
    simulate->add_option("--out", sim.out, "output CSV (stdout if omitted)");

    BracketArgs br;
    auto* bracket = app.add_subcommand("bracket", "Bracket axiom and homomorphism report");
    bracket->add_option("--model-a", br.model_a, "first fitness model")->required();
    bracket->add_option("--model-b", br.model_b, "second fitness model")->required();
    bracket->add_option("--model-c", br.model_c, "third model for linearity and Jacobi (default: model-a)");
    bracket->add_option("--samples", br.samples, "interior sample count");
    bracket->add_option("--seed", br.seed, "sampling seed");
    bracket->add_option("--tol", br.tol, "pass tolerance");
    bracket->add_option("--out", br.out, "output JSON (stdout if omitted)");

    HamiltonianArgs ham;
    auto* hamiltonian = app.add_subcommand("hamiltonian", "Integrate the Hamiltonian flow in the drop-last chart");
    hamiltonian->add_option("--model", ham.model, "fitness model JSON")->required();
    hamiltonian->add_option("--y0", ham.y0, "initial chart coordinates")->required();
    auto* p0 = hamiltonian->add_option("--p0", ham.p0, "initial momentum");
    auto* init = hamiltonian->add_flag("--replicator-init", ham.replicator_init, "momentum of the replicator solution");
    p0->excludes(init);
    hamiltonian->add_option("--dt", ham.dt, "step size");
    hamiltonian->add_option("--t-end", ham.t_end, "final time");
    hamiltonian->add_option("--method", ham.method, "implicit-midpoint or explicit-euler");
    hamiltonian->add_option("--out", ham.out, "output CSV (stdout if omitted)");

    PeriodicArgs per;
    auto* periodic = app.add_subcommand("periodic", "Periodic orbit detection for two-strategy games");
    periodic->add_option("--payoff", per.payoff, "2x2 payoff matrix JSON")->required();
    periodic->add_option("--c", per.c, "energy level (negative)");
    periodic->add_option("--dt", per.dt, "step size");
    periodic->add_option("--t-max", per.t_max, "integration horizon");
    periodic->add_option("--out", per.out, "output JSON (stdout if omitted)");

    ControllabilityArgs ctl;
    auto* controllability = app.add_subcommand("controllability", "Sampled controllability check for constant a and linear B");
    controllability->add_option("--a", ctl.a, "constant fitness, comma separated")->required();
    controllability->add_option("--B", ctl.B, "'id' or a matrix JSON path");
    controllability->add_option("--samples", ctl.samples, "interior sample count");
    controllability->add_option("--seed", ctl.seed, "sampling seed");
    controllability->add_option("--out", ctl.out, "output JSON (stdout if omitted)");

    ElCheckArgs el;
    auto* el_check = app.add_subcommand("el-check", "Euler-Lagrange residual of a trajectory CSV");
    el_check->add_option("--model", el.model, "fitness model JSON")->required();
    el_check->add_option("--traj", el.traj, "trajectory CSV")->required();
    el_check->add_option("--stride", el.stride, "difference stride in samples");
    el_check->add_option("--out", el.out, "output JSON (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitArgs;
    }

    if (const char* env = std::getenv("REPLICATOR_THREADS"); env && threads == 0) threads = std::atoi(env);
    set_thread_count(threads);

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (bracket->parsed()) return run_bracket(br);
        if (hamiltonian->parsed()) {
            if (!ham.replicator_init && ham.p0.empty()) throw ArgumentError("give --p0 or --replicator-init");
            return run_hamiltonian(ham);
        }
        if (periodic->parsed()) return run_periodic(per);
        if (controllability->parsed()) return run_controllability(ctl);
        if (el_check->parsed()) return run_el_check(el);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgs;
    } catch (const IntegrationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitArgs;
}
