#include "replicator/variational.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace replicator {

double svirezhev_lagrangian(const FitnessModel& f, const SimplexPoint& x, const TangentVector& v) {
    const TangentVector fh = hat(f, x);
    return frs_inner(x, v, v) + frs_inner(x, fh, fh);
}

namespace {

void require_uniform_trajectory(const Trajectory& traj, std::size_t min_points, const char* what) {
    if (traj.states.size() != traj.times.size()) throw ArgumentError(std::string(what) + ": times/states mismatch");
    if (traj.states.size() < min_points) {
        std::ostringstream os;
        os << what << ": need at least " << min_points << " states, got " << traj.states.size();
        throw ArgumentError(os.str());
    }
}

}  // namespace

double action_cost(const FitnessModel& f, const Trajectory& traj) {
    require_uniform_trajectory(traj, 3, "action_cost");
    const std::size_t n = traj.size();
    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vector v;
        if (k == 0) {
            const double h = traj.times[1] - traj.times[0];
            v = (-3.0 * traj.states[0].values() + 4.0 * traj.states[1].values() - traj.states[2].values()) / (2.0 * h);
        } else if (k == n - 1) {
            const double h = traj.times[n - 1] - traj.times[n - 2];
            v = (3.0 * traj.states[n - 1].values() - 4.0 * traj.states[n - 2].values() +
                 traj.states[n - 3].values()) /
                (2.0 * h);
        } else {
            v = (traj.states[k + 1].values() - traj.states[k - 1].values()) / (traj.times[k + 1] - traj.times[k - 1]);
        }
        integrand[k] = svirezhev_lagrangian(f, traj.states[k], project_tangent(v));
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k)
        total += 0.5 * (traj.times[k + 1] - traj.times[k]) * (integrand[k] + integrand[k + 1]);
    return total;
}

double euler_lagrange_residual(const FitnessModel& f, const Trajectory& traj, EulerLagrangeOptions opts) {
    require_uniform_trajectory(traj, 3, "euler_lagrange_residual");
    if (opts.stride < 1) throw ArgumentError("euler_lagrange_residual: stride must be positive");
    const std::size_t n = traj.size();
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(opts.stride), (n - 1) / 2);

    double worst = 0.0;
    for (std::size_t k = m; k + m < n; ++k) {
        const SimplexPoint& xp = traj.states[k];
        require_interior(xp, "euler_lagrange_residual");
        const Vector& x = xp.values();
        const Vector& prev = traj.states[k - m].values();
        const Vector& next = traj.states[k + m].values();
        const double h = 0.5 * (traj.times[k + m] - traj.times[k - m]);
        const Vector xdot = (next - prev) / (2.0 * h);
        const Vector xddot = (next - 2.0 * x + prev) / (h * h);

        const Vector fx = f.value_at(x);
        const Matrix J = f.jacobian_at(x);
        const Vector dev = fx.array() - x.dot(fx);
        const Vector weighted = x.cwiseProduct(dev);
        // sum_k x_k d_k (J_ki - sum_j x_j J_ji)
        const Vector coupling = J.transpose() * weighted - weighted.sum() * (J.transpose() * x);

        Vector rhs = xdot.cwiseAbs2().cwiseQuotient(x) + x.cwiseProduct(dev.cwiseAbs2()) + 2.0 * x.cwiseProduct(coupling);
        double lambda = 0.0;
        if (opts.multiplier == MultiplierRule::closed_form) {
            lambda = -2.0 * x.dot(dev.cwiseAbs2());
        } else {
            lambda = (2.0 * xddot.sum() - rhs.sum()) / x.sum();
        }
        rhs += lambda * x;
        worst = std::max(worst, (rhs - 2.0 * xddot).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

Vector legendre_momentum(const Vector& y, const Vector& ydot) {
    if (y.size() != ydot.size()) throw ArgumentError("legendre_momentum: dimension mismatch");
    return 2.0 * frs_local_metric(y) * ydot;
}

Vector velocity_from_momentum(const Vector& y, const Vector& p) {
    if (y.size() != p.size()) throw ArgumentError("velocity_from_momentum: dimension mismatch");
    require_interior(chart::lift_raw(y), "velocity_from_momentum");
    // G^{-1} = diag(y) - y y^T
    return 0.5 * (y.cwiseProduct(p) - y * y.dot(p));
}

double kinetic_energy(const Vector& y, const Vector& p) {
    if (y.size() != p.size()) throw ArgumentError("kinetic_energy: dimension mismatch");
    require_interior(chart::lift_raw(y), "kinetic_energy");
    const double yp = y.dot(p);
    return 0.25 * (y.dot(p.cwiseAbs2()) - yp * yp);
}

double potential_energy(const FitnessModel& f, const Vector& y) {
    if (y.size() + 1 != f.dim()) throw ArgumentError("potential_energy: chart dimension does not match the model");
    const Vector x = chart::lift_raw(y);
    require_interior(x, "potential_energy");
    const Vector fx = f.value_at(x);
    const Vector dev = fx.array() - x.dot(fx);
    return -x.dot(dev.cwiseAbs2());
}

double hamiltonian(const FitnessModel& f, const Vector& y, const Vector& p) {
    return kinetic_energy(y, p) + potential_energy(f, y);
}

PhaseVelocity hamiltonian_rhs(const FitnessModel& f, const Vector& y, const Vector& p) {
    if (y.size() != p.size() || y.size() + 1 != f.dim()) throw ArgumentError("hamiltonian_rhs: dimension mismatch");
    const Vector x = chart::lift_raw(y);
    require_interior(x, "hamiltonian_rhs");

    PhaseVelocity out;
    out.ydot = velocity_from_momentum(y, p);

    if (y.size() == 1) {
        const double x1 = y[0];
        const Vector fx = f.value_at(x);
        const Matrix J = f.jacobian_at(x);
        const double D = fx[0] - fx[1];
        const double dD = (J(0, 0) - J(0, 1)) - (J(1, 0) - J(1, 1));
        const double s = 1.0 - 2.0 * x1;
        out.pdot.resize(1);
        out.pdot[0] = -p[0] * p[0] * s / 4.0 + s * D * D + 2.0 * x1 * (1.0 - x1) * D * dD;
        return out;
    }

    const double h = std::min(kFdStep, 0.5 * x.minCoeff());
    out.pdot.resize(y.size());
    Vector yp = y;
    Vector ym = y;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        yp[i] = y[i] + h;
        ym[i] = y[i] - h;
        out.pdot[i] = -(hamiltonian(f, yp, p) - hamiltonian(f, ym, p)) / (2.0 * h);
        yp[i] = y[i];
        ym[i] = y[i];
    }
    return out;
}

Vector replicator_momentum(const FitnessModel& f, const Vector& y) {
    if (y.size() + 1 != f.dim()) throw ArgumentError("replicator_momentum: dimension mismatch");
    const Vector x = chart::lift_raw(y);
    require_interior(x, "replicator_momentum");
    const Vector fh = f.hat_at(x);
    return legendre_momentum(y, fh.head(y.size()));
}

std::string to_string(HamiltonianMethod m) {
    return m == HamiltonianMethod::implicit_midpoint ? "implicit-midpoint" : "explicit-euler";
}

namespace {

struct PhaseState {
    Vector y;
    Vector p;
};

PhaseState phase_step(const FitnessModel& f, const PhaseState& z, double dt, HamiltonianMethod method,
                      std::size_t step) {
    const PhaseVelocity v0 = hamiltonian_rhs(f, z.y, z.p);
    PhaseState next{z.y + dt * v0.ydot, z.p + dt * v0.pdot};
    if (method == HamiltonianMethod::explicit_euler) return next;

    for (int it = 0; it < kMidpointMaxIter; ++it) {
        const PhaseVelocity v = hamiltonian_rhs(f, 0.5 * (z.y + next.y), 0.5 * (z.p + next.p));
        PhaseState candidate{z.y + dt * v.ydot, z.p + dt * v.pdot};
        const double change = std::max((candidate.y - next.y).lpNorm<Eigen::Infinity>(),
                                       (candidate.p - next.p).lpNorm<Eigen::Infinity>());
        next = std::move(candidate);
        if (change <= kMidpointTol) return next;
    }
    throw IntegrationError("implicit midpoint: fixed-point iteration did not converge", step);
}

PhaseState checked_step(const FitnessModel& f, const PhaseState& z, double dt, HamiltonianMethod method,
                        std::size_t step) {
    try {
        PhaseState next = phase_step(f, z, dt, method, step);
        if (!next.y.allFinite() || !next.p.allFinite())
            throw IntegrationError("hamiltonian flow: non-finite state", step);
        require_interior(chart::lift_raw(next.y), "hamiltonian flow");
        return next;
    } catch (const DomainError& e) {
        throw IntegrationError(e.what(), step);
    }
}

}  // namespace

PhaseTrajectory integrate_hamiltonian(const FitnessModel& f, const Vector& y0, const Vector& p0, double dt,
                                      double t_end, HamiltonianMethod method) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("integrate_hamiltonian: dt must be positive");
    if (!(t_end >= 0.0)) throw ArgumentError("integrate_hamiltonian: t_end must be nonnegative");
    if (y0.size() != p0.size() || y0.size() + 1 != f.dim())
        throw ArgumentError("integrate_hamiltonian: dimension mismatch");
    require_interior(chart::lift_raw(y0), "integrate_hamiltonian");

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    PhaseTrajectory traj;
    traj.method = method;
    traj.dt = dt;
    traj.times.reserve(steps + 1);
    traj.ys.reserve(steps + 1);
    traj.ps.reserve(steps + 1);
    traj.hs.reserve(steps + 1);

    PhaseState z{y0, p0};
    traj.times.push_back(0.0);
    traj.ys.push_back(z.y);
    traj.ps.push_back(z.p);
    traj.hs.push_back(hamiltonian(f, z.y, z.p));
    for (std::size_t k = 1; k <= steps; ++k) {
        z = checked_step(f, z, dt, method, k);
        traj.times.push_back(static_cast<double>(k) * dt);
        traj.ys.push_back(z.y);
        traj.ps.push_back(z.p);
        traj.hs.push_back(hamiltonian(f, z.y, z.p));
    }
    return traj;
}

double reverser_residual(const FitnessModel& f, const PhaseTrajectory& traj) {
    if (traj.size() < 2) return 0.0;
    PhaseState z{traj.ys.back(), -traj.ps.back()};
    const std::size_t steps = traj.size() - 1;
    for (std::size_t k = 1; k <= steps; ++k) z = checked_step(f, z, traj.dt, traj.method, k);
    return std::max((z.y - traj.ys.front()).lpNorm<Eigen::Infinity>(),
                    (z.p + traj.ps.front()).lpNorm<Eigen::Infinity>());
}

std::pair<double, double> payoff_difference_coefficients(const Matrix& A) {
    if (A.rows() != 2 || A.cols() != 2) throw ArgumentError("expected a 2x2 payoff matrix");
    return {A(0, 0) - A(0, 1) - A(1, 0) + A(1, 1), A(0, 1) - A(1, 1)};
}

namespace {

/// Horner evaluation; coefficients in ascending order of degree.
double poly_eval(const std::vector<double>& coef, double x) {
    double acc = 0.0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double poly_deriv(const std::vector<double>& coef, double x) {
    double acc = 0.0;
    for (std::size_t k = coef.size() - 1; k >= 1; --k) acc = acc * x + static_cast<double>(k) * coef[k];
    return acc;
}

double bisect(const std::vector<double>& coef, double lo, double hi) {
    double flo = poly_eval(coef, lo);
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(coef, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

namespace {
constexpr double kEndpointMargin = 1e-9;
}  // namespace

std::vector<double> pd_quartic_roots(const Matrix& A, double c) {
    const auto [a, b] = payoff_difference_coefficients(A);
    std::vector<double> coef{c, b * b, 2.0 * a * b - b * b, a * a - 2.0 * a * b, -a * a};

    double scale = 0.0;
    for (double v : coef) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {};
    while (coef.size() > 1 && std::abs(coef.back()) <= 1e-14 * scale) coef.pop_back();
    const auto degree = static_cast<Eigen::Index>(coef.size() - 1);
    if (degree == 0) return {};

    // Companion matrix of the monic polynomial.
    Matrix companion = Matrix::Zero(degree, degree);
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -coef[static_cast<std::size_t>(i)] / coef.back();
    Eigen::EigenSolver<Matrix> es(companion, false);

    std::vector<double> candidates;
    for (Eigen::Index i = 0; i < degree; ++i) {
        const auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z))) candidates.push_back(z.real());
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double r = candidates[i];
        double left = i > 0 ? 0.5 * (candidates[i - 1] + r) : r - 1e-3;
        double right = i + 1 < candidates.size() ? 0.5 * (r + candidates[i + 1]) : r + 1e-3;
        left = std::max(left, r - 1e-3);
        right = std::min(right, r + 1e-3);

        double root = r;
        if (left < right && (poly_eval(coef, left) < 0.0) != (poly_eval(coef, right) < 0.0)) {
            root = bisect(coef, left, right);
        } else {
            // Tangential (double) root or spurious candidate: Newton polish, keep only true zeros.
            for (int it = 0; it < 50; ++it) {
                const double d = poly_deriv(coef, root);
                if (d == 0.0) break;
                const double step = poly_eval(coef, root) / d;
                root -= step;
                if (std::abs(step) < 1e-15) break;
            }
            if (std::abs(poly_eval(coef, root)) > 1e-12 * scale) continue;
        }
        // Endpoint zeros (c = 0) come back smeared by rounding; the open interval excludes them.
        if (root <= kEndpointMargin || root >= 1.0 - kEndpointMargin) continue;
        if (!roots.empty() && std::abs(root - roots.back()) <= 1e-10) continue;
        roots.push_back(root);
    }
    return roots;
}

std::string to_string(OrbitVerdict v) { return v == OrbitVerdict::periodic ? "periodic" : "not-detected"; }

PeriodicOrbitReport detect_periodic_orbit(const Matrix& A, double c, double dt, double t_max) {
    if (!(c < 0.0)) throw ArgumentError("detect_periodic_orbit: energy level must be negative");
    if (!(dt > 0.0) || !(t_max > 0.0)) throw ArgumentError("detect_periodic_orbit: dt and t_max must be positive");

    PeriodicOrbitReport report;
    report.c = c;
    report.turning_points = pd_quartic_roots(A, c);
    if (report.turning_points.size() != 2) return report;

    const FitnessModel f = FitnessModel::linear(A);
    const double start = report.turning_points.front();
    PhaseState z{Vector::Constant(1, start), Vector::Zero(1)};
    int crossings = 0;
    double prev_sign = 0.0;
    const auto max_steps = static_cast<std::size_t>(std::ceil(t_max / dt));
    for (std::size_t k = 1; k <= max_steps; ++k) {
        PhaseState next = checked_step(f, z, dt, HamiltonianMethod::implicit_midpoint, k);
        const double p_prev = z.p[0];
        const double p_next = next.p[0];
        if (prev_sign == 0.0) {
            prev_sign = p_next > 0.0 ? 1.0 : (p_next < 0.0 ? -1.0 : 0.0);
        } else if (p_next == 0.0 || (p_next > 0.0) != (prev_sign > 0.0)) {
            ++crossings;
            prev_sign = -prev_sign;
            if (crossings == 2) {
                const double theta = p_prev / (p_prev - p_next);
                const double y_cross = z.y[0] + theta * (next.y[0] - z.y[0]);
                report.return_distance = std::abs(y_cross - start);
                report.period_estimate = (static_cast<double>(k - 1) + theta) * dt;
                if (*report.return_distance <= kReturnTol) report.verdict = OrbitVerdict::periodic;
                return report;
            }
        }
        z = std::move(next);
    }
    return report;
}

Matrix svirezhev_condition_defect(const Matrix& M, const Matrix& A) {
    if (M.rows() != M.cols() || A.rows() != A.cols() || M.rows() != A.rows())
        throw ArgumentError("svirezhev_condition_defect: dimension mismatch");
    const Matrix MA = M * A;
    return (MA.transpose() - MA) * A;
}

}  // namespace replicator
