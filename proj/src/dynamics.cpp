#include "replicator/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace replicator {

std::string to_string(StepMethod m) { return m == StepMethod::rk4 ? "rk4" : "midpoint"; }

StepMethod parse_step_method(const std::string& name) {
    if (name == "rk4") return StepMethod::rk4;
    if (name == "midpoint") return StepMethod::midpoint;
    throw ArgumentError("unknown integration method '" + name + "' (expected rk4 or midpoint)");
}

TangentVector SimplexField::operator()(const SimplexPoint& x) const {
    if (x.dim() != dim) throw ArgumentError("simplex field: dimension mismatch");
    return TangentVector(eval(x.values()));
}

SimplexField replicator_field(const FitnessModel& f) {
    return SimplexField{f.dim(), [f](const Vector& x) { return f.hat_at(x); }};
}

namespace {

Vector rk4_step(const FitnessModel& f, const Vector& x, double dt) {
    const Vector k1 = f.hat_at(x);
    const Vector k2 = f.hat_at(x + 0.5 * dt * k1);
    const Vector k3 = f.hat_at(x + 0.5 * dt * k2);
    const Vector k4 = f.hat_at(x + dt * k3);
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vector midpoint_step(const FitnessModel& f, const Vector& x, double dt) {
    const Vector k1 = f.hat_at(x);
    return x + dt * f.hat_at(x + 0.5 * dt * k1);
}

}  // namespace

Trajectory integrate_replicator(const FitnessModel& f, const SimplexPoint& x0, double dt, double t_end,
                                StepMethod method) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("integrate_replicator: dt must be positive");
    if (!(t_end >= dt)) throw ArgumentError("integrate_replicator: t_end must be at least dt");
    if (x0.dim() != f.dim()) throw ArgumentError("integrate_replicator: dimension mismatch");

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    Trajectory traj;
    traj.method = to_string(method);
    traj.dt = dt;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    Vector x = x0.values();
    for (std::size_t k = 1; k <= steps; ++k) {
        Vector next;
        try {
            next = method == StepMethod::rk4 ? rk4_step(f, x, dt) : midpoint_step(f, x, dt);
        } catch (const DomainError& e) {
            throw IntegrationError(std::string("integrate_replicator: ") + e.what(), k);
        }
        if (!next.allFinite()) throw IntegrationError("integrate_replicator: non-finite state", k);
        if (next.minCoeff() < -kClampTol) {
            std::ostringstream os;
            os << "integrate_replicator: state left the simplex (coordinate " << next.minCoeff() << ")";
            throw IntegrationError(os.str(), k);
        }
        next = next.cwiseMax(0.0);
        next /= next.sum();
        x = next;
        traj.times.push_back(static_cast<double>(k) * dt);
        traj.states.emplace_back(x);
    }
    return traj;
}

FitnessModel fitness_from_field(const SimplexField& phi) {
    if (!phi.eval) throw ArgumentError("fitness_from_field: empty field");
    auto eval = [phi](const Vector& x) -> Vector {
        require_interior(x, "fitness_from_field");
        return phi.eval(x).cwiseQuotient(x);
    };
    return FitnessModel::custom(phi.dim, std::move(eval), {}, "field-fitness");
}

namespace {

/// Central difference of Y along direction v at x; the step is scaled so the
/// stencil stays inside the simplex interior.
Vector directional_derivative(const SimplexField& Y, const Vector& x, const Vector& v, double h) {
    const double vnorm = v.lpNorm<Eigen::Infinity>();
    if (vnorm == 0.0) return Vector::Zero(x.size());
    const Vector dir = v / vnorm;
    const double s = std::min(h, 0.5 * x.minCoeff());
    return vnorm * (Y.eval(x + s * dir) - Y.eval(x - s * dir)) / (2.0 * s);
}

}  // namespace

TangentVector jacobi_lie_bracket_fd(const SimplexField& X, const SimplexField& Y, const SimplexPoint& x, double h) {
    if (X.dim != x.dim() || Y.dim != x.dim()) throw ArgumentError("jacobi_lie_bracket_fd: dimension mismatch");
    if (!(h > 0.0)) throw ArgumentError("jacobi_lie_bracket_fd: step must be positive");
    require_interior(x, "jacobi_lie_bracket_fd");
    const Vector& p = x.values();
    const Vector xv = X.eval(p);
    const Vector yv = Y.eval(p);
    const Vector bracket = directional_derivative(Y, p, xv, h) - directional_derivative(X, p, yv, h);
    return project_tangent(bracket);
}

std::vector<double> homomorphism_residuals(const FitnessModel& f, const FitnessModel& g,
                                           const std::vector<SimplexPoint>& samples, ExecPolicy policy) {
    if (f.dim() != g.dim()) throw ArgumentError("homomorphism_residual: dimension mismatch");
    const SimplexField X = replicator_field(f);
    const SimplexField Y = replicator_field(g);
    const FitnessModel fg = r_bracket(f, g);
    std::vector<double> out(samples.size());
    for_each_index(samples.size(), policy, [&](std::size_t i) {
        const SimplexPoint& x = samples[i];
        const TangentVector fd = jacobi_lie_bracket_fd(X, Y, x);
        const Vector via_bracket = fg.hat_at(x.values());
        out[i] = (fd.values() - via_bracket).lpNorm<Eigen::Infinity>();
    });
    return out;
}

double homomorphism_residual(const FitnessModel& f, const FitnessModel& g, const std::vector<SimplexPoint>& samples,
                             ExecPolicy policy) {
    if (samples.empty()) throw ArgumentError("homomorphism_residual: no samples");
    const auto r = homomorphism_residuals(f, g, samples, policy);
    return *std::max_element(r.begin(), r.end());
}

}  // namespace replicator
