#pragma once

#include "replicator/core.hpp"
#include "replicator/dynamics.hpp"
#include "replicator/fitness.hpp"
#include "replicator/simplex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace replicator {

// ---- Lagrangian side --------------------------------------------------------

/// L(x, v) = <v,v>_FRS + <hat f, hat f>_FRS at an interior point.
double svirezhev_lagrangian(const FitnessModel& f, const SimplexPoint& x, const TangentVector& v);

/// Trapezoidal quadrature of the Lagrangian along a trajectory. Velocities are
/// central differences of the states (second-order one-sided at the ends).
double action_cost(const FitnessModel& f, const Trajectory& traj);

/// Which Lagrange multiplier enforces sum(x) = 1 in the Euler-Lagrange check.
enum class MultiplierRule {
    /// lambda chosen so the componentwise equations sum to sum_i 2 x_i'' (= 0 on the simplex).
    constraint_consistent,
    /// lambda = -2 sum_k x_k (f^k - fbar)^2. Exact for constant fitness only.
    closed_form,
};

struct EulerLagrangeOptions {
    /// Central differences use states k-stride, k, k+stride (step stride*dt).
    /// Wider stencils keep the second difference above rounding noise.
    int stride = 8;
    MultiplierRule multiplier = MultiplierRule::constraint_consistent;
};

/// Largest componentwise defect of
///   2 x_i'' = x_i'^2 / x_i + x_i (f^i - fbar)^2
///             + 2 x_i sum_k x_k (f^k - fbar)(df^k/dx_i - sum_j x_j df^j/dx_i) + x_i lambda
/// along the trajectory, with derivatives from central differences. Replicator
/// solutions give an O(dt^2) defect. Throws ArgumentError with fewer than 3 states.
double euler_lagrange_residual(const FitnessModel& f, const Trajectory& traj, EulerLagrangeOptions opts = {});

// ---- Hamiltonian side (drop-last local coordinates) -------------------------

/// p = 2 G(y) ydot.
Vector legendre_momentum(const Vector& y, const Vector& ydot);
/// ydot = G(y)^{-1} p / 2.
Vector velocity_from_momentum(const Vector& y, const Vector& p);

/// T(y, p) = p^T G^{-1} p / 4.
double kinetic_energy(const Vector& y, const Vector& p);
/// V(y) = -sum_k x_k (f^k - fbar)^2 with x the lifted point.
double potential_energy(const FitnessModel& f, const Vector& y);
/// H = T + V.
double hamiltonian(const FitnessModel& f, const Vector& y, const Vector& p);

struct PhaseVelocity {
    Vector ydot;
    Vector pdot;
};

/// Hamilton's equations. For n = 2 pdot is in closed form; for n > 2 it is a
/// central difference of H in y.
PhaseVelocity hamiltonian_rhs(const FitnessModel& f, const Vector& y, const Vector& p);

/// Costate that makes the Hamiltonian flow reproduce the replicator flow:
/// p = 2 G(y) (hat f)_{1..n-1}, which gives H = 0.
Vector replicator_momentum(const FitnessModel& f, const Vector& y);

enum class HamiltonianMethod { implicit_midpoint, explicit_euler };

std::string to_string(HamiltonianMethod m);

struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<Vector> ys;
    std::vector<Vector> ps;
    std::vector<double> hs;
    HamiltonianMethod method = HamiltonianMethod::implicit_midpoint;
    double dt = 0.0;

    std::size_t size() const noexcept { return times.size(); }
};

/// Implicit midpoint rule solved by fixed-point iteration.
inline constexpr double kMidpointTol = 1e-13;
inline constexpr int kMidpointMaxIter = 50;

/// Fixed-step integration of Hamilton's equations over round(t_end/dt) steps.
/// Records H at every step. Throws IntegrationError (with the step index) if the
/// inner solver does not converge or the state leaves the simplex interior.
PhaseTrajectory integrate_hamiltonian(const FitnessModel& f, const Vector& y0, const Vector& p0, double dt,
                                      double t_end, HamiltonianMethod method = HamiltonianMethod::implicit_midpoint);

/// Return defect for the reverser F(y,p) = (y,-p): flip the final state, run the
/// same number of steps with the trajectory's method and compare with F of the
/// initial state (infinity norm).
double reverser_residual(const FitnessModel& f, const PhaseTrajectory& traj);

// ---- Two-strategy games -----------------------------------------------------

/// Coefficients (a, b) with (Ax)^1 - (Ax)^2 = a x_1 + b for a 2x2 payoff A.
std::pair<double, double> payoff_difference_coefficients(const Matrix& A);

/// Distinct real roots in (0,1) of
///   -a^2 x^4 + (a^2 - 2ab) x^3 + (2ab - b^2) x^2 + b^2 x + c = 0,
/// i.e. the turning points V(x) = c of the n = 2 Hamiltonian flow, ascending.
std::vector<double> pd_quartic_roots(const Matrix& A, double c);

enum class OrbitVerdict { periodic, not_detected };

std::string to_string(OrbitVerdict v);

struct PeriodicOrbitReport {
    double c = 0.0;
    std::vector<double> turning_points;
    OrbitVerdict verdict = OrbitVerdict::not_detected;
    std::optional<double> return_distance;
    std::optional<double> period_estimate;
};

inline constexpr double kReturnTol = 1e-3;

/// Integrates from (r1, 0), r1 the smaller of exactly two turning points, and
/// reports a periodic orbit when the flow crosses p = 0 a second time within
/// kReturnTol of the start before t_max. Requires c < 0.
PeriodicOrbitReport detect_periodic_orbit(const Matrix& A, double c, double dt = 1e-4, double t_max = 50.0);

/// ((M A)^T - M A) A: zero iff x' = Ax is an extremal of the constant-metric
/// Lagrangian with kinetic matrix M.
Matrix svirezhev_condition_defect(const Matrix& M, const Matrix& A);

}  // namespace replicator
