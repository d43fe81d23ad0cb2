#pragma once

#include "replicator/core.hpp"
#include "replicator/fitness.hpp"
#include "replicator/parallel.hpp"
#include "replicator/simplex.hpp"

#include <functional>
#include <string>
#include <vector>

namespace replicator {

/// Largest negative coordinate an integration step may produce before it is
/// treated as leaving the simplex.
inline constexpr double kClampTol = 1e-8;

enum class StepMethod { rk4, midpoint };

std::string to_string(StepMethod m);
StepMethod parse_step_method(const std::string& name);

struct Trajectory {
    std::vector<double> times;
    std::vector<SimplexPoint> states;
    std::string method;
    double dt = 0.0;

    std::size_t size() const noexcept { return states.size(); }
    const SimplexPoint& back() const { return states.back(); }
};

/// A simplex-preserving vector field x -> Phi(x), evaluated on ambient points.
struct SimplexField {
    Eigen::Index dim = 0;
    VectorMap eval;

    /// Evaluates at a simplex point and checks tangency.
    TangentVector operator()(const SimplexPoint& x) const;
};

/// The replicator field x -> hat(f, x).
SimplexField replicator_field(const FitnessModel& f);

/// Fixed-step integration of x' = hat(f, x) from x0 over [0, t_end].
///
/// After every step negative coordinates no larger than kClampTol in magnitude
/// are set to zero and the state is renormalized; a larger violation throws
/// IntegrationError carrying the step index. The number of steps is
/// round(t_end / dt), so the final time is within dt/2 of t_end.
Trajectory integrate_replicator(const FitnessModel& f, const SimplexPoint& x0, double dt, double t_end,
                                StepMethod method = StepMethod::rk4);

/// Fitness whose replicator field is Phi on the interior: f^i = Phi^i / x_i.
/// Its mean fitness is sum_i Phi^i = 0.
FitnessModel fitness_from_field(const SimplexField& phi);

/// Jacobi-Lie bracket [X,Y] = (dY/dx) X - (dX/dx) Y by central differences
/// along X and Y, projected onto the tangent space. Independent of r_bracket.
TangentVector jacobi_lie_bracket_fd(const SimplexField& X, const SimplexField& Y, const SimplexPoint& x,
                                    double h = kFdStep);

/// Per-sample infinity norms of [hat f, hat g] - hat({f,g}_R).
std::vector<double> homomorphism_residuals(const FitnessModel& f, const FitnessModel& g,
                                           const std::vector<SimplexPoint>& samples,
                                           ExecPolicy policy = ExecPolicy::parallel);

/// Maximum of homomorphism_residuals.
double homomorphism_residual(const FitnessModel& f, const FitnessModel& g, const std::vector<SimplexPoint>& samples,
                             ExecPolicy policy = ExecPolicy::parallel);

}  // namespace replicator
