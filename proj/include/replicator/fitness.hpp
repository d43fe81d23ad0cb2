#pragma once

#include "replicator/core.hpp"
#include "replicator/parallel.hpp"
#include "replicator/simplex.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace replicator {

/// Ambient map R^n -> R^n.
using VectorMap = std::function<Vector(const Vector&)>;
/// Ambient map R^n -> R^{n x n}.
using MatrixMap = std::function<Matrix(const Vector&)>;
/// Second-derivative contraction: (x, v) -> M with M_ij = sum_k d^2 f_i / dx_j dx_k * v_k.
using CurvatureMap = std::function<Matrix(const Vector&, const Vector&)>;

/// A fitness map f: simplex -> R^n.
///
/// Four representations are supported. Constant, Linear and Generator carry
/// their data and have exact derivatives. Custom wraps a closure that must be
/// defined on a neighbourhood of the simplex in R^n (derivatives are ambient);
/// without an explicit Jacobian it is differentiated by central differences.
/// Models are immutable and cheap to copy.
class FitnessModel {
public:
    enum class Kind { constant, linear, generator, custom };

    struct Constant {
        Vector a;
    };
    struct Linear {
        Matrix B;
    };
    /// f(x) = diag(x)^{-1} R x for a matrix R with vanishing column sums.
    struct Generator {
        Matrix R;
    };
    struct Custom {
        VectorMap eval;
        MatrixMap jac;          // empty: central differences
        CurvatureMap curvature; // empty: unavailable
        std::string label;
    };

    /// How strictly `generator` validates its matrix.
    enum class GeneratorCheck {
        markov,           // zero column sums and nonnegative off-diagonals
        column_sums_only  // zero column sums (commutators of generators)
    };

    static FitnessModel constant(Vector a);
    static FitnessModel linear(Matrix B);
    static FitnessModel generator(Matrix R, GeneratorCheck check = GeneratorCheck::markov);
    static FitnessModel custom(Eigen::Index dim, VectorMap eval, MatrixMap jac = {}, std::string label = "custom",
                               CurvatureMap curvature = {});

    Eigen::Index dim() const noexcept { return dim_; }
    Kind kind() const noexcept;
    std::string label() const;

    const Constant* as_constant() const noexcept { return std::get_if<Constant>(repr_.get()); }
    const Linear* as_linear() const noexcept { return std::get_if<Linear>(repr_.get()); }
    const Generator* as_generator() const noexcept { return std::get_if<Generator>(repr_.get()); }
    const Custom* as_custom() const noexcept { return std::get_if<Custom>(repr_.get()); }

    bool has_curvature() const noexcept;

    // Ambient evaluation without simplex validation. The Generator form
    // requires strictly positive coordinates and throws DomainError otherwise.
    Vector value_at(const Vector& x) const;
    Matrix jacobian_at(const Vector& x) const;
    /// Replicator field diag(x)(f - (x^T f) e); R x for the Generator form.
    Vector hat_at(const Vector& x) const;
    /// Jacobian of hat_at.
    Matrix hat_jacobian_at(const Vector& x) const;
    /// Second-derivative contraction; nullopt when unavailable.
    std::optional<Matrix> curvature_at(const Vector& x, const Vector& v) const;

private:
    using Repr = std::variant<Constant, Linear, Generator, Custom>;
    FitnessModel(Eigen::Index dim, Repr repr);

    Eigen::Index dim_ = 0;
    std::shared_ptr<const Repr> repr_;
};

/// Central-difference Jacobian of an ambient map. Steps shrink near the
/// boundary so that x - h e_j keeps coordinate j positive.
Matrix fd_jacobian(const VectorMap& f, const Vector& x, double h = kFdStep);

// ---- Evaluation on the simplex ----------------------------------------------

Vector evaluate(const FitnessModel& f, const SimplexPoint& x);
double mean_fitness(const FitnessModel& f, const SimplexPoint& x);
TangentVector hat(const FitnessModel& f, const SimplexPoint& x);
Matrix jacobian(const FitnessModel& f, const SimplexPoint& x);

// ---- Building new fitness maps ----------------------------------------------

/// a*f + b*g.
FitnessModel combine(double a, const FitnessModel& f, double b, const FitnessModel& g);
/// Componentwise product f .* g.
FitnessModel hadamard(const FitnessModel& f, const FitnessModel& g);
/// alpha(x) e for a scalar field with gradient.
FitnessModel uniform_field(Eigen::Index dim, std::function<double(const Vector&)> alpha,
                           std::function<Vector(const Vector&)> grad, std::string label = "uniform");

/// Replicator bracket {f,g}_R = (dg/dx) hat(f) - (df/dx) hat(g), evaluated lazily.
/// The result has an exact Jacobian when both inputs have curvature information
/// (Constant, Linear, Generator); otherwise it is differentiated numerically.
/// Two Generator inputs return the Generator commutator of r_bracket_generator.
FitnessModel r_bracket(const FitnessModel& f, const FitnessModel& g);

/// Bracket of two Generator maps in closed form: the Generator with matrix BA - AB.
/// Throws ArgumentError unless both matrices have vanishing column sums.
FitnessModel r_bracket_generator(const Matrix& A, const Matrix& B);

/// True iff max over samples of (max_i f^i - min_i f^i) <= tol.
bool is_componentwise_uniform(const FitnessModel& f, const std::vector<SimplexPoint>& samples, double tol);

/// Largest spread max_i f^i - min_i f^i over the samples.
double uniformity_defect(const FitnessModel& f, const std::vector<SimplexPoint>& samples);

// ---- Lie algebra axioms -----------------------------------------------------

struct BracketReport {
    std::vector<SimplexPoint> samples;
    std::vector<double> skew;
    std::vector<double> linearity;
    std::vector<double> jacobi;
    /// Filled by callers that also check the homomorphism identity; empty otherwise.
    std::vector<double> homomorphism;
    double max_residual = 0.0;
    double tolerance = 0.0;

    bool passed() const { return max_residual <= tolerance; }
    /// Recomputes max_residual from the per-point lists.
    void refresh_max();
};

/// Linearity probe coefficients used by bracket_axiom_report.
inline constexpr double kLinearityProbeA = 2.0;
inline constexpr double kLinearityProbeB = -3.0;

/// Per-sample infinity-norm residuals of skew-symmetry, linearity in the first
/// slot ({a f + b h, g} against a{f,g} + b{h,g}) and the Jacobi identity.
BracketReport bracket_axiom_report(const FitnessModel& f, const FitnessModel& g, const FitnessModel& h,
                                   const std::vector<SimplexPoint>& samples, double tol,
                                   ExecPolicy policy = ExecPolicy::parallel);

}  // namespace replicator
