#pragma once

#include "replicator/core.hpp"
#include "replicator/fitness.hpp"
#include "replicator/parallel.hpp"
#include "replicator/simplex.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace replicator {

/// Relative singular-value threshold for numerical rank.
inline constexpr double kRankTol = 1e-8;

/// Driftless replicator control system x' = sum_k u_k hat(f_k)(x).
class ControlSystem {
public:
    explicit ControlSystem(std::vector<FitnessModel> fitness_maps);

    Eigen::Index dim() const noexcept { return maps_.front().dim(); }
    const std::vector<FitnessModel>& fitness_maps() const noexcept { return maps_; }

    /// Velocity for control values u (one per fitness map).
    TangentVector velocity(const SimplexPoint& x, const Vector& u) const;

private:
    std::vector<FitnessModel> maps_;
};

struct SpanTestReport {
    SimplexPoint point;
    /// Columns are hat(f_i, x).
    Matrix fields;
    /// Singular values of the fields expressed in an orthonormal tangent basis.
    Vector singular_values;
    int rank = 0;
    bool spans = false;
    /// Coefficients c with sum_i c_i hat(f_i, x) ~ 0 when the columns are
    /// dependent; empty otherwise.
    Vector null_combination;
};

SpanTestReport span_test(const std::vector<FitnessModel>& fields, const SimplexPoint& x, double tol_rank = kRankTol);

/// G = [Bx, BAx, ..., BA^{n-1}x] with A = diag(a).
Matrix build_G(const Matrix& B, const Vector& a, const SimplexPoint& x);

/// Vandermonde matrix [e, a, a^2, ..., a^{cols-1}] (rows indexed by entries of a).
Matrix vandermonde(const Vector& a, Eigen::Index cols);

/// Vandermonde data for the constant + linear controllability argument.
/// Index k below is zero-based: minor k drops column a^k.
struct VandermondeBundle {
    Vector a;
    Matrix V;
    /// det of the (n-1)x(n-1) Vandermonde of a_1..a_{n-1}.
    double det_v_tilde = 0.0;
    /// det of V with column k and the last row removed.
    std::vector<double> minor_dets;
    /// Left null vectors r_k of V with column k removed, scaled so the last entry is -1.
    std::vector<Vector> r_rows;
    /// Rows r_k stacked.
    Matrix R;
    double sigma_min_R = 0.0;
    double sigma_max_R = 0.0;
};

/// Builds and validates the bundle. Throws HypothesisError naming the failed
/// assumption ("a not positive", "a not distinct", or an invariant violation).
VandermondeBundle vandermonde_bundle(const Vector& a);

/// e_m(values): elementary symmetric polynomial.
double elementary_symmetric(const Vector& values, int m);

struct SchurMinorReport {
    std::vector<double> minors;            // |det V~_k|
    std::vector<double> elementary;        // e_{n-1-k}(a_1..a_{n-1}) for zero-based k
    std::vector<double> relative_errors;   // | |det V~_k| - |det V~| e | / (|det V~| e)
    double max_relative_error = 0.0;
    bool all_positive = false;
};

/// Checks |det V~_k| = |det V~| * e_{n-1-k}(a_1, ..., a_{n-1}) for every k. Requires n <= 8.
SchurMinorReport schur_minor_identity(const Vector& a);

/// Iterated brackets of the seeds, breadth first: level d holds {s, m} for every
/// seed s and every map m of level d-1. Generated maps that are componentwise
/// uniform, or equal to an earlier map modulo uniform maps, are dropped
/// (checked at 25 fixed interior points with tolerance 1e-8). Seeds are kept
/// as given. Brackets of two Generator maps use the closed-form commutator.
std::vector<FitnessModel> generate_bracket_closure(const std::vector<FitnessModel>& seeds, int depth);

struct HypothesisCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SampleCheck {
    SimplexPoint point;
    /// One-based index k maximizing |r_k diag(x)^{-1} B^{-1} e|.
    int chosen_k = 0;
    double key_value = 0.0;
    int rank = 0;
    bool spans = false;
};

enum class ControllabilityVerdict { controllable, not_verified, hypotheses_failed };

std::string to_string(ControllabilityVerdict v);

struct ControllabilityReport {
    std::string label = "sampled sufficient-condition check";
    std::vector<HypothesisCheck> hypotheses;
    std::optional<VandermondeBundle> bundle;
    std::vector<SampleCheck> samples;
    ControllabilityVerdict verdict = ControllabilityVerdict::hypotheses_failed;

    bool hypotheses_hold() const;
};

/// Lower bound on |r_k diag(x)^{-1} B^{-1} e| for the key step to count as nonzero.
inline constexpr double kKeyStepTol = 1e-9;
/// B is treated as singular above this 2-norm condition number.
inline constexpr double kSingularCond = 1e12;

/// Sampled check of the constant (a) + linear (B) controllability conditions.
/// Never throws for hypothesis failures; they are recorded in the report.
ControllabilityReport controllability_verdict(const Vector& a, const Matrix& B, std::size_t num_samples,
                                              std::uint64_t seed, ExecPolicy policy = ExecPolicy::parallel);

}  // namespace replicator
