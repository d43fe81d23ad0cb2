#pragma once

#include "replicator/core.hpp"

#include <cstdint>
#include <vector>

namespace replicator {

/// A probability vector: nonnegative entries summing to one.
///
/// Construction validates the input and renormalizes it so the entries sum to
/// one to within rounding. Inputs that are off the simplex by more than
/// `tolerance` (in sum or in negative entries) are rejected with ArgumentError.
class SimplexPoint {
public:
    explicit SimplexPoint(Vector x, double tolerance = 1e-9);

    /// Uniform point (1/n, ..., 1/n).
    static SimplexPoint barycenter(Eigen::Index n);

    Eigen::Index dim() const noexcept { return x_.size(); }
    const Vector& values() const noexcept { return x_; }
    double operator[](Eigen::Index i) const { return x_[i]; }

    double min_coord() const { return x_.minCoeff(); }
    bool is_interior(double eps = kInteriorEps) const { return x_.minCoeff() >= eps; }

private:
    Vector x_;
};

/// A vector in the tangent space of the simplex (entries sum to zero).
class TangentVector {
public:
    /// Rejects vectors whose entries do not sum to zero within 1e-10 (relative
    /// to the 1-norm when that exceeds one).
    explicit TangentVector(Vector v);

    static TangentVector zero(Eigen::Index n) { return TangentVector(Vector::Zero(n)); }

    Eigen::Index dim() const noexcept { return v_.size(); }
    const Vector& values() const noexcept { return v_; }
    double operator[](Eigen::Index i) const { return v_[i]; }

private:
    Vector v_;
};

/// Throws DomainError unless every coordinate is at least kInteriorEps.
void require_interior(const Vector& x, const char* what);
inline void require_interior(const SimplexPoint& x, const char* what) { require_interior(x.values(), what); }

/// Drop-last chart: y = (x_1, ..., x_{n-1}) and x_n = 1 - sum(y).
namespace chart {

Vector project(const SimplexPoint& x);
/// Ambient point for local coordinates; no validation.
Vector lift_raw(const Vector& y);
SimplexPoint lift(const Vector& y);
/// Tangent vector for a local velocity: v_n = -sum(ydot).
TangentVector lift_velocity(const Vector& ydot);

}  // namespace chart

/// Fisher-Rao-Shahshahani inner product sum_i v_i w_i / x_i at an interior point.
double frs_inner(const SimplexPoint& x, const TangentVector& v, const TangentVector& w);

/// FRS metric in drop-last local coordinates: g_ij = delta_ij / y_i + 1 / (1 - sum y).
Matrix frs_local_metric(const Vector& y);

/// Inverse of frs_local_metric in closed form: diag(y) - y y^T.
Matrix frs_local_metric_inverse(const Vector& y);

/// `count` points drawn uniformly from the simplex (flat Dirichlet through
/// normalized standard exponentials), clamped to kInteriorEps and renormalized.
/// The sequence depends only on (n, count, seed).
std::vector<SimplexPoint> sample_interior(Eigen::Index n, std::size_t count, std::uint64_t seed);

/// Orthogonal projection onto the tangent space: u - mean(u) e.
TangentVector project_tangent(const Vector& u);

}  // namespace replicator
