#include "replicator/simplex.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace replicator {

SimplexPoint::SimplexPoint(Vector x, double tolerance) : x_(std::move(x)) {
    if (x_.size() < 1) throw ArgumentError("simplex point must have at least one coordinate");
    if (!x_.allFinite()) throw ArgumentError("simplex point has non-finite coordinates");
    if (x_.minCoeff() < -tolerance) {
        std::ostringstream os;
        os << "simplex point has negative coordinate " << x_.minCoeff();
        throw ArgumentError(os.str());
    }
    x_ = x_.cwiseMax(0.0);
    const double sum = x_.sum();
    if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream os;
        os << "simplex point coordinates sum to " << sum << ", expected 1";
        throw ArgumentError(os.str());
    }
    x_ /= sum;
}

SimplexPoint SimplexPoint::barycenter(Eigen::Index n) {
    if (n < 1) throw ArgumentError("dimension must be positive");
    return SimplexPoint(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

TangentVector::TangentVector(Vector v) : v_(std::move(v)) {
    if (!v_.allFinite()) throw ArgumentError("tangent vector has non-finite entries");
    const double scale = std::max(1.0, v_.lpNorm<1>());
    if (std::abs(v_.sum()) > 1e-10 * scale) {
        std::ostringstream os;
        os << "tangent vector entries sum to " << v_.sum() << ", expected 0";
        throw ArgumentError(os.str());
    }
}

void require_interior(const Vector& x, const char* what) {
    if (x.size() == 0 || x.minCoeff() < kInteriorEps) {
        std::ostringstream os;
        os << what << ": point is not in the simplex interior (min coordinate "
           << (x.size() ? x.minCoeff() : 0.0) << ")";
        throw DomainError(os.str());
    }
}

namespace chart {

Vector project(const SimplexPoint& x) { return x.values().head(x.dim() - 1); }

Vector lift_raw(const Vector& y) {
    Vector x(y.size() + 1);
    x.head(y.size()) = y;
    x[y.size()] = 1.0 - y.sum();
    return x;
}

SimplexPoint lift(const Vector& y) { return SimplexPoint(lift_raw(y)); }

TangentVector lift_velocity(const Vector& ydot) {
    Vector v(ydot.size() + 1);
    v.head(ydot.size()) = ydot;
    v[ydot.size()] = -ydot.sum();
    return TangentVector(std::move(v));
}

}  // namespace chart

double frs_inner(const SimplexPoint& x, const TangentVector& v, const TangentVector& w) {
    if (v.dim() != x.dim() || w.dim() != x.dim()) throw ArgumentError("frs_inner: dimension mismatch");
    require_interior(x, "frs_inner");
    return (v.values().array() * w.values().array() / x.values().array()).sum();
}

Matrix frs_local_metric(const Vector& y) {
    const Vector x = chart::lift_raw(y);
    require_interior(x, "frs_local_metric");
    const auto m = y.size();
    Matrix g = Matrix::Constant(m, m, 1.0 / x[m]);
    g.diagonal().array() += y.array().inverse();
    return g;
}

Matrix frs_local_metric_inverse(const Vector& y) {
    require_interior(chart::lift_raw(y), "frs_local_metric_inverse");
    Matrix inv = -y * y.transpose();
    inv.diagonal() += y;
    return inv;
}

std::vector<SimplexPoint> sample_interior(Eigen::Index n, std::size_t count, std::uint64_t seed) {
    if (n < 2) throw ArgumentError("sample_interior: dimension must be at least 2");
    if (count < 1) throw ArgumentError("sample_interior: count must be at least 1");

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> exp1(1.0);
    std::vector<SimplexPoint> out;
    out.reserve(count);
    Vector x(n);
    for (std::size_t s = 0; s < count; ++s) {
        for (Eigen::Index i = 0; i < n; ++i) x[i] = exp1(rng);
        x /= x.sum();
        // Clamping can push the sum above one; repeat until renormalization keeps every coordinate interior.
        for (int pass = 0; pass < 4 && x.minCoeff() < kInteriorEps; ++pass) {
            x = x.cwiseMax(2.0 * kInteriorEps);
            x /= x.sum();
        }
        out.emplace_back(x);
    }
    return out;
}

TangentVector project_tangent(const Vector& u) {
    if (u.size() == 0) throw ArgumentError("project_tangent: empty vector");
    Vector v = u.array() - u.mean();
    return TangentVector(std::move(v));
}

}  // namespace replicator
