#include "replicator/controllability.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace replicator {

ControlSystem::ControlSystem(std::vector<FitnessModel> fitness_maps) : maps_(std::move(fitness_maps)) {
    if (maps_.empty()) throw ArgumentError("control system needs at least one fitness map");
    for (const auto& f : maps_)
        if (f.dim() != maps_.front().dim()) throw ArgumentError("control system: fitness maps differ in dimension");
}

TangentVector ControlSystem::velocity(const SimplexPoint& x, const Vector& u) const {
    if (u.size() != static_cast<Eigen::Index>(maps_.size())) throw ArgumentError("control system: wrong number of controls");
    Vector v = Vector::Zero(dim());
    for (std::size_t k = 0; k < maps_.size(); ++k) v += u[static_cast<Eigen::Index>(k)] * maps_[k].hat_at(x.values());
    return project_tangent(v);
}

namespace {

/// Orthonormal basis of the tangent space {v : sum v = 0}, as n x (n-1) columns.
Matrix tangent_basis(Eigen::Index n) {
    const Vector e = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    Eigen::HouseholderQR<Matrix> qr(e);
    const Matrix Q = qr.householderQ();
    return Q.rightCols(n - 1);
}

}  // namespace

SpanTestReport span_test(const std::vector<FitnessModel>& fields, const SimplexPoint& x, double tol_rank) {
    if (fields.empty()) throw ArgumentError("span_test: no fields");
    const auto n = x.dim();
    for (const auto& f : fields)
        if (f.dim() != n) throw ArgumentError("span_test: dimension mismatch");
    require_interior(x, "span_test");

    const auto m = static_cast<Eigen::Index>(fields.size());
    SpanTestReport report{x, Matrix(n, m), Vector(), 0, false, Vector()};
    for (Eigen::Index j = 0; j < m; ++j) report.fields.col(j) = hat(fields[static_cast<std::size_t>(j)], x).values();

    const Matrix local = tangent_basis(n).transpose() * report.fields;
    Eigen::JacobiSVD<Matrix> svd(local, Eigen::ComputeFullV);
    report.singular_values = svd.singularValues();
    const double smax = report.singular_values.size() ? report.singular_values.maxCoeff() : 0.0;
    if (smax > 0.0) {
        for (Eigen::Index i = 0; i < report.singular_values.size(); ++i)
            if (report.singular_values[i] > tol_rank * smax) ++report.rank;
    }
    report.spans = report.rank == n - 1;
    if (report.rank < m) report.null_combination = svd.matrixV().col(m - 1);
    return report;
}

Matrix build_G(const Matrix& B, const Vector& a, const SimplexPoint& x) {
    const auto n = a.size();
    if (B.rows() != n || B.cols() != n || x.dim() != n) throw ArgumentError("build_G: dimension mismatch");
    Matrix G(n, n);
    Vector col = x.values();
    for (Eigen::Index k = 0; k < n; ++k) {
        G.col(k) = B * col;
        col = a.cwiseProduct(col);
    }
    return G;
}

Matrix vandermonde(const Vector& a, Eigen::Index cols) {
    Matrix V(a.size(), cols);
    if (cols > 0) V.col(0).setOnes();
    for (Eigen::Index j = 1; j < cols; ++j) V.col(j) = V.col(j - 1).cwiseProduct(a);
    return V;
}

namespace {

Matrix drop_column(const Matrix& M, Eigen::Index k) {
    Matrix out(M.rows(), M.cols() - 1);
    out.leftCols(k) = M.leftCols(k);
    out.rightCols(M.cols() - 1 - k) = M.rightCols(M.cols() - 1 - k);
    return out;
}

void check_vandermonde_hypotheses(const Vector& a) {
    if (a.size() < 2) throw HypothesisError("a too short: need at least 2 entries");
    if (!a.allFinite()) throw HypothesisError("a not finite");
    if (a.minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "a not positive: min entry " << a.minCoeff();
        throw HypothesisError(os.str());
    }
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = i + 1; j < a.size(); ++j)
            if (std::abs(a[i] - a[j]) <= 1e-9) {
                std::ostringstream os;
                os << "a not distinct: a[" << i << "] = a[" << j << "] = " << a[i];
                throw HypothesisError(os.str());
            }
}

}  // namespace

VandermondeBundle vandermonde_bundle(const Vector& a) {
    check_vandermonde_hypotheses(a);
    const auto n = a.size();
    VandermondeBundle b;
    b.a = a;
    b.V = vandermonde(a, n);
    b.det_v_tilde = vandermonde(a.head(n - 1), n - 1).partialPivLu().determinant();
    b.R.resize(n, n);

    for (Eigen::Index k = 0; k < n; ++k) {
        const Matrix Vk = drop_column(b.V, k);
        b.minor_dets.push_back(Vk.topRows(n - 1).partialPivLu().determinant());

        Eigen::JacobiSVD<Matrix> svd(Vk, Eigen::ComputeFullU);
        Vector r = svd.matrixU().col(n - 1);
        if (std::abs(r[n - 1]) <= 1e-14 * r.lpNorm<Eigen::Infinity>())
            throw HypothesisError("vandermonde invariant: left null vector has zero last entry");
        r /= -r[n - 1];

        const double annihilation = (r.transpose() * Vk).lpNorm<Eigen::Infinity>();
        if (annihilation > 1e-10 * Vk.norm() * std::max(1.0, r.lpNorm<Eigen::Infinity>())) {
            std::ostringstream os;
            os << "vandermonde invariant: r_" << k + 1 << " V_" << k + 1 << " = " << annihilation << " is not zero";
            throw HypothesisError(os.str());
        }
        const double pairing = r.dot(b.V.col(k));
        if (std::abs(pairing) <= 1e-12 * r.norm() * b.V.col(k).norm()) {
            std::ostringstream os;
            os << "vandermonde invariant: r_" << k + 1 << " a^" << k << " vanishes";
            throw HypothesisError(os.str());
        }
        b.R.row(k) = r.transpose();
        b.r_rows.push_back(std::move(r));
    }

    Eigen::JacobiSVD<Matrix> svd(b.R);
    b.sigma_max_R = svd.singularValues().maxCoeff();
    b.sigma_min_R = svd.singularValues().minCoeff();
    if (!(b.sigma_min_R > kRankTol * b.sigma_max_R)) {
        std::ostringstream os;
        os << "vandermonde invariant: R is numerically singular (sigma_min " << b.sigma_min_R << ", sigma_max "
           << b.sigma_max_R << ")";
        throw HypothesisError(os.str());
    }
    return b;
}

double elementary_symmetric(const Vector& values, int m) {
    if (m < 0 || m > values.size()) return 0.0;
    std::vector<double> e(static_cast<std::size_t>(m) + 1, 0.0);
    e[0] = 1.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        for (int j = std::min<int>(m, static_cast<int>(i) + 1); j >= 1; --j)
            e[static_cast<std::size_t>(j)] += values[i] * e[static_cast<std::size_t>(j) - 1];
    return e[static_cast<std::size_t>(m)];
}

SchurMinorReport schur_minor_identity(const Vector& a) {
    if (a.size() > 8) throw ArgumentError("schur_minor_identity: supported for n <= 8");
    const VandermondeBundle b = vandermonde_bundle(a);
    const auto n = a.size();
    const Vector head = a.head(n - 1);
    SchurMinorReport report;
    report.all_positive = true;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double minor = std::abs(b.minor_dets[static_cast<std::size_t>(k)]);
        const double e = elementary_symmetric(head, static_cast<int>(n - 1 - k));
        const double predicted = std::abs(b.det_v_tilde) * e;
        report.minors.push_back(minor);
        report.elementary.push_back(e);
        report.all_positive = report.all_positive && e > 0.0;
        const double rel = std::abs(minor - predicted) / std::abs(predicted);
        report.relative_errors.push_back(rel);
        report.max_relative_error = std::max(report.max_relative_error, rel);
    }
    return report;
}

std::vector<FitnessModel> generate_bracket_closure(const std::vector<FitnessModel>& seeds, int depth) {
    if (depth < 0) throw ArgumentError("generate_bracket_closure: depth must be nonnegative");
    if (seeds.empty()) return {};
    const auto n = seeds.front().dim();
    for (const auto& s : seeds)
        if (s.dim() != n) throw ArgumentError("generate_bracket_closure: seeds differ in dimension");

    constexpr double tol = 1e-8;
    const std::vector<SimplexPoint> probe = sample_interior(n, 25, 0x5eedULL);

    std::vector<FitnessModel> closure = seeds;
    std::vector<FitnessModel> frontier = seeds;
    for (int level = 1; level <= depth && !frontier.empty(); ++level) {
        std::vector<FitnessModel> next;
        for (const auto& s : seeds) {
            for (const auto& m : frontier) {
                FitnessModel candidate = (s.as_generator() && m.as_generator())
                                             ? r_bracket_generator(s.as_generator()->R, m.as_generator()->R)
                                             : r_bracket(s, m);
                if (uniformity_defect(candidate, probe) <= tol) continue;
                const bool seen = std::any_of(closure.begin(), closure.end(), [&](const FitnessModel& known) {
                    return uniformity_defect(combine(1.0, candidate, -1.0, known), probe) <= tol;
                });
                if (seen) continue;
                closure.push_back(candidate);
                next.push_back(std::move(candidate));
            }
        }
        frontier = std::move(next);
    }
    return closure;
}

std::string to_string(ControllabilityVerdict v) {
    switch (v) {
        case ControllabilityVerdict::controllable: return "controllable";
        case ControllabilityVerdict::not_verified: return "not-verified";
        case ControllabilityVerdict::hypotheses_failed: return "hypotheses-failed";
    }
    return "unknown";
}

bool ControllabilityReport::hypotheses_hold() const {
    return !hypotheses.empty() &&
           std::all_of(hypotheses.begin(), hypotheses.end(), [](const HypothesisCheck& h) { return h.passed; });
}

ControllabilityReport controllability_verdict(const Vector& a, const Matrix& B, std::size_t num_samples,
                                              std::uint64_t seed, ExecPolicy policy) {
    ControllabilityReport report;
    const auto n = a.size();

    const bool shape_ok = n >= 2 && B.rows() == n && B.cols() == n && B.allFinite() && a.allFinite();
    {
        std::ostringstream os;
        os << "a has " << n << " entries, B is " << B.rows() << "x" << B.cols();
        report.hypotheses.push_back({"dimensions", shape_ok, os.str()});
    }
    if (!shape_ok) return report;

    {
        std::ostringstream os;
        os << "min a = " << a.minCoeff();
        report.hypotheses.push_back({"a positive", a.minCoeff() > 0.0, os.str()});
    }
    {
        double gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(a[i] - a[j]));
        std::ostringstream os;
        os << "min pairwise gap = " << gap;
        report.hypotheses.push_back({"a distinct", gap > 1e-9, os.str()});
    }
    {
        Eigen::JacobiSVD<Matrix> svd(B);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        std::ostringstream os;
        os << "condition number = " << cond;
        report.hypotheses.push_back({"B nonsingular", cond < kSingularCond, os.str()});
    }
    if (!report.hypotheses_hold()) return report;

    try {
        report.bundle = vandermonde_bundle(a);
        report.hypotheses.push_back({"vandermonde invariants", true, "r_k V_k = 0, r_k a^(k-1) != 0, R nonsingular"});
    } catch (const HypothesisError& e) {
        report.hypotheses.push_back({"vandermonde invariants", false, e.what()});
        return report;
    }

    const Vector Binv_e = B.partialPivLu().solve(Vector::Ones(n));
    std::vector<FitnessModel> columns;  // g_k(x) = B A^k x
    {
        Matrix BA = B;
        for (Eigen::Index k = 0; k < n; ++k) {
            columns.push_back(FitnessModel::linear(BA));
            BA = BA * a.asDiagonal();
        }
    }

    const std::vector<SimplexPoint> points = sample_interior(n, std::max<std::size_t>(num_samples, 1), seed);
    report.samples.resize(points.size(), SampleCheck{points.front()});
    const VandermondeBundle& bundle = *report.bundle;
    for_each_index(points.size(), policy, [&](std::size_t i) {
        const SimplexPoint& x = points[i];
        const Vector w = Binv_e.cwiseQuotient(x.values());
        const Vector key = bundle.R * w;
        Eigen::Index best = 0;
        key.cwiseAbs().maxCoeff(&best);

        std::vector<FitnessModel> fields;
        for (Eigen::Index k = 0; k < n; ++k)
            if (k != best) fields.push_back(columns[static_cast<std::size_t>(k)]);
        const SpanTestReport span = span_test(fields, x);

        SampleCheck& out = report.samples[i];
        out.point = x;
        out.chosen_k = static_cast<int>(best) + 1;
        out.key_value = std::abs(key[best]);
        out.rank = span.rank;
        out.spans = span.spans && out.key_value > kKeyStepTol;
    });

    const bool all_span = std::all_of(report.samples.begin(), report.samples.end(),
                                      [](const SampleCheck& s) { return s.spans; });
    report.verdict = all_span ? ControllabilityVerdict::controllable : ControllabilityVerdict::not_verified;
    return report;
}

}  // namespace replicator
