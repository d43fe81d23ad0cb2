#include "replicator/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace replicator {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_square(const Matrix& M, const char* what) {
    if (M.rows() != M.cols() || M.rows() < 1) {
        std::ostringstream os;
        os << what << ": expected a nonempty square matrix, got " << M.rows() << "x" << M.cols();
        throw ArgumentError(os.str());
    }
    if (!M.allFinite()) throw ArgumentError(std::string(what) + ": matrix has non-finite entries");
}

double column_sum_tolerance(const Matrix& M) { return 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()); }

void check_column_sums(const Matrix& R, const char* what) {
    const Eigen::RowVectorXd sums = R.colwise().sum();
    const double tol = column_sum_tolerance(R);
    for (Eigen::Index j = 0; j < sums.size(); ++j) {
        if (std::abs(sums[j]) > tol) {
            std::ostringstream os;
            os << what << ": column " << j << " sums to " << sums[j] << ", expected 0";
            throw ArgumentError(os.str());
        }
    }
}

void check_dim(const Vector& x, Eigen::Index n, const char* what) {
    if (x.size() != n) {
        std::ostringstream os;
        os << what << ": point has dimension " << x.size() << ", model has " << n;
        throw ArgumentError(os.str());
    }
}

void require_positive(const Vector& x, const char* what) {
    if (x.minCoeff() < kInteriorEps) {
        std::ostringstream os;
        os << what << ": generator fitness is undefined at the boundary (min coordinate " << x.minCoeff() << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

FitnessModel::FitnessModel(Eigen::Index dim, Repr repr)
    : dim_(dim), repr_(std::make_shared<const Repr>(std::move(repr))) {}

FitnessModel FitnessModel::constant(Vector a) {
    if (a.size() < 1 || !a.allFinite()) throw ArgumentError("constant fitness: expected a finite nonempty vector");
    const auto n = a.size();
    return FitnessModel(n, Constant{std::move(a)});
}

FitnessModel FitnessModel::linear(Matrix B) {
    check_square(B, "linear fitness");
    const auto n = B.rows();
    return FitnessModel(n, Linear{std::move(B)});
}

FitnessModel FitnessModel::generator(Matrix R, GeneratorCheck check) {
    check_square(R, "generator fitness");
    check_column_sums(R, "generator fitness");
    if (check == GeneratorCheck::markov) {
        for (Eigen::Index i = 0; i < R.rows(); ++i)
            for (Eigen::Index j = 0; j < R.cols(); ++j)
                if (i != j && R(i, j) < 0.0) {
                    std::ostringstream os;
                    os << "generator fitness: off-diagonal entry (" << i << "," << j << ") = " << R(i, j)
                       << " is negative";
                    throw ArgumentError(os.str());
                }
    }
    const auto n = R.rows();
    return FitnessModel(n, Generator{std::move(R)});
}

FitnessModel FitnessModel::custom(Eigen::Index dim, VectorMap eval, MatrixMap jac, std::string label,
                                  CurvatureMap curvature) {
    if (dim < 1) throw ArgumentError("custom fitness: dimension must be positive");
    if (!eval) throw ArgumentError("custom fitness: evaluation function is empty");
    return FitnessModel(dim, Custom{std::move(eval), std::move(jac), std::move(curvature), std::move(label)});
}

FitnessModel::Kind FitnessModel::kind() const noexcept {
    return std::visit(overloaded{[](const Constant&) { return Kind::constant; },
                                 [](const Linear&) { return Kind::linear; },
                                 [](const Generator&) { return Kind::generator; },
                                 [](const Custom&) { return Kind::custom; }},
                      *repr_);
}

std::string FitnessModel::label() const {
    return std::visit(overloaded{[](const Constant&) { return std::string("constant"); },
                                 [](const Linear&) { return std::string("linear"); },
                                 [](const Generator&) { return std::string("generator"); },
                                 [](const Custom& c) { return c.label; }},
                      *repr_);
}

bool FitnessModel::has_curvature() const noexcept {
    const auto* c = as_custom();
    return c == nullptr || static_cast<bool>(c->curvature);
}

Vector FitnessModel::value_at(const Vector& x) const {
    check_dim(x, dim_, "fitness evaluation");
    return std::visit(overloaded{[](const Constant& c) -> Vector { return c.a; },
                                 [&](const Linear& l) -> Vector { return l.B * x; },
                                 [&](const Generator& g) -> Vector {
                                     require_positive(x, "fitness evaluation");
                                     return (g.R * x).cwiseQuotient(x);
                                 },
                                 [&](const Custom& c) -> Vector {
                                     Vector v = c.eval(x);
                                     if (v.size() != dim_) throw ArgumentError("custom fitness returned wrong dimension");
                                     return v;
                                 }},
                      *repr_);
}

Matrix FitnessModel::jacobian_at(const Vector& x) const {
    check_dim(x, dim_, "fitness jacobian");
    return std::visit(overloaded{[&](const Constant&) -> Matrix { return Matrix::Zero(dim_, dim_); },
                                 [](const Linear& l) -> Matrix { return l.B; },
                                 [&](const Generator& g) -> Matrix {
                                     require_positive(x, "fitness jacobian");
                                     const Vector inv = x.cwiseInverse();
                                     Matrix J = inv.asDiagonal() * g.R;
                                     J.diagonal() -= (g.R * x).cwiseProduct(inv).cwiseProduct(inv);
                                     return J;
                                 },
                                 [&](const Custom& c) -> Matrix {
                                     if (c.jac) return c.jac(x);
                                     return fd_jacobian(c.eval, x);
                                 }},
                      *repr_);
}

Vector FitnessModel::hat_at(const Vector& x) const {
    if (const auto* g = as_generator()) {
        check_dim(x, dim_, "replicator field");
        return g->R * x;
    }
    const Vector f = value_at(x);
    const double mean = x.dot(f);
    return x.cwiseProduct(f.array().matrix() - Vector::Constant(dim_, mean));
}

Matrix FitnessModel::hat_jacobian_at(const Vector& x) const {
    if (const auto* g = as_generator()) {
        check_dim(x, dim_, "replicator field jacobian");
        return g->R;
    }
    const Vector f = value_at(x);
    const Matrix J = jacobian_at(x);
    const double mean = x.dot(f);
    const Vector mean_grad = f + J.transpose() * x;
    Matrix H = J - Vector::Ones(dim_) * mean_grad.transpose();
    H = x.asDiagonal() * H;
    H.diagonal().array() += f.array() - mean;
    return H;
}

std::optional<Matrix> FitnessModel::curvature_at(const Vector& x, const Vector& v) const {
    check_dim(x, dim_, "fitness curvature");
    check_dim(v, dim_, "fitness curvature");
    return std::visit(overloaded{[&](const Constant&) -> std::optional<Matrix> { return Matrix::Zero(dim_, dim_); },
                                 [&](const Linear&) -> std::optional<Matrix> { return Matrix::Zero(dim_, dim_); },
                                 [&](const Generator& g) -> std::optional<Matrix> {
                                     require_positive(x, "fitness curvature");
                                     const Vector inv = x.cwiseInverse();
                                     const Vector inv2 = inv.cwiseProduct(inv);
                                     // d/dx_k of R_ij/x_i - delta_ij (Rx)_i/x_i^2, contracted with v_k.
                                     const Vector scale = v.cwiseProduct(inv2);
                                     Matrix M = -(scale.asDiagonal() * g.R);
                                     const Vector Rv = g.R * v;
                                     const Vector Rx = g.R * x;
                                     M.diagonal() += -Rv.cwiseProduct(inv2) +
                                                     2.0 * v.cwiseProduct(Rx).cwiseProduct(inv2).cwiseProduct(inv);
                                     return M;
                                 },
                                 [&](const Custom& c) -> std::optional<Matrix> {
                                     if (!c.curvature) return std::nullopt;
                                     return c.curvature(x, v);
                                 }},
                      *repr_);
}

Matrix fd_jacobian(const VectorMap& f, const Vector& x, double h) {
    const auto n = x.size();
    Matrix J(n, n);
    Vector xp = x;
    Vector xm = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double step = x[j] > 0.0 ? std::min(h, 0.5 * x[j]) : h;
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        const Vector fp = f(xp);
        const Vector fm = f(xm);
        if (fp.size() != n || fm.size() != n) throw ArgumentError("fd_jacobian: map returned wrong dimension");
        J.col(j) = (fp - fm) / (2.0 * step);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return J;
}

Vector evaluate(const FitnessModel& f, const SimplexPoint& x) {
    if (f.kind() == FitnessModel::Kind::generator) require_interior(x, "evaluate");
    return f.value_at(x.values());
}

double mean_fitness(const FitnessModel& f, const SimplexPoint& x) { return x.values().dot(evaluate(f, x)); }

TangentVector hat(const FitnessModel& f, const SimplexPoint& x) {
    // Re-project to absorb rounding in the mean; the field is tangent analytically.
    return project_tangent(f.hat_at(x.values()));
}

Matrix jacobian(const FitnessModel& f, const SimplexPoint& x) {
    require_interior(x, "jacobian");
    return f.jacobian_at(x.values());
}

FitnessModel combine(double a, const FitnessModel& f, double b, const FitnessModel& g) {
    if (f.dim() != g.dim()) throw ArgumentError("combine: dimension mismatch");
    auto eval = [a, b, f, g](const Vector& x) -> Vector { return a * f.value_at(x) + b * g.value_at(x); };
    auto jac = [a, b, f, g](const Vector& x) -> Matrix { return a * f.jacobian_at(x) + b * g.jacobian_at(x); };
    CurvatureMap curv;
    if (f.has_curvature() && g.has_curvature())
        curv = [a, b, f, g](const Vector& x, const Vector& v) -> Matrix {
            return a * *f.curvature_at(x, v) + b * *g.curvature_at(x, v);
        };
    std::ostringstream label;
    label << a << "*" << f.label() << " + " << b << "*" << g.label();
    return FitnessModel::custom(f.dim(), std::move(eval), std::move(jac), label.str(), std::move(curv));
}

FitnessModel hadamard(const FitnessModel& f, const FitnessModel& g) {
    if (f.dim() != g.dim()) throw ArgumentError("hadamard: dimension mismatch");
    auto eval = [f, g](const Vector& x) -> Vector { return f.value_at(x).cwiseProduct(g.value_at(x)); };
    auto jac = [f, g](const Vector& x) -> Matrix {
        return g.value_at(x).asDiagonal() * f.jacobian_at(x) + f.value_at(x).asDiagonal() * g.jacobian_at(x);
    };
    return FitnessModel::custom(f.dim(), std::move(eval), std::move(jac), f.label() + ".*" + g.label());
}

FitnessModel uniform_field(Eigen::Index dim, std::function<double(const Vector&)> alpha,
                           std::function<Vector(const Vector&)> grad, std::string label) {
    if (!alpha) throw ArgumentError("uniform_field: scalar field is empty");
    auto eval = [dim, alpha](const Vector& x) -> Vector { return Vector::Constant(dim, alpha(x)); };
    MatrixMap jac;
    if (grad)
        jac = [dim, grad](const Vector& x) -> Matrix { return Vector::Ones(dim) * grad(x).transpose(); };
    return FitnessModel::custom(dim, std::move(eval), std::move(jac), std::move(label));
}

FitnessModel r_bracket(const FitnessModel& f, const FitnessModel& g) {
    if (f.dim() != g.dim()) throw ArgumentError("r_bracket: dimension mismatch");
    // Two generators close on their commutator; skip the lazy form.
    if (f.as_generator() && g.as_generator()) return r_bracket_generator(f.as_generator()->R, g.as_generator()->R);
    auto eval = [f, g](const Vector& x) -> Vector {
        return g.jacobian_at(x) * f.hat_at(x) - f.jacobian_at(x) * g.hat_at(x);
    };
    MatrixMap jac;
    if (f.has_curvature() && g.has_curvature()) {
        jac = [f, g](const Vector& x) -> Matrix {
            const Vector hf = f.hat_at(x);
            const Vector hg = g.hat_at(x);
            return *g.curvature_at(x, hf) + g.jacobian_at(x) * f.hat_jacobian_at(x) - *f.curvature_at(x, hg) -
                   f.jacobian_at(x) * g.hat_jacobian_at(x);
        };
    }
    return FitnessModel::custom(f.dim(), std::move(eval), std::move(jac), "{" + f.label() + "," + g.label() + "}");
}

FitnessModel r_bracket_generator(const Matrix& A, const Matrix& B) {
    check_square(A, "r_bracket_generator");
    check_square(B, "r_bracket_generator");
    if (A.rows() != B.rows()) throw ArgumentError("r_bracket_generator: dimension mismatch");
    check_column_sums(A, "r_bracket_generator");
    check_column_sums(B, "r_bracket_generator");
    Matrix C = B * A - A * B;
    // Column sums vanish exactly in exact arithmetic; remove the rounding residue.
    C.row(C.rows() - 1) -= C.colwise().sum();
    return FitnessModel::generator(std::move(C), FitnessModel::GeneratorCheck::column_sums_only);
}

double uniformity_defect(const FitnessModel& f, const std::vector<SimplexPoint>& samples) {
    if (samples.empty()) throw ArgumentError("uniformity test needs at least one sample");
    double worst = 0.0;
    for (const auto& x : samples) {
        const Vector v = evaluate(f, x);
        worst = std::max(worst, v.maxCoeff() - v.minCoeff());
    }
    return worst;
}

bool is_componentwise_uniform(const FitnessModel& f, const std::vector<SimplexPoint>& samples, double tol) {
    return uniformity_defect(f, samples) <= tol;
}

void BracketReport::refresh_max() {
    max_residual = 0.0;
    for (const auto* list : {&skew, &linearity, &jacobi, &homomorphism})
        for (double r : *list) max_residual = std::max(max_residual, r);
}

BracketReport bracket_axiom_report(const FitnessModel& f, const FitnessModel& g, const FitnessModel& h,
                                   const std::vector<SimplexPoint>& samples, double tol, ExecPolicy policy) {
    if (f.dim() != g.dim() || g.dim() != h.dim()) throw ArgumentError("bracket_axiom_report: dimension mismatch");
    if (samples.empty()) throw ArgumentError("bracket_axiom_report: no samples");

    const FitnessModel fg = r_bracket(f, g);
    const FitnessModel gf = r_bracket(g, f);
    const FitnessModel hg = r_bracket(h, g);
    const FitnessModel combo_g = r_bracket(combine(kLinearityProbeA, f, kLinearityProbeB, h), g);
    const FitnessModel jac1 = r_bracket(f, r_bracket(g, h));
    const FitnessModel jac2 = r_bracket(g, r_bracket(h, f));
    const FitnessModel jac3 = r_bracket(h, fg);

    BracketReport report;
    report.samples = samples;
    report.tolerance = tol;
    report.skew.resize(samples.size());
    report.linearity.resize(samples.size());
    report.jacobi.resize(samples.size());

    for_each_index(samples.size(), policy, [&](std::size_t i) {
        const SimplexPoint& x = samples[i];
        require_interior(x, "bracket_axiom_report");
        const Vector& p = x.values();
        const Vector vfg = fg.value_at(p);
        report.skew[i] = (vfg + gf.value_at(p)).lpNorm<Eigen::Infinity>();
        report.linearity[i] =
            (combo_g.value_at(p) - kLinearityProbeA * vfg - kLinearityProbeB * hg.value_at(p)).lpNorm<Eigen::Infinity>();
        report.jacobi[i] = (jac1.value_at(p) + jac2.value_at(p) + jac3.value_at(p)).lpNorm<Eigen::Infinity>();
    });
    report.refresh_max();
    return report;
}

}  // namespace replicator
