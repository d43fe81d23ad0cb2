#include "replicator/variational.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace replicator;

namespace {

Matrix pd() { return Matrix{{4.0, 0.0}, {5.0, 3.0}}; }
FitnessModel pd_model() { return FitnessModel::linear(pd()); }

const double kXStar = (3.0 - std::sqrt(3.0)) / 4.0;

Vector ch(double v) { return Vector::Constant(1, v); }

// Scalar potential of the PD game written out directly.
double pd_potential(double x) { return -x * (1.0 - x) * (2.0 * x - 3.0) * (2.0 * x - 3.0); }

Trajectory with_sinusoid(const Trajectory& base, double amplitude) {
    Trajectory out = base;
    const double T = base.times.back();
    for (std::size_t k = 0; k < base.size(); ++k) {
        Vector y = chart::project(base.states[k]);
        y[0] += amplitude * std::sin(2.0 * M_PI * base.times[k] / T);
        out.states[k] = chart::lift(y);
    }
    return out;
}

}  // namespace

TEST(Lagrangian, HandExamples) {
    const SimplexPoint x(Vector{{0.5, 0.5}});
    const auto uniform = FitnessModel::constant(Vector::Constant(2, 3.0));
    EXPECT_EQ(svirezhev_lagrangian(uniform, x, TangentVector::zero(2)), 0.0);
    EXPECT_NEAR(svirezhev_lagrangian(pd_model(), x, TangentVector(Vector{{-0.5, 0.5}})), 2.0, 1e-14);
}

TEST(ActionCost, UniformConstantTrajectoryIsFree) {
    const auto uniform = FitnessModel::constant(Vector::Constant(3, 1.0));
    const auto traj = integrate_replicator(uniform, SimplexPoint(Vector{{0.2, 0.3, 0.5}}), 0.1, 1.0);
    EXPECT_NEAR(action_cost(uniform, traj), 0.0, 1e-15);
}

TEST(ActionCost, ReplicatorPathBeatsConstantSpeedPath) {
    const auto f = pd_model();
    const auto traj = integrate_replicator(f, SimplexPoint(Vector{{0.6, 0.4}}), 1e-3, 1.0);
    Trajectory straight = traj;
    const double y0 = traj.states.front()[0], y1v = traj.states.back()[0];
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double s = traj.times[k] / traj.times.back();
        straight.states[k] = chart::lift(ch((1 - s) * y0 + s * y1v));
    }
    EXPECT_LE(action_cost(f, traj), action_cost(f, straight));
}

TEST(EulerLagrange, ReplicatorSolutionHasSmallResidual) {
    const auto traj = integrate_replicator(pd_model(), SimplexPoint(Vector{{0.6, 0.4}}), 1e-4, 1.0);
    EXPECT_LE(euler_lagrange_residual(pd_model(), traj), 1e-4);
}

TEST(EulerLagrange, UniformConstantTrajectory) {
    const auto uniform = FitnessModel::constant(Vector::Constant(3, 2.0));
    const auto traj = integrate_replicator(uniform, SimplexPoint(Vector{{0.2, 0.3, 0.5}}), 1e-2, 1.0);
    EXPECT_LE(euler_lagrange_residual(uniform, traj), 1e-12);
}

TEST(EulerLagrange, PerturbedTrajectoryIsRejected) {
    const auto traj = integrate_replicator(pd_model(), SimplexPoint(Vector{{0.6, 0.4}}), 1e-4, 1.0);
    EXPECT_GT(euler_lagrange_residual(pd_model(), with_sinusoid(traj, 1e-2)), 1e-2);
}

TEST(EulerLagrange, SecondOrderUnderStepHalving) {
    double prev = 0.0;
    for (double dt : {4e-4, 2e-4, 1e-4, 5e-5}) {
        const auto traj = integrate_replicator(pd_model(), SimplexPoint(Vector{{0.6, 0.4}}), dt, 1.0);
        const double r = euler_lagrange_residual(pd_model(), traj);
        if (prev > 0.0) EXPECT_GE(std::log2(prev / r), 1.9) << "dt=" << dt;
        prev = r;
    }
}

TEST(EulerLagrange, TooFewPoints) {
    Trajectory t;
    t.times = {0.0, 0.1};
    t.states = {SimplexPoint::barycenter(2), SimplexPoint::barycenter(2)};
    EXPECT_THROW(euler_lagrange_residual(pd_model(), t), ArgumentError);
}

TEST(Legendre, HandExamples) {
    EXPECT_NEAR(legendre_momentum(ch(0.5), ch(1.0))[0], 8.0, 1e-14);
    EXPECT_EQ(legendre_momentum(ch(0.3), ch(0.0))[0], 0.0);
}

TEST(Legendre, VelocityInvertsMomentum) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector y = oracle::random_interior(4, rng).head(3);
        const Vector v = oracle::random_vector(3, rng);
        EXPECT_LT((velocity_from_momentum(y, legendre_momentum(y, v)) - v).norm(), 1e-12);
    }
}

TEST(Hamiltonian, HandExamples) {
    const auto uniform = FitnessModel::constant(Vector::Ones(2));
    EXPECT_EQ(hamiltonian(uniform, ch(0.3), ch(0.0)), 0.0);
    EXPECT_NEAR(hamiltonian(pd_model(), ch(kXStar), ch(0.0)), pd_potential(kXStar), 1e-14);
    EXPECT_NEAR(pd_potential(kXStar), -1.21202, 1e-5);
    EXPECT_NEAR(hamiltonian(pd_model(), ch(0.6), ch(0.0)), -0.7776, 1e-14);
}

TEST(Hamiltonian, ReplicatorMomentumGivesZeroEnergy) {
    for (double x1 : {0.05, 0.2, 0.5, 0.8, 0.95}) {
        const Vector p = replicator_momentum(pd_model(), ch(x1));
        EXPECT_NEAR(p[0], 2.0 * (2.0 * x1 - 3.0), 1e-12);
        EXPECT_NEAR(hamiltonian(pd_model(), ch(x1), p), 0.0, 1e-13);
    }
}

TEST(Hamiltonian, PotentialShape) {
    const auto f = pd_model();
    EXPECT_NEAR(pd_potential(0.0), 0.0, 0.0);
    EXPECT_NEAR(pd_potential(1.0), 0.0, 0.0);
    double best = 0.0, argbest = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double x = i / 1000.0;
        const double v = potential_energy(f, ch(x));
        EXPECT_LT(v, 0.0);
        if (v < best) best = v, argbest = x;
    }
    EXPECT_NEAR(argbest, kXStar, 1e-3);
}

TEST(HamiltonianRhs, InteriorEquilibrium) {
    const auto rhs = hamiltonian_rhs(pd_model(), ch(kXStar), ch(0.0));
    EXPECT_LE(std::hypot(rhs.ydot[0], rhs.pdot[0]), 1e-10);
}

TEST(HamiltonianRhs, ZeroMomentumGivesPotentialGradient) {
    for (double x : {0.1, 0.4, 0.7}) {
        const auto rhs = hamiltonian_rhs(pd_model(), ch(x), ch(0.0));
        const double h = 1e-6;
        EXPECT_EQ(rhs.ydot[0], 0.0);
        EXPECT_NEAR(rhs.pdot[0], -(pd_potential(x + h) - pd_potential(x - h)) / (2 * h), 1e-8);
    }
}

TEST(HamiltonianRhs, ClosedFormMatchesFiniteDifferencesForTwoStrategies) {
    const auto f = pd_model();
    for (double x : {0.15, 0.45, 0.85})
        for (double p : {-2.0, 0.5, 3.0}) {
            const double h = 1e-6;
            const double fd =
                -(hamiltonian(f, ch(x + h), ch(p)) - hamiltonian(f, ch(x - h), ch(p))) / (2 * h);
            EXPECT_NEAR(hamiltonian_rhs(f, ch(x), ch(p)).pdot[0], fd, 1e-7);
        }
}

TEST(HamiltonianRhs, ThreeStrategyKineticGradient) {
    // With uniform fitness V vanishes, so pdot is minus the analytic gradient of T.
    std::mt19937_64 rng(2);
    const auto uniform = FitnessModel::constant(Vector::Ones(3));
    for (int trial = 0; trial < 20; ++trial) {
        const Vector y = oracle::random_interior(3, rng).head(2);
        const Vector p = oracle::random_vector(2, rng, -2, 2);
        const Vector gradT = 0.25 * (p.cwiseAbs2() - 2.0 * y.dot(p) * p);
        EXPECT_LT((hamiltonian_rhs(uniform, y, p).pdot + gradT).norm(), 1e-6);
        EXPECT_LT((hamiltonian_rhs(uniform, y, p).ydot - velocity_from_momentum(y, p)).norm(), 1e-15);
    }
}

TEST(IntegrateHamiltonian, EnergyConservedAndDriftGrowsSlowly) {
    const auto f = pd_model();
    auto drift = [&](double t_end) {
        const auto traj = integrate_hamiltonian(f, ch(0.6), ch(0.0), 1e-4, t_end);
        double worst = 0.0;
        for (double h : traj.hs) worst = std::max(worst, std::abs(h - traj.hs.front()));
        return worst;
    };
    const double d5 = drift(5.0);
    EXPECT_LE(d5, 1e-4);
    EXPECT_LE(drift(10.0), 2.0 * d5 + 1e-12);
}

TEST(IntegrateHamiltonian, TimeReversal) {
    const auto f = pd_model();
    const auto traj = integrate_hamiltonian(f, ch(0.6), ch(0.0), 1e-3, 2.0);
    EXPECT_LE(reverser_residual(f, traj), 1e-6);
}

TEST(IntegrateHamiltonian, ExplicitEulerBreaksReversibility) {
    const auto f = pd_model();
    const auto traj = integrate_hamiltonian(f, ch(0.6), ch(0.0), 1e-2, 2.0, HamiltonianMethod::explicit_euler);
    EXPECT_GT(reverser_residual(f, traj), 1e-3);
}

TEST(IntegrateHamiltonian, EquilibriumStaysPut) {
    const auto f = pd_model();
    const auto traj = integrate_hamiltonian(f, ch(kXStar), ch(0.0), 1e-3, 1.0);
    EXPECT_LE(reverser_residual(f, traj), 1e-10);
    EXPECT_NEAR(traj.ys.back()[0], kXStar, 1e-10);
}

TEST(IntegrateHamiltonian, BoundaryExitIsIntegrationError) {
    EXPECT_THROW(integrate_hamiltonian(pd_model(), ch(0.01), ch(-400.0), 1e-1, 5.0), IntegrationError);
}

TEST(IntegrateHamiltonian, ReplicatorCharacteristic) {
    const auto f = pd_model();
    const double x0 = 0.6;
    const auto phase = integrate_hamiltonian(f, ch(x0), replicator_momentum(f, ch(x0)), 1e-4, 5.0);
    const auto rep = integrate_replicator(f, SimplexPoint(Vector{{x0, 1 - x0}}), 1e-4, 5.0);
    ASSERT_EQ(phase.size(), rep.size());
    double sup = 0.0, hmax = 0.0;
    for (std::size_t k = 0; k < phase.size(); ++k) {
        sup = std::max(sup, std::abs(phase.ys[k][0] - rep.states[k][0]));
        hmax = std::max(hmax, std::abs(phase.hs[k]));
    }
    EXPECT_LE(sup, 1e-4);
    EXPECT_LE(hmax, 1e-6);
}

TEST(QuarticRoots, PrisonersDilemma) {
    const auto roots = pd_quartic_roots(pd(), -1.0);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_NEAR(roots[1], 0.5, 1e-10);
    EXPECT_NEAR(roots[0], 0.17, 0.01);
    for (double r : roots) EXPECT_NEAR(pd_potential(r), -1.0, 1e-10);
    EXPECT_TRUE(pd_quartic_roots(pd(), 0.0).empty());
    EXPECT_TRUE(pd_quartic_roots(pd(), -2.0).empty());
    EXPECT_TRUE(pd_quartic_roots(pd(), pd_potential(kXStar) - 1e-6).empty());
}

TEST(QuarticRoots, CoefficientsOfPayoffDifference) {
    const auto [a, b] = payoff_difference_coefficients(pd());
    EXPECT_EQ(a, 2.0);
    EXPECT_EQ(b, -3.0);
    EXPECT_THROW(payoff_difference_coefficients(Matrix::Identity(3, 3)), ArgumentError);
}

TEST(PeriodicOrbit, DetectedAtMinusOne) {
    const auto rep = detect_periodic_orbit(pd(), -1.0);
    EXPECT_EQ(rep.verdict, OrbitVerdict::periodic);
    ASSERT_TRUE(rep.return_distance.has_value());
    EXPECT_LE(*rep.return_distance, 1e-3);
    ASSERT_EQ(rep.turning_points.size(), 2u);
}

TEST(PeriodicOrbit, SmallAmplitudeNearMinimum) {
    const auto rep = detect_periodic_orbit(pd(), -1.21);
    EXPECT_EQ(rep.verdict, OrbitVerdict::periodic);
    ASSERT_EQ(rep.turning_points.size(), 2u);
    EXPECT_LT(rep.turning_points[1] - rep.turning_points[0], 0.1);
}

TEST(PeriodicOrbit, NotDetectedBelowMinimum) {
    const auto rep = detect_periodic_orbit(pd(), -2.0);
    EXPECT_EQ(rep.verdict, OrbitVerdict::not_detected);
    EXPECT_TRUE(rep.turning_points.empty());
    EXPECT_FALSE(rep.return_distance.has_value());
    EXPECT_THROW(detect_periodic_orbit(pd(), 0.5), ArgumentError);
}

TEST(PeriodicOrbit, NotDetectedWhenHorizonTooShort) {
    const auto rep = detect_periodic_orbit(pd(), -1.0, 1e-4, 0.5);
    EXPECT_EQ(rep.verdict, OrbitVerdict::not_detected);
}

TEST(SvirezhevCondition, SymmetricHoldsNonsymmetricFails) {
    const Matrix I = Matrix::Identity(2, 2);
    EXPECT_GT(svirezhev_condition_defect(I, Matrix{{0.0, 1.0}, {0.0, 0.0}}).norm(), 0.0);
    EXPECT_EQ(svirezhev_condition_defect(I, Matrix{{1.0, 2.0}, {2.0, 5.0}}).norm(), 0.0);
}
