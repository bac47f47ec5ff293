#include <doctest.h>

#include <cmath>

#include "tomo/bases.hpp"
#include "tomo/errors.hpp"
#include "tomo/measurement.hpp"
#include "tomo/recovery.hpp"
#include "tomo/rng.hpp"

using namespace tomo;

namespace {

MeasurementScheme five_basis_scheme(std::size_t d) {
    return MeasurementScheme::from_bases(
        build_scheme(PolynomialFamily::chebyshev_u(), d, default_alpha(d)));
}

double hs_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
    return (a - b).matrix().frobenius_norm();
}

// noiseless probabilities of a Haar pure state, plus the state itself
struct TestInstance {
    HermitianMatrix sigma;
    OutcomeTable probs;
};

TestInstance noiseless_instance(const MeasurementScheme& scheme, std::uint64_t seed) {
    Rng rng(seed);
    const DensityMatrix rho = sample_haar_pure(scheme.dim(), rng);
    return {rho.matrix(), scheme.forward_map(rho.matrix())};
}

} // namespace

TEST_SUITE("recovery") {

TEST_CASE("least squares recovers simple states from exact data") {
    const MeasurementScheme scheme = five_basis_scheme(2);
    SolverOptions opts;
    opts.rel_tol = 1e-10;

    const HermitianMatrix target = HermitianMatrix::diagonal({1.0, 0.0});
    const RecoveryResult r = solve_least_squares(scheme, scheme.forward_map(target), opts);
    CHECK(r.converged);
    CHECK(r.solver == "lsq");
    CHECK(hs_distance(r.estimate, target) <= 1e-6);
    CHECK(r.residual <= 1e-8);
    CHECK(r.purity_gap <= 1e-6);
    REQUIRE(r.pure_vector.size() == 2);
    CHECK(std::abs(r.pure_vector[0] - cplx{1.0, 0.0}) <= 1e-6);

    HermitianMatrix mixed = HermitianMatrix::identity(2);
    mixed.scale(0.5);
    const RecoveryResult rm = solve_least_squares(scheme, scheme.forward_map(mixed), opts);
    CHECK(rm.converged);
    CHECK(hs_distance(rm.estimate, mixed) <= 1e-6);
    CHECK(rm.purity_gap >= 1.0 - 1e-6); // equal eigenvalues
}

TEST_CASE("zero data gives the zero matrix immediately") {
    const MeasurementScheme scheme = five_basis_scheme(3);
    const OutcomeTable zero(5, 3);

    const RecoveryResult lsq = solve_least_squares(scheme, zero);
    CHECK(lsq.converged);
    CHECK(lsq.estimate.matrix().frobenius_norm() == 0.0);
    CHECK(lsq.pure_vector.empty());
    CHECK(lsq.purity_gap == 1.0);

    const RecoveryResult tm = solve_trace_min(scheme, zero, 1e-3);
    CHECK(tm.converged);
    CHECK(tm.iterations == 1);
    CHECK(tm.estimate.matrix().frobenius_norm() == 0.0);
    CHECK(tm.status == SolveStatus::Converged);
}

TEST_CASE("trace minimization recovers a pure state from noiseless data") {
    const MeasurementScheme scheme = five_basis_scheme(4);
    const TestInstance inst = noiseless_instance(scheme, 314);
    const RecoveryResult r = solve_trace_min(scheme, inst.probs, 1e-8);
    CHECK(r.status != SolveStatus::Infeasible);
    CHECK(r.residual <= 1e-8 * (1.0 + 1e-9) + 1e-15);
    CHECK(hs_distance(r.estimate, inst.sigma) <= 1e-6);
    CHECK(r.purity_gap <= 1e-4);
}

TEST_CASE("least squares residual can always reach the noise level") {
    const MeasurementScheme scheme = five_basis_scheme(4);
    const double eps = 1e-3;
    Rng rng(55);
    const DensityMatrix rho = sample_haar_pure(4, rng);
    OutcomeTable b = scheme.forward_map(rho.matrix());
    b += sample_noise(b.rows, b.cols, eps, rng);

    const RecoveryResult r = solve_least_squares(scheme, b);
    CHECK(r.converged);
    // the true state already achieves residual eps, the optimum is below it
    CHECK(r.residual <= eps * 1.05);
}

TEST_CASE("noisy trace minimization at d=10 converges within the error budget") {
    const MeasurementScheme scheme = five_basis_scheme(10);
    const double eps = 1e-4;
    Rng rng(Rng::derive(1, 0));
    const DensityMatrix rho = sample_haar_pure(10, rng);
    OutcomeTable b = scheme.forward_map(rho.matrix());
    b += sample_noise(b.rows, b.cols, eps, rng);

    SolverOptions opts;
    opts.rel_tol = 1e-7;
    const RecoveryResult r = solve_trace_min(scheme, b, eps, opts);
    CHECK(r.converged);
    CHECK(r.residual <= eps * (1.0 + opts.rel_tol) + 1e-15);
    CHECK(hs_distance(r.estimate, rho.matrix()) / eps <= 100.0);
}

TEST_CASE("pure extraction: eigenvector, gap, phase gauge, zero rejection") {
    auto [v0, gap0] = extract_pure(HermitianMatrix::diagonal({1.0, 0.0}));
    CHECK(gap0 == 0.0);
    CHECK(std::abs(v0[0] - cplx{1.0, 0.0}) <= 1e-14);
    CHECK(std::abs(v0[1]) <= 1e-14);

    auto [vm, gapm] = extract_pure(HermitianMatrix::diagonal({0.5, 0.5}));
    CHECK(gapm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vm.size() == 2);

    // the first sizeable component comes out real positive
    const std::vector<cplx> psi{cplx{-0.6, 0.0}, cplx{0.0, 0.8}};
    auto [vp, gapp] = extract_pure(HermitianMatrix::outer(psi));
    CHECK(gapp <= 1e-12);
    CHECK(std::abs(vp[0] - cplx{0.6, 0.0}) <= 1e-12);
    CHECK(std::abs(vp[1] - cplx{0.0, -0.8}) <= 1e-12);

    CHECK_THROWS_AS(extract_pure(HermitianMatrix(3)), PreconditionError);
}

TEST_CASE("reported objectives are monotone in the iteration budget") {
    const MeasurementScheme scheme = five_basis_scheme(3);
    Rng rng(808);
    const DensityMatrix rho = sample_haar_pure(3, rng);
    OutcomeTable b = scheme.forward_map(rho.matrix());
    b += sample_noise(b.rows, b.cols, 1e-2, rng);

    double prev_residual = INFINITY;
    double prev_trace = INFINITY;
    for (std::size_t budget : {1ul, 2ul, 5ul, 10ul, 25ul, 60ul, 150ul, 400ul}) {
        SolverOptions opts;
        opts.max_iters = budget;
        opts.rel_tol = 1e-12; // keep iterating to the budget
        const RecoveryResult lsq = solve_least_squares(scheme, b, opts);
        CHECK(lsq.residual <= prev_residual * (1.0 + 1e-12) + 1e-15);
        prev_residual = std::min(prev_residual, lsq.residual);

        const RecoveryResult tm = solve_trace_min(scheme, b, 1e-2, opts);
        if (tm.status != SolveStatus::Infeasible) {
            CHECK(tm.estimate.trace_real() <= prev_trace * (1.0 + 1e-12) + 1e-15);
            prev_trace = std::min(prev_trace, tm.estimate.trace_real());
        }
    }
}

TEST_CASE("inconsistent data is reported infeasible") {
    const MeasurementScheme scheme = five_basis_scheme(2);
    OutcomeTable b(5, 2); // row sums 0,10,0,0,0: no PSD matrix fits within 0.1
    b(1, 0) = 5.0;
    b(1, 1) = 5.0;
    SolverOptions opts;
    opts.max_iters = 2000;
    const RecoveryResult r = solve_trace_min(scheme, b, 0.1, opts);
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK(!r.converged);
}

TEST_CASE("sup-row-l1 constraint mode enforces per-row feasibility") {
    const MeasurementScheme scheme = five_basis_scheme(3);
    const double eps = 1e-2;
    Rng rng(17);
    const DensityMatrix rho = sample_haar_pure(3, rng);
    OutcomeTable b = scheme.forward_map(rho.matrix());
    b += sample_noise(b.rows, b.cols, eps / 2, rng);

    SolverOptions opts;
    opts.constraint_norm = ConstraintNorm::SupRowL1;
    opts.rel_tol = 1e-7;
    const RecoveryResult r = solve_trace_min(scheme, b, eps, opts);
    CHECK(r.status == SolveStatus::Converged);

    const OutcomeTable diff = scheme.forward_map(r.estimate) - b;
    for (std::size_t i = 0; i < diff.rows; ++i) {
        double l1 = 0.0;
        for (std::size_t j = 0; j < diff.cols; ++j) l1 += std::abs(diff(i, j));
        CHECK(l1 <= eps * (1.0 + opts.rel_tol) + 1e-12);
    }
}

TEST_CASE("solver preconditions") {
    const MeasurementScheme scheme = five_basis_scheme(2);
    const OutcomeTable wrong(3, 2);
    CHECK_THROWS_AS(solve_least_squares(scheme, wrong), PreconditionError);
    CHECK_THROWS_AS(solve_trace_min(scheme, wrong, 1e-3), PreconditionError);

    const OutcomeTable ok(5, 2);
    CHECK_THROWS_AS(solve_trace_min(scheme, ok, 0.0), PreconditionError);
    SolverOptions bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(solve_least_squares(scheme, ok, bad), PreconditionError);
    bad.max_iters = 10;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(solve_trace_min(scheme, ok, 1e-3, bad), PreconditionError);
}

} // TEST_SUITE
