#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tomo/linalg.hpp"
#include "tomo/matrix.hpp"
#include "tomo/measurement.hpp"

namespace tomo {

enum class ConstraintNorm { HilbertSchmidt, SupRowL1 };

struct SolverOptions {
    std::size_t max_iters = 20000;
    double rel_tol = 1e-9;
    double penalty = 1.0; // ADMM initial rho; residual balancing adapts it
    ConstraintNorm constraint_norm = ConstraintNorm::HilbertSchmidt;
};

enum class SolveStatus { Converged, IterationLimit, Infeasible };

struct RecoveryResult {
    HermitianMatrix estimate{1};   // PSD
    std::vector<cplx> pure_vector; // top eigenvector; empty when estimate = 0
    double purity_gap = 0.0;       // lambda_2 / lambda_1 of estimate
    double residual = 0.0;         // ||M(Y*) - b||_2
    std::size_t iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::IterationLimit;
    std::string solver;
};

// min ||M(Y) - b||_2  s.t.  Y >= 0
// Accelerated projected gradient, fixed step 1/L with L = sigma_max(rep)^2,
// monotone (a worse candidate is rejected and momentum restarted).
RecoveryResult solve_least_squares(const MeasurementScheme& scheme, const OutcomeTable& b,
                                   const SolverOptions& opts = {});

// min tr(Y)  s.t.  Y >= 0, ||M(Y) - b|| <= epsilon
// Linearized ADMM with epsilon-ball projection; returns the least-trace
// iterate seen that satisfies the constraint within epsilon*(1+rel_tol).
RecoveryResult solve_trace_min(const MeasurementScheme& scheme, const OutcomeTable& b,
                               double epsilon, const SolverOptions& opts = {});

// unit top eigenvector (first nonzero component made real-positive) and
// lambda_2/lambda_1; throws PreconditionError on the zero matrix
std::pair<std::vector<cplx>, double> extract_pure(const HermitianMatrix& y);

} // namespace tomo
