#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tomo/recovery.hpp"

namespace tomo {

enum class Program { TraceMin, LeastSquares };

struct ExperimentConfig {
    std::size_t dim = 10;
    std::size_t trials = 1000;
    double epsilon = 1e-4;
    double alpha = 0.0; // <= 0 means pi/dim
    std::string family = "chebyshev-u";
    Program program = Program::TraceMin;
    std::uint64_t seed = 1;
    std::size_t threads = 0; // 0 = TOMO_THREADS or hardware
    SolverOptions solver{.max_iters = 20000, .rel_tol = 1e-7};
};

struct TrialRecord {
    double rel_error = 0.0; // ||Y* - sigma||_HS / epsilon
    std::size_t iterations = 0;
    bool converged = false;
};

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;                   // 100 uniform bins over [lo, hi]
    std::vector<double> density;       // integrates to 1
};

struct ExperimentStats {
    std::vector<TrialRecord> trials;   // indexed by trial number
    std::vector<double> errors_sorted; // converged trials only, ascending
    double mean = 0.0;
    double q96 = 0.0;
    double q99 = 0.0;
    double q9975 = 0.0;
    std::size_t excluded = 0; // non-converged trials left out of the stats
    Histogram histogram;
};

// Per trial: sample a Haar pure state, add HS-sphere noise of radius
// epsilon, run the selected program, record the relative error. Trials get
// seeds derived from (seed, trial index), so the result is identical for
// every thread count.
ExperimentStats run_experiment(const ExperimentConfig& config);

// nearest-rank quantile: the ceil(p*n)-th smallest value
double quantile_nearest_rank(const std::vector<double>& sorted_ascending, double p);

Histogram make_histogram(const std::vector<double>& values, std::size_t bins = 100);

// worker-count resolution: explicit > TOMO_THREADS > hardware_concurrency
std::size_t resolve_threads(std::size_t requested);

// run fn(i) for i in [0, n) across up to `threads` workers; the first
// exception (if any) is rethrown on the calling thread
void parallel_for_indexed(std::size_t n, std::size_t threads,
                          const std::function<void(std::size_t)>& fn);

} // namespace tomo
