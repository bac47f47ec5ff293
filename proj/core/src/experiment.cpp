#include "tomo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "tomo/bases.hpp"
#include "tomo/errors.hpp"

namespace tomo {

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TOMO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for_indexed(std::size_t n, std::size_t threads,
                          const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double quantile_nearest_rank(const std::vector<double>& sorted_ascending, double p) {
    if (sorted_ascending.empty())
        throw PreconditionError("quantile: empty sample");
    if (!(p > 0.0) || p > 1.0) throw PreconditionError("quantile: p must be in (0, 1]");
    const double n = static_cast<double>(sorted_ascending.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * n));
    if (rank < 1) rank = 1;
    if (rank > sorted_ascending.size()) rank = sorted_ascending.size();
    return sorted_ascending[rank - 1];
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
    if (values.empty() || bins == 0)
        throw PreconditionError("histogram: need values and at least one bin");
    Histogram h;
    h.lo = 0.0;
    h.hi = *std::max_element(values.begin(), values.end());
    if (h.hi <= h.lo) h.hi = h.lo + 1.0; // degenerate all-zero data
    h.density.assign(bins, 0.0);
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (double v : values) {
        std::size_t b = static_cast<std::size_t>((v - h.lo) / width);
        if (b >= bins) b = bins - 1;
        h.density[b] += 1.0;
    }
    const double mass = static_cast<double>(values.size()) * width;
    for (double& dv : h.density) dv /= mass;
    return h;
}

ExperimentStats run_experiment(const ExperimentConfig& config) {
    if (config.trials < 1) throw PreconditionError("experiment: trials must be >= 1");
    if (!(config.epsilon > 0.0)) throw PreconditionError("experiment: epsilon must be > 0");

    PolynomialFamily family = PolynomialFamily::chebyshev_u();
    if (config.family == "hermite")
        family = PolynomialFamily::hermite();
    else if (config.family != "chebyshev-u")
        throw PreconditionError("experiment: unknown family " + config.family);

    const double alpha = config.alpha > 0.0 ? config.alpha : default_alpha(config.dim);
    const FiveBasisScheme basis_scheme = build_scheme(family, config.dim, alpha);
    const MeasurementScheme scheme = MeasurementScheme::from_bases(basis_scheme);

    ExperimentStats stats;
    stats.trials.resize(config.trials);

    parallel_for_indexed(config.trials, resolve_threads(config.threads), [&](std::size_t t) {
        Rng rng(Rng::derive(config.seed, t));
        const DensityMatrix sigma = sample_haar_pure(config.dim, rng);
        OutcomeTable b = scheme.forward_map(sigma.matrix());
        b += sample_noise(scheme.n_povms(), scheme.n_outcomes(), config.epsilon, rng);

        const RecoveryResult res =
            config.program == Program::TraceMin
                ? solve_trace_min(scheme, b, config.epsilon, config.solver)
                : solve_least_squares(scheme, b, config.solver);

        HermitianMatrix diff = res.estimate;
        diff -= sigma.matrix();
        stats.trials[t] = TrialRecord{diff.matrix().frobenius_norm() / config.epsilon,
                                      res.iterations, res.converged};
    });

    stats.errors_sorted.reserve(config.trials);
    double sum = 0.0;
    for (const TrialRecord& r : stats.trials) {
        if (!r.converged) {
            ++stats.excluded;
            continue;
        }
        stats.errors_sorted.push_back(r.rel_error);
        sum += r.rel_error;
    }
    std::sort(stats.errors_sorted.begin(), stats.errors_sorted.end());
    if (!stats.errors_sorted.empty()) {
        stats.mean = sum / static_cast<double>(stats.errors_sorted.size());
        stats.q96 = quantile_nearest_rank(stats.errors_sorted, 0.96);
        stats.q99 = quantile_nearest_rank(stats.errors_sorted, 0.99);
        stats.q9975 = quantile_nearest_rank(stats.errors_sorted, 0.9975);
        stats.histogram = make_histogram(stats.errors_sorted, 100);
    }
    return stats;
}

} // namespace tomo
