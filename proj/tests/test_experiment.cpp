#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/experiment.hpp"

using namespace tomo;

namespace {

// independent reference: p-quantile as the ceil(p*n)-th smallest element
double naive_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
    return values[std::max<std::size_t>(rank, 1) - 1];
}

bool same_records(const ExperimentStats& a, const ExperimentStats& b) {
    if (a.trials.size() != b.trials.size()) return false;
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        if (a.trials[i].rel_error != b.trials[i].rel_error) return false;
        if (a.trials[i].iterations != b.trials[i].iterations) return false;
        if (a.trials[i].converged != b.trials[i].converged) return false;
    }
    return a.mean == b.mean && a.q96 == b.q96 && a.q99 == b.q99 && a.q9975 == b.q9975 &&
           a.excluded == b.excluded;
}

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("nearest-rank quantile matches a naive reimplementation") {
    const std::vector<std::vector<double>> datasets = {
        {3.0},
        {1.0, 2.0},
        {5.0, 1.0, 4.0, 2.0, 3.0},
        {0.1, 0.1, 0.1, 9.0},
        {2.0, 7.0, 1.0, 8.0, 2.0, 8.0, 1.0, 8.0, 2.0, 8.0},
    };
    for (const auto& values : datasets) {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (double p : {0.01, 0.25, 0.5, 0.75, 0.96, 0.99, 0.9975, 1.0})
            CHECK(quantile_nearest_rank(sorted, p) == naive_quantile(values, p));
    }

    CHECK_THROWS_AS(quantile_nearest_rank({}, 0.5), PreconditionError);
    CHECK_THROWS_AS(quantile_nearest_rank({1.0}, 0.0), PreconditionError);
    CHECK_THROWS_AS(quantile_nearest_rank({1.0}, 1.5), PreconditionError);
}

TEST_CASE("histograms are normalized densities over [0, max]") {
    const std::vector<double> values = {0.5, 1.5, 1.6, 2.0, 7.9, 8.0};
    const Histogram h = make_histogram(values, 100);
    CHECK(h.lo == 0.0);
    CHECK(h.hi == 8.0);
    REQUIRE(h.density.size() == 100);
    const double width = (h.hi - h.lo) / 100.0;
    double mass = 0.0;
    for (double d : h.density) {
        CHECK(d >= 0.0);
        mass += d * width;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    // all-zero data degenerates to the unit interval
    const Histogram hz = make_histogram({0.0, 0.0}, 10);
    CHECK(hz.hi == 1.0);

    CHECK_THROWS_AS(make_histogram({}, 100), PreconditionError);
    CHECK_THROWS_AS(make_histogram({1.0}, 0), PreconditionError);
}

TEST_CASE("experiment runs are identical for every thread count") {
    ExperimentConfig cfg;
    cfg.dim = 4;
    cfg.trials = 8;
    cfg.epsilon = 1e-3;
    cfg.seed = 42;
    cfg.solver.rel_tol = 1e-7;

    cfg.threads = 1;
    const ExperimentStats s1 = run_experiment(cfg);
    cfg.threads = 4;
    const ExperimentStats s4 = run_experiment(cfg);
    CHECK(same_records(s1, s4));

    CHECK(s1.q96 <= s1.q99);
    CHECK(s1.q99 <= s1.q9975);
    CHECK(s1.mean >= 0.0);
    CHECK(s1.excluded + s1.errors_sorted.size() == cfg.trials);
}

TEST_CASE("auto alpha equals the explicit default") {
    ExperimentConfig cfg;
    cfg.dim = 4;
    cfg.trials = 2;
    cfg.epsilon = 1e-3;
    cfg.seed = 5;
    cfg.solver.rel_tol = 1e-6;
    cfg.alpha = 0.0;
    const ExperimentStats auto_alpha = run_experiment(cfg);
    cfg.alpha = default_alpha(4);
    const ExperimentStats explicit_alpha = run_experiment(cfg);
    CHECK(same_records(auto_alpha, explicit_alpha));
}

TEST_CASE("least-squares program records converged trials") {
    ExperimentConfig cfg;
    cfg.dim = 3;
    cfg.trials = 4;
    cfg.epsilon = 1e-3;
    cfg.seed = 11;
    cfg.program = Program::LeastSquares;
    const ExperimentStats s = run_experiment(cfg);
    CHECK(s.excluded == 0);
    for (const TrialRecord& r : s.trials) {
        CHECK(r.converged);
        CHECK(r.rel_error >= 0.0);
        CHECK(std::isfinite(r.rel_error));
    }
}

TEST_CASE("non-converged trials are excluded and counted") {
    ExperimentConfig cfg;
    cfg.dim = 3;
    cfg.trials = 3;
    cfg.epsilon = 1e-6;
    cfg.seed = 2;
    cfg.solver.max_iters = 1;
    cfg.solver.rel_tol = 1e-15;
    const ExperimentStats s = run_experiment(cfg);
    CHECK(s.excluded == 3);
    CHECK(s.errors_sorted.empty());
    CHECK(s.mean == 0.0);
    CHECK(s.histogram.density.empty());
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
    cfg.trials = 1;
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
    cfg.epsilon = 1e-4;
    cfg.family = "legendre";
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
    cfg.family = "chebyshev-u";
    cfg.dim = 1;
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
}

} // TEST_SUITE
