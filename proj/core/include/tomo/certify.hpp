#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tomo/linalg.hpp"
#include "tomo/measurement.hpp"

namespace tomo {

// Sampled evidence that the scheme separates pure states from all states:
// every unit-norm Hermitian X with at most one positive eigenvalue (the set
// K, realized as normalized differences pure-minus-mixed) should keep
// ||M(X)||_2 bounded away from zero, and every kernel element must have at
// least two positive eigenvalues.
struct Certificate {
    std::size_t kernel_dim = 0;
    bool kernel_positivity_ok = true;
    double c_estimate = 0.0;          // min ||M(X)||_2 over sampled/refined K
    HermitianMatrix worst_witness{1}; // attains c_estimate; unit norm, in K
    std::size_t samples_used = 0;
    std::uint64_t seed = 0;

    // a witness in K that the map (numerically) annihilates, or a kernel
    // element with at most one positive eigenvalue
    bool failed() const { return !kernel_positivity_ok || c_estimate <= 1e-8; }
};

// HS-orthonormal Hermitian matrices spanning the numerical kernel of
// matrix_rep (singular values below tol * sigma_max)
std::vector<HermitianMatrix> kernel_basis(const MeasurementScheme& scheme, double tol = 1e-10);

// Monte-Carlo + local refinement; deterministic given seed, independent of
// n_threads (0 = respect TOMO_THREADS / hardware)
Certificate check_determination(const MeasurementScheme& scheme, std::size_t n_samples,
                                std::uint64_t seed, std::size_t n_threads = 0);

// exact operator norm of M_a - M_b for HS norms on both sides
double scheme_distance(const MeasurementScheme& a, const MeasurementScheme& b);

// sampled lower bound max_X ||(M_a-M_b)(X)|| / ||X|| over random Hermitian X
double scheme_distance_sampled(const MeasurementScheme& a, const MeasurementScheme& b,
                               std::size_t n_samples, Rng& rng);

} // namespace tomo
