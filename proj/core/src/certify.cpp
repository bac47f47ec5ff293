#include "tomo/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tomo/errors.hpp"
#include "tomo/experiment.hpp"

namespace tomo {

std::vector<HermitianMatrix> kernel_basis(const MeasurementScheme& scheme, double tol) {
    const RMatrix& rep = scheme.matrix_rep();
    const SvdResult svd = singular_values_and_kernel(rep);
    const double cutoff = tol * svd.singular_values.front();
    std::vector<HermitianMatrix> out;
    for (std::size_t k = 0; k < svd.singular_values.size(); ++k) {
        if (svd.singular_values[k] >= cutoff) continue;
        std::vector<double> coords(rep.cols());
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = svd.right_vectors(i, k);
        out.push_back(hermitian_from_coords(coords, scheme.dim()));
    }
    return out;
}

namespace {

// clamp onto K = {lambda_2 <= 0, ||X||_HS = 1}: keep the top eigenvalue,
// zero any other positive ones, renormalize
bool project_onto_k(std::vector<double>& coords, std::size_t d) {
    HermitianMatrix x = hermitian_from_coords(coords, d);
    const EigenDecomposition e = hermitian_eig(x);
    bool touched = false;
    for (std::size_t i = 1; i < e.eigenvalues.size(); ++i)
        if (e.eigenvalues[i] > 0.0) touched = true;
    if (touched) {
        HermitianMatrix y(d);
        CMatrix acc(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            const double lam = k == 0 ? e.eigenvalues[0] : std::min(e.eigenvalues[k], 0.0);
            if (lam == 0.0) continue;
            for (std::size_t i = 0; i < d; ++i) {
                const cplx vik = e.eigenvectors(i, k) * lam;
                for (std::size_t j = 0; j < d; ++j)
                    acc(i, j) += vik * std::conj(e.eigenvectors(j, k));
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            y.set(i, i, acc(i, i).real());
            for (std::size_t j = i + 1; j < d; ++j)
                y.set(i, j, 0.5 * (acc(i, j) + std::conj(acc(j, i))));
        }
        coords = hermitian_coords(y);
    }
    const double n = norm2(coords);
    if (n < 1e-14) return false;
    for (double& c : coords) c /= n;
    return true;
}

std::vector<double> k_sample_coords(std::size_t d, Rng& rng) {
    while (true) {
        const DensityMatrix sigma = sample_haar_pure(d, rng);
        const DensityMatrix rho = sample_hs_mixed(d, rng);
        HermitianMatrix x = sigma.matrix();
        x -= rho.matrix();
        std::vector<double> coords = hermitian_coords(x);
        const double n = norm2(coords);
        if (n < 1e-12) continue; // sigma == rho collision
        for (double& c : coords) c /= n;
        return coords;
    }
}

// minimize val() by coordinate perturbations followed by projection; the
// projector returns false when the perturbed point collapses
template <typename Val, typename Proj>
double coordinate_descent(std::vector<double>& coords, double value, std::size_t sweeps,
                          const Val& val, const Proj& proj) {
    double h = 0.25;
    for (std::size_t s = 0; s < sweeps && h > 1e-10; ++s) {
        bool improved = false;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            for (const double sign : {1.0, -1.0}) {
                std::vector<double> trial = coords;
                trial[i] += sign * h;
                if (!proj(trial)) continue;
                const double tv = val(trial);
                if (tv < value) {
                    value = tv;
                    coords = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) h *= 0.5;
    }
    return value;
}

} // namespace

Certificate check_determination(const MeasurementScheme& scheme, std::size_t n_samples,
                                std::uint64_t seed, std::size_t n_threads) {
    if (n_samples < 1) throw PreconditionError("check_determination: n_samples must be >= 1");
    const std::size_t d = scheme.dim();
    const RMatrix& rep = scheme.matrix_rep();

    Certificate cert;
    cert.seed = seed;
    cert.samples_used = n_samples;

    const auto map_norm = [&rep](const std::vector<double>& coords) {
        return norm2(rep.apply(coords));
    };

    // Monte-Carlo pass over K; per-sample seeds keep the result independent
    // of the thread count
    std::vector<double> vals(n_samples);
    parallel_for_indexed(n_samples, resolve_threads(n_threads), [&](std::size_t idx) {
        Rng rng(Rng::derive(seed, idx));
        vals[idx] = map_norm(k_sample_coords(d, rng));
    });

    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&vals](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });

    double best = INFINITY;
    std::vector<double> best_coords;
    const auto consider = [&](double v, const std::vector<double>& coords) {
        if (v < best) {
            best = v;
            best_coords = coords;
        }
    };

    // local refinement from the worst few samples
    const std::size_t n_refine = std::min<std::size_t>(10, n_samples);
    for (std::size_t r = 0; r < n_refine; ++r) {
        const std::size_t idx = order[r];
        Rng rng(Rng::derive(seed, idx));
        std::vector<double> coords = k_sample_coords(d, rng);
        consider(vals[idx], coords);
        const double refined = coordinate_descent(
            coords, vals[idx], 100, map_norm,
            [d](std::vector<double>& c) { return project_onto_k(c, d); });
        consider(refined, coords);
    }

    // kernel positivity: a kernel element with at most one positive
    // eigenvalue is a verified counterexample
    const std::vector<HermitianMatrix> kernel = kernel_basis(scheme);
    cert.kernel_dim = kernel.size();
    cert.kernel_positivity_ok = true;
    if (!kernel.empty()) {
        std::vector<std::vector<double>> kcoords;
        kcoords.reserve(kernel.size());
        for (const auto& km : kernel) kcoords.push_back(hermitian_coords(km));

        const auto combo = [&](const std::vector<double>& c) {
            std::vector<double> x(d * d, 0.0);
            for (std::size_t k = 0; k < kcoords.size(); ++k)
                for (std::size_t i = 0; i < x.size(); ++i) x[i] += c[k] * kcoords[k][i];
            return x;
        };
        const auto lambda2 = [&](const std::vector<double>& c) {
            const EigenDecomposition e = hermitian_eig(hermitian_from_coords(combo(c), d));
            return e.eigenvalues.size() > 1 ? e.eigenvalues[1] : e.eigenvalues[0];
        };
        const auto normalize = [](std::vector<double>& c) {
            const double n = norm2(c);
            if (n < 1e-14) return false;
            for (double& v : c) v /= n;
            return true;
        };

        constexpr std::size_t kKernelSamples = 1000;
        cert.samples_used += kKernelSamples;
        std::vector<std::vector<double>> combos(kKernelSamples);
        std::vector<double> l2s(kKernelSamples);
        for (std::size_t j = 0; j < kKernelSamples; ++j) {
            Rng rng(Rng::derive(seed, n_samples + j));
            std::vector<double> c(kernel.size());
            do {
                for (double& v : c) v = rng.gaussian();
            } while (!normalize(c));
            // lambda_2 picks the orientation: flip if -X sits deeper in K
            std::vector<double> neg = c;
            for (double& v : neg) v = -v;
            const double lp = lambda2(c), ln = lambda2(neg);
            if (ln < lp) {
                c = std::move(neg);
                l2s[j] = ln;
            } else {
                l2s[j] = lp;
            }
            combos[j] = std::move(c);
        }

        std::vector<std::size_t> korder(kKernelSamples);
        std::iota(korder.begin(), korder.end(), std::size_t{0});
        std::stable_sort(korder.begin(), korder.end(),
                         [&l2s](std::size_t a, std::size_t b) { return l2s[a] < l2s[b]; });

        for (std::size_t r = 0; r < std::min<std::size_t>(10, kKernelSamples); ++r) {
            std::vector<double> c = combos[korder[r]];
            coordinate_descent(c, l2s[korder[r]], 100, lambda2,
                               [&normalize](std::vector<double>& v) { return normalize(v); });
            std::vector<double> x = combo(c);
            const double xn = norm2(x);
            if (xn < 1e-14) continue;
            for (double& v : x) v /= xn;
            const HermitianMatrix xm = hermitian_from_coords(x, d);
            const EigenDecomposition e = hermitian_eig(xm);
            const double l2 = e.eigenvalues.size() > 1 ? e.eigenvalues[1] : e.eigenvalues[0];
            if (l2 < -1e-8 && count_positive_eigs(xm, 1e-10) <= 1) {
                cert.kernel_positivity_ok = false;
                consider(map_norm(x), x);
            }
        }
    }

    cert.c_estimate = best;
    cert.worst_witness = hermitian_from_coords(best_coords, d);
    return cert;
}

double scheme_distance(const MeasurementScheme& a, const MeasurementScheme& b) {
    if (a.dim() != b.dim() || a.n_povms() != b.n_povms() || a.n_outcomes() != b.n_outcomes())
        throw PreconditionError("scheme_distance: schemes have different shapes");
    RMatrix diff = a.matrix_rep() - b.matrix_rep();
    if (diff.frobenius_norm() == 0.0) return 0.0;
    if (diff.cols() <= 256)
        return singular_values_and_kernel(diff).singular_values.front();
    return spectral_norm_estimate(diff, 10000, 1e-13);
}

double scheme_distance_sampled(const MeasurementScheme& a, const MeasurementScheme& b,
                               std::size_t n_samples, Rng& rng) {
    if (a.dim() != b.dim() || a.n_povms() != b.n_povms() || a.n_outcomes() != b.n_outcomes())
        throw PreconditionError("scheme_distance_sampled: schemes have different shapes");
    RMatrix diff = a.matrix_rep() - b.matrix_rep();
    const std::size_t n = diff.cols();
    double best = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        std::vector<double> x(n);
        double nx = 0.0;
        do {
            nx = 0.0;
            for (double& v : x) {
                v = rng.gaussian();
                nx += v * v;
            }
        } while (nx == 0.0);
        nx = std::sqrt(nx);
        for (double& v : x) v /= nx;
        best = std::max(best, norm2(diff.apply(x)));
    }
    return best;
}

} // namespace tomo
