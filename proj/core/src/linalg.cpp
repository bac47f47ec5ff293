#include "tomo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tomo/errors.hpp"

namespace tomo {

HermitianMatrix HermitianMatrix::from_matrix(const CMatrix& a, double rel_tol) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw PreconditionError("HermitianMatrix: input must be square and non-empty");
    const std::size_t n = a.rows();
    const double scale = a.frobenius_norm();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            asym = std::max(asym, std::abs(a(i, j) - std::conj(a(j, i))));
    if (asym > rel_tol * std::max(scale, 1e-300))
        throw PreconditionError("HermitianMatrix: asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
    HermitianMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h.m_(i, i) = cplx{a(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            h.m_(i, j) = v;
            h.m_(j, i) = std::conj(v);
        }
    }
    return h;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    HermitianMatrix h(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) h.m_(i, i) = d[i];
    return h;
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
    HermitianMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) h.m_(i, i) = 1.0;
    return h;
}

HermitianMatrix HermitianMatrix::outer(const std::vector<cplx>& v) {
    HermitianMatrix h(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) h.m_(i, j) = v[i] * std::conj(v[j]);
    for (std::size_t i = 0; i < v.size(); ++i) h.m_(i, i) = cplx{h.m_(i, i).real(), 0.0};
    return h;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, cplx v) {
    if (i == j) {
        m_(i, i) = cplx{v.real(), 0.0};
    } else {
        m_(i, j) = v;
        m_(j, i) = std::conj(v);
    }
}

namespace {

double offdiag_norm(const CMatrix& a) {
    const std::size_t n = a.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    CMatrix a = h.matrix();
    CMatrix v = CMatrix::identity(n);

    const double hnorm = a.frobenius_norm();
    const double target = 1e-14 * hnorm;
    constexpr int kMaxSweeps = 50;

    if (hnorm > 0.0 && n > 1) {
        // skipping pivots below this cannot leave more than `target` of
        // off-diagonal mass behind
        const double pivot_skip = target / static_cast<double>(n);
        bool converged = offdiag_norm(a) <= target;
        int sweep = 0;
        while (!converged) {
            if (sweep++ >= kMaxSweeps)
                throw SolverFailure("hermitian_eig: no convergence after 50 sweeps",
                                    offdiag_norm(a));
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const cplx beta = a(p, q);
                    const double b = std::abs(beta);
                    if (b <= pivot_skip) continue;

                    const double alpha = a(p, p).real();
                    const double gamma = a(q, q).real();
                    const cplx phase = beta / b;

                    const double tau = (gamma - alpha) / (2.0 * b);
                    const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                    const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;

                    // J has columns p,q: (phase*c, -s) and (phase*s, c)
                    const cplx u = phase * c;
                    const cplx w = phase * s;

                    // A <- A J
                    for (std::size_t r = 0; r < n; ++r) {
                        const cplx arp = a(r, p), arq = a(r, q);
                        a(r, p) = arp * u - arq * s;
                        a(r, q) = arp * w + arq * c;
                    }
                    // A <- J^† A
                    for (std::size_t j = 0; j < n; ++j) {
                        const cplx apj = a(p, j), aqj = a(q, j);
                        a(p, j) = std::conj(u) * apj - s * aqj;
                        a(q, j) = std::conj(w) * apj + c * aqj;
                    }
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    a(p, p) = cplx{a(p, p).real(), 0.0};
                    a(q, q) = cplx{a(q, q).real(), 0.0};

                    // V <- V J
                    for (std::size_t r = 0; r < n; ++r) {
                        const cplx vrp = v(r, p), vrq = v(r, q);
                        v(r, p) = vrp * u - vrq * s;
                        v(r, q) = vrp * w + vrq * c;
                    }
                }
            }
            converged = offdiag_norm(a) <= target;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

HermitianMatrix psd_project(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    const EigenDecomposition e = hermitian_eig(h);
    HermitianMatrix out(n);
    CMatrix acc(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = e.eigenvalues[k];
        if (lam <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = e.eigenvectors(i, k) * lam;
            for (std::size_t j = 0; j < n; ++j)
                acc(i, j) += vik * std::conj(e.eigenvectors(j, k));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.set(i, i, acc(i, i).real());
        for (std::size_t j = i + 1; j < n; ++j)
            out.set(i, j, 0.5 * (acc(i, j) + std::conj(acc(j, i))));
    }
    return out;
}

int count_positive_eigs(const HermitianMatrix& h, double tol) {
    if (tol < 0.0) throw PreconditionError("count_positive_eigs: tol must be >= 0");
    const double scale = h.matrix().frobenius_norm();
    const EigenDecomposition e = hermitian_eig(h);
    int count = 0;
    for (double lam : e.eigenvalues)
        if (lam > tol * scale) ++count;
    return count;
}

double matrix_norm(const HermitianMatrix& h, MatrixNorm kind) {
    if (kind == MatrixNorm::HilbertSchmidt) return h.matrix().frobenius_norm();
    const EigenDecomposition e = hermitian_eig(h);
    double s = 0.0;
    for (double lam : e.eigenvalues) s += std::abs(lam);
    return s;
}

SvdResult singular_values_and_kernel(const RMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    // columns of the working copy
    std::vector<std::vector<double>> col(n, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) col[j][i] = a(i, j);

    RMatrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) v(j, j) = 1.0;

    constexpr int kMaxSweeps = 60;
    constexpr double kTol = 1e-14;
    bool converged = (n <= 1);
    int sweep = 0;
    while (!converged) {
        if (sweep++ >= kMaxSweeps)
            throw SolverFailure("singular_values_and_kernel: no convergence after 60 sweeps", 0.0);
        double max_rel = 0.0;
        double max_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) max_sq = std::max(max_sq, dot(col[j], col[j]));
        // freeze numerically-dead columns: rotating rounding noise against live
        // columns never settles, and freezing reports kernel singular values at
        // rounding level, which is the contract
        const double dead = 1e-30 * max_sq;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double app = dot(col[p], col[p]);
                const double aqq = dot(col[q], col[q]);
                if (app <= dead || aqq <= dead) continue;
                const double apq = dot(col[p], col[q]);
                const double rel = std::abs(apq) / (std::sqrt(app) * std::sqrt(aqq));
                max_rel = std::max(max_rel, rel);
                if (rel <= kTol) continue;

                const double tau = (app - aqq) / (2.0 * apq);
                const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                // for |tau| large enough that tau*tau overflows, the annihilating
                // angle is 1/(2 tau) to double precision
                const double t = std::abs(tau) > 1e100
                                     ? -sgn / (2.0 * std::abs(tau))
                                     : -sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t i = 0; i < m; ++i) {
                    const double xp = col[p][i], xq = col[q][i];
                    col[p][i] = c * xp - s * xq;
                    col[q][i] = s * xp + c * xq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        converged = max_rel <= kTol;
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(dot(col[j], col[j]));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&sigma](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult out;
    out.singular_values.resize(n);
    out.right_vectors = RMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.singular_values[k] = sigma[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.right_vectors(i, k) = v(i, order[k]);
    }
    return out;
}

double spectral_norm_estimate(const RMatrix& a, std::size_t max_iters, double tol) {
    const std::size_t n = a.cols();
    if (n == 0 || a.rows() == 0) return 0.0;
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double sigma = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        std::vector<double> y = a.apply(x);
        const double sig_new = norm2(y);
        if (sig_new == 0.0) return 0.0;
        x = a.apply_transpose(y);
        const double nx = norm2(x);
        if (nx == 0.0) return sig_new;
        for (double& xi : x) xi /= nx;
        if (std::abs(sig_new - sigma) <= tol * sig_new && it > 2) return sig_new;
        sigma = sig_new;
    }
    return sigma;
}

} // namespace tomo
