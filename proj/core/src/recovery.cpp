#include "tomo/recovery.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

std::vector<double> flat(const OutcomeTable& t) { return t.data; }

void check_shapes(const MeasurementScheme& scheme, const OutcomeTable& b) {
    if (b.rows != scheme.n_povms() || b.cols != scheme.n_outcomes())
        throw PreconditionError("solver: table shape does not match the scheme");
}

// PSD projection in coordinate space
std::vector<double> project_psd_coords(const std::vector<double>& y, std::size_t d) {
    return hermitian_coords(psd_project(hermitian_from_coords(y, d)));
}

double trace_of_coords(const std::vector<double>& y, std::size_t d) {
    double t = 0.0;
    for (std::size_t k = 0; k < d; ++k) t += y[k];
    return t;
}

// Euclidean projection of v onto the l1 ball of the given radius
void l1_ball_project(double* v, std::size_t n, double radius) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(v[i]);
    if (l1 <= radius) return;
    std::vector<double> mags(v, v + n);
    for (double& m : mags) m = std::abs(m);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        cum += mags[k];
        const double cand = (cum - radius) / static_cast<double>(k + 1);
        if (k + 1 == n || mags[k + 1] <= cand) {
            theta = cand;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(v[i]) - theta;
        v[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
    }
}

void constraint_ball_project(std::vector<double>& z, std::size_t rows, std::size_t cols,
                             double epsilon, ConstraintNorm norm) {
    if (norm == ConstraintNorm::HilbertSchmidt) {
        const double n = norm2(z);
        if (n > epsilon) {
            const double s = epsilon / n;
            for (double& v : z) v *= s;
        }
    } else {
        for (std::size_t i = 0; i < rows; ++i) l1_ball_project(&z[i * cols], cols, epsilon);
    }
}

RecoveryResult finish(std::string name, const std::vector<double>& y, const RMatrix& rep,
                      const std::vector<double>& bf, std::size_t d, std::size_t iterations,
                      SolveStatus status) {
    RecoveryResult r;
    r.solver = std::move(name);
    r.estimate = hermitian_from_coords(y, d);
    std::vector<double> ry = rep.apply(y);
    for (std::size_t i = 0; i < ry.size(); ++i) ry[i] -= bf[i];
    r.residual = norm2(ry);
    r.iterations = iterations;
    r.status = status;
    r.converged = status == SolveStatus::Converged;
    try {
        auto [vec, gap] = extract_pure(r.estimate);
        r.pure_vector = std::move(vec);
        r.purity_gap = gap;
    } catch (const PreconditionError&) {
        r.pure_vector.clear();
        r.purity_gap = 1.0;
    }
    return r;
}

} // namespace

RecoveryResult solve_least_squares(const MeasurementScheme& scheme, const OutcomeTable& b,
                                   const SolverOptions& opts) {
    check_shapes(scheme, b);
    if (opts.max_iters < 1 || !(opts.rel_tol > 0.0))
        throw PreconditionError("solver options: max_iters >= 1 and rel_tol > 0 required");

    const RMatrix& rep = scheme.matrix_rep();
    const std::size_t d = scheme.dim();
    const std::size_t n = d * d;
    const std::vector<double> bf = flat(b);

    const double sigma = spectral_norm_estimate(rep) * (1.0 + 1e-6);
    if (sigma == 0.0)
        return finish("lsq", std::vector<double>(n, 0.0), rep, bf, d, 0, SolveStatus::Converged);
    const double step = 1.0 / (sigma * sigma);

    auto objective = [&](const std::vector<double>& x) {
        std::vector<double> r = rep.apply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= bf[i];
        return 0.5 * dot(r, r);
    };

    std::vector<double> x(n, 0.0), yv(n, 0.0);
    double fx = objective(x);
    double t = 1.0;

    for (std::size_t k = 1; k <= opts.max_iters; ++k) {
        // z = proj_PSD(y - step * R^T (R y - b))
        std::vector<double> r = rep.apply(yv);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= bf[i];
        std::vector<double> g = rep.apply_transpose(r);
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = yv[i] - step * g[i];
        z = project_psd_coords(z, d);

        const double fz = objective(z);
        if (fz > fx) {
            // reject and restart momentum; the next plain gradient step from
            // x cannot increase the objective (step <= 1/L)
            yv = x;
            t = 1.0;
            continue;
        }
        assert(fz <= fx + 1e-12 * (1.0 + fx));

        double gap2 = 0.0, zn2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dlt = z[i] - yv[i];
            gap2 += dlt * dlt;
            zn2 += z[i] * z[i];
        }
        const bool done = std::sqrt(gap2) <= opts.rel_tol * std::max(1.0, std::sqrt(zn2));

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double mom = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < n; ++i) yv[i] = z[i] + mom * (z[i] - x[i]);
        x = std::move(z);
        fx = fz;
        t = t_next;

        if (done) return finish("lsq", x, rep, bf, d, k, SolveStatus::Converged);
    }
    return finish("lsq", x, rep, bf, d, opts.max_iters, SolveStatus::IterationLimit);
}

RecoveryResult solve_trace_min(const MeasurementScheme& scheme, const OutcomeTable& b,
                               double epsilon, const SolverOptions& opts) {
    check_shapes(scheme, b);
    if (!(epsilon > 0.0)) throw PreconditionError("solve_trace_min: epsilon must be > 0");
    if (opts.max_iters < 1 || !(opts.rel_tol > 0.0))
        throw PreconditionError("solver options: max_iters >= 1 and rel_tol > 0 required");

    const RMatrix& rep = scheme.matrix_rep();
    const std::size_t d = scheme.dim();
    const std::size_t n = d * d;
    const std::size_t nr = rep.rows();
    const std::vector<double> bf = flat(b);

    const double sigma = spectral_norm_estimate(rep) * (1.0 + 1e-6);
    const double l2 = sigma * sigma;

    double rho = opts.penalty > 0.0 ? opts.penalty : 1.0;
    double tau = 1.0 / (1.01 * rho * l2);

    std::vector<double> y(n, 0.0);
    std::vector<double> z(nr);
    for (std::size_t i = 0; i < nr; ++i) z[i] = -bf[i];
    constraint_ball_project(z, b.rows, b.cols, epsilon, opts.constraint_norm);
    std::vector<double> u(nr, 0.0);

    // constraint violation in whichever norm defines the epsilon ball
    auto feas_violation = [&](const std::vector<double>& ryv) {
        if (opts.constraint_norm == ConstraintNorm::HilbertSchmidt) {
            double s2 = 0.0;
            for (std::size_t i = 0; i < nr; ++i) {
                const double dlt = ryv[i] - bf[i];
                s2 += dlt * dlt;
            }
            return std::sqrt(s2);
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < b.rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < b.cols; ++j)
                s += std::abs(ryv[i * b.cols + j] - bf[i * b.cols + j]);
            worst = std::max(worst, s);
        }
        return worst;
    };

    const double feas_slack = epsilon * (1.0 + opts.rel_tol);
    double best_trace = INFINITY;
    std::vector<double> incumbent;
    std::size_t iterations = opts.max_iters;
    bool stopped = false;

    std::vector<double> ry = rep.apply(y);
    for (std::size_t k = 1; k <= opts.max_iters; ++k) {
        // linearized Y-update: gradient of tr(Y) + (rho/2)||R y - b - z + u||^2
        std::vector<double> v(nr);
        for (std::size_t i = 0; i < nr; ++i) v[i] = ry[i] - bf[i] - z[i] + u[i];
        std::vector<double> grad = rep.apply_transpose(v);
        for (std::size_t i = 0; i < n; ++i) grad[i] *= rho;
        for (std::size_t i = 0; i < d; ++i) grad[i] += 1.0; // d/dy tr(Y)
        for (std::size_t i = 0; i < n; ++i) y[i] -= tau * grad[i];
        y = project_psd_coords(y, d);
        ry = rep.apply(y);

        const double res = feas_violation(ry);
        if (res <= feas_slack) {
            const double tr = trace_of_coords(y, d);
            if (tr < best_trace) {
                best_trace = tr;
                incumbent = y;
            }
        }

        // z-update: projection onto the epsilon ball
        std::vector<double> w(nr), z_old = z;
        for (std::size_t i = 0; i < nr; ++i) w[i] = ry[i] - bf[i] + u[i];
        z = w;
        constraint_ball_project(z, b.rows, b.cols, epsilon, opts.constraint_norm);

        // scaled dual update and residuals
        double pri2 = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = ry[i] - bf[i] - z[i];
            u[i] += r;
            pri2 += r * r;
        }
        const double pri = std::sqrt(pri2);
        std::vector<double> dz(nr);
        for (std::size_t i = 0; i < nr; ++i) dz[i] = z[i] - z_old[i];
        const double dua = rho * norm2(rep.apply_transpose(dz));

        const double pri_scale = std::max(norm2(ry), norm2(z) + norm2(bf));
        const double dua_scale = rho * norm2(rep.apply_transpose(u));
        const double eps_pri = 1e-12 * std::sqrt(static_cast<double>(nr)) +
                               opts.rel_tol * pri_scale;
        const double eps_dua = 1e-12 * std::sqrt(static_cast<double>(n)) +
                               opts.rel_tol * dua_scale;
        if (pri <= eps_pri && dua <= eps_dua && !incumbent.empty()) {
            iterations = k;
            stopped = true;
            break;
        }

        // residual balancing on scale-free residuals (each normalized by the
        // scale its tolerance uses); checking periodically lets the residuals
        // settle between penalty changes instead of reacting to transients
        if (k >= 10 && k % 50 == 0) {
            const double pn = pri * std::max(dua_scale, 1e-300);
            const double dn = dua * std::max(pri_scale, 1e-300);
            if (pn > 2.0 * dn && rho < 1e8) {
                rho *= 2.0;
                for (double& ui : u) ui *= 0.5;
                tau = 1.0 / (1.01 * rho * l2);
            } else if (dn > 2.0 * pn && rho > 1e-8) {
                rho *= 0.5;
                for (double& ui : u) ui *= 2.0;
                tau = 1.0 / (1.01 * rho * l2);
            }
        }
    }

    if (incumbent.empty())
        return finish("trace-min", y, rep, bf, d, iterations, SolveStatus::Infeasible);
    return finish("trace-min", incumbent, rep, bf, d, iterations,
                  stopped ? SolveStatus::Converged : SolveStatus::IterationLimit);
}

std::pair<std::vector<cplx>, double> extract_pure(const HermitianMatrix& y) {
    const EigenDecomposition e = hermitian_eig(y);
    const double l1 = e.eigenvalues.front();
    if (!(l1 > 0.0))
        throw PreconditionError("extract_pure: matrix must be PSD and nonzero");
    const double l2 = y.dim() > 1 ? e.eigenvalues[1] : 0.0;

    std::vector<cplx> v = e.eigenvectors.column(0);
    double top = 0.0;
    for (const cplx& c : v) top = std::max(top, std::abs(c));
    for (cplx& c : v) {
        if (std::abs(c) > 1e-12 * top) {
            const cplx phase = std::conj(c) / std::abs(c);
            for (cplx& w : v) w *= phase;
            break;
        }
    }
    return {std::move(v), l2 / l1};
}

} // namespace tomo
