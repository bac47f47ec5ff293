#include "tomo/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/linalg.hpp"

namespace tomo {

OrthonormalBasis::OrthonormalBasis(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw PreconditionError("OrthonormalBasis: matrix must be square and non-empty");
    const double r = unitarity_residual();
    if (r > 1e-10)
        throw PreconditionError("OrthonormalBasis: unitarity residual " + std::to_string(r) +
                                " exceeds 1e-10");
}

OrthonormalBasis OrthonormalBasis::canonical(std::size_t d) {
    return OrthonormalBasis(CMatrix::identity(d));
}

double OrthonormalBasis::unitarity_residual() const {
    const std::size_t d = m_.rows();
    CMatrix g = m_.adjoint() * m_;
    for (std::size_t i = 0; i < d; ++i) g(i, i) -= 1.0;
    // g is Hermitian up to rounding; spectral norm = max |eigenvalue|
    CMatrix sym(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) sym(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    EigenDecomposition e = hermitian_eig(HermitianMatrix::from_matrix(sym, 1e-6));
    double r = 0.0;
    for (double lam : e.eigenvalues) r = std::max(r, std::abs(lam));
    return r;
}

bool alpha_valid(double alpha, std::size_t d) {
    for (std::size_t j = 1; j < d; ++j) {
        const double t = static_cast<double>(j) * alpha / std::numbers::pi;
        if (std::abs(t - std::round(t)) < 1e-12) return false;
    }
    return true;
}

double default_alpha(std::size_t d) { return std::numbers::pi / static_cast<double>(d); }

namespace {

// columns from normalized polynomial sequences at the given points, points
// in the order supplied (descending roots for the canonical column order)
CMatrix polynomial_columns(const PolynomialFamily& family, const std::vector<double>& points,
                           std::size_t d) {
    CMatrix m(d, d);
    for (std::size_t j = 0; j < points.size(); ++j) {
        const std::vector<double> v = family.evaluate_normalized(points[j], points.size() - 1);
        for (std::size_t k = 0; k < v.size(); ++k) m(k, j) = v[k];
    }
    return m;
}

CMatrix phase_twist(const CMatrix& b, double alpha) {
    const std::size_t d = b.rows();
    CMatrix out(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const cplx ph = std::polar(1.0, alpha * static_cast<double>(k));
        for (std::size_t j = 0; j < d; ++j) out(k, j) = ph * b(k, j);
    }
    return out;
}

} // namespace

FiveBasisScheme build_scheme(const PolynomialFamily& family, std::size_t d, double alpha) {
    if (d < 2) throw PreconditionError("build_scheme: dimension must be >= 2");
    for (std::size_t j = 1; j < d; ++j) {
        const double t = static_cast<double>(j) * alpha / std::numbers::pi;
        if (std::abs(t - std::round(t)) < 1e-12)
            throw PreconditionError("build_scheme: alpha invalid, j*alpha/pi is an integer at j=" +
                                    std::to_string(j));
    }

    std::vector<double> xs = family.roots(d);
    std::vector<double> ys = family.roots(d - 1);
    std::reverse(xs.begin(), xs.end()); // descending: column j sits at the j-th largest root
    std::reverse(ys.begin(), ys.end());

    CMatrix b1 = polynomial_columns(family, xs, d);

    CMatrix b3(d, d);
    {
        CMatrix low = polynomial_columns(family, ys, d); // last row stays zero
        for (std::size_t j = 0; j + 1 < d; ++j)
            for (std::size_t k = 0; k < d; ++k) b3(k, j) = low(k, j);
        b3(d - 1, d - 1) = 1.0; // completed by the last canonical vector
    }

    CMatrix b2 = phase_twist(b1, alpha);
    CMatrix b4 = phase_twist(b3, alpha);

    return FiveBasisScheme{
        d,
        alpha,
        family,
        {OrthonormalBasis::canonical(d), OrthonormalBasis(std::move(b1)),
         OrthonormalBasis(std::move(b2)), OrthonormalBasis(std::move(b3)),
         OrthonormalBasis(std::move(b4))},
        std::move(xs),
        std::move(ys)};
}

namespace {

// do the two bases contain the same vectors up to order and global phases?
bool bases_coincide(const OrthonormalBasis& a, const OrthonormalBasis& b) {
    const std::size_t d = a.dim();
    CMatrix g = a.matrix().adjoint() * b.matrix();
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t big = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const double m = std::abs(g(i, j));
            if (m >= 1.0 - 1e-8)
                ++big;
            else if (m > 1e-8)
                return false;
        }
        if (big != 1) return false;
    }
    return true;
}

// relative error of ||v||^2 against the Christoffel-Darboux closed form
// (k_{n-1}/k_n) p_n'(x) p_{n-1}(x) at each zero x of p_n, in the
// weight-orthonormalized scaling the columns are built from: with
// q_k = p_k / sqrt(h_k/h_0) this reads sum q_k^2 = (k_{n-1}/k_n) (p_n'/sh) q_{n-1},
// sh = sqrt(h_{n-1}/h_0)
double cd_identity_error(const PolynomialFamily& family, const std::vector<double>& zeros,
                         std::size_t n) {
    const double kratio = 1.0 / family.a(n - 1); // k_{n-1}/k_n
    const double sh = std::sqrt(family.norm_sq_ratio(n - 1));
    double worst = 0.0;
    for (double x : zeros) {
        const std::vector<double> q = family.evaluate_orthonormal(x, n - 1);
        double direct = 0.0;
        for (double v : q) direct += v * v;
        const auto [pn, dpn] = family.evaluate_with_derivative(x, n);
        (void)pn;
        const double cd = kratio * (dpn / sh) * q[n - 1];
        worst = std::max(worst, std::abs(direct - cd) / std::abs(cd));
    }
    return worst;
}

} // namespace

bool ValidationReport::pass(double tol) const {
    for (double r : unitarity_residual)
        if (r > 1e-10) return false;
    return alpha_ok && cd_rel_error_b1 <= tol && cd_rel_error_b3 <= tol &&
           min_root_separation > 1e-10;
}

ValidationReport validate_scheme(const FiveBasisScheme& scheme, double tol) {
    ValidationReport rep;
    for (std::size_t i = 0; i < 5; ++i)
        rep.unitarity_residual[i] = scheme.bases[i].unitarity_residual();

    rep.alpha_ok = alpha_valid(scheme.alpha, scheme.dim);
    rep.cd_rel_error_b1 = cd_identity_error(scheme.family, scheme.roots_x, scheme.dim);
    rep.cd_rel_error_b3 = scheme.dim >= 2
                              ? cd_identity_error(scheme.family, scheme.roots_y, scheme.dim - 1)
                              : 0.0;

    double sep = INFINITY;
    for (double x : scheme.roots_x)
        for (double y : scheme.roots_y) sep = std::min(sep, std::abs(x - y));
    rep.min_root_separation = sep;

    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (bases_coincide(scheme.bases[i], scheme.bases[j])) rep.coincident_bases.push_back({i, j});

    (void)tol;
    return rep;
}

} // namespace tomo
