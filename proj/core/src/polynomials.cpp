#include "tomo/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tomo/errors.hpp"
#include "tomo/linalg.hpp"

namespace tomo {

PolynomialFamily PolynomialFamily::chebyshev_u() {
    return PolynomialFamily(Kind::ChebyshevU, "chebyshev-u", 1.0, true);
}

PolynomialFamily PolynomialFamily::hermite() {
    return PolynomialFamily(Kind::Hermite, "hermite", 1.0, false);
}

PolynomialFamily PolynomialFamily::custom(std::string name, std::vector<double> a,
                                          std::vector<double> b, std::vector<double> c,
                                          double k0) {
    if (a.size() != b.size() || a.size() != c.size() || a.empty())
        throw PreconditionError("custom family: A, B, C must be non-empty and equally sized");
    if (k0 == 0.0) throw PreconditionError("custom family: k0 must be nonzero");
    for (double an : a)
        if (!(an > 0.0)) throw PreconditionError("custom family: every A_n must be > 0");
    PolynomialFamily f(Kind::Custom, std::move(name), k0, false);
    f.ca_ = std::move(a);
    f.cb_ = std::move(b);
    f.cc_ = std::move(c);
    return f;
}

double PolynomialFamily::a(std::size_t n) const {
    switch (kind_) {
        case Kind::ChebyshevU: return 2.0;
        case Kind::Hermite: return 1.0;
        default:
            if (n >= ca_.size())
                throw PreconditionError("custom family: degree exceeds coefficient table");
            return ca_[n];
    }
}

double PolynomialFamily::b(std::size_t n) const {
    switch (kind_) {
        case Kind::ChebyshevU: return 0.0;
        case Kind::Hermite: return 0.0;
        default:
            if (n >= cb_.size())
                throw PreconditionError("custom family: degree exceeds coefficient table");
            return cb_[n];
    }
}

double PolynomialFamily::c(std::size_t n) const {
    switch (kind_) {
        case Kind::ChebyshevU: return 1.0;
        case Kind::Hermite: return static_cast<double>(n);
        default:
            if (n >= cc_.size())
                throw PreconditionError("custom family: degree exceeds coefficient table");
            return cc_[n];
    }
}

double PolynomialFamily::leading_coefficient(std::size_t n) const {
    double k = k0_;
    for (std::size_t i = 0; i < n; ++i) k *= a(i);
    return k;
}

std::vector<double> PolynomialFamily::evaluate_sequence(double x, std::size_t n_max) const {
    std::vector<double> p(n_max + 1);
    double prev = 0.0, cur = k0_;
    p[0] = cur;
    for (std::size_t n = 0; n < n_max; ++n) {
        const double next = (a(n) * x + b(n)) * cur - c(n) * prev;
        prev = cur;
        cur = next;
        p[n + 1] = cur;
    }
    return p;
}

std::pair<double, double> PolynomialFamily::evaluate_with_derivative(double x,
                                                                     std::size_t n) const {
    double p_prev = 0.0, p_cur = k0_;
    double d_prev = 0.0, d_cur = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ak = a(k), bk = b(k), ck = c(k);
        const double p_next = (ak * x + bk) * p_cur - ck * p_prev;
        const double d_next = ak * p_cur + (ak * x + bk) * d_cur - ck * d_prev;
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    return {p_cur, d_cur};
}

double PolynomialFamily::norm_sq_ratio(std::size_t n) const {
    double h = 1.0;
    for (std::size_t m = 1; m <= n; ++m) {
        const double f = a(m - 1) * c(m) / a(m);
        if (!(f > 0.0))
            throw PreconditionError("norm_sq_ratio: recurrence is not positive definite");
        h *= f;
    }
    return h;
}

namespace {

// step ratio r_n = sqrt(h_{n+1}/h_n) of the orthonormalized recurrence
// q_{n+1} = ((a_n x + b_n) q_n - (c_n / r_{n-1}) q_{n-1}) / r_n
double step_ratio(const PolynomialFamily& f, std::size_t n) {
    const double h = f.a(n) * f.c(n + 1) / f.a(n + 1);
    if (!(h > 0.0))
        throw PreconditionError("evaluate_orthonormal: recurrence is not positive definite");
    return std::sqrt(h);
}

} // namespace

std::vector<double> PolynomialFamily::evaluate_orthonormal(double x, std::size_t n_max) const {
    std::vector<double> q(n_max + 1);
    double prev = 0.0, cur = k0_;
    q[0] = cur;
    double r_prev = 1.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        const double r = step_ratio(*this, n);
        const double next = ((a(n) * x + b(n)) * cur - (c(n) / r_prev) * prev) / r;
        prev = cur;
        cur = next;
        q[n + 1] = cur;
        r_prev = r;
    }
    return q;
}

std::vector<double> PolynomialFamily::evaluate_normalized(double x, std::size_t n_max) const {
    std::vector<double> q(n_max + 1);
    double prev = 0.0, cur = k0_;
    q[0] = cur;
    double r_prev = 1.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        const double r = step_ratio(*this, n);
        double next = ((a(n) * x + b(n)) * cur - (c(n) / r_prev) * prev) / r;
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) { // rescale; only the direction matters
            const double s = 1.0 / std::abs(cur);
            for (std::size_t k = 0; k <= n; ++k) q[k] *= s;
            prev *= s;
            cur *= s;
        }
        q[n + 1] = cur;
        r_prev = r;
    }
    double nrm = 0.0;
    for (double v : q) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0)
        throw PreconditionError("evaluate_normalized: zero polynomial vector");
    for (double& v : q) v /= nrm;
    return q;
}

std::vector<double> PolynomialFamily::roots(std::size_t n) const {
    if (n < 1) throw PreconditionError("roots: n must be >= 1");

    if (kind_ == Kind::ChebyshevU) {
        // zeros of U_n are cos((j+1) pi / (n+1)); emit ascending
        std::vector<double> r(n);
        const double denom = static_cast<double>(n) + 1.0;
        for (std::size_t j = 0; j < n; ++j)
            r[j] = std::cos(static_cast<double>(n - j) * std::numbers::pi / denom);
        return r;
    }

    // Golub-Welsch: eigenvalues of the symmetric tridiagonal Jacobi matrix of
    // the monic recurrence, alpha_k = -B_k/A_k, beta_k = C_k/(A_k A_{k-1})
    HermitianMatrix j(n);
    for (std::size_t k = 0; k < n; ++k) j.set(k, k, -b(k) / a(k));
    for (std::size_t k = 1; k < n; ++k) {
        const double beta = c(k) / (a(k) * a(k - 1));
        if (!(beta > 0.0))
            throw PreconditionError("roots: recurrence is not positive definite (beta <= 0)");
        j.set(k - 1, k, std::sqrt(beta));
    }
    EigenDecomposition e = hermitian_eig(j);
    std::vector<double> r(e.eigenvalues.rbegin(), e.eigenvalues.rend());
    return r;
}

} // namespace tomo
