#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tomo {

// Orthogonal polynomial family defined by the three-term recurrence
//   p_{n+1}(x) = (a_n x + b_n) p_n(x) - c_n p_{n-1}(x),  p_{-1} = 0, p_0 = k0.
// Built-ins: Chebyshev-U (closed-form roots) and probabilists' Hermite.
// Custom families carry explicit per-degree coefficient vectors.
class PolynomialFamily {
public:
    static PolynomialFamily chebyshev_u();
    static PolynomialFamily hermite();
    // a,b,c must cover every degree used later; c[0] is unused by the recurrence.
    static PolynomialFamily custom(std::string name, std::vector<double> a, std::vector<double> b,
                                   std::vector<double> c, double k0);

    const std::string& name() const noexcept { return name_; }
    bool has_closed_form_roots() const noexcept { return closed_form_roots_; }
    double k0() const noexcept { return k0_; }

    bool is_custom() const noexcept { return kind_ == Kind::Custom; }
    // custom-family recurrence tables (empty for the builtins)
    const std::vector<double>& table_a() const noexcept { return ca_; }
    const std::vector<double>& table_b() const noexcept { return cb_; }
    const std::vector<double>& table_c() const noexcept { return cc_; }

    double a(std::size_t n) const;
    double b(std::size_t n) const;
    double c(std::size_t n) const;

    // k_n = k0 * prod_{i<n} a_i
    double leading_coefficient(std::size_t n) const;

    // (p_0(x), ..., p_{n_max}(x))
    std::vector<double> evaluate_sequence(double x, std::size_t n_max) const;

    // (p_n(x), p_n'(x)); derivative via the differentiated recurrence
    std::pair<double, double> evaluate_with_derivative(double x, std::size_t n) const;

    // h_n / h_0, the squared-norm ratio under the orthogonality weight; the
    // recurrence fixes it as prod_{m=1..n} a_{m-1} c_m / a_m (1 for Chebyshev-U,
    // n! for Hermite). Needs coefficients up to index n.
    double norm_sq_ratio(std::size_t n) const;

    // weight-orthonormalized values (q_0(x), ..., q_{n_max}(x)) with
    // q_n = p_n / sqrt(h_n/h_0); basis columns are built from these.
    // Needs coefficients up to index n_max.
    std::vector<double> evaluate_orthonormal(double x, std::size_t n_max) const;

    // evaluate_orthonormal scaled to unit Euclidean norm, with intermediate
    // rescaling so huge polynomial values never overflow
    std::vector<double> evaluate_normalized(double x, std::size_t n_max) const;

    // the n zeros of p_n, strictly ascending; closed form for Chebyshev-U,
    // Golub-Welsch (Jacobi-matrix eigenvalues) otherwise
    std::vector<double> roots(std::size_t n) const;

private:
    enum class Kind { ChebyshevU, Hermite, Custom };

    PolynomialFamily(Kind kind, std::string name, double k0, bool closed_form)
        : kind_(kind), name_(std::move(name)), k0_(k0), closed_form_roots_(closed_form) {}

    Kind kind_;
    std::string name_;
    double k0_ = 1.0;
    bool closed_form_roots_ = false;
    std::vector<double> ca_, cb_, cc_; // custom coefficients
};

} // namespace tomo
