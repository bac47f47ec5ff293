#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "tomo/matrix.hpp"
#include "tomo/polynomials.hpp"

namespace tomo {

// Columns are the basis vectors; unitary to 1e-10 by construction.
class OrthonormalBasis {
public:
    explicit OrthonormalBasis(CMatrix m);
    static OrthonormalBasis canonical(std::size_t d);

    std::size_t dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }
    std::vector<cplx> vector(std::size_t j) const { return m_.column(j); }

    // spectral norm of B^†B - I
    double unitarity_residual() const;

private:
    CMatrix m_;
};

// The five-basis measurement design built from an orthogonal polynomial
// family: basis 0 is canonical; bases 1,2 live on the zeros of p_d; bases
// 3,4 on the zeros of p_{d-1} (last component zero) completed by e_{d-1}.
// Bases 2 and 4 are the phase twists D_alpha * (basis 1|3) with
// D_alpha = diag(1, e^{i alpha}, ..., e^{i(d-1) alpha}).
struct FiveBasisScheme {
    std::size_t dim = 0;
    double alpha = 0.0;
    PolynomialFamily family;
    std::array<OrthonormalBasis, 5> bases;
    std::vector<double> roots_x; // zeros of p_d, descending (column order)
    std::vector<double> roots_y; // zeros of p_{d-1}, descending (column order)
};

struct ValidationReport {
    std::array<double, 5> unitarity_residual{};
    double cd_rel_error_b1 = 0.0;          // Christoffel-Darboux norm identity, basis 1
    double cd_rel_error_b3 = 0.0;          // same on the zeros of p_{d-1}, basis 3
    double min_root_separation = 0.0;      // min |x_i - y_j|
    bool alpha_ok = false;
    std::vector<std::pair<int, int>> coincident_bases; // e.g. (0,3) at d=2

    bool pass(double tol) const;
};

// alpha is valid iff e^{ij alpha} is non-real for j = 1..d-1
bool alpha_valid(double alpha, std::size_t d);
double default_alpha(std::size_t d); // pi/d

// throws PreconditionError for d < 2 or invalid alpha (names the violating j)
FiveBasisScheme build_scheme(const PolynomialFamily& family, std::size_t d, double alpha);

ValidationReport validate_scheme(const FiveBasisScheme& scheme, double tol = 1e-8);

} // namespace tomo
