#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tomo/bases.hpp"
#include "tomo/linalg.hpp"
#include "tomo/matrix.hpp"
#include "tomo/rng.hpp"

namespace tomo {

// Hilbert-Schmidt-orthonormal Hermitian coordinates (generalized Gell-Mann
// style): d diagonal units E_kk, then for each pair k<l (lexicographic) the
// symmetric and antisymmetric units (|k><l| +- |l><k|)/sqrt(2) interleaved.
// coords(H) . coords(G) = tr(H G) exactly.
std::vector<double> hermitian_coords(const HermitianMatrix& h);
HermitianMatrix hermitian_from_coords(const std::vector<double>& c, std::size_t d);

class POVM {
public:
    POVM(std::size_t dim, std::vector<HermitianMatrix> effects);
    static POVM from_basis(const OrthonormalBasis& basis);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t n_outcomes() const noexcept { return effects_.size(); }
    const HermitianMatrix& effect(std::size_t j) const { return effects_[j]; }

    // min eigenvalue over effects and completeness defect ||sum - I||_HS
    double min_effect_eigenvalue() const;
    double completeness_defect() const;

    // (1-eta) P + eta tr(P) I/d per effect
    POVM depolarized(double eta) const;

private:
    std::size_t dim_;
    std::vector<HermitianMatrix> effects_;
};

// probabilities / data tables: one row per POVM, one column per outcome
struct OutcomeTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major

    OutcomeTable() = default;
    OutcomeTable(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double row_sum(std::size_t i) const;
    double hs_norm() const;

    OutcomeTable& operator+=(const OutcomeTable& o);
    OutcomeTable operator-(const OutcomeTable& o) const;
};

class MeasurementScheme {
public:
    explicit MeasurementScheme(std::vector<POVM> povms);
    static MeasurementScheme from_bases(const FiveBasisScheme& scheme);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t n_povms() const noexcept { return povms_.size(); }
    std::size_t n_outcomes() const noexcept { return m_; }
    const POVM& povm(std::size_t i) const { return povms_[i]; }

    OutcomeTable forward_map(const HermitianMatrix& x) const;

    // (l*m) x d^2 real matrix acting on Hermitian coordinates; row i*m+j is
    // coords of effect P_i(j), so rep * coords(X) = flattened forward_map(X)
    const RMatrix& matrix_rep() const noexcept { return rep_; }

    MeasurementScheme depolarized(double eta) const;

private:
    std::size_t dim_;
    std::size_t m_;
    std::vector<POVM> povms_;
    RMatrix rep_; // built at construction so shared readers never race
};

class DensityMatrix {
public:
    explicit DensityMatrix(HermitianMatrix h); // validates PSD + unit trace
    const HermitianMatrix& matrix() const noexcept { return h_; }
    std::size_t dim() const noexcept { return h_.dim(); }

private:
    HermitianMatrix h_;
};

// normalized standard complex Gaussian vector (Haar on the unit sphere)
std::vector<cplx> sample_haar_vector(std::size_t d, Rng& rng);
DensityMatrix sample_haar_pure(std::size_t d, Rng& rng);

// Hilbert-Schmidt ensemble: G G^† / tr(G G^†) with G square complex Gaussian
DensityMatrix sample_hs_mixed(std::size_t d, Rng& rng);

// uniform on the HS-sphere of radius epsilon in table space
OutcomeTable sample_noise(std::size_t l, std::size_t m, double epsilon, Rng& rng);

} // namespace tomo
