#include "tomo/measurement.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

std::vector<double> hermitian_coords(const HermitianMatrix& h) {
    const std::size_t d = h.dim();
    std::vector<double> c(d * d);
    for (std::size_t k = 0; k < d; ++k) c[k] = h.matrix()(k, k).real();
    std::size_t idx = d;
    const double s2 = std::numbers::sqrt2;
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = k + 1; l < d; ++l) {
            const cplx v = h.matrix()(k, l);
            c[idx++] = s2 * v.real();
            c[idx++] = -s2 * v.imag();
        }
    }
    return c;
}

HermitianMatrix hermitian_from_coords(const std::vector<double>& c, std::size_t d) {
    if (c.size() != d * d)
        throw PreconditionError("hermitian_from_coords: expected " + std::to_string(d * d) +
                                " coordinates, got " + std::to_string(c.size()));
    HermitianMatrix h(d);
    for (std::size_t k = 0; k < d; ++k) h.set(k, k, c[k]);
    std::size_t idx = d;
    const double inv_s2 = 1.0 / std::numbers::sqrt2;
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = k + 1; l < d; ++l) {
            const double cs = c[idx++];
            const double ca = c[idx++];
            h.set(k, l, cplx{cs * inv_s2, -ca * inv_s2});
        }
    }
    return h;
}

POVM::POVM(std::size_t dim, std::vector<HermitianMatrix> effects)
    : dim_(dim), effects_(std::move(effects)) {
    if (dim_ == 0 || effects_.empty())
        throw PreconditionError("POVM: need a positive dimension and at least one effect");
    for (const auto& e : effects_)
        if (e.dim() != dim_) throw PreconditionError("POVM: effect dimension mismatch");
    if (min_effect_eigenvalue() < -1e-10)
        throw PreconditionError("POVM: an effect has eigenvalue below -1e-10");
    if (completeness_defect() > 1e-10)
        throw PreconditionError("POVM: effects do not sum to the identity (defect > 1e-10)");
}

POVM POVM::from_basis(const OrthonormalBasis& basis) {
    std::vector<HermitianMatrix> effects;
    effects.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j)
        effects.push_back(HermitianMatrix::outer(basis.vector(j)));
    return POVM(basis.dim(), std::move(effects));
}

double POVM::min_effect_eigenvalue() const {
    double lo = INFINITY;
    for (const auto& e : effects_) {
        const EigenDecomposition dec = hermitian_eig(e);
        lo = std::min(lo, dec.eigenvalues.back());
    }
    return lo;
}

double POVM::completeness_defect() const {
    HermitianMatrix sum(dim_);
    for (const auto& e : effects_) sum += e;
    sum -= HermitianMatrix::identity(dim_);
    return sum.matrix().frobenius_norm();
}

POVM POVM::depolarized(double eta) const {
    if (eta < 0.0 || eta > 1.0) throw PreconditionError("depolarized: eta must be in [0,1]");
    std::vector<HermitianMatrix> out;
    out.reserve(effects_.size());
    for (const auto& e : effects_) {
        HermitianMatrix mixed = e;
        mixed.scale(1.0 - eta);
        const double w = eta * e.trace_real() / static_cast<double>(dim_);
        for (std::size_t k = 0; k < dim_; ++k)
            mixed.set(k, k, mixed.matrix()(k, k).real() + w);
        out.push_back(std::move(mixed));
    }
    return POVM(dim_, std::move(out));
}

double OutcomeTable::row_sum(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += (*this)(i, j);
    return s;
}

double OutcomeTable::hs_norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
}

OutcomeTable& OutcomeTable::operator+=(const OutcomeTable& o) {
    if (rows != o.rows || cols != o.cols)
        throw PreconditionError("OutcomeTable: shape mismatch in +=");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

OutcomeTable OutcomeTable::operator-(const OutcomeTable& o) const {
    if (rows != o.rows || cols != o.cols)
        throw PreconditionError("OutcomeTable: shape mismatch in -");
    OutcomeTable r(rows, cols);
    for (std::size_t i = 0; i < data.size(); ++i) r.data[i] = data[i] - o.data[i];
    return r;
}

MeasurementScheme::MeasurementScheme(std::vector<POVM> povms)
    : dim_(0), m_(0), povms_(std::move(povms)), rep_(0, 0) {
    if (povms_.empty()) throw PreconditionError("MeasurementScheme: need at least one POVM");
    dim_ = povms_[0].dim();
    m_ = povms_[0].n_outcomes();
    for (const auto& p : povms_)
        if (p.dim() != dim_ || p.n_outcomes() != m_)
            throw PreconditionError("MeasurementScheme: POVMs must share dim and outcome count");

    rep_ = RMatrix(povms_.size() * m_, dim_ * dim_);
    for (std::size_t i = 0; i < povms_.size(); ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            const std::vector<double> row = hermitian_coords(povms_[i].effect(j));
            for (std::size_t k = 0; k < row.size(); ++k) rep_(i * m_ + j, k) = row[k];
        }
    }
}

MeasurementScheme MeasurementScheme::from_bases(const FiveBasisScheme& scheme) {
    std::vector<POVM> povms;
    povms.reserve(5);
    for (const auto& b : scheme.bases) povms.push_back(POVM::from_basis(b));
    return MeasurementScheme(std::move(povms));
}

OutcomeTable MeasurementScheme::forward_map(const HermitianMatrix& x) const {
    if (x.dim() != dim_) throw PreconditionError("forward_map: dimension mismatch");
    OutcomeTable t(povms_.size(), m_);
    for (std::size_t i = 0; i < povms_.size(); ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            const CMatrix& p = povms_[i].effect(j).matrix();
            double v = 0.0; // tr(X P) = sum_{ab} X_ab P_ba, real by hermiticity
            for (std::size_t a = 0; a < dim_; ++a)
                for (std::size_t b = 0; b < dim_; ++b)
                    v += x.matrix()(a, b).real() * p(b, a).real() -
                         x.matrix()(a, b).imag() * p(b, a).imag();
            t(i, j) = v;
        }
    }
    return t;
}

MeasurementScheme MeasurementScheme::depolarized(double eta) const {
    std::vector<POVM> out;
    out.reserve(povms_.size());
    for (const auto& p : povms_) out.push_back(p.depolarized(eta));
    return MeasurementScheme(std::move(out));
}

DensityMatrix::DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {
    if (std::abs(h_.trace_real() - 1.0) > 1e-12)
        throw PreconditionError("DensityMatrix: trace must equal 1 to 1e-12");
    const EigenDecomposition e = hermitian_eig(h_);
    if (e.eigenvalues.back() < -1e-10)
        throw PreconditionError("DensityMatrix: negative eigenvalue below -1e-10");
}

std::vector<cplx> sample_haar_vector(std::size_t d, Rng& rng) {
    if (d < 1) throw PreconditionError("sample_haar_vector: d must be >= 1");
    std::vector<cplx> v(d);
    double nrm2 = 0.0;
    do {
        nrm2 = 0.0;
        for (auto& z : v) {
            z = cplx{rng.gaussian(), rng.gaussian()};
            nrm2 += std::norm(z);
        }
    } while (nrm2 == 0.0);
    const double inv = 1.0 / std::sqrt(nrm2);
    for (auto& z : v) z *= inv;
    return v;
}

DensityMatrix sample_haar_pure(std::size_t d, Rng& rng) {
    return DensityMatrix(HermitianMatrix::outer(sample_haar_vector(d, rng)));
}

DensityMatrix sample_hs_mixed(std::size_t d, Rng& rng) {
    if (d < 1) throw PreconditionError("sample_hs_mixed: d must be >= 1");
    CMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = cplx{rng.gaussian(), rng.gaussian()};
    CMatrix w = g * g.adjoint();
    double tr = 0.0;
    for (std::size_t i = 0; i < d; ++i) tr += w(i, i).real();
    HermitianMatrix h(d);
    for (std::size_t i = 0; i < d; ++i) {
        h.set(i, i, w(i, i).real() / tr);
        for (std::size_t j = i + 1; j < d; ++j)
            h.set(i, j, 0.5 * (w(i, j) + std::conj(w(j, i))) / tr);
    }
    return DensityMatrix(h);
}

OutcomeTable sample_noise(std::size_t l, std::size_t m, double epsilon, Rng& rng) {
    if (epsilon < 0.0) throw PreconditionError("sample_noise: epsilon must be >= 0");
    OutcomeTable t(l, m);
    if (epsilon == 0.0) return t;
    double nrm2 = 0.0;
    do {
        nrm2 = 0.0;
        for (auto& v : t.data) {
            v = rng.gaussian();
            nrm2 += v * v;
        }
    } while (nrm2 == 0.0);
    const double s = epsilon / std::sqrt(nrm2);
    for (auto& v : t.data) v *= s;
    return t;
}

} // namespace tomo
