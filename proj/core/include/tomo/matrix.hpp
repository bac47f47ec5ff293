#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tomo/errors.hpp"

namespace tomo {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& data() const noexcept { return a_; }
    std::vector<cplx>& data() noexcept { return a_; }

    CMatrix adjoint() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    CMatrix operator*(const CMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw PreconditionError("CMatrix multiply: shape mismatch");
        CMatrix r(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) r(i, j) += aik * rhs(k, j);
            }
        }
        return r;
    }

    CMatrix& operator+=(const CMatrix& rhs) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& rhs) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
        return *this;
    }
    friend CMatrix operator-(CMatrix lhs, const CMatrix& rhs) { return lhs -= rhs; }
    friend CMatrix operator+(CMatrix lhs, const CMatrix& rhs) { return lhs += rhs; }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    std::vector<cplx> column(std::size_t j) const {
        std::vector<cplx> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_column(std::size_t j, const std::vector<cplx>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

/// Dense real matrix, row-major.
class RMatrix {
public:
    RMatrix() = default;
    RMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return a_; }

    /// y = A x
    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            const double* row = &a_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    /// y = A^T x
    std::vector<double> apply_transpose(const std::vector<double>& x) const {
        std::vector<double> y(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double xi = x[i];
            if (xi == 0.0) continue;
            const double* row = &a_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) y[j] += row[j] * xi;
        }
        return y;
    }

    RMatrix& operator-=(const RMatrix& rhs) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
        return *this;
    }
    friend RMatrix operator-(RMatrix lhs, const RMatrix& rhs) { return lhs -= rhs; }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace tomo
