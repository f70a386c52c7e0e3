#pragma once

// Dense row-major complex matrices and the tolerance knobs shared across the
// library. Everything here is value-semantic and small-N oriented.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "krauskit/error.hpp"

namespace krauskit {

using cx = std::complex<double>;

struct Tolerances {
    double eq_tol = 1e-10;    // Frobenius-norm identity checks
    double eig_tol = 1e-12;   // eigensolver / SVD convergence
    double rank_tol = 1e-8;   // Gram-Schmidt candidate rejection

    void check() const {
        if (!(eq_tol > 0.0) || !(eig_tol > 0.0) || !(rank_tol > 0.0))
            throw Error(errc::bad_params, "tolerances must be strictly positive");
    }
};

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw Error(errc::dimension_mismatch, "entry count does not match rows*cols");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = cx{1.0, 0.0};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<cx>& entries() const { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                out(c, r) = (*this)(r, c);
        return out;
    }

    cx trace() const {
        cx t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cx& e : data_) s += std::norm(e);
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (const cx& e : data_)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
        return true;
    }

    std::vector<cx> column(std::size_t j) const {
        std::vector<cx> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, j);
        return v;
    }

    void set_column(std::size_t j, const std::vector<cx>& v) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, j) = v[r];
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    ComplexMatrix& operator*=(cx s) {
        for (cx& e : data_) e *= s;
        return *this;
    }

    friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error(errc::dimension_mismatch, "matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cx> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, cx s) { return a *= s; }
inline ComplexMatrix operator*(cx s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cx{s, 0.0}; }
inline ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cx{s, 0.0}; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(errc::dimension_mismatch, "matrix product shapes differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cx ark = a(r, k);
            if (ark == cx{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
        }
    return out;
}

// Kronecker product with row index (i,j) -> i*B.rows()+j (left factor major).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cx aij = a(i, j);
            if (aij == cx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(errc::dimension_mismatch, "frobenius_distance shapes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

// ||A - A^dagger||_F
inline double hermiticity_defect(const ComplexMatrix& a) {
    return frobenius_distance(a, a.adjoint());
}

// ||U^dagger U - I||_F
inline double unitarity_defect(const ComplexMatrix& u) {
    return frobenius_distance(u.adjoint() * u, ComplexMatrix::identity(u.cols()));
}

}  // namespace krauskit
