#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "vrs/errors.hpp"

namespace vrs {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major storage. Value type: cheap to copy at the
/// dimensions used here (Hilbert spaces of ~10, Liouville spaces of ~100).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, cxd(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<cxd>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return e_.size(); }

    cxd& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const cxd& operator()(std::size_t i, std::size_t j) const {
        return e_[i * cols_ + j];
    }

    const std::vector<cxd>& entries() const { return e_; }
    std::vector<cxd>& entries() { return e_; }

    ComplexMatrix dagger() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k)
            m.e_[k] = std::conj(e_[k]);
        return m;
    }

    cxd trace() const {
        cxd t = 0.0;
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cxd& v : e_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cxd& v : e_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// Max row sum of absolute values.
    double inf_norm() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    /// max_ij |M_ij - conj(M_ji)| for square matrices.
    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m = std::max(m,
                             std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cxd s) {
        for (cxd& v : e_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(cxd s, ComplexMatrix a) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, cxd s) {
        a *= s;
        return a;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a,
                                   const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw InvalidInput("matrix product shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cxd aik = a(i, k);
                if (aik == cxd(0.0, 0.0)) continue;
                const cxd* brow = &b.e_[k * b.cols_];
                cxd* crow = &c.e_[i * c.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
            }
        }
        return c;
    }

    friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

private:
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw InvalidInput("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cxd> e_;
};

/// Kronecker product; row/column counts multiply.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cxd aij = a(i, j);
            if (aij == cxd(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

/// Row-major vectorization: vec(M)[i*cols + j] = M(i, j).
inline std::vector<cxd> vec(const ComplexMatrix& m) { return m.entries(); }

inline ComplexMatrix unvec(const std::vector<cxd>& v, std::size_t rows,
                           std::size_t cols) {
    if (v.size() != rows * cols) throw InvalidInput("unvec size mismatch");
    ComplexMatrix m(rows, cols);
    m.entries() = v;
    return m;
}

}  // namespace vrs
