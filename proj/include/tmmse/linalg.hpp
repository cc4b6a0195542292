#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tmmse/types.hpp"

namespace tmmse {

/// Dense complex matrix, column-major. Element (i, j) lives at data[i + j*rows].
/// Column-major keeps matrix storage compatible with the tensor flat layout:
/// an N x K frame matrix reinterprets directly as an (N_1, ..., N_D, K) tensor.
class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cx& operator()(std::size_t i, std::size_t j) { return a_[i + j * rows_]; }
    const cx& operator()(std::size_t i, std::size_t j) const { return a_[i + j * rows_]; }

    cx* data() { return a_.data(); }
    const cx* data() const { return a_.data(); }
    std::span<const cx> flat() const { return a_; }
    std::span<cx> flat() { return a_; }

    std::span<const cx> col(std::size_t j) const {
        return {a_.data() + j * rows_, rows_};
    }
    std::span<cx> col(std::size_t j) { return {a_.data() + j * rows_, rows_}; }

    bool same_shape(const CMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);

    static CMat identity(std::size_t n);

private:
    std::size_t rows_ = 0, cols_ = 0;
    CVec a_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);

/// A^H
CMat adjoint(const CMat& a);

/// a * b
CMat matmul(const CMat& a, const CMat& b);

/// A^H * B
CMat matmul_adj(const CMat& a, const CMat& b);

/// A * x
CVec matvec(const CMat& a, std::span<const cx> x);

/// Sum of |A(i,j) - B(i,j)|^2, square-rooted.
double frobenius_distance(const CMat& a, const CMat& b);

/// max |A(i,j) - conj(A(j,i))|
double hermitian_defect(const CMat& a);

void add_diagonal(CMat& a, double lambda);

/// Real part of the trace.
double trace_real(const CMat& a);

/// x^H y
cx inner(std::span<const cx> x, std::span<const cx> y);

double norm2_sq(std::span<const cx> x);

/// Kronecker product with b varying fastest: out[ia*|b| + ib] = a[ia]*b[ib].
CVec kron(std::span<const cx> a, std::span<const cx> b);

/// Hermitian factorization A = L L^H of a positive definite matrix.
///
/// Throws SingularMatrixError when a pivot falls below the numerical
/// threshold (1e3 * eps * max diagonal); the usual remedy is diagonal
/// loading. Product counts (complex multiplications and divisions in the
/// factorization and triangular solves) accumulate into the solve phase.
class CholeskyFactor {
public:
    static CholeskyFactor factor(const CMat& a, ProductCounter* pc = nullptr);

    CVec solve(std::span<const cx> b, ProductCounter* pc = nullptr) const;
    CMat solve(const CMat& b, ProductCounter* pc = nullptr) const;

    std::size_t dim() const { return l_.rows(); }

private:
    CMat l_;
};

}  // namespace tmmse
