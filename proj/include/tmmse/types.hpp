#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmmse {

using cx = std::complex<double>;
using CVec = std::vector<cx>;

/// Thrown when a Hermitian factorization hits a pivot below the numerical
/// threshold. Callers typically recover by adding diagonal loading.
struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Complex-multiplication tally, split by algorithm phase.
///
/// A "product" is one complex-by-complex multiplication (or division).
/// Real scalings such as the 1/K normalization of sample statistics are not
/// counted; neither are diagnostics (MSE traces, SINR scoring), which are
/// outside the filter-design cost model.
struct ProductCounter {
    std::uint64_t statistics = 0;   // sample covariance / cross-covariance estimation
    std::uint64_t solve = 0;        // Hermitian factorization and triangular solves
    std::uint64_t contraction = 0;  // tensor-times-vector products

    std::uint64_t total() const { return statistics + solve + contraction; }

    ProductCounter& operator+=(const ProductCounter& o) {
        statistics += o.statistics;
        solve += o.solve;
        contraction += o.contraction;
        return *this;
    }
};

}  // namespace tmmse
