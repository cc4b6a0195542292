#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tmmse/linalg.hpp"
#include "tmmse/types.hpp"

namespace tmmse::ref {

// Serial reference implementations. These enumerate index tuples and apply
// the index-map formulas literally, one element at a time, with no shared
// code in the production kernels. Tests use them as oracles and the
// benchmark compares them against the OpenMP path. `products`, when given,
// is incremented once per complex multiplication actually performed.

/// Column index of tuple `idx` (0-based) in the mode-`mode` unfolding:
/// 1-based j = 1 + sum_{q != mode} (n_q - 1) * prod_{m != mode, m < q} N_m.
std::size_t unfold_column(std::span<const std::size_t> idx, std::span<const std::size_t> dims,
                          std::size_t mode);

/// Mode-`mode` unfolding by exhaustive tuple enumeration.
CMat unfold(std::span<const cx> data, std::span<const std::size_t> dims, std::size_t mode);

/// Multi-sum contraction over all modes except `mode`, trailing frame axis:
/// out(n_mode, k) = sum over complementary tuples of X[tuple, k] * prod conj(w_j[n_j]).
CMat mode_contract_frames(std::span<const cx> data, std::span<const std::size_t> dims,
                          std::size_t frames, std::size_t mode, std::span<const CVec> others,
                          std::uint64_t* products = nullptr);

/// (1/K) U U^H, plain triple loop.
CMat sample_covariance(const CMat& u, std::uint64_t* products = nullptr);

/// (1/K) U conj(s).
CVec sample_cross_covariance(const CMat& u, std::span<const cx> s,
                             std::uint64_t* products = nullptr);

/// y[k] = w^H x[k].
CVec apply_filter(std::span<const cx> w, const CMat& x);

}  // namespace tmmse::ref
