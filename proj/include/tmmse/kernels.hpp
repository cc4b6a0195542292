#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tmmse/linalg.hpp"
#include "tmmse/types.hpp"

namespace tmmse::kernels {

// OpenMP-parallel hot loops. Every kernel partitions disjoint output
// elements across threads and keeps each element's accumulation order
// fixed, so results are bit-identical for any thread count. Serial
// twins for testing live in tmmse::ref.

/// (1/K) U U^H for U (m x K). Computes the full Gram matrix; Hermitian
/// symmetry is deliberately not exploited, so the m^2*K multiply count
/// matches the complexity model. Counted into the statistics phase.
CMat sample_covariance(const CMat& u, ProductCounter* pc = nullptr);

/// (1/K) U conj(s) for U (m x K), s length K. Statistics phase, m*K products.
CVec sample_cross_covariance(const CMat& u, std::span<const cx> s,
                             ProductCounter* pc = nullptr);

/// Tensor-times-vector contraction over every spatial mode except `mode`.
///
/// `data` holds a (dims[0], ..., dims[D-1], K) tensor flattened with mode 0
/// fastest; `dims` lists the D spatial extents and `frames` is K. `others`
/// supplies the D-1 contraction vectors in ascending mode order (mode `mode`
/// skipped); each is conjugated. Output is dims[mode] x K.
///
/// Evaluates the multi-sum directly: every tensor element costs D-1
/// multiplications, for (D-1)*N*K total (0 when D == 1), counted into the
/// contraction phase.
CMat mode_contract_frames(std::span<const cx> data, std::span<const std::size_t> dims,
                          std::size_t frames, std::size_t mode,
                          std::span<const CVec> others, ProductCounter* pc = nullptr);

/// y[k] = w^H x[k] column-wise; y has length K. Not counted (the cost model
/// charges filter design, not filter application).
CVec apply_filter(std::span<const cx> w, const CMat& x);

/// X(n,k) = sum_u sum_q H_u(n,q) * symbols_u(k - q + Q - 1), the multi-user
/// tapped-delay convolution. `symbol_hist` is U x (K+Q-1); channel u is
/// `channels[u]`, each N x Q. Noise is added by the caller.
CMat convolve_frame(std::span<const CMat> channels, const CMat& symbol_hist,
                    std::size_t frames);

}  // namespace tmmse::kernels
