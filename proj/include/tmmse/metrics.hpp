#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tmmse/equalize.hpp"
#include "tmmse/linalg.hpp"
#include "tmmse/types.hpp"

namespace tmmse {

/// Output SINR of an equalizer: (w^H R_xx w) / (w^H (R_ii + R_bb) w),
/// as a linear ratio. Always >= 1 because R_xx = R_dd + R_ii + R_bb with
/// R_dd positive semidefinite.
double sinr(std::span<const cx> w, const CMat& r_xx, const CMat& r_ii, const CMat& r_bb);

/// 10 log10(x); power-ratio convention used everywhere.
double to_db(double linear);

// Product-count formulas. The cubic solve term is charged as exactly n^3 in
// both counters so the two sides stay comparable; counts are exact integer
// arithmetic.

/// Benchmark filter design: N^2 K + N K products for the sample statistics
/// plus N^3 + N^2 for the solve.
std::uint64_t count_mmse(std::uint64_t antennas, std::uint64_t frames);

/// Convention for the trailing per-block term of the tensor count: the
/// printed formula charges N_d, the surrounding text N_d^2.
enum class TailTerm { printed, quadratic };

/// Tensor filter design across `iters` sweeps:
/// I * sum_d [ R(D-1)NK + N_d^2 K + N_d K + N_d^3 + tail(N_d) ].
std::uint64_t count_lr_tmmse(std::span<const std::size_t> dims, std::uint64_t rank,
                             std::uint64_t iters, std::uint64_t frames,
                             TailTerm tail = TailTerm::printed);

/// Measured per-phase products of a training run, or nullopt when the
/// producing path was not instrumented.
std::optional<ProductCounter> instrumented_count(const EqualizerReport& report);

}  // namespace tmmse
