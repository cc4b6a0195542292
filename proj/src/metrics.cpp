#include "tmmse/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tmmse {

double sinr(std::span<const cx> w, const CMat& r_xx, const CMat& r_ii, const CMat& r_bb) {
    const std::size_t n = w.size();
    if (r_xx.rows() != n || r_xx.cols() != n || r_ii.rows() != n || r_ii.cols() != n ||
        r_bb.rows() != n || r_bb.cols() != n)
        throw std::invalid_argument("sinr: dimension mismatch");
    if (norm2_sq(w) == 0.0) throw std::invalid_argument("sinr: weight vector is zero");

    const double num = inner(w, matvec(r_xx, w)).real();
    const double den =
        inner(w, matvec(r_ii, w)).real() + inner(w, matvec(r_bb, w)).real();
    if (!(den > 0.0))
        throw std::invalid_argument("sinr: interference-plus-noise power is not positive");
    return num / den;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::uint64_t count_mmse(std::uint64_t antennas, std::uint64_t frames) {
    if (antennas == 0 || frames == 0) throw std::invalid_argument("count_mmse: N, K >= 1");
    return antennas * antennas * frames + antennas * frames + antennas * antennas * antennas +
           antennas * antennas;
}

std::uint64_t count_lr_tmmse(std::span<const std::size_t> dims, std::uint64_t rank,
                             std::uint64_t iters, std::uint64_t frames, TailTerm tail) {
    if (dims.empty()) throw std::invalid_argument("count_lr_tmmse: dims must be nonempty");
    if (rank == 0 || frames == 0) throw std::invalid_argument("count_lr_tmmse: R, K >= 1");
    std::uint64_t n = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw std::invalid_argument("count_lr_tmmse: zero dimension");
        n *= d;
    }
    const std::uint64_t order = dims.size();

    std::uint64_t per_iter = 0;
    for (std::size_t d : dims) {
        const std::uint64_t nd = d;
        per_iter += rank * (order - 1) * n * frames;  // build U_d
        per_iter += nd * nd * frames + nd * frames;   // block statistics
        per_iter += nd * nd * nd;                     // block solve, cubic convention
        per_iter += (tail == TailTerm::printed) ? nd : nd * nd;
    }
    return iters * per_iter;
}

std::optional<ProductCounter> instrumented_count(const EqualizerReport& report) {
    return report.counts;
}

}  // namespace tmmse
