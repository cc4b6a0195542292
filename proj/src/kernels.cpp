#include "tmmse/kernels.hpp"

#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tmmse::kernels {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

}  // namespace

CMat sample_covariance(const CMat& u, ProductCounter* pc) {
    const std::size_t m = u.rows();
    const std::size_t k_len = u.cols();
    if (k_len == 0) throw std::invalid_argument("sample_covariance: no frames");
    CMat r(m, m);
    const double inv_k = 1.0 / static_cast<double>(k_len);

    const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < mm; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            cx acc = 0.0;
            for (std::size_t k = 0; k < k_len; ++k)
                acc += u(i, k) * std::conj(u(static_cast<std::size_t>(j), k));
            r(i, static_cast<std::size_t>(j)) = acc * inv_k;
        }
    }
    if (pc) pc->statistics += static_cast<std::uint64_t>(m) * m * k_len;
    return r;
}

CVec sample_cross_covariance(const CMat& u, std::span<const cx> s, ProductCounter* pc) {
    const std::size_t m = u.rows();
    const std::size_t k_len = u.cols();
    if (s.size() != k_len)
        throw std::invalid_argument("sample_cross_covariance: training length mismatch");
    if (k_len == 0) throw std::invalid_argument("sample_cross_covariance: no frames");
    CVec p(m);
    const double inv_k = 1.0 / static_cast<double>(k_len);

    const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < mm; ++i) {
        cx acc = 0.0;
        for (std::size_t k = 0; k < k_len; ++k)
            acc += u(static_cast<std::size_t>(i), k) * std::conj(s[k]);
        p[static_cast<std::size_t>(i)] = acc * inv_k;
    }
    if (pc) pc->statistics += static_cast<std::uint64_t>(m) * k_len;
    return p;
}

CMat mode_contract_frames(std::span<const cx> data, std::span<const std::size_t> dims,
                          std::size_t frames, std::size_t mode,
                          std::span<const CVec> others, ProductCounter* pc) {
    const std::size_t order = dims.size();
    if (mode >= order) throw std::invalid_argument("mode_contract: mode out of range");
    if (others.size() + 1 != order)
        throw std::invalid_argument("mode_contract: need one vector per non-isolated mode");
    {
        std::size_t v = 0;
        for (std::size_t j = 0; j < order; ++j) {
            if (j == mode) continue;
            if (others[v].size() != dims[j])
                throw std::invalid_argument("mode_contract: contraction vector length mismatch");
            ++v;
        }
    }
    const std::size_t n = product(dims);
    if (data.size() != n * frames)
        throw std::invalid_argument("mode_contract: data size does not match dims and frames");

    CMat out(dims[mode], frames);

    // Conjugated factor table, indexed by mode (slot `mode` unused).
    std::vector<CVec> wconj(order);
    {
        std::size_t v = 0;
        for (std::size_t j = 0; j < order; ++j) {
            if (j == mode) continue;
            wconj[j].resize(dims[j]);
            for (std::size_t t = 0; t < dims[j]; ++t) wconj[j][t] = std::conj(others[v][t]);
            ++v;
        }
    }

    const std::int64_t kk = static_cast<std::int64_t>(frames);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < kk; ++k) {
        const cx* xk = data.data() + static_cast<std::size_t>(k) * n;
        std::vector<std::size_t> idx(order, 0);
        for (std::size_t flat = 0; flat < n; ++flat) {
            if (order == 1) {
                out(flat, static_cast<std::size_t>(k)) = xk[flat];
            } else {
                cx w{};
                bool first = true;
                for (std::size_t j = 0; j < order; ++j) {
                    if (j == mode) continue;
                    w = first ? wconj[j][idx[j]] : w * wconj[j][idx[j]];
                    first = false;
                }
                out(idx[mode], static_cast<std::size_t>(k)) += w * xk[flat];
            }
            for (std::size_t j = 0; j < order; ++j) {  // odometer, mode 0 fastest
                if (++idx[j] < dims[j]) break;
                idx[j] = 0;
            }
        }
    }
    if (pc && order >= 2)
        pc->contraction += static_cast<std::uint64_t>(order - 1) * n * frames;
    return out;
}

CVec apply_filter(std::span<const cx> w, const CMat& x) {
    if (w.size() != x.rows()) throw std::invalid_argument("apply_filter: weight length mismatch");
    CVec y(x.cols());
    const std::int64_t kk = static_cast<std::int64_t>(x.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < kk; ++k) {
        cx acc = 0.0;
        for (std::size_t nn = 0; nn < x.rows(); ++nn)
            acc += std::conj(w[nn]) * x(nn, static_cast<std::size_t>(k));
        y[static_cast<std::size_t>(k)] = acc;
    }
    return y;
}

CMat convolve_frame(std::span<const CMat> channels, const CMat& symbol_hist,
                    std::size_t frames) {
    if (channels.empty()) throw std::invalid_argument("convolve_frame: no channels");
    const std::size_t n = channels[0].rows();
    const std::size_t taps = channels[0].cols();
    if (symbol_hist.rows() != channels.size())
        throw std::invalid_argument("convolve_frame: one symbol row per user required");
    if (symbol_hist.cols() != frames + taps - 1)
        throw std::invalid_argument("convolve_frame: symbol history must cover K+Q-1 instants");

    CMat x(n, frames);
    const std::int64_t kk = static_cast<std::int64_t>(frames);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < kk; ++k) {
        for (std::size_t u = 0; u < channels.size(); ++u) {
            const CMat& h = channels[u];
            for (std::size_t q = 0; q < taps; ++q) {
                // s_u[k - q] sits at history column k - q + Q - 1
                const cx s = symbol_hist(u, static_cast<std::size_t>(k) - q + taps - 1);
                for (std::size_t nn = 0; nn < n; ++nn)
                    x(nn, static_cast<std::size_t>(k)) += h(nn, q) * s;
            }
        }
    }
    return x;
}

}  // namespace tmmse::kernels
