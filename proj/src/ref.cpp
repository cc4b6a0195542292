#include "tmmse/ref.hpp"

#include <stdexcept>

namespace tmmse::ref {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

bool advance(std::vector<std::size_t>& idx, std::span<const std::size_t> dims) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (++idx[j] < dims[j]) return true;
        idx[j] = 0;
    }
    return false;
}

std::size_t flat_index(std::span<const std::size_t> idx, std::span<const std::size_t> dims) {
    std::size_t n = 0, stride = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        n += idx[j] * stride;
        stride *= dims[j];
    }
    return n;
}

}  // namespace

std::size_t unfold_column(std::span<const std::size_t> idx, std::span<const std::size_t> dims,
                          std::size_t mode) {
    std::size_t col = 0;
    for (std::size_t q = 0; q < dims.size(); ++q) {
        if (q == mode) continue;
        std::size_t stride = 1;
        for (std::size_t m = 0; m < q; ++m)
            if (m != mode) stride *= dims[m];
        col += idx[q] * stride;
    }
    return col;
}

CMat unfold(std::span<const cx> data, std::span<const std::size_t> dims, std::size_t mode) {
    if (mode >= dims.size()) throw std::invalid_argument("ref::unfold: mode out of range");
    const std::size_t n = product(dims);
    if (data.size() != n) throw std::invalid_argument("ref::unfold: data size mismatch");

    CMat out(dims[mode], n / dims[mode]);
    std::vector<std::size_t> idx(dims.size(), 0);
    do {
        out(idx[mode], unfold_column(idx, dims, mode)) = data[flat_index(idx, dims)];
    } while (advance(idx, dims));
    return out;
}

CMat mode_contract_frames(std::span<const cx> data, std::span<const std::size_t> dims,
                          std::size_t frames, std::size_t mode, std::span<const CVec> others,
                          std::uint64_t* products) {
    const std::size_t order = dims.size();
    if (mode >= order) throw std::invalid_argument("ref::mode_contract: mode out of range");
    if (others.size() + 1 != order)
        throw std::invalid_argument("ref::mode_contract: vector count mismatch");
    const std::size_t n = product(dims);
    if (data.size() != n * frames)
        throw std::invalid_argument("ref::mode_contract: data size mismatch");

    CMat out(dims[mode], frames);
    for (std::size_t k = 0; k < frames; ++k) {
        const cx* xk = data.data() + k * n;
        std::vector<std::size_t> idx(order, 0);
        do {
            cx term = xk[flat_index(idx, dims)];
            std::size_t v = 0;
            for (std::size_t j = 0; j < order; ++j) {
                if (j == mode) continue;
                term *= std::conj(others[v][idx[j]]);
                if (products) ++*products;
                ++v;
            }
            out(idx[mode], k) += term;
        } while (advance(idx, dims));
    }
    return out;
}

CMat sample_covariance(const CMat& u, std::uint64_t* products) {
    const std::size_t m = u.rows(), k_len = u.cols();
    CMat r(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            cx acc = 0.0;
            for (std::size_t k = 0; k < k_len; ++k) {
                acc += u(i, k) * std::conj(u(j, k));
                if (products) ++*products;
            }
            r(i, j) = acc / static_cast<double>(k_len);
        }
    return r;
}

CVec sample_cross_covariance(const CMat& u, std::span<const cx> s, std::uint64_t* products) {
    if (s.size() != u.cols())
        throw std::invalid_argument("ref::sample_cross_covariance: length mismatch");
    CVec p(u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) {
        cx acc = 0.0;
        for (std::size_t k = 0; k < u.cols(); ++k) {
            acc += u(i, k) * std::conj(s[k]);
            if (products) ++*products;
        }
        p[i] = acc / static_cast<double>(u.cols());
    }
    return p;
}

CVec apply_filter(std::span<const cx> w, const CMat& x) {
    if (w.size() != x.rows()) throw std::invalid_argument("ref::apply_filter: length mismatch");
    CVec y(x.cols());
    for (std::size_t k = 0; k < x.cols(); ++k) {
        cx acc = 0.0;
        for (std::size_t nn = 0; nn < x.rows(); ++nn) acc += std::conj(w[nn]) * x(nn, k);
        y[k] = acc;
    }
    return y;
}

}  // namespace tmmse::ref
