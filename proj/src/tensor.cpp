#include "tmmse/tensor.hpp"

#include <sstream>

#include "tmmse/kernels.hpp"

namespace tmmse {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

void check_dims(std::span<const std::size_t> dims) {
    if (dims.empty()) throw std::invalid_argument("tensor: dimension list is empty");
    for (std::size_t d : dims)
        if (d == 0) throw std::invalid_argument("tensor: zero dimension");
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<std::size_t> dims_, CVec data_)
    : dims(std::move(dims_)), data(std::move(data_)) {
    check_dims(dims);
    if (data.size() != product(dims)) {
        std::ostringstream msg;
        msg << "tensor: data length " << data.size() << " does not equal product of dims "
            << product(dims);
        throw std::invalid_argument(msg.str());
    }
}

std::size_t ComplexTensor::flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != dims.size())
        throw std::invalid_argument("tensor: index tuple length does not match order");
    std::size_t n = 0, stride = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (idx[j] >= dims[j]) throw std::invalid_argument("tensor: index out of bounds");
        n += idx[j] * stride;
        stride *= dims[j];
    }
    return n;
}

ComplexTensor reshape_vector_to_tensor(CVec v, std::vector<std::size_t> dims) {
    check_dims(dims);
    if (product(dims) != v.size()) {
        std::ostringstream msg;
        msg << "reshape: product of dims " << product(dims) << " does not equal vector length "
            << v.size();
        throw std::invalid_argument(msg.str());
    }
    return ComplexTensor(std::move(dims), std::move(v));
}

CVec vectorize_tensor(const ComplexTensor& t) { return t.data; }

CMat unfold(const ComplexTensor& t, std::size_t mode) {
    if (mode >= t.order()) throw std::invalid_argument("unfold: mode out of range");
    const std::size_t nd = t.dims[mode];
    std::size_t stride = 1;
    for (std::size_t m = 0; m < mode; ++m) stride *= t.dims[m];
    const std::size_t outer = t.size() / (stride * nd);

    // column = inner + outer_block*stride reproduces the 1-based map
    // j = 1 + sum_{q != mode} (n_q - 1) prod_{m != mode, m < q} N_m.
    CMat out(nd, t.size() / nd);
    for (std::size_t ob = 0; ob < outer; ++ob)
        for (std::size_t r = 0; r < nd; ++r)
            for (std::size_t in = 0; in < stride; ++in)
                out(r, in + ob * stride) = t.data[in + r * stride + ob * stride * nd];
    return out;
}

CMat mode_contract(const ComplexTensor& t, std::size_t mode, std::span<const CVec> others,
                   ProductCounter* pc) {
    if (t.order() < 1) throw std::invalid_argument("mode_contract: tensor has no modes");
    if (t.order() < 2)
        throw std::invalid_argument("mode_contract: tensor needs a trailing frame axis");
    const std::size_t spatial = t.order() - 1;
    if (mode >= spatial)
        throw std::invalid_argument("mode_contract: mode must address a spatial axis");
    return kernels::mode_contract_frames(
        t.data, std::span<const std::size_t>(t.dims.data(), spatial), t.dims[spatial], mode,
        others, pc);
}

CpFilter::CpFilter(std::vector<std::size_t> dims_, std::size_t rank_)
    : dims(std::move(dims_)), rank(rank_) {
    check_dims(dims);
    if (rank == 0) throw std::invalid_argument("cp filter: rank must be positive");
    factors.resize(dims.size());
    for (std::size_t d = 0; d < dims.size(); ++d)
        factors[d].assign(rank, CVec(dims[d], cx{0.0, 0.0}));
}

std::size_t CpFilter::size() const { return product(dims); }

void CpFilter::validate() const {
    check_dims(dims);
    if (rank == 0) throw std::invalid_argument("cp filter: rank must be positive");
    if (factors.size() != dims.size())
        throw std::invalid_argument("cp filter: one factor row per mode required");
    for (std::size_t d = 0; d < dims.size(); ++d) {
        if (factors[d].size() != rank)
            throw std::invalid_argument("cp filter: one factor per rank term required");
        for (const CVec& w : factors[d])
            if (w.size() != dims[d])
                throw std::invalid_argument("cp filter: factor length must equal mode dimension");
    }
}

cx cp_element(const CpFilter& f, std::span<const std::size_t> idx) {
    if (idx.size() != f.order())
        throw std::invalid_argument("cp_element: index tuple length does not match order");
    for (std::size_t d = 0; d < f.order(); ++d)
        if (idx[d] >= f.dims[d]) throw std::invalid_argument("cp_element: index out of bounds");

    cx acc = 0.0;
    for (std::size_t r = 0; r < f.rank; ++r) {
        cx term = f.factors[0][r][idx[0]];
        for (std::size_t d = 1; d < f.order(); ++d) term *= f.factors[d][r][idx[d]];
        acc += term;
    }
    return acc;
}

CVec vectorize_cp(const CpFilter& f) {
    f.validate();
    CVec out(f.size(), cx{0.0, 0.0});
    for (std::size_t r = 0; r < f.rank; ++r) {
        CVec term = f.factors[0][r];
        for (std::size_t d = 1; d < f.order(); ++d) term = kron(f.factors[d][r], term);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
    }
    return out;
}

CVec cp_complement_kron(const CpFilter& f, std::size_t mode, std::size_t r) {
    if (mode >= f.order()) throw std::invalid_argument("cp_complement_kron: mode out of range");
    if (r >= f.rank) throw std::invalid_argument("cp_complement_kron: rank term out of range");
    CVec acc{cx{1.0, 0.0}};
    for (std::size_t d = 0; d < f.order(); ++d) {
        if (d == mode) continue;
        acc = kron(f.factors[d][r], acc);
    }
    return acc;
}

}  // namespace tmmse
