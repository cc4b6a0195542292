#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tmmse/linalg.hpp"
#include "tmmse/types.hpp"

namespace tmmse {

// Index convention, stated once: the math throughout uses 1-based tuples
// (n_1, ..., n_D) with flat position n = n_1 + (n_2-1)N_1 + ... +
// (n_D-1)N_1...N_{D-1}. Code uses the equivalent 0-based form, mode 0
// fastest: flat = i_0 + i_1*N_0 + i_2*N_0*N_1 + ...  All indices and mode
// numbers in this API are 0-based.

/// Dense D-way complex tensor with explicit dimension list.
struct ComplexTensor {
    std::vector<std::size_t> dims;
    CVec data;  // flat, mode 0 fastest

    ComplexTensor(std::vector<std::size_t> dims_, CVec data_);

    std::size_t order() const { return dims.size(); }
    std::size_t size() const { return data.size(); }

    /// Flat position of a 0-based index tuple; tuple length must equal order.
    std::size_t flat_index(std::span<const std::size_t> idx) const;
    cx at(std::span<const std::size_t> idx) const { return data[flat_index(idx)]; }
    cx at(std::initializer_list<std::size_t> idx) const {
        return at(std::span<const std::size_t>(idx.begin(), idx.size()));
    }
};

/// Reshape a flat vector into a tensor; product of dims must equal v's length.
ComplexTensor reshape_vector_to_tensor(CVec v, std::vector<std::size_t> dims);

/// Inverse of reshape_vector_to_tensor.
CVec vectorize_tensor(const ComplexTensor& t);

/// Mode-`mode` unfolding into a dims[mode] x (size/dims[mode]) matrix.
/// Tuple (i_0, ..., i_{D-1}) lands at row i_mode, column
/// sum_{q != mode} i_q * prod_{m != mode, m < q} N_m. Materialized copy.
CMat unfold(const ComplexTensor& t, std::size_t mode);

/// Contraction of a tensor whose trailing axis indexes frames: the first
/// order-1 modes are spatial, the last is K. Contracts every spatial mode
/// except `mode` against the conjugated vectors in `others` (ascending mode
/// order, `mode` skipped); returns dims[mode] x K.
CMat mode_contract(const ComplexTensor& t, std::size_t mode, std::span<const CVec> others,
                   ProductCounter* pc = nullptr);

/// Rank-R, order-D canonical polyadic filter: factors[d][r] has length dims[d].
struct CpFilter {
    std::vector<std::size_t> dims;
    std::size_t rank = 0;
    std::vector<std::vector<CVec>> factors;  // [mode][rank term]

    CpFilter() = default;
    CpFilter(std::vector<std::size_t> dims_, std::size_t rank_);

    std::size_t order() const { return dims.size(); }
    std::size_t size() const;

    void validate() const;
};

/// Coefficient at a 0-based index tuple: sum_r prod_d factors[d][r][idx[d]].
cx cp_element(const CpFilter& f, std::span<const std::size_t> idx);

/// vec of the CP tensor: sum_r w_{D-1,r} (x) ... (x) w_{0,r}, mode 0 fastest.
CVec vectorize_cp(const CpFilter& f);

/// Kronecker product of the non-`mode` factors of rank term r, in the
/// descending-mode order that matches the unfolding column map.
CVec cp_complement_kron(const CpFilter& f, std::size_t mode, std::size_t r);

}  // namespace tmmse
