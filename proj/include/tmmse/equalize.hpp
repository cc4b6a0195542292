#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmmse/linalg.hpp"
#include "tmmse/tensor.hpp"
#include "tmmse/types.hpp"

namespace tmmse {

/// Full-size linear equalizer: weights plus the lag they target.
struct LinearEqualizer {
    CVec w;
    std::size_t delta = 0;
};

enum class CpInit {
    canonical,            // every factor is e_1 (singular blocks for R > 1)
    canonical_perturbed,  // e_1 plus small complex perturbations (default)
    random,               // i.i.d. CN(0,1) entries
};

CpInit parse_cp_init(const std::string& name);
std::string to_string(CpInit init);

/// Configuration of the alternating low-rank tensor equalizer.
///
/// `loading` is a relative coefficient: each block system R_d of size R*N_d
/// receives lambda_d = loading * trace(R_d) / (R*N_d) on its diagonal.
/// Zero disables loading entirely.
struct LrTmmseConfig {
    std::vector<std::size_t> dims;  // factorization of N, mode 0 fastest
    std::size_t rank = 3;           // R
    std::size_t max_iters = 20;
    double epsilon = 0.1;           // threshold on ||vec(W_{i+1}) - vec(W_i)||^2
    double loading = 1e-8;
    CpInit init = CpInit::canonical_perturbed;
    std::uint64_t init_seed = 1;    // drives perturbed/random initialization

    void validate(std::size_t antennas) const;
};

/// Training outcome: the filter, its vectorized weights, and diagnostics.
/// mse_trace holds the sample MSE at initialization and after every block
/// update. counts is absent when the producing path was not instrumented.
struct EqualizerReport {
    std::optional<CpFilter> cp;
    CVec w_vec;
    std::size_t iterations = 0;  // outer sweeps performed
    std::vector<double> mse_trace;
    bool converged = false;
    std::optional<ProductCounter> counts;
};

/// MSE objective sigma_s2 - p^H w - w^H p + w^H R_xx w; the (tiny)
/// imaginary residue is discarded.
double mse_objective(std::span<const cx> w, const CMat& r_xx, std::span<const cx> p,
                     double sigma_s2);

/// Solves R_xx w = p through a Hermitian factorization.
CVec mmse_theoretical(const CMat& r_xx, std::span<const cx> p, ProductCounter* pc = nullptr);

/// Lag maximizing the diagonal of R_ss H_u^H R_xx^{-1} H_u R_ss; ties break
/// to the smallest index. Returns delta in 0..Q-1.
std::size_t select_delta(const CMat& r_ss, const CMat& h_u, const CMat& r_xx);

/// Sample-statistics MMSE filter: w = (X X^H / K + loading I)^{-1} (X s* / K).
/// `loading` here is an absolute diagonal term.
CVec mmse_sample(const CMat& x, std::span<const cx> s, double loading = 0.0,
                 ProductCounter* pc = nullptr);

/// Alternating block-MMSE training of the CP tensor equalizer.
///
/// Per sweep and mode d: contracts the reshaped frame tensor against the
/// other factors (one N_d x K block per rank term), stacks the blocks,
/// estimates the block statistics, solves the RN_d-dimensional MMSE system,
/// and scatters the solution back into the factors. Stops when the squared
/// change of vec(W) across a sweep falls below epsilon, or at max_iters.
EqualizerReport lr_tmmse_train(const CMat& x, std::span<const cx> s, const LrTmmseConfig& cfg);

/// y[k] = w^H x[k].
CVec apply_equalizer(std::span<const cx> w, const CMat& x);

/// Time-domain sample MSE (1/K) sum |s[k] - w^H x[k]|^2. Algebraically equal
/// to mse_objective evaluated with the sample statistics of X and s.
double sample_mse(std::span<const cx> w, const CMat& x, std::span<const cx> s);

}  // namespace tmmse
