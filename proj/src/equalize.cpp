#include "tmmse/equalize.hpp"

#include <cmath>
#include <sstream>

#include "tmmse/kernels.hpp"
#include "tmmse/rng.hpp"

namespace tmmse {

CpInit parse_cp_init(const std::string& name) {
    if (name == "canonical") return CpInit::canonical;
    if (name == "canonical-perturbed") return CpInit::canonical_perturbed;
    if (name == "random") return CpInit::random;
    throw std::invalid_argument("unknown init '" + name +
                                "' (expected canonical, canonical-perturbed, or random)");
}

std::string to_string(CpInit init) {
    switch (init) {
        case CpInit::canonical: return "canonical";
        case CpInit::canonical_perturbed: return "canonical-perturbed";
        case CpInit::random: return "random";
    }
    return "?";
}

void LrTmmseConfig::validate(std::size_t antennas) const {
    if (dims.empty()) throw std::invalid_argument("lr-tmmse: dims must be nonempty");
    std::size_t prod = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw std::invalid_argument("lr-tmmse: zero dimension");
        prod *= d;
    }
    if (prod != antennas) {
        std::ostringstream msg;
        msg << "lr-tmmse: dims multiply to " << prod << " but N = " << antennas;
        throw std::invalid_argument(msg.str());
    }
    if (rank == 0) throw std::invalid_argument("lr-tmmse: rank must be positive");
    if (max_iters == 0) throw std::invalid_argument("lr-tmmse: max_iters must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("lr-tmmse: epsilon must be positive");
    if (loading < 0.0) throw std::invalid_argument("lr-tmmse: loading must be nonnegative");
}

double mse_objective(std::span<const cx> w, const CMat& r_xx, std::span<const cx> p,
                     double sigma_s2) {
    if (r_xx.rows() != r_xx.cols()) throw std::invalid_argument("mse_objective: R_xx not square");
    if (w.size() != r_xx.rows() || p.size() != r_xx.rows())
        throw std::invalid_argument("mse_objective: dimension mismatch");
    const CVec rw = matvec(r_xx, w);
    const cx value = sigma_s2 - inner(p, w) - inner(w, p) + inner(w, rw);
    return value.real();
}

CVec mmse_theoretical(const CMat& r_xx, std::span<const cx> p, ProductCounter* pc) {
    if (r_xx.rows() != p.size())
        throw std::invalid_argument("mmse_theoretical: dimension mismatch");
    return CholeskyFactor::factor(r_xx, pc).solve(p, pc);
}

std::size_t select_delta(const CMat& r_ss, const CMat& h_u, const CMat& r_xx) {
    if (h_u.rows() != r_xx.rows() || h_u.cols() != r_ss.rows() || r_ss.rows() != r_ss.cols())
        throw std::invalid_argument("select_delta: dimension mismatch");
    // diag of R_ss H^H R_xx^{-1} H R_ss
    const CholeskyFactor chol = CholeskyFactor::factor(r_xx);
    const CMat hrss = matmul(h_u, r_ss);
    const CMat solved = chol.solve(hrss);
    const CMat m = matmul_adj(hrss, solved);

    std::size_t best = 0;
    double best_val = m(0, 0).real();
    for (std::size_t q = 1; q < m.rows(); ++q) {
        const double v = m(q, q).real();
        if (v > best_val) {  // strict: ties keep the smallest index
            best_val = v;
            best = q;
        }
    }
    return best;
}

CVec mmse_sample(const CMat& x, std::span<const cx> s, double loading, ProductCounter* pc) {
    if (s.size() != x.cols()) throw std::invalid_argument("mmse_sample: training length mismatch");
    if (loading < 0.0) throw std::invalid_argument("mmse_sample: loading must be nonnegative");

    CMat r_hat = kernels::sample_covariance(x, pc);
    const CVec p_hat = kernels::sample_cross_covariance(x, s, pc);
    if (loading > 0.0) add_diagonal(r_hat, loading);
    try {
        return CholeskyFactor::factor(r_hat, pc).solve(p_hat, pc);
    } catch (const SingularMatrixError& e) {
        std::ostringstream msg;
        msg << "mmse_sample: sample covariance is numerically singular (K = " << x.cols()
            << ", N = " << x.rows() << "); raise the training length K or the diagonal loading. ("
            << e.what() << ")";
        throw SingularMatrixError(msg.str());
    }
}

namespace {

CpFilter init_cp_filter(const LrTmmseConfig& cfg) {
    CpFilter f(cfg.dims, cfg.rank);
    Rng rng(cfg.init_seed);
    constexpr double kPerturbScale = 1e-3;
    for (std::size_t d = 0; d < f.order(); ++d)
        for (std::size_t r = 0; r < f.rank; ++r) {
            CVec& w = f.factors[d][r];
            switch (cfg.init) {
                case CpInit::canonical:
                    w[0] = 1.0;
                    break;
                case CpInit::canonical_perturbed:
                    for (auto& v : w) v = kPerturbScale * rng.gauss_cx();
                    w[0] += 1.0;
                    break;
                case CpInit::random:
                    for (auto& v : w) v = rng.gauss_cx();
                    break;
            }
        }
    return f;
}

}  // namespace

EqualizerReport lr_tmmse_train(const CMat& x, std::span<const cx> s, const LrTmmseConfig& cfg) {
    cfg.validate(x.rows());
    if (s.size() != x.cols())
        throw std::invalid_argument("lr-tmmse: training length mismatch");

    const std::size_t order = cfg.dims.size();
    const std::size_t k_len = x.cols();
    ProductCounter pc;

    CpFilter f = init_cp_filter(cfg);

    EqualizerReport report;
    CVec w_prev = vectorize_cp(f);
    report.mse_trace.push_back(sample_mse(w_prev, x, s));

    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        for (std::size_t d = 0; d < order; ++d) {
            const std::size_t nd = cfg.dims[d];
            const std::size_t block = cfg.rank * nd;

            // U_d stacks one contracted block per rank term.
            CMat u_d(block, k_len);
            for (std::size_t r = 0; r < cfg.rank; ++r) {
                std::vector<CVec> others;
                others.reserve(order - 1);
                for (std::size_t j = 0; j < order; ++j)
                    if (j != d) others.push_back(f.factors[j][r]);
                const CMat u_dr = kernels::mode_contract_frames(
                    x.flat(), cfg.dims, k_len, d, others, &pc);
                for (std::size_t k = 0; k < k_len; ++k)
                    for (std::size_t i = 0; i < nd; ++i) u_d(r * nd + i, k) = u_dr(i, k);
            }

            CMat r_block = kernels::sample_covariance(u_d, &pc);
            const CVec p_block = kernels::sample_cross_covariance(u_d, s, &pc);
            if (cfg.loading > 0.0)
                add_diagonal(r_block, cfg.loading * trace_real(r_block) /
                                           static_cast<double>(block));

            CVec w_d;
            try {
                w_d = CholeskyFactor::factor(r_block, &pc).solve(p_block, &pc);
            } catch (const SingularMatrixError& e) {
                std::ostringstream msg;
                msg << "lr-tmmse: block covariance for mode " << d
                    << " is numerically singular. With the canonical initialization the R "
                       "stacked blocks of U_d are identical and the block system is rank "
                       "deficient for R > 1; use init = canonical-perturbed or a positive "
                       "diagonal loading. ("
                    << e.what() << ")";
                throw SingularMatrixError(msg.str());
            }

            for (std::size_t r = 0; r < cfg.rank; ++r)
                for (std::size_t i = 0; i < nd; ++i) f.factors[d][r][i] = w_d[r * nd + i];

            report.mse_trace.push_back(sample_mse(vectorize_cp(f), x, s));
        }

        const CVec w_now = vectorize_cp(f);
        double change = 0.0;
        for (std::size_t i = 0; i < w_now.size(); ++i) change += std::norm(w_now[i] - w_prev[i]);
        report.iterations = iter;
        if (change < cfg.epsilon) {
            report.converged = true;
            break;
        }
        w_prev = w_now;
    }

    report.w_vec = vectorize_cp(f);
    report.cp = std::move(f);
    report.counts = pc;
    return report;
}

CVec apply_equalizer(std::span<const cx> w, const CMat& x) {
    return kernels::apply_filter(w, x);
}

double sample_mse(std::span<const cx> w, const CMat& x, std::span<const cx> s) {
    if (s.size() != x.cols()) throw std::invalid_argument("sample_mse: training length mismatch");
    const CVec y = kernels::apply_filter(w, x);
    double acc = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) acc += std::norm(s[k] - y[k]);
    return acc / static_cast<double>(x.cols());
}

}  // namespace tmmse
