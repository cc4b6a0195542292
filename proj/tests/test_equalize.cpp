#include <doctest.h>

#include <cmath>

#include "tmmse/equalize.hpp"
#include "tmmse/kernels.hpp"
#include "tmmse/rng.hpp"
#include "tmmse/sysmodel.hpp"
#include "tmmse/tensor.hpp"

using namespace tmmse;

namespace {

CVec random_cvec(std::size_t n, Rng& rng) {
    CVec v(n);
    for (auto& x : v) x = rng.gauss_cx();
    return v;
}

CMat random_cmat(std::size_t r, std::size_t c, Rng& rng) {
    CMat m(r, c);
    for (auto& x : m.flat()) x = rng.gauss_cx();
    return m;
}

CMat random_hpd(std::size_t n, Rng& rng, double shift = 1.0) {
    CMat g = random_cmat(n, n, rng);
    CMat a = matmul(g, adjoint(g));
    add_diagonal(a, shift);
    return a;
}

}  // namespace

TEST_CASE("mse objective closed forms") {
    CMat r(2, 2);
    r(0, 0) = 2.0;
    r(1, 1) = 1.0;
    const CVec p{cx{1, 0}, cx{0, 0}};

    const CVec zero{cx{0, 0}, cx{0, 0}};
    CHECK(mse_objective(zero, r, p, 1.0) == doctest::Approx(1.0));

    const CVec half{cx{0.5, 0}, cx{0, 0}};
    CHECK(mse_objective(half, r, p, 1.0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(mse_objective(CVec{cx{1, 0}}, r, p, 1.0), std::invalid_argument);
}

TEST_CASE("theoretical mmse solves the normal equations") {
    CMat r(2, 2);
    r(0, 0) = 2.0;
    r(1, 1) = 1.0;
    const CVec p{cx{1, 0}, cx{0, 0}};
    const CVec w = mmse_theoretical(r, p);
    CHECK(std::abs(w[0] - cx{0.5, 0}) < 1e-12);
    CHECK(std::abs(w[1]) < 1e-12);

    Rng rng(50);
    const CMat ident = CMat::identity(6);
    const CVec q = random_cvec(6, rng);
    const CVec w_id = mmse_theoretical(ident, q);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(w_id[i] - q[i]) < 1e-12);
}

TEST_CASE("theoretical mmse is the global minimizer and hits the closed-form minimum") {
    Rng rng(51);
    const std::size_t n = 8;
    const CMat r = random_hpd(n, rng);
    const CVec p = random_cvec(n, rng);
    const double sigma_s2 = 1.7;

    const CVec w_opt = mmse_theoretical(r, p);
    const double j_opt = mse_objective(w_opt, r, p, sigma_s2);

    // closed form sigma_s2 - p^H R^{-1} p
    const double j_closed = sigma_s2 - inner(p, CholeskyFactor::factor(r).solve(p)).real();
    CHECK(j_opt == doctest::Approx(j_closed).epsilon(1e-10));

    for (int probe = 0; probe < 1000; ++probe) {
        const CVec w = random_cvec(n, rng);
        CHECK(mse_objective(w, r, p, sigma_s2) >= j_opt - 1e-10);
    }
}

TEST_CASE("delta selection") {
    Rng rng(52);

    SUBCASE("single tap has a single candidate") {
        const CMat r_ss = CMat::identity(1);
        const CMat h = random_cmat(4, 1, rng);
        const CMat r_xx = random_hpd(4, rng);
        CHECK(select_delta(r_ss, h, r_xx) == 0);
    }

    SUBCASE("only nonzero column wins") {
        CMat h(4, 3);
        for (std::size_t i = 0; i < 4; ++i) h(i, 2) = rng.gauss_cx();
        CMat r_ss = CMat::identity(3);
        const CMat r_xx = random_hpd(4, rng);
        CHECK(select_delta(r_ss, h, r_xx) == 2);
    }

    SUBCASE("argmax minimizes the closed-form mse over an exhaustive sweep") {
        const std::size_t taps = 4, n = 6;
        const double sigma_s2 = 1.0;
        for (int trial = 0; trial < 20; ++trial) {
            const CMat h = random_cmat(n, taps, rng);
            CMat r_xx = matmul(h, adjoint(h));
            add_diagonal(r_xx, 0.3);
            CMat r_ss(taps, taps);
            add_diagonal(r_ss, sigma_s2);

            const std::size_t picked = select_delta(r_ss, h, r_xx);
            const CholeskyFactor chol = CholeskyFactor::factor(r_xx);
            double best = 1e300;
            std::size_t best_q = 0;
            for (std::size_t q = 0; q < taps; ++q) {
                CVec p(n);
                for (std::size_t i = 0; i < n; ++i) p[i] = sigma_s2 * h(i, q);
                const double j = sigma_s2 - inner(p, chol.solve(p)).real();
                if (j < best - 1e-12) {
                    best = j;
                    best_q = q;
                }
            }
            CHECK(picked == best_q);
        }
    }

    SUBCASE("scaling R_ss does not change the argmax") {
        const std::size_t taps = 5, n = 6;
        const CMat h = random_cmat(n, taps, rng);
        const CMat r_xx = random_hpd(n, rng);
        CMat r1(taps, taps), r2(taps, taps);
        add_diagonal(r1, 1.0);
        add_diagonal(r2, 37.5);
        CHECK(select_delta(r1, h, r_xx) == select_delta(r2, h, r_xx));
    }
}

TEST_CASE("sample mmse statistics match the hand-computed 2x2 case") {
    // X = [[1, j], [0, 1]], s = [1, 1]
    CMat x(2, 2);
    x(0, 0) = cx{1, 0};
    x(0, 1) = cx{0, 1};
    x(1, 1) = cx{1, 0};
    const CVec s{cx{1, 0}, cx{1, 0}};

    ProductCounter pc;
    CMat r_hat = kernels::sample_covariance(x, &pc);
    CHECK(std::abs(r_hat(0, 0) - cx{1, 0}) < 1e-12);
    CHECK(std::abs(r_hat(0, 1) - cx{0, 0.5}) < 1e-12);
    CHECK(std::abs(r_hat(1, 0) - cx{0, -0.5}) < 1e-12);
    CHECK(std::abs(r_hat(1, 1) - cx{0.5, 0}) < 1e-12);

    const CVec p_hat = kernels::sample_cross_covariance(x, s, &pc);
    CHECK(std::abs(p_hat[0] - cx{0.5, 0.5}) < 1e-12);
    CHECK(std::abs(p_hat[1] - cx{0.5, 0}) < 1e-12);
}

TEST_CASE("zero training sequence gives the zero filter") {
    Rng rng(53);
    const CMat x = random_cmat(4, 32, rng);
    const CVec s(32, cx{0, 0});
    const CVec w = mmse_sample(x, s);
    for (const cx& v : w) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("underdetermined sample mmse names the remedy") {
    Rng rng(54);
    const CMat x = random_cmat(8, 3, rng);  // K < N, singular without loading
    const CVec s = random_cvec(3, rng);
    CHECK_THROWS_AS(mmse_sample(x, s), SingularMatrixError);
    try {
        mmse_sample(x, s);
    } catch (const SingularMatrixError& e) {
        const std::string what = e.what();
        CHECK(what.find("K") != std::string::npos);
        CHECK(what.find("loading") != std::string::npos);
    }
    CHECK_NOTHROW(mmse_sample(x, s, 0.1));
}

TEST_CASE("sample mmse approaches the theoretical filter as K grows") {
    ScenarioParams sc;
    sc.antennas = 8;
    sc.users = 2;
    sc.taps = 3;
    sc.paths = 3;
    sc.sigma_s2 = 1.0;
    sc.snr_db = 15.0;

    double prev_gap = 0.0;
    for (std::size_t k_len : {100u, 1000u, 10000u}) {
        sc.frame_len = k_len;
        double gap = 0.0;
        const int seeds = 10;
        for (int t = 0; t < seeds; ++t) {
            Rng rng(800 + t);
            const ChannelRealization chan = draw_channel(sc, rng);
            const SignalFrame frame = synthesize_frame(sc, chan, rng);
            const TheoreticalCovariances cov = theoretical_covariances(sc, chan, 0);
            CMat r_ss(sc.taps, sc.taps);
            add_diagonal(r_ss, sc.sigma_s2);
            const std::size_t delta = select_delta(r_ss, chan.users[0].h, cov.r_xx);
            const CVec s = lagged_training(frame, 0, delta, sc.taps);

            const CVec w_hat = mmse_sample(frame.x, s);
            const CVec w_theo = mmse_theoretical(cov.r_xx, cov.p.col(delta));
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < sc.antennas; ++i) {
                num += std::norm(w_hat[i] - w_theo[i]);
                den += std::norm(w_theo[i]);
            }
            gap += std::sqrt(num / den);
        }
        gap /= seeds;
        if (prev_gap > 0.0) CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("delta selection breaks exact ties toward the smaller index") {
    // two identical channel columns produce an exactly tied diagonal
    CMat h(3, 4);
    h(0, 1) = cx{1, 1};
    h(1, 1) = cx{0, -2};
    h(2, 1) = cx{0.5, 0};
    for (std::size_t i = 0; i < 3; ++i) h(i, 3) = h(i, 1);
    CMat r_ss = CMat::identity(4);
    CMat r_xx = matmul(h, adjoint(h));
    add_diagonal(r_xx, 1.0);
    CHECK(select_delta(r_ss, h, r_xx) == 1);
}

TEST_CASE("lr-tmmse with D=1, R=1, one sweep reduces to sample mmse") {
    Rng rng(55);
    const std::size_t n = 16, k_len = 64;
    for (int trial = 0; trial < 10; ++trial) {
        const CMat x = random_cmat(n, k_len, rng);
        const CVec s = random_cvec(k_len, rng);

        LrTmmseConfig cfg;
        cfg.dims = {n};
        cfg.rank = 1;
        cfg.max_iters = 1;
        cfg.loading = 0.0;
        cfg.init = CpInit::canonical;

        const EqualizerReport report = lr_tmmse_train(x, s, cfg);
        const CVec w_direct = mmse_sample(x, s);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::norm(report.w_vec[i] - w_direct[i]);
            den += std::norm(w_direct[i]);
        }
        CHECK(std::sqrt(num) <= 1e-9 * std::sqrt(den));
    }
}

TEST_CASE("block output form matches the full filter output for every mode") {
    // y[k] = w_d^H u_d[k] must equal vec(W)^H x[k] for each isolated mode
    Rng rng(56);
    const std::vector<std::size_t> dims{2, 3, 2};
    const std::size_t n = 12, k_len = 7, rank = 2;
    const CMat x = random_cmat(n, k_len, rng);

    CpFilter f(dims, rank);
    for (auto& row : f.factors)
        for (auto& w : row)
            for (auto& v : w) v = rng.gauss_cx();

    const CVec w_vec = vectorize_cp(f);
    const CVec y_direct = apply_equalizer(w_vec, x);

    for (std::size_t d = 0; d < dims.size(); ++d) {
        const std::size_t nd = dims[d];
        CMat u_d(rank * nd, k_len);
        CVec w_d(rank * nd);
        for (std::size_t r = 0; r < rank; ++r) {
            std::vector<CVec> others;
            for (std::size_t j = 0; j < dims.size(); ++j)
                if (j != d) others.push_back(f.factors[j][r]);
            const CMat u_dr = kernels::mode_contract_frames(x.flat(), dims, k_len, d, others);
            for (std::size_t k = 0; k < k_len; ++k)
                for (std::size_t i = 0; i < nd; ++i) u_d(r * nd + i, k) = u_dr(i, k);
            for (std::size_t i = 0; i < nd; ++i) w_d[r * nd + i] = f.factors[d][r][i];
        }
        for (std::size_t k = 0; k < k_len; ++k) {
            const cx y_block = inner(w_d, u_d.col(k));
            CHECK(std::abs(y_block - y_direct[k]) <=
                  1e-10 * std::max(1.0, std::abs(y_direct[k])));
        }
    }
}

TEST_CASE("apply_equalizer selector and zero cases") {
    Rng rng(57);
    const CMat x = random_cmat(5, 9, rng);

    CVec e1(5, cx{0, 0});
    e1[0] = 1.0;
    const CVec y = apply_equalizer(e1, x);
    for (std::size_t k = 0; k < 9; ++k) CHECK(y[k] == x(0, k));

    const CVec zero(5, cx{0, 0});
    for (const cx& v : apply_equalizer(zero, x)) CHECK(v == cx{0, 0});

    CHECK_THROWS_AS(apply_equalizer(CVec{cx{1, 0}}, x), std::invalid_argument);
}

TEST_CASE("rank-1 cp filter of unit factors picks element (1,...,1)") {
    Rng rng(58);
    const std::vector<std::size_t> dims{2, 2, 2};
    const CMat x = random_cmat(8, 4, rng);
    CpFilter f(dims, 1);
    for (std::size_t d = 0; d < 3; ++d) f.factors[d][0][0] = 1.0;
    const CVec y = apply_equalizer(vectorize_cp(f), x);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(y[k] - x(0, k)) < 1e-12);
}

TEST_CASE("sample mse agrees with the quadratic-form objective") {
    Rng rng(59);
    const std::size_t n = 6, k_len = 40;
    const CMat x = random_cmat(n, k_len, rng);
    const CVec s = random_cvec(k_len, rng);
    const CVec w = random_cvec(n, rng);

    const CMat r_hat = kernels::sample_covariance(x);
    const CVec p_hat = kernels::sample_cross_covariance(x, s);
    const double sym_power = norm2_sq(s) / static_cast<double>(k_len);

    const double direct = sample_mse(w, x, s);
    const double quadratic = mse_objective(w, r_hat, p_hat, sym_power);
    CHECK(direct == doctest::Approx(quadratic).epsilon(1e-12));
}

TEST_CASE("canonical init with R>1 and no loading reports the degeneracy") {
    Rng rng(60);
    const CMat x = random_cmat(16, 80, rng);
    const CVec s = random_cvec(80, rng);

    LrTmmseConfig cfg;
    cfg.dims = {4, 4};
    cfg.rank = 2;
    cfg.loading = 0.0;
    cfg.init = CpInit::canonical;

    CHECK_THROWS_AS(lr_tmmse_train(x, s, cfg), SingularMatrixError);
    try {
        lr_tmmse_train(x, s, cfg);
    } catch (const SingularMatrixError& e) {
        const std::string what = e.what();
        CHECK(what.find("canonical") != std::string::npos);
        CHECK(what.find("loading") != std::string::npos);
    }

    // both documented remedies unblock the solve
    cfg.init = CpInit::canonical_perturbed;
    CHECK_NOTHROW(lr_tmmse_train(x, s, cfg));
    cfg.init = CpInit::canonical;
    cfg.loading = 1e-8;
    CHECK_NOTHROW(lr_tmmse_train(x, s, cfg));
}

TEST_CASE("block-descent trace is monotone with zero loading") {
    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const CMat x = random_cmat(16, 200, rng);
        const CVec s = random_cvec(200, rng);

        LrTmmseConfig cfg;
        cfg.dims = {4, 4};
        cfg.rank = 2;
        cfg.loading = 0.0;
        cfg.init = CpInit::canonical_perturbed;
        cfg.init_seed = 100 + trial;
        cfg.max_iters = 6;

        const EqualizerReport report = lr_tmmse_train(x, s, cfg);
        REQUIRE(!report.mse_trace.empty());
        for (std::size_t i = 1; i < report.mse_trace.size(); ++i)
            CHECK(report.mse_trace[i] <= report.mse_trace[i - 1] + 1e-10);
    }
}

TEST_CASE("training on a realistic frame converges within a couple of sweeps") {
    // reference operating point: N=512 as (8,8,8), R=3, K=600
    ScenarioParams sc;
    sc.antennas = 512;
    sc.users = 4;
    sc.taps = 5;
    sc.paths = 5;
    sc.frame_len = 600;
    sc.sigma_s2 = 1.0;
    sc.snr_db = 20.0;

    std::size_t within_two = 0;
    const int trials = 5;
    for (int t = 0; t < trials; ++t) {
        Rng rng(700 + t);
        const ChannelRealization chan = draw_channel(sc, rng);
        const SignalFrame frame = synthesize_frame(sc, chan, rng);
        const TheoreticalCovariances cov = theoretical_covariances(sc, chan, 0);
        CMat r_ss(sc.taps, sc.taps);
        add_diagonal(r_ss, sc.sigma_s2);
        const std::size_t delta = select_delta(r_ss, chan.users[0].h, cov.r_xx);
        const CVec s = lagged_training(frame, 0, delta, sc.taps);

        LrTmmseConfig cfg;
        cfg.dims = {8, 8, 8};
        cfg.rank = 3;
        cfg.init_seed = 900 + t;
        const EqualizerReport report = lr_tmmse_train(frame.x, s, cfg);
        CHECK(report.converged);
        if (report.iterations <= 2) ++within_two;
    }
    CHECK(within_two >= trials - 1);
}
