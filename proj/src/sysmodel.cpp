#include "tmmse/sysmodel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tmmse/kernels.hpp"

namespace tmmse {

void ScenarioParams::validate() const {
    if (antennas == 0 || users == 0 || taps == 0 || paths == 0 || frame_len == 0)
        throw std::invalid_argument("scenario: N, U, Q, L, K must all be positive");
    if (!(sigma_s2 > 0.0)) throw std::invalid_argument("scenario: sigma_s2 must be positive");
    if (!(symbol_period > 0.0)) throw std::invalid_argument("scenario: symbol period must be positive");
}

CVec steering_vector(double theta_deg, std::size_t antennas) {
    if (antennas == 0) throw std::invalid_argument("steering_vector: need at least one antenna");
    const double c = std::cos(theta_deg * std::numbers::pi / 180.0);
    CVec a(antennas);
    for (std::size_t n = 0; n < antennas; ++n) {
        const double phase = -std::numbers::pi * static_cast<double>(n) * c;
        a[n] = {std::cos(phase), std::sin(phase)};
    }
    return a;
}

namespace {

double sinc(double t) {
    if (std::abs(t) < 1e-12) return 1.0;
    const double z = std::numbers::pi * t;
    return std::sin(z) / z;
}

}  // namespace

std::vector<double> pulse_vector(double tau, std::size_t taps, double symbol_period) {
    if (taps == 0) throw std::invalid_argument("pulse_vector: need at least one tap");
    std::vector<double> g(taps);
    for (std::size_t q = 0; q < taps; ++q)
        g[q] = sinc((static_cast<double>(q) * symbol_period - tau) / symbol_period);
    return g;
}

ChannelRealization draw_channel(const ScenarioParams& params, Rng& rng) {
    params.validate();
    ChannelRealization chan;
    chan.users.resize(params.users);
    for (auto& uc : chan.users) {
        uc.gains.resize(params.paths);
        uc.angles_deg.resize(params.paths);
        uc.delays.resize(params.paths);
        uc.h = CMat(params.antennas, params.taps);
        for (std::size_t l = 0; l < params.paths; ++l) {
            uc.gains[l] = rng.gauss_cx();
            uc.angles_deg[l] = rng.uniform(-90.0, 90.0);
            uc.delays[l] = rng.uniform(0.0, static_cast<double>(params.taps - 1) *
                                                params.symbol_period);
            const CVec a = steering_vector(uc.angles_deg[l], params.antennas);
            const std::vector<double> g =
                pulse_vector(uc.delays[l], params.taps, params.symbol_period);
            for (std::size_t q = 0; q < params.taps; ++q)
                for (std::size_t n = 0; n < params.antennas; ++n)
                    uc.h(n, q) += uc.gains[l] * a[n] * g[q];
        }
    }
    return chan;
}

CVec qpsk_symbols(std::size_t count, double sigma_s2, Rng& rng) {
    if (count == 0) throw std::invalid_argument("qpsk_symbols: count must be positive");
    CVec s(count);
    for (auto& v : s) v = rng.qpsk(sigma_s2);
    return s;
}

SignalFrame synthesize_frame(const ScenarioParams& params, const ChannelRealization& chan,
                             Rng& rng) {
    params.validate();
    if (chan.users.size() != params.users)
        throw std::invalid_argument("synthesize_frame: channel user count mismatch");

    SignalFrame frame;
    const std::size_t hist_len = params.frame_len + params.taps - 1;

    // Draw order is fixed: per-user symbol rows first, then noise column by
    // column, so a seed fully determines the frame.
    frame.symbol_hist = CMat(params.users, hist_len);
    for (std::size_t u = 0; u < params.users; ++u) {
        const CVec s = qpsk_symbols(hist_len, params.sigma_s2, rng);
        for (std::size_t j = 0; j < hist_len; ++j) frame.symbol_hist(u, j) = s[j];
    }

    frame.noise = CMat(params.antennas, params.frame_len);
    const double noise_scale = std::sqrt(params.sigma_n2());
    for (std::size_t k = 0; k < params.frame_len; ++k)
        for (std::size_t n = 0; n < params.antennas; ++n)
            frame.noise(n, k) = noise_scale * rng.gauss_cx();

    std::vector<CMat> channels;
    channels.reserve(params.users);
    for (const auto& uc : chan.users) channels.push_back(uc.h);

    frame.x = kernels::convolve_frame(channels, frame.symbol_hist, params.frame_len);
    frame.x += frame.noise;
    return frame;
}

TheoreticalCovariances theoretical_covariances(const ScenarioParams& params,
                                               const ChannelRealization& chan,
                                               std::size_t target_user) {
    params.validate();
    if (target_user >= chan.users.size())
        throw std::invalid_argument("theoretical_covariances: target user out of range");

    const std::size_t n = params.antennas;
    TheoreticalCovariances cov;
    cov.r_dd = CMat(n, n);
    cov.r_ii = CMat(n, n);

    // R_ss = sigma_s2 * I, so H_u R_ss H_u^H reduces to sigma_s2 * H_u H_u^H.
    for (std::size_t u = 0; u < chan.users.size(); ++u) {
        const CMat& h = chan.users[u].h;
        CMat outer = matmul(h, adjoint(h));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                const cx v = params.sigma_s2 * outer(i, j);
                if (u == target_user)
                    cov.r_dd(i, j) += v;
                else
                    cov.r_ii(i, j) += v;
            }
    }

    cov.r_bb = CMat(n, n);
    add_diagonal(cov.r_bb, params.sigma_n2());
    cov.r_xx = cov.r_dd + cov.r_ii + cov.r_bb;

    cov.p = CMat(n, params.taps);
    const CMat& hu = chan.users[target_user].h;
    for (std::size_t q = 0; q < params.taps; ++q)
        for (std::size_t i = 0; i < n; ++i) cov.p(i, q) = params.sigma_s2 * hu(i, q);
    return cov;
}

CVec lagged_training(const SignalFrame& frame, std::size_t user, std::size_t delta,
                     std::size_t taps) {
    if (user >= frame.symbol_hist.rows())
        throw std::invalid_argument("lagged_training: user out of range");
    if (delta >= taps) throw std::invalid_argument("lagged_training: delta must be below Q");
    const std::size_t k_len = frame.x.cols();
    CVec s(k_len);
    for (std::size_t k = 0; k < k_len; ++k) s[k] = frame.symbol_hist(user, k + taps - 1 - delta);
    return s;
}

}  // namespace tmmse
