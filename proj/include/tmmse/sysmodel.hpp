#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tmmse/linalg.hpp"
#include "tmmse/rng.hpp"
#include "tmmse/types.hpp"

namespace tmmse {

/// Scenario parameters for the multi-user frequency-selective uplink.
struct ScenarioParams {
    std::size_t antennas = 64;   // N, base-station ULA size
    std::size_t users = 4;       // U
    std::size_t taps = 5;        // Q, channel delay taps
    std::size_t paths = 5;       // L, propagation paths per user
    std::size_t frame_len = 600; // K, symbols per frame
    double sigma_s2 = 1.0;       // symbol variance (linear)
    double snr_db = 20.0;
    double symbol_period = 1.0;  // T, unitless

    double sigma_n2() const { return sigma_s2 / std::pow(10.0, snr_db / 10.0); }

    void validate() const;
};

/// One block-fading channel draw: per-user path parameters and the
/// assembled N x Q channel matrices.
struct ChannelRealization {
    struct UserChannel {
        CVec gains;                 // complex path gains, length L
        std::vector<double> angles_deg;
        std::vector<double> delays; // in units of T
        CMat h;                     // N x Q
    };
    std::vector<UserChannel> users;
};

/// One observed frame: received samples, the symbol history that produced
/// them, and the noise that was added (kept for diagnostics).
struct SignalFrame {
    CMat x;            // N x K received samples
    CMat symbol_hist;  // U x (K+Q-1); column j holds s_u[j - (Q-1)]
    CMat noise;        // N x K
};

/// Theoretical second-order statistics for one target user.
struct TheoreticalCovariances {
    CMat r_dd;  // desired-signal covariance H_u R_ss H_u^H
    CMat r_ii;  // multi-user interference covariance
    CMat r_bb;  // noise covariance sigma_n2 * I
    CMat r_xx;  // r_dd + r_ii + r_bb
    CMat p;     // N x Q; column delta is the cross-covariance H_u R_ss e_delta
};

/// ULA spatial response: entry n (0-based) is exp(-j*pi*n*cos(theta)).
CVec steering_vector(double theta_deg, std::size_t antennas);

/// Pulse-shaping taps: entry q (0-based) is sinc((q*T - tau)/T), sinc(0) = 1.
std::vector<double> pulse_vector(double tau, std::size_t taps, double symbol_period = 1.0);

/// Draws gains CN(0,1), angles uniform on [-90, 90] degrees, delays uniform
/// on [0, (Q-1)T], and assembles H_u = sum_l gain * steering * pulse^T.
ChannelRealization draw_channel(const ScenarioParams& params, Rng& rng);

/// i.i.d. QPSK sequence with per-symbol power sigma_s2.
CVec qpsk_symbols(std::size_t count, double sigma_s2, Rng& rng);

/// Received frame per the tapped-delay model, with Q-1 genuine pre-frame
/// symbols so every lag is defined from the first column onward.
SignalFrame synthesize_frame(const ScenarioParams& params, const ChannelRealization& chan,
                             Rng& rng);

TheoreticalCovariances theoretical_covariances(const ScenarioParams& params,
                                               const ChannelRealization& chan,
                                               std::size_t target_user);

/// Training view of the symbol history: s_u[k - delta] for k = 0..K-1.
CVec lagged_training(const SignalFrame& frame, std::size_t user, std::size_t delta,
                     std::size_t taps);

}  // namespace tmmse
