#pragma once

#include <string>

#include "tmmse/harness.hpp"

namespace tmmse {

/// Desk-scale defaults: N = 64 as (4,4,4), K = 600, U = 4, Q = L = 5,
/// QPSK at unit power, SNR sweep {0,10,20,30} dB, 100 trials. Matches
/// configs/desk.ini.
Campaign desk_campaign();

/// Loads a campaign from an INI-style key-value file. Sections [campaign],
/// [scenario], [equalizer]; '#' or ';' start a comment; unknown sections or
/// keys are configuration errors.
Campaign load_campaign(const std::string& path);

/// Parses a comma-separated list of sweep values.
std::vector<double> parse_value_list(const std::string& text);

}  // namespace tmmse
