#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmmse/equalize.hpp"
#include "tmmse/metrics.hpp"
#include "tmmse/sysmodel.hpp"
#include "tmmse/types.hpp"

namespace tmmse {

inline constexpr const char* kEqTheoretical = "mmse-theoretical";
inline constexpr const char* kEqSample = "mmse-sample";
inline constexpr const char* kEqTensor = "lr-tmmse";

enum class SweepVar { snr_db, frame_len, rank, order, antennas };

SweepVar parse_sweep_var(const std::string& name);  // snr_db | K | R | D | N
std::string to_string(SweepVar var);

/// Everything one trial needs: the scenario, the tensor-equalizer settings,
/// and which equalizers to run.
struct TrialConfig {
    ScenarioParams scenario;
    LrTmmseConfig eq;
    double sample_loading = 0.0;  // absolute diagonal loading for mmse-sample
    std::size_t target_user = 0;
    std::vector<std::string> equalizers = {kEqTheoretical, kEqSample, kEqTensor};

    void validate() const;
};

struct Campaign {
    SweepVar sweep = SweepVar::snr_db;
    std::vector<double> values;
    std::size_t trials = 100;
    TrialConfig base;
    std::uint64_t master_seed = 1;
    std::string out_path = "results.csv";
};

/// Per-equalizer outcome of a single trial.
struct EqualizerOutcome {
    std::string id;
    double sinr_lin = 0.0;
    double mse = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<ProductCounter> counts;
    std::uint64_t formula_products = 0;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    std::size_t delta = 0;
    std::uint64_t frame_checksum = 0;
    std::vector<EqualizerOutcome> equalizers;
};

/// One CSV row: aggregates of one equalizer at one sweep point. Field names
/// are the CSV header.
struct ResultRow {
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string equalizer;
    double sinr_mean_lin = 0.0;      // mean of linear SINR across trials
    double sinr_mean_db = 0.0;       // dB of the linear mean
    double sinr_db_trial_mean = 0.0; // mean of per-trial dB values
    double sinr_std = 0.0;           // sample std of linear SINR
    double mse_mean = 0.0;
    std::uint64_t products_formula = 0;
    std::uint64_t products_measured = 0;
    double iterations_mean = 0.0;
    double convergence_rate = 0.0;
    std::uint64_t seed = 0;
};

/// Near-balanced ordered factorization of n into `order` factors
/// (non-decreasing, minimal spread). Throws when no factorization exists.
std::vector<std::size_t> balanced_dims(std::size_t n, std::size_t order);

/// Copy of `base` with the sweep variable applied; validates the result so
/// configuration errors surface before any trial runs.
TrialConfig apply_sweep(const TrialConfig& base, SweepVar var, double value);

/// Runs one seeded trial: draw channel, synthesize frame, pick the lag with
/// the genie rule, train every configured equalizer on the identical frame,
/// score SINR against the trial's theoretical covariances.
TrialOutcome run_trial(const TrialConfig& cfg, std::uint64_t seed);

/// Independent trials of one sweep point; may execute in parallel, results
/// are deterministic and ordered by trial index.
std::vector<TrialOutcome> run_point(const TrialConfig& cfg, std::size_t trials,
                                    std::uint64_t master_seed, std::size_t sweep_index);

std::vector<ResultRow> aggregate_point(const std::vector<TrialOutcome>& outcomes,
                                       const TrialConfig& cfg, SweepVar var, double value,
                                       std::uint64_t master_seed);

std::vector<ResultRow> run_campaign(const Campaign& campaign);

std::string csv_header();
std::string csv_line(const ResultRow& row);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// (x, series, y) triples with y = sinr_mean_db, one series per equalizer.
void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& path);

// ---- formula-only complexity tables ----

struct ComplexitySpec {
    std::vector<std::uint64_t> frame_sweep = {100, 200, 300, 400, 500,
                                              600, 700, 800, 900, 1000};
    std::uint64_t fixed_antennas = 512;
    std::vector<std::uint64_t> antenna_sweep = {64, 128, 256, 512, 1024, 2048, 4096};
    std::uint64_t fixed_frames = 600;
    std::vector<std::size_t> orders = {2, 3, 4, 5};
    std::vector<std::size_t> ranks = {1, 2, 3, 4};
    std::uint64_t iters = 2;
    TailTerm tail = TailTerm::printed;
};

struct ComplexityRow {
    std::string sweep;  // "K" or "N"
    std::uint64_t antennas = 0, frames = 0, order = 0, rank = 0, iters = 0;
    std::vector<std::size_t> dims;
    std::uint64_t products_mmse = 0;
    std::uint64_t products_lr_tmmse = 0;
    double ratio = 0.0;  // mmse / lr-tmmse
};

std::vector<ComplexityRow> complexity_table(const ComplexitySpec& spec);
void emit_complexity_csv(const std::vector<ComplexityRow>& rows, const std::string& path);

}  // namespace tmmse
