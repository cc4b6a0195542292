#include "tmmse/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "tmmse/rng.hpp"

namespace tmmse {

SweepVar parse_sweep_var(const std::string& name) {
    if (name == "snr_db" || name == "snr") return SweepVar::snr_db;
    if (name == "K" || name == "k" || name == "frame_len") return SweepVar::frame_len;
    if (name == "R" || name == "r" || name == "rank") return SweepVar::rank;
    if (name == "D" || name == "d" || name == "order") return SweepVar::order;
    if (name == "N" || name == "n" || name == "antennas") return SweepVar::antennas;
    throw std::invalid_argument("unknown sweep variable '" + name +
                                "' (expected snr_db, K, R, D, or N)");
}

std::string to_string(SweepVar var) {
    switch (var) {
        case SweepVar::snr_db: return "snr_db";
        case SweepVar::frame_len: return "K";
        case SweepVar::rank: return "R";
        case SweepVar::order: return "D";
        case SweepVar::antennas: return "N";
    }
    return "?";
}

void TrialConfig::validate() const {
    scenario.validate();
    eq.validate(scenario.antennas);
    if (sample_loading < 0.0)
        throw std::invalid_argument("config: sample_loading must be nonnegative");
    if (target_user >= scenario.users)
        throw std::invalid_argument("config: target_user out of range");
    if (equalizers.empty()) throw std::invalid_argument("config: no equalizers selected");
    for (const std::string& id : equalizers)
        if (id != kEqTheoretical && id != kEqSample && id != kEqTensor)
            throw std::invalid_argument("config: unknown equalizer id '" + id + "'");
}

std::vector<std::size_t> balanced_dims(std::size_t n, std::size_t order) {
    if (n == 0 || order == 0)
        throw std::invalid_argument("balanced_dims: n and order must be positive");

    std::vector<std::size_t> best, current;
    std::size_t best_spread = SIZE_MAX;

    // Non-decreasing factor tuples with product n; keep the tightest one.
    auto search = [&](auto&& self, std::size_t remaining, std::size_t slots,
                      std::size_t min_factor) -> void {
        if (slots == 1) {
            if (remaining < min_factor) return;
            current.push_back(remaining);
            const std::size_t spread = current.back() - current.front();
            if (spread < best_spread) {
                best_spread = spread;
                best = current;
            }
            current.pop_back();
            return;
        }
        for (std::size_t f = min_factor; f <= remaining; ++f) {
            if (remaining % f != 0) continue;
            // all later factors are >= f, so f^slots must not exceed remaining
            std::size_t pow = 1;
            bool feasible = true;
            for (std::size_t i = 0; i < slots; ++i) {
                if (pow > remaining / f) {
                    feasible = false;
                    break;
                }
                pow *= f;
            }
            if (!feasible) break;
            current.push_back(f);
            self(self, remaining / f, slots - 1, f);
            current.pop_back();
        }
    };
    search(search, n, order, 1);

    if (best.empty()) {
        std::ostringstream msg;
        msg << "balanced_dims: " << n << " has no factorization into " << order << " factors";
        throw std::invalid_argument(msg.str());
    }
    return best;
}

TrialConfig apply_sweep(const TrialConfig& base, SweepVar var, double value) {
    TrialConfig p = base;
    const auto as_count = [&](const char* what) {
        const double r = std::round(value);
        if (!(value > 0.0) || std::abs(value - r) > 1e-9) {
            std::ostringstream msg;
            msg << "sweep: " << what << " value " << value << " is not a positive integer";
            throw std::invalid_argument(msg.str());
        }
        return static_cast<std::size_t>(r);
    };
    switch (var) {
        case SweepVar::snr_db:
            p.scenario.snr_db = value;
            break;
        case SweepVar::frame_len:
            p.scenario.frame_len = as_count("K");
            break;
        case SweepVar::rank:
            p.eq.rank = as_count("R");
            break;
        case SweepVar::order:
            p.eq.dims = balanced_dims(p.scenario.antennas, as_count("D"));
            break;
        case SweepVar::antennas:
            p.scenario.antennas = as_count("N");
            p.eq.dims = balanced_dims(p.scenario.antennas, base.eq.dims.size());
            break;
    }
    p.validate();
    return p;
}

namespace {

std::uint64_t checksum_bytes(const CMat& m) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    const auto* p = reinterpret_cast<const unsigned char*>(m.data());
    const std::size_t bytes = m.rows() * m.cols() * sizeof(cx);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t theoretical_formula_products(std::uint64_t n) {
    // solve-only charge: the genie filter estimates nothing
    return n * n * n + n * n;
}

}  // namespace

TrialOutcome run_trial(const TrialConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const ScenarioParams& sc = cfg.scenario;

    Rng rng(seed);
    const ChannelRealization chan = draw_channel(sc, rng);
    const SignalFrame frame = synthesize_frame(sc, chan, rng);
    const TheoreticalCovariances cov = theoretical_covariances(sc, chan, cfg.target_user);

    CMat r_ss(sc.taps, sc.taps);
    add_diagonal(r_ss, sc.sigma_s2);
    const std::size_t delta =
        select_delta(r_ss, chan.users[cfg.target_user].h, cov.r_xx);
    const CVec s = lagged_training(frame, cfg.target_user, delta, sc.taps);

    TrialOutcome out;
    out.seed = seed;
    out.delta = delta;
    out.frame_checksum = checksum_bytes(frame.x);

    for (const std::string& id : cfg.equalizers) {
        EqualizerOutcome eo;
        eo.id = id;
        CVec w;
        if (id == kEqTheoretical) {
            ProductCounter pc;
            w = mmse_theoretical(cov.r_xx, cov.p.col(delta), &pc);
            eo.iterations = 1;
            eo.converged = true;
            eo.counts = pc;
            eo.formula_products = theoretical_formula_products(sc.antennas);
        } else if (id == kEqSample) {
            ProductCounter pc;
            w = mmse_sample(frame.x, s, cfg.sample_loading, &pc);
            eo.iterations = 1;
            eo.converged = true;
            eo.counts = pc;
            eo.formula_products = count_mmse(sc.antennas, sc.frame_len);
        } else {
            LrTmmseConfig eq = cfg.eq;
            eq.init_seed = splitmix64(seed ^ 0xC0FFEE17ull);
            EqualizerReport report = lr_tmmse_train(frame.x, s, eq);
            w = report.w_vec;
            eo.iterations = report.iterations;
            eo.converged = report.converged;
            eo.counts = report.counts;
            eo.formula_products =
                count_lr_tmmse(eq.dims, eq.rank, report.iterations, sc.frame_len);
        }
        eo.sinr_lin = sinr(w, cov.r_xx, cov.r_ii, cov.r_bb);
        eo.mse = sample_mse(w, frame.x, s);
        out.equalizers.push_back(std::move(eo));
    }

    // every equalizer consumed the identical frame
    if (checksum_bytes(frame.x) != out.frame_checksum)
        throw std::runtime_error("run_trial: frame mutated during equalizer training");
    return out;
}

std::vector<TrialOutcome> run_point(const TrialConfig& cfg, std::size_t trials,
                                    std::uint64_t master_seed, std::size_t sweep_index) {
    if (trials == 0) throw std::invalid_argument("run_point: trials must be positive");
    cfg.validate();

    std::vector<TrialOutcome> out(trials);
    std::exception_ptr error;

    const std::int64_t tt = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < tt; ++t) {
        try {
            out[static_cast<std::size_t>(t)] =
                run_trial(cfg, trial_seed(master_seed, sweep_index, static_cast<std::uint64_t>(t)));
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

std::vector<ResultRow> aggregate_point(const std::vector<TrialOutcome>& outcomes,
                                       const TrialConfig& cfg, SweepVar var, double value,
                                       std::uint64_t master_seed) {
    if (outcomes.empty()) throw std::invalid_argument("aggregate_point: no outcomes");
    const double n = static_cast<double>(outcomes.size());

    std::vector<ResultRow> rows;
    for (std::size_t e = 0; e < cfg.equalizers.size(); ++e) {
        ResultRow row;
        row.sweep_var = to_string(var);
        row.sweep_value = value;
        row.equalizer = cfg.equalizers[e];
        row.seed = master_seed;

        double sum_lin = 0.0, sum_db = 0.0, sum_mse = 0.0, sum_iters = 0.0;
        double formula = 0.0, measured = 0.0;
        std::size_t converged = 0;
        for (const TrialOutcome& t : outcomes) {
            const EqualizerOutcome& eo = t.equalizers[e];
            sum_lin += eo.sinr_lin;
            sum_db += to_db(eo.sinr_lin);
            sum_mse += eo.mse;
            sum_iters += static_cast<double>(eo.iterations);
            formula += static_cast<double>(eo.formula_products);
            if (eo.counts) measured += static_cast<double>(eo.counts->total());
            if (eo.converged) ++converged;
        }
        row.sinr_mean_lin = sum_lin / n;
        row.sinr_mean_db = to_db(row.sinr_mean_lin);
        row.sinr_db_trial_mean = sum_db / n;
        row.mse_mean = sum_mse / n;
        row.iterations_mean = sum_iters / n;
        row.convergence_rate = static_cast<double>(converged) / n;
        row.products_formula = static_cast<std::uint64_t>(std::llround(formula / n));
        row.products_measured = static_cast<std::uint64_t>(std::llround(measured / n));

        double var_acc = 0.0;
        for (const TrialOutcome& t : outcomes) {
            const double d = t.equalizers[e].sinr_lin - row.sinr_mean_lin;
            var_acc += d * d;
        }
        row.sinr_std = outcomes.size() > 1 ? std::sqrt(var_acc / (n - 1.0)) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_campaign(const Campaign& campaign) {
    if (campaign.values.empty())
        throw std::invalid_argument("campaign: sweep values must be nonempty");
    if (campaign.trials == 0) throw std::invalid_argument("campaign: trials must be positive");

    // resolve every sweep point up front so configuration errors precede trials
    std::vector<TrialConfig> points;
    points.reserve(campaign.values.size());
    for (double v : campaign.values) points.push_back(apply_sweep(campaign.base, campaign.sweep, v));

    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::vector<TrialOutcome> outcomes =
            run_point(points[i], campaign.trials, campaign.master_seed, i);
        std::vector<ResultRow> point_rows = aggregate_point(outcomes, points[i], campaign.sweep,
                                                            campaign.values[i],
                                                            campaign.master_seed);
        rows.insert(rows.end(), point_rows.begin(), point_rows.end());
    }
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        return a.equalizer < b.equalizer;
    });
    return rows;
}

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string csv_header() {
    return "sweep_var,sweep_value,equalizer,sinr_mean_lin,sinr_mean_db,sinr_db_trial_mean,"
           "sinr_std,mse_mean,products_formula,products_measured,iterations_mean,"
           "convergence_rate,seed";
}

std::string csv_line(const ResultRow& r) {
    std::ostringstream os;
    os << r.sweep_var << ',' << fmt_g(r.sweep_value) << ',' << r.equalizer << ','
       << fmt_g(r.sinr_mean_lin) << ',' << fmt_g(r.sinr_mean_db) << ','
       << fmt_g(r.sinr_db_trial_mean) << ',' << fmt_g(r.sinr_std) << ',' << fmt_g(r.mse_mean)
       << ',' << r.products_formula << ',' << r.products_measured << ','
       << fmt_g(r.iterations_mean) << ',' << fmt_g(r.convergence_rate) << ',' << r.seed;
    return os.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows to write");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    out << csv_header() << '\n';
    for (const ResultRow& r : rows) out << csv_line(r) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_plot_data: no rows to write");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("emit_plot_data: cannot open '" + path + "'");
    out << "x,series,y\n";
    for (const ResultRow& r : rows)
        out << fmt_g(r.sweep_value) << ',' << r.equalizer << ',' << fmt_g(r.sinr_mean_db) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("emit_plot_data: write to '" + path + "' failed");
}

std::vector<ComplexityRow> complexity_table(const ComplexitySpec& spec) {
    std::vector<ComplexityRow> rows;
    auto push = [&](const char* sweep, std::uint64_t n, std::uint64_t k, std::size_t order,
                    std::size_t rank) {
        ComplexityRow row;
        row.sweep = sweep;
        row.antennas = n;
        row.frames = k;
        row.order = order;
        row.rank = rank;
        row.iters = spec.iters;
        row.dims = balanced_dims(n, order);
        row.products_mmse = count_mmse(n, k);
        row.products_lr_tmmse = count_lr_tmmse(row.dims, rank, spec.iters, k, spec.tail);
        row.ratio = row.products_lr_tmmse == 0
                        ? 0.0
                        : static_cast<double>(row.products_mmse) /
                              static_cast<double>(row.products_lr_tmmse);
        rows.push_back(std::move(row));
    };

    for (std::size_t order : spec.orders)
        for (std::size_t rank : spec.ranks) {
            for (std::uint64_t k : spec.frame_sweep) push("K", spec.fixed_antennas, k, order, rank);
            for (std::uint64_t n : spec.antenna_sweep) push("N", n, spec.fixed_frames, order, rank);
        }
    return rows;
}

void emit_complexity_csv(const std::vector<ComplexityRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_complexity_csv: no rows");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("emit_complexity_csv: cannot open '" + path + "'");
    out << "sweep,N,K,D,R,I,dims,products_mmse,products_lr_tmmse,ratio\n";
    for (const ComplexityRow& r : rows) {
        out << r.sweep << ',' << r.antennas << ',' << r.frames << ',' << r.order << ',' << r.rank
            << ',' << r.iters << ',';
        for (std::size_t i = 0; i < r.dims.size(); ++i) out << (i ? "x" : "") << r.dims[i];
        out << ',' << r.products_mmse << ',' << r.products_lr_tmmse << ',' << fmt_g(r.ratio)
            << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("emit_complexity_csv: write to '" + path + "' failed");
}

}  // namespace tmmse
