#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tmmse/config.hpp"
#include "tmmse/harness.hpp"
#include "tmmse/metrics.hpp"
#include "tmmse/ref.hpp"
#include "tmmse/rng.hpp"
#include "tmmse/tensor.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr const char* kOutDirEnv = "TMMSE_OUT_DIR";

// Relative output paths land in $TMMSE_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    const char* dir = std::getenv(kOutDirEnv);
    if (!dir || *dir == '\0') return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(dir) / p).string();
}

int run_simulate(const std::string& config_path, const std::string& sweep_spec,
                 const std::string& out_override, const std::string& plot_path,
                 std::uint64_t seed, bool seed_set, std::size_t trials, bool verbose) {
    tmmse::Campaign campaign =
        config_path.empty() ? tmmse::desk_campaign() : tmmse::load_campaign(config_path);

    // command line wins over config file
    if (!sweep_spec.empty()) {
        const std::size_t eq = sweep_spec.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--sweep expects VAR=v1,v2,... (e.g. snr_db=0,10,20)");
        campaign.sweep = tmmse::parse_sweep_var(sweep_spec.substr(0, eq));
        campaign.values = tmmse::parse_value_list(sweep_spec.substr(eq + 1));
    }
    if (seed_set) campaign.master_seed = seed;
    if (trials > 0) campaign.trials = trials;
    if (!out_override.empty()) campaign.out_path = out_override;

    // run metadata: the tensor equalizer's initialization and loading settings
    std::cout << "sweep " << tmmse::to_string(campaign.sweep) << " over "
              << campaign.values.size() << " points, " << campaign.trials
              << " trials each, master seed " << campaign.master_seed << '\n'
              << "lr-tmmse: dims ";
    for (std::size_t i = 0; i < campaign.base.eq.dims.size(); ++i)
        std::cout << (i ? "x" : "") << campaign.base.eq.dims[i];
    std::cout << ", R " << campaign.base.eq.rank << ", init "
              << tmmse::to_string(campaign.base.eq.init) << ", relative loading "
              << campaign.base.eq.loading << ", epsilon " << campaign.base.eq.epsilon << '\n';

    const std::vector<tmmse::ResultRow> rows = tmmse::run_campaign(campaign);
    const std::string out = resolve_out(campaign.out_path);
    tmmse::emit_csv(rows, out);
    if (!plot_path.empty()) tmmse::emit_plot_data(rows, resolve_out(plot_path));

    if (verbose) {
        std::cout << tmmse::csv_header() << '\n';
        for (const auto& r : rows) std::cout << tmmse::csv_line(r) << '\n';
    }
    std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
    return 0;
}

int run_complexity(const std::string& out_path, std::uint64_t iters, const std::string& tail) {
    tmmse::ComplexitySpec spec;
    spec.iters = iters;
    if (tail == "printed") spec.tail = tmmse::TailTerm::printed;
    else if (tail == "quadratic") spec.tail = tmmse::TailTerm::quadratic;
    else throw std::invalid_argument("--tail-term must be 'printed' or 'quadratic'");

    const auto rows = tmmse::complexity_table(spec);
    const std::string out = resolve_out(out_path);
    tmmse::emit_complexity_csv(rows, out);
    std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
    return 0;
}

// Quick oracle smoke suite; the full acceptance suite lives in the test tree.
int run_selftest() {
    using namespace tmmse;
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << '\n';
        if (!ok) ++failures;
    };

    {  // reshape round trip and the flat index map
        CVec v(24);
        Rng rng(7);
        for (auto& x : v) x = rng.gauss_cx();
        const ComplexTensor t = reshape_vector_to_tensor(v, {2, 3, 4});
        check(vectorize_tensor(t) == v, "reshape/vectorize round trip");
        check(t.at({1, 0, 1}) == v[1 + 0 * 2 + 1 * 6], "flat index map");
    }
    {  // unfolding against the brute-force enumeration
        Rng rng(11);
        CVec data(3 * 4 * 5);
        for (auto& x : data) x = rng.gauss_cx();
        const ComplexTensor t = reshape_vector_to_tensor(data, {3, 4, 5});
        bool ok = true;
        for (std::size_t d = 0; d < 3; ++d) {
            const CMat a = unfold(t, d);
            const CMat b = ref::unfold(data, t.dims, d);
            ok = ok && frobenius_distance(a, b) == 0.0;
        }
        check(ok, "mode unfolding vs enumeration oracle");
    }
    {  // cp filter consistency
        Rng rng(13);
        CpFilter f({3, 2, 2}, 3);
        for (auto& row : f.factors)
            for (auto& w : row)
                for (auto& x : w) x = rng.gauss_cx();
        const CVec vec = vectorize_cp(f);
        bool ok = true;
        for (std::size_t i0 = 0; i0 < 3 && ok; ++i0)
            for (std::size_t i1 = 0; i1 < 2 && ok; ++i1)
                for (std::size_t i2 = 0; i2 < 2 && ok; ++i2) {
                    const std::size_t flat = i0 + i1 * 3 + i2 * 6;
                    const std::vector<std::size_t> idx{i0, i1, i2};
                    ok = std::abs(cp_element(f, idx) - vec[flat]) < 1e-12;
                }
        check(ok, "cp_element vs vectorize_cp");
    }
    {  // product-count formulas at the reference operating point
        check(count_mmse(512, 600) == 292073472ull, "count_mmse(512, 600)");
        const std::vector<std::size_t> dims{8, 8, 8};
        check(count_lr_tmmse(dims, 3, 2, 600) == 11321520ull, "count_lr_tmmse((8,8,8),3,2,600)");
    }
    {  // one tiny end-to-end trial
        TrialConfig cfg = desk_campaign().base;
        cfg.scenario.antennas = 16;
        cfg.scenario.frame_len = 120;
        cfg.eq.dims = {4, 4};
        cfg.eq.rank = 2;
        const TrialOutcome t = run_trial(cfg, 99);
        bool ok = t.equalizers.size() == 3;
        for (const auto& eo : t.equalizers) ok = ok && eo.sinr_lin >= 1.0 - 1e-9;
        check(ok, "end-to-end trial with SINR >= 0 dB");
    }

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch simulator for low-rank tensor MMSE equalization of "
                 "multi-user frequency-selective MIMO uplinks"};
    app.require_subcommand(1);
    app.footer(std::string("Relative output paths are placed under $") + kOutDirEnv +
               " when that variable is set.");

    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread cap (0 = runtime default)");

    std::string config_path, sweep_spec, out_override, plot_path;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    bool verbose = false;

    CLI::App* sim = app.add_subcommand("simulate", "Run a Monte Carlo equalization campaign");
    sim->add_option("--config", config_path, "INI campaign file (defaults to the desk-scale campaign)")
        ->check(CLI::ExistingFile);
    CLI::Option* seed_opt = sim->add_option("--seed", seed, "Master seed");
    sim->add_option("--trials", trials, "Trials per sweep point");
    sim->add_option("--out", out_override, "Output CSV path");
    sim->add_option("--sweep", sweep_spec, "Sweep override, VAR=v1,v2,... (VAR in snr_db,K,R,D,N)");
    sim->add_option("--plot", plot_path, "Also write (x,series,y) plot data to this path");
    sim->add_flag("--verbose", verbose, "Echo result rows to stdout");

    std::string cx_out = "complexity.csv";
    std::uint64_t cx_iters = 2;
    std::string tail = "printed";
    CLI::App* cx = app.add_subcommand("complexity", "Emit formula product-count tables");
    cx->add_option("--out", cx_out, "Output CSV path");
    cx->add_option("--iters", cx_iters, "Outer iteration count I");
    cx->add_option("--tail-term", tail, "Per-block trailing term: printed | quadratic");

    app.add_subcommand("selftest", "Run the built-in oracle smoke suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (app.got_subcommand("simulate"))
            return run_simulate(config_path, sweep_spec, out_override, plot_path, seed,
                                seed_opt->count() > 0, trials, verbose);
        if (app.got_subcommand("complexity")) return run_complexity(cx_out, cx_iters, tail);
        return run_selftest();
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
