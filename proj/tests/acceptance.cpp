// Acceptance suite: one callable check per criterion, one pass/fail line
// each. Run with no arguments for all criteria or pass criterion numbers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tmmse/config.hpp"
#include "tmmse/harness.hpp"
#include "tmmse/kernels.hpp"
#include "tmmse/metrics.hpp"
#include "tmmse/ref.hpp"
#include "tmmse/rng.hpp"
#include "tmmse/tensor.hpp"

using namespace tmmse;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

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

double max_abs_diff(const CMat& a, const CMat& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.flat().size(); ++i)
        m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
    return m;
}

const ResultRow& find_row(const std::vector<ResultRow>& rows, double value,
                          const std::string& id) {
    for (const ResultRow& r : rows)
        if (r.sweep_value == value && r.equalizer == id) return r;
    throw std::runtime_error("row not found");
}

// 1. unfold and mode_contract vs brute-force index-map enumeration
Outcome criterion1() {
    Outcome out;
    Rng rng(101);
    double worst = 0.0;

    const std::vector<std::vector<std::size_t>> shapes{{2}, {4, 3}, {2, 3, 4}, {3, 4, 5}};
    for (const auto& dims : shapes) {
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        const CVec data = random_cvec(n, rng);
        const ComplexTensor t = reshape_vector_to_tensor(data, dims);
        for (std::size_t d = 0; d < dims.size(); ++d)
            worst = std::max(worst, max_abs_diff(unfold(t, d), ref::unfold(data, dims, d)));
    }

    const std::vector<std::size_t> spatial{3, 4, 5};
    const std::size_t frames = 6;
    const CVec data = random_cvec(60 * frames, rng);
    for (std::size_t d = 0; d < 3; ++d) {
        std::vector<CVec> others;
        for (std::size_t j = 0; j < 3; ++j)
            if (j != d) others.push_back(random_cvec(spatial[j], rng));
        const CMat fast = kernels::mode_contract_frames(data, spatial, frames, d, others);
        const CMat slow = ref::mode_contract_frames(data, spatial, frames, d, others);
        worst = std::max(worst, max_abs_diff(fast, slow));
    }

    out.pass = worst <= 1e-12;
    std::ostringstream os;
    os << "max |difference| " << worst;
    out.detail = os.str();
    return out;
}

// 2. vectorize_cp vs cp_element on 100 random filters
Outcome criterion2() {
    Outcome out;
    Rng rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t order = 1 + static_cast<std::size_t>(rng.uniform(0.0, 4.0));
        const std::size_t rank = 1 + static_cast<std::size_t>(rng.uniform(0.0, 4.0));
        std::vector<std::size_t> dims(order);
        for (auto& d : dims) d = 1 + static_cast<std::size_t>(rng.uniform(0.0, 4.0));

        CpFilter f(dims, rank);
        for (auto& row : f.factors)
            for (auto& w : row)
                for (auto& x : w) x = rng.gauss_cx();

        const CVec vec = vectorize_cp(f);
        std::vector<std::size_t> idx(order, 0);
        for (std::size_t flat = 0; flat < vec.size(); ++flat) {
            const cx e = cp_element(f, idx);
            worst = std::max(worst,
                             std::abs(e - vec[flat]) / std::max(1.0, std::abs(e)));
            for (std::size_t j = 0; j < order; ++j) {
                if (++idx[j] < dims[j]) break;
                idx[j] = 0;
            }
        }
    }
    out.pass = worst <= 1e-12;
    std::ostringstream os;
    os << "max relative difference " << worst << " over 100 filters";
    out.detail = os.str();
    return out;
}

// 3. D=1, R=1, one sweep, zero loading reduces to mmse_sample
Outcome criterion3() {
    Outcome out;
    Rng rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const CMat x = random_cmat(16, 64, rng);
        const CVec s = random_cvec(64, rng);

        LrTmmseConfig cfg;
        cfg.dims = {16};
        cfg.rank = 1;
        cfg.max_iters = 1;
        cfg.loading = 0.0;
        cfg.init = CpInit::canonical;

        const CVec w_tensor = lr_tmmse_train(x, s, cfg).w_vec;
        const CVec w_direct = mmse_sample(x, s);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            num += std::norm(w_tensor[i] - w_direct[i]);
            den += std::norm(w_direct[i]);
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    out.pass = worst <= 1e-9;
    std::ostringstream os;
    os << "max relative weight difference " << worst << " over 50 frames";
    out.detail = os.str();
    return out;
}

// 4. block-descent monotonicity of the sample-MSE trace
Outcome criterion4() {
    Outcome out;
    Rng rng(104);
    double worst_rise = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const CMat x = random_cmat(16, 200, rng);
        const CVec s = random_cvec(200, rng);

        LrTmmseConfig cfg;
        cfg.dims = {4, 4};
        cfg.rank = 2;
        cfg.loading = 0.0;
        cfg.init = CpInit::canonical_perturbed;
        cfg.init_seed = 4000 + static_cast<std::uint64_t>(trial);
        cfg.max_iters = 8;

        const EqualizerReport report = lr_tmmse_train(x, s, cfg);
        for (std::size_t i = 1; i < report.mse_trace.size(); ++i)
            worst_rise = std::max(worst_rise,
                                  report.mse_trace[i] - report.mse_trace[i - 1]);
    }
    out.pass = worst_rise <= 1e-10;
    std::ostringstream os;
    os << "largest per-step MSE rise " << worst_rise << " over 100 trials";
    out.detail = os.str();
    return out;
}

// 5. complexity formulas: exact reference values and dominance over the grid
Outcome criterion5() {
    Outcome out;
    const std::uint64_t mmse_ref = count_mmse(512, 600);
    const std::vector<std::size_t> ref_dims{8, 8, 8};
    const std::uint64_t tensor_ref = count_lr_tmmse(ref_dims, 3, 2, 600);

    bool exact = (mmse_ref == 292073472ull) && (tensor_ref == 11321520ull);

    bool dominated = true;
    for (std::size_t order = 2; order <= 5 && dominated; ++order) {
        const std::vector<std::size_t> dims = balanced_dims(512, order);
        for (std::size_t rank = 1; rank <= 4 && dominated; ++rank)
            for (std::uint64_t frames = 100; frames <= 1000; frames += 100)
                if (count_lr_tmmse(dims, rank, 2, frames) >= count_mmse(512, frames)) {
                    dominated = false;
                    break;
                }
    }

    out.pass = exact && dominated;
    std::ostringstream os;
    os << "count_mmse(512,600) = " << mmse_ref << ", count_lr_tmmse((8,8,8),3,2,600) = "
       << tensor_ref << ", tensor < benchmark on the full grid: " << (dominated ? "yes" : "NO");
    out.detail = os.str();
    return out;
}

TrialConfig desk_point() {
    TrialConfig cfg = desk_campaign().base;
    cfg.scenario.snr_db = 20.0;
    return cfg;
}

// 6. rank ordering and saturation at desk scale
Outcome criterion6() {
    Outcome out;
    Campaign c = desk_campaign();
    c.sweep = SweepVar::rank;
    c.values = {1.0, 3.0, 4.0};
    c.trials = 100;
    c.base = desk_point();
    c.base.equalizers = {kEqTensor};

    const auto rows = run_campaign(c);
    const double db_r1 = find_row(rows, 1.0, kEqTensor).sinr_mean_db;
    const double db_r3 = find_row(rows, 3.0, kEqTensor).sinr_mean_db;
    const double db_r4 = find_row(rows, 4.0, kEqTensor).sinr_mean_db;

    const double gain = db_r3 - db_r1;
    const double saturation = std::abs(db_r3 - db_r4);
    out.pass = gain >= 2.0 && saturation <= 1.5;
    std::ostringstream os;
    os << "SINR(R=3) - SINR(R=1) = " << gain << " dB (need >= 2), |SINR(R=3) - SINR(R=4)| = "
       << saturation << " dB (need <= 1.5)";
    out.detail = os.str();
    return out;
}

// 7. theoretical MMSE upper-bounds the tensor equalizer across SNR
Outcome criterion7() {
    Outcome out;
    Campaign c = desk_campaign();
    c.values = {0.0, 10.0, 20.0, 30.0};
    c.trials = 100;
    c.base.equalizers = {kEqTheoretical, kEqTensor};

    const auto rows = run_campaign(c);
    double worst_violation = -1e300;
    for (double snr : c.values) {
        const double theo = find_row(rows, snr, kEqTheoretical).sinr_mean_db;
        const double tensor = find_row(rows, snr, kEqTensor).sinr_mean_db;
        worst_violation = std::max(worst_violation, tensor - theo);
    }
    out.pass = worst_violation <= 0.1;
    std::ostringstream os;
    os << "max (tensor - theoretical) gap " << worst_violation << " dB (allowed 0.1)";
    out.detail = os.str();
    return out;
}

// 8. sample-vs-theoretical SINR gap shrinks as K grows
Outcome criterion8() {
    Outcome out;
    Campaign c = desk_campaign();
    c.sweep = SweepVar::frame_len;
    c.values = {200.0, 600.0, 2000.0};
    c.trials = 100;
    c.base = desk_point();
    c.base.equalizers = {kEqTheoretical, kEqSample};

    const auto rows = run_campaign(c);
    std::vector<double> gaps;
    for (double k_len : c.values) {
        const double theo = find_row(rows, k_len, kEqTheoretical).sinr_mean_db;
        const double sample = find_row(rows, k_len, kEqSample).sinr_mean_db;
        gaps.push_back(theo - sample);
    }
    out.pass = gaps[0] > gaps[1] && gaps[1] > gaps[2];
    std::ostringstream os;
    os << "gaps " << gaps[0] << " -> " << gaps[1] << " -> " << gaps[2]
       << " dB over K = 200, 600, 2000";
    out.detail = os.str();
    return out;
}

// 9. shipped desk campaign is byte-identical across runs
Outcome criterion9() {
    Outcome out;
    Campaign c;
#ifdef TMMSE_CONFIG_DIR
    c = load_campaign(std::string(TMMSE_CONFIG_DIR) + "/desk.ini");
#else
    c = desk_campaign();
#endif

    const auto rows1 = run_campaign(c);
    const auto rows2 = run_campaign(c);

    const auto tmp = std::filesystem::temp_directory_path();
    const std::string p1 = (tmp / "tmmse_accept_run1.csv").string();
    const std::string p2 = (tmp / "tmmse_accept_run2.csv").string();
    emit_csv(rows1, p1);
    emit_csv(rows2, p2);

    const auto read = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const std::string b1 = read(p1);
    const std::string b2 = read(p2);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);

    out.pass = !b1.empty() && b1 == b2;
    std::ostringstream os;
    os << b1.size() << " bytes, " << (out.pass ? "identical" : "DIFFERENT");
    out.detail = os.str();
    return out;
}

// 10. convergence within three sweeps for at least 90% of desk-scale trials
Outcome criterion10() {
    Outcome out;
    const TrialConfig cfg = [&] {
        TrialConfig c = desk_point();
        c.equalizers = {kEqTensor};
        return c;
    }();

    const auto outcomes = run_point(cfg, 100, /*master_seed=*/1, /*sweep_index=*/0);
    std::size_t quick = 0;
    for (const TrialOutcome& t : outcomes)
        if (t.equalizers[0].converged && t.equalizers[0].iterations <= 3) ++quick;

    out.pass = quick >= 90;
    std::ostringstream os;
    os << quick << "/100 trials converged within 3 sweeps (need >= 90)";
    out.detail = os.str();
    return out;
}

struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "unfold/mode_contract vs brute-force enumeration", criterion1},
        {2, "vectorize_cp vs cp_element on random filters", criterion2},
        {3, "D=1, R=1 reduction to sample MMSE", criterion3},
        {4, "block-descent MSE monotonicity", criterion4},
        {5, "product-count formulas and dominance grid", criterion5},
        {6, "rank ordering and saturation at desk scale", criterion6},
        {7, "theoretical MMSE as an SINR upper bound", criterion7},
        {8, "sample-vs-theoretical gap shrinks with K", criterion8},
        {9, "byte-identical desk campaign", criterion9},
        {10, "convergence within three sweeps", criterion10},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    bool all_pass = true;
    for (const Criterion& c : criteria()) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.number) == selected.end())
            continue;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %2d [%s] %s — %s\n", c.number, out.pass ? "PASS" : "FAIL",
                    c.title, out.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
