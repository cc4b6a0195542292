// Times the OpenMP kernels against their serial reference twins and checks
// that both paths agree. Usage: tmmse_bench [--smoke]

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tmmse/kernels.hpp"
#include "tmmse/ref.hpp"
#include "tmmse/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace tmmse;

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
    fn();  // warm up
    const auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const CMat& a, const CMat& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.flat().size(); ++i)
        m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
    return m;
}

void bench_contract(const std::vector<std::size_t>& dims, std::size_t frames, int reps) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    Rng rng(42);
    CVec data(n * frames);
    for (auto& x : data) x = rng.gauss_cx();
    std::vector<CVec> others;
    for (std::size_t j = 1; j < dims.size(); ++j) {
        CVec w(dims[j]);
        for (auto& x : w) x = rng.gauss_cx();
        others.push_back(std::move(w));
    }

    CMat par, ser;
    const double t_par = time_ms(reps, [&] {
        par = kernels::mode_contract_frames(data, dims, frames, 0, others);
    });
    const double t_ser = time_ms(reps, [&] {
        ser = ref::mode_contract_frames(data, dims, frames, 0, others);
    });

    std::string shape;
    for (std::size_t i = 0; i < dims.size(); ++i)
        shape += (i ? "x" : "") + std::to_string(dims[i]);
    std::printf("%-24s %-14s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   max|diff| %.2e\n",
                "mode_contract", (shape + ",K=" + std::to_string(frames)).c_str(), t_ser, t_par,
                t_ser / t_par, max_abs_diff(par, ser));
}

void bench_gram(std::size_t m, std::size_t frames, int reps) {
    Rng rng(43);
    CMat u(m, frames);
    for (auto& x : u.flat()) x = rng.gauss_cx();

    CMat par, ser;
    const double t_par = time_ms(reps, [&] { par = kernels::sample_covariance(u); });
    const double t_ser = time_ms(reps, [&] { ser = ref::sample_covariance(u); });
    std::printf("%-24s %-14s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   max|diff| %.2e\n",
                "sample_covariance",
                (std::to_string(m) + "x" + std::to_string(frames)).c_str(), t_ser, t_par,
                t_ser / t_par, max_abs_diff(par, ser));
}

void bench_apply(std::size_t m, std::size_t frames, int reps) {
    Rng rng(44);
    CMat x(m, frames);
    for (auto& v : x.flat()) v = rng.gauss_cx();
    CVec w(m);
    for (auto& v : w) v = rng.gauss_cx();

    CVec par, ser;
    const double t_par = time_ms(reps, [&] { par = kernels::apply_filter(w, x); });
    const double t_ser = time_ms(reps, [&] { ser = ref::apply_filter(w, x); });
    double diff = 0.0;
    for (std::size_t k = 0; k < par.size(); ++k) diff = std::max(diff, std::abs(par[k] - ser[k]));
    std::printf("%-24s %-14s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   max|diff| %.2e\n",
                "apply_filter", (std::to_string(m) + "x" + std::to_string(frames)).c_str(), t_ser,
                t_par, t_ser / t_par, diff);
}

}  // namespace

int main(int argc, char** argv) {
    const bool smoke = argc > 1 && std::string(argv[1]) == "--smoke";
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp disabled (serial build)\n");
#endif

    if (smoke) {
        bench_contract({4, 4, 4}, 128, 3);
        bench_gram(32, 128, 3);
        bench_apply(64, 128, 3);
        return 0;
    }

    bench_contract({4, 4, 4}, 600, 10);
    bench_contract({8, 8, 8}, 600, 10);
    bench_contract({4, 4, 4, 4}, 600, 10);
    bench_gram(64, 600, 10);
    bench_gram(256, 600, 5);
    bench_gram(512, 600, 3);
    bench_apply(512, 600, 10);
    return 0;
}
