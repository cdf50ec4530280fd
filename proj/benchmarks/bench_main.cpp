// Timing comparison of the OpenMP batch kernel against the serial reference,
// plus a single-thread vs multi-thread Baum-Welch restart run.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fraghmm/batch.hpp"
#include "fraghmm/baum_welch.hpp"
#include "fraghmm/hmm.hpp"
#include "fraghmm/rng.hpp"

namespace {

using fraghmm::Hmm;
using fraghmm::Matrix;
using fraghmm::Rng;
using fraghmm::Sequence;
using fraghmm::StochasticMatrix;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Hmm random_model(int n_states, int alphabet, std::uint64_t seed) {
    Rng rng(seed);
    auto rows = [&rng](int r, int c) {
        Matrix m(r, c);
        for (int i = 0; i < r; ++i) {
            double s = 0.0;
            for (int j = 0; j < c; ++j) {
                m(i, j) = 0.05 + rng.next_double();
                s += m(i, j);
            }
            for (int j = 0; j < c; ++j) m(i, j) /= s;
        }
        return m;
    };
    return Hmm(StochasticMatrix(rows(n_states, n_states)), StochasticMatrix(rows(n_states, alphabet)));
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel columns repeat the serial path\n\n");
#endif

    const Hmm h = random_model(4, 3, 7);
    const Sequence y = fraghmm::simulate(h, 200000, 11);

    std::printf("batch fragment likelihoods (4 states, alphabet 3, n = %zu)\n", y.size());
    std::printf("%10s  %6s  %12s  %12s  %8s\n", "k", "r", "serial_s", "parallel_s", "speedup");
    Rng rng(3);
    for (const auto& [k, r] : std::vector<std::pair<int, int>>{
             {20000, 3}, {20000, 10}, {200000, 3}, {200000, 10}, {1000000, 5}}) {
        std::vector<std::size_t> starts(static_cast<std::size_t>(k));
        for (auto& s : starts) s = rng.uniform_index(y.size() - static_cast<std::size_t>(r) + 1);

        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> a = fraghmm::fragment_likelihoods_serial(h, y, starts, r);
        const double serial = seconds_since(t0);

        const auto t1 = std::chrono::steady_clock::now();
        const std::vector<double> b = fraghmm::fragment_likelihoods(h, y, starts, r);
        const double parallel = seconds_since(t1);

        bool identical = a == b;
        std::printf("%10d  %6d  %12.4f  %12.4f  %7.2fx%s\n", k, r, serial, parallel,
                    serial / parallel, identical ? "" : "  MISMATCH");
    }

    std::printf("\nBaum-Welch, 8 restarts (3 states, n = 4000, 60 iterations)\n");
    const Sequence y_fit = fraghmm::simulate(h, 4000, 13);
    fraghmm::FitConfig cfg;
    cfg.n_states = 3;
    cfg.max_iters = 60;
    cfg.tol = 1e-12;  // run all iterations so both timings do equal work
    cfg.n_restarts = 8;
    cfg.seed = 5;

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    const auto t0 = std::chrono::steady_clock::now();
    const fraghmm::FitResult serial_fit = fraghmm::fit(y_fit, cfg);
    const double serial = seconds_since(t0);
#ifdef _OPENMP
    omp_set_num_threads(max_threads);
#endif
    const auto t1 = std::chrono::steady_clock::now();
    const fraghmm::FitResult parallel_fit = fraghmm::fit(y_fit, cfg);
    const double parallel = seconds_since(t1);

    const bool identical =
        serial_fit.log_likelihood_trace == parallel_fit.log_likelihood_trace &&
        serial_fit.restart_index == parallel_fit.restart_index;
    std::printf("%10s  %12s  %12s  %8s\n", "", "1-thread_s", "n-thread_s", "speedup");
    std::printf("%10s  %12.4f  %12.4f  %7.2fx%s\n", "fit", serial, parallel, serial / parallel,
                identical ? "" : "  MISMATCH");
    return 0;
}
