#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "fraghmm/baum_welch.hpp"

using namespace fraghmm;

namespace {

FitConfig make_config(int n_states, std::uint64_t seed, int max_iters = 200,
                      int n_restarts = 1) {
    FitConfig c;
    c.n_states = n_states;
    c.max_iters = max_iters;
    c.tol = 1e-8;
    c.seed = seed;
    c.n_restarts = n_restarts;
    return c;
}

}  // namespace

TEST_CASE("sequence_log_likelihood agrees with the model's own forward pass") {
    const Sequence y = simulate(example_hmm2(), 400, 5);
    const double ll = sequence_log_likelihood(example_hmm2(), y);
    const LogLikelihood full = log_likelihood_full(example_hmm2(), y);
    CHECK(!full.impossible);
    CHECK(ll == doctest::Approx(full.value).epsilon(1e-12));
    CHECK(ll < 0.0);
}

TEST_CASE("EM traces are monotonically nondecreasing") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const Sequence y = simulate(example_hmm2(), 600, seed + 50);
        const FitResult res = fit(y, make_config(3, seed, 120));
        REQUIRE(res.log_likelihood_trace.size() >= 2);
        for (std::size_t i = 1; i < res.log_likelihood_trace.size(); ++i) {
            CHECK(res.log_likelihood_trace[i] >= res.log_likelihood_trace[i - 1] - 1e-8);
        }
    }
}

TEST_CASE("the trace ends at the exported parameters' log-likelihood") {
    const Sequence y = simulate(example_hmm1(), 500, 9);
    const FitResult res = fit(y, make_config(2, 4, 150));
    // trace entries are computed with the EM start distribution, while the
    // exported model restarts from the stationary vector; evaluating the EM
    // trace endpoint through the exported model recovers it only approximately,
    // so compare the final E-step value stored in the trace against a fresh
    // evaluation of the exported model: they agree to the extent the start
    // vectors do.
    const double exported_ll = sequence_log_likelihood(res.model, y);
    CHECK(std::isfinite(exported_ll));
    CHECK(std::abs(exported_ll - res.log_likelihood_trace.back()) /
              std::max(1.0, std::abs(exported_ll)) <
          1e-2);
}

TEST_CASE("fitting improves on the log-likelihood of the initial guess") {
    const Sequence y = simulate(example_hmm2(), 800, 13);
    const FitResult res = fit(y, make_config(3, 6, 200));
    CHECK(res.log_likelihood_trace.back() > res.log_likelihood_trace.front());
    CHECK(res.log_likelihood_trace.back() - res.log_likelihood_trace.front() > 1.0);
}

TEST_CASE("repeat fits are bit-identical") {
    const Sequence y = simulate(example_hmm2(), 500, 21);
    const FitConfig cfg = make_config(3, 17, 100, 4);
    const FitResult a = fit(y, cfg);
    const FitResult b = fit(y, cfg);
    CHECK(a.log_likelihood_trace == b.log_likelihood_trace);
    CHECK(a.model.transition().inner().data == b.model.transition().inner().data);
    CHECK(a.model.emission().inner().data == b.model.emission().inner().data);
    CHECK(a.restart_index == b.restart_index);
    CHECK(a.iterations_used == b.iterations_used);
    CHECK(a.converged == b.converged);
}

TEST_CASE("fitted matrices are stochastic and the start vector is stationary") {
    const Sequence y = simulate(example_hmm1(), 700, 33);
    const FitResult res = fit(y, make_config(2, 8, 150));
    const Hmm& m = res.model;
    for (int i = 0; i < m.num_states(); ++i) {
        double prow = 0.0, srow = 0.0;
        for (int j = 0; j < m.num_states(); ++j) prow += m.transition()(i, j);
        for (int s = 0; s < m.alphabet_size(); ++s) srow += m.emission()(i, s);
        CHECK(prow == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(srow == doctest::Approx(1.0).epsilon(1e-12));
    }
    // stationarity: pi^T P == pi^T
    for (int j = 0; j < m.num_states(); ++j) {
        double acc = 0.0;
        for (int i = 0; i < m.num_states(); ++i)
            acc += m.stationary()[static_cast<std::size_t>(i)] * m.transition()(i, j);
        CHECK(acc == doctest::Approx(m.stationary()[static_cast<std::size_t>(j)]).epsilon(1e-9));
    }
}

TEST_CASE("convergence flag reflects the tolerance test") {
    const Sequence y = simulate(example_hmm1(), 400, 2);
    FitConfig tight = make_config(2, 3, 500);
    tight.tol = 1e-10;
    const FitResult converged = fit(y, tight);
    CHECK(converged.converged);
    CHECK(converged.iterations_used < 500);

    FitConfig starved = make_config(2, 3, 3);
    starved.tol = 1e-14;
    const FitResult cutoff = fit(y, starved);
    CHECK(!cutoff.converged);
    CHECK(cutoff.iterations_used == 3);
}

TEST_CASE("iterations_used counts the trace entries past the initial point") {
    const Sequence y = simulate(example_hmm2(), 300, 44);
    const FitResult res = fit(y, make_config(2, 12, 80));
    CHECK(res.log_likelihood_trace.size() ==
          static_cast<std::size_t>(res.iterations_used) + 1);
}

TEST_CASE("multiple restarts select the best final log-likelihood") {
    const Sequence y = simulate(example_hmm2(), 600, 55);
    FitConfig multi = make_config(3, 29, 60, 6);
    const FitResult best = fit(y, multi);
    // rerun each restart on its own and confirm none beats the winner
    double best_single = -1e300;
    for (int i = 0; i < 6; ++i) {
        FitConfig single = multi;
        single.n_restarts = 1;
        single.seed = multi.seed + static_cast<std::uint64_t>(i);
        const FitResult r = fit(y, single);
        best_single = std::max(best_single, r.log_likelihood_trace.back());
        if (i == best.restart_index) {
            CHECK(r.log_likelihood_trace == best.log_likelihood_trace);
            CHECK(r.model.transition().inner().data == best.model.transition().inner().data);
        }
    }
    CHECK(best.log_likelihood_trace.back() == doctest::Approx(best_single).epsilon(1e-12));
}

TEST_CASE("fit on data from a known model approaches that model's likelihood") {
    const Sequence y = simulate(example_hmm1(), 3000, 61);
    FitConfig cfg = make_config(2, 5, 400, 4);
    cfg.tol = 1e-9;
    const FitResult res = fit(y, cfg);
    const double true_ll = sequence_log_likelihood(example_hmm1(), y);
    const double fitted_ll = sequence_log_likelihood(res.model, y);
    // EM should do at least as well as the generator up to a small slack
    CHECK(fitted_ll > true_ll - 5.0);
}

TEST_CASE("unseen symbols are reported") {
    // alphabet declared as 4 but the generator only uses 3 symbols
    const Sequence y3 = simulate(example_hmm1(), 300, 14);
    std::vector<int> symbols(y3.symbols().begin(), y3.symbols().end());
    const Sequence y(symbols, 4);
    FitConfig cfg = make_config(2, 7, 50);
    const FitResult res = fit(y, cfg);
    REQUIRE(res.unseen_symbols.size() == 1);
    CHECK(res.unseen_symbols[0] == 3);
    CHECK(res.model.alphabet_size() == 4);
}

TEST_CASE("labels propagate to the fitted model") {
    const Sequence y = simulate(example_hmm1(), 200, 18);
    FitConfig cfg = make_config(2, 9, 40);
    cfg.label = "fit-demo";
    const FitResult res = fit(y, cfg);
    CHECK(res.model.label() == "fit-demo");
}

TEST_CASE("fit validates its configuration") {
    const Sequence y = simulate(example_hmm1(), 100, 1);
    FitConfig bad = make_config(0, 1);
    CHECK_THROWS_AS(fit(y, bad), std::invalid_argument);
    bad = make_config(2, 1);
    bad.max_iters = 0;
    CHECK_THROWS_AS(fit(y, bad), std::invalid_argument);
    bad = make_config(2, 1);
    bad.tol = 0.0;
    CHECK_THROWS_AS(fit(y, bad), std::invalid_argument);
    bad = make_config(2, 1);
    bad.n_restarts = 0;
    CHECK_THROWS_AS(fit(y, bad), std::invalid_argument);
    const Sequence tiny({0}, 2);
    CHECK_THROWS_AS(fit(tiny, make_config(2, 1)), std::invalid_argument);
}

TEST_CASE("trace CSV serialization") {
    const std::string csv = loglik_trace_csv({-10.5, -9.25, -9.0});
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "iteration,log_likelihood");
    int rows = 0;
    double prev = -1e300;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stoi(line.substr(0, comma)) == rows);
        const double v = std::stod(line.substr(comma + 1));
        CHECK(v >= prev);
        prev = v;
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("trace CSV round-trips full precision") {
    const Sequence y = simulate(example_hmm2(), 250, 71);
    const FitResult res = fit(y, make_config(2, 20, 60));
    const std::string csv = loglik_trace_csv(res.log_likelihood_trace);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::size_t i = 0;
    while (std::getline(in, line)) {
        const double v = std::stod(line.substr(line.find(',') + 1));
        REQUIRE(i < res.log_likelihood_trace.size());
        CHECK(v == res.log_likelihood_trace[i]);
        ++i;
    }
    CHECK(i == res.log_likelihood_trace.size());
}
