// Baum-Welch (EM) fitting with scaled forward-backward recursions.
//
// The start distribution is a free parameter during the iterations, but the
// exported model always reports the stationary distribution of the fitted
// transition matrix, matching how the rest of the library treats models.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraghmm/hmm.hpp"

namespace fraghmm {

struct FitConfig {
    int n_states = 2;
    int max_iters = 1000;
    double tol = 1e-6;        // relative log-likelihood improvement threshold
    std::uint64_t seed = 0;
    int n_restarts = 1;
    std::string label;
};

struct FitResult {
    Hmm model;
    std::vector<double> log_likelihood_trace;  // one entry per EM iteration
    bool converged = false;
    int iterations_used = 0;
    int restart_index = 0;                     // which restart won
    std::vector<int> unseen_symbols;           // alphabet symbols absent from y
};

// Log-likelihood of the full sequence under the model, via the scaled
// forward recursion with the model's stationary start distribution.
double sequence_log_likelihood(const Hmm& h, const Sequence& y);

FitResult fit(const Sequence& y, const FitConfig& config);

// Trace serialization used by the CLI: "iteration,log_likelihood" CSV.
std::string loglik_trace_csv(const std::vector<double>& trace);

}  // namespace fraghmm
