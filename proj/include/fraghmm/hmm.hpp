#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fraghmm/matrix.hpp"

namespace fraghmm {

// Encoded observation series over the alphabet {0..alphabet_size-1}.
class Sequence {
public:
    Sequence(std::vector<int> symbols, int alphabet_size);

    int alphabet_size() const { return alphabet_size_; }
    std::size_t size() const { return symbols_.size(); }
    int operator[](std::size_t t) const { return symbols_[t]; }
    const std::vector<int>& symbols() const { return symbols_; }

private:
    std::vector<int> symbols_;
    int alphabet_size_;
};

// Discrete-emission hidden Markov model: N x N transition matrix, N x K
// emission matrix, and the stationary distribution of the transition matrix
// (computed at construction, used as the initial-state law everywhere).
class Hmm {
public:
    Hmm(StochasticMatrix transition, StochasticMatrix emission, std::string label = "");

    int num_states() const { return transition_.rows(); }
    int alphabet_size() const { return emission_.cols(); }
    const StochasticMatrix& transition() const { return transition_; }
    const StochasticMatrix& emission() const { return emission_; }
    const ProbVector& stationary() const { return stationary_; }
    const std::string& label() const { return label_; }

private:
    StochasticMatrix transition_;
    StochasticMatrix emission_;
    ProbVector stationary_;
    std::string label_;
};

// M(m) = P * Diag(S(:,m)): the transition matrix with columns scaled by the
// emission probabilities of symbol m.
struct SymbolOperator {
    Matrix matrix;
    int symbol;
};

SymbolOperator symbol_operator(const Hmm& h, int symbol);

// Exact fragment probability pi^T M(y_1) M(y_2) ... M(y_r) 1, evaluated as a
// left-to-right row-vector product in O(r N^2). Raw products only; suitable
// for short fragments (r up to ~50 at these entry magnitudes).
double fragment_likelihood(const Hmm& h, std::span<const int> fragment);
double fragment_likelihood(const Hmm& h, const Sequence& fragment);

struct LogLikelihood {
    double value = 0.0;
    bool impossible = false;  // forward vector hit exact zero; value is -inf
};

// Scaled forward algorithm for long sequences: per-step normalization with
// accumulated log scaling factors. Initial distribution is the stationary pi.
LogLikelihood log_likelihood_full(const Hmm& h, const Sequence& y);

// Draws x_1 ~ pi, y_t ~ S[x_t, .], x_{t+1} ~ P[x_t, .] with a deterministic
// seeded generator; identical seeds give identical sequences on any platform.
Sequence simulate(const Hmm& h, std::size_t n, std::uint64_t seed);

// JSON model format: {"label": ..., "transition": [[...]], "emission": [[...]]}.
// The stationary distribution is always recomputed on load.
Hmm parse_hmm_json(const std::string& text);
std::string hmm_to_json(const Hmm& h);
Hmm load_hmm(const std::string& path);
void save_hmm(const Hmm& h, const std::string& path);

// Sequence file format: one base-10 symbol per line. alphabet_size 0 means
// infer as (max symbol + 1).
Sequence load_sequence(const std::string& path, int alphabet_size = 0);
void save_sequence(const Sequence& y, const std::string& path);

}  // namespace fraghmm
