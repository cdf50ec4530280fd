// Independent reference implementations used only to cross-check the library.
// Everything here is deliberately brute-force: likelihoods by summation over
// all hidden-state paths, expectations by enumeration of all fragments, and
// spectral quantities by long power iterations on deflated operators. None of
// it shares code with the library paths under test.
#pragma once

#include <vector>

#include "fraghmm/hmm.hpp"

namespace oracle {

// P(fragment) as an explicit sum over all N^r hidden-state paths.
double path_sum_likelihood(const fraghmm::Hmm& h, const std::vector<int>& fragment);

// Every length-r word over {0..alphabet-1}, in odometer order.
std::vector<std::vector<int>> all_words(int alphabet, int r);

// E[l_j] under fragments drawn from h0: sum_s l_0(s) l_j(s) over all words.
double enum_mu(const fraghmm::Hmm& h0, const fraghmm::Hmm& hj, int r);

// E[(l_1 - l_2)^2] under fragments drawn from h0.
double enum_second_moment(const fraghmm::Hmm& h0, const fraghmm::Hmm& h1, const fraghmm::Hmm& h2,
                          int r);

// Population variance of l_1 - l_2 under fragments drawn from h0.
double enum_variance(const fraghmm::Hmm& h0, const fraghmm::Hmm& h1, const fraghmm::Hmm& h2, int r);

// Stationary vector by repeated multiplication from the uniform start.
std::vector<double> stationary_by_power(const fraghmm::StochasticMatrix& p, int iters = 20000);

// |lambda_2| / lambda_1 of a nonnegative matrix with a simple dominant root,
// estimated by power iteration plus rank-one deflation. Accurate to a few
// percent, which is enough to screen fixtures by convergence speed.
double spectral_gap_estimate(const fraghmm::Matrix& w);

}  // namespace oracle
