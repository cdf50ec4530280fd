#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fraghmm/hmm.hpp"

namespace fraghmm {

// Kronecker pair operator W = sum_m M0(m) (x) Mj(m) with left vector
// pi0 (x) pij. Its r-th power yields the expected fragment likelihood:
// mu_j(r) = (pi0 (x) pij) W^r 1.
struct PairOperator {
    Matrix w;
    ProbVector left;
    int n0;
    int nj;
};

PairOperator pair_operator(const Hmm& h0, const Hmm& hj);

// The factored route (P0 (x) Pj) * Diag(vec(Sj S0^T)) for the same operator.
// With the row index convention i*nj + k, the matching vec is the column-major
// vec of Sj S0^T, i.e. the row-major vec of S0 Sj^T. Exposed so tests can
// check both constructions against each other.
Matrix pair_operator_product_form(const Hmm& h0, const Hmm& hj);

// Triple analogue used for second moments: w3 = sum_m M0(m) (x) Ma(m) (x) Mb(m).
struct TripleOperator {
    Matrix w3;
    ProbVector left;
};

TripleOperator triple_operator(const Hmm& h0, const Hmm& ha, const Hmm& hb);

// mu_j(r): probability that independent length-r sequences from h0 and hj
// coincide. Evaluated by r left vector-operator applications, never by
// forming W^r.
double exact_mu(const Hmm& h0, const Hmm& hj, int r);

// mu_j(1..r_max) in one pass.
std::vector<double> mu_curve(const Hmm& h0, const Hmm& hj, int r_max);

// E[L_a(r) L_b(r)] = sum_s l0(s) la(s) lb(s) under fragments from h0.
double triple_mu(const Hmm& h0, const Hmm& ha, const Hmm& hb, int r);

// Second moment E[(L_1(r) - L_2(r))^2], expanded into three triple-operator
// terms. Throws if rounding drives the result below -1e-14.
double second_moment(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r);

struct ExactComparison {
    int r = 0;
    double mu_1 = 0.0;
    double mu_2 = 0.0;
    double second_moment = 0.0;  // E[(L1 - L2)^2]
    double sigma2 = 0.0;         // second_moment - (mu_1 - mu_2)^2, clamped at 0
    double lambda_1 = 0.0;       // dominant eigenvalue of W_1
    double lambda_2 = 0.0;
};

ExactComparison exact_comparison(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r);

// Exact growth ratios mu(r+1)/mu(r) for r = 1..r_max-1, together with the
// dominant eigenvalue of W they converge to.
struct GrowthRatios {
    std::vector<std::pair<int, double>> ratios;  // (r, mu(r+1)/mu(r))
    double lambda_max = 0.0;
    double lambda_residual = 0.0;
};

GrowthRatios growth_ratios(const Hmm& h0, const Hmm& hj, int r_max);

// Smallest r* <= r_max with exact_mu(h0,h1,r) > exact_mu(h0,h2,r) strictly for
// every r in [r*, r_max]; nullopt when no such r* exists within the horizon.
std::optional<int> dominance_threshold(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r_max);

}  // namespace fraghmm
