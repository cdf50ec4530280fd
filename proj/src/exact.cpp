#include "fraghmm/exact.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fraghmm {

namespace {

void check_alphabets(const Hmm& a, const Hmm& b, const char* where) {
    if (a.alphabet_size() != b.alphabet_size()) {
        throw std::invalid_argument(std::string(where) + ": alphabet mismatch (" +
                                    std::to_string(a.alphabet_size()) + " vs " +
                                    std::to_string(b.alphabet_size()) + ")");
    }
}

double sum(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

}  // namespace

PairOperator pair_operator(const Hmm& h0, const Hmm& hj) {
    check_alphabets(h0, hj, "pair_operator");
    const int d = h0.num_states() * hj.num_states();
    Matrix w(d, d);
    for (int m = 0; m < h0.alphabet_size(); ++m) {
        const Matrix term = kronecker(symbol_operator(h0, m).matrix, symbol_operator(hj, m).matrix);
        for (std::size_t i = 0; i < w.data.size(); ++i) w.data[i] += term.data[i];
    }
#ifndef NDEBUG
    {
        const Matrix factored = pair_operator_product_form(h0, hj);
        for (std::size_t i = 0; i < w.data.size(); ++i) {
            assert(std::abs(w.data[i] - factored.data[i]) < 1e-12);
        }
    }
#endif
    return {std::move(w), kronecker(h0.stationary(), hj.stationary()), h0.num_states(), hj.num_states()};
}

Matrix pair_operator_product_form(const Hmm& h0, const Hmm& hj) {
    check_alphabets(h0, hj, "pair_operator_product_form");
    const Matrix pp = kronecker(h0.transition().inner(), hj.transition().inner());
    // row-major vec of S0 Sj^T == column-major vec of Sj S0^T
    const Matrix cross = multiply(h0.emission().inner(), transpose(hj.emission().inner()));
    return multiply(pp, Matrix::diag(cross.data));
}

TripleOperator triple_operator(const Hmm& h0, const Hmm& ha, const Hmm& hb) {
    check_alphabets(h0, ha, "triple_operator");
    check_alphabets(h0, hb, "triple_operator");
    const int d = h0.num_states() * ha.num_states() * hb.num_states();
    Matrix w3(d, d);
    for (int m = 0; m < h0.alphabet_size(); ++m) {
        const Matrix term = kronecker(kronecker(symbol_operator(h0, m).matrix, symbol_operator(ha, m).matrix),
                                      symbol_operator(hb, m).matrix);
        for (std::size_t i = 0; i < w3.data.size(); ++i) w3.data[i] += term.data[i];
    }
    return {std::move(w3), kronecker(kronecker(h0.stationary(), ha.stationary()), hb.stationary())};
}

double exact_mu(const Hmm& h0, const Hmm& hj, int r) {
    if (r < 1) throw std::invalid_argument("exact_mu: r must be >= 1");
    const PairOperator op = pair_operator(h0, hj);
    std::vector<double> x = op.left.entries();
    for (int step = 0; step < r; ++step) x = left_apply(x, op.w);
    return sum(x);
}

std::vector<double> mu_curve(const Hmm& h0, const Hmm& hj, int r_max) {
    if (r_max < 1) throw std::invalid_argument("mu_curve: r_max must be >= 1");
    const PairOperator op = pair_operator(h0, hj);
    std::vector<double> x = op.left.entries();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(r_max));
    for (int r = 1; r <= r_max; ++r) {
        x = left_apply(x, op.w);
        out.push_back(sum(x));
    }
    return out;
}

double triple_mu(const Hmm& h0, const Hmm& ha, const Hmm& hb, int r) {
    if (r < 1) throw std::invalid_argument("triple_mu: r must be >= 1");
    const TripleOperator op = triple_operator(h0, ha, hb);
    std::vector<double> x = op.left.entries();
    for (int step = 0; step < r; ++step) x = left_apply(x, op.w3);
    return sum(x);
}

double second_moment(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r) {
    const double t11 = triple_mu(h0, h1, h1, r);
    const double t12 = triple_mu(h0, h1, h2, r);
    const double t22 = triple_mu(h0, h2, h2, r);
    const double value = t11 - 2.0 * t12 + t22;
    if (value < -1e-14) {
        throw std::runtime_error("second_moment: negative value " + std::to_string(value) +
                                 " exceeds rounding allowance");
    }
    return value < 0.0 ? 0.0 : value;
}

ExactComparison exact_comparison(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r) {
    ExactComparison out;
    out.r = r;
    out.mu_1 = exact_mu(h0, h1, r);
    out.mu_2 = exact_mu(h0, h2, r);
    out.second_moment = second_moment(h0, h1, h2, r);
    const double mean_diff = out.mu_1 - out.mu_2;
    const double sigma2 = out.second_moment - mean_diff * mean_diff;
    if (sigma2 < -1e-14) {
        throw std::runtime_error("exact_comparison: variance " + std::to_string(sigma2) +
                                 " below rounding allowance");
    }
    out.sigma2 = sigma2 < 0.0 ? 0.0 : sigma2;
    out.lambda_1 = dominant_eigenvalue(pair_operator(h0, h1).w).value;
    out.lambda_2 = dominant_eigenvalue(pair_operator(h0, h2).w).value;
    return out;
}

GrowthRatios growth_ratios(const Hmm& h0, const Hmm& hj, int r_max) {
    if (r_max < 2) throw std::invalid_argument("growth_ratios: r_max must be >= 2");
    const std::vector<double> mu = mu_curve(h0, hj, r_max);
    GrowthRatios out;
    out.ratios.reserve(static_cast<std::size_t>(r_max) - 1);
    for (int r = 1; r < r_max; ++r) {
        out.ratios.emplace_back(r, mu[static_cast<std::size_t>(r)] / mu[static_cast<std::size_t>(r) - 1]);
    }
    const EigenEstimate eig = dominant_eigenvalue(pair_operator(h0, hj).w);
    out.lambda_max = eig.value;
    out.lambda_residual = eig.residual;
    return out;
}

std::optional<int> dominance_threshold(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r_max) {
    if (r_max < 1) throw std::invalid_argument("dominance_threshold: r_max must be >= 1");
    const std::vector<double> mu1 = mu_curve(h0, h1, r_max);
    const std::vector<double> mu2 = mu_curve(h0, h2, r_max);
    int threshold = r_max + 1;
    for (int r = r_max; r >= 1; --r) {
        if (!(mu1[static_cast<std::size_t>(r) - 1] > mu2[static_cast<std::size_t>(r) - 1])) break;
        threshold = r;
    }
    if (threshold > r_max) return std::nullopt;
    return threshold;
}

}  // namespace fraghmm
