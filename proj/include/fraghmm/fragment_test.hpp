// Monte-Carlo fragment comparison: sample fixed-length windows from an
// observed sequence, evaluate both candidate models on each window, and
// decide which model explains the data better via a paired Z-test.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fraghmm/hmm.hpp"

namespace fraghmm {

// A draw of k window start positions, sampled iid uniform with replacement
// over [0, n - r]. Overlaps are allowed by design.
struct FragmentSample {
    int r = 0;
    int k = 0;
    std::vector<std::size_t> start_indices;
    std::uint64_t seed = 0;
};

FragmentSample sample_fragments(const Sequence& y, int r, int k, std::uint64_t seed);

struct ZResult {
    double z = 0.0;
    double p_value = 0.0;      // one-sided, P(Z > z)
    double p_two_sided = 0.0;
};

// Normal N(0,1) CDF via erfc; accurate in both tails.
double normal_cdf(double z);

// mean and std describe the sampled differences l1 - l2; std is the
// unbiased (k-1 denominator) sample standard deviation.
ZResult z_statistic(double mean, double std_dev, int k);

struct TestResult {
    int r = 0;
    int k = 0;
    double mean_diff = 0.0;
    double sample_std = 0.0;
    double z = 0.0;
    double p_value = 0.0;
    double p_two_sided = 0.0;
    double mu1_hat = 0.0;
    double mu2_hat = 0.0;
    double sparsity_ratio = 0.0;  // K^r / n
    bool sparsity_warning = false;
    bool degenerate = false;      // all differences identically zero
};

TestResult run_test(const Sequence& y, const Hmm& h1, const Hmm& h2, int r, int k,
                    std::uint64_t seed);

struct SweepRatio {
    int r_num = 0;   // ratio is mu_hat(r_num) / mu_hat(r_den)
    int r_den = 0;
    double ratio_1 = 0.0;
    double ratio_2 = 0.0;
};

struct SweepResult {
    std::vector<TestResult> rows;      // one per r in [r_min, r_max]
    std::vector<SweepRatio> ratios;    // consecutive-r growth ratios
    int n = 0;
    int alphabet_size = 0;
};

// Runs run_test for each r in [r_min, r_max] with an independent sample per
// r (seed + r), then derives growth ratios from the estimated means.
SweepResult sweep(const Sequence& y, const Hmm& h1, const Hmm& h2, int r_min, int r_max,
                  int k, std::uint64_t seed);

}  // namespace fraghmm
