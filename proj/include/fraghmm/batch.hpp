#pragma once

#include <cstddef>
#include <vector>

#include "fraghmm/hmm.hpp"

namespace fraghmm {

// Fragment likelihood of every length-r window of y starting at the given
// offsets. Windows are independent, so the evaluation runs as an OpenMP
// parallel-for when available; each output slot is written exactly once, so
// the result is bit-identical to the serial reference at any thread count.
std::vector<double> fragment_likelihoods(const Hmm& h, const Sequence& y,
                                         const std::vector<std::size_t>& starts, int r);

// Serial reference for the kernel above; kept for tests and benchmarks.
std::vector<double> fragment_likelihoods_serial(const Hmm& h, const Sequence& y,
                                                const std::vector<std::size_t>& starts, int r);

}  // namespace fraghmm
