#include "fraghmm/batch.hpp"

#include <stdexcept>

namespace fraghmm {

namespace {

void check_windows(const Sequence& y, const std::vector<std::size_t>& starts, int r) {
    if (r < 1) throw std::invalid_argument("fragment_likelihoods: r must be >= 1");
    if (static_cast<std::size_t>(r) > y.size()) {
        throw std::invalid_argument("fragment_likelihoods: r exceeds sequence length");
    }
    const std::size_t max_start = y.size() - static_cast<std::size_t>(r);
    for (std::size_t s : starts) {
        if (s > max_start) throw std::invalid_argument("fragment_likelihoods: start index out of range");
    }
}

}  // namespace

std::vector<double> fragment_likelihoods(const Hmm& h, const Sequence& y,
                                         const std::vector<std::size_t>& starts, int r) {
    if (y.alphabet_size() != h.alphabet_size()) {
        throw std::invalid_argument("fragment_likelihoods: alphabet mismatch");
    }
    check_windows(y, starts, r);
    const int* symbols = y.symbols().data();
    std::vector<double> out(starts.size());
    const std::int64_t k = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(static) if (k >= 128)
    for (std::int64_t i = 0; i < k; ++i) {
        out[static_cast<std::size_t>(i)] = fragment_likelihood(
            h, std::span<const int>(symbols + starts[static_cast<std::size_t>(i)], static_cast<std::size_t>(r)));
    }
    return out;
}

std::vector<double> fragment_likelihoods_serial(const Hmm& h, const Sequence& y,
                                                const std::vector<std::size_t>& starts, int r) {
    if (y.alphabet_size() != h.alphabet_size()) {
        throw std::invalid_argument("fragment_likelihoods: alphabet mismatch");
    }
    check_windows(y, starts, r);
    const int* symbols = y.symbols().data();
    std::vector<double> out(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        out[i] = fragment_likelihood(h, std::span<const int>(symbols + starts[i], static_cast<std::size_t>(r)));
    }
    return out;
}

}  // namespace fraghmm
