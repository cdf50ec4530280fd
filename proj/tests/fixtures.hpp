// Shared test fixtures: the bundled example models and seeded random models.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "fraghmm/hmm.hpp"
#include "fraghmm/rng.hpp"

inline std::string data_path(const std::string& name) {
    return std::string(FRAGHMM_DATA_DIR) + "/" + name;
}

// The bundled 3-state / 4-state example models (both over a 3-symbol
// alphabet). Loaded once.
inline const fraghmm::Hmm& example_hmm1() {
    static const fraghmm::Hmm h = fraghmm::load_hmm(data_path("hmm1.json"));
    return h;
}

inline const fraghmm::Hmm& example_hmm2() {
    static const fraghmm::Hmm h = fraghmm::load_hmm(data_path("hmm2.json"));
    return h;
}

// Random model with entries bounded away from zero (irreducible by
// construction), rows normalized.
inline fraghmm::Hmm random_model(int n_states, int alphabet, std::uint64_t seed,
                                 double min_entry = 0.05) {
    fraghmm::Rng rng(seed);
    const auto draw = [&rng, min_entry](int rows, int cols) {
        fraghmm::Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            double sum = 0.0;
            for (int j = 0; j < cols; ++j) {
                m(i, j) = min_entry + rng.next_double();
                sum += m(i, j);
            }
            for (int j = 0; j < cols; ++j) m(i, j) /= sum;
        }
        return m;
    };
    return fraghmm::Hmm(fraghmm::StochasticMatrix(draw(n_states, n_states)),
                        fraghmm::StochasticMatrix(draw(n_states, alphabet)));
}

// Self-cleaning scratch directory for tests that write files.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            std::filesystem::path candidate = base / ("fraghmm_test_" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("TempDir: cannot create a scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};
