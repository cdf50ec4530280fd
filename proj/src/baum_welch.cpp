#include "fraghmm/baum_welch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fraghmm/rng.hpp"

namespace fraghmm {

namespace {

// Sufficient statistics from one scaled forward-backward pass.
struct EStats {
    double log_likelihood = 0.0;
    std::vector<double> gamma_first;       // gamma_1(i)
    std::vector<double> gamma_sum;         // sum_t gamma_t(i), all t
    std::vector<double> gamma_sum_trans;   // sum_{t<T} gamma_t(i)
    Matrix xi_sum;                         // sum_{t<T} xi_t(i,j)
    Matrix emit_sum;                       // sum_t gamma_t(i) [y_t = m]
};

// One EM iteration's E-step on explicit parameter matrices. The start
// distribution is the free EM parameter, not the stationary vector.
EStats forward_backward(const Matrix& a, const Matrix& b, const std::vector<double>& start,
                        const std::vector<int>& y) {
    const int n = a.rows;
    const int big_t = static_cast<int>(y.size());

    std::vector<double> alpha(static_cast<std::size_t>(big_t) * n);
    std::vector<double> scale(static_cast<std::size_t>(big_t));

    for (int i = 0; i < n; ++i) alpha[static_cast<std::size_t>(i)] = start[static_cast<std::size_t>(i)] * b(i, y[0]);
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += alpha[static_cast<std::size_t>(i)];
    if (!(c > 0.0)) throw std::runtime_error("forward_backward: sequence impossible under current parameters");
    for (int i = 0; i < n; ++i) alpha[static_cast<std::size_t>(i)] /= c;
    scale[0] = c;

    for (int t = 1; t < big_t; ++t) {
        double* cur = alpha.data() + static_cast<std::size_t>(t) * n;
        const double* prev = alpha.data() + static_cast<std::size_t>(t - 1) * n;
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += prev[i] * a(i, j);
            cur[j] = acc * b(j, y[static_cast<std::size_t>(t)]);
        }
        c = 0.0;
        for (int j = 0; j < n; ++j) c += cur[j];
        if (!(c > 0.0)) throw std::runtime_error("forward_backward: sequence impossible under current parameters");
        for (int j = 0; j < n; ++j) cur[j] /= c;
        scale[static_cast<std::size_t>(t)] = c;
    }

    EStats stats;
    stats.gamma_first.assign(static_cast<std::size_t>(n), 0.0);
    stats.gamma_sum.assign(static_cast<std::size_t>(n), 0.0);
    stats.gamma_sum_trans.assign(static_cast<std::size_t>(n), 0.0);
    stats.xi_sum = Matrix(n, n);
    stats.emit_sum = Matrix(n, b.cols);
    for (double s : scale) stats.log_likelihood += std::log(s);

    // Backward pass, accumulating statistics without storing beta.
    std::vector<double> beta(static_cast<std::size_t>(n), 1.0);
    std::vector<double> beta_prev(static_cast<std::size_t>(n));
    for (int t = big_t - 1; t >= 0; --t) {
        const double* alpha_t = alpha.data() + static_cast<std::size_t>(t) * n;
        for (int i = 0; i < n; ++i) {
            const double g = alpha_t[i] * beta[static_cast<std::size_t>(i)];
            stats.gamma_sum[static_cast<std::size_t>(i)] += g;
            stats.emit_sum(i, y[static_cast<std::size_t>(t)]) += g;
            if (t < big_t - 1) stats.gamma_sum_trans[static_cast<std::size_t>(i)] += g;
            if (t == 0) stats.gamma_first[static_cast<std::size_t>(i)] = g;
        }
        if (t > 0) {
            const double* alpha_prev = alpha.data() + static_cast<std::size_t>(t - 1) * n;
            const double inv_c = 1.0 / scale[static_cast<std::size_t>(t)];
            const int yt = y[static_cast<std::size_t>(t)];
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double w = a(i, j) * b(j, yt) * beta[static_cast<std::size_t>(j)] * inv_c;
                    stats.xi_sum(i, j) += alpha_prev[i] * w;
                    acc += w;
                }
                beta_prev[static_cast<std::size_t>(i)] = acc;
            }
            beta.swap(beta_prev);
        }
    }
    return stats;
}

Matrix dirichlet_rows(Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < cols; ++j) {
            double u;
            do {
                u = rng.next_double();
            } while (u == 0.0);
            m(i, j) = -std::log(u);
            row_sum += m(i, j);
        }
        for (int j = 0; j < cols; ++j) m(i, j) /= row_sum;
    }
    return m;
}

struct RestartOutcome {
    std::optional<Hmm> model;  // empty: restart failed, see error
    std::string error;
    std::vector<double> trace;
    bool converged = false;
    int iterations = 0;
};

RestartOutcome run_restart(const std::vector<int>& y, int n_states, int alphabet, const FitConfig& config,
                           std::uint64_t restart_seed) {
    RestartOutcome out;
    Rng rng(restart_seed);
    Matrix a = dirichlet_rows(rng, n_states, n_states);
    Matrix b = dirichlet_rows(rng, n_states, alphabet);
    std::vector<double> start(static_cast<std::size_t>(n_states), 1.0 / n_states);

    EStats stats = forward_backward(a, b, start, y);
    out.trace.push_back(stats.log_likelihood);

    for (int it = 1; it <= config.max_iters; ++it) {
        // M-step from the previous E-step's statistics.
        for (int i = 0; i < n_states; ++i) {
            const double denom_a = stats.gamma_sum_trans[static_cast<std::size_t>(i)];
            const double denom_b = stats.gamma_sum[static_cast<std::size_t>(i)];
            if (!(denom_a > 0.0) || !(denom_b > 0.0)) {
                throw std::runtime_error("fit: state " + std::to_string(i) + " received zero occupancy");
            }
            for (int j = 0; j < n_states; ++j) a(i, j) = stats.xi_sum(i, j) / denom_a;
            for (int m = 0; m < alphabet; ++m) b(i, m) = stats.emit_sum(i, m) / denom_b;
        }
        start = stats.gamma_first;

        stats = forward_backward(a, b, start, y);
        const double prev = out.trace.back();
        out.trace.push_back(stats.log_likelihood);
        out.iterations = it;
        if ((stats.log_likelihood - prev) / std::max(1.0, std::abs(prev)) < config.tol) {
            out.converged = true;
            break;
        }
    }

    // A reducible fitted chain has no unique stationary law; constructing the
    // model throws here and the restart is discarded by the caller.
    out.model.emplace(StochasticMatrix(std::move(a)), StochasticMatrix(std::move(b)), config.label);
    return out;
}

}  // namespace

double sequence_log_likelihood(const Hmm& h, const Sequence& y) {
    return log_likelihood_full(h, y).value;
}

FitResult fit(const Sequence& y, const FitConfig& config) {
    if (config.n_states < 1) throw std::invalid_argument("fit: n_states must be >= 1");
    if (config.max_iters < 1) throw std::invalid_argument("fit: max_iters must be >= 1");
    if (!(config.tol > 0.0)) throw std::invalid_argument("fit: tol must be positive");
    if (config.n_restarts < 1) throw std::invalid_argument("fit: n_restarts must be >= 1");
    if (y.size() < 2) throw std::invalid_argument("fit: sequence must have at least 2 observations");

    const int alphabet = y.alphabet_size();
    const std::vector<int>& obs = y.symbols();

    std::vector<bool> seen(static_cast<std::size_t>(alphabet), false);
    for (int s : obs) seen[static_cast<std::size_t>(s)] = true;

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.n_restarts));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (config.n_restarts > 1)
#endif
    for (int rep = 0; rep < config.n_restarts; ++rep) {
        try {
            outcomes[static_cast<std::size_t>(rep)] =
                run_restart(obs, config.n_states, alphabet, config, config.seed + static_cast<std::uint64_t>(rep));
        } catch (const std::exception& e) {
            outcomes[static_cast<std::size_t>(rep)].error = e.what();
        }
    }

    // Select the best restart serially, in index order, so ties and output
    // are identical at any thread count.
    int best = -1;
    for (int rep = 0; rep < config.n_restarts; ++rep) {
        const RestartOutcome& o = outcomes[static_cast<std::size_t>(rep)];
        if (!o.model) continue;
        if (best < 0 || o.trace.back() > outcomes[static_cast<std::size_t>(best)].trace.back()) best = rep;
    }
    if (best < 0) {
        std::string detail = outcomes.front().error.empty() ? "unknown" : outcomes.front().error;
        throw std::runtime_error("fit: all restarts failed (first error: " + detail + ")");
    }

    RestartOutcome& won = outcomes[static_cast<std::size_t>(best)];
    FitResult result{
        std::move(*won.model),
        std::move(won.trace),
        won.converged,
        won.iterations,
        best,
        {},
    };
    for (int m = 0; m < alphabet; ++m) {
        if (!seen[static_cast<std::size_t>(m)]) result.unseen_symbols.push_back(m);
    }
    return result;
}

std::string loglik_trace_csv(const std::vector<double>& trace) {
    std::ostringstream out;
    out << "iteration,log_likelihood\n";
    out.precision(17);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << i << ',' << trace[i] << '\n';
    }
    return out.str();
}

}  // namespace fraghmm
