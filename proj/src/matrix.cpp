#include "fraghmm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace fraghmm {

namespace {

void check_dims(int r, int c) {
    if (r < 1 || c < 1) {
        throw std::invalid_argument("Matrix: rows and cols must be >= 1, got " +
                                    std::to_string(r) + "x" + std::to_string(c));
    }
}

// Sums this close to 1 are rounding noise from an earlier normalization;
// dividing again would perturb bits, so normalization stays idempotent and
// saved models reload exactly.
constexpr double kSumSnap = 1e-12;

}  // namespace

Matrix::Matrix(int r, int c) : rows(r), cols(c) {
    check_dims(r, c);
    data.assign(static_cast<std::size_t>(r) * c, 0.0);
}

Matrix::Matrix(int r, int c, std::vector<double> entries) : rows(r), cols(c), data(std::move(entries)) {
    check_dims(r, c);
    if (data.size() != static_cast<std::size_t>(r) * c) {
        throw std::invalid_argument("Matrix: entry count " + std::to_string(data.size()) +
                                    " does not match " + std::to_string(r) + "x" + std::to_string(c));
    }
    for (double v : data) {
        if (!std::isfinite(v)) throw std::invalid_argument("Matrix: entries must be finite");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(std::span<const double> d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("multiply: inner dimension mismatch " + std::to_string(a.cols) +
                                    " vs " + std::to_string(b.rows));
    }
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
    return out;
}

std::vector<double> left_apply(std::span<const double> x, const Matrix& m) {
    if (x.size() != static_cast<std::size_t>(m.rows)) {
        throw std::invalid_argument("left_apply: vector size does not match matrix rows");
    }
    std::vector<double> out(static_cast<std::size_t>(m.cols), 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        if (xi == 0.0) continue;
        for (int j = 0; j < m.cols; ++j) out[static_cast<std::size_t>(j)] += xi * m(i, j);
    }
    return out;
}

std::vector<double> apply(const Matrix& m, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(m.cols)) {
        throw std::invalid_argument("apply: vector size does not match matrix cols");
    }
    std::vector<double> out(static_cast<std::size_t>(m.rows), 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m.cols; ++j) acc += m(i, j) * x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

Matrix kronecker(const Matrix& a, const Matrix& b, std::size_t max_entries) {
    const std::size_t rr = static_cast<std::size_t>(a.rows) * b.rows;
    const std::size_t cc = static_cast<std::size_t>(a.cols) * b.cols;
    if (rr > max_entries || cc > max_entries || rr * cc > max_entries) {
        throw std::invalid_argument("kronecker: result would have " + std::to_string(rr) + "x" +
                                    std::to_string(cc) + " entries, exceeding the cap of " +
                                    std::to_string(max_entries));
    }
    Matrix out(static_cast<int>(rr), static_cast<int>(cc));
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) {
            const double aij = a(i, j);
            for (int k = 0; k < b.rows; ++k) {
                for (int l = 0; l < b.cols; ++l) {
                    out(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

StochasticMatrix::StochasticMatrix(Matrix m) : m_(std::move(m)) {
    for (int i = 0; i < m_.rows; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m_.cols; ++j) {
            const double v = m_(i, j);
            if (v < 0.0) {
                throw std::invalid_argument("StochasticMatrix: negative entry at (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) {
            throw std::invalid_argument("StochasticMatrix: row " + std::to_string(i) + " sums to " +
                                        std::to_string(sum) + ", outside tolerance");
        }
        if (std::abs(sum - 1.0) > kSumSnap) {
            for (int j = 0; j < m_.cols; ++j) m_(i, j) /= sum;
        }
    }
}

ProbVector::ProbVector(std::vector<double> entries) : v_(std::move(entries)) {
    if (v_.empty()) throw std::invalid_argument("ProbVector: empty");
    double sum = 0.0;
    for (double v : v_) {
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("ProbVector: entries must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTol) {
        throw std::invalid_argument("ProbVector: entries sum to " + std::to_string(sum));
    }
    if (std::abs(sum - 1.0) > kSumSnap) {
        for (double& v : v_) v /= sum;
    }
}

ProbVector kronecker(const ProbVector& a, const ProbVector& b) {
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) out.push_back(a[i] * b[k]);
    return ProbVector(std::move(out));
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    if (!a.square() || b.size() != static_cast<std::size_t>(a.rows)) {
        throw std::invalid_argument("solve_linear: need a square system");
    }
    const int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (std::abs(a(piv, col)) < 1e-14) {
            throw std::runtime_error("solve_linear: singular system");
        }
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = acc / a(i, i);
    }
    return x;
}

int rank_estimate(Matrix a, double tol) {
    const int n = std::min(a.rows, a.cols);
    int rank = 0;
    int row = 0;
    for (int col = 0; col < a.cols && row < a.rows; ++col) {
        int piv = row;
        for (int r = row + 1; r < a.rows; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (std::abs(a(piv, col)) <= tol) continue;
        if (piv != row) {
            for (int j = 0; j < a.cols; ++j) std::swap(a(piv, j), a(row, j));
        }
        for (int r = row + 1; r < a.rows; ++r) {
            const double f = a(r, col) / a(row, col);
            if (f == 0.0) continue;
            for (int j = col; j < a.cols; ++j) a(r, j) -= f * a(row, j);
        }
        ++rank;
        ++row;
        if (rank == n) break;
    }
    return rank;
}

ProbVector stationary_distribution(const StochasticMatrix& p) {
    if (!p.inner().square()) {
        throw std::invalid_argument("stationary_distribution: matrix must be square");
    }
    const int n = p.rows();

    // Null space of p^T - I must be exactly one-dimensional.
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
    if (rank_estimate(b, 1e-8) < n - 1) {
        throw std::runtime_error(
            "stationary_distribution: transition matrix is reducible or degenerate; "
            "stationary distribution is not unique");
    }

    // Replace the last equation with the normalization constraint.
    Matrix a = b;
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    rhs[static_cast<std::size_t>(n) - 1] = 1.0;

    std::vector<double> pi = solve_linear(std::move(a), std::move(rhs));
    for (double& v : pi) {
        if (v < 0.0 && v > -1e-12) v = 0.0;  // round-off on a Perron vector
    }
    ProbVector out(std::move(pi));

    std::vector<double> res = left_apply(out.entries(), p.inner());
    double err = 0.0;
    for (int j = 0; j < n; ++j) err = std::max(err, std::abs(res[static_cast<std::size_t>(j)] - out[static_cast<std::size_t>(j)]));
    if (err > 1e-10) {
        throw std::runtime_error("stationary_distribution: fixed-point residual " + std::to_string(err));
    }
    return out;
}

EigenEstimate dominant_eigenvalue(const Matrix& w, double tol, int max_iters) {
    if (!w.square()) throw std::invalid_argument("dominant_eigenvalue: matrix must be square");
    for (double v : w.data) {
        if (v < 0.0) throw std::invalid_argument("dominant_eigenvalue: entries must be nonnegative");
    }
    const int n = w.rows;
    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));

    double lambda = 0.0;
    double residual = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        std::vector<double> u = fraghmm::apply(w, v);
        lambda = 0.0;
        for (int i = 0; i < n; ++i) lambda += v[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(u[static_cast<std::size_t>(i)] - lambda * v[static_cast<std::size_t>(i)]));
        }
        if (residual < tol) return {lambda, residual, it};
        double norm = 0.0;
        for (double x : u) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return {0.0, 0.0, it};  // w annihilated v: nilpotent direction, eigenvalue 0
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] / norm;
    }
    throw PowerIterationError("dominant_eigenvalue: no convergence after " + std::to_string(max_iters) +
                                  " iterations (estimate " + std::to_string(lambda) + ", residual " +
                                  std::to_string(residual) + ")",
                              lambda, residual);
}

}  // namespace fraghmm
