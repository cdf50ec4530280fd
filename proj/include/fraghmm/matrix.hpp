#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraghmm {

// Small dense row-major matrix. All entries must be finite.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major, rows*cols entries

    Matrix() = default;
    Matrix(int r, int c);                               // zero-initialized
    Matrix(int r, int c, std::vector<double> entries);  // validates size and finiteness

    static Matrix identity(int n);
    static Matrix diag(std::span<const double> d);

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
    bool square() const { return rows == cols; }
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// x^T * m for a row vector x (size m.rows); returns a row vector of size m.cols.
std::vector<double> left_apply(std::span<const double> x, const Matrix& m);
// m * x for a column vector x (size m.cols).
std::vector<double> apply(const Matrix& m, std::span<const double> x);

// Kronecker product. Block (i,j) of the result equals a(i,j)*b; the combined
// row index is i*b.rows + k (first factor varies slowest), and likewise for
// columns. Throws if the result would exceed max_entries.
Matrix kronecker(const Matrix& a, const Matrix& b, std::size_t max_entries = 1'000'000);

// Nonnegative row-stochastic matrix. Construction accepts row sums within
// kRowSumTol of 1 (covers matrices truncated to ~6 decimals) and renormalizes
// each row to sum to exactly 1; larger deviations or negative entries throw.
class StochasticMatrix {
public:
    static constexpr double kRowSumTol = 2e-6;

    explicit StochasticMatrix(Matrix m);

    const Matrix& inner() const { return m_; }
    int rows() const { return m_.rows; }
    int cols() const { return m_.cols; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Matrix m_;
};

// Nonnegative vector renormalized to sum to 1 on construction.
class ProbVector {
public:
    static constexpr double kSumTol = 1e-6;

    explicit ProbVector(std::vector<double> entries);

    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    const std::vector<double>& entries() const { return v_; }

private:
    std::vector<double> v_;
};

ProbVector kronecker(const ProbVector& a, const ProbVector& b);

// Stationary distribution pi of a square stochastic matrix: pi^T p = pi^T,
// sum(pi) = 1. Solved directly from (p^T - I) pi = 0 with the normalization
// row; the null space of p^T - I must be one-dimensional (pivot tolerance
// 1e-8) or the chain is reported as reducible/degenerate.
ProbVector stationary_distribution(const StochasticMatrix& p);

struct EigenEstimate {
    double value = 0.0;     // Rayleigh-quotient estimate of the dominant eigenvalue
    double residual = 0.0;  // final ||w v - value v||_inf
    int iterations = 0;
};

// Thrown when power iteration does not reach tol; carries the last estimate.
class PowerIterationError : public std::runtime_error {
public:
    PowerIterationError(const std::string& what, double estimate, double residual)
        : std::runtime_error(what), estimate(estimate), residual(residual) {}
    double estimate;
    double residual;
};

// Power iteration for the dominant (Perron) eigenvalue of an entrywise
// nonnegative square matrix, started from a strictly positive vector.
EigenEstimate dominant_eigenvalue(const Matrix& w, double tol = 1e-12, int max_iters = 10'000);

// Gaussian elimination with partial pivoting; throws on singular systems.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Pivot count of Gaussian elimination with threshold tol.
int rank_estimate(Matrix a, double tol);

}  // namespace fraghmm
