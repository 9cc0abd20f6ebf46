#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ifacm {

// Dense row-major matrix; just enough linear algebra for the model fits.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Solve A x = b for symmetric positive definite A (in-place Cholesky).
// Returns false when a pivot falls below a relative tolerance.
bool cholesky_solve(Matrix a, std::vector<double> b, std::vector<double>& out);

// Cholesky with an escalating diagonal ridge: starts at 1e-10 times the
// mean diagonal and multiplies by 100 until the factorization succeeds.
// Keeps nearly singular Gram matrices (duplicated columns) solvable.
std::vector<double> solve_spd_ridged(const Matrix& a, const std::vector<double>& b);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace ifacm
