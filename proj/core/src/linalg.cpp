#include "ifacm/linalg.hpp"

#include <cassert>
#include <cmath>

namespace ifacm {

bool cholesky_solve(Matrix a, std::vector<double> b, std::vector<double>& out) {
    const std::size_t n = a.rows();
    assert(a.cols() == n && b.size() == n);

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const double tol = 1e-12 * std::max(max_diag, 1.0);

    // lower-triangular factor written into a
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > tol)) return false;
        const double l = std::sqrt(d);
        a(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / l;
        }
    }
    // forward substitution L y = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i);
    }
    // back substitution L^T x = y
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * b[k];
        b[ii] = s / a(ii, ii);
    }
    out = std::move(b);
    return true;
}

std::vector<double> solve_spd_ridged(const Matrix& a, const std::vector<double>& b) {
    std::vector<double> x;
    if (cholesky_solve(a, b, x)) return x;

    const std::size_t n = a.rows();
    double mean_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_diag += std::abs(a(i, i));
    mean_diag = std::max(mean_diag / static_cast<double>(n), 1.0);

    for (double ridge = 1e-10 * mean_diag;; ridge *= 100.0) {
        Matrix ar = a;
        for (std::size_t i = 0; i < n; ++i) ar(i, i) += ridge;
        if (cholesky_solve(ar, b, x)) return x;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace ifacm
