#pragma once

#include <array>
#include <functional>
#include <limits>

namespace ifacm {

using Point2 = std::array<double, 2>;

struct SimplexState {
    std::array<Point2, 3> points;
    std::array<double, 3> values;
    int evaluations = 0;
    Point2 best_point{};
    double best_value = std::numeric_limits<double>::infinity();
};

struct MinimizeResult {
    Point2 argmin{};
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
};

// Standard Nelder-Mead in two dimensions: reflection 1.0, expansion 2.0,
// contraction 0.5, shrink 0.5. The initial simplex is the start point
// plus unit steps along each axis. Terminates when the simplex value
// spread falls below tol or the evaluation budget is exhausted, and
// returns the best point ever evaluated. Non-finite objective values are
// treated as +infinity; the search never aborts on them.
MinimizeResult minimize(const std::function<double(Point2)>& f, Point2 start, int budget,
                        double tol = 1e-4);

}  // namespace ifacm
