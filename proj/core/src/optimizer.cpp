#include "ifacm/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "ifacm/errors.hpp"

namespace ifacm {

namespace {

Point2 combine(const Point2& base, double scale, const Point2& dir) {
    return {base[0] + scale * (dir[0] - base[0]), base[1] + scale * (dir[1] - base[1])};
}

}  // namespace

MinimizeResult minimize(const std::function<double(Point2)>& f, Point2 start, int budget,
                        double tol) {
    if (budget < 3) throw ConfigError("minimize: budget must be at least 3");

    SimplexState s;
    s.points = {start, Point2{start[0] + 1.0, start[1]}, Point2{start[0], start[1] + 1.0}};

    const auto eval = [&](const Point2& p) {
        double v = f(p);
        if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
        ++s.evaluations;
        if (v < s.best_value) {
            s.best_value = v;
            s.best_point = p;
        }
        return v;
    };
    const auto spent = [&] { return s.evaluations >= budget; };

    for (std::size_t i = 0; i < 3; ++i) s.values[i] = eval(s.points[i]);

    while (!spent()) {
        // order best..worst
        std::array<std::size_t, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
        const std::array<Point2, 3> p{s.points[idx[0]], s.points[idx[1]], s.points[idx[2]]};
        const std::array<double, 3> v{s.values[idx[0]], s.values[idx[1]], s.values[idx[2]]};
        s.points = p;
        s.values = v;

        if (v[2] - v[0] < tol) break;  // infinities keep the spread infinite

        const Point2 centroid{(p[0][0] + p[1][0]) / 2.0, (p[0][1] + p[1][1]) / 2.0};
        const Point2 reflected = combine(centroid, -1.0, p[2]);
        const double fr = eval(reflected);
        if (spent()) break;

        if (fr < v[0]) {
            const Point2 expanded = combine(centroid, 2.0, reflected);
            const double fe = eval(expanded);
            if (fe < fr) {
                s.points[2] = expanded;
                s.values[2] = fe;
            } else {
                s.points[2] = reflected;
                s.values[2] = fr;
            }
        } else if (fr < v[1]) {
            s.points[2] = reflected;
            s.values[2] = fr;
        } else {
            const bool outside = fr < v[2];
            const Point2 contracted = combine(centroid, 0.5, outside ? reflected : p[2]);
            const double fc = eval(contracted);
            if (fc < (outside ? fr : v[2])) {
                s.points[2] = contracted;
                s.values[2] = fc;
            } else {
                for (std::size_t j = 1; j < 3 && !spent(); ++j) {
                    s.points[j] = combine(p[0], 0.5, p[j]);
                    s.values[j] = eval(s.points[j]);
                }
            }
        }
    }
    return {s.best_point, s.best_value, s.evaluations};
}

}  // namespace ifacm
