#include "ifacm/icp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ifacm/errors.hpp"

namespace ifacm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Smallest rank r such that a candidate with r calibration scores at or
// below it is a member: r + 1 > epsilon * (n + 1). Guarded adjustment
// keeps the result exact against the counting rule under rounding.
long member_rank(std::size_t n, double epsilon) {
    const double x = epsilon * static_cast<double>(n + 1);
    long r = static_cast<long>(std::floor(x));
    while (r >= 1 && static_cast<double>(r - 1) + 1.0 > x) --r;
    while (static_cast<double>(r) + 1.0 <= x) ++r;
    return r;
}

}  // namespace

CalibrationTable make_calibration_table(std::vector<double> scores, double epsilon) {
    if (scores.empty()) throw DataError("calibration: empty score set");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("calibration: significance must be in (0,1)");
    std::sort(scores.begin(), scores.end());
    return {std::move(scores), epsilon};
}

CalibrationTable calibrate(const ConformityMeasure& cm, const Dataset& cal, double epsilon) {
    if (cal.size() == 0) throw DataError("calibrate: empty calibration set");
    if (cm.task() != cal.task) throw DataError("calibrate: task mismatch");
    std::vector<double> scores(cal.size());
    for (std::size_t i = 0; i < cal.size(); ++i) {
        if (cal.task == Task::Regression) scores[i] = score(cm, cal.object(i), cal.reals[i]);
        else scores[i] = score(cm, cal.object(i), cal.classes[i]);
    }
    return make_calibration_table(std::move(scores), epsilon);
}

Threshold threshold(const CalibrationTable& table) {
    const long r = member_rank(table.scores.size(), table.epsilon);
    if (r < 1) return {kNegInf};
    return {table.scores[static_cast<std::size_t>(r - 1)]};
}

std::size_t minimal_calibration_size(double epsilon) {
    std::size_t n = 1;
    while (member_rank(n, epsilon) < 1) ++n;
    return n;
}

LabelSet predict_classification(const ConformityMeasure& cm, const CalibrationTable& table,
                                std::span<const double> x, std::size_t label_space) {
    if (label_space == 0) throw DataError("predict_classification: empty label space");
    const Threshold t = threshold(table);
    LabelSet set;
    for (std::size_t y = 0; y < label_space; ++y) {
        if (!t.finite() || score(cm, x, static_cast<int>(y)) >= t.value)
            set.push_back(static_cast<int>(y));
    }
    return set;
}

Interval predict_interval(const ConformityMeasure& cm, const CalibrationTable& table,
                          std::span<const double> x) {
    if (cm.task() != Task::Regression)
        throw DataError("predict_interval: classification measure passed");
    const Threshold t = threshold(table);
    const OlsModel& point = std::holds_alternative<StandardCm>(cm.base)
                                ? std::get<StandardCm>(cm.base).point
                                : std::get<NormalizedCm>(cm.base).point;
    const double yhat = predict_ols(point, x);
    if (!t.finite())
        return {kNegInf, std::numeric_limits<double>::infinity()};
    const double half = std::exp(log_sigma(cm, x) - t.value);
    return {yhat - half, yhat + half};
}

std::vector<PredictionOutput> predict_all(const ConformityMeasure& cm,
                                          const CalibrationTable& table, const Dataset& eval) {
    if (cm.task() != eval.task) throw DataError("predict_all: task mismatch");
    std::vector<PredictionOutput> out;
    out.reserve(eval.size());
    for (std::size_t i = 0; i < eval.size(); ++i) {
        if (eval.task == Task::Regression)
            out.emplace_back(predict_interval(cm, table, eval.object(i)));
        else
            out.emplace_back(predict_classification(cm, table, eval.object(i),
                                                    eval.label_space()));
    }
    return out;
}

std::vector<int> correctness_flags(const ConformityMeasure& cm, const CalibrationTable& table,
                                   const Dataset& eval) {
    if (cm.task() != eval.task) throw DataError("correctness_flags: task mismatch");
    const Threshold t = threshold(table);
    std::vector<int> flags(eval.size());
    for (std::size_t i = 0; i < eval.size(); ++i) {
        const double s = eval.task == Task::Regression
                             ? score(cm, eval.object(i), eval.reals[i])
                             : score(cm, eval.object(i), eval.classes[i]);
        flags[i] = (!t.finite() || s >= t.value) ? 1 : 0;
    }
    return flags;
}

double threshold_gamma(const std::vector<double>& base_scores, const std::vector<int>& steps,
                       double gamma, double epsilon) {
    if (base_scores.size() != steps.size())
        throw DataError("threshold_gamma: length mismatch");
    std::vector<double> adjusted(base_scores.size());
    for (std::size_t i = 0; i < base_scores.size(); ++i)
        adjusted[i] = base_scores[i] + gamma * steps[i];
    return threshold(make_calibration_table(std::move(adjusted), epsilon)).value;
}

void write_predictions(std::ostream& out, const std::vector<PredictionOutput>& outputs) {
    const bool classification =
        !outputs.empty() && std::holds_alternative<LabelSet>(outputs.front());
    out << (classification ? "row,labels\n" : "row,lo,hi\n");
    char buf[64];
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        out << i;
        if (const auto* set = std::get_if<LabelSet>(&outputs[i])) {
            out << ',';
            for (std::size_t j = 0; j < set->size(); ++j) out << (j ? ";" : "") << (*set)[j];
        } else {
            const auto& iv = std::get<Interval>(outputs[i]);
            std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", iv.lo, iv.hi);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace ifacm
