#pragma once

#include <iosfwd>
#include <limits>
#include <variant>
#include <vector>

#include "ifacm/conformity.hpp"
#include "ifacm/dataset.hpp"

namespace ifacm {

struct CalibrationTable {
    std::vector<double> scores;  // sorted ascending
    double epsilon = 0.0;
};

// The prediction-set cutoff. value is -infinity exactly when the
// calibration set is too small for the significance level, in which case
// every candidate is admitted.
struct Threshold {
    double value = -std::numeric_limits<double>::infinity();

    bool finite() const { return value != -std::numeric_limits<double>::infinity(); }
};

using LabelSet = std::vector<int>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool full() const { return lo == -std::numeric_limits<double>::infinity(); }
    bool contains(double y) const { return lo <= y && y <= hi; }
};

using PredictionOutput = std::variant<LabelSet, Interval>;

CalibrationTable make_calibration_table(std::vector<double> scores, double epsilon);
CalibrationTable calibrate(const ConformityMeasure& cm, const Dataset& cal, double epsilon);

// Membership rule: a candidate is in the prediction set iff
// #(calibration scores <= candidate score) + 1 > epsilon * (n + 1).
// The returned cutoff satisfies: member <=> score >= threshold. The
// counting rule is normative; this closed form is checked against it by
// the property suite.
Threshold threshold(const CalibrationTable& table);

// Smallest calibration size for which the threshold is finite at epsilon.
std::size_t minimal_calibration_size(double epsilon);

LabelSet predict_classification(const ConformityMeasure& cm, const CalibrationTable& table,
                                std::span<const double> x, std::size_t label_space);

// Analytic interval from the log-form score: half-width sigma-hat' * exp(-t).
Interval predict_interval(const ConformityMeasure& cm, const CalibrationTable& table,
                          std::span<const double> x);

std::vector<PredictionOutput> predict_all(const ConformityMeasure& cm,
                                          const CalibrationTable& table, const Dataset& eval);

// Per-example indicator of the true label being inside the prediction output.
std::vector<int> correctness_flags(const ConformityMeasure& cm, const CalibrationTable& table,
                                   const Dataset& eval);

// Threshold of the adjusted scores base_i + gamma * step_i under the same
// counting rule; property-suite entry point.
double threshold_gamma(const std::vector<double>& base_scores, const std::vector<int>& steps,
                       double gamma, double epsilon);

// Prediction CSV: classification rows carry a semicolon-joined label list,
// regression rows carry lo/hi bounds.
void write_predictions(std::ostream& out, const std::vector<PredictionOutput>& outputs);

}  // namespace ifacm
