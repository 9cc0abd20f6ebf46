#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ifacm/icp.hpp"
#include "ifacm/linmodel.hpp"

namespace ifacm {

struct SegmentRow {
    std::string descriptor;  // e.g. "x0=1" or "x1<median"
    std::size_t n = 0;
    double accuracy = 0.0;   // NaN when the segment is empty
};

struct EvaluationReport {
    double accuracy = 0.0;
    double inefficiency = 0.0;
    double dcv = 0.0;
    std::size_t n = 0;
    std::vector<SegmentRow> per_segment;
};

// Mean prediction-set size: cardinality for label sets, width for
// intervals. Full-line intervals must have been rejected upstream.
double inefficiency(const std::vector<PredictionOutput>& outputs);

struct DcvResult {
    double dcv = 0.0;
    LogitModel estimator;
};

// Fits a fresh logistic estimator of the correctness flags on the objects
// and returns the root mean square gap between its fitted probabilities
// and the confidence level 1 - epsilon. When the flags are constant and
// ridge is zero, the fit is retried with the default ridge.
DcvResult dcv(const Matrix& objects, const std::vector<int>& flags, double epsilon,
              double ridge = 1e-6);

// dcv_val + C * (ineff_val - ineff_base) when inefficiency exceeded the
// base, otherwise dcv_val.
double objective(double dcv_val, double ineff_val, double ineff_base, double C);

struct SegmentRule {
    enum class Kind { Equal, BelowMedian, AtLeastMedian, Values };
    std::string feature;
    Kind kind = Kind::Values;
    double value = 0.0;  // for Equal
};

// Accepted forms: "feat=VALUE", "feat<median", "feat>=median", "feat:values"
// (one segment per distinct observed value).
SegmentRule parse_segment_rule(const std::string& text);
std::vector<SegmentRule> parse_segment_rules(const std::string& text);  // ';' separated

std::vector<SegmentRow> segment_accuracy(const Matrix& objects, const std::vector<int>& flags,
                                         const std::vector<std::string>& feature_names,
                                         const std::vector<SegmentRule>& rules);

// CSV row plus an aligned-column text block (Acc. / Ineff. / DCV order).
void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const std::string& dataset,
                          const std::string& segment, const std::string& algorithm,
                          double confidence, const std::string& c_label,
                          const EvaluationReport& report);
void write_report_text(std::ostream& out, const std::string& heading,
                       const EvaluationReport& report);

}  // namespace ifacm
