#pragma once

#include <vector>

#include "ifacm/conformity.hpp"
#include "ifacm/dataset.hpp"
#include "ifacm/metrics.hpp"

namespace ifacm {

struct MeasureResult {
    double dcv = 0.0;
    double inefficiency = 0.0;  // mean width or cardinality
    double accuracy = 0.0;
    LogitModel estimator;       // correctness model fitted on the training split
};

// Self-calibrated diagnostic pass: the training split doubles as the
// calibration set, correctness flags are computed for every training
// example, and a fresh logistic estimator of those flags yields the
// deviation from conditional validity. The returned estimator is what a
// feedback layer freezes.
MeasureResult measure_dcv(const Dataset& train, double confidence, const ConformityMeasure& cm,
                          double ridge = 1e-6);

struct IterationRecord {
    int index = 0;
    double gamma = 0.0;
    double delta = 0.0;
    double dcv_before = 0.0;
    double dcv_after = 0.0;
    double inefficiency = 0.0;
    bool accepted = false;
    int evaluations = 0;
};

struct IfacmOptions {
    int budget = 100;     // objective evaluations per iteration
    int max_iters = 25;   // safety cap on feedback iterations
    double ridge = 1e-6;  // estimator ridge inside the loop
    double tol = 1e-4;    // simplex spread tolerance
};

struct IfacmResult {
    ConformityMeasure cm;          // base plus accepted layers
    double base_dcv = 0.0;
    double base_inefficiency = 0.0;  // W0
    std::vector<IterationRecord> trace;
    bool truncated = false;        // max_iters reached while still improving

    std::size_t accepted_count() const;
};

// The feedback loop: each iteration minimizes the penalized deviation over
// (log gamma, log delta) with a layer whose estimator is frozen from the
// current accepted measure, accepts the layer when the measured deviation
// strictly improves, and stops at the first non-improving iteration.
IfacmResult run_ifacm(const Dataset& train, double confidence, double C, ConformityMeasure base,
                      const IfacmOptions& opts = {});

struct FinalReports {
    EvaluationReport train;  // self-calibrated diagnostic on the training split
    EvaluationReport test;   // proper run: calibrate on cal, evaluate on test
    LogitModel train_estimator;
    LogitModel test_estimator;
};

// Evaluates a measure as a proper predictor with an independent
// calibration split; the test-side deviation estimator is refit on test
// flags. Works for the base measure too (empty layer stack).
FinalReports evaluate_final(const ConformityMeasure& cm, const Dataset& train,
                            const Dataset& cal, const Dataset& test, double confidence,
                            const std::vector<SegmentRule>& segments, double ridge = 1e-6);

}  // namespace ifacm
