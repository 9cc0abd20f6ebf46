#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifacm/linalg.hpp"

namespace ifacm {

enum class Task { Classification, Regression };

// A label is either a dense class id or a real value.
using Label = std::variant<int, double>;

struct Example {
    std::vector<double> object;
    Label label;
};

struct FeatureStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample convention, divisor n-1
};

// Immutable after construction; operations return new datasets.
struct Dataset {
    Task task = Task::Regression;
    Matrix objects;                        // n x m
    std::vector<double> reals;             // regression labels
    std::vector<int> classes;              // classification label ids
    std::vector<std::string> class_names;  // id -> original text, first-appearance order
    std::vector<std::string> feature_names;
    std::string label_name = "y";
    std::optional<std::vector<FeatureStats>> standardization;

    std::size_t size() const { return objects.rows(); }
    std::size_t feature_count() const { return objects.cols(); }
    std::size_t label_space() const { return class_names.size(); }

    std::span<const double> object(std::size_t i) const { return objects.row(i); }
    Example example(std::size_t i) const;
};

struct CsvSchema {
    std::string label_column;
    std::vector<std::string> categorical_columns;
    // When absent the task is taken from the sidecar if present, otherwise
    // inferred: a label column that fully parses as numbers is regression.
    std::optional<Task> task;
};

// CSV: UTF-8, comma separated, one header row, '.' decimal point.
// Categorical feature columns are one-hot encoded with the first category
// dropped; classification labels are mapped to dense ids in
// first-appearance order. A sidecar file <path>.meta (key=value text), if
// present, restores task, label mapping and standardization stats.
Dataset load_csv(const std::string& path, const CsvSchema& schema);

// Writes <path> plus the <path>.meta sidecar.
void save_csv(const Dataset& data, const std::string& path);

struct SplitSpec {
    std::size_t train_count = 0;
    std::size_t cal_count = 0;
    std::size_t test_count = 0;
    std::uint64_t seed = 0;
    bool shuffle = false;
};

struct SplitResult {
    Dataset train, cal, test;
};

// Standardizes every feature column with mean/stddev computed on fit_on
// rows only; zero-variance columns map to all zeros.
Dataset standardize(const Dataset& data, const std::vector<std::size_t>& fit_on);

// Applies previously computed stats (e.g. the training split's) unchanged.
Dataset apply_standardization(const Dataset& data, const std::vector<FeatureStats>& stats);

SplitResult split(const Dataset& data, const SplitSpec& spec);

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows);

// Synthetic regression with one predictor X uniform on {1,2} and
// Y ~ Uniform(0, X). epsilon is kept for experiment bookkeeping and does
// not affect the distribution.
Dataset gen_example2(std::size_t n, double epsilon, std::uint64_t seed);

// Synthetic heteroscedastic regression: y = sum_j x_j + s(x) * noise with
// x0 ~ Bernoulli(1/2) and x1.. ~ N(0,1).
//   Constant: s = 0.3, gaussian noise everywhere (homoscedastic control).
//   Step:     s = 0.3 * (1 + 0.6 * x0), gaussian noise; a scale model in
//             the features can capture this fully.
//   Shape:    scale as Step, but the x0 = 1 group draws noise from
//             Uniform(-sqrt(3), sqrt(3)) (unit variance, thin tailed).
//             A log-scale regression equalizes typical residual size but
//             not the coverage quantile, so interval coverage still
//             differs by group.
enum class NoiseLaw { Constant, Step, Shape };

Dataset gen_heteroscedastic(std::size_t n, std::size_t m, NoiseLaw law, std::uint64_t seed);

}  // namespace ifacm
