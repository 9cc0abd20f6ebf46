#pragma once

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "ifacm/dataset.hpp"
#include "ifacm/linmodel.hpp"

namespace ifacm {

enum class BaseCmKind { Standard, Normalized, Scoring };

// Regression score -log|y - yhat| (unit scale).
struct StandardCm {
    OlsModel point;
};

// Regression score log(sigma-hat) - log|y - yhat|, with log(sigma-hat)
// predicted by a second regression fitted on log absolute residuals.
// Rank-equivalent to the reciprocal of |y - yhat| / sigma-hat.
struct NormalizedCm {
    OlsModel point;
    OlsModel log_scale;
};

// Classification score beta_y . (1, x) from a multinomial fit.
struct ScoringCm {
    SoftmaxModel model;
};

// One accepted feedback iteration: weight, dead-band and the probability
// estimator frozen at the iteration that created the layer.
struct AdjustmentLayer {
    double gamma = 0.0;     // > 0
    double delta = 0.0;     // >= 0
    LogitModel estimator;
    double confidence = 0.0;  // 1 - epsilon the layer was tuned for
};

struct ConformityMeasure {
    std::variant<StandardCm, NormalizedCm, ScoringCm> base;
    std::vector<AdjustmentLayer> layers;

    Task task() const {
        return std::holds_alternative<ScoringCm>(base) ? Task::Classification
                                                       : Task::Regression;
    }
};

// +1 when the estimated correctness probability is below the confidence
// band, -1 above it, 0 inside (boundary equality maps to 0). Depends on
// the object only, never the label.
int update_step(const AdjustmentLayer& layer, std::span<const double> x);

// Sum of gamma_i * step_i over the layer stack.
double adjustment_sum(const ConformityMeasure& cm, std::span<const double> x);

// Regression only: log of the adjusted scale sigma-hat'.
double log_sigma(const ConformityMeasure& cm, std::span<const double> x);

double score(const ConformityMeasure& cm, std::span<const double> x, double y);
double score(const ConformityMeasure& cm, std::span<const double> x, int label);
double score(const ConformityMeasure& cm, std::span<const double> x, const Label& y);

// Fits the base models on the training split; no layers.
ConformityMeasure fit_base_cm(BaseCmKind kind, const Dataset& train,
                              const FitOptions& scoring_opts = {});

ConformityMeasure push_layer(ConformityMeasure cm, AdjustmentLayer layer);

// Plain-text stack format so a trained measure can be reloaded and applied
// in a fresh predictor.
void write_cm(std::ostream& out, const ConformityMeasure& cm);
ConformityMeasure read_cm(std::istream& in);

constexpr double kResidualClamp = 1e-12;

}  // namespace ifacm
