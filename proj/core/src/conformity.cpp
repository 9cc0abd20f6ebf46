#include "ifacm/conformity.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "ifacm/errors.hpp"

namespace ifacm {

int update_step(const AdjustmentLayer& layer, std::span<const double> x) {
    const double p = predict_logit_prob(layer.estimator, x);
    if (p < layer.confidence - layer.delta) return 1;
    if (p > layer.confidence + layer.delta) return -1;
    return 0;
}

double adjustment_sum(const ConformityMeasure& cm, std::span<const double> x) {
    double s = 0.0;
    for (const auto& layer : cm.layers) s += layer.gamma * update_step(layer, x);
    return s;
}

double log_sigma(const ConformityMeasure& cm, std::span<const double> x) {
    double base = 0.0;
    if (const auto* ncm = std::get_if<NormalizedCm>(&cm.base)) {
        base = predict_ols(ncm->log_scale, x);
    } else if (!std::holds_alternative<StandardCm>(cm.base)) {
        throw DataError("log_sigma: not a regression measure");
    }
    return base + adjustment_sum(cm, x);
}

double score(const ConformityMeasure& cm, std::span<const double> x, double y) {
    const OlsModel* point = nullptr;
    if (const auto* scm = std::get_if<StandardCm>(&cm.base)) point = &scm->point;
    else if (const auto* ncm = std::get_if<NormalizedCm>(&cm.base)) point = &ncm->point;
    else throw DataError("score: real label passed to a classification measure");

    const double resid = std::max(std::abs(y - predict_ols(*point, x)), kResidualClamp);
    return log_sigma(cm, x) - std::log(resid);
}

double score(const ConformityMeasure& cm, std::span<const double> x, int label) {
    const auto* sc = std::get_if<ScoringCm>(&cm.base);
    if (!sc) throw DataError("score: class label passed to a regression measure");
    return score_softmax(sc->model, x, label) + adjustment_sum(cm, x);
}

double score(const ConformityMeasure& cm, std::span<const double> x, const Label& y) {
    if (const auto* real = std::get_if<double>(&y)) return score(cm, x, *real);
    return score(cm, x, std::get<int>(y));
}

ConformityMeasure fit_base_cm(BaseCmKind kind, const Dataset& train,
                              const FitOptions& scoring_opts) {
    ConformityMeasure cm;
    if (kind == BaseCmKind::Scoring) {
        if (train.task != Task::Classification)
            throw DataError("fit_base_cm: scoring measure needs classification data");
        cm.base = ScoringCm{
            fit_softmax(train.objects, train.classes, train.label_space(), scoring_opts)};
        return cm;
    }

    if (train.task != Task::Regression)
        throw DataError("fit_base_cm: regression measure needs regression data");
    OlsModel point = fit_ols(train.objects, train.reals);
    if (kind == BaseCmKind::Standard) {
        cm.base = StandardCm{std::move(point)};
        return cm;
    }

    std::vector<double> log_resid(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        const double r = std::abs(train.reals[i] - predict_ols(point, train.object(i)));
        log_resid[i] = std::log(std::max(r, kResidualClamp));
    }
    OlsModel scale = fit_ols(train.objects, log_resid);
    cm.base = NormalizedCm{std::move(point), std::move(scale)};
    return cm;
}

ConformityMeasure push_layer(ConformityMeasure cm, AdjustmentLayer layer) {
    if (!(layer.gamma > 0.0)) throw DataError("push_layer: gamma must be positive");
    if (layer.delta < 0.0) throw DataError("push_layer: delta must be non-negative");
    cm.layers.push_back(std::move(layer));
    return cm;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_cm(std::ostream& out, const ConformityMeasure& cm) {
    out << "cm v1\n";
    if (const auto* scm = std::get_if<StandardCm>(&cm.base)) {
        out << "base standard\n";
        write_ols(out, scm->point);
    } else if (const auto* ncm = std::get_if<NormalizedCm>(&cm.base)) {
        out << "base normalized\n";
        write_ols(out, ncm->point);
        write_ols(out, ncm->log_scale);
    } else {
        out << "base scoring\n";
        write_softmax(out, std::get<ScoringCm>(cm.base).model);
    }
    out << "layers " << cm.layers.size() << '\n';
    for (const auto& layer : cm.layers) {
        out << "layer " << fmt_double(layer.gamma) << ' ' << fmt_double(layer.delta) << ' '
            << fmt_double(layer.confidence) << '\n';
        write_logit(out, layer.estimator);
    }
}

ConformityMeasure read_cm(std::istream& in) {
    std::string tag, version;
    if (!(in >> tag >> version) || tag != "cm" || version != "v1")
        throw DataError("expected 'cm v1' header");
    std::string word, kind;
    if (!(in >> word >> kind) || word != "base") throw DataError("expected 'base <kind>'");

    ConformityMeasure cm;
    if (kind == "standard") {
        cm.base = StandardCm{read_ols(in)};
    } else if (kind == "normalized") {
        OlsModel point = read_ols(in);
        OlsModel scale = read_ols(in);
        cm.base = NormalizedCm{std::move(point), std::move(scale)};
    } else if (kind == "scoring") {
        cm.base = ScoringCm{read_softmax(in)};
    } else {
        throw DataError("unknown base kind '" + kind + "'");
    }

    std::size_t count = 0;
    if (!(in >> word >> count) || word != "layers") throw DataError("expected 'layers <n>'");
    for (std::size_t i = 0; i < count; ++i) {
        AdjustmentLayer layer;
        if (!(in >> word >> layer.gamma >> layer.delta >> layer.confidence) || word != "layer")
            throw DataError("expected 'layer <gamma> <delta> <confidence>'");
        layer.estimator = read_logit(in);
        cm.layers.push_back(std::move(layer));
    }
    return cm;
}

}  // namespace ifacm
