#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ifacm/linalg.hpp"

namespace ifacm {

// Coefficients are stored intercept-first throughout this module.

struct OlsModel {
    std::vector<double> coefficients;  // m+1
};

struct LogitModel {
    std::vector<double> coefficients;  // m+1
    double ridge = 0.0;
    bool converged = true;
};

struct SoftmaxModel {
    std::vector<std::vector<double>> coefficients;  // one m+1 vector per label; last pinned to 0
};

// Binary-outcome observations (x, c) with c in {0,1}.
struct LabeledBinarySet {
    Matrix objects;
    std::vector<int> outcomes;

    std::size_t size() const { return outcomes.size(); }
};

struct FitOptions {
    double ridge = 0.0;   // penalty on non-intercept coefficients
    double tol = 1e-8;    // gradient max-norm
    int max_iters = 100;
};

// Ordinary least squares via the normal equations; a tiny escalating
// diagonal ridge is applied when the Gram matrix is numerically singular.
OlsModel fit_ols(const Matrix& x, const std::vector<double>& y);
double predict_ols(const OlsModel& model, std::span<const double> x);

// Newton iterations with step halving on the penalized binomial
// log-likelihood; returns the best iterate and flags non-convergence.
LogitModel fit_logit(const LabeledBinarySet& data, const FitOptions& opts = {});

// Logistic probability clamped to [1e-12, 1 - 1e-12].
double predict_logit_prob(const LogitModel& model, std::span<const double> x);

double binomial_loglik(const LabeledBinarySet& data, const std::vector<double>& beta);

// Mean over observations of log(P(C=c|x)/(1-P(C=c|x))).
double mean_cond_logodds(const LabeledBinarySet& data, const std::vector<double>& beta);

// Gradient of the penalized binomial log-likelihood at beta.
std::vector<double> logit_gradient(const LabeledBinarySet& data, const std::vector<double>& beta,
                                   double ridge);

// Multinomial fit by gradient ascent with backtracking line search; the
// last label's coefficient vector is pinned to zero for identifiability.
SoftmaxModel fit_softmax(const Matrix& x, const std::vector<int>& labels,
                         std::size_t label_count, const FitOptions& opts = {});

double score_softmax(const SoftmaxModel& model, std::span<const double> x, int label);

// Plain-text model format: a header line naming kind and feature count,
// then one coefficient per line.
void write_ols(std::ostream& out, const OlsModel& model);
OlsModel read_ols(std::istream& in);
void write_logit(std::ostream& out, const LogitModel& model);
LogitModel read_logit(std::istream& in);
void write_softmax(std::ostream& out, const SoftmaxModel& model);
SoftmaxModel read_softmax(std::istream& in);

constexpr double kProbClamp = 1e-12;

}  // namespace ifacm
