#include "ifacm/linmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ifacm/errors.hpp"

namespace ifacm {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double linear(std::span<const double> beta, std::span<const double> x) {
    double eta = beta[0];
    for (std::size_t j = 0; j < x.size(); ++j) eta += beta[j + 1] * x[j];
    return eta;
}

void check_dims(const LabeledBinarySet& data, const std::vector<double>& beta) {
    if (beta.size() != data.objects.cols() + 1)
        throw DataError("coefficient length does not match feature count");
    if (data.size() != data.objects.rows())
        throw DataError("outcome count does not match object count");
}

double penalized_loglik(const LabeledBinarySet& data, const std::vector<double>& beta,
                        double ridge) {
    double ll = binomial_loglik(data, beta);
    double pen = 0.0;
    for (std::size_t j = 1; j < beta.size(); ++j) pen += beta[j] * beta[j];
    return ll - 0.5 * ridge * pen;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> read_coefficients(std::istream& in, std::size_t count,
                                      const char* kind) {
    std::vector<double> out(count);
    for (auto& v : out) {
        if (!(in >> v)) throw DataError(std::string("truncated ") + kind + " model");
    }
    return out;
}

}  // namespace

OlsModel fit_ols(const Matrix& x, const std::vector<double>& y) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols() + 1;
    if (y.size() != n) throw DataError("fit_ols: response length mismatch");
    if (n < p)
        throw DataError("fit_ols: underdetermined system, need at least " + std::to_string(p) +
                        " rows for " + std::to_string(x.cols()) + " features");

    Matrix gram(p, p);
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x.row(i);
        // design row is (1, x)
        for (std::size_t a = 0; a < p; ++a) {
            const double va = a == 0 ? 1.0 : row[a - 1];
            xty[a] += va * y[i];
            for (std::size_t b = a; b < p; ++b) {
                const double vb = b == 0 ? 1.0 : row[b - 1];
                gram(a, b) += va * vb;
            }
        }
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);

    return {solve_spd_ridged(gram, xty)};
}

double predict_ols(const OlsModel& model, std::span<const double> x) {
    if (model.coefficients.size() != x.size() + 1)
        throw DataError("predict_ols: object length does not match model");
    return linear(model.coefficients, x);
}

std::vector<double> logit_gradient(const LabeledBinarySet& data, const std::vector<double>& beta,
                                   double ridge) {
    check_dims(data, beta);
    std::vector<double> g(beta.size(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.objects.row(i);
        const double r = data.outcomes[i] - sigmoid(linear(beta, row));
        g[0] += r;
        for (std::size_t j = 0; j < row.size(); ++j) g[j + 1] += r * row[j];
    }
    for (std::size_t j = 1; j < beta.size(); ++j) g[j] -= ridge * beta[j];
    return g;
}

LogitModel fit_logit(const LabeledBinarySet& data, const FitOptions& opts) {
    if (data.size() == 0) throw DataError("fit_logit: empty data");
    const bool all_same =
        std::all_of(data.outcomes.begin(), data.outcomes.end(),
                    [&](int c) { return c == data.outcomes.front(); });
    if (all_same && opts.ridge == 0.0)
        throw DataError("fit_logit: all outcomes identical (complete separation); "
                        "refit with ridge > 0");

    const std::size_t p = data.objects.cols() + 1;
    std::vector<double> beta(p, 0.0);
    std::vector<double> best = beta;
    double best_ll = penalized_loglik(data, beta, opts.ridge);
    bool converged = false;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        const auto g = logit_gradient(data, beta, opts.ridge);
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < opts.tol) {
            converged = true;
            break;
        }

        Matrix hess(p, p);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto row = data.objects.row(i);
            const double pr = sigmoid(linear(beta, row));
            const double w = pr * (1.0 - pr);
            for (std::size_t a = 0; a < p; ++a) {
                const double va = a == 0 ? 1.0 : row[a - 1];
                for (std::size_t b = a; b < p; ++b) {
                    const double vb = b == 0 ? 1.0 : row[b - 1];
                    hess(a, b) += w * va * vb;
                }
            }
        }
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < a; ++b) hess(a, b) = hess(b, a);
            if (a > 0) hess(a, a) += opts.ridge;
        }

        const auto step = solve_spd_ridged(hess, g);
        const double cur = penalized_loglik(data, beta, opts.ridge);
        double scale = 1.0;
        std::vector<double> cand(p);
        bool improved = false;
        for (int half = 0; half < 40; ++half) {
            for (std::size_t j = 0; j < p; ++j) cand[j] = beta[j] + scale * step[j];
            if (penalized_loglik(data, cand, opts.ridge) > cur) {
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;  // flat within line-search resolution
        beta = cand;
        const double ll = penalized_loglik(data, beta, opts.ridge);
        if (ll > best_ll) {
            best_ll = ll;
            best = beta;
        }
    }

    // report convergence against the best iterate actually returned
    if (!converged) {
        const auto g = logit_gradient(data, best, opts.ridge);
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        converged = gmax < opts.tol;
    }
    return {std::move(best), opts.ridge, converged};
}

double predict_logit_prob(const LogitModel& model, std::span<const double> x) {
    if (model.coefficients.size() != x.size() + 1)
        throw DataError("predict_logit_prob: object length does not match model");
    return clamp_prob(sigmoid(linear(model.coefficients, x)));
}

double binomial_loglik(const LabeledBinarySet& data, const std::vector<double>& beta) {
    check_dims(data, beta);
    double ll = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = clamp_prob(sigmoid(linear(beta, data.objects.row(i))));
        ll += std::log(data.outcomes[i] == 1 ? p : 1.0 - p);
    }
    return ll;
}

double mean_cond_logodds(const LabeledBinarySet& data, const std::vector<double>& beta) {
    if (data.size() == 0) throw DataError("mean_cond_logodds: empty data");
    check_dims(data, beta);
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = clamp_prob(sigmoid(linear(beta, data.objects.row(i))));
        const double pc = data.outcomes[i] == 1 ? p : 1.0 - p;
        sum += std::log(pc / (1.0 - pc));
    }
    return sum / static_cast<double>(data.size());
}

namespace {

// multinomial log-likelihood with ridge on non-intercept, non-pinned rows
double softmax_loglik(const Matrix& x, const std::vector<int>& labels,
                      const std::vector<std::vector<double>>& beta, double ridge) {
    const std::size_t k = beta.size();
    double ll = 0.0;
    std::vector<double> eta(k);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        double emax = -1e300;
        for (std::size_t y = 0; y < k; ++y) {
            eta[y] = linear(beta[y], row);
            emax = std::max(emax, eta[y]);
        }
        double z = 0.0;
        for (std::size_t y = 0; y < k; ++y) z += std::exp(eta[y] - emax);
        ll += eta[static_cast<std::size_t>(labels[i])] - emax - std::log(z);
    }
    double pen = 0.0;
    for (std::size_t y = 0; y + 1 < k; ++y)
        for (std::size_t j = 1; j < beta[y].size(); ++j) pen += beta[y][j] * beta[y][j];
    return ll - 0.5 * ridge * pen;
}

}  // namespace

SoftmaxModel fit_softmax(const Matrix& x, const std::vector<int>& labels,
                         std::size_t label_count, const FitOptions& opts) {
    if (labels.size() != x.rows()) throw DataError("fit_softmax: label length mismatch");
    if (label_count < 2) throw DataError("fit_softmax: need at least two labels");
    std::vector<bool> present(label_count, false);
    for (int c : labels) {
        if (c < 0 || static_cast<std::size_t>(c) >= label_count)
            throw DataError("fit_softmax: label id out of range");
        present[static_cast<std::size_t>(c)] = true;
    }
    if (std::count(present.begin(), present.end(), true) < 2)
        throw DataError("fit_softmax: only one label present");

    const std::size_t p = x.cols() + 1;
    const std::size_t k = label_count;
    std::vector<std::vector<double>> beta(k, std::vector<double>(p, 0.0));
    std::vector<std::vector<double>> best = beta;
    double best_ll = softmax_loglik(x, labels, beta, opts.ridge);
    double step0 = 1.0 / static_cast<double>(x.rows());

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // gradient over the k-1 free label blocks
        std::vector<std::vector<double>> grad(k - 1, std::vector<double>(p, 0.0));
        std::vector<double> eta(k), prob(k);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const auto row = x.row(i);
            double emax = -1e300;
            for (std::size_t y = 0; y < k; ++y) {
                eta[y] = linear(beta[y], row);
                emax = std::max(emax, eta[y]);
            }
            double z = 0.0;
            for (std::size_t y = 0; y < k; ++y) {
                prob[y] = std::exp(eta[y] - emax);
                z += prob[y];
            }
            for (std::size_t y = 0; y + 1 < k; ++y) {
                const double r = (labels[i] == static_cast<int>(y) ? 1.0 : 0.0) - prob[y] / z;
                grad[y][0] += r;
                for (std::size_t j = 0; j < row.size(); ++j) grad[y][j + 1] += r * row[j];
            }
        }
        double gmax = 0.0;
        for (std::size_t y = 0; y + 1 < k; ++y) {
            for (std::size_t j = 1; j < p; ++j) grad[y][j] -= opts.ridge * beta[y][j];
            for (double v : grad[y]) gmax = std::max(gmax, std::abs(v));
        }
        if (gmax < opts.tol) break;

        const double cur = softmax_loglik(x, labels, beta, opts.ridge);
        double scale = step0 * 4.0;  // optimistic start, backtracks below
        bool improved = false;
        std::vector<std::vector<double>> cand = beta;
        for (int half = 0; half < 50; ++half) {
            for (std::size_t y = 0; y + 1 < k; ++y)
                for (std::size_t j = 0; j < p; ++j) cand[y][j] = beta[y][j] + scale * grad[y][j];
            if (softmax_loglik(x, labels, cand, opts.ridge) > cur) {
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;
        step0 = scale;
        beta = cand;
        const double ll = softmax_loglik(x, labels, beta, opts.ridge);
        if (ll > best_ll) {
            best_ll = ll;
            best = beta;
        }
    }
    return {std::move(best)};
}

double score_softmax(const SoftmaxModel& model, std::span<const double> x, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= model.coefficients.size())
        throw DataError("score_softmax: label out of range");
    const auto& beta = model.coefficients[static_cast<std::size_t>(label)];
    if (beta.size() != x.size() + 1)
        throw DataError("score_softmax: object length does not match model");
    return linear(beta, x);
}

void write_ols(std::ostream& out, const OlsModel& model) {
    out << "ols " << model.coefficients.size() - 1 << '\n';
    for (double c : model.coefficients) out << fmt_double(c) << '\n';
}

OlsModel read_ols(std::istream& in) {
    std::string kind;
    std::size_t m = 0;
    if (!(in >> kind >> m) || kind != "ols") throw DataError("expected 'ols <m>' header");
    return {read_coefficients(in, m + 1, "ols")};
}

void write_logit(std::ostream& out, const LogitModel& model) {
    out << "logit " << model.coefficients.size() - 1 << ' ' << fmt_double(model.ridge) << ' '
        << (model.converged ? 1 : 0) << '\n';
    for (double c : model.coefficients) out << fmt_double(c) << '\n';
}

LogitModel read_logit(std::istream& in) {
    std::string kind;
    std::size_t m = 0;
    double ridge = 0.0;
    int converged = 1;
    if (!(in >> kind >> m >> ridge >> converged) || kind != "logit")
        throw DataError("expected 'logit <m> <ridge> <converged>' header");
    return {read_coefficients(in, m + 1, "logit"), ridge, converged != 0};
}

void write_softmax(std::ostream& out, const SoftmaxModel& model) {
    out << "softmax " << model.coefficients.front().size() - 1 << ' ' << model.coefficients.size()
        << '\n';
    for (const auto& beta : model.coefficients)
        for (double c : beta) out << fmt_double(c) << '\n';
}

SoftmaxModel read_softmax(std::istream& in) {
    std::string kind;
    std::size_t m = 0, k = 0;
    if (!(in >> kind >> m >> k) || kind != "softmax")
        throw DataError("expected 'softmax <m> <labels>' header");
    SoftmaxModel model;
    for (std::size_t y = 0; y < k; ++y)
        model.coefficients.push_back(read_coefficients(in, m + 1, "softmax"));
    return model;
}

}  // namespace ifacm
