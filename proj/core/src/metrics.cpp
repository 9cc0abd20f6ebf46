#include "ifacm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ifacm/errors.hpp"

namespace ifacm {

double inefficiency(const std::vector<PredictionOutput>& outputs) {
    if (outputs.empty()) throw DataError("inefficiency: empty input");
    const bool classification = std::holds_alternative<LabelSet>(outputs.front());
    double sum = 0.0;
    for (const auto& out : outputs) {
        if (const auto* set = std::get_if<LabelSet>(&out)) {
            if (!classification) throw DataError("inefficiency: mixed output kinds");
            sum += static_cast<double>(set->size());
        } else {
            if (classification) throw DataError("inefficiency: mixed output kinds");
            const auto& iv = std::get<Interval>(out);
            if (iv.full())
                throw ConfigError("inefficiency: full-line interval; the calibration set is "
                                  "too small for this significance level");
            sum += iv.width();
        }
    }
    return sum / static_cast<double>(outputs.size());
}

DcvResult dcv(const Matrix& objects, const std::vector<int>& flags, double epsilon,
              double ridge) {
    if (flags.empty() || objects.rows() != flags.size())
        throw DataError("dcv: flags must align with objects");

    LabeledBinarySet data{objects, flags};
    LogitModel est;
    try {
        est = fit_logit(data, {.ridge = ridge});
    } catch (const DataError&) {
        // constant flags with ridge 0: recover with the default ridge
        est = fit_logit(data, {.ridge = 1e-6});
    }

    const double target = 1.0 - epsilon;
    double ss = 0.0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        const double d = predict_logit_prob(est, objects.row(i)) - target;
        ss += d * d;
    }
    return {std::sqrt(ss / static_cast<double>(flags.size())), std::move(est)};
}

double objective(double dcv_val, double ineff_val, double ineff_base, double C) {
    if (ineff_val > ineff_base && C > 0.0) return dcv_val + C * (ineff_val - ineff_base);
    return dcv_val;
}

namespace {

SegmentRule make_rule(const std::string& text) {
    SegmentRule rule;
    if (const auto pos = text.find(">="); pos != std::string::npos) {
        rule.feature = text.substr(0, pos);
        rule.kind = SegmentRule::Kind::AtLeastMedian;
        if (text.substr(pos + 2) != "median")
            throw ConfigError("segment rule '" + text + "': only >=median is supported");
        return rule;
    }
    if (const auto pos = text.find('<'); pos != std::string::npos) {
        rule.feature = text.substr(0, pos);
        rule.kind = SegmentRule::Kind::BelowMedian;
        if (text.substr(pos + 1) != "median")
            throw ConfigError("segment rule '" + text + "': only <median is supported");
        return rule;
    }
    if (const auto pos = text.find('='); pos != std::string::npos) {
        rule.feature = text.substr(0, pos);
        rule.kind = SegmentRule::Kind::Equal;
        try {
            rule.value = std::stod(text.substr(pos + 1));
        } catch (const std::exception&) {
            throw ConfigError("segment rule '" + text + "': bad value");
        }
        return rule;
    }
    if (const auto pos = text.find(':'); pos != std::string::npos) {
        rule.feature = text.substr(0, pos);
        rule.kind = SegmentRule::Kind::Values;
        if (text.substr(pos + 1) != "values")
            throw ConfigError("segment rule '" + text + "': expected ':values'");
        return rule;
    }
    throw ConfigError("segment rule '" + text + "': unrecognized form");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

SegmentRule parse_segment_rule(const std::string& text) { return make_rule(trim(text)); }

std::vector<SegmentRule> parse_segment_rules(const std::string& text) {
    std::vector<SegmentRule> rules;
    std::string cur;
    for (char c : text + ";") {
        if (c == ';') {
            const std::string t = trim(cur);
            if (!t.empty()) rules.push_back(make_rule(t));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return rules;
}

std::vector<SegmentRow> segment_accuracy(const Matrix& objects, const std::vector<int>& flags,
                                         const std::vector<std::string>& feature_names,
                                         const std::vector<SegmentRule>& rules) {
    if (objects.rows() != flags.size()) throw DataError("segment_accuracy: flags misaligned");

    const auto feature_index = [&](const std::string& name) {
        const auto it = std::find(feature_names.begin(), feature_names.end(), name);
        if (it == feature_names.end())
            throw DataError("segment_accuracy: unknown feature '" + name + "'");
        return static_cast<std::size_t>(it - feature_names.begin());
    };

    std::vector<SegmentRow> rows;
    for (const auto& rule : rules) {
        const std::size_t j = feature_index(rule.feature);
        std::vector<double> column(objects.rows());
        for (std::size_t i = 0; i < objects.rows(); ++i) column[i] = objects(i, j);

        const auto emit = [&](const std::string& desc, auto&& member) {
            std::size_t n = 0, correct = 0;
            for (std::size_t i = 0; i < column.size(); ++i) {
                if (!member(column[i])) continue;
                ++n;
                correct += static_cast<std::size_t>(flags[i]);
            }
            rows.push_back({desc, n,
                            n ? static_cast<double>(correct) / static_cast<double>(n)
                              : std::numeric_limits<double>::quiet_NaN()});
        };

        switch (rule.kind) {
            case SegmentRule::Kind::Equal:
                emit(rule.feature + "=" + fmt_short(rule.value),
                     [&](double v) { return v == rule.value; });
                break;
            case SegmentRule::Kind::BelowMedian: {
                const double med = median_of(column);
                emit(rule.feature + "<median", [&](double v) { return v < med; });
                break;
            }
            case SegmentRule::Kind::AtLeastMedian: {
                const double med = median_of(column);
                emit(rule.feature + ">=median", [&](double v) { return v >= med; });
                break;
            }
            case SegmentRule::Kind::Values: {
                std::vector<double> values;
                for (double v : column)
                    if (std::find(values.begin(), values.end(), v) == values.end())
                        values.push_back(v);
                std::sort(values.begin(), values.end());
                for (double val : values)
                    emit(rule.feature + "=" + fmt_short(val),
                         [&](double v) { return v == val; });
                break;
            }
        }
    }
    return rows;
}

void write_report_csv_header(std::ostream& out) {
    out << "dataset,segment,algorithm,confidence,C,accuracy,inefficiency,dcv\n";
}

void write_report_csv_row(std::ostream& out, const std::string& dataset,
                          const std::string& segment, const std::string& algorithm,
                          double confidence, const std::string& c_label,
                          const EvaluationReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", report.accuracy, report.inefficiency,
                  report.dcv);
    out << dataset << ',' << segment << ',' << algorithm << ',' << fmt_short(confidence) << ','
        << c_label << ',' << buf << '\n';
}

void write_report_text(std::ostream& out, const std::string& heading,
                       const EvaluationReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-28s  Acc. %.4f  Ineff. %.4f  DCV %.6f  (n=%zu)\n",
                  heading.c_str(), report.accuracy, report.inefficiency, report.dcv, report.n);
    out << buf;
}

}  // namespace ifacm
