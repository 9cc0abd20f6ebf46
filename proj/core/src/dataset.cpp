#include "ifacm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ifacm/errors.hpp"
#include "ifacm/rng.hpp"

namespace ifacm {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct Sidecar {
    std::optional<Task> task;
    std::vector<std::string> class_names;
    std::optional<std::vector<FeatureStats>> standardization;
};

std::optional<Sidecar> read_sidecar(const std::string& csv_path) {
    std::ifstream in(csv_path + ".meta");
    if (!in) return std::nullopt;
    Sidecar sc;
    std::map<std::size_t, FeatureStats> stats;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "task") {
            sc.task = (val == "classification") ? Task::Classification : Task::Regression;
        } else if (key == "labels") {
            for (auto& name : split_line(val, ';'))
                if (!name.empty()) sc.class_names.push_back(name);
        } else if (key.rfind("mean.", 0) == 0 || key.rfind("stddev.", 0) == 0) {
            const bool is_mean = key[0] == 'm';
            const std::size_t idx = std::strtoull(key.c_str() + (is_mean ? 5 : 7), nullptr, 10);
            double v = 0.0;
            if (!parse_double(val, v)) throw DataError("sidecar: bad number in " + key);
            if (is_mean) stats[idx].mean = v; else stats[idx].stddev = v;
        }
    }
    if (!stats.empty()) {
        std::vector<FeatureStats> vec(stats.rbegin()->first + 1);
        for (const auto& [i, st] : stats) vec[i] = st;
        sc.standardization = std::move(vec);
    }
    return sc;
}

}  // namespace

Example Dataset::example(std::size_t i) const {
    Example e;
    const auto r = objects.row(i);
    e.object.assign(r.begin(), r.end());
    if (task == Task::Classification) e.label = classes[i];
    else e.label = reals[i];
    return e;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    std::string header;
    if (!std::getline(in, header) || header.empty())
        throw DataError("empty input: " + path);

    const auto columns = split_line(header, ',');
    const auto find_col = [&](const std::string& name) {
        const auto it = std::find(columns.begin(), columns.end(), name);
        return it == columns.end() ? columns.size()
                                   : static_cast<std::size_t>(it - columns.begin());
    };

    const std::size_t label_idx = find_col(schema.label_column);
    if (label_idx == columns.size())
        throw DataError("schema: missing label column '" + schema.label_column + "' in " + path);

    std::vector<bool> categorical(columns.size(), false);
    for (const auto& name : schema.categorical_columns) {
        const std::size_t idx = find_col(name);
        if (idx == columns.size())
            throw DataError("schema: missing categorical column '" + name + "' in " + path);
        categorical[idx] = true;
    }

    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_line(line, ',');
        if (cells.size() != columns.size())
            throw DataError("row " + std::to_string(lineno) + " in " + path + ": expected " +
                            std::to_string(columns.size()) + " cells, got " +
                            std::to_string(cells.size()));
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw DataError("empty input: no data rows in " + path);

    const auto sidecar = read_sidecar(path);

    // task resolution: schema > sidecar > inference from the label column
    Task task;
    if (schema.task) {
        task = *schema.task;
    } else if (sidecar && sidecar->task) {
        task = *sidecar->task;
    } else {
        bool numeric = true;
        for (const auto& r : rows) {
            double v;
            if (!parse_double(r[label_idx], v)) { numeric = false; break; }
        }
        task = numeric ? Task::Regression : Task::Classification;
    }

    Dataset out;
    out.task = task;
    out.label_name = schema.label_column;

    // label mapping, seeded from the sidecar so ids survive a round trip
    std::map<std::string, int> label_ids;
    if (sidecar) {
        for (const auto& name : sidecar->class_names) {
            label_ids.emplace(name, static_cast<int>(out.class_names.size()));
            out.class_names.push_back(name);
        }
    }

    // per categorical column: category list in first-appearance order
    std::vector<std::vector<std::string>> categories(columns.size());
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (!categorical[j] || j == label_idx) continue;
            auto& cats = categories[j];
            if (std::find(cats.begin(), cats.end(), r[j]) == cats.end()) cats.push_back(r[j]);
        }
    }

    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j == label_idx) continue;
        if (categorical[j]) {
            for (std::size_t c = 1; c < categories[j].size(); ++c)
                out.feature_names.push_back(columns[j] + "=" + categories[j][c]);
        } else {
            out.feature_names.push_back(columns[j]);
        }
    }

    const std::size_t n = rows.size();
    const std::size_t m = out.feature_names.size();
    out.objects = Matrix(n, m);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        std::size_t f = 0;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j == label_idx) continue;
            if (categorical[j]) {
                for (std::size_t c = 1; c < categories[j].size(); ++c)
                    out.objects(i, f++) = (r[j] == categories[j][c]) ? 1.0 : 0.0;
            } else {
                double v;
                if (!parse_double(r[j], v))
                    throw DataError("parse error at row " + std::to_string(i + 2) + ", column '" +
                                    columns[j] + "' in " + path + ": '" + r[j] + "'");
                out.objects(i, f++) = v;
            }
        }
        if (task == Task::Regression) {
            double v;
            if (!parse_double(r[label_idx], v))
                throw DataError("parse error at row " + std::to_string(i + 2) + ", column '" +
                                schema.label_column + "' in " + path + ": '" + r[label_idx] + "'");
            out.reals.push_back(v);
        } else {
            auto [it, inserted] =
                label_ids.emplace(r[label_idx], static_cast<int>(out.class_names.size()));
            if (inserted) out.class_names.push_back(r[label_idx]);
            out.classes.push_back(it->second);
        }
    }

    if (sidecar && sidecar->standardization) {
        if (sidecar->standardization->size() != m)
            throw DataError("sidecar: standardization entry count does not match features");
        out.standardization = sidecar->standardization;
    }
    return out;
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);

    for (const auto& name : data.feature_names) out << name << ',';
    out << data.label_name << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.objects.row(i);
        for (double v : row) out << fmt_double(v) << ',';
        if (data.task == Task::Regression) out << fmt_double(data.reals[i]);
        else out << data.class_names[static_cast<std::size_t>(data.classes[i])];
        out << '\n';
    }

    std::ofstream meta(path + ".meta");
    if (!meta) throw DataError("cannot write " + path + ".meta");
    meta << "# dataset sidecar: task, label mapping, standardization stats\n";
    meta << "task=" << (data.task == Task::Classification ? "classification" : "regression")
         << '\n';
    meta << "features=" << data.feature_count() << '\n';
    if (data.task == Task::Classification) {
        meta << "labels=";
        for (std::size_t i = 0; i < data.class_names.size(); ++i)
            meta << (i ? ";" : "") << data.class_names[i];
        meta << '\n';
    }
    if (data.standardization) {
        for (std::size_t j = 0; j < data.standardization->size(); ++j) {
            meta << "mean." << j << '=' << fmt_double((*data.standardization)[j].mean) << '\n';
            meta << "stddev." << j << '=' << fmt_double((*data.standardization)[j].stddev) << '\n';
        }
    }
}

Dataset standardize(const Dataset& data, const std::vector<std::size_t>& fit_on) {
    if (fit_on.empty()) throw DataError("standardize: empty fit set");
    const std::size_t m = data.feature_count();
    std::vector<FeatureStats> stats(m);
    for (std::size_t j = 0; j < m; ++j) {
        double mean = 0.0;
        for (std::size_t i : fit_on) mean += data.objects(i, j);
        mean /= static_cast<double>(fit_on.size());
        double ss = 0.0;
        for (std::size_t i : fit_on) {
            const double d = data.objects(i, j) - mean;
            ss += d * d;
        }
        const double sd =
            fit_on.size() > 1 ? std::sqrt(ss / static_cast<double>(fit_on.size() - 1)) : 0.0;
        stats[j] = {mean, sd};
    }
    return apply_standardization(data, stats);
}

Dataset apply_standardization(const Dataset& data, const std::vector<FeatureStats>& stats) {
    if (stats.size() != data.feature_count())
        throw DataError("standardization stats do not match feature count");
    Dataset out = data;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.feature_count(); ++j) {
            const auto& st = stats[j];
            out.objects(i, j) =
                st.stddev > 0.0 ? (data.objects(i, j) - st.mean) / st.stddev : 0.0;
        }
    }
    out.standardization = stats;
    return out;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.task = data.task;
    out.class_names = data.class_names;
    out.feature_names = data.feature_names;
    out.label_name = data.label_name;
    out.standardization = data.standardization;
    out.objects = Matrix(rows.size(), data.feature_count());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = data.objects.row(rows[i]);
        std::copy(src.begin(), src.end(), out.objects.row(i).begin());
        if (data.task == Task::Regression) out.reals.push_back(data.reals[rows[i]]);
        else out.classes.push_back(data.classes[rows[i]]);
    }
    return out;
}

SplitResult split(const Dataset& data, const SplitSpec& spec) {
    const std::size_t total = spec.train_count + spec.cal_count + spec.test_count;
    if (total > data.size())
        throw ConfigError("split: requested " + std::to_string(total) + " rows but dataset has " +
                          std::to_string(data.size()));

    std::vector<std::size_t> idx(data.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (spec.shuffle) {
        Rng rng(spec.seed);
        rng.shuffle(idx);
    }

    const auto take = [&](std::size_t from, std::size_t count) {
        return std::vector<std::size_t>(idx.begin() + static_cast<std::ptrdiff_t>(from),
                                        idx.begin() + static_cast<std::ptrdiff_t>(from + count));
    };
    return {subset(data, take(0, spec.train_count)),
            subset(data, take(spec.train_count, spec.cal_count)),
            subset(data, take(spec.train_count + spec.cal_count, spec.test_count))};
}

Dataset gen_example2(std::size_t n, double epsilon, std::uint64_t seed) {
    if (n < 1) throw ConfigError("gen_example2: n must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("gen_example2: significance must be in (0,1)");
    Rng rng(seed);
    Dataset out;
    out.task = Task::Regression;
    out.feature_names = {"x"};
    out.objects = Matrix(n, 1);
    out.reals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.below(2) == 0 ? 1.0 : 2.0;
        out.objects(i, 0) = x;
        out.reals.push_back(rng.uniform(0.0, x));
    }
    return out;
}

Dataset gen_heteroscedastic(std::size_t n, std::size_t m, NoiseLaw law, std::uint64_t seed) {
    if (n < 1) throw ConfigError("gen_heteroscedastic: n must be >= 1");
    if (m < 1) throw ConfigError("gen_heteroscedastic: m must be >= 1");

    constexpr double base_scale = 0.3;
    constexpr double step = 0.6;

    Rng rng(seed);
    Dataset out;
    out.task = Task::Regression;
    out.objects = Matrix(n, m);
    for (std::size_t j = 0; j < m; ++j) out.feature_names.push_back("x" + std::to_string(j));
    out.reals.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double group = rng.below(2) == 0 ? 0.0 : 1.0;
        out.objects(i, 0) = group;
        double signal = group;
        for (std::size_t j = 1; j < m; ++j) {
            const double v = rng.normal();
            out.objects(i, j) = v;
            signal += v;
        }
        double scale = base_scale;
        double noise = rng.normal();
        switch (law) {
            case NoiseLaw::Constant:
                break;
            case NoiseLaw::Step:
                scale = base_scale * (1.0 + step * group);
                break;
            case NoiseLaw::Shape:
                scale = base_scale * (1.0 + step * group);
                if (group > 0.5) noise = rng.uniform(-std::numbers::sqrt3, std::numbers::sqrt3);
                break;
        }
        out.reals.push_back(signal + scale * noise);
    }
    return out;
}

}  // namespace ifacm
