#include <fractex/classifier.hpp>

#include <fractex/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

namespace fractex {

namespace {

constexpr double kVarianceFloorAbs = 1e-9;
constexpr double kVarianceFloorRel = 1e-9;

std::vector<std::string> sorted_classes(std::span<const FeatureVector> features) {
    std::set<std::string> names;
    for (const FeatureVector& fv : features) {
        names.insert(fv.label);
    }
    return {names.begin(), names.end()};
}

size_t class_index(const std::vector<std::string>& classes, const std::string& label) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) {
        throw Error("unknown class label: " + label);
    }
    return static_cast<size_t>(it - classes.begin());
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * fraction);
    return buf;
}

} // namespace

GaussianClassModel fit_nbc(std::span<const FeatureVector> features) {
    if (features.empty()) throw PreconditionError("fit_nbc: no samples");
    const size_t n_features = features.front().values.size();
    if (n_features == 0) throw PreconditionError("fit_nbc: empty feature vectors");
    for (const FeatureVector& fv : features) {
        if (fv.values.size() != n_features) {
            throw PreconditionError("fit_nbc: inconsistent feature vector lengths");
        }
        for (double v : fv.values) {
            if (!std::isfinite(v)) {
                throw PreconditionError("fit_nbc: non-finite feature value");
            }
        }
    }

    GaussianClassModel model;
    model.classes = sorted_classes(features);
    if (model.classes.size() < 2) {
        throw PreconditionError("fit_nbc: need at least 2 classes");
    }
    model.feature_names = features.front().names;

    const size_t k = model.classes.size();
    std::vector<int64_t> counts(k, 0);
    for (const FeatureVector& fv : features) {
        counts[class_index(model.classes, fv.label)] += 1;
    }
    for (size_t c = 0; c < k; ++c) {
        if (counts[c] < 2) {
            throw PreconditionError("fit_nbc: class '" + model.classes[c] +
                                    "' has fewer than 2 samples");
        }
    }

    // Global per-feature variance sets the relative part of the floor.
    std::vector<double> global_mean(n_features, 0.0);
    for (const FeatureVector& fv : features) {
        for (size_t j = 0; j < n_features; ++j) global_mean[j] += fv.values[j];
    }
    const double n_total = static_cast<double>(features.size());
    for (double& m : global_mean) m /= n_total;
    std::vector<double> global_var(n_features, 0.0);
    for (const FeatureVector& fv : features) {
        for (size_t j = 0; j < n_features; ++j) {
            const double d = fv.values[j] - global_mean[j];
            global_var[j] += d * d;
        }
    }
    for (double& v : global_var) v /= (n_total - 1.0);

    model.priors.resize(k);
    model.means.assign(k, std::vector<double>(n_features, 0.0));
    model.variances.assign(k, std::vector<double>(n_features, 0.0));
    for (const FeatureVector& fv : features) {
        const size_t c = class_index(model.classes, fv.label);
        for (size_t j = 0; j < n_features; ++j) {
            model.means[c][j] += fv.values[j];
        }
    }
    for (size_t c = 0; c < k; ++c) {
        model.priors[c] = static_cast<double>(counts[c]) / n_total;
        for (double& m : model.means[c]) m /= static_cast<double>(counts[c]);
    }
    for (const FeatureVector& fv : features) {
        const size_t c = class_index(model.classes, fv.label);
        for (size_t j = 0; j < n_features; ++j) {
            const double d = fv.values[j] - model.means[c][j];
            model.variances[c][j] += d * d;
        }
    }
    for (size_t c = 0; c < k; ++c) {
        for (size_t j = 0; j < n_features; ++j) {
            double v = model.variances[c][j] / static_cast<double>(counts[c] - 1);
            const double floor = std::max(kVarianceFloorAbs, kVarianceFloorRel * global_var[j]);
            model.variances[c][j] = std::max(v, floor);
        }
    }
    return model;
}

Prediction predict_nbc(const GaussianClassModel& model, std::span<const double> values) {
    const size_t k = model.classes.size();
    const size_t n = model.means.empty() ? 0 : model.means.front().size();
    if (values.size() != n) {
        throw PreconditionError("predict_nbc: expected " + std::to_string(n) +
                                " features, got " + std::to_string(values.size()));
    }

    std::vector<double> log_scores(k);
    for (size_t c = 0; c < k; ++c) {
        double s = std::log(model.priors[c]);
        for (size_t j = 0; j < n; ++j) {
            const double var = model.variances[c][j];
            const double d = values[j] - model.means[c][j];
            s += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
        }
        log_scores[c] = s;
    }

    const double mx = *std::max_element(log_scores.begin(), log_scores.end());
    double denom = 0.0;
    for (double s : log_scores) denom += std::exp(s - mx);
    const double log_denom = mx + std::log(denom);

    Prediction pred;
    pred.posteriors.resize(k);
    size_t best = 0;
    for (size_t c = 0; c < k; ++c) {
        pred.posteriors[c] = std::exp(log_scores[c] - log_denom);
        if (log_scores[c] > log_scores[best]) best = c;
    }
    pred.label = model.classes[best];
    return pred;
}

ClassificationReport loocv(std::span<const FeatureVector> features) {
    if (features.size() < 2) throw PreconditionError("loocv: need at least 2 samples");
    ClassificationReport report;
    report.classes = sorted_classes(features);
    const size_t k = report.classes.size();
    report.confusion.assign(k, std::vector<int64_t>(k, 0));
    report.n_samples = static_cast<int64_t>(features.size());

    std::vector<FeatureVector> train;
    train.reserve(features.size() - 1);
    for (size_t i = 0; i < features.size(); ++i) {
        train.clear();
        for (size_t j = 0; j < features.size(); ++j) {
            if (j != i) train.push_back(features[j]);
        }
        const GaussianClassModel model = fit_nbc(train);
        const Prediction pred = predict_nbc(model, features[i].values);
        const size_t t = class_index(report.classes, features[i].label);
        const size_t p = class_index(report.classes, pred.label);
        report.confusion[t][p] += 1;
    }

    report.per_class_accuracy.resize(k);
    int64_t trace = 0;
    for (size_t c = 0; c < k; ++c) {
        int64_t row = 0;
        for (int64_t v : report.confusion[c]) row += v;
        report.per_class_accuracy[c] =
            row > 0 ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(row) : 0.0;
        trace += report.confusion[c][c];
    }
    report.overall_accuracy = static_cast<double>(trace) / static_cast<double>(report.n_samples);
    return report;
}

std::string report_to_json(const ClassificationReport& report, const ConfigEcho& config) {
    nlohmann::ordered_json j;
    j["classes"] = report.classes;
    j["confusion"] = report.confusion;
    j["per_class_accuracy"] = report.per_class_accuracy;
    j["overall_accuracy"] = report.overall_accuracy;
    j["n_samples"] = report.n_samples;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config) {
        cfg[key] = value;
    }
    j["config"] = cfg;
    return j.dump(2) + "\n";
}

std::string report_to_text(const ClassificationReport& report) {
    size_t width = std::string("Total Accuracy").size();
    for (const std::string& c : report.classes) {
        width = std::max(width, c.size());
    }
    std::string out;
    for (size_t c = 0; c < report.classes.size(); ++c) {
        std::string line = report.classes[c];
        line.resize(width, ' ');
        out += line + "  " + format_percent(report.per_class_accuracy[c]) + "\n";
    }
    std::string total = "Total Accuracy";
    total.resize(width, ' ');
    out += total + "  " + format_percent(report.overall_accuracy) + "\n";
    return out;
}

void validate_report(const ClassificationReport& report) {
    const size_t k = report.classes.size();
    if (report.confusion.size() != k || report.per_class_accuracy.size() != k) {
        throw Error("validate_report: shape mismatch");
    }
    int64_t total = 0;
    int64_t trace = 0;
    for (size_t i = 0; i < k; ++i) {
        if (report.confusion[i].size() != k) throw Error("validate_report: ragged confusion");
        int64_t row = 0;
        for (int64_t v : report.confusion[i]) {
            if (v < 0) throw Error("validate_report: negative count");
            row += v;
        }
        total += row;
        trace += report.confusion[i][i];
        const double expect =
            row > 0 ? static_cast<double>(report.confusion[i][i]) / static_cast<double>(row) : 0.0;
        if (std::abs(report.per_class_accuracy[i] - expect) > 1e-12) {
            throw Error("validate_report: per-class accuracy mismatch");
        }
    }
    if (total != report.n_samples) throw Error("validate_report: confusion sum != n_samples");
    const double overall = static_cast<double>(trace) / static_cast<double>(report.n_samples);
    if (std::abs(report.overall_accuracy - overall) > 1e-12) {
        throw Error("validate_report: overall accuracy mismatch");
    }
}

} // namespace fractex
