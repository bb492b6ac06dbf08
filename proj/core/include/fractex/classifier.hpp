#pragma once

#include <fractex/best_basis.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fractex {

/// Gaussian naive Bayes model: per-class priors plus per-feature
/// mean/variance. Classes are kept sorted by name so ties and reports
/// are deterministic.
struct GaussianClassModel {
    std::vector<std::string> classes;
    std::vector<double> priors;                 // k, sums to 1
    std::vector<std::vector<double>> means;     // k x n
    std::vector<std::vector<double>> variances; // k x n, floored > 0
    std::vector<std::string> feature_names;     // n
};

struct Prediction {
    std::string label;
    std::vector<double> posteriors; // parallel to model.classes, sums to 1
};

struct ClassificationReport {
    std::vector<std::string> classes;
    std::vector<std::vector<int64_t>> confusion; // rows true, columns predicted
    std::vector<double> per_class_accuracy;
    double overall_accuracy = 0.0;
    int64_t n_samples = 0;
};

/// Fits priors from class counts and per-class per-feature sample mean
/// and unbiased variance, floored at max(1e-9, 1e-9 * global feature
/// variance). Requires >= 2 classes, >= 2 samples per class and uniform
/// vector length.
GaussianClassModel fit_nbc(std::span<const FeatureVector> features);

/// Log-domain scoring (log prior + sum of per-feature log densities)
/// with log-sum-exp normalization for the posterior vector. Argmax ties
/// break by class-name order.
Prediction predict_nbc(const GaussianClassModel& model, std::span<const double> values);

/// Leave-one-out cross-validation: each sample predicted by a model fit
/// on the others; confusion rows are true classes in sorted order.
ClassificationReport loocv(std::span<const FeatureVector> features);

/// Key/value strings echoed into the serialized report so a result file
/// names the configuration that produced it.
using ConfigEcho = std::map<std::string, std::string>;

/// JSON document: confusion matrix, per-class accuracy, overall accuracy
/// and the config echo.
std::string report_to_json(const ClassificationReport& report, const ConfigEcho& config);

/// Fixed-width text table of per-class accuracies plus total accuracy.
std::string report_to_text(const ClassificationReport& report);

/// Throws if the report's internal arithmetic does not hold (confusion
/// sums, accuracy ratios).
void validate_report(const ClassificationReport& report);

} // namespace fractex
