#pragma once

#include <fractex/best_basis.hpp>
#include <fractex/classifier.hpp>
#include <fractex/dataset.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fractex {

/// The three subband-decomposition feature pipelines under comparison:
/// fractal-dimension best-basis, energy best-basis, and energy best-basis
/// with co-occurrence signatures.
enum class Method { kBbsFd, kBbsE, kBbsCm };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

struct GlcmConfig {
    int levels = 16;
    int distance = 1;
};

/// Per-image feature extraction settings shared by the extract command
/// and the benchmark harness.
struct ExtractOptions {
    Method method = Method::kBbsFd;
    int max_level = 3;
    double lambda = 0.0;
    FeatureMode mode = FeatureMode::kSelectedOnly;
    std::optional<double> noise_cutoff;
    GlcmConfig glcm;
    int fd_max_distance = 0; // 0 = auto per subband
    bool preprocess_gradient = false;
};

/// Builds the feature table for a set of records. With lambda = 0 every
/// vector has fixed depth max_level; with lambda > 0 depths vary per
/// image, so vectors are padded to the run's maximum depth by repeating
/// the final level's values and a "depth" feature is appended.
FeatureTable extract_features(std::span<const ImageRecord> records,
                              const ExtractOptions& options, int workers = 1);

/// Experiment harness configuration, readable from a "key = value" file.
struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path out_dir;
    std::vector<Method> methods = {Method::kBbsFd, Method::kBbsE, Method::kBbsCm};
    int max_level = 3;
    double lambda = 0.0;
    FeatureMode mode = FeatureMode::kSelectedOnly;
    std::optional<double> noise_cutoff;
    GlcmConfig glcm;
    int fd_max_distance = 0;
    uint64_t seed = 0;
    int workers = 0; // 0 = hardware concurrency
    bool preprocess_gradient = false;
};

RunConfig parse_run_config(const std::filesystem::path& path);

struct MethodResult {
    Method method = Method::kBbsFd;
    std::vector<ClassificationReport> per_level; // index L-1, L = 1..max_level
    int best_level = 0;
    double best_accuracy = 0.0;
    ClassificationReport threshold_report; // the configured-lambda run
    int threshold_max_depth = 0;           // deepest realized depth in that run
    double seconds = 0.0;                  // wall time, reported to console only
};

struct BenchResult {
    std::vector<MethodResult> methods; // in config order
};

/// Runs the full comparison protocol: for each method, fixed-depth runs
/// at every level 1..max_level plus one run at the configured lambda,
/// each evaluated with leave-one-out cross-validation. Writes feature
/// CSVs, JSON reports, one accuracy-vs-level CSV per method, and a
/// summary document under out_dir. Output bytes are a pure function of
/// the config and dataset (timings go to the console, never to files).
BenchResult run_bench(const RunConfig& config);

} // namespace fractex
