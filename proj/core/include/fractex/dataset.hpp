#pragma once

#include <fractex/best_basis.hpp>
#include <fractex/image.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fractex {

/// One dataset element: the image plus its class label and provenance
/// (file path or synthesis descriptor).
struct ImageRecord {
    GrayImage image;
    std::string label;
    std::string source;
};

/// Manifest line: "path,label" with an optional third "source" field
/// (synthesis descriptor). Paths are stored as written; resolve_path
/// interprets relative ones against the manifest's directory.
struct ManifestEntry {
    std::string path;
    std::string label;
    std::string source; // defaults to path when the field is absent

    std::filesystem::path resolve_path(const std::filesystem::path& manifest_dir) const;
};

/// Parses a line-oriented manifest: one "path,label[,source]" per line,
/// '#' comments and blank lines ignored.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries);

/// Loads every manifest image (PGM) into records. Errors are rethrown
/// with the offending path attached.
std::vector<ImageRecord> load_manifest_images(const std::filesystem::path& manifest);

/// Feature CSV: header row of feature names, one row per image, final
/// columns "label" and "source". Values are written with enough digits
/// to round-trip doubles exactly.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<FeatureVector> rows;   // each row's names mirror `names`
    std::vector<std::string> sources;  // parallel to rows
};

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_feature_csv(const std::filesystem::path& path);

} // namespace fractex
