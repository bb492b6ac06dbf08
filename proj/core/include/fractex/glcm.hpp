#pragma once

#include <fractex/image.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace fractex {

/// Mean squared coefficient, (1/MN) * sum x^2.
double subband_energy(const GrayImage& img);

/// Co-occurrence orientations; displacement in (column, row) steps is
/// 0deg -> (d, 0), 45deg -> (d, -d), 90deg -> (0, -d), 135deg -> (-d, -d).
enum class GlcmOrientation { kDeg0, kDeg45, kDeg90, kDeg135 };

inline constexpr std::array<GlcmOrientation, 4> kGlcmOrientations = {
    GlcmOrientation::kDeg0, GlcmOrientation::kDeg45, GlcmOrientation::kDeg90,
    GlcmOrientation::kDeg135};

const char* to_string(GlcmOrientation o);

/// Symmetric, normalized gray-level co-occurrence matrix.
struct GlcmMatrix {
    int levels = 0;   // G quantization bins
    int distance = 1; // displacement in pixels
    GlcmOrientation orientation = GlcmOrientation::kDeg0;
    int64_t total_pairs = 0;   // symmetric count before normalization
    std::vector<double> probs; // G*G row-major, sums to 1

    double at(int i, int j) const { return probs[static_cast<size_t>(i) * levels + j]; }
};

/// Quantizes intensities to `levels` uniform bins over [0, 1], counts
/// ordered pixel pairs at the orientation's displacement, adds the
/// transposed counts and normalizes. Inputs outside [0, 1] are clamped
/// into the bin range; rescale_unit() first when handling raw subbands.
GlcmMatrix glcm_compute(const GrayImage& img, int levels, int distance,
                        GlcmOrientation orientation);

/// Second-order statistics of a co-occurrence matrix. Entropy is in bits;
/// correlation uses the marginal means/deviations and is 0 by convention
/// when either marginal deviation vanishes.
struct GlcmFeatures {
    double correlation = 0.0;
    double entropy = 0.0;
    double energy = 0.0;
};

GlcmFeatures glcm_features(const GlcmMatrix& m);

/// Convenience: features averaged over the four orientations at one
/// distance, the rotation-robust form used by the co-occurrence pipeline.
GlcmFeatures glcm_features_mean(const GrayImage& img, int levels, int distance);

} // namespace fractex
