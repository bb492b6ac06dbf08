#pragma once

#include <fractex/image.hpp>

namespace fractex {

/// Result of the fractional-Brownian-motion fractal dimension fit.
struct FdEstimate {
    double fd = 0.0;            // 3 - hurst, in [2, 3]
    double hurst = 0.0;         // slope clamped to [0, 1]
    double log_intercept = 0.0; // intercept of the log-log fit (log K)
    double r_squared = 0.0;     // fit quality in [0, 1]
    int max_distance = 0;       // largest pixel distance used
};

/// Estimates the fractal dimension of an intensity surface from the mean
/// absolute difference of pixel pairs as a function of distance:
/// E(d) is pooled over all horizontal and vertical pairs at offset d for
/// d = 1..max_distance, then log E(d) is fit against log d by least
/// squares. hurst is the slope clamped to [0, 1] and fd = 3 - hurst.
///
/// Throws DegenerateSurfaceError if any E(d) is exactly zero (constant
/// or periodic-degenerate input) and PreconditionError for max_distance
/// outside [2, min(width, height)/4].
FdEstimate estimate_fd(const GrayImage& img, int max_distance);

/// Default distance range: min(width, height)/16, clamped to at least 2
/// (32 for 512x512 inputs).
int default_fd_distance(const GrayImage& img);

} // namespace fractex
