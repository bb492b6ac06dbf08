#pragma once

#include <fractex/errors.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fractex {

/// Row-major grayscale image with real-valued intensities.
///
/// Intensities are nominally in [0, 1] for images loaded from files or
/// produced by the synthesizer; wavelet subbands reuse the same container
/// and may exceed that range or go negative.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<size_t>(width) * height, fill);
    }

    GrayImage(int width, int height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<size_t>(width) * height) {
            throw PreconditionError("GrayImage: data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(width) + "x" +
                                    std::to_string(height));
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }

    std::span<const double> pixels() const { return data_; }
    std::span<double> pixels() { return data_; }
    const double* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_; }
    double* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    bool same_shape(const GrayImage& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1) {
            throw PreconditionError("GrayImage: dimensions must be positive, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
        }
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Throws unless the image is non-empty with finite intensities.
void validate_image(const GrayImage& img, const std::string& context);

/// Affine rescale so min -> 0 and max -> 1. A constant image maps to all
/// zeros (there is no scale to recover).
GrayImage rescale_unit(const GrayImage& img);

/// Quarter-turn counterclockwise; (x, y) -> (y, width-1-x) in the result.
GrayImage rotate90(const GrayImage& img);

} // namespace fractex
