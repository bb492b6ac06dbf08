#include <fractex/image.hpp>

#include <algorithm>

namespace fractex {

void validate_image(const GrayImage& img, const std::string& context) {
    if (img.empty()) {
        throw PreconditionError(context + ": empty image");
    }
    if (!img.all_finite()) {
        throw PreconditionError(context + ": image contains non-finite intensities");
    }
}

GrayImage rescale_unit(const GrayImage& img) {
    validate_image(img, "rescale_unit");
    const auto px = img.pixels();
    const auto [mn_it, mx_it] = std::minmax_element(px.begin(), px.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    GrayImage out(img.width(), img.height());
    if (mx == mn) {
        return out; // constant input, all zeros
    }
    const double scale = 1.0 / (mx - mn);
    auto dst = out.pixels();
    for (size_t i = 0; i < px.size(); ++i) {
        dst[i] = (px[i] - mn) * scale;
    }
    return out;
}

GrayImage rotate90(const GrayImage& img) {
    GrayImage out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.at(y, img.width() - 1 - x) = img.at(x, y);
        }
    }
    return out;
}

} // namespace fractex
