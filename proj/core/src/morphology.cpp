#include <fractex/morphology.hpp>

#include <algorithm>

namespace fractex {

GrayImage morphological_gradient(const GrayImage& img) {
    validate_image(img, "morphological_gradient");
    const int w = img.width();
    const int h = img.height();
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(y - 1, 0);
        const int y1 = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(x - 1, 0);
            const int x1 = std::min(x + 1, w - 1);
            double lo = img.at(x, y);
            double hi = lo;
            for (int yy = y0; yy <= y1; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    const double v = img.at(xx, yy);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            out.at(x, y) = hi - lo;
        }
    }
    return out;
}

} // namespace fractex
