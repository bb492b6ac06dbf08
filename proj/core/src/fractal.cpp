#include <fractex/fractal.hpp>

#include <fractex/errors.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fractex {

int default_fd_distance(const GrayImage& img) {
    const int d = std::min(img.width(), img.height()) / 16;
    return std::max(d, 2);
}

FdEstimate estimate_fd(const GrayImage& img, int max_distance) {
    validate_image(img, "estimate_fd");
    if (max_distance < 2) {
        throw PreconditionError("estimate_fd: max_distance must be >= 2");
    }
    const int min_dim = std::min(img.width(), img.height());
    if (max_distance > min_dim / 4) {
        throw PreconditionError("estimate_fd: max_distance " + std::to_string(max_distance) +
                                " exceeds min(width, height)/4 = " + std::to_string(min_dim / 4));
    }

    const int w = img.width();
    const int h = img.height();
    std::vector<double> log_d(max_distance);
    std::vector<double> log_e(max_distance);
    for (int d = 1; d <= max_distance; ++d) {
        double sum = 0.0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x + d < w; ++x) {
                sum += std::abs(img.at(x + d, y) - img.at(x, y));
            }
        }
        for (int y = 0; y + d < h; ++y) {
            for (int x = 0; x < w; ++x) {
                sum += std::abs(img.at(x, y + d) - img.at(x, y));
            }
        }
        const double count = static_cast<double>(w - d) * h + static_cast<double>(w) * (h - d);
        const double e = sum / count;
        if (e == 0.0) {
            throw DegenerateSurfaceError("estimate_fd: E(d) = 0 at distance " +
                                         std::to_string(d));
        }
        log_d[d - 1] = std::log(static_cast<double>(d));
        log_e[d - 1] = std::log(e);
    }

    const int n = max_distance;
    double mean_x = 0.0, mean_y = 0.0;
    for (int i = 0; i < n; ++i) {
        mean_x += log_d[i];
        mean_y += log_e[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = log_d[i] - mean_x;
        const double dy = log_e[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    double r2 = 1.0;
    if (syy > 0.0) {
        r2 = (sxy * sxy) / (sxx * syy);
        r2 = std::clamp(r2, 0.0, 1.0);
    }

    FdEstimate est;
    est.hurst = std::clamp(slope, 0.0, 1.0);
    est.fd = 3.0 - est.hurst;
    est.log_intercept = intercept;
    est.r_squared = r2;
    est.max_distance = max_distance;
    return est;
}

} // namespace fractex
