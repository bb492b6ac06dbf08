#include <fractex/glcm.hpp>

#include <fractex/errors.hpp>

#include <cmath>
#include <cstdint>

namespace fractex {

namespace {

struct Offset {
    int dx;
    int dy;
};

Offset orientation_offset(GlcmOrientation o, int distance) {
    switch (o) {
        case GlcmOrientation::kDeg0: return {distance, 0};
        case GlcmOrientation::kDeg45: return {distance, -distance};
        case GlcmOrientation::kDeg90: return {0, -distance};
        case GlcmOrientation::kDeg135: return {-distance, -distance};
    }
    throw Error("orientation_offset: invalid orientation");
}

inline int quantize(double v, int levels) {
    int bin = static_cast<int>(std::floor(v * levels));
    if (bin < 0) bin = 0;
    if (bin >= levels) bin = levels - 1;
    return bin;
}

} // namespace

double subband_energy(const GrayImage& img) {
    validate_image(img, "subband_energy");
    double sum = 0.0;
    for (double v : img.pixels()) {
        sum += v * v;
    }
    return sum / static_cast<double>(img.size());
}

const char* to_string(GlcmOrientation o) {
    switch (o) {
        case GlcmOrientation::kDeg0: return "0";
        case GlcmOrientation::kDeg45: return "45";
        case GlcmOrientation::kDeg90: return "90";
        case GlcmOrientation::kDeg135: return "135";
    }
    throw Error("to_string(GlcmOrientation): invalid value");
}

GlcmMatrix glcm_compute(const GrayImage& img, int levels, int distance,
                        GlcmOrientation orientation) {
    validate_image(img, "glcm_compute");
    if (levels < 2 || levels > 256) {
        throw PreconditionError("glcm_compute: levels must be in 2..256");
    }
    if (distance < 1 || distance >= std::min(img.width(), img.height())) {
        throw PreconditionError("glcm_compute: distance must be in 1..min(width, height)-1");
    }

    const int w = img.width();
    const int h = img.height();
    const auto [dx, dy] = orientation_offset(orientation, distance);

    std::vector<int64_t> counts(static_cast<size_t>(levels) * levels, 0);
    int64_t total = 0;
    for (int y = 0; y < h; ++y) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int x = 0; x < w; ++x) {
            const int xx = x + dx;
            if (xx < 0 || xx >= w) continue;
            const int a = quantize(img.at(x, y), levels);
            const int b = quantize(img.at(xx, yy), levels);
            counts[static_cast<size_t>(a) * levels + b] += 1;
            counts[static_cast<size_t>(b) * levels + a] += 1;
            total += 2;
        }
    }
    if (total == 0) {
        throw PreconditionError("glcm_compute: no valid pixel pairs for this geometry");
    }

    GlcmMatrix m;
    m.levels = levels;
    m.distance = distance;
    m.orientation = orientation;
    m.total_pairs = total;
    m.probs.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) {
        m.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return m;
}

GlcmFeatures glcm_features(const GlcmMatrix& m) {
    const int g = m.levels;
    std::vector<double> pi(static_cast<size_t>(g), 0.0);
    std::vector<double> pj(static_cast<size_t>(g), 0.0);
    double energy = 0.0;
    double entropy = 0.0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const double p = m.at(i, j);
            energy += p * p;
            if (p > 0.0) entropy -= p * std::log2(p);
            pi[static_cast<size_t>(i)] += p;
            pj[static_cast<size_t>(j)] += p;
        }
    }

    double mu_i = 0.0, mu_j = 0.0;
    for (int i = 0; i < g; ++i) {
        mu_i += i * pi[static_cast<size_t>(i)];
        mu_j += i * pj[static_cast<size_t>(i)];
    }
    double var_i = 0.0, var_j = 0.0;
    for (int i = 0; i < g; ++i) {
        var_i += (i - mu_i) * (i - mu_i) * pi[static_cast<size_t>(i)];
        var_j += (i - mu_j) * (i - mu_j) * pj[static_cast<size_t>(i)];
    }

    double correlation = 0.0;
    const double sigma_prod = std::sqrt(var_i) * std::sqrt(var_j);
    if (sigma_prod > 0.0) {
        double cov = 0.0;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) {
                cov += (i - mu_i) * (j - mu_j) * m.at(i, j);
            }
        }
        correlation = cov / sigma_prod;
    }

    GlcmFeatures f;
    f.correlation = correlation;
    f.entropy = entropy;
    f.energy = energy;
    return f;
}

GlcmFeatures glcm_features_mean(const GrayImage& img, int levels, int distance) {
    GlcmFeatures acc;
    for (GlcmOrientation o : kGlcmOrientations) {
        const GlcmFeatures f = glcm_features(glcm_compute(img, levels, distance, o));
        acc.correlation += f.correlation;
        acc.entropy += f.entropy;
        acc.energy += f.energy;
    }
    acc.correlation *= 0.25;
    acc.entropy *= 0.25;
    acc.energy *= 0.25;
    return acc;
}

} // namespace fractex
