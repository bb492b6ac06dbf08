#include <fractex/fbm.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <vector>

namespace fractex {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// FFTW planning is not thread-safe; execution of independent plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    fftw_complex* data = nullptr;
    explicit FftwBuffer(size_t n) {
        data = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (data == nullptr) throw Error("synth_fbm: fftw_malloc failed");
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

} // namespace

GrayImage synth_fbm(int width, int height, double hurst, uint64_t seed) {
    if (width < 2 || height < 2) {
        throw PreconditionError("synth_fbm: dimensions must be at least 2x2");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw PreconditionError("synth_fbm: hurst must lie in (0, 1) exclusive");
    }

    const size_t n = static_cast<size_t>(width) * height;
    FftwBuffer spectrum(n);
    FftwBuffer field(n);

    // Complex Gaussian spectrum, amplitude ~ f^-(H+1). The polar form of
    // Box-Muller gives an isotropic complex normal per cell, drawn in
    // row-major order so the output is a pure function of the seed.
    std::mt19937_64 rng(seed);
    const double inv53 = 1.0 / 9007199254740992.0; // 2^-53
    const double exponent = -(hurst + 1.0);
    for (int ky = 0; ky < height; ++ky) {
        const double fy = (ky <= height / 2 ? ky : ky - height) / static_cast<double>(height);
        for (int kx = 0; kx < width; ++kx) {
            const double u1 = 1.0 - static_cast<double>(rng() >> 11) * inv53; // (0, 1]
            const double u2 = static_cast<double>(rng() >> 11) * inv53;       // [0, 1)
            const double fx = (kx <= width / 2 ? kx : kx - width) / static_cast<double>(width);
            const double f = std::hypot(fx, fy);
            const size_t idx = static_cast<size_t>(ky) * width + kx;
            if (f == 0.0) {
                spectrum.data[idx][0] = 0.0;
                spectrum.data[idx][1] = 0.0;
                continue;
            }
            const double amp = std::pow(f, exponent);
            const double r = amp * std::sqrt(-2.0 * std::log(u1));
            spectrum.data[idx][0] = r * std::cos(kTwoPi * u2);
            spectrum.data[idx][1] = r * std::sin(kTwoPi * u2);
        }
    }

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(height, width, spectrum.data, field.data, FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("synth_fbm: fftw_plan_dft_2d failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> data(n);
    for (size_t i = 0; i < n; ++i) {
        data[i] = field.data[i][0];
    }
    const auto [mn_it, mx_it] = std::minmax_element(data.begin(), data.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    if (!(mx > mn)) {
        throw Error("synth_fbm: degenerate field (constant after synthesis)");
    }
    const double scale = 1.0 / (mx - mn);
    for (double& v : data) {
        v = (v - mn) * scale;
    }
    return GrayImage(width, height, std::move(data));
}

std::string fbm_descriptor(const std::string& hurst_token, uint64_t seed, int width, int height) {
    return "fbm:H=" + hurst_token + ":seed=" + std::to_string(seed) + ":" +
           std::to_string(width) + "x" + std::to_string(height);
}

} // namespace fractex
