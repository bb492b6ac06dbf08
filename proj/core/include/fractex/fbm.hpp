#pragma once

#include <fractex/image.hpp>

#include <cstdint>
#include <string>

namespace fractex {

/// Synthesizes a fractional Brownian motion surface by spectral shaping:
/// a complex Gaussian spectrum with amplitude proportional to
/// f^-(hurst+1) (power ~ f^-(2H+2)) is inverse-transformed and the real
/// part affinely rescaled to [0, 1]. Pure function of (width, height,
/// hurst, seed); the theoretical surface fractal dimension is 3 - hurst.
GrayImage synth_fbm(int width, int height, double hurst, uint64_t seed);

/// Manifest source string for a synthesized image:
/// "fbm:H=<h>:seed=<s>:<W>x<H>". The hurst token is recorded verbatim so
/// the descriptor round-trips the user's spelling (e.g. "0.2").
std::string fbm_descriptor(const std::string& hurst_token, uint64_t seed, int width, int height);

} // namespace fractex
