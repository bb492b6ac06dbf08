#pragma once

#include <fractex/image.hpp>

namespace fractex {

/// Morphological gradient (dilation minus erosion) with a 3x3 square
/// structuring element and replicate border padding. Output is >= 0
/// everywhere and 0 exactly where the 3x3 neighborhood is constant.
GrayImage morphological_gradient(const GrayImage& img);

} // namespace fractex
