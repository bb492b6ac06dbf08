#pragma once

#include <fractex/image.hpp>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace fractex {

/// Quadrant labels for the four subbands of one separable analysis step.
/// The first letter is the filter applied along rows (x direction), the
/// second along columns (y direction).
enum class Quadrant { LL, LH, HL, HH };

inline constexpr std::array<Quadrant, 4> kQuadrants = {Quadrant::LL, Quadrant::LH,
                                                       Quadrant::HL, Quadrant::HH};

const char* to_string(Quadrant q);
Quadrant quadrant_from_string(const std::string& name);

/// Orthonormal scaling/wavelet filter pair, 8 taps each.
struct FilterPair {
    std::array<double, 8> h0; // scaling (lowpass)
    std::array<double, 8> h1; // wavelet (highpass), h1[k] = (-1)^k h0[7-k]
};

/// The 8-coefficient orthonormal Daubechies filter pair (4 vanishing
/// moments). sum(h0) = sqrt(2); sum_k h0[k] h0[k+2m] = delta_{m,0}.
FilterPair db8_filters();

/// Input extension rule for the filtering. Periodic keeps perfect
/// reconstruction and the energy identity exact; symmetric (half-sample
/// reflection) is available for visual comparisons but is approximate
/// near borders.
enum class BoundaryMode { kPeriodic, kSymmetric };

/// Four same-size subbands produced by one undecimated analysis level.
/// path identifies the parent node as the quadrant choices that led to
/// it (length level-1); it is filled by the best-basis search and left
/// empty for standalone analysis.
struct SubbandSet {
    GrayImage ll, lh, hl, hh;
    int level = 1;
    std::vector<Quadrant> path;

    const GrayImage& band(Quadrant q) const;
    GrayImage& band(Quadrant q);
};

/// One undecimated separable analysis step at the given level. Filters
/// are a-trous upsampled by inserting 2^(level-1)-1 zeros between taps,
/// so subbands keep the input's dimensions at every level. Throws if the
/// upsampled filter support exceeds the image along either axis.
SubbandSet analyze_level(const GrayImage& img, const FilterPair& filters, int level,
                         BoundaryMode boundary = BoundaryMode::kPeriodic,
                         std::vector<Quadrant> parent_path = {});

/// Inverse of analyze_level (exact under periodic extension): adjoint
/// synthesis filtering of the four subbands averaged back to one image.
GrayImage reconstruct_level(const SubbandSet& sub, const FilterPair& filters,
                            BoundaryMode boundary = BoundaryMode::kPeriodic);

/// Debug dump: writes the four subbands as PGM files named
/// "<stem>_L<level>_<LL|LH|HL|HH>.pgm", each affinely rescaled to [0,1]
/// (lossy, for inspection only).
void dump_subbands(const SubbandSet& sub, const std::filesystem::path& dir,
                   const std::string& stem);

} // namespace fractex
