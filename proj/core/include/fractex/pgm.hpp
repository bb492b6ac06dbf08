#pragma once

#include <fractex/image.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fractex {

/// Parses a binary PGM ("P5") byte stream. Header whitespace and '#'
/// comments follow the Netpbm convention; maxval up to 65535 (two-byte
/// big-endian samples above 255). Intensities are divided by maxval.
GrayImage load_pgm(std::span<const uint8_t> bytes);

/// Serializes to canonical binary PGM: "P5\n<w> <h>\n<maxval>\n" + payload.
/// Intensities are clamped to [0, 1] and quantized by rounding to maxval
/// steps. maxval 255 writes one byte per sample, larger values two
/// (big-endian).
std::vector<uint8_t> write_pgm(const GrayImage& img, int maxval = 255);

GrayImage load_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const GrayImage& img, const std::filesystem::path& path, int maxval = 255);

} // namespace fractex
