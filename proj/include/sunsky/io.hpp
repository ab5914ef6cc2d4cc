#pragma once

#include <filesystem>

#include "sunsky/image.hpp"

namespace sunsky {

/// Reads a 32- or 16-bit float OpenEXR file with channels R,G,B or a single
/// channel (Y, or any lone channel). No transfer function is applied.
/// Throws IngestError on missing files, unsupported channel layouts and
/// non-finite samples; negative samples are clamped to 0 with a warning.
LinearImage read_linear_exr(const std::filesystem::path& path);

/// Writes 32-bit float channels R,G,B (3-channel) or Y (1-channel), ZIP
/// compressed, no gamma. read_linear_exr inverts it bit-exactly.
void write_linear_exr(const LinearImage& img, const std::filesystem::path& path);

/// 8-bit grayscale preview. Never read back into numeric pipelines.
void write_gray8_png(const Gray8Image& img, const std::filesystem::path& path);

/// 1-bit grayscale PNG, white = true.
void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask read_mask_png(const std::filesystem::path& path);

}  // namespace sunsky
