#pragma once

#include "c2g/image.hpp"

#include <filesystem>

namespace c2g {

/// Decodes PNG/JPEG/BMP/PPM/TIFF into an RgbImage. 8- and 16-bit integer
/// samples are normalized by their full-scale value; single-channel files are
/// replicated to three channels and alpha is dropped. Throws IoError.
RgbImage read_rgb(const std::filesystem::path& path);

/// Decodes a grayscale raster. Color files are reduced to the mean of their
/// channels. Throws IoError.
GrayImage read_gray(const std::filesystem::path& path);

/// Writes an 8-bit single-channel file with value round(255 * v). The format
/// follows the extension (PNG expected). Throws IoError.
void write_gray(const GrayImage& gray, const std::filesystem::path& path);

/// Writes an 8-bit color file with round(255 * v) per channel. Throws IoError.
void write_rgb(const RgbImage& img, const std::filesystem::path& path);

/// True for the extensions read_rgb accepts (case-insensitive).
bool has_image_extension(const std::filesystem::path& path);

}  // namespace c2g
