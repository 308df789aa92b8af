#pragma once

#include "c2g/image.hpp"

namespace c2g {

struct Rgb {
  double r, g, b;
};

struct Lab {
  double L, a, b;
};

/// D65 reference white, Y normalized to 1.
inline constexpr double kWhiteX = 0.95047;
inline constexpr double kWhiteY = 1.0;
inline constexpr double kWhiteZ = 1.08883;

/// sRGB electro-optical transfer function (encoded -> linear light).
double srgb_to_linear(double v);
/// Inverse transfer function (linear light -> encoded).
double linear_to_srgb(double v);

/// Converts one sRGB-encoded pixel to CIEL*a*b* (D65).
///
/// The XYZ matrix rows are applied in white-relative form, so any pixel with
/// r == g == b lands exactly on the achromatic axis (a = b = 0, bit for bit).
Lab srgb_to_lab(const Rgb& px);

/// Inverse of srgb_to_lab. The result is not clamped; out-of-gamut colors
/// produce channels outside [0,1].
Rgb lab_to_srgb_unclamped(const Lab& px);
/// sRGB value (all three channels) of the gray with lightness L; equals every
/// channel of lab_to_srgb_unclamped({L, 0, 0}).
double achromatic_srgb(double L);

LabImage srgb_to_lab(const RgbImage& img);
/// Out-of-gamut results are clamped per channel to [0,1].
RgbImage lab_to_srgb(const LabImage& lab);

/// 0.3 r + 0.6 g + 0.1 b on the encoded values.
GrayImage ntsc_gray(const RgbImage& img);
/// Relative luminance Y after sRGB linearization, white -> 1.
GrayImage cie_y_gray(const RgbImage& img);

}  // namespace c2g
