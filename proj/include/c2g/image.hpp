#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace c2g {

/// Row-major h x w plane of doubles. Rows index image height.
using Plane = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Input file could not be opened, decoded or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is well-formed on disk but unusable (dimension mismatch, empty set, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sRGB-encoded color raster, every channel in [0,1].
///
/// Stored as three planes. The constructor rejects out-of-range or non-finite
/// values; use clamped() when the values come from an arithmetic pipeline that
/// may leave the gamut.
class RgbImage {
 public:
  RgbImage(Plane r, Plane g, Plane b);

  static RgbImage clamped(Plane r, Plane g, Plane b);
  /// Single color filling an h x w raster.
  static RgbImage filled(int height, int width, double r, double g, double b);

  int height() const { return static_cast<int>(r_.rows()); }
  int width() const { return static_cast<int>(r_.cols()); }
  long pixels() const { return static_cast<long>(r_.size()); }

  const Plane& r() const { return r_; }
  const Plane& g() const { return g_; }
  const Plane& b() const { return b_; }

 private:
  Plane r_, g_, b_;
};

/// CIEL*a*b* planes. No range checks: lightness may leave [0,100] in intermediate work.
struct LabImage {
  Plane L, a, b;

  int height() const { return static_cast<int>(L.rows()); }
  int width() const { return static_cast<int>(L.cols()); }
};

/// Single-channel raster in [0,1]; values are clamped on construction.
class GrayImage {
 public:
  explicit GrayImage(Plane values);

  int height() const { return static_cast<int>(v_.rows()); }
  int width() const { return static_cast<int>(v_.cols()); }
  long pixels() const { return static_cast<long>(v_.size()); }
  const Plane& values() const { return v_; }

 private:
  Plane v_;
};

/// Rounds every value to the nearest multiple of 1/255, i.e. the value an
/// 8-bit file written with round(255 * v) decodes back to.
GrayImage quantize_8bit(const GrayImage& gray);

}  // namespace c2g
