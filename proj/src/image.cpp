#include "c2g/image.hpp"

#include <algorithm>
#include <cmath>

namespace c2g {
namespace {

void check_same_shape(const Plane& r, const Plane& g, const Plane& b) {
  if (r.rows() < 1 || r.cols() < 1) {
    throw std::invalid_argument("RgbImage: height and width must be >= 1");
  }
  if (g.rows() != r.rows() || g.cols() != r.cols() || b.rows() != r.rows() ||
      b.cols() != r.cols()) {
    throw std::invalid_argument("RgbImage: channel planes differ in size");
  }
}

void check_unit_range(const Plane& p, const char* channel) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p.data()[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string("RgbImage: channel ") + channel +
                                  " value outside [0,1] or not finite");
    }
  }
}

Plane clamp_unit(Plane p, bool map_nan_to_zero) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double& v = p.data()[i];
    if (std::isnan(v)) {
      if (!map_nan_to_zero) throw std::invalid_argument("non-finite pixel value");
      v = 0.0;
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  return p;
}

}  // namespace

RgbImage::RgbImage(Plane r, Plane g, Plane b) : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)) {
  check_same_shape(r_, g_, b_);
  check_unit_range(r_, "r");
  check_unit_range(g_, "g");
  check_unit_range(b_, "b");
}

RgbImage RgbImage::clamped(Plane r, Plane g, Plane b) {
  return RgbImage(clamp_unit(std::move(r), false), clamp_unit(std::move(g), false),
                  clamp_unit(std::move(b), false));
}

RgbImage RgbImage::filled(int height, int width, double r, double g, double b) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("RgbImage: height and width must be >= 1");
  }
  return RgbImage(Plane::Constant(height, width, r), Plane::Constant(height, width, g),
                  Plane::Constant(height, width, b));
}

GrayImage::GrayImage(Plane values) : v_(clamp_unit(std::move(values), false)) {
  if (v_.rows() < 1 || v_.cols() < 1) {
    throw std::invalid_argument("GrayImage: height and width must be >= 1");
  }
}

GrayImage quantize_8bit(const GrayImage& gray) {
  Plane q = gray.values().unaryExpr([](double v) { return std::round(255.0 * v) / 255.0; });
  return GrayImage(std::move(q));
}

}  // namespace c2g
