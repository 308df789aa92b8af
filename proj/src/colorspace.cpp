#include "c2g/colorspace.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace c2g {
namespace {

// sRGB (D65) -> XYZ primaries matrix, each row divided by the matching white
// component. Only the outer two coefficients of each row are kept: the middle
// one is implied by the row summing to one, which keeps r == g == b exactly
// achromatic through the round trip.
struct WhiteRelativeRow {
  double c0, c2;
  double apply(double x0, double x1, double x2) const { return x1 + c0 * (x0 - x1) + c2 * (x2 - x1); }
};

constexpr WhiteRelativeRow kToX{0.4124564 / kWhiteX, 0.1804375 / kWhiteX};
constexpr WhiteRelativeRow kToY{0.2126729 / kWhiteY, 0.0721750 / kWhiteY};
constexpr WhiteRelativeRow kToZ{0.0193339 / kWhiteZ, 0.9503041 / kWhiteZ};

struct InverseRows {
  WhiteRelativeRow r, g, b;
};

InverseRows make_inverse() {
  const WhiteRelativeRow rows[3] = {kToX, kToY, kToZ};
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = rows[i].c0;
    m(i, 1) = 1.0 - rows[i].c0 - rows[i].c2;
    m(i, 2) = rows[i].c2;
  }
  const Eigen::Matrix3d inv = m.inverse();
  return {{inv(0, 0), inv(0, 2)}, {inv(1, 0), inv(1, 2)}, {inv(2, 0), inv(2, 2)}};
}

const InverseRows& inverse_rows() {
  static const InverseRows rows = make_inverse();
  return rows;
}

constexpr double kDelta = 6.0 / 29.0;
constexpr double kDelta3 = kDelta * kDelta * kDelta;

double lab_f(double t) {
  return t > kDelta3 ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double f) {
  return f > kDelta ? f * f * f : 3.0 * kDelta * kDelta * (f - 4.0 / 29.0);
}

}  // namespace

double srgb_to_linear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

Lab srgb_to_lab(const Rgb& px) {
  const double r = srgb_to_linear(px.r);
  const double g = srgb_to_linear(px.g);
  const double b = srgb_to_linear(px.b);
  const double fx = lab_f(kToX.apply(r, g, b));
  const double fy = lab_f(kToY.apply(r, g, b));
  const double fz = lab_f(kToZ.apply(r, g, b));
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb lab_to_srgb_unclamped(const Lab& px) {
  const double fy = (px.L + 16.0) / 116.0;
  const double fx = fy + px.a / 500.0;
  const double fz = fy - px.b / 200.0;
  const double tx = lab_f_inv(fx);
  const double ty = lab_f_inv(fy);
  const double tz = lab_f_inv(fz);
  const auto& inv = inverse_rows();
  return {linear_to_srgb(inv.r.apply(tx, ty, tz)), linear_to_srgb(inv.g.apply(tx, ty, tz)),
          linear_to_srgb(inv.b.apply(tx, ty, tz))};
}

double achromatic_srgb(double L) {
  const double ty = lab_f_inv((L + 16.0) / 116.0);
  return linear_to_srgb(inverse_rows().g.apply(ty, ty, ty));
}

LabImage srgb_to_lab(const RgbImage& img) {
  const auto h = img.height();
  const auto w = img.width();
  LabImage out{Plane(h, w), Plane(h, w), Plane(h, w)};
  for (long i = 0; i < img.pixels(); ++i) {
    const Lab lab = srgb_to_lab(Rgb{img.r().data()[i], img.g().data()[i], img.b().data()[i]});
    out.L.data()[i] = lab.L;
    out.a.data()[i] = lab.a;
    out.b.data()[i] = lab.b;
  }
  return out;
}

RgbImage lab_to_srgb(const LabImage& lab) {
  const auto h = lab.height();
  const auto w = lab.width();
  if (lab.a.rows() != h || lab.a.cols() != w || lab.b.rows() != h || lab.b.cols() != w) {
    throw std::invalid_argument("lab_to_srgb: planes differ in size");
  }
  Plane r(h, w), g(h, w), b(h, w);
  for (Eigen::Index i = 0; i < lab.L.size(); ++i) {
    const Rgb px = lab_to_srgb_unclamped({lab.L.data()[i], lab.a.data()[i], lab.b.data()[i]});
    if (!std::isfinite(px.r) || !std::isfinite(px.g) || !std::isfinite(px.b)) {
      throw std::invalid_argument("lab_to_srgb: non-finite Lab value");
    }
    r.data()[i] = px.r;
    g.data()[i] = px.g;
    b.data()[i] = px.b;
  }
  return RgbImage::clamped(std::move(r), std::move(g), std::move(b));
}

GrayImage ntsc_gray(const RgbImage& img) {
  return GrayImage(0.3 * img.r() + 0.6 * img.g() + 0.1 * img.b());
}

GrayImage cie_y_gray(const RgbImage& img) {
  Plane y(img.height(), img.width());
  for (long i = 0; i < img.pixels(); ++i) {
    y.data()[i] = kToY.apply(srgb_to_linear(img.r().data()[i]), srgb_to_linear(img.g().data()[i]),
                             srgb_to_linear(img.b().data()[i]));
  }
  return GrayImage(std::move(y));
}

}  // namespace c2g
