#pragma once

// Independent reference implementations used only by tests. None of these
// call into the code paths they check.

#include "c2g/image.hpp"

#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace c2g::oracle {

/// Textbook sRGB -> Lab: full 3x3 matrix, divide by the D65 white.
inline std::array<double, 3> lab_of(double r, double g, double b) {
  const auto lin = [](double v) { return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4); };
  const double M[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                          {0.2126729, 0.7151522, 0.0721750},
                          {0.0193339, 0.1191920, 0.9503041}};
  const double white[3] = {0.95047, 1.0, 1.08883};
  const double l[3] = {lin(r), lin(g), lin(b)};
  double f[3];
  for (int i = 0; i < 3; ++i) {
    const double t = (M[i][0] * l[0] + M[i][1] * l[1] + M[i][2] * l[2]) / white[i];
    const double d = 6.0 / 29.0;
    f[i] = t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
  }
  return {116 * f[1] - 16, 500 * (f[0] - f[1]), 200 * (f[1] - f[2])};
}

/// Encoded sRGB value of an achromatic color with lightness L.
inline double gray_of_lightness(double L) {
  const double fy = (L + 16.0) / 116.0;
  const double d = 6.0 / 29.0;
  const double y = fy > d ? fy * fy * fy : 3 * d * d * (fy - 4.0 / 29.0);
  return y <= 0.0031308 ? 12.92 * y : 1.055 * std::pow(y, 1.0 / 2.4) - 0.055;
}

inline int mirror(int i, int n) {
  // Edge-repeating reflection by repeated folding.
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

struct NaiveStats {
  Plane u_f, u_g, d_f, d_g, sigma_f, sigma_g, sigma_fg;
};

/// Direct per-window evaluation of the local statistics, one pixel at a time.
inline NaiveStats naive_local_stats(const LabImage& lab, const GrayImage& gray, int size, double sigma) {
  const int h = lab.height(), w = lab.width(), r = size / 2;
  std::vector<double> wt;
  double total = 0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      wt.push_back(std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)));
      total += wt.back();
    }
  for (auto& v : wt) v /= total;

  NaiveStats s{Plane(h, w), Plane(h, w), Plane(h, w), Plane(h, w), Plane(h, w), Plane(h, w), Plane(h, w)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mL = 0, ma = 0, mb = 0, mg = 0;
      int k = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx, ++k) {
          const int yy = mirror(y + dy, h), xx = mirror(x + dx, w);
          mL += wt[k] * lab.L(yy, xx);
          ma += wt[k] * lab.a(yy, xx);
          mb += wt[k] * lab.b(yy, xx);
          mg += wt[k] * 100.0 * gray.values()(yy, xx);
        }
      std::vector<double> df, dg;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int yy = mirror(y + dy, h), xx = mirror(x + dx, w);
          df.push_back(std::hypot(lab.L(yy, xx) - mL, lab.a(yy, xx) - ma, lab.b(yy, xx) - mb));
          dg.push_back(std::abs(100.0 * gray.values()(yy, xx) - mg));
        }
      double mdf = 0, mdg = 0;
      for (std::size_t i = 0; i < wt.size(); ++i) {
        mdf += wt[i] * df[i];
        mdg += wt[i] * dg[i];
      }
      double vf = 0, vg = 0, cfg = 0;
      for (std::size_t i = 0; i < wt.size(); ++i) {
        vf += wt[i] * (df[i] - mdf) * (df[i] - mdf);
        vg += wt[i] * (dg[i] - mdg) * (dg[i] - mdg);
        cfg += wt[i] * (df[i] - mdf) * (dg[i] - mdg);
      }
      s.u_f(y, x) = mL;
      s.u_g(y, x) = mg;
      s.d_f(y, x) = mdf;
      s.d_g(y, x) = mdg;
      s.sigma_f(y, x) = std::sqrt(vf);
      s.sigma_g(y, x) = std::sqrt(vg);
      s.sigma_fg(y, x) = cfg;
    }
  }
  return s;
}

inline RgbImage random_rgb(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane r(h, w), g(h, w), b(h, w);
  for (int i = 0; i < h * w; ++i) {
    r.data()[i] = u(rng);
    g.data()[i] = u(rng);
    b.data()[i] = u(rng);
  }
  return RgbImage(r, g, b);
}

inline GrayImage random_gray(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane v(h, w);
  for (int i = 0; i < h * w; ++i) v.data()[i] = u(rng);
  return GrayImage(v);
}

/// Smooth color blobs over a gradient, roughly what a photograph looks like to
/// the windowed statistics.
inline RgbImage synthetic_scene(int h, int w, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Blob {
    double cy, cx, radius, r, g, b;
  };
  std::vector<Blob> blobs;
  for (int i = 0; i < 6; ++i) blobs.push_back({u(rng) * h, u(rng) * w, (0.1 + 0.2 * u(rng)) * std::min(h, w), u(rng), u(rng), u(rng)});
  Plane r(h, w), g(h, w), b(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double cr = 0.3 + 0.4 * x / w, cg = 0.4, cb = 0.3 + 0.4 * y / h;
      for (const auto& bl : blobs) {
        const double d2 = ((y - bl.cy) * (y - bl.cy) + (x - bl.cx) * (x - bl.cx)) / (bl.radius * bl.radius);
        const double a = std::exp(-d2);
        cr = (1 - a) * cr + a * bl.r;
        cg = (1 - a) * cg + a * bl.g;
        cb = (1 - a) * cb + a * bl.b;
      }
      r(y, x) = cr;
      g(y, x) = cg;
      b(y, x) = cb;
    }
  }
  return RgbImage(r, g, b);
}

}  // namespace c2g::oracle
