#include "c2g/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace c2g {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Decoded {
  cv::Mat samples;    // CV_64F, original sample values
  double full_scale;  // sample value that means 1.0
};

Decoded decode(const std::filesystem::path& path) {
  cv::Mat m;
  try {
    m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode " + path.string() + ": " + e.what());
  }
  if (m.empty()) throw IoError("cannot read image " + path.string());
  if (m.channels() != 1 && m.channels() != 3 && m.channels() != 4) {
    throw IoError("unsupported channel count in " + path.string());
  }
  double full_scale = 1.0;
  switch (m.depth()) {
    case CV_8U: full_scale = 255.0; break;
    case CV_16U: full_scale = 65535.0; break;
    case CV_32F:
    case CV_64F: full_scale = 1.0; break;
    default: throw IoError("unsupported sample depth in " + path.string());
  }
  cv::Mat out;
  m.convertTo(out, CV_MAKETYPE(CV_64F, m.channels()));
  return {out, full_scale};
}

// Divides rather than multiplying by a reciprocal so an 8-bit sample decodes to
// exactly the value quantize_8bit() produces.
double unit(double v, double full_scale) {
  v /= full_scale;
  return std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
}

void encode(const cv::Mat& m, const std::filesystem::path& path) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0))); }

}  // namespace

RgbImage read_rgb(const std::filesystem::path& path) {
  const auto [m, scale] = decode(path);
  Plane r(m.rows, m.cols), g(m.rows, m.cols), b(m.rows, m.cols);
  const int ch = m.channels();
  for (int y = 0; y < m.rows; ++y) {
    const double* row = m.ptr<double>(y);
    for (int x = 0; x < m.cols; ++x) {
      const double* px = row + x * ch;
      if (ch == 1) {
        r(y, x) = g(y, x) = b(y, x) = unit(px[0], scale);
      } else {
        b(y, x) = unit(px[0], scale);  // OpenCV stores BGR
        g(y, x) = unit(px[1], scale);
        r(y, x) = unit(px[2], scale);
      }
    }
  }
  return RgbImage(std::move(r), std::move(g), std::move(b));
}

GrayImage read_gray(const std::filesystem::path& path) {
  const auto [m, scale] = decode(path);
  Plane v(m.rows, m.cols);
  const int ch = m.channels();
  for (int y = 0; y < m.rows; ++y) {
    const double* row = m.ptr<double>(y);
    for (int x = 0; x < m.cols; ++x) {
      const double* px = row + x * ch;
      v(y, x) = ch == 1 ? unit(px[0], scale) : (unit(px[0], scale) + unit(px[1], scale) + unit(px[2], scale)) / 3.0;
    }
  }
  return GrayImage(std::move(v));
}

void write_gray(const GrayImage& gray, const std::filesystem::path& path) {
  cv::Mat m(gray.height(), gray.width(), CV_8UC1);
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) m.at<std::uint8_t>(y, x) = to_byte(gray.values()(y, x));
  }
  encode(m, path);
}

void write_rgb(const RgbImage& img, const std::filesystem::path& path) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      m.at<cv::Vec3b>(y, x) = {to_byte(img.b()(y, x)), to_byte(img.g()(y, x)), to_byte(img.r()(y, x))};
    }
  }
  encode(m, path);
}

bool has_image_extension(const std::filesystem::path& path) {
  static const std::array<std::string, 9> known = {".png", ".jpg", ".jpeg", ".bmp", ".ppm",
                                                   ".pgm", ".pnm", ".tif", ".tiff"};
  const std::string ext = lower(path.extension().string());
  return std::find(known.begin(), known.end(), ext) != known.end();
}

}  // namespace c2g
