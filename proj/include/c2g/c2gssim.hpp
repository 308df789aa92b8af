#pragma once

#include "c2g/image.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace c2g {

/// Photographic content weights the lightness term (alpha = 1); synthetic
/// content ignores it (alpha = 0).
enum class ImageKind { photographic, synthetic };

ImageKind parse_image_kind(std::string_view text);
std::string to_string(ImageKind kind);

/// Parameters of the color-to-gray similarity index.
///
/// Constants are on the CIELAB lightness scale (0..100): C1 = (0.01 * 100)^2,
/// C2 = (0.03 * 100)^2, C3 = C2 / 2. The window is the usual 11x11 Gaussian
/// with sigma 1.5.
struct MetricConfig {
  int window_size = 11;
  double window_sigma = 1.5;
  double c1 = 1.0;
  double c2 = 9.0;
  double c3 = 4.5;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  ImageKind kind = ImageKind::photographic;

  /// Default config with alpha set from `kind`.
  static MetricConfig for_kind(ImageKind kind);
  /// Switches kind and the matching alpha together.
  void set_kind(ImageKind k);
  /// Throws std::invalid_argument when any invariant is broken.
  void validate() const;

  bool operator==(const MetricConfig&) const = default;
};

/// Normalized 1-D Gaussian; its outer product with itself is gaussian_window.
std::vector<double> gaussian_profile(int size, double sigma);

/// Normalized size x size Gaussian weights (row-major).
Plane gaussian_window(int size, double sigma);

/// Per-pixel windowed statistics of the reference (f) and the gray candidate (g).
/// The gray candidate is compared on the 0..100 scale.
struct LocalStats {
  Plane u_f, u_g;
  Plane d_f, d_g;
  Plane sigma_f, sigma_g;
  Plane sigma_fg;
};

struct SimilarityMaps {
  Plane l_map, c_map, s_map, q_map;
};

/// Reference-side work shared by every candidate scored against one color image:
/// reflected Lab planes, windowed color means, d_f and sigma_f.
class ReferenceContext {
 public:
  ReferenceContext(const LabImage& ref, const MetricConfig& cfg);

  const MetricConfig& config() const { return cfg_; }
  int height() const { return h_; }
  int width() const { return w_; }

  /// Throws DataError if the candidate's dimensions differ from the reference.
  LocalStats stats(const GrayImage& gray) const;
  double score(const GrayImage& gray) const;

  /// Scores several candidates in one pass over the reference. Each result is
  /// bit-identical to score() on that candidate, for any `jobs`.
  std::vector<double> score_all(std::span<const GrayImage> grays, int jobs = 1) const;

 private:
  struct GrayRow {
    double* u_g;
    double* d_g;
    double* sigma_g;
    double* sigma_fg;
  };

  // Color-difference magnitudes of row y, laid out [tap][x].
  void fill_color_deltas(int y, std::vector<double>& deltas) const;
  // w_k * (delta - d_f) per tap, the reference factor of sigma_fg, followed by
  // one row holding their sum over the taps.
  void centred_deltas(int y, std::vector<double>& deltas) const;
  void gray_row(int y, const double* padded_gray, const std::vector<double>& ef, const GrayRow& out) const;
  Plane padded(const GrayImage& gray) const;

  MetricConfig cfg_;
  int h_, w_, radius_;
  int padded_w_;
  std::vector<double> weights_;
  std::vector<double> profile_;
  double weight_sum_ = 1.0;
  Plane pad_L_, pad_a_, pad_b_;
  Plane mean_L_, mean_a_, mean_b_;
  Plane d_f_, sigma_f_;
};

LocalStats local_stats(const LabImage& ref, const GrayImage& gray, const MetricConfig& cfg);

/// Luminance, contrast and structure terms and their product
/// q = L^alpha * C^beta * S^gamma, all pointwise.
SimilarityMaps similarity_maps(const LocalStats& stats, const MetricConfig& cfg);

/// Arithmetic mean of a plane: each row summed left to right, then the row
/// sums added top to bottom.
double mean_of(const Plane& p);

/// Mean of the similarity map between a color reference and a gray candidate.
double c2g_ssim(const RgbImage& ref, const GrayImage& gray, const MetricConfig& cfg);

/// Index into [0, n) with symmetric (edge-repeating) reflection, for any integer i.
inline int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace c2g
