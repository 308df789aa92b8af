#pragma once

#include "c2g/c2gssim.hpp"
#include "c2g/image.hpp"
#include "c2g/lowrank.hpp"

#include <vector>

namespace c2g {

/// 0.05, 0.10, ..., 1.00, each computed as i / 20 so 0.25 is exact.
std::vector<double> default_c_grid();

struct DecolorConfig {
  std::vector<double> c_grid = default_c_grid();
  RankPolicy rank_policy = RankPolicy::full();
  MetricConfig metric;
  double fixed_c = 0.25;
  /// Score (and return) candidates as their 8-bit quantized versions.
  bool quantize = false;
  /// Worker threads for the c sweep; results do not depend on it.
  int jobs = 1;

  /// Checks the grid (non-empty, strictly increasing, positive), fixed_c and the metric.
  void validate() const;
};

struct CScore {
  double c;
  double score;
};

struct DecolorResult {
  GrayImage gray;
  double chosen_c;
  double score;
  std::vector<CScore> per_c_scores;  // grid order
};

/// Lightness plus the low-rank chrominance sum of one image, ready to be
/// rendered for any weight c. The SVD work is done once here.
class ChromaDecomposition {
 public:
  ChromaDecomposition(const RgbImage& img, const RankPolicy& policy);
  ChromaDecomposition(const LabImage& lab, const RankPolicy& policy);

  const Plane& lightness() const { return lightness_; }
  /// Reconstructed a plane plus reconstructed b plane.
  const Plane& chroma_sum() const { return chroma_sum_; }

  /// L + c * (Cr_a + Cr_b) clamped to [0,100], mapped back to sRGB as an
  /// achromatic color and averaged over the three encoded channels.
  GrayImage render(double c) const;

 private:
  Plane lightness_;
  Plane chroma_sum_;
};

/// Maps a lightness plane (clamped to [0,100], zero chroma) to sRGB and
/// averages the encoded channels.
GrayImage lightness_to_gray(const Plane& lightness);

GrayImage decolor_fixed(const RgbImage& img, double c, const RankPolicy& policy);

/// Sweeps cfg.c_grid, scores every candidate against `img` and keeps the best.
/// Ties go to the smallest c.
DecolorResult decolor_adaptive(const RgbImage& img, const DecolorConfig& cfg);

/// Same sweep over an already decomposed image and a prepared reference.
DecolorResult decolor_adaptive(const ChromaDecomposition& chroma, const ReferenceContext& reference,
                               const DecolorConfig& cfg);

}  // namespace c2g
