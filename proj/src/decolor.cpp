#include "c2g/decolor.hpp"

#include "c2g/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2g {

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

void DecolorConfig::validate() const {
  if (c_grid.empty()) throw std::invalid_argument("decolor: c grid is empty");
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > 0.0) || !std::isfinite(c_grid[i])) {
      throw std::invalid_argument("decolor: c grid values must be finite and > 0");
    }
    if (i > 0 && !(c_grid[i] > c_grid[i - 1])) {
      throw std::invalid_argument("decolor: c grid must be strictly increasing");
    }
  }
  if (!(fixed_c > 0.0) || !std::isfinite(fixed_c)) throw std::invalid_argument("decolor: fixed_c must be > 0");
  if (jobs < 1) throw std::invalid_argument("decolor: jobs must be >= 1");
  metric.validate();
}

GrayImage lightness_to_gray(const Plane& lightness) {
  Plane out(lightness.rows(), lightness.cols());
  for (Eigen::Index i = 0; i < lightness.size(); ++i) {
    const double L = std::clamp(lightness.data()[i], 0.0, 100.0);
    // r == g == b for a = b = 0, so one channel gives the three-channel mean.
    const double v = std::clamp(achromatic_srgb(L), 0.0, 1.0);
    out.data()[i] = (v + v + v) / 3.0;
  }
  return GrayImage(std::move(out));
}

namespace {

// Doubles held by one scoring batch (candidates plus their padded copies).
constexpr std::size_t kBatchBudget = std::size_t{1} << 25;

Plane chroma_sum_of(const LabImage& lab, const RankPolicy& policy) {
  Plane a = reconstruct(svd_decompose(lab.a), policy);
  Plane b = reconstruct(svd_decompose(lab.b), policy);
  return a + b;
}

}  // namespace

ChromaDecomposition::ChromaDecomposition(const RgbImage& img, const RankPolicy& policy)
    : ChromaDecomposition(srgb_to_lab(img), policy) {}

ChromaDecomposition::ChromaDecomposition(const LabImage& lab, const RankPolicy& policy)
    : lightness_(lab.L), chroma_sum_(chroma_sum_of(lab, policy)) {}

GrayImage ChromaDecomposition::render(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("decolor: c must be finite and >= 0");
  return lightness_to_gray(lightness_ + c * chroma_sum_);
}

GrayImage decolor_fixed(const RgbImage& img, double c, const RankPolicy& policy) {
  if (!(c > 0.0)) throw std::invalid_argument("decolor_fixed: c must be > 0");
  return ChromaDecomposition(img, policy).render(c);
}

DecolorResult decolor_adaptive(const RgbImage& img, const DecolorConfig& cfg) {
  cfg.validate();
  const LabImage lab = srgb_to_lab(img);
  const ChromaDecomposition chroma(lab, cfg.rank_policy);
  const ReferenceContext reference(lab, cfg.metric);
  return decolor_adaptive(chroma, reference, cfg);
}

DecolorResult decolor_adaptive(const ChromaDecomposition& chroma, const ReferenceContext& reference,
                               const DecolorConfig& cfg) {
  cfg.validate();
  if (chroma.lightness().rows() != reference.height() || chroma.lightness().cols() != reference.width()) {
    throw std::invalid_argument("decolor_adaptive: reference and image differ in size");
  }

  const auto candidate = [&](double c) {
    GrayImage gray = chroma.render(c);
    return cfg.quantize ? quantize_8bit(gray) : gray;
  };

  // Candidates are scored in batches so the reference-side color differences
  // are computed once per batch; the batch size bounds memory on large images.
  const std::size_t grid = cfg.c_grid.size();
  const auto pixels = static_cast<std::size_t>(reference.height()) * reference.width();
  const std::size_t batch = std::clamp<std::size_t>(kBatchBudget / (2 * pixels), 1, grid);
  std::vector<CScore> trace(grid);
  for (std::size_t first = 0; first < grid; first += batch) {
    const std::size_t count = std::min(batch, grid - first);
    std::vector<GrayImage> grays;
    grays.reserve(count);
    for (std::size_t i = first; i < first + count; ++i) grays.push_back(candidate(cfg.c_grid[i]));
    const std::vector<double> scores = reference.score_all(grays, cfg.jobs);
    for (std::size_t i = 0; i < count; ++i) trace[first + i] = {cfg.c_grid[first + i], scores[i]};
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].score > trace[best].score) best = i;
  }
  // Re-rendering is deterministic, so this is the exact gray that was scored.
  return {candidate(trace[best].c), trace[best].c, trace[best].score, std::move(trace)};
}

}  // namespace c2g
