#include "c2g/c2gssim.hpp"

#include "c2g/colorspace.hpp"
#include "c2g/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace c2g {
namespace {

Plane reflect_pad(const Plane& p, int radius) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  Plane out(h + 2 * radius, w + 2 * radius);
  for (int y = 0; y < out.rows(); ++y) {
    const int sy = reflect_index(y - radius, h);
    for (int x = 0; x < out.cols(); ++x) {
      out(y, x) = p(sy, reflect_index(x - radius, w));
    }
  }
  return out;
}

double power_term(double base, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (exponent == 1.0) return base;
  return std::pow(base, exponent);
}

struct Terms {
  double l, c, s, q;
};

Terms terms_at(double uf, double ug, double df, double dg, double sf, double sg, double sfg, const MetricConfig& cfg) {
  const double l = (2.0 * uf * ug + cfg.c1) / (uf * uf + ug * ug + cfg.c1);
  const double c = (2.0 * df * dg + cfg.c2) / (df * df + dg * dg + cfg.c2);
  const double s = (sfg + cfg.c3) / (sf * sg + cfg.c3);
  return {l, c, s, power_term(l, cfg.alpha) * power_term(c, cfg.beta) * power_term(s, cfg.gamma)};
}

}  // namespace

ImageKind parse_image_kind(std::string_view text) {
  if (text == "photographic") return ImageKind::photographic;
  if (text == "synthetic") return ImageKind::synthetic;
  throw std::invalid_argument("unknown image kind '" + std::string(text) +
                              "' (expected photographic or synthetic)");
}

std::string to_string(ImageKind kind) {
  return kind == ImageKind::photographic ? "photographic" : "synthetic";
}

MetricConfig MetricConfig::for_kind(ImageKind kind) {
  MetricConfig cfg;
  cfg.set_kind(kind);
  return cfg;
}

void MetricConfig::set_kind(ImageKind k) {
  kind = k;
  alpha = k == ImageKind::photographic ? 1.0 : 0.0;
}

void MetricConfig::validate() const {
  if (window_size < 3 || window_size % 2 == 0) {
    throw std::invalid_argument("metric: window_size must be odd and >= 3");
  }
  if (!(window_sigma > 0.0) || !std::isfinite(window_sigma)) {
    throw std::invalid_argument("metric: window_sigma must be > 0");
  }
  if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0)) {
    throw std::invalid_argument("metric: C1, C2, C3 must be > 0");
  }
  if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0)) {
    throw std::invalid_argument("metric: exponents must be >= 0");
  }
  if ((kind == ImageKind::photographic && alpha != 1.0) || (kind == ImageKind::synthetic && alpha != 0.0)) {
    throw std::invalid_argument("metric: alpha must be 1 for photographic and 0 for synthetic images");
  }
}

std::vector<double> gaussian_profile(int size, double sigma) {
  if (size < 3 || size % 2 == 0) throw std::invalid_argument("gaussian_profile: size must be odd and >= 3");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian_profile: sigma must be > 0");
  const int r = size / 2;
  std::vector<double> p(size);
  double total = 0.0;
  for (int x = -r; x <= r; ++x) total += p[x + r] = std::exp(-static_cast<double>(x * x) / (2.0 * sigma * sigma));
  for (double& v : p) v /= total;
  return p;
}

Plane gaussian_window(int size, double sigma) {
  if (size < 3 || size % 2 == 0) throw std::invalid_argument("gaussian_window: size must be odd and >= 3");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian_window: sigma must be > 0");
  const int r = size / 2;
  Plane w(size, size);
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      w(y + r, x + r) = std::exp(-static_cast<double>(x * x + y * y) / (2.0 * sigma * sigma));
    }
  }
  return w / w.sum();
}

ReferenceContext::ReferenceContext(const LabImage& ref, const MetricConfig& cfg)
    : cfg_(cfg), h_(ref.height()), w_(ref.width()), radius_(cfg.window_size / 2) {
  cfg_.validate();
  const Plane window = gaussian_window(cfg_.window_size, cfg_.window_sigma);
  weights_.assign(window.data(), window.data() + window.size());
  weight_sum_ = 0.0;
  for (double wk : weights_) weight_sum_ += wk;
  profile_ = gaussian_profile(cfg_.window_size, cfg_.window_sigma);

  pad_L_ = reflect_pad(ref.L, radius_);
  pad_a_ = reflect_pad(ref.a, radius_);
  pad_b_ = reflect_pad(ref.b, radius_);
  padded_w_ = static_cast<int>(pad_L_.cols());

  mean_L_ = Plane::Zero(h_, w_);
  mean_a_ = Plane::Zero(h_, w_);
  mean_b_ = Plane::Zero(h_, w_);
  d_f_ = Plane::Zero(h_, w_);
  sigma_f_ = Plane::Zero(h_, w_);

  // Loops run over x innermost so each pixel accumulates its taps in order
  // while whole rows vectorize.
  const int n = cfg_.window_size;
  std::vector<double> deltas(weights_.size() * w_);
  for (int y = 0; y < h_; ++y) {
    double* mL = mean_L_.row(y).data();
    double* ma = mean_a_.row(y).data();
    double* mb = mean_b_.row(y).data();
    for (int dy = 0, k = 0; dy < n; ++dy) {
      for (int dx = 0; dx < n; ++dx, ++k) {
        const double wk = weights_[k];
        const std::size_t off = static_cast<std::size_t>(y + dy) * padded_w_ + dx;
        const double* L = pad_L_.data() + off;
        const double* A = pad_a_.data() + off;
        const double* B = pad_b_.data() + off;
        for (int x = 0; x < w_; ++x) {
          mL[x] += wk * L[x];
          ma[x] += wk * A[x];
          mb[x] += wk * B[x];
        }
      }
    }
    fill_color_deltas(y, deltas);
    double* d = d_f_.row(y).data();
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      const double* df = deltas.data() + k * w_;
      for (int x = 0; x < w_; ++x) d[x] += weights_[k] * df[x];
    }
    double* sf = sigma_f_.row(y).data();
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      const double* df = deltas.data() + k * w_;
      for (int x = 0; x < w_; ++x) {
        const double e = df[x] - d[x];
        sf[x] += weights_[k] * e * e;
      }
    }
    for (int x = 0; x < w_; ++x) sf[x] = std::sqrt(sf[x]);
  }
}

void ReferenceContext::fill_color_deltas(int y, std::vector<double>& deltas) const {
  deltas.resize(weights_.size() * w_);
  const int n = cfg_.window_size;
  const double* mL = mean_L_.row(y).data();
  const double* ma = mean_a_.row(y).data();
  const double* mb = mean_b_.row(y).data();
  for (int dy = 0, k = 0; dy < n; ++dy) {
    for (int dx = 0; dx < n; ++dx, ++k) {
      const std::size_t off = static_cast<std::size_t>(y + dy) * padded_w_ + dx;
      const double* L = pad_L_.data() + off;
      const double* A = pad_a_.data() + off;
      const double* B = pad_b_.data() + off;
      double* out = deltas.data() + static_cast<std::size_t>(k) * w_;
      for (int x = 0; x < w_; ++x) {
        const double eL = L[x] - mL[x];
        const double ea = A[x] - ma[x];
        const double eb = B[x] - mb[x];
        out[x] = std::sqrt(eL * eL + ea * ea + eb * eb);
      }
    }
  }
}

namespace {

// The helpers below are always inlined, so the vector-return ABI note is moot.
#pragma GCC diagnostic ignored "-Wpsabi"

constexpr int kLanes = 4;
typedef double Lanes __attribute__((vector_size(kLanes * sizeof(double))));
// Unaligned, alias-safe view for loads and stores.
typedef double LanesU __attribute__((vector_size(kLanes * sizeof(double)), aligned(8), may_alias));
typedef long long Bits __attribute__((vector_size(kLanes * sizeof(double))));

#define C2G_INLINE __attribute__((always_inline)) inline
C2G_INLINE Lanes load(const double* p) { return *reinterpret_cast<const LanesU*>(p); }
C2G_INLINE void store(double* p, Lanes v) { *reinterpret_cast<LanesU*>(p) = v; }
C2G_INLINE Lanes abs_lanes(Lanes v) {
  return reinterpret_cast<Lanes>(reinterpret_cast<Bits>(v) & (Bits{} + 0x7fffffffffffffffLL));
}
#undef C2G_INLINE

// Hot loop of the per-candidate statistics. Cloned for AVX2/AVX-512 where
// available; no FMA is involved, so every clone rounds identically.
//
// The mean uses the separable profile. Deviations a = |G - mg| are
// accumulated in one pass shifted by the centre tap s, then recentred:
// sum w (a - dg)^2 = sum w (a - s)^2 - 2 t (dg - W s) + W t^2 with t = dg - s.
// The centre weight bounds t^2 by var / w_centre, so the cancellation costs a
// few ulps of var at most.
__attribute__((target_clones("avx512f", "avx2", "default")))
void gray_kernel(const double* __restrict padded_gray, std::size_t stride, int n, int w,
                 const double* __restrict profile, const double* __restrict weights, double weight_sum,
                 const double* __restrict ef, double* __restrict column, double* __restrict mg,
                 double* __restrict dg, double* __restrict var, double* __restrict cov) {
  const int taps = n * n;
  const int r = n / 2;
  const int pw = w + 2 * r;
  for (int x = 0; x < pw; ++x) column[x] = 0.0;
  for (int dy = 0; dy < n; ++dy) {
    const double p = profile[dy];
    const double* G = padded_gray + static_cast<std::size_t>(dy) * stride;
    for (int x = 0; x < pw; ++x) column[x] += p * G[x];
  }
  for (int x = 0; x < w; ++x) mg[x] = dg[x] = var[x] = cov[x] = 0.0;
  for (int dx = 0; dx < n; ++dx) {
    const double p = profile[dx];
    for (int x = 0; x < w; ++x) mg[x] += p * column[x + dx];
  }

  const double* centre = padded_gray + static_cast<std::size_t>(r) * stride + r;
  double* shift = column;  // the column sums are no longer needed
  for (int x = 0; x < w; ++x) shift[x] = std::abs(centre[x] - mg[x]);
  // Explicit 8-wide vectors (split to the target's register width); the tail
  // repeats the same arithmetic per element.
  const int wv = w - w % kLanes;
  for (int dy = 0, k = 0; dy < n; ++dy) {
    for (int dx = 0; dx < n; ++dx, ++k) {
      const double wk = weights[k];
      const double* G = padded_gray + static_cast<std::size_t>(dy) * stride + dx;
      const double* e = ef + static_cast<std::size_t>(k) * w;
      const Lanes wkv = wk - Lanes{};
      for (int x = 0; x < wv; x += kLanes) {
        const Lanes a = abs_lanes(load(G + x) - load(mg + x));
        const Lanes b = a - load(shift + x);
        store(dg + x, load(dg + x) + wkv * a);
        store(var + x, load(var + x) + wkv * b * b);
        store(cov + x, load(cov + x) + load(e + x) * b);
      }
      for (int x = wv; x < w; ++x) {
        const double a = std::abs(G[x] - mg[x]);
        const double b = a - shift[x];
        dg[x] += wk * a;
        var[x] += wk * b * b;
        cov[x] += e[x] * b;
      }
    }
  }
  const double* ef_sum = ef + static_cast<std::size_t>(taps) * w;
  for (int x = 0; x < w; ++x) {
    const double t = dg[x] - shift[x];
    const double v = var[x] - 2.0 * t * (dg[x] - weight_sum * shift[x]) + weight_sum * t * t;
    var[x] = std::sqrt(std::max(v, 0.0));
    cov[x] -= t * ef_sum[x];
  }
}

}  // namespace

void ReferenceContext::centred_deltas(int y, std::vector<double>& deltas) const {
  fill_color_deltas(y, deltas);
  const double* df_mean = d_f_.row(y).data();
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    double* df = deltas.data() + k * w_;
    for (int x = 0; x < w_; ++x) df[x] = weights_[k] * (df[x] - df_mean[x]);
  }
  // Trailing row: sum of the centred deltas over the window.
  deltas.resize((weights_.size() + 1) * w_);
  double* sum = deltas.data() + weights_.size() * w_;
  std::fill(sum, sum + w_, 0.0);
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double* df = deltas.data() + k * w_;
    for (int x = 0; x < w_; ++x) sum[x] += df[x];
  }
}

void ReferenceContext::gray_row(int y, const double* padded_gray, const std::vector<double>& ef,
                                const GrayRow& out) const {
  thread_local std::vector<double> column;
  column.resize(padded_w_);
  gray_kernel(padded_gray + static_cast<std::size_t>(y) * padded_w_, padded_w_, cfg_.window_size, w_,
              profile_.data(), weights_.data(), weight_sum_, ef.data(), column.data(), out.u_g, out.d_g,
              out.sigma_g, out.sigma_fg);
}

Plane ReferenceContext::padded(const GrayImage& gray) const {
  if (gray.height() != h_ || gray.width() != w_) {
    throw DataError("c2g-ssim: gray candidate is " + std::to_string(gray.height()) + "x" +
                    std::to_string(gray.width()) + ", reference is " + std::to_string(h_) + "x" +
                    std::to_string(w_));
  }
  return reflect_pad(gray.values() * 100.0, radius_);
}

LocalStats ReferenceContext::stats(const GrayImage& gray) const {
  const Plane g = padded(gray);
  LocalStats s{mean_L_, Plane(h_, w_), d_f_, Plane(h_, w_), sigma_f_, Plane(h_, w_), Plane(h_, w_)};
  std::vector<double> deltas;
  for (int y = 0; y < h_; ++y) {
    centred_deltas(y, deltas);
    gray_row(y, g.data(), deltas,
             {s.u_g.row(y).data(), s.d_g.row(y).data(), s.sigma_g.row(y).data(), s.sigma_fg.row(y).data()});
  }
  return s;
}

double ReferenceContext::score(const GrayImage& gray) const {
  return mean_of(similarity_maps(stats(gray), cfg_).q_map);
}

std::vector<double> ReferenceContext::score_all(std::span<const GrayImage> grays, int jobs) const {
  std::vector<Plane> padded_grays;
  padded_grays.reserve(grays.size());
  for (const auto& g : grays) padded_grays.push_back(padded(g));

  // row_sums[j * h + y]: sum of q over row y of candidate j.
  std::vector<double> row_sums(grays.size() * h_, 0.0);
  parallel_for(static_cast<std::size_t>(h_), jobs, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    std::vector<double> deltas;
    centred_deltas(y, deltas);
    std::vector<double> ug(w_), dg(w_), sg(w_), sfg(w_);
    const double* uf = mean_L_.row(y).data();
    const double* df = d_f_.row(y).data();
    const double* sf = sigma_f_.row(y).data();
    for (std::size_t j = 0; j < grays.size(); ++j) {
      gray_row(y, padded_grays[j].data(), deltas, {ug.data(), dg.data(), sg.data(), sfg.data()});
      double sum = 0.0;
      for (int x = 0; x < w_; ++x) sum += terms_at(uf[x], ug[x], df[x], dg[x], sf[x], sg[x], sfg[x], cfg_).q;
      row_sums[j * h_ + row] = sum;
    }
  });

  std::vector<double> scores(grays.size());
  for (std::size_t j = 0; j < grays.size(); ++j) {
    double total = 0.0;
    for (int y = 0; y < h_; ++y) total += row_sums[j * h_ + y];
    scores[j] = total / static_cast<double>(static_cast<long>(h_) * w_);
  }
  return scores;
}

LocalStats local_stats(const LabImage& ref, const GrayImage& gray, const MetricConfig& cfg) {
  return ReferenceContext(ref, cfg).stats(gray);
}

SimilarityMaps similarity_maps(const LocalStats& st, const MetricConfig& cfg) {
  const auto h = st.u_f.rows();
  const auto w = st.u_f.cols();
  SimilarityMaps m{Plane(h, w), Plane(h, w), Plane(h, w), Plane(h, w)};
  for (Eigen::Index i = 0; i < st.u_f.size(); ++i) {
    const Terms t = terms_at(st.u_f.data()[i], st.u_g.data()[i], st.d_f.data()[i], st.d_g.data()[i],
                             st.sigma_f.data()[i], st.sigma_g.data()[i], st.sigma_fg.data()[i], cfg);
    m.l_map.data()[i] = t.l;
    m.c_map.data()[i] = t.c;
    m.s_map.data()[i] = t.s;
    m.q_map.data()[i] = t.q;
  }
  return m;
}

double mean_of(const Plane& p) {
  double total = 0.0;
  for (Eigen::Index y = 0; y < p.rows(); ++y) {
    double sum = 0.0;
    for (Eigen::Index x = 0; x < p.cols(); ++x) sum += p(y, x);
    total += sum;
  }
  return total / static_cast<double>(p.size());
}

double c2g_ssim(const RgbImage& ref, const GrayImage& gray, const MetricConfig& cfg) {
  if (gray.height() != ref.height() || gray.width() != ref.width()) {
    throw DataError("c2g-ssim: reference and gray candidate differ in size");
  }
  return ReferenceContext(srgb_to_lab(ref), cfg).score(gray);
}

}  // namespace c2g
