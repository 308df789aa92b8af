#include "c2g/lowrank.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace c2g {

RankPolicy RankPolicy::full(std::optional<double> tol) {
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("rank policy: tol must be > 0");
  return RankPolicy(Mode::full_numerical_rank, 0, 1.0, tol);
}

RankPolicy RankPolicy::fixed(int k) {
  if (k < 1) throw std::invalid_argument("rank policy: k must be >= 1");
  return RankPolicy(Mode::fixed_k, k, 1.0, std::nullopt);
}

RankPolicy RankPolicy::energy(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("rank policy: energy fraction must be in (0,1]");
  }
  return RankPolicy(Mode::energy_fraction, 0, fraction, std::nullopt);
}

RankPolicy RankPolicy::parse(std::string_view text) {
  if (text == "full") return full();
  const auto bad = [&] { return std::invalid_argument("rank policy: cannot parse '" + std::string(text) + "'"); };
  if (text.starts_with("k=")) {
    const auto digits = text.substr(2);
    int k = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || end != digits.data() + digits.size()) throw bad();
    return fixed(k);
  }
  if (text.starts_with("energy=")) {
    const std::string digits(text.substr(7));
    std::size_t used = 0;
    double f = 0.0;
    try {
      f = std::stod(digits, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != digits.size()) throw bad();
    return energy(f);
  }
  throw bad();
}

std::string RankPolicy::to_string() const {
  std::ostringstream os;
  switch (mode_) {
    case Mode::full_numerical_rank:
      os << "full";
      break;
    case Mode::fixed_k:
      os << "k=" << k_;
      break;
    case Mode::energy_fraction:
      os << "energy=" << fraction_;
      break;
  }
  return os.str();
}

SvdFactors svd_decompose(const Plane& plane) {
  if (plane.rows() < 1 || plane.cols() < 1) {
    throw std::invalid_argument("svd_decompose: empty plane");
  }
  if (!plane.allFinite()) {
    throw std::invalid_argument("svd_decompose: plane contains non-finite entries");
  }
  const Eigen::MatrixXd m = plane;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

int numerical_rank(const SvdFactors& f, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numerical_rank: tol must be > 0");
  if (f.s.size() == 0 || f.s[0] == 0.0) return 0;
  const double cutoff = tol * f.s[0];
  int count = 0;
  for (Eigen::Index i = 0; i < f.s.size(); ++i) {
    if (f.s[i] > cutoff) ++count;
  }
  return count;
}

int retained_rank(const SvdFactors& f, const RankPolicy& policy) {
  const int available = static_cast<int>(f.s.size());
  switch (policy.mode()) {
    case RankPolicy::Mode::full_numerical_rank: {
      const double tol = policy.tol().value_or(static_cast<double>(std::max(f.rows(), f.cols())) *
                                               std::numeric_limits<double>::epsilon());
      return numerical_rank(f, tol);
    }
    case RankPolicy::Mode::fixed_k:
      return std::min(policy.k(), available);
    case RankPolicy::Mode::energy_fraction: {
      const double total = f.s.squaredNorm();
      if (total == 0.0) return 0;
      double kept = 0.0;
      for (int i = 0; i < available; ++i) {
        kept += f.s[i] * f.s[i];
        if (kept >= policy.fraction() * total) return i + 1;
      }
      return available;
    }
  }
  return available;
}

Plane reconstruct(const SvdFactors& f, const RankPolicy& policy) {
  const int k = retained_rank(f, policy);
  if (k == 0) return Plane::Zero(f.rows(), f.cols());
  const auto u = f.u.leftCols(k);
  const auto v = f.v.leftCols(k);
  return u * f.s.head(k).asDiagonal() * v.transpose();
}

}  // namespace c2g
