#pragma once

#include "c2g/image.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>

namespace c2g {

/// Thin SVD of an h x w plane: plane = u * diag(s) * v^T, r = min(h, w).
struct SvdFactors {
  Eigen::MatrixXd u;  // h x r, orthonormal columns
  Eigen::VectorXd s;  // non-increasing, >= 0
  Eigen::MatrixXd v;  // w x r, orthonormal columns

  Eigen::Index rows() const { return u.rows(); }
  Eigen::Index cols() const { return v.rows(); }
};

/// How many singular triplets a reconstruction keeps.
class RankPolicy {
 public:
  enum class Mode { full_numerical_rank, fixed_k, energy_fraction };

  /// Keeps every singular value above tol * s[0]. Without a tol the default
  /// max(h, w) * machine epsilon is used.
  static RankPolicy full(std::optional<double> tol = std::nullopt);
  static RankPolicy fixed(int k);
  /// Smallest k whose leading squared singular values reach `fraction` of the total.
  static RankPolicy energy(double fraction);

  /// Parses "full", "k=<n>" or "energy=<f>".
  static RankPolicy parse(std::string_view text);
  std::string to_string() const;

  Mode mode() const { return mode_; }
  int k() const { return k_; }
  double fraction() const { return fraction_; }
  std::optional<double> tol() const { return tol_; }

  bool operator==(const RankPolicy&) const = default;

 private:
  RankPolicy(Mode mode, int k, double fraction, std::optional<double> tol)
      : mode_(mode), k_(k), fraction_(fraction), tol_(tol) {}

  Mode mode_;
  int k_;
  double fraction_;
  std::optional<double> tol_;
};

/// Throws std::invalid_argument on an empty or non-finite plane.
SvdFactors svd_decompose(const Plane& plane);

/// Number of singular values strictly above tol * s[0]; 0 for an all-zero spectrum.
int numerical_rank(const SvdFactors& f, double tol);

/// Rank actually kept by `policy`, always within [0, s.size()].
int retained_rank(const SvdFactors& f, const RankPolicy& policy);

/// Sum of the leading retained rank-1 terms, same shape as the decomposed plane.
Plane reconstruct(const SvdFactors& f, const RankPolicy& policy);

}  // namespace c2g
