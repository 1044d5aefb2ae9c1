#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "icviart/data.hpp"

namespace icviart {

// The two views of a dataset used during training: X_a is min-max scaled and
// complement coded (entries [x, 1-x], so every row sums to d exactly); X_b is
// standardized with the population denominator. Scaling parameters are kept
// so centroids found in standardized space can be mapped into X_a space.
struct PreparedData {
  Eigen::MatrixXd X_a;  // N x 2d, in [0,1]
  Eigen::MatrixXd X_b;  // N x d
  Eigen::VectorXd feat_min, feat_max;    // min-max parameters
  Eigen::VectorXd feat_mean, feat_std;   // standardization parameters

  long n() const { return X_b.rows(); }
  long dim() const { return X_b.cols(); }
};

// Constant features map to 0 under both scalings (guarded denominators), so
// they carry no information instead of producing NaN.
inline PreparedData prepare(const Dataset& ds) {
  const long n = ds.n(), d = ds.dim();
  if (n < 2) throw std::invalid_argument("prepare: need at least 2 samples");

  PreparedData out;
  out.feat_min = ds.X.colwise().minCoeff();
  out.feat_max = ds.X.colwise().maxCoeff();
  out.feat_mean = ds.X.colwise().mean();
  out.feat_std.resize(d);
  for (long j = 0; j < d; ++j) {
    const double var = (ds.X.col(j).array() - out.feat_mean(j)).square().sum() / static_cast<double>(n);
    out.feat_std(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }

  out.X_a.resize(n, 2 * d);
  out.X_b.resize(n, d);
  for (long j = 0; j < d; ++j) {
    const double range = out.feat_max(j) - out.feat_min(j);
    for (long i = 0; i < n; ++i) {
      const double mm = range > 0.0 ? (ds.X(i, j) - out.feat_min(j)) / range : 0.0;
      out.X_a(i, j) = mm;
      out.X_a(i, j + d) = 1.0 - mm;
      out.X_b(i, j) = (ds.X(i, j) - out.feat_mean(j)) / out.feat_std(j);
    }
  }
  return out;
}

// Maps a centroid expressed in standardized space to a complement-coded ARTa
// weight vector: inverse standardization, min-max scaling (clamped to the
// unit interval), complement coding.
inline Eigen::VectorXd centroid_to_category(const Eigen::VectorXd& mu_std, const PreparedData& prep) {
  const long d = prep.dim();
  if (mu_std.size() != d) throw std::invalid_argument("centroid_to_category: dimension mismatch");
  Eigen::VectorXd out(2 * d);
  for (long j = 0; j < d; ++j) {
    const double raw = mu_std(j) * prep.feat_std(j) + prep.feat_mean(j);
    const double range = prep.feat_max(j) - prep.feat_min(j);
    double mm = range > 0.0 ? (raw - prep.feat_min(j)) / range : 0.0;
    mm = std::clamp(mm, 0.0, 1.0);
    out(j) = mm;
    out(j + d) = 1.0 - mm;
  }
  return out;
}

}  // namespace icviart
