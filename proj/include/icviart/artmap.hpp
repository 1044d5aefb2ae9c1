#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "icviart/matrix_ops.hpp"

namespace icviart {

// Fuzzy ART module A. One weight row per category, complement-coded inputs.
// instance_count tracks how many samples currently resonate with each
// category; a category at zero is eligible for pruning.
struct ArtA {
  Eigen::MatrixXd W;  // C_a x 2d
  double rho = 0.0;
  double alpha = 1e-3;
  double beta = 1.0;
  std::vector<long> instance_count;

  int categories() const { return static_cast<int>(W.rows()); }
};

// Map field: one row per ARTa category, one column per live cluster.
struct MapField {
  Eigen::MatrixXd W;  // C_a x k'
  double rho = 0.7;
  double beta = 1e-3;
  double epsilon = 0.01;

  int clusters() const { return static_cast<int>(W.cols()); }
};

// T_j = |x ^ w_j| / (alpha + |w_j|)
inline Eigen::VectorXd activations(const ArtA& art, const Eigen::VectorXd& x) {
  const int c = art.categories();
  Eigen::VectorXd t(c);
  for (int j = 0; j < c; ++j) {
    const Eigen::VectorXd w = art.W.row(j).transpose();
    t(j) = x.cwiseMin(w).sum() / (art.alpha + w.sum());
  }
  return t;
}

// M_J = |x ^ w_J| / |x|; with complement coding |x| = d.
inline double match_value(const ArtA& art, const Eigen::VectorXd& x, int j) {
  const Eigen::VectorXd w = art.W.row(j).transpose();
  return x.cwiseMin(w).sum() / x.sum();
}

inline void learn_category(ArtA& art, int j, const Eigen::VectorXd& x) {
  const Eigen::VectorXd w = art.W.row(j).transpose();
  art.W.row(j) = ((1.0 - art.beta) * w + art.beta * x.cwiseMin(w)).transpose();
}

// Creates a category directly from the input and gives it an all-ones map
// field row. Returns the new category id.
inline int fast_commit(ArtA& art, MapField& mf, const Eigen::VectorXd& x) {
  detail::append_row(art.W, x);
  art.instance_count.push_back(0);
  detail::append_row(mf.W, Eigen::VectorXd::Ones(mf.W.cols()));
  return art.categories() - 1;
}

inline double mf_match(const MapField& mf, int j, const Eigen::VectorXd& y) {
  const Eigen::VectorXd w = mf.W.row(j).transpose();
  return y.cwiseMin(w).sum() / y.sum();
}

inline void mf_learn(MapField& mf, int j, const Eigen::VectorXd& y) {
  const Eigen::VectorXd w = mf.W.row(j).transpose();
  mf.W.row(j) = ((1.0 - mf.beta) * w + mf.beta * y.cwiseMin(w)).transpose();
}

// Cluster predicted for a category: argmax of its map field row.
inline int mf_predict(const MapField& mf, int j) {
  return static_cast<int>(detail::argmax(mf.W.row(j).transpose()));
}

struct ResonanceResult {
  int category = -1;
  bool created = false;
};

// Winner-take-all search over descending activations. A category must pass
// the (possibly raised) ARTa vigilance and the map field vigilance; a map
// field mismatch raises the working vigilance to M_J + epsilon and the search
// continues. When everything is inhibited a category is fast-committed.
// Learning (ARTa and map field) is applied to the returned category.
inline ResonanceResult search_and_resonate(ArtA& art, MapField& mf, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y) {
  double rho_work = art.rho;
  const int c = art.categories();
  if (c > 0) {
    const Eigen::VectorXd t = activations(art, x);
    std::vector<char> inhibited(static_cast<std::size_t>(c), 0);
    for (int remaining = c; remaining > 0; --remaining) {
      int j = -1;
      for (int i = 0; i < c; ++i)
        if (!inhibited[static_cast<std::size_t>(i)] && (j < 0 || t(i) > t(j))) j = i;
      const double m = match_value(art, x, j);
      if (m < rho_work) {
        inhibited[static_cast<std::size_t>(j)] = 1;
        continue;
      }
      if (mf_match(mf, j, y) < mf.rho) {
        rho_work = m + mf.epsilon;  // match tracking
        inhibited[static_cast<std::size_t>(j)] = 1;
        continue;
      }
      learn_category(art, j, x);
      mf_learn(mf, j, y);
      return {j, false};
    }
  }
  const int j = fast_commit(art, mf, x);
  mf_learn(mf, j, y);
  return {j, true};
}

// Resets a category's weights to the element-wise minimum of the samples
// still assigned to it.
inline void shrink_category(ArtA& art, int r, const std::vector<Eigen::VectorXd>& assigned) {
  if (assigned.empty()) throw std::logic_error("shrink_category: no assigned samples");
  Eigen::VectorXd w = assigned.front();
  for (std::size_t i = 1; i < assigned.size(); ++i) w = w.cwiseMin(assigned[i]);
  art.W.row(r) = w.transpose();
}

// Removes an empty category's row from both weight matrices; ids above r
// shift down and the caller must remap its per-sample category ids.
inline void prune_category(ArtA& art, MapField& mf, int r) {
  if (r < 0 || r >= art.categories()) throw std::out_of_range("prune_category: bad id");
  if (art.instance_count[static_cast<std::size_t>(r)] != 0)
    throw std::logic_error("prune_category: category still has assigned samples");
  detail::remove_row(art.W, r);
  detail::remove_row(mf.W, r);
  art.instance_count.erase(art.instance_count.begin() + r);
}

// Fuses clusters i and j in the map field: per row, the merged entry is the
// max of the two when the row's prediction lies in {i, j} and the min
// otherwise; the merged column is appended last and columns i and j are
// deleted (higher index first).
inline void mf_merge_columns(MapField& mf, int i, int j) {
  const int kprime = mf.clusters();
  if (i == j || i < 0 || j < 0 || i >= kprime || j >= kprime)
    throw std::invalid_argument("mf_merge_columns: bad column pair");
  Eigen::VectorXd v(mf.W.rows());
  for (long l = 0; l < mf.W.rows(); ++l) {
    const int pred = mf_predict(mf, static_cast<int>(l));
    const double wi = mf.W(l, i), wj = mf.W(l, j);
    v(l) = (pred == i || pred == j) ? std::max(wi, wj) : std::min(wi, wj);
  }
  detail::append_column(mf.W, v);
  detail::remove_column(mf.W, std::max(i, j));
  detail::remove_column(mf.W, std::min(i, j));
}

// Splits category q's cluster assignment: a new column carrying the row's
// peak value is appended and the old peak entry drops to the row minimum, so
// q's prediction moves to the new column. A uniform row c*1 instead decays
// to (c - delta)*1. Returns the new column's id.
inline int mf_split_column(MapField& mf, int q, double delta = 1e-6) {
  if (q < 0 || q >= static_cast<int>(mf.W.rows())) throw std::out_of_range("mf_split_column: bad category");
  const Eigen::VectorXd row = mf.W.row(q).transpose();
  const int h = static_cast<int>(detail::argmax(row));
  const double mx = row(h), mn = row.minCoeff();
  if (mx == mn) {
    mf.W.row(q).setConstant(mx - delta);
  } else {
    mf.W(q, h) = mn;
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mf.W.rows());
  v(q) = mx;
  detail::append_column(mf.W, v);
  return mf.clusters() - 1;
}

}  // namespace icviart
