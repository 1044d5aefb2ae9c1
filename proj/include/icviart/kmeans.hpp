#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

#include "icviart/data.hpp"
#include "icviart/rng.hpp"

namespace icviart {

struct KMeansResult {
  Eigen::MatrixXd centroids;  // k x d
  Labels labels;
  double inertia = 0.0;
  int iterations = 0;
};

// D^2 seeding: first centroid uniform, each further one sampled proportional
// to the squared distance to the nearest centroid chosen so far.
inline Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& X, int k, Rng& rng) {
  const long n = X.rows();
  if (k < 1 || k > n) throw std::invalid_argument("kmeanspp_seed: need 1 <= k <= N");

  Eigen::MatrixXd centroids(k, X.cols());
  std::vector<char> chosen(n, 0);

  long first = static_cast<long>(rng.below(static_cast<std::size_t>(n)));
  centroids.row(0) = X.row(first);
  chosen[first] = 1;

  Eigen::VectorXd d2 = (X.rowwise() - X.row(first)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    long pick = -1;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      double acc = 0.0;
      for (long i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc >= target && !chosen[i]) { pick = i; break; }
      }
    }
    if (pick < 0) {  // all mass on chosen points (duplicates); take first free
      for (long i = 0; i < n; ++i)
        if (!chosen[i]) { pick = i; break; }
    }
    centroids.row(c) = X.row(pick);
    chosen[pick] = 1;
    d2 = d2.cwiseMin((X.rowwise() - X.row(pick)).rowwise().squaredNorm());
  }
  return centroids;
}

// Lloyd iterations from given seeds. Stops when the Frobenius norm of the
// centroid shift drops below tol. Empty clusters are reseeded to the sample
// farthest from its current centroid.
inline KMeansResult kmeans_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& seeds,
                               int max_iter = 300, double tol = 1e-6) {
  const long n = X.rows(), d = X.cols();
  const int k = static_cast<int>(seeds.rows());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans_fit: need 1 <= k <= N");

  KMeansResult res;
  res.centroids = seeds;
  res.labels.assign(static_cast<std::size_t>(n), 0);

  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    // assignment
    for (long i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double dist = (X.row(i) - res.centroids.row(c)).squaredNorm();
        if (dist < best) { best = dist; arg = c; }
      }
      res.labels[static_cast<std::size_t>(i)] = arg;
    }
    // empty-cluster repair: farthest sample from its own centroid
    std::vector<long> counts(k, 0);
    for (long i = 0; i < n; ++i) ++counts[res.labels[static_cast<std::size_t>(i)]];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      long far = 0;
      double far_d = -1.0;
      for (long i = 0; i < n; ++i) {
        const int owner = res.labels[static_cast<std::size_t>(i)];
        if (counts[owner] <= 1) continue;
        const double dist = (X.row(i) - res.centroids.row(owner)).squaredNorm();
        if (dist > far_d) { far_d = dist; far = i; }
      }
      --counts[res.labels[static_cast<std::size_t>(far)]];
      res.labels[static_cast<std::size_t>(far)] = c;
      ++counts[c];
    }
    // update
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, d);
    for (long i = 0; i < n; ++i) next.row(res.labels[static_cast<std::size_t>(i)]) += X.row(i);
    for (int c = 0; c < k; ++c) next.row(c) /= static_cast<double>(counts[c]);

    const double shift = (next - res.centroids).norm();
    res.centroids = next;
    if (shift < tol) break;
  }

  res.inertia = 0.0;
  for (long i = 0; i < n; ++i)
    res.inertia += (X.row(i) - res.centroids.row(res.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return res;
}

// Repeated seeded runs; keeps the lowest-inertia solution.
inline KMeansResult best_of(const Eigen::MatrixXd& X, int k, int trials, std::uint64_t seed,
                            int max_iter = 300, double tol = 1e-6) {
  if (trials < 1) throw std::invalid_argument("best_of: trials must be >= 1");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    KMeansResult run = kmeans_fit(X, kmeanspp_seed(X, k, rng), max_iter, tol);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

}  // namespace icviart
