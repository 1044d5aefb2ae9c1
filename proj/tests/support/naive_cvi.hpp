#pragma once

// Straight-line transcriptions of the six validity indices, computed from
// raw data and labels with plain loops. Deliberately independent of the
// library: no Eigen, no shared helpers, own Cholesky. Used as the oracle the
// incremental and batch implementations are checked against.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace naive {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

enum class Index { CH, WB, DB, XB, PBM, NI };

inline double sqdist(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc;
}

// ln|A + delta I| by an unpivoted Cholesky written out longhand.
inline double logdet(const Mat& cov, double delta) {
  const std::size_t d = cov.size();
  Mat a = cov;
  for (std::size_t i = 0; i < d; ++i) a[i][i] += delta;
  Mat l(d, Vec(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t p = 0; p < j; ++p) s -= l[i][p] * l[j][p];
      if (i == j) {
        l[i][i] = std::sqrt(std::max(s, 1e-300));
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) acc += std::log(l[i][i]);
  return 2.0 * acc;
}

inline double value(Index index, const Mat& x, const std::vector<int>& labels) {
  const std::size_t n = x.size();
  if (n == 0 || labels.size() != n) throw std::invalid_argument("naive: bad inputs");
  const std::size_t d = x[0].size();

  int k = 0;
  for (int v : labels) k = std::max(k, v + 1);

  std::vector<long> count(static_cast<std::size_t>(k), 0);
  for (int v : labels) ++count[static_cast<std::size_t>(v)];
  for (long c : count)
    if (c == 0) throw std::invalid_argument("naive: empty cluster");

  // data mean and total scatter
  Vec mu_data(d, 0.0);
  for (const Vec& row : x)
    for (std::size_t j = 0; j < d; ++j) mu_data[j] += row[j];
  for (std::size_t j = 0; j < d; ++j) mu_data[j] /= static_cast<double>(n);
  double e0 = 0.0;
  for (const Vec& row : x) e0 += sqdist(row, mu_data);

  // per-cluster means and compactness
  Mat mu(static_cast<std::size_t>(k), Vec(d, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mu[static_cast<std::size_t>(labels[i])][j] += x[i][j];
  for (int c = 0; c < k; ++c)
    for (std::size_t j = 0; j < d; ++j) mu[static_cast<std::size_t>(c)][j] /= static_cast<double>(count[static_cast<std::size_t>(c)]);
  Vec cp(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < n; ++i) cp[static_cast<std::size_t>(labels[i])] += sqdist(x[i], mu[static_cast<std::size_t>(labels[i])]);

  double cp_sum = 0.0, sep_sum = 0.0;
  for (int c = 0; c < k; ++c) {
    cp_sum += cp[static_cast<std::size_t>(c)];
    sep_sum += static_cast<double>(count[static_cast<std::size_t>(c)]) * sqdist(mu[static_cast<std::size_t>(c)], mu_data);
  }

  const double inf = std::numeric_limits<double>::infinity();
  const double tiny = 1e-30;

  switch (index) {
    case Index::CH: {
      if (cp_sum <= tiny) return inf;
      return (sep_sum / cp_sum) * ((static_cast<double>(n) - k) / (k - 1.0));
    }
    case Index::WB: {
      if (sep_sum <= tiny) return inf;
      return k * cp_sum / sep_sum;
    }
    case Index::DB: {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
          if (j == i) continue;
          const double den = sqdist(mu[static_cast<std::size_t>(i)], mu[static_cast<std::size_t>(j)]);
          const double num = cp[static_cast<std::size_t>(i)] / static_cast<double>(count[static_cast<std::size_t>(i)]) +
                             cp[static_cast<std::size_t>(j)] / static_cast<double>(count[static_cast<std::size_t>(j)]);
          worst = std::max(worst, den <= tiny ? inf : num / den);
        }
        acc += worst;
      }
      return acc / k;
    }
    case Index::XB: {
      double min_d = inf;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) min_d = std::min(min_d, sqdist(mu[static_cast<std::size_t>(i)], mu[static_cast<std::size_t>(j)]));
      if (min_d <= tiny) return inf;
      return cp_sum / (static_cast<double>(n) * min_d);
    }
    case Index::PBM: {
      if (cp_sum <= tiny) return inf;
      double max_d = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) max_d = std::max(max_d, sqdist(mu[static_cast<std::size_t>(i)], mu[static_cast<std::size_t>(j)]));
      const double v = (e0 / cp_sum) * max_d / k;
      return v * v;
    }
    case Index::NI: {
      const double delta = std::pow(10.0, -12.0 / static_cast<double>(d));
      // per-cluster covariances, n-1 denominator, zero matrix for singletons
      double acc = 0.0;
      for (int c = 0; c < k; ++c) {
        Mat cov(d, Vec(d, 0.0));
        if (count[static_cast<std::size_t>(c)] >= 2) {
          for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] != c) continue;
            for (std::size_t p = 0; p < d; ++p)
              for (std::size_t q = 0; q < d; ++q)
                cov[p][q] += (x[i][p] - mu[static_cast<std::size_t>(c)][p]) * (x[i][q] - mu[static_cast<std::size_t>(c)][q]);
          }
          for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q) cov[p][q] /= static_cast<double>(count[static_cast<std::size_t>(c)] - 1);
        }
        const double p_c = static_cast<double>(count[static_cast<std::size_t>(c)]) / static_cast<double>(n);
        acc += 0.5 * p_c * logdet(cov, delta) - p_c * std::log(p_c);
      }
      Mat cov_data(d, Vec(d, 0.0));
      if (n >= 2) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q) cov_data[p][q] += (x[i][p] - mu_data[p]) * (x[i][q] - mu_data[q]);
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t q = 0; q < d; ++q) cov_data[p][q] /= static_cast<double>(n - 1);
      }
      return acc - 0.5 * logdet(cov_data, delta);
    }
  }
  throw std::logic_error("naive: unknown index");
}

}  // namespace naive
