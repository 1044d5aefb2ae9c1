#pragma once

#include <Eigen/Dense>
#include <vector>

#include "icviart/data.hpp"
#include "icviart/icvi.hpp"
#include "icviart/rng.hpp"
#include "naive_cvi.hpp"

namespace testutil {

inline naive::Mat to_nested(const Eigen::MatrixXd& m) {
  naive::Mat out(static_cast<std::size_t>(m.rows()), naive::Vec(static_cast<std::size_t>(m.cols())));
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

inline naive::Index to_naive(icviart::IcviKind k) {
  switch (k) {
    case icviart::IcviKind::kCH: return naive::Index::CH;
    case icviart::IcviKind::kWB: return naive::Index::WB;
    case icviart::IcviKind::kDB: return naive::Index::DB;
    case icviart::IcviKind::kXB: return naive::Index::XB;
    case icviart::IcviKind::kPBM: return naive::Index::PBM;
    case icviart::IcviKind::kNI: return naive::Index::NI;
  }
  return naive::Index::NI;
}

inline double oracle_value(icviart::IcviKind kind, const Eigen::MatrixXd& x, const icviart::Labels& labels) {
  return naive::value(to_naive(kind), to_nested(x), labels);
}

// Random dataset with a guaranteed-nonempty k-cluster labeling.
inline std::pair<Eigen::MatrixXd, icviart::Labels> random_partitioned(long n, long d, int k,
                                                                      icviart::Rng& rng,
                                                                      double spread = 4.0) {
  Eigen::MatrixXd x(n, d);
  icviart::Labels labels(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const int c = i < k ? static_cast<int>(i) : static_cast<int>(rng.below(static_cast<std::size_t>(k)));
    labels[static_cast<std::size_t>(i)] = c;
    for (long j = 0; j < d; ++j) x(i, j) = spread * c + rng.normal();
  }
  return {x, labels};
}

inline bool approx_rel(double a, double b, double rel) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= std::max(1e-9, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace testutil
