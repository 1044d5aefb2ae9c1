#pragma once

#include <Eigen/Dense>

namespace icviart::detail {

inline void remove_row(Eigen::MatrixXd& m, Eigen::Index r) {
  const Eigen::Index rows = m.rows() - 1, cols = m.cols();
  if (r < rows) m.block(r, 0, rows - r, cols) = m.block(r + 1, 0, rows - r, cols);
  m.conservativeResize(rows, cols);
}

inline void remove_column(Eigen::MatrixXd& m, Eigen::Index c) {
  const Eigen::Index rows = m.rows(), cols = m.cols() - 1;
  if (c < cols) m.block(0, c, rows, cols - c) = m.block(0, c + 1, rows, cols - c);
  m.conservativeResize(rows, cols);
}

inline void append_row(Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
  if (m.rows() == 0 && m.cols() == 0) m.resize(0, v.size());
  m.conservativeResize(m.rows() + 1, Eigen::NoChange);
  m.row(m.rows() - 1) = v.transpose();
}

inline void append_column(Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
  if (m.rows() == 0 && m.cols() == 0) m.resize(v.size(), 0);
  m.conservativeResize(Eigen::NoChange, m.cols() + 1);
  m.col(m.cols() - 1) = v;
}

// Relocates one column, shifting the ones in between; relative order of the
// others is preserved.
inline void move_column(Eigen::MatrixXd& m, Eigen::Index from, Eigen::Index to) {
  if (from == to) return;
  const Eigen::VectorXd saved = m.col(from);
  if (from > to) {
    for (Eigen::Index c = from; c > to; --c) m.col(c) = m.col(c - 1);
  } else {
    for (Eigen::Index c = from; c < to; ++c) m.col(c) = m.col(c + 1);
  }
  m.col(to) = saved;
}

// First index attaining the maximum (deterministic tie-break).
inline Eigen::Index argmax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

}  // namespace icviart::detail
