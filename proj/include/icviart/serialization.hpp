#pragma once

#include <json.hpp>

#include "icviart/artmap.hpp"
#include "icviart/trainer.hpp"

namespace icviart {

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (long r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const long rows = static_cast<long>(j.size());
  const long cols = rows > 0 ? static_cast<long>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const ArtA& a) {
  j = {{"W", detail::matrix_to_json(a.W)},
       {"rho", a.rho},
       {"alpha", a.alpha},
       {"beta", a.beta},
       {"instance_count", a.instance_count}};
}

inline void from_json(const nlohmann::json& j, ArtA& a) {
  a.W = detail::matrix_from_json(j.at("W"));
  j.at("rho").get_to(a.rho);
  j.at("alpha").get_to(a.alpha);
  j.at("beta").get_to(a.beta);
  j.at("instance_count").get_to(a.instance_count);
}

inline void to_json(nlohmann::json& j, const MapField& m) {
  j = {{"W", detail::matrix_to_json(m.W)},
       {"rho", m.rho},
       {"beta", m.beta},
       {"epsilon", m.epsilon}};
}

inline void from_json(const nlohmann::json& j, MapField& m) {
  m.W = detail::matrix_from_json(j.at("W"));
  j.at("rho").get_to(m.rho);
  j.at("beta").get_to(m.beta);
  j.at("epsilon").get_to(m.epsilon);
}

inline void to_json(nlohmann::json& j, const RunResult& r) {
  j = {{"epochs_run", r.epochs_run},
       {"stop_reason", stop_reason_name(r.stop_reason)},
       {"k_final", r.k_final},
       {"final_value", r.final_value},
       {"merges_committed", r.merges_committed},
       {"splits_committed", r.splits_committed},
       {"init_seconds", r.init_seconds},
       {"train_seconds", r.train_seconds},
       {"total_seconds", r.total_seconds}};
  if (!std::isnan(r.ari)) j["ari"] = r.ari;
}

}  // namespace icviart
