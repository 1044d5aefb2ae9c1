#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>

#include "icviart/data.hpp"

namespace icviart {

// Per-sample cluster and category assignments. Cluster ids are dense
// (0..k_current-1); category ids index ARTa rows.
struct Partition {
  std::vector<int> cluster_of;
  std::vector<int> category_of;
  int k_current = 0;
};

// Remaps labels onto 0..k'-1, ordered by smallest original id. Idempotent
// and co-membership preserving.
inline Labels dense_relabel(const Labels& labels) {
  std::map<int, int> remap;
  for (int v : labels) remap.emplace(v, 0);
  int next = 0;
  for (auto& [orig, dense] : remap) dense = next++;
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = remap.at(labels[i]);
  return out;
}

inline Partition dense_relabel(const Partition& p) {
  Partition out = p;
  out.cluster_of = dense_relabel(p.cluster_of);
  out.k_current = out.cluster_of.empty() ? 0 : *std::max_element(out.cluster_of.begin(), out.cluster_of.end()) + 1;
  return out;
}

}  // namespace icviart
