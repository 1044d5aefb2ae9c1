#pragma once

#include <stdexcept>
#include <vector>

#include "icviart/partition.hpp"

namespace icviart {

// Adjusted Rand index via the contingency table. Symmetric and invariant to
// label permutations. Degenerate case (zero denominator, e.g. one cluster vs
// one cluster) is defined as 1.0: agreement is total.
inline double ari(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ari: label vectors differ in length");
  if (a.empty()) throw std::invalid_argument("ari: empty labels");

  const Labels da = dense_relabel(a);
  const Labels db = dense_relabel(b);
  const int ka = *std::max_element(da.begin(), da.end()) + 1;
  const int kb = *std::max_element(db.begin(), db.end()) + 1;

  std::vector<long long> table(static_cast<std::size_t>(ka) * kb, 0);
  std::vector<long long> rows(ka, 0), cols(kb, 0);
  for (std::size_t i = 0; i < da.size(); ++i) {
    ++table[static_cast<std::size_t>(da[i]) * kb + db[i]];
    ++rows[da[i]];
    ++cols[db[i]];
  }

  auto comb2 = [](long long m) -> double { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); };

  double sum_ij = 0.0;
  for (long long c : table) sum_ij += comb2(c);
  double sum_a = 0.0, sum_b = 0.0;
  for (long long c : rows) sum_a += comb2(c);
  for (long long c : cols) sum_b += comb2(c);

  const double total = comb2(static_cast<long long>(a.size()));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double denom = 0.5 * (sum_a + sum_b) - expected;
  if (denom == 0.0) return 1.0;
  return (sum_ij - expected) / denom;
}

}  // namespace icviart
