#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "icviart/artmap.hpp"
#include "icviart/icvi.hpp"
#include "icviart/kmeans.hpp"
#include "icviart/partition.hpp"
#include "icviart/preprocess.hpp"
#include "icviart/rng.hpp"

namespace icviart {

// incremental: index values come from the cached recursive statistics.
// batch_cvi: every score and current value is recomputed from scratch on the
// corresponding (hypothetical) partition. Decisions are the same; cost is not.
enum class Mode { kIncremental, kBatchCvi };

enum class StopReason { kMaxEpochs, kWeightsStable, kIcviConverged };

inline const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kMaxEpochs: return "max_epochs";
    case StopReason::kWeightsStable: return "weights_stable";
    case StopReason::kIcviConverged: return "icvi_converged";
  }
  return "?";
}

struct TrainerConfig {
  int k = 2;
  IcviKind icvi = IcviKind::kNI;
  double rho_a = 0.0;
  double alpha_a = 1e-3;
  double beta_a = 1.0;
  double rho_ab = 0.7;
  double beta_ab = 1e-3;
  double epsilon = 0.01;
  int max_epochs = 20;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  Mode mode = Mode::kIncremental;
  int kmeans_trials = 10;
  int kmeans_max_iter = 300;
  double kmeans_tol = 1e-6;
  double split_delta = 1e-6;
  bool check_invariants = true;   // cheap bookkeeping checks at epoch end
  bool paranoid_checks = false;   // compare incremental value to a batch
                                  // recomputation after every mutation

  void validate() const {
    if (k < 2) throw std::invalid_argument("config: k must be >= 2");
    if (rho_a < 0.0 || rho_a > 1.0) throw std::invalid_argument("config: rho_a must be in [0,1]");
    if (rho_ab < 0.0 || rho_ab > 1.0) throw std::invalid_argument("config: rho_ab must be in [0,1]");
    if (beta_a <= 0.0 || beta_a > 1.0) throw std::invalid_argument("config: beta_a must be in (0,1]");
    if (beta_ab <= 0.0 || beta_ab > 1.0) throw std::invalid_argument("config: beta_ab must be in (0,1]");
    if (alpha_a <= 0.0) throw std::invalid_argument("config: alpha_a must be > 0");
    if (max_epochs < 1) throw std::invalid_argument("config: max_epochs must be >= 1");
    if (tol < 0.0) throw std::invalid_argument("config: tol must be >= 0");
  }
};

struct RunResult {
  Labels labels;
  std::vector<std::pair<long, double>> icvi_trace;  // (iteration, value)
  int epochs_run = 0;
  StopReason stop_reason = StopReason::kMaxEpochs;
  int k_final = 0;
  double final_value = 0.0;
  double ari = std::numeric_limits<double>::quiet_NaN();  // filled when truth is known
  long merges_committed = 0;
  long splits_committed = 0;
  double init_seconds = 0.0;
  double train_seconds = 0.0;
  double total_seconds = 0.0;
};

namespace detail {
inline bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}
inline bool values_agree(double a, double b, double rel) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= std::max(1e-9, rel * std::max(std::abs(a), std::abs(b)));
}
}  // namespace detail

// One training run: owns the network, the partition and the index state.
class Trainer {
 public:
  Trainer(const PreparedData& prep, TrainerConfig cfg) : prep_(&prep), cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.k > prep_->n()) throw std::invalid_argument("trainer: k exceeds the sample count");
  }

  // k-means++ prototypes mapped into ARTa, nearest-category initial
  // partition, all-ones map field, batch-initialized index state.
  void initialize() {
    const long n = prep_->n();

    const KMeansResult km =
        best_of(prep_->X_b, cfg_.k, cfg_.kmeans_trials, cfg_.seed, cfg_.kmeans_max_iter, cfg_.kmeans_tol);

    art_ = ArtA{};
    art_.rho = cfg_.rho_a;
    art_.alpha = cfg_.alpha_a;
    art_.beta = cfg_.beta_a;
    art_.W.resize(cfg_.k, 2 * prep_->dim());
    for (int c = 0; c < cfg_.k; ++c)
      art_.W.row(c) = centroid_to_category(km.centroids.row(c).transpose(), *prep_).transpose();
    art_.instance_count.assign(static_cast<std::size_t>(cfg_.k), 0);

    part_.cluster_of.assign(static_cast<std::size_t>(n), 0);
    part_.category_of.assign(static_cast<std::size_t>(n), 0);
    part_.k_current = cfg_.k;
    for (long t = 0; t < n; ++t) {
      const Eigen::VectorXd ta = activations(art_, prep_->X_a.row(t).transpose());
      const int c = static_cast<int>(detail::argmax(ta));
      part_.cluster_of[static_cast<std::size_t>(t)] = c;
      part_.category_of[static_cast<std::size_t>(t)] = c;
    }
    repair_empty_categories(km);

    for (long t = 0; t < n; ++t) ++art_.instance_count[static_cast<std::size_t>(part_.category_of[static_cast<std::size_t>(t)])];

    mf_ = MapField{};
    mf_.rho = cfg_.rho_ab;
    mf_.beta = cfg_.beta_ab;
    mf_.epsilon = cfg_.epsilon;
    mf_.W = Eigen::MatrixXd::Ones(cfg_.k, cfg_.k);

    icvi_ = IcviState::init_batch(cfg_.icvi, prep_->X_b, part_.cluster_of);
    trace_.clear();
    iter_ = 0;
    merges_ = splits_ = 0;
    initialized_ = true;
  }

  // One Algorithm-style presentation: score every candidate assignment of the
  // sample, resonate on (x_a, y), commit the map field's prediction, then do
  // the pruning/shrinking and cluster-disappearance bookkeeping.
  void present_sample(long t) {
    const Eigen::VectorXd x_b = prep_->X_b.row(t).transpose();
    const Eigen::VectorXd x_a = prep_->X_a.row(t).transpose();
    const int from = part_.cluster_of[static_cast<std::size_t>(t)];
    const int kprime = part_.k_current;

    const std::vector<double> scores = swap_scores(t, from);
    bool all_equal = true;
    for (double s : scores)
      if (s != scores[0]) { all_equal = false; break; }

    Eigen::VectorXd y;
    if (all_equal) {
      y = Eigen::VectorXd::Ones(kprime);
    } else {
      int best = from;  // ties keep the incumbent
      for (int i = 0; i < kprime; ++i)
        if (is_better(cfg_.icvi, scores[static_cast<std::size_t>(i)], scores[static_cast<std::size_t>(best)])) best = i;
      y = Eigen::VectorXd::Zero(kprime);
      y(best) = 1.0;
    }

    const ResonanceResult rr = search_and_resonate(art_, mf_, x_a, y);
    const int predicted = mf_predict(mf_, rr.category);

    bool moved = false;
    if (predicted != from) {
      moved = true;
      if (icvi_.cluster(from).n == 1) {
        // last member leaves: the cluster disappears
        icvi_.update_add(predicted, x_b);
        icvi_.delete_cluster(from);
        part_.cluster_of[static_cast<std::size_t>(t)] = predicted;
        drop_cluster_id(from);
      } else {
        icvi_.update_remove(from, x_b);
        icvi_.update_add(predicted, x_b);
        part_.cluster_of[static_cast<std::size_t>(t)] = predicted;
      }
      if (cfg_.paranoid_checks) paranoid_compare("swap");
    }

    const int r = part_.category_of[static_cast<std::size_t>(t)];
    if (rr.category != r) {
      part_.category_of[static_cast<std::size_t>(t)] = rr.category;
      ++art_.instance_count[static_cast<std::size_t>(rr.category)];
      --art_.instance_count[static_cast<std::size_t>(r)];
      if (art_.instance_count[static_cast<std::size_t>(r)] == 0) {
        prune_category(art_, mf_, r);
        for (int& c : part_.category_of)
          if (c > r) --c;
      } else {
        std::vector<Eigen::VectorXd> remaining;
        for (long s = 0; s < prep_->n(); ++s)
          if (part_.category_of[static_cast<std::size_t>(s)] == r) remaining.push_back(prep_->X_a.row(s).transpose());
        shrink_category(art_, r, remaining);
      }
    }

    push_trace(moved ? current_value() : scores[static_cast<std::size_t>(from)]);
  }

  // Greedy merging while it strictly improves the index; stops at two
  // clusters.
  void merge_phase() {
    while (part_.k_current > 2) {
      const double cur = current_value();
      int bi = -1, bj = -1;
      double best = worst_value(cfg_.icvi);
      for (int i = 0; i < part_.k_current; ++i)
        for (int j = i + 1; j < part_.k_current; ++j) {
          const double s = merge_score(i, j);
          if (bi < 0 || is_better(cfg_.icvi, s, best)) { best = s; bi = i; bj = j; }
        }
      if (bi < 0 || !is_better(cfg_.icvi, best, cur)) break;

      icvi_.update_merge(bi, bj);
      mf_merge_columns(mf_, bi, bj);
      detail::move_column(mf_.W, mf_.W.cols() - 1, bi);  // merged cluster keeps id bi
      for (int& c : part_.cluster_of) {
        if (c == bj) c = bi;
        else if (c > bj) --c;
      }
      --part_.k_current;
      ++merges_;
      if (cfg_.paranoid_checks) paranoid_compare("merge");
      push_trace(current_value());
    }
  }

  // Splits multi-category clusters until the requested k is restored or no
  // candidate remains. The candidate category whose lone-cluster partition
  // scores best wins; near-ties fall back to the smallest map-field
  // uncertainty ratio, then the lowest category id.
  void split_phase() {
    while (cfg_.k - part_.k_current > 0) {
      struct Candidate {
        int cluster;
        int category;
        std::vector<int> rows;
        double score;
      };
      std::map<std::pair<int, int>, std::vector<int>> groups;
      for (long t = 0; t < prep_->n(); ++t)
        groups[{part_.cluster_of[static_cast<std::size_t>(t)], part_.category_of[static_cast<std::size_t>(t)]}]
            .push_back(static_cast<int>(t));
      std::vector<int> cats_per_cluster(static_cast<std::size_t>(part_.k_current), 0);
      for (const auto& [key, rows] : groups) ++cats_per_cluster[static_cast<std::size_t>(key.first)];

      std::vector<Candidate> cands;
      for (auto& [key, rows] : groups)
        if (cats_per_cluster[static_cast<std::size_t>(key.first)] >= 2)
          cands.push_back({key.first, key.second, rows, 0.0});
      if (cands.empty()) break;

      for (auto& c : cands) c.score = split_score(c.cluster, c.rows);

      const Candidate* best = &cands.front();
      for (const auto& c : cands)
        if (is_better(cfg_.icvi, c.score, best->score)) best = &c;

      // candidates indistinguishable by score: smallest (max - second)/max of
      // the category's map field row decides, then the lowest category id
      const Candidate* chosen = best;
      double chosen_ratio = uncertainty_ratio(best->category);
      for (const auto& c : cands) {
        if (&c == best) continue;
        if (!detail::values_agree(c.score, best->score, 1e-9)) continue;
        const double ratio = uncertainty_ratio(c.category);
        if (ratio < chosen_ratio || (ratio == chosen_ratio && c.category < chosen->category)) {
          chosen = &c;
          chosen_ratio = ratio;
        }
      }

      icvi_.update_split(chosen->cluster, chosen->rows, prep_->X_b);
      const int new_id = mf_split_column(mf_, chosen->category, cfg_.split_delta);
      for (int row : chosen->rows) part_.cluster_of[static_cast<std::size_t>(row)] = new_id;
      ++part_.k_current;
      ++splits_;
      if (cfg_.paranoid_checks) paranoid_compare("split");
      push_trace(current_value());
    }
  }

  RunResult fit() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    initialize();
    const auto t1 = clock::now();

    std::vector<long> order(static_cast<std::size_t>(prep_->n()));
    for (long i = 0; i < prep_->n(); ++i) order[static_cast<std::size_t>(i)] = i;
    Rng shuffle_rng(derive_seed(cfg_.seed, 0x5u));
    shuffle_rng.shuffle(order);  // one shuffle, reused every epoch

    double prev_value = current_value();
    Eigen::MatrixXd prev_w = art_.W;
    StopReason reason = StopReason::kMaxEpochs;
    int epochs = 0;
    for (int e = 1; e <= cfg_.max_epochs; ++e) {
      epochs = e;
      for (long t : order) present_sample(t);
      merge_phase();
      split_phase();
      if (cfg_.check_invariants) check_invariants();
      const double v = current_value();
      if (detail::same_matrix(art_.W, prev_w)) { reason = StopReason::kWeightsStable; break; }
      if (std::abs(v - prev_value) <= cfg_.tol) { reason = StopReason::kIcviConverged; break; }
      prev_value = v;
      prev_w = art_.W;
    }
    const auto t2 = clock::now();

    RunResult res;
    res.labels = part_.cluster_of;
    res.icvi_trace = trace_;
    res.epochs_run = epochs;
    res.stop_reason = reason;
    res.k_final = part_.k_current;
    res.final_value = current_value();
    res.merges_committed = merges_;
    res.splits_committed = splits_;
    res.init_seconds = std::chrono::duration<double>(t1 - t0).count();
    res.train_seconds = std::chrono::duration<double>(t2 - t1).count();
    res.total_seconds = std::chrono::duration<double>(t2 - t0).count();
    return res;
  }

  // current index value under the configured mode
  double current_value() const {
    if (cfg_.mode == Mode::kIncremental) return icvi_.value();
    return IcviState::init_batch(cfg_.icvi, prep_->X_b, part_.cluster_of).evaluate_or_worst();
  }

  const ArtA& art() const { return art_; }
  const MapField& map_field() const { return mf_; }
  const Partition& partition() const { return part_; }
  const IcviState& icvi() const { return icvi_; }
  bool initialized() const { return initialized_; }

  // Bookkeeping consistency: matrix shapes against live counts, and the
  // partition against the index statistics.
  void check_invariants() const {
    const long n = prep_->n();
    if (mf_.W.cols() != part_.k_current || icvi_.k() != part_.k_current)
      throw std::logic_error("invariant: cluster count disagreement");
    if (art_.W.rows() != mf_.W.rows() || art_.instance_count.size() != static_cast<std::size_t>(art_.W.rows()))
      throw std::logic_error("invariant: category count disagreement");
    std::vector<long> members(static_cast<std::size_t>(part_.k_current), 0);
    for (long t = 0; t < n; ++t) {
      const int c = part_.cluster_of[static_cast<std::size_t>(t)];
      if (c < 0 || c >= part_.k_current) throw std::logic_error("invariant: cluster id out of range");
      ++members[static_cast<std::size_t>(c)];
    }
    long total = 0;
    for (int c = 0; c < part_.k_current; ++c) {
      if (members[static_cast<std::size_t>(c)] != icvi_.cluster(c).n)
        throw std::logic_error("invariant: cluster " + std::to_string(c) + " count drifted");
      total += icvi_.cluster(c).n;
    }
    if (total != n) throw std::logic_error("invariant: sample count drifted");
    std::vector<long> cats(static_cast<std::size_t>(art_.categories()), 0);
    for (long t = 0; t < n; ++t) ++cats[static_cast<std::size_t>(part_.category_of[static_cast<std::size_t>(t)])];
    for (int c = 0; c < art_.categories(); ++c)
      if (cats[static_cast<std::size_t>(c)] != art_.instance_count[static_cast<std::size_t>(c)])
        throw std::logic_error("invariant: instance count drifted");
  }

 private:
  const PreparedData* prep_;
  TrainerConfig cfg_;
  ArtA art_;
  MapField mf_;
  Partition part_;
  IcviState icvi_;
  std::vector<std::pair<long, double>> trace_;
  long iter_ = 0;
  long merges_ = 0, splits_ = 0;
  bool initialized_ = false;

  void push_trace(double v) { trace_.emplace_back(++iter_, v); }

  // Nearest-category assignment can leave a prototype empty; hand it the
  // farthest member of the most populated category.
  void repair_empty_categories(const KMeansResult& km) {
    const long n = prep_->n();
    while (true) {
      std::vector<long> counts(static_cast<std::size_t>(cfg_.k), 0);
      for (long t = 0; t < n; ++t) ++counts[static_cast<std::size_t>(part_.category_of[static_cast<std::size_t>(t)])];
      int empty = -1;
      for (int c = 0; c < cfg_.k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0) { empty = c; break; }
      if (empty < 0) return;
      int donor = 0;
      for (int c = 1; c < cfg_.k; ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(donor)]) donor = c;
      long far = -1;
      double far_d = -1.0;
      for (long t = 0; t < n; ++t) {
        if (part_.category_of[static_cast<std::size_t>(t)] != donor) continue;
        const double d2 = (prep_->X_b.row(t) - km.centroids.row(donor)).squaredNorm();
        if (d2 > far_d) { far_d = d2; far = t; }
      }
      part_.category_of[static_cast<std::size_t>(far)] = empty;
      part_.cluster_of[static_cast<std::size_t>(far)] = empty;
    }
  }

  // A cluster id vanished: its map field column goes away and ids above it
  // close the gap.
  void drop_cluster_id(int gone) {
    detail::remove_column(mf_.W, gone);
    for (int& c : part_.cluster_of)
      if (c > gone) --c;
    --part_.k_current;
  }

  std::vector<double> swap_scores(long t, int from) const {
    if (cfg_.mode == Mode::kIncremental)
      return icvi_.score_swaps(prep_->X_b.row(t).transpose(), from);

    const int kprime = part_.k_current;
    std::vector<double> out(static_cast<std::size_t>(kprime), worst_value(cfg_.icvi));
    const double cur = IcviState::init_batch(cfg_.icvi, prep_->X_b, part_.cluster_of).evaluate_or_worst();
    out[static_cast<std::size_t>(from)] = cur;
    if (icvi_.cluster(from).n == 1) return out;  // same departure rule as the incremental path
    for (int to = 0; to < kprime; ++to) {
      if (to == from) continue;
      Labels hypo = part_.cluster_of;
      hypo[static_cast<std::size_t>(t)] = to;
      out[static_cast<std::size_t>(to)] = IcviState::init_batch(cfg_.icvi, prep_->X_b, hypo).evaluate_or_worst();
    }
    return out;
  }

  double merge_score(int i, int j) const {
    if (cfg_.mode == Mode::kIncremental) return icvi_.score_merge(i, j);
    Labels hypo = part_.cluster_of;
    for (int& c : hypo) {
      if (c == j) c = i;
      else if (c > j) --c;
    }
    return IcviState::init_batch(cfg_.icvi, prep_->X_b, hypo).evaluate_or_worst();
  }

  double split_score(int cluster, const std::vector<int>& rows) const {
    if (cfg_.mode == Mode::kIncremental) return icvi_.score_split(cluster, rows, prep_->X_b);
    Labels hypo = part_.cluster_of;
    for (int row : rows) hypo[static_cast<std::size_t>(row)] = part_.k_current;
    return IcviState::init_batch(cfg_.icvi, prep_->X_b, hypo).evaluate_or_worst();
  }

  double uncertainty_ratio(int category) const {
    const Eigen::VectorXd row = mf_.W.row(category).transpose();
    double mx = -std::numeric_limits<double>::infinity(), second = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < row.size(); ++i) {
      if (row(i) > mx) { second = mx; mx = row(i); }
      else if (row(i) > second) second = row(i);
    }
    return mx > 0.0 ? (mx - second) / mx : 0.0;
  }

  void paranoid_compare(const char* what) const {
    const double batch = IcviState::init_batch(cfg_.icvi, prep_->X_b, part_.cluster_of).evaluate_or_worst();
    if (!detail::values_agree(icvi_.value(), batch, 1e-6))
      throw std::logic_error(std::string("incremental value diverged from batch after ") + what + ": " +
                             std::to_string(icvi_.value()) + " vs " + std::to_string(batch));
  }
};

inline RunResult fit(const PreparedData& prep, const TrainerConfig& cfg) {
  Trainer t(prep, cfg);
  return t.fit();
}

}  // namespace icviart
