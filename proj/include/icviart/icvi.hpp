#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "icviart/data.hpp"
#include "icviart/matrix_ops.hpp"

namespace icviart {

// The six validity indices. CH and PBM improve upwards, the rest downwards.
enum class IcviKind { kCH, kWB, kDB, kXB, kPBM, kNI };

inline bool is_max_optimal(IcviKind k) { return k == IcviKind::kCH || k == IcviKind::kPBM; }

inline double worst_value(IcviKind k) {
  return is_max_optimal(k) ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
}

// Strict improvement of a over b in the index's optimality direction.
inline bool is_better(IcviKind k, double a, double b) { return is_max_optimal(k) ? a > b : a < b; }

// Smallest cluster count for which the formula is defined.
inline int min_clusters(IcviKind k) {
  return (k == IcviKind::kWB || k == IcviKind::kNI) ? 1 : 2;
}

inline const char* kind_name(IcviKind k) {
  switch (k) {
    case IcviKind::kCH: return "ch";
    case IcviKind::kWB: return "wb";
    case IcviKind::kDB: return "db";
    case IcviKind::kXB: return "xb";
    case IcviKind::kPBM: return "pbm";
    case IcviKind::kNI: return "ni";
  }
  return "?";
}

inline IcviKind parse_kind(const std::string& s) {
  for (IcviKind k : {IcviKind::kCH, IcviKind::kWB, IcviKind::kDB, IcviKind::kXB, IcviKind::kPBM, IcviKind::kNI})
    if (s == kind_name(k)) return k;
  throw std::invalid_argument("unknown index '" + s + "' (valid: ni, ch, wb, xb, db, pbm)");
}

inline std::vector<IcviKind> all_kinds() {
  return {IcviKind::kCH, IcviKind::kWB, IcviKind::kDB, IcviKind::kXB, IcviKind::kPBM, IcviKind::kNI};
}

// Covariance stabilizer delta for the delta*I term, dimension dependent.
inline double cov_regularizer(long d) { return std::pow(10.0, -12.0 / static_cast<double>(d)); }

// Per-cluster sufficient statistics. sigma/logdet are maintained only for the
// covariance-based index; sep caches n*||mu - mu_data||^2.
struct ClusterStats {
  long n = 0;
  Eigen::VectorXd mu;
  double cp = 0.0;
  Eigen::MatrixXd sigma;
  double logdet = 0.0;
  double sep = 0.0;
};

struct GlobalStats {
  long n_total = 0;
  Eigen::VectorXd mu_data;
  double e0 = 0.0;           // total scatter around the data mean
  double logdet_data = 0.0;  // ln|Sigma_data + delta I|
  double delta = 0.0;
};

namespace detail {

constexpr double kTinyDen = 1e-30;

// ln|A + delta I| through a Cholesky factorization; falls back to a
// symmetric eigendecomposition when roundoff pushes A + delta I indefinite.
inline double logdet_reg(const Eigen::MatrixXd& a, double delta) {
  Eigen::MatrixXd m = a;
  m.diagonal().array() += delta;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    for (long i = 0; i < m.rows(); ++i) acc += std::log(llt.matrixLLT()(i, i));
    return 2.0 * acc;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  double acc = 0.0;
  for (long i = 0; i < m.rows(); ++i) acc += std::log(std::max(es.eigenvalues()(i), 1e-300));
  return acc;
}

inline void refresh_sep(ClusterStats& c, const GlobalStats& g) {
  c.sep = static_cast<double>(c.n) * (c.mu - g.mu_data).squaredNorm();
}

// ---- the five-case recursive updates (add/remove/merge/split; no-op is the
// identity). Each returns the successor statistics of the affected cluster;
// the same code backs the committed updates and the hypothetical scores.

inline ClusterStats stats_add(const ClusterStats& c, const Eigen::VectorXd& x, bool cov,
                              const GlobalStats& g) {
  const double n = static_cast<double>(c.n);
  ClusterStats out;
  out.n = c.n + 1;
  out.mu = (n * c.mu + x) / (n + 1.0);
  out.cp = c.cp + (n / (n + 1.0)) * (x - c.mu).squaredNorm();
  if (cov) {
    out.sigma = ((n - 1.0) / n) * c.sigma + (1.0 / (n + 1.0)) * ((x - c.mu) * (x - c.mu).transpose());
    out.logdet = logdet_reg(out.sigma, g.delta);
  }
  refresh_sep(out, g);
  return out;
}

inline ClusterStats stats_remove(const ClusterStats& c, const Eigen::VectorXd& x, bool cov,
                                 const GlobalStats& g) {
  if (c.n < 2) throw std::logic_error("stats_remove: removing the last sample is a cluster deletion");
  const double n = static_cast<double>(c.n);
  ClusterStats out;
  out.n = c.n - 1;
  out.mu = (n * c.mu - x) / (n - 1.0);
  out.cp = std::max(0.0, c.cp - (n / (n - 1.0)) * (x - c.mu).squaredNorm());
  if (cov) {
    if (c.n == 2) {
      out.sigma = Eigen::MatrixXd::Zero(c.mu.size(), c.mu.size());
    } else {
      out.sigma = ((n - 1.0) / (n - 2.0)) * c.sigma -
                  (n / ((n - 1.0) * (n - 2.0))) * ((x - c.mu) * (x - c.mu).transpose());
    }
    out.logdet = logdet_reg(out.sigma, g.delta);
  }
  refresh_sep(out, g);
  return out;
}

inline ClusterStats stats_merge(const ClusterStats& a, const ClusterStats& b, bool cov,
                                const GlobalStats& g) {
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  const double n = na + nb;
  ClusterStats out;
  out.n = a.n + b.n;
  out.mu = (na * a.mu + nb * b.mu) / n;
  out.cp = a.cp + b.cp + (na * nb / n) * (b.mu - a.mu).squaredNorm();
  if (cov) {
    // singleton covariances are stored as zero matrices; the (n-1) weights
    // zero them out of the combination naturally
    out.sigma = ((na - 1.0) * a.sigma + (nb - 1.0) * b.sigma +
                 (na * nb / n) * ((b.mu - a.mu) * (b.mu - a.mu).transpose())) /
                (n - 1.0);
    out.logdet = logdet_reg(out.sigma, g.delta);
  }
  refresh_sep(out, g);
  return out;
}

// Statistics of what remains of `whole` after the members summarized by
// `part` leave it. `whole.mu` is the combined mean.
inline ClusterStats stats_split_remainder(const ClusterStats& whole, const ClusterStats& part,
                                          bool cov, const GlobalStats& g) {
  if (part.n >= whole.n) throw std::logic_error("stats_split_remainder: part must be a proper subset");
  const double nw = static_cast<double>(whole.n), np = static_cast<double>(part.n);
  const double r = nw - np;
  ClusterStats out;
  out.n = whole.n - part.n;
  out.mu = (nw * whole.mu - np * part.mu) / r;
  out.cp = std::max(0.0, whole.cp - part.cp - (nw * np / r) * (part.mu - whole.mu).squaredNorm());
  if (cov) {
    if (out.n == 1) {
      out.sigma = Eigen::MatrixXd::Zero(whole.mu.size(), whole.mu.size());
    } else {
      out.sigma = ((nw - 1.0) * whole.sigma - (np - 1.0) * part.sigma -
                   (nw * np / r) * ((part.mu - whole.mu) * (part.mu - whole.mu).transpose())) /
                  (r - 1.0);
    }
    out.logdet = logdet_reg(out.sigma, g.delta);
  }
  refresh_sep(out, g);
  return out;
}

inline ClusterStats stats_from_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows, bool cov,
                                    const GlobalStats& g) {
  if (rows.empty()) throw std::invalid_argument("stats_from_rows: empty member set");
  const long d = X.cols();
  ClusterStats out;
  out.n = static_cast<long>(rows.size());
  out.mu = Eigen::VectorXd::Zero(d);
  for (int r : rows) out.mu += X.row(r).transpose();
  out.mu /= static_cast<double>(out.n);
  out.cp = 0.0;
  for (int r : rows) out.cp += (X.row(r).transpose() - out.mu).squaredNorm();
  if (cov) {
    out.sigma = Eigen::MatrixXd::Zero(d, d);
    if (out.n >= 2) {
      for (int r : rows) {
        const Eigen::VectorXd c = X.row(r).transpose() - out.mu;
        out.sigma += c * c.transpose();
      }
      out.sigma /= static_cast<double>(out.n - 1);
    }
    out.logdet = logdet_reg(out.sigma, g.delta);
  }
  refresh_sep(out, g);
  return out;
}

struct ClusterTerm {
  long n;
  double cp;
  double sep;
  double logdet;
};

// Index value from per-cluster terms and a pairwise squared-centroid-distance
// accessor. Vanishing denominators take their natural limits, which keeps
// argbest semantics without NaN.
template <class TermFn, class DistFn>
double eval_terms(IcviKind kind, int k, const GlobalStats& g, TermFn&& term, DistFn&& dist2) {
  const double n_total = static_cast<double>(g.n_total);
  std::vector<ClusterTerm> t(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) t[static_cast<std::size_t>(i)] = term(i);

  double cp_sum = 0.0, sep_sum = 0.0;
  for (const auto& c : t) { cp_sum += c.cp; sep_sum += c.sep; }

  switch (kind) {
    case IcviKind::kCH:
      if (cp_sum <= kTinyDen) return std::numeric_limits<double>::infinity();
      return (sep_sum / cp_sum) * ((n_total - k) / (k - 1.0));
    case IcviKind::kWB:
      if (sep_sum <= kTinyDen) return std::numeric_limits<double>::infinity();
      return k * cp_sum / sep_sum;
    case IcviKind::kDB: {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) {
        double worst = 0.0;
        const double disp_i = t[i].cp / static_cast<double>(t[i].n);
        for (int j = 0; j < k; ++j) {
          if (j == i) continue;
          const double den = dist2(i, j);
          const double num = disp_i + t[j].cp / static_cast<double>(t[j].n);
          worst = std::max(worst, den <= kTinyDen ? std::numeric_limits<double>::infinity() : num / den);
        }
        acc += worst;
      }
      return acc / k;
    }
    case IcviKind::kXB: {
      double min_d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) min_d = std::min(min_d, dist2(i, j));
      if (min_d <= kTinyDen) return std::numeric_limits<double>::infinity();
      return cp_sum / (n_total * min_d);
    }
    case IcviKind::kPBM: {
      if (cp_sum <= kTinyDen) return std::numeric_limits<double>::infinity();
      double max_d = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) max_d = std::max(max_d, dist2(i, j));
      const double v = (g.e0 / cp_sum) * max_d / k;
      return v * v;
    }
    case IcviKind::kNI: {
      double acc = 0.0;
      for (const auto& c : t) {
        const double p = static_cast<double>(c.n) / n_total;
        acc += 0.5 * p * c.logdet - p * std::log(p);
      }
      return acc - 0.5 * g.logdet_data;
    }
  }
  return worst_value(kind);
}

}  // namespace detail

// Incremental state of one validity index over a partition: per-cluster
// statistics, dataset-level constants, the pairwise centroid distance cache,
// and the current value. Committed updates touch only the affected rows and
// columns; the score_* members evaluate hypothetical operations without
// mutating anything.
class IcviState {
 public:
  IcviState() = default;

  // Direct computation of every statistic from a partition. Cluster ids in
  // `labels` must be dense and non-empty.
  static IcviState init_batch(IcviKind kind, const Eigen::MatrixXd& X_b, const Labels& labels) {
    const long n = X_b.rows(), d = X_b.cols();
    if (n < 1) throw std::invalid_argument("init_batch: empty data");
    if (static_cast<long>(labels.size()) != n) throw std::invalid_argument("init_batch: label count mismatch");

    int k = 0;
    for (int v : labels) {
      if (v < 0) throw std::invalid_argument("init_batch: negative cluster id");
      k = std::max(k, v + 1);
    }
    std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
    for (long i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(static_cast<int>(i));
    for (int c = 0; c < k; ++c)
      if (members[static_cast<std::size_t>(c)].empty())
        throw std::invalid_argument("init_batch: cluster " + std::to_string(c) + " is empty");

    IcviState s;
    s.kind_ = kind;
    s.with_cov_ = (kind == IcviKind::kNI);
    s.g_.n_total = n;
    s.g_.mu_data = X_b.colwise().mean().transpose();
    s.g_.e0 = (X_b.rowwise() - s.g_.mu_data.transpose()).rowwise().squaredNorm().sum();
    s.g_.delta = cov_regularizer(d);
    if (s.with_cov_) {
      Eigen::MatrixXd sigma_data = Eigen::MatrixXd::Zero(d, d);
      if (n >= 2) {
        const Eigen::MatrixXd centered = X_b.rowwise() - s.g_.mu_data.transpose();
        sigma_data = (centered.transpose() * centered) / static_cast<double>(n - 1);
      }
      s.g_.logdet_data = detail::logdet_reg(sigma_data, s.g_.delta);
    }

    s.clusters_.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
      s.clusters_.push_back(detail::stats_from_rows(X_b, members[static_cast<std::size_t>(c)], s.with_cov_, s.g_));

    s.dist2_ = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        s.dist2_(i, j) = s.dist2_(j, i) = (s.clusters_[static_cast<std::size_t>(i)].mu - s.clusters_[static_cast<std::size_t>(j)].mu).squaredNorm();

    s.value_ = s.evaluate_or_worst();
    return s;
  }

  IcviKind kind() const { return kind_; }
  int k() const { return static_cast<int>(clusters_.size()); }
  long total() const { return g_.n_total; }
  const GlobalStats& globals() const { return g_; }

  const ClusterStats& cluster(int i) const {
    check_id(i, "cluster");
    return clusters_[static_cast<std::size_t>(i)];
  }

  double dist2(int i, int j) const {
    check_id(i, "dist2");
    check_id(j, "dist2");
    return dist2_(i, j);
  }

  // Current index value (kept in step with the statistics).
  double value() const { return value_; }

  // Strict evaluation from the cached statistics; rejects cluster counts the
  // formula is undefined for.
  double evaluate() const {
    if (k() < min_clusters(kind_))
      throw std::logic_error(std::string("evaluate: ") + kind_name(kind_) + " needs at least " +
                             std::to_string(min_clusters(kind_)) + " clusters");
    return eval_state();
  }

  double evaluate_or_worst() const {
    return k() < min_clusters(kind_) ? worst_value(kind_) : eval_state();
  }

  // ---- committed updates ---------------------------------------------

  void update_add(int i, const Eigen::VectorXd& x) {
    check_id(i, "update_add");
    clusters_[static_cast<std::size_t>(i)] = detail::stats_add(clusters_[static_cast<std::size_t>(i)], x, with_cov_, g_);
    refresh_dist_row(i);
    value_ = evaluate_or_worst();
  }

  void update_remove(int i, const Eigen::VectorXd& x) {
    check_id(i, "update_remove");
    if (clusters_[static_cast<std::size_t>(i)].n < 2)
      throw std::logic_error("update_remove: cluster has a single sample; use delete_cluster");
    clusters_[static_cast<std::size_t>(i)] = detail::stats_remove(clusters_[static_cast<std::size_t>(i)], x, with_cov_, g_);
    refresh_dist_row(i);
    value_ = evaluate_or_worst();
  }

  // Cluster i absorbs cluster j; j's id disappears and higher ids shift down.
  void update_merge(int i, int j) {
    check_id(i, "update_merge");
    check_id(j, "update_merge");
    if (i == j) throw std::invalid_argument("update_merge: i == j");
    clusters_[static_cast<std::size_t>(i)] =
        detail::stats_merge(clusters_[static_cast<std::size_t>(i)], clusters_[static_cast<std::size_t>(j)], with_cov_, g_);
    clusters_.erase(clusters_.begin() + j);
    detail::remove_row(dist2_, j);
    detail::remove_column(dist2_, j);
    refresh_dist_row(i - (j < i ? 1 : 0));
    value_ = evaluate_or_worst();
  }

  // The members listed in `rows` leave cluster i and form a new cluster whose
  // statistics are computed in batch; the remainder of i is updated
  // incrementally. Returns the new cluster's id (appended last).
  int update_split(int i, const std::vector<int>& rows, const Eigen::MatrixXd& X_b) {
    check_id(i, "update_split");
    if (rows.empty()) throw std::invalid_argument("update_split: empty member set");
    if (static_cast<long>(rows.size()) >= clusters_[static_cast<std::size_t>(i)].n)
      throw std::invalid_argument("update_split: member set must be a proper subset");
    const ClusterStats part = detail::stats_from_rows(X_b, rows, with_cov_, g_);
    clusters_[static_cast<std::size_t>(i)] =
        detail::stats_split_remainder(clusters_[static_cast<std::size_t>(i)], part, with_cov_, g_);
    clusters_.push_back(part);
    const int knew = k();
    dist2_.conservativeResize(knew, knew);
    dist2_.row(knew - 1).setZero();
    dist2_.col(knew - 1).setZero();
    refresh_dist_row(i);
    refresh_dist_row(knew - 1);
    value_ = evaluate_or_worst();
    return knew - 1;
  }

  // Removes a cluster wholesale (bookkeeping path for emptied clusters).
  void delete_cluster(int i) {
    check_id(i, "delete_cluster");
    if (k() == 1) throw std::logic_error("delete_cluster: cannot delete the last cluster");
    if (clusters_[static_cast<std::size_t>(i)].n > 1)
      throw std::logic_error("delete_cluster: cluster still owns multiple samples");
    clusters_.erase(clusters_.begin() + i);
    detail::remove_row(dist2_, i);
    detail::remove_column(dist2_, i);
    value_ = evaluate_or_worst();
  }

  // ---- hypothetical scores (non-mutating) ------------------------------

  // Value after moving x from its current cluster to every candidate in one
  // pass; entry `from` is the current value. Departures that would empty the
  // source are not scored and come back as the worst sentinel.
  std::vector<double> score_swaps(const Eigen::VectorXd& x, int from) const {
    check_id(from, "score_swaps");
    const int kk = k();
    std::vector<double> out(static_cast<std::size_t>(kk), worst_value(kind_));
    out[static_cast<std::size_t>(from)] = value_;
    if (clusters_[static_cast<std::size_t>(from)].n == 1) return out;

    const ClusterStats from_next = detail::stats_remove(clusters_[static_cast<std::size_t>(from)], x, with_cov_, g_);
    Eigen::VectorXd d2_from(kk);
    for (int l = 0; l < kk; ++l)
      d2_from(l) = l == from ? 0.0 : (from_next.mu - clusters_[static_cast<std::size_t>(l)].mu).squaredNorm();

    for (int to = 0; to < kk; ++to) {
      if (to == from) continue;
      out[static_cast<std::size_t>(to)] = swap_value(x, from, to, from_next, d2_from);
    }
    return out;
  }

  double score_swap(const Eigen::VectorXd& x, int from, int to) const {
    check_id(from, "score_swap");
    check_id(to, "score_swap");
    if (to == from) return value_;
    if (clusters_[static_cast<std::size_t>(from)].n == 1) return worst_value(kind_);
    const ClusterStats from_next = detail::stats_remove(clusters_[static_cast<std::size_t>(from)], x, with_cov_, g_);
    Eigen::VectorXd d2_from(k());
    for (int l = 0; l < k(); ++l)
      d2_from(l) = l == from ? 0.0 : (from_next.mu - clusters_[static_cast<std::size_t>(l)].mu).squaredNorm();
    return swap_value(x, from, to, from_next, d2_from);
  }

  double score_merge(int i, int j) const {
    check_id(i, "score_merge");
    check_id(j, "score_merge");
    if (i == j) throw std::invalid_argument("score_merge: i == j");
    const int kk = k() - 1;
    if (kk < min_clusters(kind_)) return worst_value(kind_);

    const ClusterStats merged =
        detail::stats_merge(clusters_[static_cast<std::size_t>(i)], clusters_[static_cast<std::size_t>(j)], with_cov_, g_);
    // view layout: j removed, merged sits at i's slot
    const int i_view = i - (j < i ? 1 : 0);
    auto orig = [&](int v) { return v < j ? v : v + 1; };
    Eigen::VectorXd d2_m(kk);
    for (int v = 0; v < kk; ++v) {
      const int o = orig(v);
      d2_m(v) = o == i ? 0.0 : (merged.mu - clusters_[static_cast<std::size_t>(o)].mu).squaredNorm();
    }
    auto term = [&](int v) {
      const int o = orig(v);
      const ClusterStats& c = o == i ? merged : clusters_[static_cast<std::size_t>(o)];
      return detail::ClusterTerm{c.n, c.cp, c.sep, c.logdet};
    };
    auto dist = [&](int a, int b) {
      if (a == i_view || b == i_view) return d2_m(a == i_view ? b : a);
      return dist2_(orig(a), orig(b));
    };
    return detail::eval_terms(kind_, kk, g_, term, dist);
  }

  double score_split(int i, const std::vector<int>& rows, const Eigen::MatrixXd& X_b) const {
    check_id(i, "score_split");
    if (rows.empty()) throw std::invalid_argument("score_split: empty member set");
    if (static_cast<long>(rows.size()) >= clusters_[static_cast<std::size_t>(i)].n)
      throw std::invalid_argument("score_split: member set must be a proper subset");

    const ClusterStats part = detail::stats_from_rows(X_b, rows, with_cov_, g_);
    const ClusterStats rem = detail::stats_split_remainder(clusters_[static_cast<std::size_t>(i)], part, with_cov_, g_);
    const int kk = k() + 1;
    const int new_id = k();
    Eigen::VectorXd d2_rem(kk), d2_part(kk);
    for (int l = 0; l < k(); ++l) {
      const Eigen::VectorXd& mu_l = l == i ? rem.mu : clusters_[static_cast<std::size_t>(l)].mu;
      d2_rem(l) = l == i ? 0.0 : (rem.mu - mu_l).squaredNorm();
      d2_part(l) = (part.mu - mu_l).squaredNorm();
    }
    d2_rem(new_id) = (rem.mu - part.mu).squaredNorm();
    d2_part(new_id) = 0.0;

    auto term = [&](int v) {
      const ClusterStats& c = v == new_id ? part : (v == i ? rem : clusters_[static_cast<std::size_t>(v)]);
      return detail::ClusterTerm{c.n, c.cp, c.sep, c.logdet};
    };
    auto dist = [&](int a, int b) {
      if (a == new_id || b == new_id) return d2_part(a == new_id ? b : a);
      if (a == i || b == i) return d2_rem(a == i ? b : a);
      return dist2_(a, b);
    };
    return detail::eval_terms(kind_, kk, g_, term, dist);
  }

 private:
  IcviKind kind_ = IcviKind::kNI;
  bool with_cov_ = false;
  GlobalStats g_;
  std::vector<ClusterStats> clusters_;
  Eigen::MatrixXd dist2_;
  double value_ = 0.0;

  void check_id(int i, const char* op) const {
    if (i < 0 || i >= k()) throw std::out_of_range(std::string(op) + ": no cluster " + std::to_string(i));
  }

  void refresh_dist_row(int i) {
    for (int l = 0; l < k(); ++l) {
      if (l == i) { dist2_(i, i) = 0.0; continue; }
      const double d2 = (clusters_[static_cast<std::size_t>(i)].mu - clusters_[static_cast<std::size_t>(l)].mu).squaredNorm();
      dist2_(i, l) = dist2_(l, i) = d2;
    }
  }

  double eval_state() const {
    auto term = [&](int i) {
      const ClusterStats& c = clusters_[static_cast<std::size_t>(i)];
      return detail::ClusterTerm{c.n, c.cp, c.sep, c.logdet};
    };
    auto dist = [&](int a, int b) { return dist2_(a, b); };
    return detail::eval_terms(kind_, k(), g_, term, dist);
  }

  double swap_value(const Eigen::VectorXd& x, int from, int to, const ClusterStats& from_next,
                    const Eigen::VectorXd& d2_from) const {
    const ClusterStats to_next = detail::stats_add(clusters_[static_cast<std::size_t>(to)], x, with_cov_, g_);
    const int kk = k();
    Eigen::VectorXd d2_to(kk);
    for (int l = 0; l < kk; ++l) {
      if (l == to) { d2_to(l) = 0.0; continue; }
      const Eigen::VectorXd& mu_l = l == from ? from_next.mu : clusters_[static_cast<std::size_t>(l)].mu;
      d2_to(l) = (to_next.mu - mu_l).squaredNorm();
    }
    auto term = [&](int i) {
      const ClusterStats& c = i == from ? from_next : (i == to ? to_next : clusters_[static_cast<std::size_t>(i)]);
      return detail::ClusterTerm{c.n, c.cp, c.sep, c.logdet};
    };
    auto dist = [&](int a, int b) {
      if (a == to || b == to) return d2_to(a == to ? b : a);
      if (a == from || b == from) return d2_from(a == from ? b : a);
      return dist2_(a, b);
    };
    return detail::eval_terms(kind_, kk, g_, term, dist);
  }
};

// Full recomputation of the index from data and labels; no cached state.
// This is the computation the batch-CVI twin pays per candidate.
inline double batch_value(IcviKind kind, const Eigen::MatrixXd& X_b, const Labels& labels) {
  return IcviState::init_batch(kind, X_b, labels).evaluate();
}

}  // namespace icviart
