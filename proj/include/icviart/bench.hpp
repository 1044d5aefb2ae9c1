#pragma once

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "icviart/data.hpp"
#include "icviart/metrics.hpp"
#include "icviart/rng.hpp"
#include "icviart/trainer.hpp"

namespace icviart {

// Well-separated Gaussian mixture generator for desk-scale fixtures. Cluster
// centers are rejection-sampled until every pair is at least
// min_separation * (largest cluster sigma) apart.
struct GaussianSpec {
  int k = 4;
  int d = 2;
  int n_per_cluster_min = 100;
  int n_per_cluster_max = 100;
  double center_lo = -10.0;
  double center_hi = 10.0;
  double sigma_lo = 0.5;
  double sigma_hi = 1.0;
  double min_separation = 6.0;
  std::uint64_t seed = 0;
  int max_tries = 10000;
  long exact_total = 0;  // when > 0, overrides the per-cluster range with an exact sample count
};

inline std::pair<Dataset, Labels> generate(const GaussianSpec& spec) {
  if (spec.k < 1 || spec.d < 1) throw std::invalid_argument("generate: k and d must be positive");
  if (spec.n_per_cluster_min < 1 || spec.n_per_cluster_max < spec.n_per_cluster_min)
    throw std::invalid_argument("generate: bad per-cluster size range");
  if (spec.min_separation <= 0.0) throw std::invalid_argument("generate: separation must be positive");

  Rng rng(spec.seed);

  std::vector<double> sigma(static_cast<std::size_t>(spec.k));
  double sigma_max = 0.0;
  for (auto& s : sigma) {
    s = rng.uniform(spec.sigma_lo, spec.sigma_hi);
    sigma_max = std::max(sigma_max, s);
  }

  const double min_dist2 = spec.min_separation * sigma_max * spec.min_separation * sigma_max;
  Eigen::MatrixXd centers(spec.k, spec.d);
  for (int c = 0; c < spec.k; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_tries && !placed; ++attempt) {
      Eigen::VectorXd cand(spec.d);
      for (int j = 0; j < spec.d; ++j) cand(j) = rng.uniform(spec.center_lo, spec.center_hi);
      placed = true;
      for (int p = 0; p < c; ++p)
        if ((cand - centers.row(p).transpose()).squaredNorm() < min_dist2) { placed = false; break; }
      if (placed) centers.row(c) = cand.transpose();
    }
    if (!placed)
      throw std::runtime_error("generate: could not place " + std::to_string(spec.k) +
                               " centers at the requested separation; enlarge the center box");
  }

  std::vector<int> sizes(static_cast<std::size_t>(spec.k));
  long total = 0;
  if (spec.exact_total > 0) {
    if (spec.exact_total < spec.k) throw std::invalid_argument("generate: exact_total below cluster count");
    const long base = spec.exact_total / spec.k, rem = spec.exact_total % spec.k;
    for (int c = 0; c < spec.k; ++c) sizes[static_cast<std::size_t>(c)] = static_cast<int>(base + (c < rem ? 1 : 0));
    total = spec.exact_total;
  } else {
    for (int c = 0; c < spec.k; ++c) {
      sizes[static_cast<std::size_t>(c)] =
          static_cast<int>(rng.uniform_int(spec.n_per_cluster_min, spec.n_per_cluster_max));
      total += sizes[static_cast<std::size_t>(c)];
    }
  }

  Dataset ds;
  ds.X.resize(total, spec.d);
  Labels labels(static_cast<std::size_t>(total));
  long row = 0;
  for (int c = 0; c < spec.k; ++c) {
    for (int i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i, ++row) {
      for (int j = 0; j < spec.d; ++j)
        ds.X(row, j) = centers(c, j) + sigma[static_cast<std::size_t>(c)] * rng.normal();
      labels[static_cast<std::size_t>(row)] = c;
    }
  }
  return {std::move(ds), std::move(labels)};
}

// Loader for externally generated benchmark files: whitespace-separated
// feature columns with a trailing integer label column.
inline std::pair<Dataset, Labels> load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("fixture '" + path + "': ragged row " + std::to_string(rows.size() + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().size() < 2)
    throw std::runtime_error("fixture '" + path + "': need at least one feature column plus labels");

  const long n = static_cast<long>(rows.size());
  const long d = static_cast<long>(rows.front().size()) - 1;
  Dataset ds;
  ds.X.resize(n, d);
  Labels labels(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < d; ++j) ds.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    labels[static_cast<std::size_t>(i)] = static_cast<int>(rows[static_cast<std::size_t>(i)].back());
  }
  return {std::move(ds), std::move(labels)};
}

enum class SelectBy { kAri, kIcvi };

struct SweepSpec {
  double rho_a_lo = 0.0, rho_a_hi = 0.95, rho_a_step = 0.05;
  double rho_ab_lo = 0.1, rho_ab_hi = 1.0, rho_ab_step = 0.1;
  SelectBy select_by = SelectBy::kIcvi;
};

struct SweepRow {
  double rho_a = 0.0;
  double rho_ab = 0.0;
  double ari = std::numeric_limits<double>::quiet_NaN();
  double icvi = 0.0;
  int epochs = 0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // full grid cross-product, row-major in (rho_a, rho_ab)
  std::size_t selected = 0;
  Labels selected_labels;
};

inline std::vector<double> grid_values(double lo, double hi, double step) {
  if (step <= 0.0) throw std::invalid_argument("grid: step must be positive");
  const int count = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
  if (count < 1) throw std::invalid_argument("grid: empty range");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + i * step;
  return out;
}

inline int worker_count() {
  if (const char* env = std::getenv("ICVIART_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Vigilance grid search. Every grid point is an independent fit with the same
// seed; points run on a small worker pool. Selection is either the best ARI
// against the supplied truth or the best final index value.
inline SweepResult sweep(const PreparedData& prep, const Labels* truth, const SweepSpec& spec,
                         const TrainerConfig& base, int workers = 0) {
  if (spec.select_by == SelectBy::kAri && truth == nullptr)
    throw std::invalid_argument("sweep: selection by ari requires ground-truth labels");

  const std::vector<double> rho_a_values = grid_values(spec.rho_a_lo, spec.rho_a_hi, spec.rho_a_step);
  const std::vector<double> rho_ab_values = grid_values(spec.rho_ab_lo, spec.rho_ab_hi, spec.rho_ab_step);
  const std::size_t total = rho_a_values.size() * rho_ab_values.size();

  SweepResult res;
  res.rows.resize(total);
  std::vector<Labels> labels(total);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      TrainerConfig cfg = base;
      cfg.rho_a = rho_a_values[idx / rho_ab_values.size()];
      cfg.rho_ab = rho_ab_values[idx % rho_ab_values.size()];
      const RunResult run = fit(prep, cfg);
      SweepRow row;
      row.rho_a = cfg.rho_a;
      row.rho_ab = cfg.rho_ab;
      row.icvi = run.final_value;
      row.epochs = run.epochs_run;
      row.seconds = run.total_seconds;
      if (truth) row.ari = ari(run.labels, *truth);
      res.rows[idx] = row;
      labels[idx] = run.labels;
    }
  };

  const int nw = std::min<int>(workers > 0 ? workers : worker_count(), static_cast<int>(total));
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < total; ++i) {
    if (spec.select_by == SelectBy::kAri) {
      if (res.rows[i].ari > res.rows[best].ari) best = i;
    } else {
      if (is_better(base.icvi, res.rows[i].icvi, res.rows[best].icvi)) best = i;
    }
  }
  res.selected = best;
  res.selected_labels = labels[best];
  return res;
}

struct SpeedRow {
  IcviKind kind = IcviKind::kNI;
  int k = 0;
  Mode mode = Mode::kIncremental;
  double seconds = 0.0;
};

// Times one incremental fit and one batch-CVI fit per (index, k) on a shared
// fixture with the same seed, and checks that the two modes land on the same
// final labels. Timing runs are sequential on purpose.
inline std::vector<SpeedRow> speed_study(const PreparedData& prep, const std::vector<int>& k_values,
                                         const std::vector<IcviKind>& kinds, const TrainerConfig& base) {
  std::vector<SpeedRow> rows;
  for (IcviKind kind : kinds) {
    for (int k : k_values) {
      TrainerConfig cfg = base;
      cfg.icvi = kind;
      cfg.k = k;

      cfg.mode = Mode::kIncremental;
      const RunResult incr = fit(prep, cfg);
      cfg.mode = Mode::kBatchCvi;
      const RunResult batch = fit(prep, cfg);

      if (incr.labels != batch.labels)
        throw std::runtime_error(std::string("speed_study: modes diverged for ") + kind_name(kind) +
                                 " at k=" + std::to_string(k));

      rows.push_back({kind, k, Mode::kIncremental, incr.total_seconds});
      rows.push_back({kind, k, Mode::kBatchCvi, batch.total_seconds});
    }
  }
  return rows;
}

inline void save_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "rho_a,rho_ab,ari,icvi,epochs,seconds\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.10g,%d,%.6g\n", r.rho_a, r.rho_ab, r.ari, r.icvi,
                  r.epochs, r.seconds);
    out << buf;
  }
}

inline void save_speed_csv(const std::string& path, const std::vector<SpeedRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "icvi,k,mode,seconds\n";
  for (const auto& r : rows)
    out << kind_name(r.kind) << ',' << r.k << ',' << (r.mode == Mode::kIncremental ? "incr" : "batch") << ','
        << r.seconds << '\n';
}

}  // namespace icviart
