#pragma once

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "icviart/bench.hpp"
#include "icviart/metrics.hpp"
#include "icviart/serialization.hpp"
#include "icviart/trainer.hpp"

namespace icviart::cli {

struct Grid {
  double lo = 0.0, hi = 0.0, step = 1.0;
};

inline Grid parse_grid(const std::string& s) {
  Grid g;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &g.lo, &g.hi, &g.step) != 3)
    throw CLI::ValidationError("grid must be lo:hi:step, got '" + s + "'");
  return g;
}

inline void write_manifest(const std::string& primary_output, const std::string& command,
                           const nlohmann::json& params, const std::vector<std::string>& outputs) {
  nlohmann::json j = {{"command", command}, {"parameters", params}, {"outputs", outputs}};
  std::ofstream out(primary_output + ".manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest next to '" + primary_output + "'");
  out << j.dump(2) << '\n';
}

inline void save_trace_csv(const std::string& path, const std::vector<std::pair<long, double>>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "iteration,icvi_value\n";
  char buf[64];
  for (const auto& [iter, value] : trace) {
    std::snprintf(buf, sizeof(buf), "%ld,%.12g\n", iter, value);
    out << buf;
  }
}

// Single-binary front end: gen | fit | sweep | speed | eval. Every file
// producing command drops a <output>.manifest.json capturing its parameters.
inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"iCVI-driven ARTMAP clustering toolbox"};
  app.require_subcommand(1);

  // ---- gen
  auto* gen = app.add_subcommand("gen", "generate a Gaussian mixture fixture");
  int g_k = 4, g_d = 2;
  long g_n = 400;
  double g_sep = 6.0;
  std::uint64_t g_seed = 0;
  std::string g_out_data, g_out_labels;
  gen->add_option("--k", g_k, "cluster count")->check(CLI::PositiveNumber);
  gen->add_option("--d", g_d, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--n", g_n, "total sample count")->check(CLI::PositiveNumber);
  gen->add_option("--sep", g_sep, "minimum center separation, in units of the largest sigma");
  gen->add_option("--seed", g_seed, "rng seed");
  gen->add_option("--out-data", g_out_data, "output csv")->required();
  gen->add_option("--out-labels", g_out_labels, "output label file")->required();

  // ---- fit
  auto* fitc = app.add_subcommand("fit", "cluster a dataset");
  std::string f_data, f_icvi = "ni", f_mode = "incr", f_out_labels, f_out_trace;
  bool f_header = false;
  TrainerConfig f_cfg;
  fitc->add_option("--data", f_data, "input csv")->required();
  fitc->add_flag("--header", f_header, "input csv has a header row");
  fitc->add_option("--k", f_cfg.k, "cluster count")->required();
  fitc->add_option("--icvi", f_icvi, "index: ni|ch|wb|xb|db|pbm");
  fitc->add_option("--rho-a", f_cfg.rho_a, "ARTa vigilance [0,1]");
  fitc->add_option("--rho-ab", f_cfg.rho_ab, "map field vigilance [0,1]");
  fitc->add_option("--beta-a", f_cfg.beta_a, "ARTa learning rate (0,1]");
  fitc->add_option("--alpha", f_cfg.alpha_a, "ARTa choice parameter");
  fitc->add_option("--beta-ab", f_cfg.beta_ab, "map field learning rate (0,1]");
  fitc->add_option("--eps", f_cfg.epsilon, "match tracking increment");
  fitc->add_option("--epochs", f_cfg.max_epochs, "max training epochs");
  fitc->add_option("--tol", f_cfg.tol, "index convergence tolerance");
  fitc->add_option("--mode", f_mode, "incr|batch");
  fitc->add_option("--seed", f_cfg.seed, "rng seed");
  fitc->add_option("--out-labels", f_out_labels, "output label file")->required();
  fitc->add_option("--out-trace", f_out_trace, "output (iteration, value) csv");

  // ---- sweep
  auto* sweepc = app.add_subcommand("sweep", "vigilance grid search");
  std::string s_data, s_truth, s_icvi = "ni", s_select = "icvi", s_out_csv, s_out_labels;
  std::string s_grid_a = "0.0:0.95:0.05", s_grid_ab = "0.1:1.0:0.1";
  bool s_header = false;
  int s_workers = 0;
  TrainerConfig s_cfg;
  sweepc->add_option("--data", s_data, "input csv")->required();
  sweepc->add_flag("--header", s_header, "input csv has a header row");
  sweepc->add_option("--k", s_cfg.k, "cluster count")->required();
  sweepc->add_option("--icvi", s_icvi, "index: ni|ch|wb|xb|db|pbm");
  sweepc->add_option("--select-by", s_select, "ari|icvi");
  sweepc->add_option("--truth", s_truth, "ground-truth label file (required for --select-by ari)");
  sweepc->add_option("--rho-a-grid", s_grid_a, "lo:hi:step");
  sweepc->add_option("--rho-ab-grid", s_grid_ab, "lo:hi:step");
  sweepc->add_option("--epochs", s_cfg.max_epochs, "max training epochs");
  sweepc->add_option("--seed", s_cfg.seed, "rng seed");
  sweepc->add_option("--workers", s_workers, "worker threads (default: ICVIART_WORKERS or hardware)");
  sweepc->add_option("--out-csv", s_out_csv, "output table csv")->required();
  sweepc->add_option("--out-labels", s_out_labels, "labels of the selected run");

  // ---- speed
  auto* speedc = app.add_subcommand("speed", "incremental vs batch timing study");
  int p_d = 50, p_kmin = 2, p_kmax = 20, p_kstep = 1, p_gen_k = 0;
  long p_n = 2000;
  std::uint64_t p_seed = 0;
  std::string p_out_csv;
  std::vector<std::string> p_kinds;
  speedc->add_option("--d", p_d, "fixture dimension");
  speedc->add_option("--n", p_n, "fixture sample count");
  speedc->add_option("--k-min", p_kmin, "smallest requested cluster count");
  speedc->add_option("--k-max", p_kmax, "largest requested cluster count");
  speedc->add_option("--k-step", p_kstep, "cluster count step");
  speedc->add_option("--gen-k", p_gen_k, "true cluster count of the fixture (default: k-max)");
  speedc->add_option("--icvi", p_kinds, "indices to time (default: all)");
  speedc->add_option("--seed", p_seed, "rng seed");
  speedc->add_option("--out-csv", p_out_csv, "output csv")->required();

  // ---- eval
  auto* evalc = app.add_subcommand("eval", "adjusted Rand index of two label files");
  std::string e_a, e_b;
  evalc->add_option("a", e_a, "label file")->required();
  evalc->add_option("b", e_b, "label file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      GaussianSpec spec;
      spec.k = g_k;
      spec.d = g_d;
      spec.n_per_cluster_min = spec.n_per_cluster_max = static_cast<int>(g_n / g_k);
      spec.exact_total = g_n;
      spec.min_separation = g_sep;
      spec.seed = g_seed;
      auto [ds, labels] = generate(spec);
      save_csv(g_out_data, ds.X);
      save_labels(g_out_labels, labels);
      write_manifest(g_out_data, "gen",
                     {{"k", g_k}, {"d", g_d}, {"n", g_n}, {"sep", g_sep}, {"seed", g_seed}},
                     {g_out_data, g_out_labels});
      std::cout << "wrote " << ds.n() << " samples to " << g_out_data << "\n";
      return 0;
    }

    if (*fitc) {
      f_cfg.icvi = parse_kind(f_icvi);
      if (f_mode == "incr") f_cfg.mode = Mode::kIncremental;
      else if (f_mode == "batch") f_cfg.mode = Mode::kBatchCvi;
      else throw std::invalid_argument("unknown mode '" + f_mode + "' (valid: incr, batch)");
      const Dataset ds = load_csv(f_data, f_header);
      const PreparedData prep = prepare(ds);
      const RunResult run = fit(prep, f_cfg);
      save_labels(f_out_labels, run.labels);
      std::vector<std::string> outputs{f_out_labels};
      if (!f_out_trace.empty()) {
        save_trace_csv(f_out_trace, run.icvi_trace);
        outputs.push_back(f_out_trace);
      }
      nlohmann::json params = {{"data", f_data},       {"k", f_cfg.k},
                               {"icvi", f_icvi},       {"rho_a", f_cfg.rho_a},
                               {"rho_ab", f_cfg.rho_ab}, {"beta_a", f_cfg.beta_a},
                               {"alpha", f_cfg.alpha_a}, {"beta_ab", f_cfg.beta_ab},
                               {"eps", f_cfg.epsilon},  {"epochs", f_cfg.max_epochs},
                               {"tol", f_cfg.tol},      {"mode", f_mode},
                               {"seed", f_cfg.seed}};
      params["result"] = run;
      write_manifest(f_out_labels, "fit", params, outputs);
      std::cout << "k_final=" << run.k_final << " epochs=" << run.epochs_run << " stop="
                << stop_reason_name(run.stop_reason) << " value=" << run.final_value << "\n";
      return 0;
    }

    if (*sweepc) {
      s_cfg.icvi = parse_kind(s_icvi);
      SweepSpec spec;
      const Grid ga = parse_grid(s_grid_a);
      const Grid gab = parse_grid(s_grid_ab);
      spec.rho_a_lo = ga.lo; spec.rho_a_hi = ga.hi; spec.rho_a_step = ga.step;
      spec.rho_ab_lo = gab.lo; spec.rho_ab_hi = gab.hi; spec.rho_ab_step = gab.step;
      if (s_select == "ari") spec.select_by = SelectBy::kAri;
      else if (s_select == "icvi") spec.select_by = SelectBy::kIcvi;
      else throw std::invalid_argument("unknown --select-by '" + s_select + "' (valid: ari, icvi)");

      const Dataset ds = load_csv(s_data, s_header);
      const PreparedData prep = prepare(ds);
      Labels truth;
      if (!s_truth.empty()) truth = load_labels(s_truth);
      if (spec.select_by == SelectBy::kAri && truth.empty())
        throw std::invalid_argument("--select-by ari requires --truth");

      const SweepResult res = sweep(prep, truth.empty() ? nullptr : &truth, spec, s_cfg, s_workers);
      save_sweep_csv(s_out_csv, res.rows);
      std::vector<std::string> outputs{s_out_csv};
      if (!s_out_labels.empty()) {
        save_labels(s_out_labels, res.selected_labels);
        outputs.push_back(s_out_labels);
      }
      write_manifest(s_out_csv, "sweep",
                     {{"data", s_data}, {"k", s_cfg.k}, {"icvi", s_icvi}, {"select_by", s_select},
                      {"rho_a_grid", s_grid_a}, {"rho_ab_grid", s_grid_ab}, {"epochs", s_cfg.max_epochs},
                      {"seed", s_cfg.seed}},
                     outputs);
      const SweepRow& sel = res.rows[res.selected];
      std::cout << "selected rho_a=" << sel.rho_a << " rho_ab=" << sel.rho_ab << " icvi=" << sel.icvi;
      if (!truth.empty()) std::cout << " ari=" << sel.ari;
      std::cout << "\n";
      return 0;
    }

    if (*speedc) {
      std::vector<IcviKind> kinds;
      if (p_kinds.empty()) kinds = all_kinds();
      else for (const auto& s : p_kinds) kinds.push_back(parse_kind(s));

      GaussianSpec gspec;
      gspec.k = p_gen_k > 0 ? p_gen_k : p_kmax;
      gspec.d = p_d;
      gspec.n_per_cluster_min = gspec.n_per_cluster_max = static_cast<int>(p_n / gspec.k);
      gspec.exact_total = p_n;
      gspec.center_lo = -10.0 * std::sqrt(static_cast<double>(gspec.k));
      gspec.center_hi = 10.0 * std::sqrt(static_cast<double>(gspec.k));
      gspec.seed = p_seed;
      auto [ds, labels] = generate(gspec);
      const PreparedData prep = prepare(ds);

      TrainerConfig cfg;  // single epoch, fixed vigilances: the timing setup
      cfg.rho_a = 0.7;
      cfg.rho_ab = 1.0;
      cfg.max_epochs = 1;
      cfg.seed = p_seed;

      std::vector<int> k_values;
      for (int k = p_kmin; k <= p_kmax; k += p_kstep) k_values.push_back(k);
      const std::vector<SpeedRow> rows = speed_study(prep, k_values, kinds, cfg);
      save_speed_csv(p_out_csv, rows);
      write_manifest(p_out_csv, "speed",
                     {{"d", p_d}, {"n", p_n}, {"k_min", p_kmin}, {"k_max", p_kmax}, {"k_step", p_kstep},
                      {"gen_k", gspec.k}, {"seed", p_seed}},
                     {p_out_csv});
      std::cout << "wrote " << rows.size() << " timing rows to " << p_out_csv << "\n";
      return 0;
    }

    if (*evalc) {
      const Labels a = load_labels(e_a);
      const Labels b = load_labels(e_b);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", ari(a, b));
      std::cout << buf << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace icviart::cli
