// Command-line surface: spectra, information quantities, compression traces,
// bound curves, exhaustive verification and high-noise scans.
//
// Exit codes: 0 pass/complete, 1 violation found, 2 usage error,
// 3 resource guard, 4 incompatible checkpoint.

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperinfo/io.hpp"

namespace hi = hyperinfo;

namespace {

struct OutputSink {
  std::string path;  // empty: stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::fwrite(content.data(), 1, content.size(), stdout);
    } else {
      hi::write_file_atomic(path, content);
    }
  }
};

std::vector<double> parse_alpha_grid(const std::string& s) {
  double a = 0, b = 0, step = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3)
    throw CLI::ValidationError("--alpha-grid", "expected a:b:step");
  auto grid = hi::linear_grid(a, b, step);
  for (double v : grid)
    if (!(v >= 0.0 && v <= 0.5)) throw CLI::ValidationError("--alpha-grid", "alpha must lie in [0, 1/2]");
  return grid;
}

std::vector<double> parse_lambda_grid(const std::string& s) {
  double a = 0, b = 0;
  int points = 0;
  if (std::sscanf(s.c_str(), "log:%lf:%lf:%d", &a, &b, &points) != 3)
    throw CLI::ValidationError("--lambda-grid", "expected log:a:b:points");
  if (!(a > 0.0 && b > a && b < 1.0)) throw CLI::ValidationError("--lambda-grid", "need 0 < a < b < 1");
  return hi::log_grid(a, b, points);
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_spectrum(const std::string& table_path, const std::string& format, const OutputSink& sink) {
  const hi::BooleanFunction b = hi::read_truth_table_file(table_path);
  const hi::FourierSpectrum s = hi::wht(hi::to_real(b));
  sink.write(format == "csv" ? hi::spectrum_csv(s) : dump_json(hi::spectrum_json(s)));
  return 0;
}

int cmd_mi(const std::string& table_path, double alpha, const std::string& format,
           const OutputSink& sink) {
  const hi::BooleanFunction b = hi::read_truth_table_file(table_path);
  const hi::MIReport r = hi::sum_coordinate_mi(b, hi::NoiseParams::from_alpha(alpha));
  sink.write(format == "csv" ? hi::mi_csv(r) : dump_json(hi::to_json(r)));
  return 0;
}

int cmd_compress(const std::string& table_path, double alpha, const std::string& format,
                 const OutputSink& sink) {
  const hi::BooleanFunction b = hi::read_truth_table_file(table_path);
  const hi::CompressionTrace t = hi::monotonize(b, hi::NoiseParams::from_alpha(alpha));
  sink.write(format == "csv" ? hi::trace_csv(t) : hi::trace_jsonl(t));
  std::cerr << "final=" << t.final.to_string() << "\n";
  return 0;
}

int cmd_oq1_curves(double k_min, double k_max, int k_points, double rho_step,
                   const std::string& format, const OutputSink& sink) {
  const auto k_grid = hi::log_grid(k_min, k_max, k_points);
  const auto rho_grid = hi::linear_grid(rho_step, 1.0 - rho_step, rho_step);
  const hi::BoundChainReport rep = hi::verify_thm2_bound_chain(k_grid, rho_grid);
  sink.write(format == "csv" ? hi::bound_chain_csv(rep) : dump_json(hi::bound_chain_json(rep)));
  return rep.all_within(1e-12) ? 0 : 1;
}

int cmd_verify(hi::SearchTask task, int n, const std::vector<double>& alpha_grid,
               const hi::SearchOptions& options, const std::string& format,
               const OutputSink& sink) {
  const hi::SearchReport rep = hi::run_sharded(task, n, alpha_grid, options);
  sink.write(format == "csv" ? hi::search_summary_csv(rep) : dump_json(hi::to_json(rep)));
  std::cerr << "classes=" << rep.class_count << " wall_time_s=" << rep.wall_time_seconds << "\n";
  return rep.violation_count > 0 ? 1 : 0;
}

int cmd_highnoise_scan(const std::vector<double>& lambda_grid, int n_random, std::uint64_t seed,
                       const std::string& format, const OutputSink& sink) {
  std::mt19937_64 rng(seed);
  auto family = hi::standard_density_family(rng);
  if (n_random != 6) family.back().second = hi::random_bounded_density(n_random, rng);

  std::vector<hi::ScanRow> rows;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& [name, f] : family) {
    std::vector<std::pair<std::string, std::vector<double>>> series{
        {"ev2", {}},   {"ev3abs", {}},           {"ez2", {}},   {"ez4", {}},
        {"ez2v", {}},  {"ez2_minus_lambda_l1", {}}, {"ent_F", {}}, {"thm3_residual", {}},
        {"gap", {}},   {"bound_term", {}}};
    for (double lambda : lambda_grid) {
      const hi::NoiseParams p = hi::NoiseParams::from_lambda(lambda);
      const hi::NoisyTriple t = hi::noisy_triple(f, p);
      const hi::MomentReport m = hi::moments(t);
      const hi::DecompositionGap g = hi::entropy_decomposition_gap(f, p);
      const double values[] = {m.ev2,
                               m.ev3abs,
                               m.ez2,
                               m.ez4,
                               m.ez2v,
                               m.ez2 - lambda * m.l1,
                               hi::ent_functional(t.F),
                               hi::theorem3_residual(f, p),
                               g.gap,
                               g.bound_term};
      for (std::size_t q = 0; q < series.size(); ++q) {
        series[q].second.push_back(values[q]);
        rows.emplace_back(lambda, name + ":" + series[q].first, values[q]);
      }
    }
    // slope fits for the quantities with asymptotic-order claims
    for (const char* q : {"ev2", "ev3abs", "ez4", "ez2_minus_lambda_l1", "ent_F", "thm3_residual"}) {
      for (const auto& [qname, vals] : series) {
        if (qname != q) continue;
        try {
          fits.push_back(hi::fit_json(name + ":" + qname, hi::scaling_fit(lambda_grid, vals)));
        } catch (const std::invalid_argument&) {
          // quantity vanishes for this family member; nothing to fit
        }
      }
    }
  }
  sink.write(format == "csv" ? hi::scan_csv(rows) : dump_json(fits));
  return 0;
}

int cmd_thresholds(const std::vector<double>& lambda_grid, const std::string& format,
                   const OutputSink& sink) {
  const hi::ThresholdTable t = hi::threshold_curves(lambda_grid);
  sink.write(format == "csv" ? hi::threshold_csv(t) : dump_json(hi::threshold_json(t)));
  return (t.ratio_monotone && t.ratio_below_one) ? 0 : 1;
}

int cmd_concentration(int n, double alpha, double tau, const std::string& format,
                      const OutputSink& sink) {
  const auto rows = hi::concentration_report(n, hi::NoiseParams::from_alpha(alpha), tau);
  sink.write(format == "csv" ? hi::concentration_csv(rows) : dump_json(hi::concentration_json(rows)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutual-information toolkit for Boolean functions under BSC noise"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string out_path;
  std::string table_path;
  std::string alpha_grid_spec;
  std::string lambda_grid_spec;
  double alpha = 0.25;
  double tau = 1.0;
  int n = 3;
  std::uint64_t seed = 1729;
  hi::SearchOptions search_opts;
  double k_min = 1.0, k_max = 100.0, rho_step = 0.01;
  int k_points = 40;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "output path (default: stdout)");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "Walsh coefficients of a truth table");
  spectrum->add_option("table", table_path, "truth-table file")->required();
  add_common(spectrum);

  CLI::App* mi = app.add_subcommand("mi", "total and per-coordinate mutual information");
  mi->add_option("table", table_path, "truth-table file")->required();
  mi->add_option("--alpha", alpha, "crossover probability")->required();
  add_common(mi);

  CLI::App* compress = app.add_subcommand("compress", "monotonize a function, tracing the objective");
  compress->add_option("table", table_path, "truth-table file")->required();
  compress->add_option("--alpha", alpha, "crossover probability")->required();
  add_common(compress);

  CLI::App* oq1 = app.add_subcommand("oq1-curves", "M_K / M_K' grids and the bound chain");
  oq1->add_option("--k-min", k_min);
  oq1->add_option("--k-max", k_max);
  oq1->add_option("--k-points", k_points);
  oq1->add_option("--rho-step", rho_step);
  add_common(oq1);

  auto add_verify_opts = [&](CLI::App* sub) {
    sub->add_option("--n", n, "cube dimension")->required();
    sub->add_option("--alpha-grid", alpha_grid_spec, "a:b:step (default standard grid)");
    sub->add_option("--shards", search_opts.shards);
    sub->add_option("--checkpoint", search_opts.checkpoint_path);
    sub->add_flag("--allow-long-run", search_opts.allow_long_run);
    add_common(sub);
  };
  CLI::App* vck = app.add_subcommand("verify-ck", "exhaustive max of I(b;Y) vs capacity");
  add_verify_opts(vck);
  CLI::App* vthm2 = app.add_subcommand("verify-thm2", "exhaustive max of sum_i I(b;Y_i) vs capacity");
  add_verify_opts(vthm2);

  CLI::App* scan = app.add_subcommand("highnoise-scan", "moments, residuals and slope fits over lambda");
  scan->add_option("--lambda-grid", lambda_grid_spec, "log:a:b:points");
  scan->add_option("--n", n, "dimension of the random density member");
  scan->add_option("--seed", seed);
  add_common(scan);

  CLI::App* thresholds = app.add_subcommand("thresholds", "high-noise threshold curves");
  thresholds->add_option("--lambda-grid", lambda_grid_spec, "log:a:b:points");
  add_common(thresholds);

  CLI::App* conc = app.add_subcommand("concentration", "near-maximizer tail-weight table");
  conc->add_option("--n", n, "cube dimension")->required();
  conc->add_option("--alpha", alpha, "crossover probability")->required();
  conc->add_option("--tau", tau, "capacity fraction threshold");
  add_common(conc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const OutputSink sink{out_path};
  try {
    if (*spectrum) return cmd_spectrum(table_path, format, sink);
    if (*mi) return cmd_mi(table_path, alpha, format, sink);
    if (*compress) return cmd_compress(table_path, alpha, format, sink);
    if (*oq1) return cmd_oq1_curves(k_min, k_max, k_points, rho_step, format, sink);
    if (*vck || *vthm2) {
      const auto grid = alpha_grid_spec.empty() ? hi::default_alpha_grid() : parse_alpha_grid(alpha_grid_spec);
      const auto task =
          *vck ? hi::SearchTask::total_mi : hi::SearchTask::sum_coord_mi;
      return cmd_verify(task, n, grid, search_opts, format, sink);
    }
    if (*scan) {
      const auto grid = lambda_grid_spec.empty() ? hi::log_grid(1e-3, 1e-1, 12)
                                                 : parse_lambda_grid(lambda_grid_spec);
      return cmd_highnoise_scan(grid, n, seed, format, sink);
    }
    if (*thresholds) {
      const auto grid = lambda_grid_spec.empty() ? hi::log_grid(1e-6, 1e-1, 25)
                                                 : parse_lambda_grid(lambda_grid_spec);
      return cmd_thresholds(grid, format, sink);
    }
    if (*conc) return cmd_concentration(n, alpha, tau, format, sink);
  } catch (const hi::ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const hi::CheckpointError& e) {
    std::cerr << "checkpoint: " << e.what() << "\n";
    return 4;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
