// mlr — streaming identification and clustering for two-component symmetric
// mixed linear regression.
//
// Subcommands: simulate (raw stream CSV), run (full pipeline), sweep
// (parameter grid), eval (recompute metrics from stored artifacts), bounds
// (theoretical curves), plot (CSV -> SVG).
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure,
// 3 I/O failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlr/config.hpp"
#include "mlr/errors.hpp"
#include "mlr/runner.hpp"
#include "mlr/svg.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<int> jobs;
  std::string cap_mode;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_estimation = true) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--out", opts.out, "output file path prefix");
  cmd->add_option("--seed", opts.seed, "override generator seed");
  if (with_estimation) {
    cmd->add_option("--replications", opts.replications,
                    "override replication count");
    cmd->add_option("--jobs", opts.jobs, "override worker thread count");
    cmd->add_option("--cap-mode", opts.cap_mode,
                    "faithful | constant:C | unbounded");
  }
}

mlr::RunConfig build_config(const CommonOpts& opts) {
  mlr::RunConfig cfg = opts.config_path.empty()
                           ? mlr::default_config()
                           : mlr::load_config(opts.config_path);
  if (!opts.out.empty()) cfg.outputs = opts.out;
  if (opts.seed) cfg.generator.seed = *opts.seed;
  if (opts.replications) cfg.replications = *opts.replications;
  if (opts.jobs) cfg.parallel_jobs = *opts.jobs;
  if (!opts.cap_mode.empty()) {
    cfg.estimator.cap_mode = mlr::parse_cap_mode(opts.cap_mode);
  }
  mlr::validate(cfg);
  for (const std::string& w : cfg.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Streaming identification and clustering toolkit for two-component "
      "symmetric mixed linear regression"};
  app.require_subcommand(1);

  // simulate
  CommonOpts sim_opts;
  CLI::App* sim = app.add_subcommand(
      "simulate", "emit a raw labeled observation stream as CSV");
  add_common(sim, sim_opts, /*with_estimation=*/false);

  // run
  CommonOpts run_opts;
  bool run_snapshots = false;
  CLI::App* run = app.add_subcommand(
      "run", "full pipeline: generate, estimate, classify, analyze");
  add_common(run, run_opts);
  run->add_flag("--snapshots", run_snapshots,
                "also write per-checkpoint state snapshots");

  // sweep
  CommonOpts sweep_opts;
  CLI::App* swp = app.add_subcommand(
      "sweep", "cross-product grid of runs over {p, delta, sigma2, regressor}");
  add_common(swp, sweep_opts);

  // eval
  CommonOpts eval_opts;
  std::string eval_stream, eval_snaps;
  CLI::App* evl = app.add_subcommand(
      "eval", "recompute metrics offline from a stored stream + snapshots");
  add_common(evl, eval_opts, /*with_estimation=*/false);
  evl->add_option("--stream", eval_stream, "stream CSV (from simulate)")
      ->required();
  evl->add_option("--snapshots", eval_snaps, "snapshot CSV (from run)")
      ->required();

  // bounds
  CommonOpts bounds_opts;
  std::string bounds_lambda;
  CLI::App* bnd = app.add_subcommand(
      "bounds", "emit theoretical bound curves for a recorded lambda series");
  add_common(bnd, bounds_opts, /*with_estimation=*/false);
  bnd->add_option("--lambda", bounds_lambda,
                  "CSV containing n and lambda_min columns")
      ->required();

  // plot
  std::string plot_csv, plot_x = "n", plot_out = "plot.svg", plot_title;
  std::vector<std::string> plot_y;
  bool plot_logx = false, plot_logy = false;
  CLI::App* plt = app.add_subcommand("plot", "render CSV columns as an SVG chart");
  plt->add_option("csv", plot_csv, "input CSV")->required();
  plt->add_option("--x", plot_x, "x column (default n)");
  plt->add_option("--y", plot_y, "y column(s)")->required()->delimiter(',');
  plt->add_option("--out", plot_out, "output SVG path");
  plt->add_option("--title", plot_title, "chart title");
  plt->add_flag("--logx", plot_logx, "log10 x axis");
  plt->add_flag("--logy", plot_logy, "log10 y axis");

  try {
    app.parse(argc, argv);

    if (sim->parsed()) {
      const mlr::RunConfig cfg = build_config(sim_opts);
      const std::string path = cfg.outputs + "_stream.csv";
      mlr::write_stream_csv(path, cfg.generator, cfg.horizon);
      std::cout << "wrote " << path << "\n";
    } else if (run->parsed()) {
      mlr::RunConfig cfg = build_config(run_opts);
      if (run_snapshots) cfg.snapshots = true;
      const mlr::ExperimentResult res = mlr::run_experiment(cfg);
      for (const std::string& a : res.artifacts) {
        std::cout << "wrote " << a << "\n";
      }
    } else if (swp->parsed()) {
      const mlr::RunConfig cfg = build_config(sweep_opts);
      mlr::sweep(cfg);
      std::cout << "wrote " << cfg.outputs << "_sweep.csv\n";
    } else if (evl->parsed()) {
      const mlr::RunConfig cfg = build_config(eval_opts);
      const mlr::Table t = mlr::evaluate(cfg, eval_stream, eval_snaps);
      const std::string path = cfg.outputs + "_eval.csv";
      mlr::write_csv(path, t);
      std::cout << "wrote " << path << "\n";
    } else if (bnd->parsed()) {
      const mlr::RunConfig cfg = build_config(bounds_opts);
      const mlr::Table in = mlr::read_csv(bounds_lambda);
      const std::vector<double> ns = in.numeric_column("n");
      const std::vector<double> lmin = in.numeric_column("lambda_min");
      std::vector<mlr::SeriesPoint> series;
      series.reserve(ns.size());
      for (std::size_t i = 0; i < ns.size(); ++i) {
        series.push_back({ns[i], lmin[i]});
      }
      const mlr::Table t = mlr::bounds_table(cfg.analysis, series);
      const std::string path = cfg.outputs + "_bounds.csv";
      mlr::write_csv(path, t);
      std::cout << "wrote " << path << "\n";
    } else if (plt->parsed()) {
      mlr::PlotOptions opts;
      opts.title = plot_title;
      opts.logx = plot_logx;
      opts.logy = plot_logy;
      mlr::emit_svg(plot_csv, plot_x, plot_y, plot_out, opts);
      std::cout << "wrote " << plot_out << "\n";
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const mlr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mlr::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mlr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
