#include "mlr/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <thread>

#include "mlr/baselines.hpp"
#include "mlr/errors.hpp"

namespace mlr {

namespace {

/// beta* sgn(2p-1), the target the estimator actually converges to.
Vector estimation_target(const GeneratorConfig& g) {
  if (g.p == 0.5) {
    throw ConfigError(
        "generator.p = 0.5 makes the direction parameter zero; the "
        "estimation target is undefined");
  }
  const double sign = g.p > 0.5 ? 1.0 : -1.0;
  return sign * g.beta_star;
}

void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path parent =
      std::filesystem::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) {
    throw IoError("cannot create directory " + parent.string() + ": " +
                  ec.message());
  }
}

void write_table(const std::string& path, const Table& t,
                 std::vector<std::string>& artifacts) {
  ensure_parent_dir(path);
  write_csv(path, t);
  artifacts.push_back(path);
}

Table records_table(const std::vector<RunRecord>& records) {
  Table t;
  t.columns = run_record_columns();
  for (const RunRecord& r : records) t.append_row(run_record_row(r));
  return t;
}

std::string rep_csv_path(const RunConfig& cfg, int r) {
  return cfg.outputs + "_rep" + std::to_string(r) + ".csv";
}

}  // namespace

std::vector<std::string> run_record_columns() {
  return {"n",           "err_sq",       "q_n",
          "r_n",         "alpha_mean",   "lambda_min",
          "lambda_max",  "thm1_bound",   "miss_alg_avg",
          "miss_oracle_avg", "miss_gap", "thm2_bound",
          "jn_avg",      "thm3_excess"};
}

std::vector<double> run_record_row(const RunRecord& rec) {
  return {static_cast<double>(rec.n),
          rec.err_sq,
          rec.q_n,
          rec.r_n,
          rec.alpha_mean,
          rec.lambda_min,
          rec.lambda_max,
          rec.thm1_bound,
          rec.miss_alg_avg,
          rec.miss_oracle_avg,
          rec.miss_gap,
          rec.thm2_bound,
          rec.jn_avg,
          rec.thm3_excess};
}

std::vector<std::int64_t> checkpoint_schedule(std::int64_t horizon,
                                              const RecordSpec& spec) {
  if (horizon < 1) throw ConfigError("checkpoint schedule: horizon must be >= 1");
  std::vector<std::int64_t> out;
  if (spec.kind == RecordSpec::Kind::Stride) {
    if (spec.stride < 1) {
      throw ConfigError("checkpoint schedule: stride must be >= 1");
    }
    for (std::int64_t n = spec.stride; n <= horizon; n += spec.stride) {
      out.push_back(n);
    }
  } else {
    if (!(spec.ratio > 1.0)) {
      throw ConfigError("checkpoint schedule: ratio must exceed 1");
    }
    std::int64_t n = 1;
    while (n < horizon) {
      out.push_back(n);
      const auto next = static_cast<std::int64_t>(
          std::ceil(static_cast<double>(n) * spec.ratio));
      n = std::max(n + 1, next);
    }
  }
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

ReplicationResult run_replication(const RunConfig& cfg, int replication,
                                  bool keep_snapshots) {
  const Vector target = estimation_target(cfg.generator);

  GeneratorConfig gcfg = cfg.generator;
  gcfg.seed = cfg.generator.seed ^ static_cast<std::uint64_t>(replication);
  gcfg.horizon = cfg.horizon;
  Generator gen(gcfg);

  EstimatorState st = new_state(cfg.estimator);
  ClusterMetrics metrics;
  GramAccumulator gram(cfg.estimator.P0);
  const std::vector<std::int64_t> schedule =
      checkpoint_schedule(cfg.horizon, cfg.record);

  ReplicationResult out;
  out.replication = replication;
  out.records.reserve(schedule.size());
  if (keep_snapshots) out.snapshots.push_back(make_snapshot(st));

  std::size_t next_cp = 0;
  double alpha_sum = 0.0;
  std::int64_t alpha_count = 0;

  for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
    const LabeledObservation obs = gen.next();
    // Classify with the estimate available BEFORE seeing this observation.
    metrics = update_metrics(metrics, st.beta, cfg.generator.beta_star,
                             obs.phi, obs.y, obs.z);
    gram.add(obs.phi);
    try {
      StepResult res = step(st, obs.phi, obs.y, cfg.estimator);
      st = std::move(res.state);
      alpha_sum += res.trace.alpha;
      ++alpha_count;
    } catch (const NumericError& e) {
      out.failed = true;
      out.failed_step = n;
      out.failure = e.what();
      break;
    }

    if (next_cp < schedule.size() && n == schedule[next_cp]) {
      const auto [lmin, lmax] = gram.extremes();
      const double nd = static_cast<double>(n);
      RunRecord rec;
      rec.n = n;
      rec.err_sq = norm_sq(target - st.beta);
      rec.q_n = st.q;
      rec.r_n = st.r;
      rec.alpha_mean = alpha_count > 0
                           ? alpha_sum / static_cast<double>(alpha_count)
                           : 0.0;
      rec.lambda_min = lmin;
      rec.lambda_max = lmax;
      rec.thm1_bound = std::pow(nd, cfg.analysis.kappa) / lmin;
      rec.miss_alg_avg = static_cast<double>(metrics.miss_alg) / nd;
      rec.miss_oracle_avg = static_cast<double>(metrics.miss_oracle) / nd;
      rec.miss_gap = misclass_gap(metrics);
      rec.thm2_bound = thm2_bound(nd, cfg.estimator.delta);
      rec.jn_avg = metrics.j / nd;
      rec.thm3_excess =
          thm3_excess(metrics.j, nd, cfg.estimator.sigma2, cfg.analysis.kappa);
      out.records.push_back(rec);
      if (keep_snapshots) out.snapshots.push_back(make_snapshot(st));
      alpha_sum = 0.0;
      alpha_count = 0;
      ++next_cp;
    }
  }

  out.metrics = metrics;
  out.final_state = std::move(st);
  return out;
}

ExperimentResult run_experiment(const RunConfig& cfg, bool write_files) {
  estimation_target(cfg.generator);  // reject p = 0.5 before spawning work

  const int reps = cfg.replications;
  ExperimentResult result;
  result.replications.resize(static_cast<std::size_t>(reps));

  std::atomic<int> next{0};
  std::exception_ptr worker_error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= reps) return;
      try {
        result.replications[static_cast<std::size_t>(i)] =
            run_replication(cfg, i, cfg.snapshots);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mu);
        if (!worker_error) worker_error = std::current_exception();
        return;
      }
    }
  };

  const int jobs = std::min(cfg.parallel_jobs, reps);
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  // Single collector, replication order: byte-stable output.
  if (write_files) {
    for (int r = 0; r < reps; ++r) {
      const ReplicationResult& rep =
          result.replications[static_cast<std::size_t>(r)];
      write_table(rep_csv_path(cfg, r), records_table(rep.records),
                  result.artifacts);
      if (cfg.snapshots) {
        const std::string spath =
            cfg.outputs + "_rep" + std::to_string(r) + "_snapshots.csv";
        ensure_parent_dir(spath);
        write_snapshots_csv(spath, rep.snapshots, cfg.estimator.d);
        result.artifacts.push_back(spath);
      }
    }
  }

  for (const ReplicationResult& rep : result.replications) {
    if (rep.failed) {
      throw NumericError("replication " + std::to_string(rep.replication) +
                         " failed at step " + std::to_string(rep.failed_step) +
                         ": " + rep.failure +
                         (write_files ? " (partial trajectories written)" : ""));
    }
  }

  // Aggregate: all replications share the schedule, so rows align.
  const std::vector<std::string> cols = run_record_columns();
  Table summary;
  summary.columns.push_back("n");
  for (std::size_t c = 1; c < cols.size(); ++c) {
    summary.columns.push_back(cols[c] + "_mean");
    summary.columns.push_back(cols[c] + "_max");
  }
  const std::size_t rows = result.replications.front().records.size();
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> row;
    row.push_back(
        static_cast<double>(result.replications.front().records[i].n));
    const std::size_t metric_count = cols.size() - 1;
    for (std::size_t c = 0; c < metric_count; ++c) {
      double sum = 0.0;
      double mx = -std::numeric_limits<double>::infinity();
      for (const ReplicationResult& rep : result.replications) {
        const double v = run_record_row(rep.records[i])[c + 1];
        sum += v;
        mx = std::max(mx, v);
      }
      row.push_back(sum / static_cast<double>(reps));
      row.push_back(mx);
    }
    summary.append_row(row);
  }
  result.summary = std::move(summary);
  if (write_files) {
    write_table(cfg.outputs + "_summary.csv", result.summary,
                result.artifacts);
  }
  return result;
}

Table sweep(const RunConfig& cfg, bool write_files) {
  const std::vector<double> ps =
      cfg.sweep.p.empty() ? std::vector<double>{cfg.generator.p} : cfg.sweep.p;
  const std::vector<double> deltas =
      cfg.sweep.delta.empty() ? std::vector<double>{cfg.estimator.delta}
                              : cfg.sweep.delta;
  const std::vector<double> sigmas =
      cfg.sweep.sigma2.empty() ? std::vector<double>{cfg.generator.sigma2}
                               : cfg.sweep.sigma2;
  const std::vector<RegressorSpec> regs =
      cfg.sweep.regressors.empty()
          ? std::vector<RegressorSpec>{cfg.generator.regressor}
          : cfg.sweep.regressors;

  Table t;
  t.columns = {"grid",         "p",
               "delta",        "sigma2",
               "regressor",    "final_n",
               "final_err_sq_mean", "final_miss_gap_mean",
               "final_jn_avg_mean"};

  int k = 0;
  for (const double p : ps) {
    for (const double del : deltas) {
      for (const double s2 : sigmas) {
        for (const RegressorSpec& reg : regs) {
          RunConfig point = cfg;
          point.generator.p = p;
          point.estimator.delta = del;
          point.generator.sigma2 = s2;
          // The estimator's variance tracks the generator's, but must stay
          // positive even for a noise-free sweep point.
          point.estimator.sigma2 = s2 > 0.0 ? s2 : 1.0;
          point.generator.regressor = reg;
          point.sweep = SweepGrid{};
          point.outputs = cfg.outputs + "_g" + std::to_string(k);
          validate(point);

          const ExperimentResult res = run_experiment(point, write_files);
          const std::size_t last = res.summary.rows.size() - 1;
          const auto col = [&](const char* name) {
            return res.summary
                .rows[last][static_cast<std::size_t>(
                    res.summary.column_index(name))];
          };
          std::vector<std::string> row;
          row.push_back(std::to_string(k));
          row.push_back(format_double(p));
          row.push_back(format_double(del));
          row.push_back(format_double(s2));
          row.push_back(reg.label());
          row.push_back(res.summary.rows[last][0]);
          row.push_back(col("err_sq_mean"));
          row.push_back(col("miss_gap_mean"));
          row.push_back(col("jn_avg_mean"));
          t.append_row(std::move(row));
          ++k;
        }
      }
    }
  }

  if (write_files) {
    std::vector<std::string> artifacts;
    write_table(cfg.outputs + "_sweep.csv", t, artifacts);
  }
  return t;
}

void write_stream_csv(const std::string& path, const GeneratorConfig& cfg,
                      std::int64_t horizon) {
  Generator gen(cfg);
  Table t;
  t.columns.push_back("n");
  for (int i = 0; i < cfg.d; ++i) {
    t.columns.push_back("phi_" + std::to_string(i));
  }
  t.columns.push_back("y");
  t.columns.push_back("z");
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const LabeledObservation obs = gen.next();
    std::vector<double> row;
    row.reserve(t.columns.size());
    row.push_back(static_cast<double>(n));
    for (std::size_t i = 0; i < obs.phi.size(); ++i) row.push_back(obs.phi[i]);
    row.push_back(obs.y);
    row.push_back(static_cast<double>(obs.z));
    t.append_row(row);
  }
  ensure_parent_dir(path);
  write_csv(path, t);
}

std::vector<LabeledObservation> read_stream_csv(const std::string& path) {
  const Table t = read_csv(path);
  int d = 0;
  while (t.column_index("phi_" + std::to_string(d)) >= 0) ++d;
  if (d == 0) throw IoError("stream csv: no phi_* columns in " + path);

  std::vector<std::vector<double>> phi_cols;
  for (int i = 0; i < d; ++i) {
    phi_cols.push_back(t.numeric_column("phi_" + std::to_string(i)));
  }
  const std::vector<double> ys = t.numeric_column("y");
  const std::vector<double> zs = t.numeric_column("z");

  std::vector<LabeledObservation> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    LabeledObservation obs;
    obs.phi = Vector::zeros(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      obs.phi[static_cast<std::size_t>(i)] = phi_cols[static_cast<std::size_t>(i)][r];
    }
    obs.y = ys[r];
    const double z = zs[r];
    if (z != 1.0 && z != -1.0) {
      throw IoError("stream csv: z must be +/-1 at row " + std::to_string(r + 1));
    }
    obs.z = static_cast<int>(z);
    out.push_back(std::move(obs));
  }
  return out;
}

Table evaluate(const RunConfig& cfg, const std::string& stream_csv,
               const std::string& snapshots_csv) {
  const Vector target = estimation_target(cfg.generator);
  const std::vector<LabeledObservation> stream = read_stream_csv(stream_csv);
  const std::vector<StateSnapshot> snaps = read_snapshots_csv(snapshots_csv);
  if (snaps.empty()) throw ConfigError("evaluate: no snapshots");

  // Full replay needs beta_{k-1} for every observation k: snapshots at
  // n = 0, 1, ..., N with N <= stream length.
  bool full = snaps.front().n == 0;
  for (std::size_t i = 0; full && i < snaps.size(); ++i) {
    if (snaps[i].n != static_cast<std::int64_t>(i)) full = false;
  }
  full = full && snaps.size() >= 2 &&
         snaps.size() - 1 <= stream.size();

  Table t;
  t.columns = {"n", "err_sq"};
  if (full) {
    t.columns.insert(t.columns.end(), {"miss_alg_avg", "miss_oracle_avg",
                                       "miss_gap", "jn_avg"});
    ClusterMetrics metrics;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      const Vector beta = snaps[i].q * snaps[i].theta;
      if (i > 0) {
        const LabeledObservation& obs = stream[i - 1];
        const Vector beta_prev = snaps[i - 1].q * snaps[i - 1].theta;
        metrics = update_metrics(metrics, beta_prev, cfg.generator.beta_star,
                                 obs.phi, obs.y, obs.z);
        const double nd = static_cast<double>(metrics.n);
        t.append_row({static_cast<double>(snaps[i].n),
                      norm_sq(target - beta),
                      static_cast<double>(metrics.miss_alg) / nd,
                      static_cast<double>(metrics.miss_oracle) / nd,
                      misclass_gap(metrics), metrics.j / nd});
      } else {
        t.append_row({0.0, norm_sq(target - beta), 0.0, 0.0, 0.0, 0.0});
      }
    }
  } else {
    for (const StateSnapshot& s : snaps) {
      const Vector beta = s.q * s.theta;
      t.append_row({static_cast<double>(s.n), norm_sq(target - beta)});
    }
  }
  return t;
}

Table bounds_table(const RateParams& rp,
                   const std::vector<SeriesPoint>& lambda_min_series) {
  const std::vector<SeriesPoint> t1 = thm1_bound(lambda_min_series, rp.kappa);
  Table t;
  t.columns = {"n", "thm1_bound", "thm2_bound", "thm3_rate"};
  for (std::size_t i = 0; i < lambda_min_series.size(); ++i) {
    const double n = lambda_min_series[i].n;
    t.append_row({n, t1[i].v, thm2_bound(n, rp.delta),
                  std::pow(n, -(1.0 - rp.kappa) / 2.0)});
  }
  return t;
}

}  // namespace mlr
