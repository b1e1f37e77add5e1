#pragma once

/**
 * @file runner.hpp
 * @brief Implementations of the CLI subcommands, shared with the test
 *        binaries.
 *
 * Every command is deterministic: inputs (sample points, needed table keys)
 * are enumerated serially in a canonical order, row computations may run on
 * a worker pool but each row writes only its own slot, and files are emitted
 * by a single thread with 17-significant-digit formatting. Outputs are
 * byte-identical across reruns and worker counts.
 *
 * Exit codes: 0 success, 1 threshold violation or computation failure,
 * 2 configuration error (thrown as ConfigError before any compute).
 */

#include <atomic>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "kahlercst/config.hpp"
#include "kahlercst/csv.hpp"
#include "kahlercst/frames.hpp"
#include "kahlercst/measure.hpp"
#include "kahlercst/transform.hpp"

namespace kcst {

/// Run fn(0..nrows-1) on `workers` threads; each call must touch only its
/// own output slot.
template <typename F>
inline void parallel_rows(int nrows, int workers, F&& fn) {
  workers = std::min(workers, nrows);
  if (workers <= 1) {
    for (int i = 0; i < nrows; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < nrows; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Residual thresholds enforced by geometry-check's exit code.
struct GeometryThresholds {
  double type11 = 1e-10;
  double duality = 1e-10;
  double theta = 1e-10;
  double halfform_rel = 1e-9;
};

inline int run_geometry_check(const RunConfig& cfg,
                              std::ostream& log = std::cerr) {
  std::vector<Tau> taus = cfg.tau_grid;
  if (taus.empty()) {
    taus = {Tau{0.0, 1.0}, Tau{0.5, 1.0}, Tau{0.0, 0.25}, Tau{-2.0, 1.0},
            Tau{0.7, 2.0}};
  }

  struct Sample {
    PhasePoint p;
    Tau tau;
  };
  std::vector<Sample> samples(cfg.samples);
  {
    Rng rng(cfg.seed);
    const int n = cfg.model.dim();
    for (int i = 0; i < cfg.samples; ++i) {
      samples[i].p.x = cfg.model.random_element(rng);
      samples[i].p.Y = VecD::Zero(n);
      for (int k = 0; k < n; ++k) {
        samples[i].p.Y(k) = rng.uniform(-cfg.sample_radius, cfg.sample_radius);
      }
      samples[i].tau = taus[i % taus.size()];
    }
  }

  struct Row {
    double type11 = 0.0, duality = 0.0, mineig = 0.0, theta = 0.0;
    double hf_closed = 0.0, hf_det = 0.0;
  };
  std::vector<Row> rows(cfg.samples);
  parallel_rows(cfg.samples, cfg.workers, [&](int i) {
    const auto& s = samples[i];
    const FrameData fr = build_frame(cfg.model, cfg.comp, s.p.Y, s.tau);
    Row& r = rows[i];
    r.type11 = check_type11(cfg.model, fr, s.p.Y);
    r.duality = duality_residual(fr);
    Eigen::SelfAdjointEigenSolver<MatC> es(positivity_matrix(cfg.model, fr, s.p.Y));
    r.mineig = es.eigenvalues().minCoeff();
    const ThetaResiduals tr = theta_pairing_check(cfg.comp, fr, s.p.Y);
    r.theta = std::max(tr.theta, tr.fiber_derivative);
    const HalfformNorm hf = halfform_norm(cfg.model, cfg.comp, s.p.Y, s.tau);
    r.hf_closed = hf.closed;
    r.hf_det = hf.via_determinant;
  });

  const GeometryThresholds thr;
  int violations = 0;
  std::vector<CsvRow> csv;
  csv.reserve(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i) {
    const Row& r = rows[i];
    csv.push_back({std::to_string(i), fmt17(samples[i].tau.t1),
                   fmt17(samples[i].tau.t2), fmt17(r.type11), fmt17(r.mineig),
                   fmt17(r.theta), fmt17(r.hf_closed), fmt17(r.hf_det)});
    const bool bad =
        r.type11 > thr.type11 || r.duality > thr.duality ||
        r.theta > thr.theta || !(r.mineig > 0.0) ||
        std::abs(r.hf_closed - r.hf_det) >
            thr.halfform_rel * std::max(1.0, std::abs(r.hf_closed));
    if (bad) {
      ++violations;
      log << "geometry-check: sample " << i << " violates a threshold\n";
    }
  }
  write_csv_atomic(cfg.output.empty() ? "geometry_check.csv" : cfg.output,
                   {"point", "tau1", "tau2", "type11_residual",
                    "min_eigenvalue", "theta_residual", "halfform_closed",
                    "halfform_det"},
                   csv);
  if (violations > 0) {
    log << "geometry-check: " << violations << "/" << cfg.samples
        << " samples failed\n";
    return 1;
  }
  return 0;
}

/// Compute any table entries missing for the given (rho, tau2) keys, in
/// parallel, inserting in canonical order afterwards.
inline void ensure_norms(NormTable& table, const RunConfig& cfg,
                         const std::vector<std::pair<IrrepLabel, double>>& keys) {
  std::vector<std::pair<IrrepLabel, double>> needed;
  std::set<std::pair<std::vector<int>, double>> seen;
  for (const auto& [rho, t2] : keys) {
    if (table.find(rho, t2) != nullptr) continue;
    if (seen.insert({rho.data, t2}).second) needed.emplace_back(rho, t2);
  }
  std::vector<NormValue> vals(needed.size());
  parallel_rows(static_cast<int>(needed.size()), cfg.workers, [&](int i) {
    vals[i] = norm_a(cfg.model, cfg.comp, needed[i].first, needed[i].second,
                     cfg.quad);
  });
  for (std::size_t i = 0; i < needed.size(); ++i) {
    table.insert(needed[i].first, needed[i].second, vals[i]);
  }
}

inline int run_norms(const RunConfig& cfg, std::ostream& log = std::cerr) {
  if (cfg.tau2_grid.empty()) {
    throw ConfigError("norms: tau2_grid must be non-empty");
  }
  NormTable table(cfg.model, cfg.comp, cfg.quad);
  if (!cfg.cache.empty()) table.load_cache(cfg.cache);

  std::vector<std::pair<IrrepLabel, double>> keys;
  for (const auto& rho : cfg.irreps) {
    for (double t2 : cfg.tau2_grid) keys.emplace_back(rho, t2);
  }
  ensure_norms(table, cfg, keys);

  std::vector<CsvRow> csv;
  for (const auto& [rho, t2] : keys) {
    const NormValue* v = table.find(rho, t2);
    csv.push_back({cfg.model.name(), cfg.comp.fingerprint(),
                   cfg.model.label_string(rho), fmt17(t2), fmt17(v->a),
                   fmt17(v->err)});
  }
  write_csv_atomic(cfg.output.empty() ? "norms.csv" : cfg.output,
                   NormTable::cache_header(), csv);
  if (!cfg.cache.empty()) table.save_cache(cfg.cache);
  (void)log;
  return 0;
}

inline int run_transform(const RunConfig& cfg, std::ostream& log = std::cerr) {
  if (cfg.section_path.empty()) {
    throw ConfigError("transform: 'section' input path is required");
  }
  if (cfg.transform_tau.t2 < 0.0) {
    throw ConfigError("transform: tau2 must be >= 0");
  }
  const PeterWeylSection s = read_section(cfg.model, cfg.section_path);

  NormTable table(cfg.model, cfg.comp, cfg.quad);
  if (!cfg.cache.empty()) table.load_cache(cfg.cache);
  std::vector<std::pair<IrrepLabel, double>> keys;
  for (const auto& [rho, A] : s.terms) {
    keys.emplace_back(rho, 0.0);
    keys.emplace_back(rho, cfg.transform_tau.t2);
  }
  ensure_norms(table, cfg, keys);

  const PeterWeylSection out = cst(table, s, cfg.transform_tau);
  const double norm_in = section_norm(table, s);
  const double norm_out = section_norm(table, out);

  ordered_json doc;
  doc["model"] = cfg.model.name();
  doc["h_fingerprint"] = cfg.comp.fingerprint();
  doc["tau"] = {cfg.transform_tau.t1, cfg.transform_tau.t2};
  doc["norm_input"] = norm_in;
  doc["norm_output"] = norm_out;
  doc["entries"] = section_to_json(cfg.model, out);
  write_text_atomic(cfg.output.empty() ? "transform.json" : cfg.output,
                    doc.dump(2) + "\n");
  if (!cfg.cache.empty()) table.save_cache(cfg.cache);
  (void)log;
  return 0;
}

inline int run_semigroup_scan(const RunConfig& cfg,
                              std::ostream& log = std::cerr) {
  if (cfg.tau2_pairs.empty()) {
    throw ConfigError("semigroup-scan: tau2_pairs must be non-empty");
  }
  NormTable table(cfg.model, cfg.comp, cfg.quad);
  if (!cfg.cache.empty()) table.load_cache(cfg.cache);

  std::vector<std::pair<IrrepLabel, double>> keys;
  for (const auto& rho : cfg.irreps) {
    for (const auto& [a, b] : cfg.tau2_pairs) {
      keys.emplace_back(rho, a);
      keys.emplace_back(rho, b);
      keys.emplace_back(rho, a + b);
    }
  }
  ensure_norms(table, cfg, keys);

  std::vector<CsvRow> csv;
  for (const auto& rho : cfg.irreps) {
    for (const auto& [a, b] : cfg.tau2_pairs) {
      const SemigroupDefect d = semigroup_defect(table, rho, a, b);
      csv.push_back({cfg.model.label_string(rho), fmt17(a), fmt17(b),
                     fmt17(d.defect), fmt17(d.err_bound)});
    }
  }
  write_csv_atomic(cfg.output.empty() ? "semigroup_scan.csv" : cfg.output,
                   {"rho", "tau2", "tau2p", "defect", "err_bound"}, csv);
  if (!cfg.cache.empty()) table.save_cache(cfg.cache);
  (void)log;
  return 0;
}

inline int run_limit_scan(const RunConfig& cfg, std::ostream& log = std::cerr) {
  if (cfg.tau2_grid.empty()) {
    throw ConfigError("limit-scan: tau2_grid must be non-empty");
  }
  NormTable table(cfg.model, cfg.comp, cfg.quad);
  if (!cfg.cache.empty()) table.load_cache(cfg.cache);

  std::vector<std::pair<IrrepLabel, double>> keys;
  for (const auto& rho : cfg.irreps) {
    for (double t2 : cfg.tau2_grid) keys.emplace_back(rho, t2);
  }
  ensure_norms(table, cfg, keys);

  std::vector<CsvRow> csv;
  for (const auto& rho : cfg.irreps) {
    const double sq = std::sqrt(static_cast<double>(cfg.model.irrep_dim(rho)));
    for (double t2 : cfg.tau2_grid) {
      const NormValue* v = table.find(rho, t2);
      csv.push_back({cfg.model.name(), cfg.comp.fingerprint(),
                     cfg.model.label_string(rho), fmt17(t2), fmt17(sq * v->a),
                     fmt17(sq * v->err)});
    }
  }
  write_csv_atomic(cfg.output.empty() ? "limit_scan.csv" : cfg.output,
                   {"model", "h_fingerprint", "rho", "tau2", "sqrtd_a", "err"},
                   csv);
  if (!cfg.cache.empty()) table.save_cache(cfg.cache);
  (void)log;
  return 0;
}

}  // namespace kcst
