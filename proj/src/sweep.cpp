/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/sweep.hpp"

#include <cmath>
#include <sstream>

#include "mixnorm/error.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm::sweep {

namespace {

void check_window(const std::optional<Window>& w, const Section& s) {
  if (!w) return;
  if (w->it0 >= w->it1 || w->ix0 >= w->ix1 || w->it1 > s.nt() || w->ix1 > s.nx()) {
    std::ostringstream os;
    os << "sweep window [" << w->it0 << "," << w->it1 << ")x[" << w->ix0 << "," << w->ix1
       << ") outside the " << s.nt() << "x" << s.nx() << " grid";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    std::ostringstream os;
    os << "tau must lie in (0, 1), got " << tau;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

}  // namespace

std::vector<double> velocity_grid(const SweepSpec& spec) {
  if (!(spec.v_min > 0.0) || !std::isfinite(spec.v_max) || spec.v_min > spec.v_max ||
      !(spec.v_step > 0.0)) {
    std::ostringstream os;
    os << "velocity grid needs 0 < v_min <= v_max and v_step > 0 (got " << spec.v_min << ":"
       << spec.v_max << ":" << spec.v_step << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  std::vector<double> grid;
  const double slack = 1e-9 * spec.v_step;
  for (std::size_t i = 0;; ++i) {
    const double v = spec.v_min + static_cast<double>(i) * spec.v_step;
    if (v > spec.v_max + slack) break;
    grid.push_back(v);
  }
  return grid;
}

SweepEntry score(const Section& migrated, double v, double tau,
                 const std::optional<Window>& window) {
  check_window(window, migrated);
  const Section scored =
      window ? crop(migrated, window->it0, window->it1, window->ix0, window->ix1) : migrated;
  SweepEntry entry;
  entry.v = v;
  if (max_abs(scored) == 0.0) {
    entry.empty_window = true;
    return entry;
  }
  const auto img = topo::binarize(scored, tau);
  const auto b = topo::betti(img);
  entry.b0 = b.b0;
  entry.b1 = b.b1;
  entry.active_pixels = img.active_count();
  return entry;
}

SweepResult velocity_sweep(const Section& section, const SweepSpec& spec) {
  require_valid(section, "velocity_sweep");
  check_tau(spec.tau);
  check_window(spec.window, section);
  const auto velocities = velocity_grid(spec);

  SweepResult result;
  result.tau = spec.tau;
  result.entries.resize(velocities.size());
  parallel_for(velocities.size(), [&](std::size_t i) {
    migrate::MigrationParams p = spec.migration;
    p.v = velocities[i];
    result.entries[i] = score(migrate::migrate_constant_v(section, p), velocities[i], spec.tau,
                              spec.window);
  });

  const SweepEntry* best = nullptr;
  for (const auto& e : result.entries) {
    if (e.empty_window) continue;
    if (!best || e.b1 < best->b1) best = &e;
  }
  // Every window empty: fall back to the lowest velocity.
  result.argmin_v = best ? best->v : result.entries.front().v;
  return result;
}

std::vector<ThresholdEntry> threshold_sweep(const Section& section, Velocity v,
                                            const std::vector<double>& taus,
                                            const migrate::MigrationParams& params,
                                            const std::optional<Window>& window) {
  for (double tau : taus) check_tau(tau);
  check_window(window, section);
  migrate::MigrationParams p = params;
  p.v = v.mps();
  const Section migrated = migrate::migrate_constant_v(section, p);
  const Section scored =
      window ? crop(migrated, window->it0, window->it1, window->ix0, window->ix1) : migrated;

  std::vector<ThresholdEntry> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    const auto img = topo::binarize(scored, tau);
    out.push_back(ThresholdEntry{tau, topo::betti(img), img.active_count()});
  }
  return out;
}

}  // namespace mixnorm::sweep
