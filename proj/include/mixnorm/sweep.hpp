/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mixnorm/grid.hpp"
#include "mixnorm/migrate.hpp"
#include "mixnorm/topo.hpp"

namespace mixnorm::sweep {

/// Half-open sample window [it0, it1) x [ix0, ix1).
struct Window {
  std::size_t it0 = 0;
  std::size_t it1 = 0;
  std::size_t ix0 = 0;
  std::size_t ix1 = 0;
};

struct SweepSpec {
  double v_min = 500.0;
  double v_max = 3000.0;
  double v_step = 100.0;
  double tau = 0.1;
  std::optional<Window> window;
  migrate::MigrationParams migration;  // v is overwritten per trial
};

struct SweepEntry {
  double v = 0.0;
  std::size_t b0 = 0;
  std::size_t b1 = 0;
  std::size_t active_pixels = 0;
  /// The scored window was all zero; b0 = b1 = 0 and the entry is not an
  /// argmin candidate.
  bool empty_window = false;
  friend bool operator==(const SweepEntry&, const SweepEntry&) = default;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // ascending v
  double argmin_v = 0.0;
  double tau = 0.0;
  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Trial velocities v_min + i * v_step, i = 0, 1, ... while <= v_max.
std::vector<double> velocity_grid(const SweepSpec& spec);

/// Binarize + Betti on an already migrated section (optionally windowed).
SweepEntry score(const Section& migrated, double v, double tau,
                 const std::optional<Window>& window);

/// Migrate at each trial velocity and score by B1. The minimum B1 wins; ties
/// go to the lowest velocity.
SweepResult velocity_sweep(const Section& section, const SweepSpec& spec);

struct ThresholdEntry {
  double tau = 0.0;
  topo::BettiPair betti;
  std::size_t active_pixels = 0;
};

/// One migration at v, then Betti numbers at each tau.
std::vector<ThresholdEntry> threshold_sweep(const Section& section, Velocity v,
                                            const std::vector<double>& taus,
                                            const migrate::MigrationParams& params = {},
                                            const std::optional<Window>& window = std::nullopt);

}  // namespace mixnorm::sweep
