/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Pipeline orchestration: despike (L1) -> velocity sweep (L0) -> diffusion
// denoise (L2) -> final migration. The order is fixed; each stage can be
// disabled. Configuration is JSON, unknown keys are rejected at every level:
//
//   {
//     "despike": {"enabled": true, "window": 25, "k_mad": 6,
//                 "tv_lambda_fraction": 0.01},
//     "sweep":   {"enabled": true, "v_min": 500, "v_max": 3000,
//                 "v_step": 100, "tau": 0.1,
//                 "window": {"it0": 0, "it1": 512, "ix0": 0, "ix1": 256}},
//     "diffuse": {"enabled": true, "patch": 5, "epsilon": 1.0, "t": 2,
//                 "r": 32, "max_points": 4096, "knn": 32},
//     "migrate": {"enabled": true, "velocity": 1500, "pad_t": 2,
//                 "pad_x": 2, "interp": "sinc8"}
//   }
//
// Omitted sections and keys take the defaults above. "velocity" is required
// when the sweep is disabled and the final migration is enabled; with the
// sweep enabled, v* overrides it. The migrate section's pad/interp settings
// are also used by the sweep.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixnorm/diffuse.hpp"
#include "mixnorm/grid.hpp"
#include "mixnorm/migrate.hpp"
#include "mixnorm/sweep.hpp"
#include "mixnorm/tvl1.hpp"

namespace mixnorm::pipeline {

struct PipelineConfig {
  bool despike_enabled = true;
  tvl1::DespikeParams despike;

  bool sweep_enabled = true;
  sweep::SweepSpec sweep;

  bool diffuse_enabled = true;
  diffuse::DiffusionParams diffuse;

  bool migrate_enabled = true;
  std::optional<double> velocity;
  migrate::MigrationParams migration;
};

/// Throws Error(Config) naming the offending key.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);
/// Canonical JSON of a config (all keys, fixed order).
std::string config_json(const PipelineConfig& config);

inline constexpr const char* kDespikedFile = "01_despiked.sgrd";
inline constexpr const char* kSweepCsvFile = "02_sweep.csv";
inline constexpr const char* kSweepSvgFile = "02_sweep.svg";
inline constexpr const char* kDiffusedFile = "03_diffused.sgrd";
inline constexpr const char* kMigratedFile = "04_migrated.sgrd";
inline constexpr const char* kReportFile = "report.json";

struct PipelineReport {
  std::optional<double> v_star;
  std::optional<sweep::SweepResult> sweep;
  std::optional<tvl1::DespikeReport> despike;
  /// File names written, relative to the output directory, in order.
  std::vector<std::string> outputs;
  /// Output of the last enabled stage (the input if none ran).
  Section final_section;
  /// Contents of report.json.
  std::string json;
};

/// Runs the enabled stages in order, writing each stage's artefacts into
/// `out_dir` (created if missing) as soon as the stage completes. A failing
/// stage throws Error with the original code and a message prefixed by the
/// stage name; files from earlier stages are left in place.
PipelineReport run_pipeline(const PipelineConfig& config, const Section& input,
                            const std::filesystem::path& out_dir);

}  // namespace mixnorm::pipeline
