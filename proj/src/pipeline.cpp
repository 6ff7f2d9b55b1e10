/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mixnorm/error.hpp"
#include "mixnorm/io.hpp"

namespace mixnorm::pipeline {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Config, "config: " + where + ": " + what);
}

void reject_unknown(const ordered_json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) config_error(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) config_error(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read_key(const ordered_json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  const std::string path = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) config_error(path, "expected true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::size_t>) {
    if (!v.is_number_unsigned()) config_error(path, "expected a non-negative integer");
    out = v.get<std::size_t>();
  } else {
    if (!v.is_number()) config_error(path, "expected a number");
    out = v.get<double>();
  }
}

migrate::Interp parse_interp(const ordered_json& v) {
  if (!v.is_string()) config_error("migrate.interp", "expected \"sinc8\" or \"linear\"");
  const auto s = v.get<std::string>();
  if (s == "sinc8") return migrate::Interp::Sinc8;
  if (s == "linear") return migrate::Interp::Linear;
  config_error("migrate.interp", "unknown interpolator '" + s + "'");
}

const char* interp_name(migrate::Interp i) {
  return i == migrate::Interp::Sinc8 ? "sinc8" : "linear";
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("config: malformed JSON: ") + e.what());
  }
  reject_unknown(root, "<root>", {"despike", "sweep", "diffuse", "migrate"});

  PipelineConfig c;
  if (root.contains("despike")) {
    const auto& d = root["despike"];
    reject_unknown(d, "despike", {"enabled", "window", "k_mad", "tv_lambda_fraction"});
    read_key(d, "despike", "enabled", c.despike_enabled);
    read_key(d, "despike", "window", c.despike.spikes.window);
    read_key(d, "despike", "k_mad", c.despike.spikes.k_mad);
    read_key(d, "despike", "tv_lambda_fraction", c.despike.tv_lambda_fraction);
  }
  if (root.contains("sweep")) {
    const auto& s = root["sweep"];
    reject_unknown(s, "sweep", {"enabled", "v_min", "v_max", "v_step", "tau", "window"});
    read_key(s, "sweep", "enabled", c.sweep_enabled);
    read_key(s, "sweep", "v_min", c.sweep.v_min);
    read_key(s, "sweep", "v_max", c.sweep.v_max);
    read_key(s, "sweep", "v_step", c.sweep.v_step);
    read_key(s, "sweep", "tau", c.sweep.tau);
    if (s.contains("window")) {
      const auto& w = s["window"];
      reject_unknown(w, "sweep.window", {"it0", "it1", "ix0", "ix1"});
      for (const char* k : {"it0", "it1", "ix0", "ix1"}) {
        if (!w.contains(k)) config_error("sweep.window", std::string("missing key '") + k + "'");
      }
      sweep::Window win;
      read_key(w, "sweep.window", "it0", win.it0);
      read_key(w, "sweep.window", "it1", win.it1);
      read_key(w, "sweep.window", "ix0", win.ix0);
      read_key(w, "sweep.window", "ix1", win.ix1);
      c.sweep.window = win;
    }
  }
  if (root.contains("diffuse")) {
    const auto& d = root["diffuse"];
    reject_unknown(d, "diffuse", {"enabled", "patch", "epsilon", "t", "r", "max_points", "knn"});
    read_key(d, "diffuse", "enabled", c.diffuse_enabled);
    read_key(d, "diffuse", "patch", c.diffuse.patch);
    read_key(d, "diffuse", "epsilon", c.diffuse.epsilon);
    read_key(d, "diffuse", "t", c.diffuse.t);
    read_key(d, "diffuse", "r", c.diffuse.r);
    read_key(d, "diffuse", "max_points", c.diffuse.max_points);
    read_key(d, "diffuse", "knn", c.diffuse.knn);
  }
  if (root.contains("migrate")) {
    const auto& m = root["migrate"];
    reject_unknown(m, "migrate", {"enabled", "velocity", "pad_t", "pad_x", "interp"});
    read_key(m, "migrate", "enabled", c.migrate_enabled);
    if (m.contains("velocity")) {
      double v = 0.0;
      read_key(m, "migrate", "velocity", v);
      c.velocity = v;
    }
    read_key(m, "migrate", "pad_t", c.migration.pad_t);
    read_key(m, "migrate", "pad_x", c.migration.pad_x);
    if (m.contains("interp")) c.migration.interp = parse_interp(m["interp"]);
  }
  if (c.migrate_enabled && !c.sweep_enabled && !c.velocity) {
    config_error("migrate.velocity", "required when the sweep stage is disabled");
  }
  if (c.velocity && !(*c.velocity > 0.0)) config_error("migrate.velocity", "must be > 0");
  c.sweep.migration = c.migration;
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

namespace {

ordered_json despike_json(const PipelineConfig& c) {
  return {{"enabled", c.despike_enabled},
          {"window", c.despike.spikes.window},
          {"k_mad", c.despike.spikes.k_mad},
          {"tv_lambda_fraction", c.despike.tv_lambda_fraction}};
}

ordered_json sweep_json(const PipelineConfig& c) {
  ordered_json j = {{"enabled", c.sweep_enabled}, {"v_min", c.sweep.v_min},
                    {"v_max", c.sweep.v_max},     {"v_step", c.sweep.v_step},
                    {"tau", c.sweep.tau}};
  if (c.sweep.window) {
    const auto& w = *c.sweep.window;
    j["window"] = {{"it0", w.it0}, {"it1", w.it1}, {"ix0", w.ix0}, {"ix1", w.ix1}};
  }
  return j;
}

ordered_json diffuse_json(const PipelineConfig& c) {
  return {{"enabled", c.diffuse_enabled}, {"patch", c.diffuse.patch},
          {"epsilon", c.diffuse.epsilon}, {"t", c.diffuse.t},
          {"r", c.diffuse.r},             {"max_points", c.diffuse.max_points},
          {"knn", c.diffuse.knn}};
}

ordered_json migrate_json(const PipelineConfig& c) {
  ordered_json j = {{"enabled", c.migrate_enabled}};
  if (c.velocity) j["velocity"] = *c.velocity;
  j["pad_t"] = c.migration.pad_t;
  j["pad_x"] = c.migration.pad_x;
  j["interp"] = interp_name(c.migration.interp);
  return j;
}

template <typename F>
auto run_stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Internal, std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

std::string config_json(const PipelineConfig& config) {
  ordered_json j = {{"despike", despike_json(config)},
                    {"sweep", sweep_json(config)},
                    {"diffuse", diffuse_json(config)},
                    {"migrate", migrate_json(config)}};
  return j.dump(2) + "\n";
}

PipelineReport run_pipeline(const PipelineConfig& config, const Section& input,
                            const std::filesystem::path& out_dir) {
  run_stage("input", [&] {
    require_valid(input, "pipeline input");
    return 0;
  });
  run_stage("output", [&] {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, out_dir.string() + ": " + ec.message());
    return 0;
  });

  PipelineReport report;
  ordered_json stages = ordered_json::array();
  Section current = input;

  {
    ordered_json st = {{"name", "despike"}, {"params", despike_json(config)}};
    if (config.despike_enabled) {
      run_stage("despike", [&] {
        tvl1::DespikeReport dr;
        current = tvl1::despike_section(current, config.despike, &dr);
        io::write_grid(current, out_dir / kDespikedFile);
        report.despike = dr;
        return 0;
      });
      report.outputs.push_back(kDespikedFile);
      st["flagged_samples"] = report.despike->flagged_samples;
      st["flagged_traces"] = report.despike->flagged_traces;
      st["tv_lambda"] = report.despike->tv_lambda;
      st["outputs"] = {kDespikedFile};
    }
    stages.push_back(st);
  }

  {
    ordered_json st = {{"name", "sweep"}, {"params", sweep_json(config)}};
    if (config.sweep_enabled) {
      run_stage("sweep", [&] {
        report.sweep = sweep::velocity_sweep(current, config.sweep);
        report.v_star = report.sweep->argmin_v;
        io::emit_csv(*report.sweep, out_dir / kSweepCsvFile);
        io::emit_curve_svg(*report.sweep, out_dir / kSweepSvgFile);
        return 0;
      });
      report.outputs.push_back(kSweepCsvFile);
      report.outputs.push_back(kSweepSvgFile);
      st["v_star"] = *report.v_star;
      st["outputs"] = {kSweepCsvFile, kSweepSvgFile};
    }
    stages.push_back(st);
  }

  {
    ordered_json st = {{"name", "diffuse"}, {"params", diffuse_json(config)}};
    if (config.diffuse_enabled) {
      run_stage("diffuse", [&] {
        current = diffuse::diffuse_denoise(current, config.diffuse);
        io::write_grid(current, out_dir / kDiffusedFile);
        return 0;
      });
      report.outputs.push_back(kDiffusedFile);
      st["outputs"] = {kDiffusedFile};
    }
    stages.push_back(st);
  }

  {
    ordered_json st = {{"name", "migrate"}, {"params", migrate_json(config)}};
    if (config.migrate_enabled) {
      const double v = report.v_star ? *report.v_star : config.velocity.value_or(0.0);
      run_stage("migrate", [&] {
        if (!(v > 0.0)) {
          throw Error(ErrorCode::Config, "no velocity: enable the sweep or set migrate.velocity");
        }
        migrate::MigrationParams mp = config.migration;
        mp.v = v;
        current = migrate::migrate_constant_v(current, mp);
        io::write_grid(current, out_dir / kMigratedFile);
        return 0;
      });
      report.outputs.push_back(kMigratedFile);
      st["velocity_used"] = v;
      st["velocity_source"] = report.v_star ? "sweep" : "config";
      st["outputs"] = {kMigratedFile};
    }
    stages.push_back(st);
  }

  ordered_json j;
  j["input"] = {{"nt", input.nt()}, {"nx", input.nx()}, {"dt", input.dt()},
                {"dx", input.dx()}, {"t0", input.t0()}};
  j["stages"] = stages;
  j["v_star"] = report.v_star ? ordered_json(*report.v_star) : ordered_json(nullptr);
  report.outputs.push_back(kReportFile);
  j["outputs"] = report.outputs;
  report.json = j.dump(2) + "\n";
  run_stage("report", [&] {
    io::write_text(out_dir / kReportFile, report.json);
    return 0;
  });
  report.final_section = std::move(current);
  return report;
}

}  // namespace mixnorm::pipeline
