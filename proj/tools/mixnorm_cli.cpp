/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// mixnorm command-line tool. Talks to the library only through mixnorm.h.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixnorm.h"

namespace {

struct CliError {
  std::string message;
};

struct SectionDeleter {
  void operator()(mixnorm_section* s) const { mixnorm_section_free(s); }
};
using SectionPtr = std::unique_ptr<mixnorm_section, SectionDeleter>;

struct SweepDeleter {
  void operator()(mixnorm_sweep* s) const { mixnorm_sweep_free(s); }
};
using SweepPtr = std::unique_ptr<mixnorm_sweep, SweepDeleter>;

// Throws with "<stage>: <library message>" on failure.
void check(mixnorm_status status, const std::string& stage) {
  if (status != MIXNORM_OK) {
    throw CliError{stage + ": " + mixnorm_status_name(status) + ": " + mixnorm_last_error()};
  }
}

struct Globals {
  std::string input;
  std::string output;
  unsigned threads = 1;
};

const std::string& need_input(const Globals& g, const std::string& cmd) {
  if (g.input.empty()) throw CliError{cmd + ": --input is required"};
  return g.input;
}

const std::string& need_output(const Globals& g, const std::string& cmd) {
  if (g.output.empty()) throw CliError{cmd + ": --output is required"};
  return g.output;
}

SectionPtr load(const Globals& g, const std::string& cmd) {
  mixnorm_section* s = nullptr;
  check(mixnorm_section_read(need_input(g, cmd).c_str(), &s), cmd + ": reading input");
  return SectionPtr(s);
}

void save(const mixnorm_section* s, const Globals& g, const std::string& cmd) {
  check(mixnorm_section_write(s, need_output(g, cmd).c_str()), cmd + ": writing output");
}

// Writes text to --output, or stdout when no output was given.
void emit_text(const std::string& text, const std::string& path, const std::string& cmd) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw CliError{cmd + ": " + path + ": cannot write"};
}

// Shortest representation that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

int parse_interp(const std::string& name) {
  return name == "linear" ? MIXNORM_INTERP_LINEAR : MIXNORM_INTERP_SINC8;
}

void add_migration_options(CLI::App* cmd, mixnorm_migration_params& mp, std::string& interp) {
  cmd->add_option("--pad-t", mp.pad_t, "Time padding factor")->capture_default_str();
  cmd->add_option("--pad-x", mp.pad_x, "Trace padding factor")->capture_default_str();
  cmd->add_option("--interp", interp, "Frequency interpolator")
      ->check(CLI::IsMember({"sinc8", "linear"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixnorm: L1 despiking, B1 velocity analysis, diffusion denoising and "
               "constant-velocity migration of zero-offset sections"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-i,--input", g.input, "Input file (SGRD grid unless noted)");
  app.add_option("-o,--output", g.output, "Output file or directory");
  app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic diffraction section")->fallthrough();
  std::vector<std::string> diffractors;
  double v_true = 1500.0, freq = 25.0;
  std::size_t nt = 512, nx = 256;
  double dt = 0.004, dx = 10.0;
  bool spreading = false;
  synth->add_option("--diffractor", diffractors,
                    "Point diffractor \"x,z,amp\" in metres (repeatable); default is the "
                    "three-diffractor demo");
  synth->add_option("--v-true", v_true, "Model velocity, m/s")->capture_default_str();
  synth->add_option("--freq", freq, "Ricker peak frequency, Hz")->capture_default_str();
  synth->add_option("--nt", nt)->capture_default_str();
  synth->add_option("--nx", nx)->capture_default_str();
  synth->add_option("--dt", dt, "Sample interval, s")->capture_default_str();
  synth->add_option("--dx", dx, "Trace spacing, m")->capture_default_str();
  synth->add_flag("--spreading", spreading, "Apply 1/t geometric spreading");

  // despike
  auto* despike = app.add_subcommand("despike", "Spike detection, interpolation and TV pass")
                      ->fallthrough();
  mixnorm_despike_params dp = mixnorm_despike_defaults();
  despike->add_option("--window", dp.window, "Odd median window length")->capture_default_str();
  despike->add_option("--k-mad", dp.k_mad, "Threshold in robust sigmas")->capture_default_str();
  despike->add_option("--tv-fraction", dp.tv_lambda_fraction,
                      "TV weight as a fraction of max |amplitude| (0 disables)")
      ->capture_default_str();

  // migrate
  auto* migrate = app.add_subcommand("migrate", "Constant-velocity f-k time migration")
                      ->fallthrough();
  mixnorm_migration_params mp = mixnorm_migration_defaults();
  std::string interp = "sinc8";
  migrate->add_option("-v,--velocity", mp.v, "Migration velocity, m/s")->required();
  add_migration_options(migrate, mp, interp);

  // panels
  auto* panels = app.add_subcommand("panels", "Semigroup panel sequence A^k u into a directory")
                     ->fallthrough();
  double base_v = 500.0;
  std::size_t n_panels = 10;
  panels->add_option("--base-v", base_v, "Base velocity, m/s")->capture_default_str();
  panels->add_option("--count", n_panels, "Number of panels including A^0")->capture_default_str();
  add_migration_options(panels, mp, interp);

  // betti
  auto* betti = app.add_subcommand("betti", "Betti numbers of the thresholded section (CSV row)")
                    ->fallthrough();
  double tau = 0.1;
  std::vector<double> taus;
  double betti_v = 0.0;
  std::string label = "input";
  betti->add_option("--tau", tau, "Threshold fraction of max |amplitude|")->capture_default_str();
  betti->add_option("--taus", taus, "Several thresholds (one row each; needs --velocity)");
  betti->add_option("-v,--velocity", betti_v, "Migrate at this velocity first");
  betti->add_option("--label", label, "Row label when no velocity is given")->capture_default_str();
  add_migration_options(betti, mp, interp);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "B1 velocity sweep (CSV, optional SVG)")->fallthrough();
  mixnorm_sweep_spec spec = mixnorm_sweep_defaults();
  std::vector<std::size_t> window;
  std::string svg;
  sweep->add_option("--v-min", spec.v_min)->capture_default_str();
  sweep->add_option("--v-max", spec.v_max)->capture_default_str();
  sweep->add_option("--v-step", spec.v_step)->capture_default_str();
  sweep->add_option("--tau", spec.tau)->capture_default_str();
  sweep->add_option("--window", window, "Scoring window it0 it1 ix0 ix1 (half-open)")
      ->expected(4)
      ->delimiter(',');
  sweep->add_option("--svg", svg, "Also write the B1 curve as SVG");
  add_migration_options(sweep, spec.migration, interp);

  // diffuse
  auto* diffuse = app.add_subcommand("diffuse", "Diffusion-semigroup denoising")->fallthrough();
  mixnorm_diffusion_params fp = mixnorm_diffusion_defaults();
  diffuse->add_option("--patch", fp.patch)->capture_default_str();
  diffuse->add_option("--epsilon", fp.epsilon)->capture_default_str();
  diffuse->add_option("--t", fp.t, "Diffusion time")->capture_default_str();
  diffuse->add_option("--r", fp.r, "Retained eigenfunctions")->capture_default_str();
  diffuse->add_option("--max-points", fp.max_points)->capture_default_str();
  diffuse->add_option("--knn", fp.knn)->capture_default_str();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "despike -> sweep -> diffuse -> migrate")
                       ->fallthrough();
  std::string config_path;
  bool demo = false;
  pipeline->add_option("-c,--config", config_path, "JSON pipeline configuration");
  pipeline->add_flag("--demo", demo, "Use the three-diffractor demo instead of --input");

  auto* import_segy = app.add_subcommand("import-segy", "SEG-Y rev1 (formats 1, 5) to SGRD")
                          ->fallthrough();
  auto* export_csv = app.add_subcommand("export-csv", "SGRD to an amplitude CSV matrix")
                         ->fallthrough();

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->footer("Global options (before or after the subcommand):\n"
                "  -i,--input PATH    input file\n"
                "  -o,--output PATH   output file or directory\n"
                "  --threads N        worker threads; outputs do not depend on N");

  CLI11_PARSE(app, argc, argv);

  try {
    check(mixnorm_set_threads(g.threads), "threads");
    mp.interp = parse_interp(interp);
    spec.migration.interp = mp.interp;

    if (synth->parsed()) {
      mixnorm_section* s = nullptr;
      if (diffractors.empty()) {
        check(mixnorm_synth_demo(&s), "synth");
      } else {
        std::vector<double> xs, zs, amps;
        for (const auto& d : diffractors) {
          double x = 0, z = 0, a = 1;
          char c1 = 0, c2 = 0;
          std::istringstream is(d);
          if (!(is >> x >> c1 >> z >> c2 >> a) || c1 != ',' || c2 != ',') {
            throw CliError{"synth: --diffractor expects \"x,z,amp\", got \"" + d + "\""};
          }
          xs.push_back(x);
          zs.push_back(z);
          amps.push_back(a);
        }
        check(mixnorm_synth(xs.data(), zs.data(), amps.data(), xs.size(), v_true, freq,
                            spreading ? 1 : 0, nt, nx, dt, dx, &s),
              "synth");
      }
      SectionPtr out(s);
      save(out.get(), g, "synth");
    } else if (despike->parsed()) {
      auto in = load(g, "despike");
      mixnorm_section* s = nullptr;
      std::size_t flagged = 0;
      check(mixnorm_despike(in.get(), &dp, &s, &flagged), "despike");
      SectionPtr out(s);
      save(out.get(), g, "despike");
      std::cerr << "despike: " << flagged << " samples flagged\n";
    } else if (migrate->parsed()) {
      auto in = load(g, "migrate");
      mixnorm_section* s = nullptr;
      check(mixnorm_migrate(in.get(), &mp, &s), "migrate");
      SectionPtr out(s);
      save(out.get(), g, "migrate");
    } else if (panels->parsed()) {
      auto in = load(g, "panels");
      const std::string dir = need_output(g, "panels");
      std::filesystem::create_directories(dir);
      std::vector<mixnorm_section*> raw(n_panels, nullptr);
      check(mixnorm_panels(in.get(), base_v, n_panels, &mp, raw.data()), "panels");
      std::vector<SectionPtr> owned;
      for (auto* p : raw) owned.emplace_back(p);
      for (std::size_t k = 0; k < owned.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "panel_%02zu.sgrd", k);
        const std::string path = (std::filesystem::path(dir) / name).string();
        check(mixnorm_section_write(owned[k].get(), path.c_str()), "panels: writing " + path);
      }
    } else if (betti->parsed()) {
      auto in = load(g, "betti");
      std::string text = "label,b0,b1\n";
      if (!taus.empty()) {
        if (!(betti_v > 0.0)) throw CliError{"betti: --taus needs --velocity"};
        std::vector<std::size_t> b0(taus.size()), b1(taus.size()), act(taus.size());
        check(mixnorm_threshold_sweep(in.get(), betti_v, taus.data(), taus.size(), &mp,
                                      b0.data(), b1.data(), act.data()),
              "betti");
        for (std::size_t i = 0; i < taus.size(); ++i) {
          text += "tau=" + fmt(taus[i]) + "," + std::to_string(b0[i]) + "," +
                  std::to_string(b1[i]) + "\n";
        }
      } else {
        SectionPtr scored;
        const mixnorm_section* target = in.get();
        std::string row_label = label;
        if (betti_v > 0.0) {
          mixnorm_section* s = nullptr;
          mp.v = betti_v;
          check(mixnorm_migrate(in.get(), &mp, &s), "betti: migrate");
          scored.reset(s);
          target = s;
          row_label = fmt(betti_v);
        }
        std::size_t b0 = 0, b1 = 0;
        check(mixnorm_betti(target, tau, &b0, &b1, nullptr), "betti");
        text += row_label + "," + std::to_string(b0) + "," + std::to_string(b1) + "\n";
      }
      emit_text(text, g.output, "betti");
    } else if (sweep->parsed()) {
      auto in = load(g, "sweep");
      if (!window.empty()) {
        spec.has_window = 1;
        spec.it0 = window[0];
        spec.it1 = window[1];
        spec.ix0 = window[2];
        spec.ix1 = window[3];
      }
      mixnorm_sweep* raw = nullptr;
      check(mixnorm_velocity_sweep(in.get(), &spec, &raw), "sweep");
      SweepPtr result(raw);
      if (g.output.empty()) {
        std::cout << "velocity_mps,b0,b1,active_pixels\n";
        for (std::size_t i = 0; i < mixnorm_sweep_count(raw); ++i) {
          double v = 0;
          std::size_t b0 = 0, b1 = 0, act = 0;
          check(mixnorm_sweep_entry(raw, i, &v, &b0, &b1, &act, nullptr), "sweep");
          std::cout << fmt(v) << "," << b0 << "," << b1 << "," << act << "\n";
        }
      } else {
        check(mixnorm_sweep_write_csv(raw, g.output.c_str()), "sweep: writing " + g.output);
      }
      if (!svg.empty()) check(mixnorm_sweep_write_svg(raw, svg.c_str()), "sweep: writing " + svg);
      std::cerr << "sweep: argmin B1 at " << fmt(mixnorm_sweep_argmin(raw)) << " m/s\n";
    } else if (diffuse->parsed()) {
      auto in = load(g, "diffuse");
      mixnorm_section* s = nullptr;
      check(mixnorm_diffuse(in.get(), &fp, &s), "diffuse");
      SectionPtr out(s);
      save(out.get(), g, "diffuse");
    } else if (pipeline->parsed()) {
      std::string config_text = "{}";
      if (!config_path.empty()) {
        std::ifstream cf(config_path);
        if (!cf) throw CliError{"pipeline: " + config_path + ": cannot open config"};
        std::stringstream ss;
        ss << cf.rdbuf();
        config_text = ss.str();
      }
      SectionPtr in;
      if (demo) {
        mixnorm_section* s = nullptr;
        check(mixnorm_synth_demo(&s), "pipeline: demo input");
        in.reset(s);
      } else {
        in = load(g, "pipeline");
      }
      double v_star = 0.0;
      const std::string& dir = need_output(g, "pipeline");
      const std::string stage =
          config_path.empty() ? std::string("pipeline") : "pipeline (" + config_path + ")";
      check(mixnorm_run_pipeline(config_text.c_str(), in.get(), dir.c_str(), &v_star, nullptr),
            stage);
      if (!std::isnan(v_star)) std::cerr << "pipeline: v* = " << fmt(v_star) << " m/s\n";
    } else if (import_segy->parsed()) {
      mixnorm_section* s = nullptr;
      char warnings[1024] = {0};
      const std::string& path = need_input(g, "import-segy");
      check(mixnorm_import_segy(path.c_str(), &s, warnings, sizeof warnings), "import-segy");
      SectionPtr out(s);
      if (warnings[0]) std::cerr << "import-segy: warning: " << warnings << "\n";
      save(out.get(), g, "import-segy");
    } else if (export_csv->parsed()) {
      auto in = load(g, "export-csv");
      check(mixnorm_section_export_csv(in.get(), need_output(g, "export-csv").c_str()),
            "export-csv: writing " + g.output);
    }
  } catch (const CliError& e) {
    std::cerr << "mixnorm: error: " << e.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mixnorm: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
