/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Exercises libmixnorm through the C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "mixnorm.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mixnorm_capi_tests";
  fs::create_directories(dir);
  return dir / name;
}

mixnorm_section* demo() {
  mixnorm_section* s = nullptr;
  REQUIRE(mixnorm_synth_demo(&s) == MIXNORM_OK);
  return s;
}

}  // namespace

TEST_CASE("section handles") {
  const double samples[6] = {1, 2, 3, 4, 5, 6};
  mixnorm_section* s = nullptr;
  REQUIRE(mixnorm_section_create(3, 2, 0.004, 10.0, 0.0, samples, &s) == MIXNORM_OK);
  size_t nt = 0, nx = 0;
  double dt = 0, dx = 0, t0 = -1;
  CHECK(mixnorm_section_dims(s, &nt, &nx, &dt, &dx, &t0) == MIXNORM_OK);
  CHECK(nt == 3);
  CHECK(nx == 2);
  CHECK(dt == 0.004);
  CHECK(dx == 10.0);
  CHECK(t0 == 0.0);
  double out[6] = {0};
  CHECK(mixnorm_section_samples(s, out, 6) == MIXNORM_OK);
  CHECK(std::memcmp(out, samples, sizeof out) == 0);
  CHECK(mixnorm_section_samples(s, out, 5) == MIXNORM_E_INVALID_ARGUMENT);
  mixnorm_section_free(s);
  mixnorm_section_free(nullptr);
}

TEST_CASE("errors carry codes and thread-local messages") {
  mixnorm_section* s = nullptr;
  CHECK(mixnorm_section_create(4, 4, 0.0, 10.0, 0.0, nullptr, &s) == MIXNORM_E_INVALID_SECTION);
  CHECK(s == nullptr);
  CHECK(std::string(mixnorm_last_error()).find("dt") != std::string::npos);
  std::string other = "unset";
  std::thread([&] { other = mixnorm_last_error(); }).join();
  CHECK(other.empty());

  CHECK(mixnorm_section_read("/nonexistent/x.sgrd", &s) == MIXNORM_E_IO);
  CHECK(std::string(mixnorm_last_error()).find("/nonexistent/x.sgrd") != std::string::npos);
  CHECK(mixnorm_migrate(nullptr, nullptr, &s) == MIXNORM_E_INVALID_ARGUMENT);
  CHECK(mixnorm_set_threads(0) == MIXNORM_E_INVALID_ARGUMENT);
  CHECK(std::string(mixnorm_status_name(MIXNORM_E_BAD_MAGIC)) == "bad magic");
}

TEST_CASE("grid files round trip and bad magic is reported") {
  mixnorm_section* s = demo();
  const auto path = scratch("demo.sgrd").string();
  REQUIRE(mixnorm_section_write(s, path.c_str()) == MIXNORM_OK);
  mixnorm_section* back = nullptr;
  REQUIRE(mixnorm_section_read(path.c_str(), &back) == MIXNORM_OK);
  std::vector<double> a(512 * 256), b(512 * 256);
  mixnorm_section_samples(s, a.data(), a.size());
  mixnorm_section_samples(back, b.data(), b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(b[i] == static_cast<double>(static_cast<float>(a[i])));
  mixnorm_section_free(back);

  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK(mixnorm_section_read(path.c_str(), &back) == MIXNORM_E_BAD_MAGIC);
  mixnorm_section_free(s);
}

TEST_CASE("migration, panels and cascade") {
  mixnorm_section* s = demo();
  mixnorm_migration_params p = mixnorm_migration_defaults();
  CHECK(p.v == 1500.0);
  mixnorm_section* direct = nullptr;
  REQUIRE(mixnorm_migrate(s, &p, &direct) == MIXNORM_OK);
  mixnorm_section* panels[10] = {nullptr};
  REQUIRE(mixnorm_panels(s, 500.0, 10, &p, panels) == MIXNORM_OK);
  std::vector<double> a(512 * 256), b(512 * 256);
  mixnorm_section_samples(direct, a.data(), a.size());
  mixnorm_section_samples(panels[9], b.data(), b.size());
  CHECK(a == b);
  for (auto* panel : panels) mixnorm_section_free(panel);
  mixnorm_section_free(direct);

  double rel = 1.0;
  CHECK(mixnorm_cascade_check(s, 707.1, 707.1, &p, &rel) == MIXNORM_OK);
  CHECK(rel <= 0.05);
  CHECK(mixnorm_cascade_check(s, 707.1, 0.5, &p, &rel) == MIXNORM_E_INVALID_ARGUMENT);
  p.interp = 7;
  CHECK(mixnorm_migrate(s, &p, &direct) == MIXNORM_E_INVALID_ARGUMENT);
  mixnorm_section_free(s);
}

TEST_CASE("betti, sweeps and emitted files") {
  mixnorm_section* s = demo();
  size_t b0 = 0, b1 = 0, active = 0;
  CHECK(mixnorm_betti(s, 0.1, &b0, &b1, &active) == MIXNORM_OK);
  CHECK(b0 >= 1);
  CHECK(active > 0);

  mixnorm_sweep_spec spec = mixnorm_sweep_defaults();
  spec.v_step = 500.0;
  mixnorm_sweep* sw = nullptr;
  REQUIRE(mixnorm_velocity_sweep(s, &spec, &sw) == MIXNORM_OK);
  CHECK(mixnorm_sweep_count(sw) == 6);
  CHECK(mixnorm_sweep_argmin(sw) == 1500.0);
  double v = 0;
  int empty = -1;
  CHECK(mixnorm_sweep_entry(sw, 0, &v, &b0, &b1, &active, &empty) == MIXNORM_OK);
  CHECK(v == 500.0);
  CHECK(empty == 0);
  CHECK(mixnorm_sweep_entry(sw, 6, &v, nullptr, nullptr, nullptr, nullptr) ==
        MIXNORM_E_INVALID_ARGUMENT);
  CHECK(mixnorm_sweep_write_csv(sw, scratch("s.csv").string().c_str()) == MIXNORM_OK);
  CHECK(mixnorm_sweep_write_svg(sw, scratch("s.svg").string().c_str()) == MIXNORM_OK);
  CHECK(mixnorm_sweep_write_csv(sw, "/nonexistent/dir/s.csv") == MIXNORM_E_IO);
  mixnorm_sweep_free(sw);

  const double taus[3] = {0.05, 0.1, 0.2};
  size_t tb0[3], tb1[3], tact[3];
  mixnorm_migration_params p = mixnorm_migration_defaults();
  CHECK(mixnorm_threshold_sweep(s, 1500.0, taus, 3, &p, tb0, tb1, tact) == MIXNORM_OK);
  CHECK(tact[0] >= tact[1]);
  CHECK(tact[1] >= tact[2]);
  mixnorm_section_free(s);
}

TEST_CASE("tv, despike and diffusion") {
  const double y[5] = {0, 0, 10, 0, 0};
  double x[5];
  CHECK(mixnorm_tv_denoise(y, x, 5, 2.0) == MIXNORM_OK);
  CHECK(x[2] == doctest::Approx(6.0));
  CHECK(mixnorm_tv_denoise(y, x, 5, -1.0) == MIXNORM_E_INVALID_ARGUMENT);

  mixnorm_section* s = demo();
  mixnorm_despike_params dp = mixnorm_despike_defaults();
  CHECK(dp.window == 25);
  mixnorm_section* out = nullptr;
  size_t flagged = 0;
  CHECK(mixnorm_despike(s, &dp, &out, &flagged) == MIXNORM_OK);
  CHECK(flagged > 0);
  mixnorm_section_free(out);
  dp.window = 24;
  CHECK(mixnorm_despike(s, &dp, &out, &flagged) == MIXNORM_E_INVALID_ARGUMENT);
  mixnorm_section_free(s);

  std::vector<double> small(20 * 20);
  for (size_t i = 0; i < small.size(); ++i) small[i] = std::sin(0.37 * static_cast<double>(i));
  mixnorm_section* sm = nullptr;
  REQUIRE(mixnorm_section_create(20, 20, 0.004, 10.0, 0.0, small.data(), &sm) == MIXNORM_OK);
  mixnorm_diffusion_params fp = mixnorm_diffusion_defaults();
  fp.patch = 3;
  fp.r = 8;
  CHECK(mixnorm_diffuse(sm, &fp, &out) == MIXNORM_OK);
  mixnorm_section_free(out);
  fp.patch = 4;
  CHECK(mixnorm_diffuse(sm, &fp, &out) == MIXNORM_E_INVALID_ARGUMENT);
  mixnorm_section_free(sm);
}

TEST_CASE("pipeline through the C API") {
  mixnorm_section* s = demo();
  double v_star = 0.0;
  mixnorm_section* final_out = nullptr;
  const auto dir = scratch("pipe").string();
  CHECK(mixnorm_run_pipeline(R"({"sweep": {"v_step": 500}, "diffuse": {"enabled": false}})", s,
                             dir.c_str(), &v_star, &final_out) == MIXNORM_OK);
  CHECK(v_star == 1500.0);
  CHECK(final_out != nullptr);
  CHECK(fs::exists(fs::path(dir) / "report.json"));
  mixnorm_section_free(final_out);

  CHECK(mixnorm_run_pipeline(R"({"bogus": 1})", s, dir.c_str(), &v_star, nullptr) ==
        MIXNORM_E_CONFIG);
  CHECK(std::string(mixnorm_last_error()).find("bogus") != std::string::npos);
  CHECK(mixnorm_run_pipeline(R"({"despike": {"enabled": false}, "sweep": {"enabled": false},
      "diffuse": {"enabled": false}, "migrate": {"velocity": 1500}})",
                             s, dir.c_str(), &v_star, nullptr) == MIXNORM_OK);
  CHECK(std::isnan(v_star));
  mixnorm_section_free(s);
}

TEST_CASE("SEG-Y import through the C API") {
  char warnings[64] = "x";
  mixnorm_section* s = nullptr;
  CHECK(mixnorm_import_segy("/nonexistent/f.sgy", &s, warnings, sizeof warnings) == MIXNORM_E_IO);
  CHECK(std::string(mixnorm_version()).size() > 0);
}
