/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "mixnorm/diffuse.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/grid.hpp"
#include "mixnorm/io.hpp"
#include "mixnorm/migrate.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/pipeline.hpp"
#include "mixnorm/sweep.hpp"
#include "mixnorm/synth.hpp"
#include "mixnorm/topo.hpp"
#include "mixnorm/tvl1.hpp"

struct mixnorm_section {
  mixnorm::Section value;
};

struct mixnorm_sweep {
  mixnorm::sweep::SweepResult value;
};

namespace {

using namespace mixnorm;

thread_local std::string g_last_error;

mixnorm_status fail(mixnorm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
mixnorm_status guarded(F&& body) {
  try {
    body();
    return MIXNORM_OK;
  } catch (const Error& e) {
    return fail(static_cast<mixnorm_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MIXNORM_E_SIZE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(MIXNORM_E_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

migrate::MigrationParams to_core(const mixnorm_migration_params* p) {
  migrate::MigrationParams m;
  if (!p) return m;
  m.v = p->v;
  m.pad_t = p->pad_t;
  m.pad_x = p->pad_x;
  if (p->interp == MIXNORM_INTERP_SINC8) {
    m.interp = migrate::Interp::Sinc8;
  } else if (p->interp == MIXNORM_INTERP_LINEAR) {
    m.interp = migrate::Interp::Linear;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown interpolator code");
  }
  return m;
}

mixnorm_section* wrap(Section s) { return new mixnorm_section{std::move(s)}; }

}  // namespace

extern "C" {

const char* mixnorm_version(void) { return "1.0.0"; }

const char* mixnorm_last_error(void) { return g_last_error.c_str(); }

const char* mixnorm_status_name(mixnorm_status status) {
  switch (status) {
    case MIXNORM_OK: return "ok";
    case MIXNORM_E_INVALID_ARGUMENT: return "invalid argument";
    case MIXNORM_E_INVALID_SECTION: return "invalid section";
    case MIXNORM_E_SIZE_LIMIT: return "size limit";
    case MIXNORM_E_DEGENERATE: return "degenerate input";
    case MIXNORM_E_BAD_MAGIC: return "bad magic";
    case MIXNORM_E_BAD_VERSION: return "bad version";
    case MIXNORM_E_TRUNCATED: return "truncated";
    case MIXNORM_E_NON_FINITE: return "non-finite value";
    case MIXNORM_E_UNSUPPORTED_FORMAT: return "unsupported format";
    case MIXNORM_E_IO: return "i/o error";
    case MIXNORM_E_CONFIG: return "config error";
    case MIXNORM_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

mixnorm_status mixnorm_set_threads(unsigned n) {
  return guarded([&] {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "thread count must be >= 1");
    set_thread_count(n);
  });
}

mixnorm_migration_params mixnorm_migration_defaults(void) {
  const migrate::MigrationParams d;
  return {d.v, d.pad_t, d.pad_x, MIXNORM_INTERP_SINC8};
}

mixnorm_sweep_spec mixnorm_sweep_defaults(void) {
  const sweep::SweepSpec d;
  mixnorm_sweep_spec s{};
  s.v_min = d.v_min;
  s.v_max = d.v_max;
  s.v_step = d.v_step;
  s.tau = d.tau;
  s.migration = mixnorm_migration_defaults();
  return s;
}

mixnorm_despike_params mixnorm_despike_defaults(void) {
  const tvl1::DespikeParams d;
  return {d.spikes.window, d.spikes.k_mad, d.tv_lambda_fraction};
}

mixnorm_diffusion_params mixnorm_diffusion_defaults(void) {
  const diffuse::DiffusionParams d;
  return {d.patch, d.epsilon, d.t, d.r, d.max_points, d.knn};
}

mixnorm_status mixnorm_section_create(size_t nt, size_t nx, double dt, double dx, double t0,
                                      const double* samples, mixnorm_section** out) {
  return guarded([&] {
    need(out, "out");
    Section s = samples ? Section(nt, nx, dt, dx, t0, std::vector<double>(samples, samples + nt * nx))
                        : Section(nt, nx, dt, dx, t0);
    require_valid(s, "mixnorm_section_create");
    *out = wrap(std::move(s));
  });
}

void mixnorm_section_free(mixnorm_section* section) { delete section; }

mixnorm_status mixnorm_section_dims(const mixnorm_section* section, size_t* nt, size_t* nx,
                                    double* dt, double* dx, double* t0) {
  return guarded([&] {
    need(section, "section");
    const auto& s = section->value;
    if (nt) *nt = s.nt();
    if (nx) *nx = s.nx();
    if (dt) *dt = s.dt();
    if (dx) *dx = s.dx();
    if (t0) *t0 = s.t0();
  });
}

mixnorm_status mixnorm_section_samples(const mixnorm_section* section, double* out, size_t len) {
  return guarded([&] {
    need(section, "section");
    need(out, "out");
    const auto src = section->value.samples();
    if (len < src.size()) {
      throw Error(ErrorCode::InvalidArgument, "output buffer holds " + std::to_string(len) +
                                                  " samples, need " + std::to_string(src.size()));
    }
    std::copy(src.begin(), src.end(), out);
  });
}

mixnorm_status mixnorm_section_read(const char* path, mixnorm_section** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(io::read_grid(path));
  });
}

mixnorm_status mixnorm_section_write(const mixnorm_section* section, const char* path) {
  return guarded([&] {
    need(section, "section");
    need(path, "path");
    io::write_grid(section->value, path);
  });
}

mixnorm_status mixnorm_section_export_csv(const mixnorm_section* section, const char* path) {
  return guarded([&] {
    need(section, "section");
    need(path, "path");
    io::write_text(path, io::section_csv(section->value));
  });
}

mixnorm_status mixnorm_import_segy(const char* path, mixnorm_section** out, char* warnings,
                                   size_t warnings_len) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto imported = io::import_segy_minimal(path);
    if (warnings && warnings_len > 0) {
      std::string joined;
      for (const auto& w : imported.warnings) joined += (joined.empty() ? "" : "\n") + w;
      const std::size_t n = std::min(joined.size(), warnings_len - 1);
      std::memcpy(warnings, joined.data(), n);
      warnings[n] = '\0';
    }
    *out = wrap(std::move(imported.section));
  });
}

mixnorm_status mixnorm_synth_demo(mixnorm_section** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(synth::three_diffractor_demo().second);
  });
}

mixnorm_status mixnorm_synth(const double* x, const double* z, const double* amp,
                             size_t n_diffractors, double v_true, double peak_freq,
                             int geometric_spreading, size_t nt, size_t nx, double dt, double dx,
                             mixnorm_section** out) {
  return guarded([&] {
    need(out, "out");
    if (n_diffractors > 0) {
      need(x, "x");
      need(z, "z");
      need(amp, "amp");
    }
    synth::DiffractorModel model;
    for (size_t i = 0; i < n_diffractors; ++i) model.diffractors.push_back({x[i], z[i], amp[i]});
    model.v_true = v_true;
    model.wavelet_peak_freq = peak_freq;
    model.geometric_spreading = geometric_spreading != 0;
    *out = wrap(synth::diffraction_response(model, synth::GridSpec{nt, nx, dt, dx}));
  });
}

mixnorm_status mixnorm_tv_denoise(const double* in, double* out, size_t n, double lambda) {
  return guarded([&] {
    if (n == 0) return;
    need(in, "in");
    need(out, "out");
    for (size_t i = 0; i < n; ++i) {
      if (!std::isfinite(in[i])) {
        throw Error(ErrorCode::NonFinite, "non-finite sample at " + std::to_string(i));
      }
    }
    tvl1::tv_denoise({in, n}, {out, n}, lambda);
  });
}

mixnorm_status mixnorm_despike(const mixnorm_section* in, const mixnorm_despike_params* params,
                               mixnorm_section** out, size_t* flagged_samples) {
  return guarded([&] {
    need(in, "in");
    need(out, "out");
    tvl1::DespikeParams p;
    if (params) {
      p.spikes.window = params->window;
      p.spikes.k_mad = params->k_mad;
      p.tv_lambda_fraction = params->tv_lambda_fraction;
    }
    tvl1::DespikeReport report;
    Section s = tvl1::despike_section(in->value, p, &report);
    if (flagged_samples) *flagged_samples = report.flagged_samples;
    *out = wrap(std::move(s));
  });
}

mixnorm_status mixnorm_migrate(const mixnorm_section* in, const mixnorm_migration_params* params,
                               mixnorm_section** out) {
  return guarded([&] {
    need(in, "in");
    need(out, "out");
    *out = wrap(migrate::migrate_constant_v(in->value, to_core(params)));
  });
}

mixnorm_status mixnorm_panels(const mixnorm_section* in, double base_v, size_t n_panels,
                              const mixnorm_migration_params* params, mixnorm_section** out) {
  return guarded([&] {
    need(in, "in");
    need(out, "out");
    auto seq = migrate::semigroup_panels(in->value, Velocity(base_v), n_panels, to_core(params));
    for (size_t k = 0; k < seq.count(); ++k) out[k] = wrap(std::move(seq.panels[k]));
  });
}

mixnorm_status mixnorm_cascade_check(const mixnorm_section* in, double v1, double v2,
                                     const mixnorm_migration_params* params,
                                     double* relative_error) {
  return guarded([&] {
    need(in, "in");
    need(relative_error, "relative_error");
    *relative_error =
        migrate::cascade_check(in->value, Velocity(v1), Velocity(v2), to_core(params));
  });
}

mixnorm_status mixnorm_betti(const mixnorm_section* in, double tau, size_t* b0, size_t* b1,
                             size_t* active_pixels) {
  return guarded([&] {
    need(in, "in");
    const auto img = topo::binarize(in->value, tau);
    const auto b = topo::betti(img);
    if (b0) *b0 = b.b0;
    if (b1) *b1 = b.b1;
    if (active_pixels) *active_pixels = img.active_count();
  });
}

namespace {

sweep::SweepSpec to_core(const mixnorm_sweep_spec* s) {
  sweep::SweepSpec spec;
  if (!s) return spec;
  spec.v_min = s->v_min;
  spec.v_max = s->v_max;
  spec.v_step = s->v_step;
  spec.tau = s->tau;
  if (s->has_window) spec.window = sweep::Window{s->it0, s->it1, s->ix0, s->ix1};
  spec.migration = to_core(&s->migration);
  return spec;
}

}  // namespace

mixnorm_status mixnorm_velocity_sweep(const mixnorm_section* in, const mixnorm_sweep_spec* spec,
                                      mixnorm_sweep** out) {
  return guarded([&] {
    need(in, "in");
    need(out, "out");
    *out = new mixnorm_sweep{sweep::velocity_sweep(in->value, to_core(spec))};
  });
}

void mixnorm_sweep_free(mixnorm_sweep* sweep) { delete sweep; }

size_t mixnorm_sweep_count(const mixnorm_sweep* sweep) {
  return sweep ? sweep->value.entries.size() : 0;
}

double mixnorm_sweep_argmin(const mixnorm_sweep* sweep) {
  return sweep ? sweep->value.argmin_v : std::numeric_limits<double>::quiet_NaN();
}

mixnorm_status mixnorm_sweep_entry(const mixnorm_sweep* sweep, size_t i, double* v, size_t* b0,
                                   size_t* b1, size_t* active_pixels, int* empty_window) {
  return guarded([&] {
    need(sweep, "sweep");
    if (i >= sweep->value.entries.size()) {
      throw Error(ErrorCode::InvalidArgument, "sweep entry index out of range");
    }
    const auto& e = sweep->value.entries[i];
    if (v) *v = e.v;
    if (b0) *b0 = e.b0;
    if (b1) *b1 = e.b1;
    if (active_pixels) *active_pixels = e.active_pixels;
    if (empty_window) *empty_window = e.empty_window ? 1 : 0;
  });
}

mixnorm_status mixnorm_sweep_write_csv(const mixnorm_sweep* sweep, const char* path) {
  return guarded([&] {
    need(sweep, "sweep");
    need(path, "path");
    io::emit_csv(sweep->value, path);
  });
}

mixnorm_status mixnorm_sweep_write_svg(const mixnorm_sweep* sweep, const char* path) {
  return guarded([&] {
    need(sweep, "sweep");
    need(path, "path");
    io::emit_curve_svg(sweep->value, path);
  });
}

mixnorm_status mixnorm_threshold_sweep(const mixnorm_section* in, double v, const double* taus,
                                       size_t n, const mixnorm_migration_params* params,
                                       size_t* b0, size_t* b1, size_t* active_pixels) {
  return guarded([&] {
    need(in, "in");
    if (n == 0) return;
    need(taus, "taus");
    const auto entries = sweep::threshold_sweep(in->value, Velocity(v),
                                                std::vector<double>(taus, taus + n),
                                                to_core(params));
    for (size_t i = 0; i < n; ++i) {
      if (b0) b0[i] = entries[i].betti.b0;
      if (b1) b1[i] = entries[i].betti.b1;
      if (active_pixels) active_pixels[i] = entries[i].active_pixels;
    }
  });
}

mixnorm_status mixnorm_diffuse(const mixnorm_section* in, const mixnorm_diffusion_params* params,
                               mixnorm_section** out) {
  return guarded([&] {
    need(in, "in");
    need(out, "out");
    diffuse::DiffusionParams p;
    if (params) {
      p.patch = params->patch;
      p.epsilon = params->epsilon;
      p.t = params->t;
      p.r = params->r;
      p.max_points = params->max_points;
      p.knn = params->knn;
    }
    *out = wrap(diffuse::diffuse_denoise(in->value, p));
  });
}

mixnorm_status mixnorm_run_pipeline(const char* config_json, const mixnorm_section* in,
                                    const char* out_dir, double* v_star,
                                    mixnorm_section** final_out) {
  return guarded([&] {
    need(in, "in");
    need(out_dir, "out_dir");
    const auto config = pipeline::parse_config(config_json ? config_json : "{}");
    auto report = pipeline::run_pipeline(config, in->value, out_dir);
    if (v_star) *v_star = report.v_star.value_or(std::numeric_limits<double>::quiet_NaN());
    if (final_out) *final_out = wrap(std::move(report.final_section));
  });
}

}  // extern "C"
