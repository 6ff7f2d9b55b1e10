/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/synth.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mixnorm/error.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm::synth {

double ricker_value(double peak_freq, double t) {
  const double a = std::numbers::pi * peak_freq * t;
  const double a2 = a * a;
  return (1.0 - 2.0 * a2) * std::exp(-a2);
}

Trace ricker(double peak_freq, double dt, std::size_t half_len) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "ricker: dt must be > 0");
  }
  if (!(peak_freq > 0.0) || peak_freq >= 0.5 / dt) {
    std::ostringstream os;
    os << "ricker: peak frequency " << peak_freq << " Hz must lie in (0, Nyquist = "
       << 0.5 / dt << " Hz)";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  Trace out{dt, std::vector<double>(2 * half_len + 1)};
  const auto h = static_cast<std::ptrdiff_t>(half_len);
  for (std::ptrdiff_t k = -h; k <= h; ++k) {
    out.samples[static_cast<std::size_t>(k + h)] =
        ricker_value(peak_freq, static_cast<double>(k) * dt);
  }
  return out;
}

void check_model(const DiffractorModel& model, const GridSpec& grid) {
  std::ostringstream os;
  if (grid.nt == 0 || grid.nx == 0 || !(grid.dt > 0.0) || !(grid.dx > 0.0)) {
    os << "grid must have nt, nx >= 1 and dt, dx > 0";
  } else if (!(model.v_true > 0.0) || !std::isfinite(model.v_true)) {
    os << "v_true must be > 0, got " << model.v_true;
  } else if (!(model.wavelet_peak_freq > 0.0) || model.wavelet_peak_freq >= 0.5 / grid.dt) {
    os << "wavelet peak frequency " << model.wavelet_peak_freq
       << " Hz must lie in (0, Nyquist = " << 0.5 / grid.dt << " Hz)";
  } else {
    const double x_max = static_cast<double>(grid.nx - 1) * grid.dx;
    for (std::size_t i = 0; i < model.diffractors.size(); ++i) {
      const auto& d = model.diffractors[i];
      if (!(d.z > 0.0) || !std::isfinite(d.z)) {
        os << "diffractor " << i << ": depth must be > 0, got " << d.z;
        break;
      }
      if (!(d.x >= 0.0 && d.x <= x_max)) {
        os << "diffractor " << i << ": x = " << d.x << " outside [0, " << x_max << "]";
        break;
      }
      if (!std::isfinite(d.amp)) {
        os << "diffractor " << i << ": amplitude not finite";
        break;
      }
    }
  }
  if (!os.str().empty()) throw Error(ErrorCode::InvalidArgument, "diffractor model: " + os.str());
}

double two_way_time(const Diffractor& d, double x, double v) {
  return 2.0 / v * std::hypot(d.z, x - d.x);
}

Section diffraction_response(const DiffractorModel& model, const GridSpec& grid) {
  check_model(model, grid);
  Section out(grid.nt, grid.nx, grid.dt, grid.dx);
  // Ricker is below 1e-16 beyond 2/f.
  const double support = 2.0 / model.wavelet_peak_freq;

  parallel_for(grid.nx, [&](std::size_t ix) {
    const double x = static_cast<double>(ix) * grid.dx;
    auto tr = out.trace(ix);
    for (const auto& d : model.diffractors) {
      const double t_arr = two_way_time(d, x, model.v_true);
      double amp = d.amp;
      if (model.geometric_spreading) amp *= (2.0 * d.z / model.v_true) / t_arr;
      const auto first = static_cast<std::ptrdiff_t>(std::ceil((t_arr - support) / grid.dt));
      const auto last = static_cast<std::ptrdiff_t>(std::floor((t_arr + support) / grid.dt));
      for (std::ptrdiff_t it = std::max<std::ptrdiff_t>(first, 0);
           it <= last && it < static_cast<std::ptrdiff_t>(grid.nt); ++it) {
        const double t = static_cast<double>(it) * grid.dt;
        tr[static_cast<std::size_t>(it)] += amp * ricker_value(model.wavelet_peak_freq, t - t_arr);
      }
    }
  });
  return out;
}

DiffractorModel three_diffractor_model() {
  DiffractorModel m;
  m.v_true = 1500.0;
  m.wavelet_peak_freq = 25.0;
  m.diffractors = {{700.0, 450.0, 1.0}, {1280.0, 750.0, 1.0}, {1850.0, 1050.0, 1.0}};
  return m;
}

GridSpec demo_grid() { return GridSpec{512, 256, 0.004, 10.0}; }

std::pair<DiffractorModel, Section> three_diffractor_demo() {
  auto model = three_diffractor_model();
  auto section = diffraction_response(model, demo_grid());
  return {std::move(model), std::move(section)};
}

}  // namespace mixnorm::synth
