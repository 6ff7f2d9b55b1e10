/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Zero-offset point-diffractor synthetics in a constant-velocity medium.

#include <cstddef>
#include <utility>
#include <vector>

#include "mixnorm/grid.hpp"

namespace mixnorm::synth {

struct Diffractor {
  double x = 0.0;    // lateral position, m
  double z = 0.0;    // depth, m
  double amp = 1.0;  // unitless
};

struct DiffractorModel {
  std::vector<Diffractor> diffractors;
  double v_true = 1500.0;           // m/s
  double wavelet_peak_freq = 25.0;  // Hz
  /// Scale each contribution by apex_time / t (1/t geometric spreading).
  bool geometric_spreading = false;
};

struct GridSpec {
  std::size_t nt = 512;
  std::size_t nx = 256;
  double dt = 0.004;
  double dx = 10.0;
};

/// Ricker value (1 - 2 pi^2 f^2 t^2) exp(-pi^2 f^2 t^2).
double ricker_value(double peak_freq, double t);

/// Ricker sampled at t = k*dt for k in [-half_len, half_len]; the peak sample
/// (index half_len) is exactly 1. Rejects peak_freq at or above Nyquist.
Trace ricker(double peak_freq, double dt, std::size_t half_len);

/// Checks the model against a target grid; throws Error(InvalidArgument).
void check_model(const DiffractorModel& model, const GridSpec& grid);

/// Two-way zero-offset traveltime from lateral position x to a diffractor.
double two_way_time(const Diffractor& d, double x, double v);

/// Sum of Ricker wavelets centred on each diffractor's hyperbola. Wavelet
/// samples falling outside the trace are dropped.
Section diffraction_response(const DiffractorModel& model, const GridSpec& grid);

/// 256 traces x 512 samples, dt 4 ms, dx 10 m, 25 Hz Ricker, v = 1500 m/s,
/// three unit-amplitude diffractors at (x, z) = (700, 450), (1280, 750) and
/// (1850, 1050) m. These constants are a desk-scale reconstruction of the
/// classic three-scatterer test, not measured values.
DiffractorModel three_diffractor_model();
GridSpec demo_grid();
std::pair<DiffractorModel, Section> three_diffractor_demo();

}  // namespace mixnorm::synth
