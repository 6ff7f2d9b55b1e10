/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// L1 variational editing of traces.
//
// tv_denoise_* solve the 1D total-variation problem
//     minimise  1/2 sum_i (x_i - y_i)^2 + lambda sum_i |x_{i+1} - x_i|
// exactly (Condat's direct algorithm). detect_spikes / interpolate_over
// implement the detect-and-replace edit, and despike_* chain them.

#include <cstddef>
#include <span>
#include <vector>

#include "mixnorm/grid.hpp"

namespace mixnorm::tvl1 {

struct TvParams {
  double lambda = 0.0;  // amplitude units, >= 0
};

struct SpikeEditParams {
  std::size_t window = 25;  // odd, >= 3
  double k_mad = 6.0;
};

/// Exact TV minimiser. lambda == 0 returns the input unchanged.
Trace tv_denoise_trace(const Trace& trace, const TvParams& params);
void tv_denoise(std::span<const double> input, std::span<double> output, double lambda);

Section tv_denoise_section(const Section& section, const TvParams& params);

/// Smallest lambda for which the minimiser is the constant mean trace:
/// max_k |sum_{i<=k} (y_i - mean)|.
double lambda_max(std::span<const double> samples);

double total_variation(std::span<const double> samples);

/// Flags i when |y_i - med| > k_mad * 1.4826 * MAD over the window centred
/// on i (clipped at the trace ends). A window with MAD = 0 falls back to
/// 1.2533 * mean absolute deviation about the median; windows that are
/// exactly flat flag nothing.
std::vector<std::size_t> detect_spikes(const Trace& trace, const SpikeEditParams& params);

/// Replaces flagged samples by linear interpolation between the nearest
/// unflagged neighbours; leading/trailing runs copy the nearest unflagged
/// value. Throws Error(InvalidArgument) if every sample is flagged or an
/// index is out of range.
Trace interpolate_over(const Trace& trace, std::span<const std::size_t> indices);

struct DespikeParams {
  SpikeEditParams spikes;
  /// TV pass weight as a fraction of the post-interpolation max |amplitude|
  /// of the section; 0 disables the pass.
  double tv_lambda_fraction = 0.01;
};

struct DespikeReport {
  std::size_t flagged_samples = 0;
  std::size_t flagged_traces = 0;
  double tv_lambda = 0.0;  // absolute weight actually applied
};

/// detect_spikes -> interpolate_over per trace, then the optional TV pass.
/// The TV pass is checked in-line for mean preservation, range preservation
/// and TV non-expansion (Error(Internal) on violation).
Section despike_section(const Section& section, const DespikeParams& params,
                        DespikeReport* report = nullptr);

}  // namespace mixnorm::tvl1
