/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/tvl1.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "mixnorm/error.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm::tvl1 {

void tv_denoise(std::span<const double> y, std::span<double> x, double lambda) {
  if (y.size() != x.size()) throw Error(ErrorCode::InvalidArgument, "tv_denoise: size mismatch");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "tv_denoise: lambda must be finite and >= 0");
  }
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
  if (n == 0) return;
  if (lambda == 0.0 || std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) {
    std::copy(y.begin(), y.end(), x.begin());
    return;
  }
  if (lambda >= lambda_max(y)) {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::fill(x.begin(), x.end(), mean);
    return;
  }

  // Condat (2013). The current segment starts at k0; vmin/vmax bound its
  // value and umin/umax track the dual variable at the running position k.
  std::ptrdiff_t k = 0, k0 = 0, kminus = 0, kplus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = y[0] - lambda, vmax = y[0] + lambda;
  const double two_lambda = 2.0 * lambda;

  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do x[k0++] = vmin; while (k0 <= kminus);
        k = kminus = k0;
        vmin = y[k];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do x[k0++] = vmax; while (k0 <= kplus);
        k = kplus = k0;
        vmax = y[k];
        umax = -lambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do x[k0++] = vmin; while (k0 <= k);
        return;
      }
    }
    if ((umin += y[k + 1] - vmin) < -lambda) {
      do x[k0++] = vmin; while (k0 <= kminus);
      k = kminus = kplus = k0;
      vmin = y[k];
      vmax = vmin + two_lambda;
      umin = lambda;
      umax = -lambda;
    } else if ((umax += y[k + 1] - vmax) > lambda) {
      do x[k0++] = vmax; while (k0 <= kplus);
      k = kminus = kplus = k0;
      vmax = y[k];
      vmin = vmax - two_lambda;
      umin = lambda;
      umax = -lambda;
    } else {
      ++k;
      if (umin >= lambda) {
        kminus = k;
        vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
        umin = lambda;
      }
      if (umax <= -lambda) {
        kplus = k;
        vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
        umax = -lambda;
      }
    }
  }
}

Trace tv_denoise_trace(const Trace& trace, const TvParams& params) {
  require_valid(trace, "tv_denoise_trace");
  Trace out{trace.dt, std::vector<double>(trace.samples.size())};
  tv_denoise(trace.samples, out.samples, params.lambda);
  return out;
}

Section tv_denoise_section(const Section& section, const TvParams& params) {
  require_valid(section, "tv_denoise_section");
  if (!(params.lambda >= 0.0) || !std::isfinite(params.lambda)) {
    throw Error(ErrorCode::InvalidArgument, "tv_denoise_section: lambda must be finite and >= 0");
  }
  Section out = section.zeros_like();
  parallel_for(section.nx(), [&](std::size_t ix) {
    tv_denoise(section.trace(ix), out.trace(ix), params.lambda);
  });
  return out;
}

double lambda_max(std::span<const double> y) {
  if (y.size() < 2) return 0.0;
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double partial = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    partial += y[i] - mean;
    best = std::max(best, std::abs(partial));
  }
  return best;
}

double total_variation(std::span<const double> y) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) tv += std::abs(y[i + 1] - y[i]);
  return tv;
}

namespace {

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

constexpr double kMadToSigma = 1.4826;
constexpr double kMeanAbsToSigma = 1.2533;

}  // namespace

std::vector<std::size_t> detect_spikes(const Trace& trace, const SpikeEditParams& params) {
  require_valid(trace, "detect_spikes");
  const std::size_t n = trace.samples.size();
  if (params.window < 3 || params.window % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "detect_spikes: window must be odd and >= 3");
  }
  if (params.window >= n) {
    std::ostringstream os;
    os << "detect_spikes: window " << params.window << " must be shorter than the trace (" << n
       << " samples)";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (!(params.k_mad > 0.0) || !std::isfinite(params.k_mad)) {
    throw Error(ErrorCode::InvalidArgument, "detect_spikes: k_mad must be > 0");
  }

  const std::size_t half = params.window / 2;
  const auto& y = trace.samples;
  std::vector<std::size_t> flagged;
  std::vector<double> buf;
  buf.reserve(params.window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    buf.assign(y.begin() + static_cast<std::ptrdiff_t>(lo),
               y.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    const double med = median_of(buf);
    double mean_abs = 0.0;
    for (double& v : buf) {
      v = std::abs(v - med);
      mean_abs += v;
    }
    mean_abs /= static_cast<double>(buf.size());
    double scale = kMadToSigma * median_of(buf);
    if (scale == 0.0) scale = kMeanAbsToSigma * mean_abs;
    if (scale == 0.0) continue;
    if (std::abs(y[i] - med) > params.k_mad * scale) flagged.push_back(i);
  }
  return flagged;
}

Trace interpolate_over(const Trace& trace, std::span<const std::size_t> indices) {
  const std::size_t n = trace.samples.size();
  std::vector<bool> bad(n, false);
  for (std::size_t i : indices) {
    if (i >= n) {
      std::ostringstream os;
      os << "interpolate_over: index " << i << " out of range for " << n << " samples";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    bad[i] = true;
  }
  Trace out = trace;
  if (indices.empty()) return out;
  if (std::all_of(bad.begin(), bad.end(), [](bool b) { return b; })) {
    throw Error(ErrorCode::InvalidArgument,
                "interpolate_over: every sample is flagged, nothing to anchor on");
  }

  std::size_t i = 0;
  while (i < n) {
    if (!bad[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && bad[j]) ++j;
    // Run [i, j) is flagged.
    if (i == 0) {
      std::fill(out.samples.begin(), out.samples.begin() + static_cast<std::ptrdiff_t>(j),
                trace.samples[j]);
    } else if (j == n) {
      std::fill(out.samples.begin() + static_cast<std::ptrdiff_t>(i), out.samples.end(),
                trace.samples[i - 1]);
    } else {
      const double left = trace.samples[i - 1];
      const double right = trace.samples[j];
      const double span = static_cast<double>(j - (i - 1));
      for (std::size_t k = i; k < j; ++k) {
        const double w = static_cast<double>(k - (i - 1)) / span;
        out.samples[k] = (1.0 - w) * left + w * right;
      }
    }
    i = j;
  }
  return out;
}

namespace {

void check_tv_pass(std::span<const double> in, std::span<const double> out, std::size_t ix) {
  const auto [lo, hi] = std::minmax_element(in.begin(), in.end());
  const double scale = std::max(max_abs(in), 1e-300);
  const double tol = 1e-9 * scale * static_cast<double>(in.size());
  const double sum_in = std::accumulate(in.begin(), in.end(), 0.0);
  const double sum_out = std::accumulate(out.begin(), out.end(), 0.0);
  bool ok = std::abs(sum_in - sum_out) <= tol;
  for (double v : out) ok = ok && v >= *lo - 1e-12 * scale && v <= *hi + 1e-12 * scale;
  ok = ok && total_variation(out) <= total_variation(in) + tol;
  if (!ok) {
    std::ostringstream os;
    os << "despike: TV pass broke mean/range/variation invariants on trace " << ix;
    throw Error(ErrorCode::Internal, os.str());
  }
}

}  // namespace

Section despike_section(const Section& section, const DespikeParams& params,
                        DespikeReport* report) {
  require_valid(section, "despike");
  if (!(params.tv_lambda_fraction >= 0.0) || !std::isfinite(params.tv_lambda_fraction)) {
    throw Error(ErrorCode::InvalidArgument, "despike: tv_lambda_fraction must be >= 0");
  }
  Section edited = section.zeros_like();
  std::vector<std::size_t> flagged_per_trace(section.nx(), 0);
  parallel_for(section.nx(), [&](std::size_t ix) {
    const Trace tr = section.trace_copy(ix);
    const auto flags = detect_spikes(tr, params.spikes);
    flagged_per_trace[ix] = flags.size();
    edited.set_trace(ix, interpolate_over(tr, flags).samples);
  });

  DespikeReport local;
  for (std::size_t f : flagged_per_trace) {
    local.flagged_samples += f;
    local.flagged_traces += f > 0 ? 1 : 0;
  }
  local.tv_lambda = params.tv_lambda_fraction * max_abs(edited);

  Section out = edited;
  if (local.tv_lambda > 0.0) {
    out = tv_denoise_section(edited, TvParams{local.tv_lambda});
    for (std::size_t ix = 0; ix < out.nx(); ++ix) check_tv_pass(edited.trace(ix), out.trace(ix), ix);
  }
  if (report) *report = local;
  return out;
}

}  // namespace mixnorm::tvl1
