/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/migrate.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

#include "mixnorm/error.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm::migrate {

namespace {

using cplx = std::complex<double>;

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft2d {
 public:
  Fft2d(std::size_t n_slow, std::size_t n_fast)
      : size_(n_slow * n_fast),
        data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_))) {
    if (!data_) throw Error(ErrorCode::Internal, "fftw_malloc failed");
    std::lock_guard lock(planner_mutex());
    const int ns = static_cast<int>(n_slow);
    const int nf = static_cast<int>(n_fast);
    forward_ = fftw_plan_dft_2d(ns, nf, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(ns, nf, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(data_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(data_); }
  std::size_t size() const { return size_; }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t size_;
  fftw_complex* data_;
  fftw_plan forward_{};
  fftw_plan backward_{};
};

// Smallest 2^a 3^b 5^c >= n.
std::size_t next_fast_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

// Signed FFT bin index as a fraction of the sampling rate.
double fft_freq(std::size_t i, std::size_t n) {
  const auto si = static_cast<std::ptrdiff_t>(i);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  return static_cast<double>(si < (sn + 1) / 2 ? si : si - sn) / static_cast<double>(n);
}

constexpr int kSincHalfWidth = 4;

// Interpolates the periodic sequence col[0..n) at fractional index pos.
cplx interpolate(const cplx* col, std::size_t n, double pos, Interp interp) {
  const double base = std::floor(pos);
  const double frac = pos - base;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  auto wrap = [sn](std::ptrdiff_t k) { return static_cast<std::size_t>(((k % sn) + sn) % sn); };
  const auto ib = static_cast<std::ptrdiff_t>(base);
  if (frac == 0.0) return col[wrap(ib)];
  if (interp == Interp::Linear) {
    return (1.0 - frac) * col[wrap(ib)] + frac * col[wrap(ib + 1)];
  }
  // Hann-windowed sinc, taps ib-3 .. ib+4. sin(pi (frac - j)) = (-1)^j sin(pi frac).
  const double s = std::sin(std::numbers::pi * frac) / std::numbers::pi;
  cplx acc{0.0, 0.0};
  double wsum = 0.0;
  for (int j = -kSincHalfWidth + 1; j <= kSincHalfWidth; ++j) {
    const double d = frac - j;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double sinc = sign * s / d;
    const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * d / kSincHalfWidth));
    const double w = sinc * window;
    acc += w * col[wrap(ib + j)];
    wsum += w;
  }
  return acc / wsum;
}

void check_params(const MigrationParams& p) {
  if (!std::isfinite(p.v) || p.v <= 0.0) {
    std::ostringstream os;
    os << "migration velocity must be > 0 m/s, got " << p.v;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (p.pad_t < 1 || p.pad_x < 1) {
    throw Error(ErrorCode::InvalidArgument, "migration padding factors must be >= 1");
  }
}

}  // namespace

Section migrate_constant_v(const Section& section, const MigrationParams& params) {
  check_params(params);
  require_valid(section, "migrate");

  const double dt = section.dt();
  const double dx = section.dx();
  // Leading samples so that index 0 corresponds to t = 0.
  const auto n_lead = static_cast<std::size_t>(std::llround(section.t0() / dt));
  const std::size_t n_data = n_lead + section.nt();
  const std::size_t nt_pad = next_fast_size(params.pad_t * n_data);
  const std::size_t nx_pad = next_fast_size(params.pad_x * section.nx());
  if (nt_pad < 2 * kSincHalfWidth || section.nx() < 2) {
    std::ostringstream os;
    os << "migrate: section " << section.nt() << "x" << section.nx()
       << " too small; need a padded time axis of at least " << 2 * kSincHalfWidth
       << " samples (got " << nt_pad << ") and nx >= 2";
    throw Error(ErrorCode::SizeLimit, os.str());
  }

  // Layout: column per wavenumber, nt_pad contiguous frequency samples.
  Fft2d fft(nx_pad, nt_pad);
  cplx* buf = fft.data();
  std::fill(buf, buf + fft.size(), cplx{0.0, 0.0});
  for (std::size_t ix = 0; ix < section.nx(); ++ix) {
    auto tr = section.trace(ix);
    for (std::size_t it = 0; it < section.nt(); ++it) buf[ix * nt_pad + n_lead + it] = tr[it];
  }
  fft.forward();

  // Re-reference the time origin to the middle of the data window so the
  // spectrum varies slowly between bins; undone exactly after mapping.
  const double t_centre = static_cast<double>((n_data - 1) / 2) * dt;
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(nt_pad) * dt);
  const double omega_nyq = std::numbers::pi / dt;
  const double half_v = 0.5 * params.v;

  std::vector<cplx> centred(nt_pad);
  std::vector<cplx> mapped(nt_pad);
  for (std::size_t jx = 0; jx < nx_pad; ++jx) {
    cplx* col = buf + jx * nt_pad;
    const double kx = 2.0 * std::numbers::pi * fft_freq(jx, nx_pad) / dx;
    const double a = half_v * kx;
    if (a == 0.0) continue;  // identity at kx = 0

    for (std::size_t m = 0; m < nt_pad; ++m) {
      const double omega = 2.0 * std::numbers::pi * fft_freq(m, nt_pad) / dt;
      centred[m] = col[m] * std::polar(1.0, omega * t_centre);
    }
    for (std::size_t m = 0; m < nt_pad; ++m) {
      const double omega_tau = 2.0 * std::numbers::pi * fft_freq(m, nt_pad) / dt;
      if (omega_tau == 0.0) {
        mapped[m] = 0.0;
        continue;
      }
      const double omega = std::copysign(std::hypot(omega_tau, a), omega_tau);
      if (std::abs(omega) > omega_nyq) {
        mapped[m] = 0.0;
        continue;
      }
      const cplx value = interpolate(centred.data(), nt_pad, omega / d_omega, params.interp);
      const double jacobian = std::abs(omega_tau) / std::abs(omega);
      mapped[m] = jacobian * value * std::polar(1.0, -omega * t_centre);
    }
    std::copy(mapped.begin(), mapped.end(), col);
  }

  fft.backward();
  const double norm = 1.0 / static_cast<double>(nt_pad * nx_pad);
  Section out = section.zeros_like();
  for (std::size_t ix = 0; ix < section.nx(); ++ix) {
    auto tr = out.trace(ix);
    for (std::size_t it = 0; it < section.nt(); ++it) {
      tr[it] = buf[ix * nt_pad + n_lead + it].real() * norm;
    }
  }
  return out;
}

double effective_velocity(Velocity base_v, std::size_t k) {
  return base_v.mps() * std::sqrt(static_cast<double>(k));
}

PanelSequence semigroup_panels(const Section& section, Velocity base_v, std::size_t n_panels,
                               const MigrationParams& params) {
  if (n_panels < 1) throw Error(ErrorCode::InvalidArgument, "semigroup_panels: need n_panels >= 1");
  require_valid(section, "semigroup_panels");
  PanelSequence seq{base_v, std::vector<Section>(n_panels)};
  seq.panels[0] = section;
  parallel_for(n_panels - 1, [&](std::size_t i) {
    const std::size_t k = i + 1;
    MigrationParams p = params;
    p.v = effective_velocity(base_v, k);
    seq.panels[k] = migrate_constant_v(section, p);
  });
  return seq;
}

double cascade_check(const Section& section, Velocity v1, Velocity v2,
                     const MigrationParams& params) {
  if (v1.mps() < 1.0 || v2.mps() < 1.0) {
    throw Error(ErrorCode::InvalidArgument,
                "cascade_check: velocities below 1 m/s are ill-posed");
  }
  MigrationParams p = params;
  p.v = std::sqrt(v1.squared() + v2.squared());
  const Section direct = migrate_constant_v(section, p);
  p.v = v1.mps();
  const Section first = migrate_constant_v(section, p);
  p.v = v2.mps();
  const Section cascaded = migrate_constant_v(first, p);

  double num = 0.0;
  double den = 0.0;
  auto d = direct.samples();
  auto c = cascaded.samples();
  for (std::size_t i = 0; i < d.size(); ++i) {
    num += (c[i] - d[i]) * (c[i] - d[i]);
    den += d[i] * d[i];
  }
  if (den == 0.0) throw Error(ErrorCode::Degenerate, "cascade_check: zero-energy reference");
  return std::sqrt(num / den);
}

}  // namespace mixnorm::migrate
