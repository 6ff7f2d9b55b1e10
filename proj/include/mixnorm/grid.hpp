/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Regularly sampled 2D seismic grids (time x lateral position).
//
// Samples are stored trace-major ("column per trace"): sample `it` of trace
// `ix` lives at index `ix * nt + it`, so every trace is a contiguous run of
// `nt` doubles.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mixnorm {

/// Migration / medium velocity in m/s. Construction rejects v <= 0 and
/// non-finite values.
class Velocity {
 public:
  explicit Velocity(double mps);
  double mps() const noexcept { return v_; }
  double squared() const noexcept { return v_ * v_; }

  friend bool operator==(Velocity, Velocity) = default;

 private:
  double v_;
};

/// A single trace: sampling interval plus amplitudes.
struct Trace {
  double dt = 0.004;
  std::vector<double> samples;
};

class Section {
 public:
  Section() = default;
  /// Zero-filled section. Does not validate; see `validate`.
  Section(std::size_t nt, std::size_t nx, double dt, double dx, double t0 = 0.0);
  Section(std::size_t nt, std::size_t nx, double dt, double dx, double t0,
          std::vector<double> samples);

  std::size_t nt() const noexcept { return nt_; }
  std::size_t nx() const noexcept { return nx_; }
  double dt() const noexcept { return dt_; }
  double dx() const noexcept { return dx_; }
  double t0() const noexcept { return t0_; }

  double& at(std::size_t it, std::size_t ix) { return samples_[ix * nt_ + it]; }
  double at(std::size_t it, std::size_t ix) const { return samples_[ix * nt_ + it]; }

  std::span<double> trace(std::size_t ix) { return {samples_.data() + ix * nt_, nt_}; }
  std::span<const double> trace(std::size_t ix) const {
    return {samples_.data() + ix * nt_, nt_};
  }

  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }

  Trace trace_copy(std::size_t ix) const;
  void set_trace(std::size_t ix, std::span<const double> values);

  /// Same grid metadata, all samples zero.
  Section zeros_like() const { return Section(nt_, nx_, dt_, dx_, t0_); }
  bool same_grid(const Section& other) const noexcept;

  friend bool operator==(const Section&, const Section&) = default;

 private:
  std::size_t nt_ = 0;
  std::size_t nx_ = 0;
  double dt_ = 0.0;
  double dx_ = 0.0;
  double t0_ = 0.0;
  std::vector<double> samples_;
};

struct Violation {
  enum class Kind { NonFinite, BadDt, BadDx, BadT0, SizeMismatch, EmptyGrid };
  Kind kind;
  std::size_t it = 0;  // NonFinite only
  std::size_t ix = 0;  // NonFinite only
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Lists every invariant violation. Never throws.
ValidationReport validate(const Section& section);
ValidationReport validate(const Trace& trace);

/// Throws Error(InvalidSection) carrying the first violations if the section
/// is not valid.
void require_valid(const Section& section, const char* context);
void require_valid(const Trace& trace, const char* context);

double max_abs(const Section& section);
double max_abs(std::span<const double> values);

Section scaled(const Section& section, double factor);

double rms(std::span<const double> values);
/// sqrt(sum (a-b)^2 / n) over two equally sized sample sets.
double rms_difference(std::span<const double> a, std::span<const double> b);

/// Sub-rectangle [it0, it1) x [ix0, ix1), metadata adjusted (t0 shifted).
Section crop(const Section& section, std::size_t it0, std::size_t it1, std::size_t ix0,
             std::size_t ix1);

}  // namespace mixnorm
