/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixnorm/error.hpp"

namespace mixnorm {

Velocity::Velocity(double mps) : v_(mps) {
  if (!std::isfinite(mps) || mps <= 0.0) {
    std::ostringstream os;
    os << "velocity must be finite and > 0 m/s, got " << mps;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

Section::Section(std::size_t nt, std::size_t nx, double dt, double dx, double t0)
    : nt_(nt), nx_(nx), dt_(dt), dx_(dx), t0_(t0), samples_(nt * nx, 0.0) {}

Section::Section(std::size_t nt, std::size_t nx, double dt, double dx, double t0,
                 std::vector<double> samples)
    : nt_(nt), nx_(nx), dt_(dt), dx_(dx), t0_(t0), samples_(std::move(samples)) {}

Trace Section::trace_copy(std::size_t ix) const {
  auto tr = trace(ix);
  return Trace{dt_, std::vector<double>(tr.begin(), tr.end())};
}

void Section::set_trace(std::size_t ix, std::span<const double> values) {
  if (values.size() != nt_) {
    throw Error(ErrorCode::InvalidArgument, "set_trace: length does not match nt");
  }
  std::copy(values.begin(), values.end(), trace(ix).begin());
}

bool Section::same_grid(const Section& other) const noexcept {
  return nt_ == other.nt_ && nx_ == other.nx_ && dt_ == other.dt_ && dx_ == other.dx_ &&
         t0_ == other.t0_;
}

ValidationReport validate(const Section& s) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::string msg) {
    report.push_back(Violation{kind, 0, 0, std::move(msg)});
  };
  if (s.nt() == 0 || s.nx() == 0) add(Violation::Kind::EmptyGrid, "nt and nx must be >= 1");
  if (!(std::isfinite(s.dt()) && s.dt() > 0.0)) {
    std::ostringstream os;
    os << "dt must be finite and > 0, got " << s.dt();
    add(Violation::Kind::BadDt, os.str());
  }
  if (!(std::isfinite(s.dx()) && s.dx() > 0.0)) {
    std::ostringstream os;
    os << "dx must be finite and > 0, got " << s.dx();
    add(Violation::Kind::BadDx, os.str());
  }
  if (!(std::isfinite(s.t0()) && s.t0() >= 0.0)) {
    std::ostringstream os;
    os << "t0 must be finite and >= 0, got " << s.t0();
    add(Violation::Kind::BadT0, os.str());
  }
  if (s.samples().size() != s.nt() * s.nx()) {
    std::ostringstream os;
    os << "sample count " << s.samples().size() << " != nt*nx = " << s.nt() * s.nx();
    add(Violation::Kind::SizeMismatch, os.str());
    return report;
  }
  for (std::size_t ix = 0; ix < s.nx(); ++ix) {
    for (std::size_t it = 0; it < s.nt(); ++it) {
      if (!std::isfinite(s.at(it, ix))) {
        std::ostringstream os;
        os << "non-finite sample at (it=" << it << ", ix=" << ix << ")";
        report.push_back(Violation{Violation::Kind::NonFinite, it, ix, os.str()});
      }
    }
  }
  return report;
}

ValidationReport validate(const Trace& trace) {
  ValidationReport report;
  if (trace.samples.empty()) {
    report.push_back(Violation{Violation::Kind::EmptyGrid, 0, 0, "trace has no samples"});
  }
  if (!(std::isfinite(trace.dt) && trace.dt > 0.0)) {
    report.push_back(Violation{Violation::Kind::BadDt, 0, 0, "dt must be finite and > 0"});
  }
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    if (!std::isfinite(trace.samples[i])) {
      std::ostringstream os;
      os << "non-finite sample at " << i;
      report.push_back(Violation{Violation::Kind::NonFinite, i, 0, os.str()});
    }
  }
  return report;
}

namespace {

void throw_report(const ValidationReport& report, const char* context) {
  std::ostringstream os;
  os << context << ": invalid input (" << report.size() << " violation"
     << (report.size() == 1 ? "" : "s") << ")";
  for (std::size_t i = 0; i < std::min<std::size_t>(report.size(), 3); ++i) {
    os << "; " << report[i].message;
  }
  throw Error(ErrorCode::InvalidSection, os.str());
}

}  // namespace

void require_valid(const Section& section, const char* context) {
  auto report = validate(section);
  if (!report.empty()) throw_report(report, context);
}

void require_valid(const Trace& trace, const char* context) {
  auto report = validate(trace);
  if (!report.empty()) throw_report(report, context);
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const Section& section) { return max_abs(section.samples()); }

Section scaled(const Section& section, double factor) {
  Section out = section;
  for (double& v : out.samples()) v *= factor;
  return out;
}

double rms(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc / static_cast<double>(values.size()));
}

double rms_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::InvalidArgument, "rms_difference: size mismatch");
  }
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

Section crop(const Section& s, std::size_t it0, std::size_t it1, std::size_t ix0,
             std::size_t ix1) {
  if (it0 >= it1 || ix0 >= ix1 || it1 > s.nt() || ix1 > s.nx()) {
    std::ostringstream os;
    os << "crop window [" << it0 << "," << it1 << ")x[" << ix0 << "," << ix1
       << ") outside " << s.nt() << "x" << s.nx() << " grid";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  Section out(it1 - it0, ix1 - ix0, s.dt(), s.dx(), s.t0() + static_cast<double>(it0) * s.dt());
  for (std::size_t ix = ix0; ix < ix1; ++ix) {
    for (std::size_t it = it0; it < it1; ++it) out.at(it - it0, ix - ix0) = s.at(it, ix);
  }
  return out;
}

}  // namespace mixnorm
