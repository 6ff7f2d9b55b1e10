/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// File formats.
//
// SGRD grid file, all little-endian:
//   char[4] "SGRD" | u16 version (1) | u32 nt | u32 nx | f64 dt | f64 dx |
//   f64 t0 | nt*nx f32 samples, trace-major (trace 0 first).
//
// SEG-Y import is limited to rev1 files with a uniform trace length and
// sample format 1 (IBM float) or 5 (IEEE float).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mixnorm/grid.hpp"
#include "mixnorm/sweep.hpp"

namespace mixnorm::io {

inline constexpr std::uint16_t kGridVersion = 1;
inline constexpr std::size_t kGridHeaderBytes = 38;

void write_grid(const Section& section, const std::filesystem::path& path);
Section read_grid(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_grid(const Section& section);
/// Throws Error(BadMagic | BadVersion | Truncated | NonFinite |
/// InvalidSection); `source` names the origin in diagnostics.
Section decode_grid(const std::vector<std::uint8_t>& bytes, const std::string& source);

/// IBM System/360 single-precision hex float (big-endian word) to double.
double ibm_to_double(std::uint32_t word);

struct SegyImport {
  Section section;
  std::vector<std::string> warnings;
};

SegyImport import_segy_minimal(const std::filesystem::path& path);

/// Columns velocity_mps,b0,b1,active_pixels, one row per entry.
std::string sweep_csv(const sweep::SweepResult& result);
/// Polyline of b1 against velocity with labelled axes and the argmin marked.
std::string sweep_svg(const sweep::SweepResult& result);
void emit_csv(const sweep::SweepResult& result, const std::filesystem::path& path);
void emit_curve_svg(const sweep::SweepResult& result, const std::filesystem::path& path);

/// Amplitude matrix: header "time_s,x_<m>...", one row per time sample.
std::string section_csv(const Section& section);

/// Shortest decimal representation that round-trips.
std::string format_number(double value);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mixnorm::io
