/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mixnorm/error.hpp"

namespace mixnorm::io {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::uint32_t get_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

std::int16_t get_be16s(const std::uint8_t* p) {
  return static_cast<std::int16_t>((std::uint16_t{p[0]} << 8) | std::uint16_t{p[1]});
}

std::int32_t get_be32s(const std::uint8_t* p) { return static_cast<std::int32_t>(get_be32(p)); }

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_bytes(const std::filesystem::path& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
  out.write(data, static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

}  // namespace

std::vector<std::uint8_t> encode_grid(const Section& section) {
  require_valid(section, "write_grid");
  if (section.nt() > UINT32_MAX || section.nx() > UINT32_MAX) {
    throw Error(ErrorCode::SizeLimit, "write_grid: dimensions exceed u32");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kGridHeaderBytes + 4 * section.samples().size());
  for (char c : {'S', 'G', 'R', 'D'}) out.push_back(static_cast<std::uint8_t>(c));
  put_le(out, kGridVersion, 2);
  put_le(out, section.nt(), 4);
  put_le(out, section.nx(), 4);
  put_le(out, std::bit_cast<std::uint64_t>(section.dt()), 8);
  put_le(out, std::bit_cast<std::uint64_t>(section.dx()), 8);
  put_le(out, std::bit_cast<std::uint64_t>(section.t0()), 8);
  for (double v : section.samples()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::NonFinite, "write_grid: sample overflows single precision");
    }
    put_le(out, std::bit_cast<std::uint32_t>(f), 4);
  }
  return out;
}

Section decode_grid(const std::vector<std::uint8_t>& bytes, const std::string& source) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "SGRD", 4) != 0) {
    throw Error(ErrorCode::BadMagic, source + ": bad magic, not an SGRD grid file");
  }
  if (bytes.size() < kGridHeaderBytes) {
    throw Error(ErrorCode::Truncated, source + ": truncated header");
  }
  const auto version = static_cast<std::uint16_t>(get_le(bytes.data() + 4, 2));
  if (version != kGridVersion) {
    throw Error(ErrorCode::BadVersion, source + ": unsupported SGRD version " +
                                           std::to_string(version) + " (expected 1)");
  }
  const auto nt = static_cast<std::size_t>(get_le(bytes.data() + 6, 4));
  const auto nx = static_cast<std::size_t>(get_le(bytes.data() + 10, 4));
  const double dt = std::bit_cast<double>(get_le(bytes.data() + 14, 8));
  const double dx = std::bit_cast<double>(get_le(bytes.data() + 22, 8));
  const double t0 = std::bit_cast<double>(get_le(bytes.data() + 30, 8));

  const std::size_t expected = kGridHeaderBytes + 4 * nt * nx;
  if (bytes.size() < expected) {
    std::ostringstream os;
    os << source << ": truncated payload, expected " << 4 * nt * nx << " sample bytes for "
       << nt << "x" << nx << ", found " << bytes.size() - kGridHeaderBytes;
    throw Error(ErrorCode::Truncated, os.str());
  }
  if (bytes.size() > expected) {
    std::ostringstream os;
    os << source << ": " << bytes.size() - expected << " unexpected trailing bytes";
    throw Error(ErrorCode::InvalidSection, os.str());
  }

  std::vector<double> samples(nt * nx);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const float f = std::bit_cast<float>(
        static_cast<std::uint32_t>(get_le(bytes.data() + kGridHeaderBytes + 4 * i, 4)));
    if (!std::isfinite(f)) {
      std::ostringstream os;
      os << source << ": non-finite sample at (it=" << i % std::max<std::size_t>(nt, 1)
         << ", ix=" << i / std::max<std::size_t>(nt, 1) << ")";
      throw Error(ErrorCode::NonFinite, os.str());
    }
    samples[i] = f;
  }
  Section s(nt, nx, dt, dx, t0, std::move(samples));
  auto report = validate(s);
  if (!report.empty()) {
    throw Error(ErrorCode::InvalidSection, source + ": " + report.front().message);
  }
  return s;
}

void write_grid(const Section& section, const std::filesystem::path& path) {
  const auto bytes = encode_grid(section);
  write_bytes(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

Section read_grid(const std::filesystem::path& path) {
  return decode_grid(read_bytes(path), path.string());
}

double ibm_to_double(std::uint32_t word) {
  const bool negative = (word >> 31) != 0;
  const int exponent = static_cast<int>((word >> 24) & 0x7f) - 64;
  const std::uint32_t fraction = word & 0x00ffffff;
  const double magnitude = std::ldexp(static_cast<double>(fraction), 4 * exponent - 24);
  return negative ? -magnitude : magnitude;
}

namespace {

constexpr std::size_t kTextHeader = 3200;
constexpr std::size_t kBinaryHeader = 400;
constexpr std::size_t kTraceHeader = 240;

double scaled_coordinate(const std::uint8_t* trace_header, std::size_t offset) {
  const double raw = get_be32s(trace_header + offset);
  const int scalar = get_be16s(trace_header + 70);
  if (scalar > 0) return raw * scalar;
  if (scalar < 0) return raw / -scalar;
  return raw;
}

}  // namespace

SegyImport import_segy_minimal(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string src = path.string();
  if (bytes.size() < kTextHeader + kBinaryHeader) {
    throw Error(ErrorCode::Truncated, src + ": shorter than the SEG-Y file headers");
  }
  const std::uint8_t* bin = bytes.data() + kTextHeader;
  const int interval_us = get_be16s(bin + 16);
  const int ns = get_be16s(bin + 20);
  const int format = get_be16s(bin + 24);
  const int extended = std::max<int>(0, get_be16s(bin + 304));
  if (format != 1 && format != 5) {
    throw Error(ErrorCode::UnsupportedFormat,
                src + ": unsupported sample format code " + std::to_string(format) +
                    " (only 1 = IBM float and 5 = IEEE float)");
  }
  if (ns <= 0) throw Error(ErrorCode::InvalidSection, src + ": samples per trace must be > 0");

  const std::size_t first = kTextHeader + kBinaryHeader + kTextHeader * static_cast<std::size_t>(extended);
  const std::size_t trace_bytes = kTraceHeader + 4 * static_cast<std::size_t>(ns);
  if (bytes.size() < first + trace_bytes) {
    throw Error(ErrorCode::Truncated, src + ": no complete trace after the headers");
  }
  const std::size_t payload = bytes.size() - first;
  if (payload % trace_bytes != 0) {
    std::ostringstream os;
    os << src << ": truncated trace " << payload / trace_bytes << " (" << payload % trace_bytes
       << " of " << trace_bytes << " bytes)";
    throw Error(ErrorCode::Truncated, os.str());
  }
  const std::size_t nx = payload / trace_bytes;
  const auto nt = static_cast<std::size_t>(ns);

  SegyImport result;
  double dt = interval_us * 1e-6;
  const std::uint8_t* th0 = bytes.data() + first;
  if (!(dt > 0.0)) {
    dt = get_be16s(th0 + 116) * 1e-6;
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidSection, src + ": no sample interval");
  }
  double t0 = get_be16s(th0 + 108) * 1e-3;
  if (t0 < 0.0) {
    result.warnings.push_back("negative delay recording time ignored, t0 set to 0");
    t0 = 0.0;
  }

  std::vector<double> samples(nt * nx);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const std::uint8_t* th = th0 + ix * trace_bytes;
    const int trace_ns = get_be16s(th + 114);
    if (trace_ns != 0 && trace_ns != ns) {
      std::ostringstream os;
      os << src << ": trace " << ix << " has " << trace_ns << " samples, expected " << ns
         << " (varying trace lengths are not supported)";
      throw Error(ErrorCode::UnsupportedFormat, os.str());
    }
    const std::uint8_t* data = th + kTraceHeader;
    for (std::size_t it = 0; it < nt; ++it) {
      const std::uint32_t word = get_be32(data + 4 * it);
      const double v = format == 1 ? ibm_to_double(word)
                                   : static_cast<double>(std::bit_cast<float>(word));
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << src << ": non-finite sample at (it=" << it << ", ix=" << ix << ")";
        throw Error(ErrorCode::NonFinite, os.str());
      }
      samples[ix * nt + it] = v;
    }
  }

  double dx = 0.0;
  if (nx >= 2) {
    const std::uint8_t* th1 = th0 + trace_bytes;
    for (std::size_t offset : {std::size_t{180}, std::size_t{80}}) {  // CDP X, group X
      dx = std::abs(scaled_coordinate(th1, offset) - scaled_coordinate(th0, offset));
      if (dx > 0.0) break;
    }
  }
  if (!(dx > 0.0)) {
    result.warnings.push_back("no trace spacing in trace headers, dx set to 1.0 m");
    dx = 1.0;
  }
  result.section = Section(nt, nx, dt, dx, t0, std::move(samples));
  require_valid(result.section, "import_segy");
  return result;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorCode::Internal, "format_number failed");
  return std::string(buf, end);
}

std::string sweep_csv(const sweep::SweepResult& result) {
  std::string out = "velocity_mps,b0,b1,active_pixels\n";
  for (const auto& e : result.entries) {
    out += format_number(e.v) + "," + std::to_string(e.b0) + "," + std::to_string(e.b1) + "," +
           std::to_string(e.active_pixels) + "\n";
  }
  return out;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string sweep_svg(const sweep::SweepResult& result) {
  if (result.entries.empty()) throw Error(ErrorCode::InvalidArgument, "sweep_svg: empty result");
  constexpr double width = 640, height = 400;
  constexpr double left = 70, right = 20, top = 30, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  const double v_lo = result.entries.front().v;
  const double v_hi = result.entries.back().v;
  std::size_t b_hi = 1;
  for (const auto& e : result.entries) b_hi = std::max(b_hi, e.b1);
  auto px = [&](double v) {
    return left + (v_hi > v_lo ? (v - v_lo) / (v_hi - v_lo) : 0.5) * plot_w;
  };
  auto py = [&](double b) { return top + plot_h - b / static_cast<double>(b_hi) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  // Axes.
  os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + plot_h << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << top + plot_h + 18 << "\" font-size=\"12\" "
     << "text-anchor=\"middle\">" << format_number(v_lo) << "</text>\n";
  os << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18 << "\" font-size=\"12\" "
     << "text-anchor=\"middle\">" << format_number(v_hi) << "</text>\n";
  os << "<text x=\"" << left - 8 << "\" y=\"" << top + plot_h + 4 << "\" font-size=\"12\" "
     << "text-anchor=\"end\">0</text>\n";
  os << "<text x=\"" << left - 8 << "\" y=\"" << top + 4 << "\" font-size=\"12\" "
     << "text-anchor=\"end\">" << b_hi << "</text>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" font-size=\"14\" "
     << "text-anchor=\"middle\">Migration velocity (m/s)</text>\n";
  os << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" font-size=\"14\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">Betti number B1</text>\n";

  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& e = result.entries[i];
    os << (i ? " " : "") << fixed(px(e.v)) << "," << fixed(py(static_cast<double>(e.b1)));
  }
  os << "\"/>\n";

  for (const auto& e : result.entries) {
    if (e.v != result.argmin_v) continue;
    os << "<circle cx=\"" << fixed(px(e.v)) << "\" cy=\"" << fixed(py(static_cast<double>(e.b1)))
       << "\" r=\"5\" fill=\"crimson\"/>\n";
    os << "<text x=\"" << fixed(px(e.v)) << "\" y=\"" << fixed(py(static_cast<double>(e.b1)) - 10)
       << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"crimson\">argmin "
       << format_number(e.v) << " m/s</text>\n";
    break;
  }
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, text.data(), text.size());
}

void emit_csv(const sweep::SweepResult& result, const std::filesystem::path& path) {
  write_text(path, sweep_csv(result));
}

void emit_curve_svg(const sweep::SweepResult& result, const std::filesystem::path& path) {
  write_text(path, sweep_svg(result));
}

std::string section_csv(const Section& section) {
  std::string out = "time_s";
  for (std::size_t ix = 0; ix < section.nx(); ++ix) {
    out += ",x_" + format_number(static_cast<double>(ix) * section.dx());
  }
  out += "\n";
  for (std::size_t it = 0; it < section.nt(); ++it) {
    out += format_number(section.t0() + static_cast<double>(it) * section.dt());
    for (std::size_t ix = 0; ix < section.nx(); ++ix) out += "," + format_number(section.at(it, ix));
    out += "\n";
  }
  return out;
}

}  // namespace mixnorm::io
