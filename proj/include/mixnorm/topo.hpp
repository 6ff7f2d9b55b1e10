/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Betti numbers of binary images viewed as cubical complexes: every active
// pixel is a closed unit square, so pixels touching only at a corner belong
// to the same component (8-connectivity), while holes are 4-connected
// regions of inactive pixels. B0 counts components and B1 counts holes; B1 is
// the quantity minimised over a migration-velocity sweep.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mixnorm/grid.hpp"

namespace mixnorm::topo {

struct BinaryImage {
  std::size_t rows = 0;  // time samples
  std::size_t cols = 0;  // traces
  std::vector<std::uint8_t> bits;  // row-major, 1 = active
  double threshold_used = 0.0;

  BinaryImage() = default;
  BinaryImage(std::size_t r, std::size_t c) : rows(r), cols(c), bits(r * c, 0) {}

  bool get(std::size_t r, std::size_t c) const { return bits[r * cols + c] != 0; }
  void set(std::size_t r, std::size_t c, bool on) { bits[r * cols + c] = on ? 1 : 0; }
  std::size_t active_count() const;
};

struct CubicalCounts {
  std::size_t v = 0;
  std::size_t e = 0;
  std::size_t f = 0;
  long long euler() const {
    return static_cast<long long>(v) - static_cast<long long>(e) + static_cast<long long>(f);
  }
};

struct BettiPair {
  std::size_t b0 = 0;
  std::size_t b1 = 0;
  friend bool operator==(const BettiPair&, const BettiPair&) = default;
};

/// Active iff |amplitude| >= tau * max_abs(section). Rows are time samples,
/// columns are traces. tau must lie in (0, 1); an all-zero section is
/// Error(Degenerate).
BinaryImage binarize(const Section& section, double tau);

CubicalCounts cubical_counts(const BinaryImage& img);

/// B0 by union-find over 8-neighbours, B1 = B0 - chi. The result is checked
/// in-line against an independent hole count (bounded 4-connected background
/// components); a mismatch throws Error(Internal).
BettiPair betti(const BinaryImage& img);

/// Exact ranks of the GF(2) boundary matrices. Limited to rows*cols <= 4096.
BettiPair betti_oracle(const BinaryImage& img);

inline constexpr std::size_t kOracleMaxPixels = 4096;

}  // namespace mixnorm::topo
