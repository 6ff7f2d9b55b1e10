/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/topo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mixnorm/error.hpp"

namespace mixnorm::topo {

std::size_t BinaryImage::active_count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

BinaryImage binarize(const Section& section, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    std::ostringstream os;
    os << "binarize: tau must lie in (0, 1), got " << tau;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  require_valid(section, "binarize");
  const double peak = max_abs(section);
  if (peak == 0.0) {
    throw Error(ErrorCode::Degenerate, "binarize: all-zero section has no threshold");
  }
  BinaryImage img(section.nt(), section.nx());
  img.threshold_used = tau * peak;
  for (std::size_t ix = 0; ix < section.nx(); ++ix) {
    for (std::size_t it = 0; it < section.nt(); ++it) {
      img.set(it, ix, std::abs(section.at(it, ix)) >= img.threshold_used);
    }
  }
  return img;
}

namespace {

// Pixel lookup with everything outside the image inactive.
struct Padded {
  const BinaryImage& img;
  bool operator()(std::ptrdiff_t r, std::ptrdiff_t c) const {
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(img.rows) ||
        c >= static_cast<std::ptrdiff_t>(img.cols)) {
      return false;
    }
    return img.get(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  }
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Returns true when two distinct sets were merged.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

std::size_t count_components(const BinaryImage& img) {
  DisjointSets sets(img.rows * img.cols);
  std::size_t components = img.active_count();
  for (std::size_t r = 0; r < img.rows; ++r) {
    for (std::size_t c = 0; c < img.cols; ++c) {
      if (!img.get(r, c)) continue;
      const std::size_t here = r * img.cols + c;
      // Forward half of the 8-neighbourhood; the rest is covered by symmetry.
      auto link = [&](std::size_t rr, std::size_t cc) {
        if (img.get(rr, cc) && sets.unite(here, rr * img.cols + cc)) --components;
      };
      if (c + 1 < img.cols) link(r, c + 1);
      if (r + 1 < img.rows) {
        link(r + 1, c);
        if (c + 1 < img.cols) link(r + 1, c + 1);
        if (c > 0) link(r + 1, c - 1);
      }
    }
  }
  return components;
}

// Bounded 4-connected components of the background. By planar duality these
// are exactly the one-dimensional holes of the complex.
std::size_t count_holes(const BinaryImage& img) {
  const std::size_t pr = img.rows + 2;
  const std::size_t pc = img.cols + 2;
  Padded px{img};
  DisjointSets sets(pr * pc);
  std::size_t background = 0;
  auto inactive = [&](std::size_t r, std::size_t c) {
    return !px(static_cast<std::ptrdiff_t>(r) - 1, static_cast<std::ptrdiff_t>(c) - 1);
  };
  for (std::size_t r = 0; r < pr; ++r) {
    for (std::size_t c = 0; c < pc; ++c) {
      if (!inactive(r, c)) continue;
      ++background;
      if (c + 1 < pc && inactive(r, c + 1) && sets.unite(r * pc + c, r * pc + c + 1)) --background;
      if (r + 1 < pr && inactive(r + 1, c) && sets.unite(r * pc + c, (r + 1) * pc + c)) {
        --background;
      }
    }
  }
  // The padding ring is one unbounded component.
  return background - 1;
}

}  // namespace

CubicalCounts cubical_counts(const BinaryImage& img) {
  Padded px{img};
  CubicalCounts n;
  n.f = img.active_count();
  const auto rows = static_cast<std::ptrdiff_t>(img.rows);
  const auto cols = static_cast<std::ptrdiff_t>(img.cols);
  // Vertex (r, c) is the corner shared by pixels (r-1..r, c-1..c).
  for (std::ptrdiff_t r = 0; r <= rows; ++r) {
    for (std::ptrdiff_t c = 0; c <= cols; ++c) {
      if (px(r - 1, c - 1) || px(r - 1, c) || px(r, c - 1) || px(r, c)) ++n.v;
    }
  }
  // Edge between vertices (r, c) and (r, c+1) borders pixels (r-1, c), (r, c).
  for (std::ptrdiff_t r = 0; r <= rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      if (px(r - 1, c) || px(r, c)) ++n.e;
    }
  }
  // Edge between vertices (r, c) and (r+1, c) borders pixels (r, c-1), (r, c).
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c <= cols; ++c) {
      if (px(r, c - 1) || px(r, c)) ++n.e;
    }
  }
  return n;
}

BettiPair betti(const BinaryImage& img) {
  if (img.bits.size() != img.rows * img.cols) {
    throw Error(ErrorCode::InvalidArgument, "betti: bit count does not match rows*cols");
  }
  const CubicalCounts counts = cubical_counts(img);
  const std::size_t b0 = count_components(img);
  const long long b1 = static_cast<long long>(b0) - counts.euler();
  const std::size_t holes = count_holes(img);
  if (b1 < 0 || static_cast<std::size_t>(b1) != holes) {
    std::ostringstream os;
    os << "betti: Euler identity violated (b0=" << b0 << ", chi=" << counts.euler()
       << ", holes=" << holes << ")";
    throw Error(ErrorCode::Internal, os.str());
  }
  return BettiPair{b0, static_cast<std::size_t>(b1)};
}

namespace {

// Rank over GF(2) of the rows given as sparse column lists.
std::size_t gf2_rank(const std::vector<std::vector<std::size_t>>& rows, std::size_t n_cols) {
  const std::size_t words = (n_cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> pivots(n_cols);
  std::size_t rank = 0;
  std::vector<std::uint64_t> row(words);
  for (const auto& entries : rows) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t col : entries) row[col / 64] ^= std::uint64_t{1} << (col % 64);
    for (;;) {
      std::size_t lead = n_cols;
      for (std::size_t w = 0; w < words; ++w) {
        if (row[w] != 0) {
          lead = w * 64 + static_cast<std::size_t>(__builtin_ctzll(row[w]));
          break;
        }
      }
      if (lead == n_cols) break;
      if (pivots[lead].empty()) {
        pivots[lead] = row;
        ++rank;
        break;
      }
      for (std::size_t w = 0; w < words; ++w) row[w] ^= pivots[lead][w];
    }
  }
  return rank;
}

}  // namespace

BettiPair betti_oracle(const BinaryImage& img) {
  if (img.rows * img.cols > kOracleMaxPixels) {
    std::ostringstream os;
    os << "betti_oracle: " << img.rows << "x" << img.cols << " exceeds " << kOracleMaxPixels
       << " pixels";
    throw Error(ErrorCode::SizeLimit, os.str());
  }
  const std::size_t vr = img.rows + 1;
  const std::size_t vc = img.cols + 1;
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  // Enumerate the cells of the union of closed squares.
  std::vector<std::size_t> vertex_id(vr * vc, kAbsent);
  std::vector<std::size_t> hedge_id(vr * img.cols, kAbsent);  // (r, c)-(r, c+1)
  std::vector<std::size_t> vedge_id(img.rows * vc, kAbsent);  // (r, c)-(r+1, c)
  std::size_t n_vertices = 0;
  std::size_t n_edges = 0;
  std::vector<std::vector<std::size_t>> edge_boundary;
  std::vector<std::vector<std::size_t>> face_boundary;

  auto vertex = [&](std::size_t r, std::size_t c) {
    auto& id = vertex_id[r * vc + c];
    if (id == kAbsent) id = n_vertices++;
    return id;
  };
  auto edge = [&](std::vector<std::size_t>& table, std::size_t key, std::size_t a,
                  std::size_t b) {
    auto& id = table[key];
    if (id == kAbsent) {
      id = n_edges++;
      edge_boundary.push_back({a, b});
    }
    return id;
  };

  for (std::size_t r = 0; r < img.rows; ++r) {
    for (std::size_t c = 0; c < img.cols; ++c) {
      if (!img.get(r, c)) continue;
      const std::size_t v00 = vertex(r, c);
      const std::size_t v01 = vertex(r, c + 1);
      const std::size_t v10 = vertex(r + 1, c);
      const std::size_t v11 = vertex(r + 1, c + 1);
      const std::size_t top = edge(hedge_id, r * img.cols + c, v00, v01);
      const std::size_t bottom = edge(hedge_id, (r + 1) * img.cols + c, v10, v11);
      const std::size_t left = edge(vedge_id, r * vc + c, v00, v10);
      const std::size_t right = edge(vedge_id, r * vc + c + 1, v01, v11);
      face_boundary.push_back({top, bottom, left, right});
    }
  }

  const std::size_t rank1 = gf2_rank(edge_boundary, n_vertices);
  const std::size_t rank2 = gf2_rank(face_boundary, n_edges);
  return BettiPair{n_vertices - rank1, n_edges - rank1 - rank2};
}

}  // namespace mixnorm::topo
