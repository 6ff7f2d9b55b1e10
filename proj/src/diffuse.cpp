/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "mixnorm/diffuse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

#include "mixnorm/error.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm::diffuse {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

std::vector<Node> select_nodes(std::size_t nt, std::size_t nx, std::size_t max_points) {
  if (max_points == 0) throw Error(ErrorCode::InvalidArgument, "max_points must be >= 1");
  std::size_t stride = 1;
  auto count = [&](std::size_t s) { return ((nt + s - 1) / s) * ((nx + s - 1) / s); };
  while (count(stride) > max_points) ++stride;
  std::vector<Node> nodes;
  nodes.reserve(count(stride));
  for (std::size_t ix = 0; ix < nx; ix += stride) {
    for (std::size_t it = 0; it < nt; it += stride) nodes.push_back(Node{it, ix});
  }
  return nodes;
}

void extract_patch(const Section& s, std::size_t it, std::size_t ix, std::size_t patch,
                   double* out) {
  const auto h = static_cast<std::ptrdiff_t>(patch / 2);
  const auto nt = static_cast<std::ptrdiff_t>(s.nt());
  const auto nx = static_cast<std::ptrdiff_t>(s.nx());
  std::size_t k = 0;
  for (std::ptrdiff_t di = -h; di <= h; ++di) {
    for (std::ptrdiff_t dj = -h; dj <= h; ++dj) {
      const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(it) + di;
      const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(ix) + dj;
      out[k++] = (r < 0 || c < 0 || r >= nt || c >= nx)
                     ? 0.0
                     : s.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
  }
}

namespace {

void check_params(const Section& section, const DiffusionParams& p) {
  std::ostringstream os;
  if (p.patch < 3 || p.patch % 2 == 0) {
    os << "patch must be odd and >= 3, got " << p.patch;
  } else if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) {
    os << "epsilon must be > 0, got " << p.epsilon;
  } else if (p.r < 1) {
    os << "r must be >= 1";
  } else if (p.max_points < 2) {
    os << "max_points must be >= 2";
  } else if (p.knn < 1) {
    os << "knn must be >= 1";
  } else if (section.nt() < p.patch || section.nx() < p.patch) {
    os << "section " << section.nt() << "x" << section.nx() << " is smaller than the "
       << p.patch << "x" << p.patch << " patch";
  }
  if (!os.str().empty()) throw Error(ErrorCode::InvalidArgument, "diffusion: " + os.str());
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

// Index into the packed strict upper triangle of an n x n matrix.
std::size_t packed_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Symmetric Sinkhorn scaling: finds s > 0 with diag(s) W diag(s) doubly
// stochastic (Knight's fixed point s <- sqrt(s / W s)).
Eigen::VectorXd balance(const SpMat& w) {
  Eigen::VectorXd s = (w * Eigen::VectorXd::Ones(w.rows())).cwiseSqrt().cwiseInverse();
  for (int iter = 0; iter < 20000; ++iter) {
    const Eigen::VectorXd ws = w * s;
    const double err = (s.cwiseProduct(ws).array() - 1.0).abs().maxCoeff();
    if (err < 1e-13) break;
    s = (s.cwiseQuotient(ws)).cwiseSqrt();
  }
  return s;
}

// Deterministic uniform(-1, 1) fill; the 53-bit mapping keeps it identical
// across standard libraries.
void fill_random(Eigen::MatrixXd& m, std::mt19937_64& gen) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
    }
  }
}

// Tight clusters near 1 (nearly disconnected patches) converge slowly; the
// Ritz subspace is usable long before every residual is tiny.
constexpr int kMaxRestarts = 60;
constexpr double kResidualTol = 1e-9;

}  // namespace

void symmetric_top_eigenpairs(const SpMat& a, const Eigen::VectorXd& top, std::size_t r,
                              Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const auto n = static_cast<std::size_t>(a.rows());
  r = std::min(r, n);
  values.resize(static_cast<Eigen::Index>(r));
  vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  values(0) = 1.0;
  vectors.col(0) = top.normalized();
  if (r == 1) return;

  const std::size_t want = r - 1;         // pairs orthogonal to `top`
  const std::size_t space = n - 1;        // dimension of that complement
  const std::size_t block = std::min(space, want + 16);
  const std::size_t basis_cap = std::min(space, std::max(6 * block, block + 96));
  const Eigen::VectorXd u = vectors.col(0);

  std::mt19937_64 gen(0x5eed0fd1ff05eULL);
  Eigen::MatrixXd start(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(block));
  fill_random(start, gen);

  Eigen::MatrixXd q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis_cap));
  Eigen::VectorXd ritz_values;
  Eigen::MatrixXd ritz_vectors;

  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    // Grow an orthonormal block Krylov basis, orthogonal to u.
    std::size_t dim = 0;
    Eigen::MatrixXd candidates = start;
    while (dim < basis_cap) {
      const std::size_t first_new = dim;
      for (Eigen::Index c = 0; c < candidates.cols() && dim < basis_cap; ++c) {
        Eigen::VectorXd v = candidates.col(c);
        const double original = v.norm();
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
          v -= u * u.dot(v);
          if (dim > 0) {
            auto basis = q.leftCols(static_cast<Eigen::Index>(dim));
            v -= basis * (basis.transpose() * v);
          }
        }
        const double norm = v.norm();
        if (norm <= 1e-10 * original) continue;
        q.col(static_cast<Eigen::Index>(dim++)) = v / norm;
      }
      if (dim == first_new) {
        // Invariant subspace reached; continue from fresh directions.
        candidates.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(block));
        fill_random(candidates, gen);
        continue;
      }
      candidates = a * q.middleCols(static_cast<Eigen::Index>(first_new),
                                    static_cast<Eigen::Index>(dim - first_new));
    }

    auto basis = q.leftCols(static_cast<Eigen::Index>(dim));
    const Eigen::MatrixXd projected = basis.transpose() * (a * basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 *
                                                          (projected + projected.transpose()));
    // Ascending order; take the top `want` (and the top `block` for restart).
    const auto d = static_cast<Eigen::Index>(dim);
    ritz_values = solver.eigenvalues().tail(static_cast<Eigen::Index>(want)).reverse();
    ritz_vectors = basis * solver.eigenvectors()
                               .rightCols(static_cast<Eigen::Index>(want))
                               .rowwise()
                               .reverse();
    if (dim == space) break;  // complete basis, exact up to rounding

    const Eigen::MatrixXd residual =
        a * ritz_vectors - ritz_vectors * ritz_values.asDiagonal();
    double worst = 0.0;
    for (Eigen::Index c = 0; c < residual.cols(); ++c) {
      worst = std::max(worst, residual.col(c).norm());
    }
    if (worst < kResidualTol) break;
    start = basis * solver.eigenvectors().rightCols(
                        std::min<Eigen::Index>(d, static_cast<Eigen::Index>(block)));
  }

  values.tail(static_cast<Eigen::Index>(want)) = ritz_values;
  vectors.rightCols(static_cast<Eigen::Index>(want)) = ritz_vectors;
}

DiffusionOperator build_operator(const Section& section, const DiffusionParams& params) {
  require_valid(section, "diffusion");
  check_params(section, params);

  DiffusionOperator op;
  op.patch = params.patch;
  op.nodes = select_nodes(section.nt(), section.nx(), params.max_points);
  const std::size_t n = op.nodes.size();
  const std::size_t dim = params.patch * params.patch;
  op.patches.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    extract_patch(section, op.nodes[i].it, op.nodes[i].ix, params.patch,
                  op.patches.row(static_cast<Eigen::Index>(i)).data());
  }

  // Packed pairwise squared distances (float storage bounds memory at
  // 4096 nodes to ~34 MB).
  std::vector<float> dist(n * (n - 1) / 2);
  parallel_for(n, [&](std::size_t i) {
    const double* pi = op.patches.row(static_cast<Eigen::Index>(i)).data();
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[packed_index(i, j, n)] = static_cast<float>(
          squared_distance(pi, op.patches.row(static_cast<Eigen::Index>(j)).data(), dim));
    }
  });

  std::vector<float> nonzero;
  nonzero.reserve(dist.size());
  for (float d : dist) {
    if (d > 0.0f) nonzero.push_back(d);
  }
  if (nonzero.empty()) {
    throw Error(ErrorCode::Degenerate, "diffusion: every patch is identical, bandwidth is zero");
  }
  const auto mid = nonzero.begin() + static_cast<std::ptrdiff_t>(nonzero.size() / 2);
  std::nth_element(nonzero.begin(), mid, nonzero.end());
  op.epsilon_hat = params.epsilon * static_cast<double>(*mid);
  std::vector<float>().swap(nonzero);

  // Edge list (i < j) of the symmetrised kNN graph, or every pair when dense.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (n <= kDenseNodeLimit || params.knn + 1 >= n) {
    edges.reserve(dist.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
  } else {
    const std::size_t k = params.knn;
    std::vector<std::vector<std::size_t>> nearest(n);
    parallel_for(n, [&](std::size_t i) {
      std::vector<std::pair<float, std::size_t>> cand;
      cand.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) cand.emplace_back(dist[packed_index(i, j, n)], j);
      }
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
      for (std::size_t m = 0; m < k; ++m) nearest[i].push_back(cand[m].second);
    });
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : nearest[i]) edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size() + n);
  for (std::size_t i = 0; i < n; ++i) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
  }
  for (const auto& [i, j] : edges) {
    const double w = std::exp(-static_cast<double>(dist[packed_index(i, j, n)]) / op.epsilon_hat);
    if (w == 0.0) continue;
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), w);
  }
  std::vector<float>().swap(dist);
  SpMat kernel(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  kernel.setFromTriplets(triplets.begin(), triplets.end());

  const Eigen::VectorXd s = balance(kernel);
  kernel = s.asDiagonal() * kernel * s.asDiagonal();
  op.degree = kernel * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));

  const Eigen::VectorXd inv_degree = op.degree.cwiseInverse();
  const Eigen::VectorXd inv_sqrt_degree = op.degree.cwiseSqrt().cwiseInverse();
  op.markov = inv_degree.asDiagonal() * kernel;
  const SpMat symmetric = inv_sqrt_degree.asDiagonal() * kernel * inv_sqrt_degree.asDiagonal();

  symmetric_top_eigenpairs(symmetric, op.degree.cwiseSqrt(), params.r, op.eigenvalues,
                           op.symmetric_eigenvectors);
  op.eigenfunctions = inv_sqrt_degree.asDiagonal() * op.symmetric_eigenvectors;
  // Column 0 is proportional to the all-ones vector; fix its sign.
  if (op.eigenfunctions.col(0).sum() < 0.0) {
    op.eigenfunctions.col(0) *= -1.0;
    op.symmetric_eigenvectors.col(0) *= -1.0;
  }
  return op;
}

Eigen::VectorXd reconstruct(const DiffusionOperator& op, const Eigen::VectorXd& f,
                            std::size_t t) {
  if (static_cast<std::size_t>(f.size()) != op.size()) {
    throw Error(ErrorCode::InvalidArgument, "reconstruct: value count does not match nodes");
  }
  const Eigen::VectorXd g = op.degree.cwiseSqrt().cwiseProduct(f);
  Eigen::VectorXd coeff = op.symmetric_eigenvectors.transpose() * g;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::pow(op.eigenvalues(k), static_cast<double>(t));
  }
  return op.degree.cwiseSqrt().cwiseInverse().cwiseProduct(op.symmetric_eigenvectors * coeff);
}

Section diffuse_denoise(const Section& section, const DiffusionOperator& op, std::size_t t) {
  require_valid(section, "diffuse_denoise");
  const std::size_t n = op.size();
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) f(static_cast<Eigen::Index>(i)) = section.at(op.nodes[i].it, op.nodes[i].ix);
  const Eigen::VectorXd denoised = reconstruct(op, f, t);

  constexpr std::size_t kNotNode = static_cast<std::size_t>(-1);
  std::vector<std::size_t> node_of(section.nt() * section.nx(), kNotNode);
  for (std::size_t i = 0; i < n; ++i) node_of[op.nodes[i].ix * section.nt() + op.nodes[i].it] = i;

  Section out = section.zeros_like();
  const std::size_t dim = op.patch * op.patch;
  parallel_for(section.nx(), [&](std::size_t ix) {
    std::vector<double> patch(dim);
    auto tr = out.trace(ix);
    for (std::size_t it = 0; it < section.nt(); ++it) {
      const std::size_t self = node_of[ix * section.nt() + it];
      if (self != kNotNode) {
        tr[it] = denoised(static_cast<Eigen::Index>(self));
        continue;
      }
      extract_patch(section, it, ix, op.patch, patch.data());
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        const double* pj = op.patches.row(static_cast<Eigen::Index>(j)).data();
        double acc = 0.0;
        for (std::size_t k = 0; k < dim && acc < best_d; ++k) {
          const double d = patch[k] - pj[k];
          acc += d * d;
        }
        if (acc < best_d) {
          best_d = acc;
          best = j;
        }
      }
      tr[it] = denoised(static_cast<Eigen::Index>(best));
    }
  });
  return out;
}

Section diffuse_denoise(const Section& section, const DiffusionParams& params) {
  // With zero-padded patches only the zero section has identical patches
  // everywhere; it is its own constant reconstruction.
  require_valid(section, "diffuse_denoise");
  check_params(section, params);
  if (max_abs(section) == 0.0) return section;
  return diffuse_denoise(section, build_operator(section, params), params.t);
}

Eigen::MatrixXd markov_power(const DiffusionOperator& op, std::size_t k) {
  const auto n = static_cast<Eigen::Index>(op.size());
  if (op.size() > kDenseNodeLimit) {
    std::ostringstream os;
    os << "dense Markov powers limited to " << kDenseNodeLimit << " nodes, operator has "
       << op.size();
    throw Error(ErrorCode::SizeLimit, os.str());
  }
  const Eigen::MatrixXd m = Eigen::MatrixXd(op.markov);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < k; ++i) p = (i == 0) ? m : Eigen::MatrixXd(p * m);
  return p;
}

double semigroup_check(const DiffusionOperator& op, std::size_t s, std::size_t t) {
  const Eigen::MatrixXd ms = markov_power(op, s);
  const Eigen::MatrixXd mt = markov_power(op, t);
  const Eigen::MatrixXd mst = markov_power(op, s + t);
  return (ms * mt - mst).cwiseAbs().maxCoeff();
}

}  // namespace mixnorm::diffuse
