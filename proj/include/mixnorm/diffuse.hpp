/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Diffusion-semigroup denoising on a patch graph.
//
// Graph nodes are pixels (stride-subsampled above max_points); each node
// carries the zero-padded patch around it. Gaussian affinities between
// patches are sparsified to k nearest neighbours (dense below
// kDenseNodeLimit nodes), balanced to a symmetric doubly stochastic kernel,
// then row-normalised into the Markov operator M. Powers M^t form the
// diffusion semigroup; the denoiser keeps the top r eigenfunctions of M and
// damps each by eigenvalue^t.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mixnorm/grid.hpp"

namespace mixnorm::diffuse {

struct DiffusionParams {
  std::size_t patch = 5;          // odd side length, >= 3
  double epsilon = 1.0;           // bandwidth / median nonzero squared patch distance
  std::size_t t = 2;              // diffusion time
  std::size_t r = 32;             // retained eigenfunctions (clamped to node count)
  std::size_t max_points = 4096;  // node cap
  std::size_t knn = 32;
};

inline constexpr std::size_t kDenseNodeLimit = 512;

struct Node {
  std::size_t it = 0;
  std::size_t ix = 0;
};

using PatchMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct DiffusionOperator {
  std::vector<Node> nodes;
  std::size_t patch = 0;
  PatchMatrix patches;  // one row per node
  double epsilon_hat = 0.0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> markov;
  /// Row sums of the balanced kernel before row normalisation (~1).
  Eigen::VectorXd degree;
  /// Leading eigenvalues, non-increasing; eigenvalues(0) == 1.
  Eigen::VectorXd eigenvalues;
  /// Right eigenfunctions of `markov` (columns); column 0 is constant.
  Eigen::MatrixXd eigenfunctions;
  /// Orthonormal eigenvectors of D^-1/2 K D^-1/2 matching `eigenfunctions`.
  Eigen::MatrixXd symmetric_eigenvectors;

  std::size_t size() const { return nodes.size(); }
};

/// Throws Error(InvalidArgument) for bad parameters or a section smaller than
/// the patch, and Error(Degenerate) when every patch is identical.
DiffusionOperator build_operator(const Section& section, const DiffusionParams& params);

/// Node selection used by build_operator: all pixels when nt*nx <= max_points,
/// otherwise every s-th pixel on both axes with the smallest s that fits.
std::vector<Node> select_nodes(std::size_t nt, std::size_t nx, std::size_t max_points);

/// Zero-padded patch around (it, ix), row-major over (time, trace) offsets.
void extract_patch(const Section& section, std::size_t it, std::size_t ix, std::size_t patch,
                   double* out);

/// Damped spectral reconstruction of per-node values:
/// D^-1/2 sum_k lambda_k^t <phi_k, D^1/2 f> phi_k.
Eigen::VectorXd reconstruct(const DiffusionOperator& op, const Eigen::VectorXd& node_values,
                            std::size_t t);

/// Builds the operator, reconstructs the node amplitudes and fills every
/// non-node pixel with the reconstructed value of the node whose patch is
/// nearest to its own.
Section diffuse_denoise(const Section& section, const DiffusionParams& params);
Section diffuse_denoise(const Section& section, const DiffusionOperator& op, std::size_t t);

/// max |M^s M^t - M^(s+t)| computed densely; node count <= kDenseNodeLimit.
double semigroup_check(const DiffusionOperator& op, std::size_t s, std::size_t t);

/// Dense M^k by repeated right-multiplication (M^0 = I).
Eigen::MatrixXd markov_power(const DiffusionOperator& op, std::size_t k);

/// Top-r eigenpairs of a symmetric sparse matrix whose largest eigenvalue
/// is 1 with the known unit eigenvector `top`. Restarted block Krylov with
/// full reorthogonalisation and Rayleigh-Ritz extraction, deterministic
/// start block. Eigenvalues come back non-increasing.
void symmetric_top_eigenpairs(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a,
                              const Eigen::VectorXd& top, std::size_t r,
                              Eigen::VectorXd& values, Eigen::MatrixXd& vectors);

}  // namespace mixnorm::diffuse
