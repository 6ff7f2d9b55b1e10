/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Constant-velocity zero-offset time migration in the frequency-wavenumber
// domain (Stolt mapping) and the semigroup panel sequence built on it.
//
// The Stolt map for time migration sends output frequency w_tau to input
// frequency w = sign(w_tau) * sqrt(w_tau^2 + (v kx / 2)^2). Composing two
// such maps at v1 and v2 gives the map at sqrt(v1^2 + v2^2): migration
// operators form a one-parameter semigroup indexed by v^2, A(v1^2) A(v2^2) =
// A(v1^2 + v2^2). The k-th power of A = A(v^2) is therefore a single
// migration at v * sqrt(k). This is the construction used for panel
// sequences; it is an interpretation of "semigroup migration", not a
// published derivation.

#include <cstddef>
#include <vector>

#include "mixnorm/grid.hpp"

namespace mixnorm::migrate {

enum class Interp { Linear, Sinc8 };

struct MigrationParams {
  double v = 1500.0;  // m/s
  std::size_t pad_t = 2;
  std::size_t pad_x = 2;
  Interp interp = Interp::Sinc8;
};

/// Migrated section on the input grid. Linear in the input and
/// deterministic. Throws Error(InvalidArgument) for bad parameters and
/// Error(SizeLimit) when the padded grid is too small for the interpolator.
Section migrate_constant_v(const Section& section, const MigrationParams& params);

struct PanelSequence {
  Velocity base_v{500.0};
  std::vector<Section> panels;  // panels[k] = A^k u
  std::size_t count() const noexcept { return panels.size(); }
};

/// v_eff(k) = base_v * sqrt(k).
double effective_velocity(Velocity base_v, std::size_t k);

/// panels[0] is the input; panels[k] = migrate_constant_v(u, v_eff(k)) with
/// the remaining fields of `params` (its v is ignored).
PanelSequence semigroup_panels(const Section& section, Velocity base_v, std::size_t n_panels,
                               const MigrationParams& params = {});

/// ||A(v2) A(v1) u - A(sqrt(v1^2 + v2^2)) u|| / ||A(sqrt(v1^2 + v2^2)) u||.
/// Velocities below 1 m/s are rejected; a zero reference is
/// Error(Degenerate).
double cascade_check(const Section& section, Velocity v1, Velocity v2,
                     const MigrationParams& params = {});

}  // namespace mixnorm::migrate
