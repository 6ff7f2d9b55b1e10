/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "mixnorm/error.hpp"
#include "mixnorm/grid.hpp"
#include "mixnorm/migrate.hpp"
#include "mixnorm/synth.hpp"
#include "oracles.hpp"

using namespace mixnorm;

TEST_SUITE("grid") {
  TEST_CASE("zero section validates cleanly") {
    Section s(4, 4, 0.004, 10.0);
    CHECK(validate(s).empty());
    CHECK(max_abs(s) == 0.0);
  }

  TEST_CASE("a single NaN is reported at its index") {
    Section s(4, 4, 0.004, 10.0);
    s.at(2, 3) = std::numeric_limits<double>::quiet_NaN();
    const auto report = validate(s);
    REQUIRE(report.size() == 1);
    CHECK(report[0].kind == Violation::Kind::NonFinite);
    CHECK(report[0].it == 2);
    CHECK(report[0].ix == 3);
  }

  TEST_CASE("each broken invariant is reported") {
    CHECK(validate(Section(4, 4, 0.0, 10.0)).at(0).kind == Violation::Kind::BadDt);
    CHECK(validate(Section(4, 4, 0.004, -1.0)).at(0).kind == Violation::Kind::BadDx);
    CHECK(validate(Section(4, 4, 0.004, 10.0, -0.1)).at(0).kind == Violation::Kind::BadT0);
    CHECK(validate(Section(0, 4, 0.004, 10.0)).at(0).kind == Violation::Kind::EmptyGrid);
    CHECK(validate(Section(2, 2, 0.004, 10.0, 0.0, {1.0, 2.0, 3.0})).at(0).kind ==
          Violation::Kind::SizeMismatch);
    CHECK_THROWS_AS(require_valid(Section(4, 4, 0.0, 10.0), "test"), Error);
  }

  TEST_CASE("max_abs picks the largest magnitude and is homogeneous") {
    Section s(3, 1, 0.004, 10.0, 0.0, {1.0, -3.0, 2.0});
    CHECK(max_abs(s) == 3.0);
    CHECK(max_abs(scaled(s, 2.5)) == doctest::Approx(7.5));
    CHECK(max_abs(scaled(s, -2.0)) == doctest::Approx(6.0));
  }

  TEST_CASE("velocity must be positive and finite") {
    CHECK_THROWS_AS(Velocity(0.0), Error);
    CHECK_THROWS_AS(Velocity(-5.0), Error);
    CHECK_THROWS_AS(Velocity(std::numeric_limits<double>::infinity()), Error);
    CHECK(Velocity(1500.0).squared() == 2250000.0);
  }

  TEST_CASE("crop shifts t0 and keeps samples") {
    Section s(10, 5, 0.004, 10.0);
    for (std::size_t ix = 0; ix < 5; ++ix)
      for (std::size_t it = 0; it < 10; ++it) s.at(it, ix) = static_cast<double>(100 * ix + it);
    const Section c = crop(s, 3, 7, 1, 4);
    CHECK(c.nt() == 4);
    CHECK(c.nx() == 3);
    CHECK(c.t0() == doctest::Approx(0.012));
    CHECK(c.at(0, 0) == 103.0);
    CHECK(c.at(3, 2) == 306.0);
  }
}

TEST_SUITE("synth") {
  TEST_CASE("ricker value, roots and symmetry") {
    const double f = 25.0;
    CHECK(synth::ricker_value(f, 0.0) == 1.0);
    const double root = 1.0 / (std::numbers::pi * f * std::sqrt(2.0));
    CHECK(std::abs(synth::ricker_value(f, root)) < 1e-15);
    CHECK(std::abs(synth::ricker_value(f, -root)) < 1e-15);
    const Trace w = synth::ricker(f, 0.004, 20);
    REQUIRE(w.samples.size() == 41);
    CHECK(w.samples[20] == 1.0);
    for (std::size_t k = 0; k < 20; ++k) CHECK(w.samples[k] == w.samples[40 - k]);
    CHECK_THROWS_AS(synth::ricker(125.0, 0.004, 10), Error);
  }

  TEST_CASE("apex and 45 degree arrival times") {
    synth::DiffractorModel m;
    m.diffractors = {{1000.0, 600.0, 1.0}};
    const synth::GridSpec g{512, 201, 0.004, 10.0};
    const Section s = synth::diffraction_response(m, g);
    const auto column_peak = [&](std::size_t ix) {
      return oracle::peak_in(s, 0, s.nt(), ix, ix + 1).it;
    };
    // Apex trace x = 1000 m, t = 2 z / v = 0.8 s = sample 200.
    CHECK(column_peak(100) == 200);
    // |x - xd| = z = 600 m: t = 2 sqrt(2) z / v = 1.1314 s = sample 282.8.
    CHECK(std::abs(static_cast<double>(column_peak(160)) - 2.0 * std::sqrt(2.0) * 0.4 / 0.004) <= 0.5);
    CHECK(std::abs(static_cast<double>(column_peak(40)) - 2.0 * std::sqrt(2.0) * 0.4 / 0.004) <= 0.5);
  }

  TEST_CASE("three-diffractor demo is valid with apexes at 2 z / 1500") {
    const auto [model, s] = synth::three_diffractor_demo();
    CHECK(validate(s).empty());
    CHECK(s.nt() == 512);
    CHECK(s.nx() == 256);
    REQUIRE(model.diffractors.size() == 3);
    // The flank of the first hyperbola crosses the middle apex, so each
    // apex is checked on its own single-diffractor response.
    for (const auto& d : model.diffractors) {
      synth::DiffractorModel one = model;
      one.diffractors = {d};
      const Section alone = synth::diffraction_response(one, synth::demo_grid());
      const auto ix = static_cast<std::size_t>(std::lround(d.x / s.dx()));
      const double apex = 2.0 * d.z / 1500.0;
      const auto pk = oracle::peak_in(alone, 0, s.nt(), ix, ix + 1);
      CHECK(std::abs(static_cast<double>(pk.it) * s.dt() - apex) <= s.dt());
      CHECK(alone.at(static_cast<std::size_t>(std::lround(apex / s.dt())), ix) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("linearity over diffractors") {
    synth::DiffractorModel a, b, ab;
    a.diffractors = {{300.0, 400.0, 1.0}};
    b.diffractors = {{900.0, 700.0, -0.5}};
    ab.diffractors = {a.diffractors[0], b.diffractors[0]};
    const synth::GridSpec g{256, 128, 0.004, 10.0};
    const Section sa = synth::diffraction_response(a, g);
    const Section sb = synth::diffraction_response(b, g);
    const Section sab = synth::diffraction_response(ab, g);
    for (std::size_t i = 0; i < sab.samples().size(); ++i) {
      CHECK(sab.samples()[i] == doctest::Approx(sa.samples()[i] + sb.samples()[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("lateral shift equivariance") {
    const std::size_t k = 7;
    synth::DiffractorModel a, b;
    a.diffractors = {{500.0, 500.0, 1.0}};
    b.diffractors = {{500.0 + static_cast<double>(k) * 10.0, 500.0, 1.0}};
    const synth::GridSpec g{256, 128, 0.004, 10.0};
    const Section sa = synth::diffraction_response(a, g);
    const Section sb = synth::diffraction_response(b, g);
    for (std::size_t ix = 0; ix + k < g.nx; ++ix)
      for (std::size_t it = 0; it < g.nt; ++it) CHECK(sb.at(it, ix + k) == doctest::Approx(sa.at(it, ix)).epsilon(1e-12));
  }

  TEST_CASE("identical models give bit-identical sections") {
    CHECK(synth::three_diffractor_demo().second == synth::three_diffractor_demo().second);
  }

  TEST_CASE("geometric spreading keeps the apex and decays the flanks") {
    auto m = synth::three_diffractor_model();
    m.geometric_spreading = true;
    const Section s = synth::diffraction_response(m, synth::demo_grid());
    CHECK(s.at(static_cast<std::size_t>(std::lround(0.6 / 0.004)), 70) == doctest::Approx(1.0));
    const auto flank = oracle::peak_in(s, 0, s.nt(), 20, 21);
    CHECK(flank.value < 0.9);
  }

  TEST_CASE("invalid models are rejected") {
    synth::DiffractorModel m;
    m.diffractors = {{100.0, -5.0, 1.0}};
    CHECK_THROWS_AS(synth::diffraction_response(m, synth::demo_grid()), Error);
    m.diffractors = {{100.0, 100.0, 1.0}};
    m.v_true = 0.0;
    CHECK_THROWS_AS(synth::diffraction_response(m, synth::demo_grid()), Error);
  }

  TEST_CASE("migrated demo concentrates energy near the apexes (regression)") {
    const auto [model, s] = synth::three_diffractor_demo();
    const Section m = migrate::migrate_constant_v(s, migrate::MigrationParams{1500.0});
    double total = 0.0, near = 0.0;
    for (double v : m.samples()) total += v * v;
    for (const auto& d : model.diffractors) {
      const auto ix = static_cast<std::size_t>(std::lround(d.x / s.dx()));
      const auto it = static_cast<std::size_t>(std::lround(2.0 * d.z / 1500.0 / s.dt()));
      for (std::size_t jx = ix - 5; jx <= ix + 5; ++jx)
        for (std::size_t jt = it - 5; jt <= it + 5; ++jt) near += m.at(jt, jx) * m.at(jt, jx);
    }
    const double fraction = near / total;
    MESSAGE("energy fraction in 11x11 apex windows: " << fraction);
    CHECK(fraction >= 0.60);
  }
}
