/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include "mixnorm/error.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/sweep.hpp"
#include "mixnorm/synth.hpp"

using namespace mixnorm;
using namespace mixnorm::sweep;

namespace {

const Section& demo() {
  static const Section s = synth::three_diffractor_demo().second;
  return s;
}

const SweepResult& demo_sweep() {
  static const SweepResult r = velocity_sweep(demo(), SweepSpec{});
  return r;
}

const SweepEntry& entry_at(const SweepResult& r, double v) {
  for (const auto& e : r.entries)
    if (e.v == v) return e;
  throw std::runtime_error("velocity not in sweep");
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("velocity grid") {
    const auto g = velocity_grid(SweepSpec{});
    REQUIRE(g.size() == 26);
    CHECK(g.front() == 500.0);
    CHECK(g.back() == 3000.0);
    SweepSpec odd;
    odd.v_min = 1000.0;
    odd.v_max = 1250.0;
    odd.v_step = 100.0;
    CHECK(velocity_grid(odd) == std::vector<double>{1000.0, 1100.0, 1200.0});
    odd.v_step = 0.0;
    CHECK_THROWS_AS(velocity_grid(odd), Error);
  }

  TEST_CASE("single-velocity grid selects that velocity") {
    SweepSpec s;
    s.v_min = s.v_max = 1700.0;
    const auto r = velocity_sweep(demo(), s);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.argmin_v == 1700.0);
  }

  TEST_CASE("demo sweep recovers the model velocity") {
    const auto& r = demo_sweep();
    CHECK(std::abs(r.argmin_v - 1500.0) <= 100.0);
    CHECK(entry_at(r, 500.0).b1 > entry_at(r, r.argmin_v).b1);
    CHECK(entry_at(r, 3000.0).b1 > entry_at(r, r.argmin_v).b1);
  }

  TEST_CASE("entries equal standalone migrate then score") {
    const auto& r = demo_sweep();
    for (double v : {800.0, 1500.0, 2600.0}) {
      const Section m = migrate::migrate_constant_v(demo(), migrate::MigrationParams{v});
      const auto img = topo::binarize(m, 0.1);
      const auto b = topo::betti(img);
      const auto& e = entry_at(r, v);
      CHECK(e.b0 == b.b0);
      CHECK(e.b1 == b.b1);
      CHECK(e.active_pixels == img.active_count());
    }
  }

  TEST_CASE("scale invariance") {
    SweepSpec s;
    s.v_step = 500.0;
    const auto a = velocity_sweep(demo(), s);
    const auto b = velocity_sweep(scaled(demo(), 0.01), s);
    const auto c = velocity_sweep(scaled(demo(), 42.0), s);
    CHECK(a == b);
    CHECK(a == c);
  }

  TEST_CASE("ties go to the lowest velocity") {
    SweepSpec s;
    s.v_min = 1000.0;
    s.v_max = 2000.0;
    s.v_step = 250.0;
    s.window = Window{150, 151, 70, 71};
    const auto r = velocity_sweep(demo(), s);
    for (const auto& e : r.entries) {
      CHECK(e.b1 == 0);
      CHECK_FALSE(e.empty_window);
    }
    CHECK(r.argmin_v == 1000.0);
  }

  TEST_CASE("empty windows are flagged and never chosen") {
    SweepSpec s;
    s.v_step = 500.0;
    const auto r = velocity_sweep(demo().zeros_like(), s);
    for (const auto& e : r.entries) CHECK(e.empty_window);
    CHECK(r.argmin_v == 500.0);
    s.window = Window{0, 600, 0, 10};
    CHECK_THROWS_AS(velocity_sweep(demo(), s), Error);
  }

  TEST_CASE("deterministic across thread counts") {
    SweepSpec s;
    s.v_step = 250.0;
    set_thread_count(1);
    const auto a = velocity_sweep(demo(), s);
    set_thread_count(4);
    const auto b = velocity_sweep(demo(), s);
    set_thread_count(1);
    CHECK(a == b);
  }

  TEST_CASE("threshold sweep") {
    const auto one = threshold_sweep(demo(), Velocity(1500.0), {0.1});
    REQUIRE(one.size() == 1);
    const auto& e = entry_at(demo_sweep(), 1500.0);
    CHECK(one[0].betti.b0 == e.b0);
    CHECK(one[0].betti.b1 == e.b1);
    CHECK(one[0].active_pixels == e.active_pixels);

    const auto many = threshold_sweep(demo(), Velocity(1500.0), {0.05, 0.1, 0.2});
    REQUIRE(many.size() == 3);
    for (const auto& t : many)
      MESSAGE("tau " << t.tau << ": b0 " << t.betti.b0 << ", b1 " << t.betti.b1 << ", active "
                     << t.active_pixels);
    CHECK(many[0].active_pixels >= many[1].active_pixels);
    CHECK(many[1].active_pixels >= many[2].active_pixels);
    CHECK_THROWS_AS(threshold_sweep(demo(), Velocity(1500.0), {1.5}), Error);
  }
}
