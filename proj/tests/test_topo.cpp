/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <random>

#include "mixnorm/error.hpp"
#include "mixnorm/synth.hpp"
#include "mixnorm/topo.hpp"

using namespace mixnorm;
using namespace mixnorm::topo;

namespace {

BinaryImage from_rows(const std::vector<std::string>& rows) {
  BinaryImage img(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) img.set(r, c, rows[r][c] == '#');
  return img;
}

void check_euler(const BinaryImage& img, const BettiPair& b) {
  const auto counts = cubical_counts(img);
  CHECK(static_cast<long long>(b.b0) - static_cast<long long>(b.b1) == counts.euler());
}

}  // namespace

TEST_SUITE("topo") {
  TEST_CASE("cell counts") {
    const auto empty = cubical_counts(BinaryImage(3, 3));
    CHECK(empty.v == 0);
    CHECK(empty.e == 0);
    CHECK(empty.f == 0);

    const auto one = cubical_counts(from_rows({"#"}));
    CHECK(one.v == 4);
    CHECK(one.e == 4);
    CHECK(one.f == 1);

    const auto ring = cubical_counts(from_rows({"###", "#.#", "###"}));
    CHECK(ring.v == 16);
    CHECK(ring.e == 24);
    CHECK(ring.f == 8);
    CHECK(ring.euler() == 0);
  }

  TEST_CASE("betti examples") {
    CHECK(betti(BinaryImage(4, 4)) == BettiPair{0, 0});
    CHECK(betti_oracle(BinaryImage(4, 4)) == BettiPair{0, 0});
    CHECK(betti(from_rows({"#"})) == BettiPair{1, 0});
    CHECK(betti_oracle(from_rows({"#"})) == BettiPair{1, 0});
    CHECK(betti(from_rows({"#####", "#####", "#####"})) == BettiPair{1, 0});
    CHECK(betti(from_rows({"###", "#.#", "###"})) == BettiPair{1, 1});
    CHECK(betti_oracle(from_rows({"###", "#.#", "###"})) == BettiPair{1, 1});
    // Corner contact joins pixels; the diagonal pair is one component.
    CHECK(betti(from_rows({"#.", ".#"})) == BettiPair{1, 0});
    // A diamond of corner-touching pixels encloses a hole.
    CHECK(betti(from_rows({".#.", "#.#", ".#."})) == BettiPair{1, 1});
    CHECK(betti_oracle(from_rows({".#.", "#.#", ".#."})) == BettiPair{1, 1});
    CHECK(betti(from_rows({"#####", "#.#.#", "#####"})) == BettiPair{1, 2});
  }

  TEST_CASE("exhaustive 3x3 agreement with the GF(2) oracle") {
    for (unsigned mask = 0; mask < 512; ++mask) {
      BinaryImage img(3, 3);
      for (unsigned k = 0; k < 9; ++k) img.set(k / 3, k % 3, (mask >> k) & 1u);
      const auto b = betti(img);
      CHECK(b == betti_oracle(img));
      check_euler(img, b);
    }
  }

  TEST_CASE("random 8x8 agreement with the GF(2) oracle") {
    std::mt19937_64 gen(8);
    std::bernoulli_distribution on(0.5);
    for (int trial = 0; trial < 500; ++trial) {
      BinaryImage img(8, 8);
      for (auto& bit : img.bits) bit = on(gen) ? 1 : 0;
      const auto b = betti(img);
      CHECK(b == betti_oracle(img));
      check_euler(img, b);
    }
  }

  TEST_CASE("an isolated pixel adds one component and no loop") {
    std::mt19937_64 gen(9);
    std::bernoulli_distribution on(0.45);
    for (int trial = 0; trial < 50; ++trial) {
      BinaryImage img(12, 12);
      for (std::size_t r = 0; r < 9; ++r)
        for (std::size_t c = 0; c < 12; ++c) img.set(r, c, on(gen));
      const auto before = betti(img);
      img.set(11, static_cast<std::size_t>(trial % 12), true);
      const auto after = betti(img);
      CHECK(after.b0 == before.b0 + 1);
      CHECK(after.b1 == before.b1);
    }
  }

  TEST_CASE("binarize threshold rules") {
    Section s(3, 2, 0.004, 10.0, 0.0, {0.1, -2.0, 0.5, 2.0, 1.0, -0.2});
    const auto top = binarize(s, 0.999999);
    CHECK(top.active_count() == 2);
    CHECK(top.get(1, 0));
    CHECK(top.get(0, 1));
    CHECK(binarize(scaled(s, 7.5), 0.3).bits == binarize(s, 0.3).bits);
    CHECK_THROWS_AS(binarize(s, 0.0), Error);
    CHECK_THROWS_AS(binarize(s, 1.0), Error);
    CHECK_THROWS_AS(binarize(s.zeros_like(), 0.5), Error);
  }

  TEST_CASE("binarize then betti is scale invariant on the demo") {
    const Section demo = synth::three_diffractor_demo().second;
    const auto img = binarize(demo, 0.1);
    MESSAGE("demo active pixels at tau 0.1: " << img.active_count());
    CHECK(betti(binarize(scaled(demo, 0.003), 0.1)) == betti(img));
    CHECK(betti(binarize(scaled(demo, 250.0), 0.1)) == betti(img));
  }

  TEST_CASE("the oracle is limited to desk-scale images") {
    try {
      betti_oracle(BinaryImage(65, 64));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SizeLimit);
    }
  }
}
