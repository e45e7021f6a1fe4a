// Copyright 2026 The synvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synvec/privacy.hpp"

#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

using namespace synvec;
using Catch::Matchers::WithinAbs;

namespace {

RatingMatrix random_symmetric_clamped(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RatingMatrix m;
  m.dim = dim;
  m.values.assign(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      m.at(i, j) = r;
      m.at(j, i) = r;
    }
  }
  return m;
}

RatingMatrix identity_ratings(std::size_t dim) {
  RatingMatrix m;
  m.dim = dim;
  m.values.assign(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("standard_loss is epsilon times n") {
  CHECK_THAT(standard_loss(PrivacyParams{47.5, 1.0, 150}), WithinAbs(7125.0, 1e-9));
  CHECK_THAT(standard_loss(PrivacyParams{1.0, 1.0, 1}), WithinAbs(1.0, 0.0));
  CHECK_THAT(standard_loss(PrivacyParams{2.0, 1.0, 3}), WithinAbs(6.0, 0.0));
}

TEST_CASE("eta: boundary value at epsilon_bar = 0") {
  for (std::int64_t l : {2, 5, 100, 30000}) {
    CHECK_THAT(eta(0.0, l), WithinAbs(1.0, 0.0));
    CHECK_THAT(log_eta(0.0, l), WithinAbs(0.0, 0.0));
  }
}

TEST_CASE("eta: L=2 closed form is exp(-eps/2)") {
  for (double eps : {0.5, 1.0, 2.0, 10.0, 47.5, 200.0}) {
    CHECK_THAT(log_eta(eps, 2), WithinAbs(-eps / 2.0, 1e-12));
  }
}

TEST_CASE("eta: log-space evaluation at the large-grid reference point") {
  // eta(47.5, 30000) frozen from a high-precision evaluation of the formula.
  CHECK_THAT(log_eta(47.5, 30000), WithinAbs(-13.4410821274056881, 1e-9));
  CHECK_THAT(eta(47.5, 30000), WithinAbs(1.45416002360956710e-6, 1e-15));
  CHECK_THAT(47.5 + log_eta(47.5, 30000), WithinAbs(34.0589178725943119, 1e-9));
}

TEST_CASE("eta: survives epsilon far beyond the double exp range") {
  const double le = log_eta(5000.0, 30000);
  CHECK(std::isfinite(le));
  // denominator dominated by e^{eps/2}: ln eta ~ ln(L-1) - eps/2
  CHECK_THAT(le, WithinAbs(std::log(29999.0) - 2500.0, 1e-6));
}

TEST_CASE("eta: strictly decreasing in epsilon_bar, strictly increasing in L") {
  for (std::int64_t l : {2, 100, 30000}) {
    double prev = log_eta(0.0, l);
    for (double eps = 0.5; eps <= 50.0; eps += 0.5) {
      const double cur = log_eta(eps, l);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  for (double eps : {0.5, 5.0, 47.5}) {
    double prev = log_eta(eps, 2);
    for (std::int64_t l : {3, 10, 100, 1000, 30000}) {
      const double cur = log_eta(eps, l);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("improved_loss: K=2 equals eps/2 per word") {
  CHECK_THAT(improved_loss(PrivacyParams{2.0, 1.0, 1}, 2), WithinAbs(1.0, 1e-12));
  CHECK_THAT(improved_loss(PrivacyParams{5.0, 1.0, 4}, 2), WithinAbs(10.0, 1e-12));
}

TEST_CASE("improved_loss: improvement vanishes for small epsilon") {
  const double improved = improved_loss(PrivacyParams{0.001, 1.0, 1}, 30000);
  CHECK(improved < 0.001);
  CHECK_THAT(improved, WithinAbs(0.001, 1e-6));
}

TEST_CASE("improved_loss never exceeds standard_loss") {
  for (double eps : {0.1, 1.0, 8.0, 47.5}) {
    for (std::int64_t k : {2, 5, 100, 30000}) {
      for (std::int64_t n : {1, 150}) {
        const PrivacyParams params{eps, 1.0, n};
        CHECK(improved_loss(params, k) <= standard_loss(params) + 1e-9);
      }
    }
  }
}

TEST_CASE("tight_loss: K=2 identity ratings at eps=2") {
  const MechanismTables tables = build_tables(identity_ratings(2), PrivacyParams{2.0, 1.0, 1});
  const TightLoss tight = tight_loss(tables);
  CHECK_THAT(tight.per_word, WithinAbs(1.0, 1e-12));  // = eps/2
  // matches the improved bound exactly at K=2
  CHECK_THAT(tight.per_word, WithinAbs(2.0 + log_eta(2.0, 2), 1e-12));
  CHECK(tight.witness.w == 0);
  CHECK(tight.witness.v_max == 0);
  CHECK(tight.witness.v_min == 1);
}

TEST_CASE("tight_loss: uniform ratings give zero loss") {
  RatingMatrix m;
  m.dim = 3;
  m.values.assign(9, 0.4);
  const MechanismTables tables = build_tables(m, PrivacyParams{10.0, 1.0, 1});
  CHECK_THAT(tight_loss(tables).per_word, WithinAbs(0.0, 1e-12));
}

TEST_CASE("tight_loss: brute-force column-ratio oracle on random matrices") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t dim = 5;
    const double eps = 3.0;
    const MechanismTables tables =
        build_tables(random_symmetric_clamped(dim, seed), PrivacyParams{eps, 1.0, 1});
    const TightLoss tight = tight_loss(tables);

    double oracle = 0.0;
    for (std::size_t w = 0; w < dim; ++w) {
      double hi = 0.0, lo = std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < dim; ++v) {
        hi = std::max(hi, tables.pi(v, w));
        lo = std::min(lo, tables.pi(v, w));
      }
      oracle = std::max(oracle, std::log(hi / lo));
    }
    CHECK_THAT(tight.per_word, WithinAbs(oracle, 1e-9));
    CHECK(tight.per_word <= eps + log_eta(eps, dim) + 1e-9);
  }
}

TEST_CASE("tight_loss: witness documents realize the loss") {
  // Two single-word documents built from the witness pair achieve the ratio
  // e^{tight_loss} at the witness output.
  const MechanismTables tables =
      build_tables(random_symmetric_clamped(6, 99), PrivacyParams{7.0, 1.0, 1});
  const TightLoss tight = tight_loss(tables);

  auto unit_composition = [&](std::size_t v) {
    CompositionVector c;
    c.dim = tables.dim();
    c.entries[v] = 1.0;
    return c;
  };
  const std::vector<double> p1 = output_distribution(unit_composition(tight.witness.v_max), tables);
  const std::vector<double> p2 = output_distribution(unit_composition(tight.witness.v_min), tables);
  CHECK_THAT(std::log(p1[tight.witness.w] / p2[tight.witness.w]),
             WithinAbs(tight.per_word, 1e-9));
}

TEST_CASE("bound ordering chain: tight <= improved <= standard per word") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (double eps : {0.5, 2.0, 8.0, 20.0}) {
      const std::size_t dim = 2 + seed % 7;
      const MechanismTables tables =
          build_tables(random_symmetric_clamped(dim, seed * 13 + 1), PrivacyParams{eps, 1.0, 1});
      const double tight = tight_loss(tables).per_word;
      const double improved = eps + log_eta(eps, static_cast<std::int64_t>(dim));
      CHECK(tight <= improved + 1e-9);
      CHECK(improved <= eps + 1e-9);
    }
  }
}

TEST_CASE("utility_bounds: T covering everything gives (1, 1)") {
  const UtilityBounds b =
      utility_bounds(UtilityBoundInput{{0.4, 0.4, 0.4}, 0.4, 2.0, 1.0});
  CHECK(b.lower == 1.0);
  CHECK(b.upper == 1.0);
  CHECK(b.t_size == 3);
}

TEST_CASE("utility_bounds: hand-evaluated instance with c equal to the spread") {
  const UtilityBounds b =
      utility_bounds(UtilityBoundInput{{1.0, 0.2, 0.2, 0.2}, 1.0, 2.0, 1.0});
  const double expected = 1.0 / (1.0 + 3.0 * std::exp(-0.8));
  CHECK_THAT(b.lower, WithinAbs(expected, 1e-12));
  CHECK_THAT(b.upper, WithinAbs(expected, 1e-12));
  CHECK_THAT(b.lower, WithinAbs(0.4258967557516616, 1e-12));
  CHECK(b.t_size == 1);

  // cross-check against the exact probability from the mechanism row
  RatingMatrix m;
  m.dim = 4;
  m.values = {1.0, 0.2, 0.2, 0.2,
              0.2, 1.0, 0.2, 0.2,
              0.2, 0.2, 1.0, 0.2,
              0.2, 0.2, 0.2, 1.0};
  const MechanismTables tables = build_tables(m, PrivacyParams{2.0, 1.0, 1});
  CHECK_THAT(tables.pi(0, 0), WithinAbs(expected, 1e-12));
}

TEST_CASE("utility_bounds: exact probability sandwiched on random instances") {
  std::mt19937_64 rng(2027);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + rng() % 7;
    const RatingMatrix m = random_symmetric_clamped(dim, rng());
    const double eps = 0.5 + static_cast<double>(rng() % 40);
    const MechanismTables tables = build_tables(m, PrivacyParams{eps, 1.0, 1});
    const std::size_t x = rng() % dim;

    std::vector<double> ratings(dim);
    for (std::size_t w = 0; w < dim; ++w) ratings[w] = m.at(x, w);
    double lo = 1.0, hi = 0.0;
    for (double r : ratings) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double tau = lo + (hi - lo) * (static_cast<double>(rng() % 1000) / 1000.0);

    const UtilityBounds bounds = utility_bounds(UtilityBoundInput{ratings, tau, eps, 1.0});
    double exact = 0.0;
    for (std::size_t w = 0; w < dim; ++w) {
      if (ratings[w] >= tau) exact += tables.pi(x, w);
    }
    CHECK(exact >= bounds.lower - 1e-9);
    CHECK(exact <= bounds.upper + 1e-9);
  }
}

TEST_CASE("utility_bounds: empty T rejected via tau validation") {
  CHECK_THROWS(utility_bounds(UtilityBoundInput{{0.1, 0.2}, 0.5, 1.0, 1.0}));
}

TEST_CASE("epsilon_conditions: balanced split needs epsilon zero") {
  const EpsilonConditions c = epsilon_conditions(0.5, 5, 10, 1.0, 1.0, 0.5);
  CHECK_THAT(c.necessary, WithinAbs(0.0, 1e-12));
  CHECK_THAT(c.sufficient, WithinAbs(0.0, 1e-12));
}

TEST_CASE("epsilon_conditions: p=1/2 with delta_bar=delta reduces to 2 ln(|T_bar|/|T|)") {
  for (std::int64_t t : {1, 2, 5}) {
    for (std::int64_t z : {10, 100, 1000}) {
      const EpsilonConditions c = epsilon_conditions(0.5, t, z, 1.0, 1.0, 0.5);
      CHECK_THAT(c.necessary,
                 WithinAbs(2.0 * std::log(static_cast<double>(z - t) / t), 1e-12));
      CHECK(c.necessary <= c.sufficient);
    }
  }
}

TEST_CASE("epsilon_conditions: necessary grows by ~2 ln 2 per output-space doubling") {
  const std::int64_t t = 4;
  double prev = epsilon_conditions(0.5, t, 1024, 1.0, 1.0, 0.3).necessary;
  for (std::int64_t z = 2048; z <= 65536; z *= 2) {
    const double cur = epsilon_conditions(0.5, t, z, 1.0, 1.0, 0.3).necessary;
    // |T_bar| = z - t is not exactly doubling, so allow a small slack
    CHECK_THAT(cur - prev, WithinAbs(2.0 * std::log(2.0), 0.05));
    prev = cur;
  }
}

TEST_CASE("epsilon_conditions: precondition violations") {
  CHECK_THROWS(epsilon_conditions(0.0, 1, 2, 1.0, 1.0, 0.5));
  CHECK_THROWS(epsilon_conditions(1.0, 1, 2, 1.0, 1.0, 0.5));
  CHECK_THROWS(epsilon_conditions(0.5, 0, 2, 1.0, 1.0, 0.5));
  CHECK_THROWS(epsilon_conditions(0.5, 2, 2, 1.0, 1.0, 0.5));
  CHECK_THROWS(epsilon_conditions(0.5, 1, 2, 1.0, 0.0, 0.5));
  CHECK_THROWS(epsilon_conditions(0.5, 1, 2, 1.0, 1.0, 0.0));
}

TEST_CASE("privacy report: consistent fields and ordering") {
  const MechanismTables tables =
      build_tables(random_symmetric_clamped(5, 321), PrivacyParams{8.0, 1.0, 150});
  const PrivacyReport report = make_privacy_report(tables);
  CHECK(report.vocab_size == 5);
  CHECK_THAT(report.standard_loss_total, WithinAbs(8.0 * 150, 1e-9));
  CHECK_THAT(report.improved_loss_total,
             WithinAbs(report.improved_loss_per_word * 150, 1e-9));
  CHECK_THAT(report.tight_loss_total, WithinAbs(report.tight_loss_per_word * 150, 1e-9));
  CHECK(report.tight_loss_total <= report.improved_loss_total + 1e-9);
  CHECK(report.improved_loss_total <= report.standard_loss_total + 1e-9);
  CHECK(report.eta > 0.0);
  CHECK(report.eta < 1.0);
}

TEST_CASE("bound_curves: grid shape and monotonicity") {
  const std::vector<BoundCurvePoint> points = bound_curves({2, 100}, 10.0, 0.5);
  REQUIRE(points.size() == 2 * 21);
  for (const BoundCurvePoint& pt : points) {
    CHECK(pt.improved <= pt.standard + 1e-12);
  }
  // gap = standard - improved strictly increases with epsilon along each curve
  for (std::size_t i = 1; i < 21; ++i) {
    CHECK(points[i].standard - points[i].improved >
          points[i - 1].standard - points[i - 1].improved);
  }
}
