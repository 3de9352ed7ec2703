#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"

using namespace graev;
using fx::Rational;

TEST_CASE("BK metric on Z4 with levels Z4, {0,2}, {0}") {
  auto     G = fx::zn(4);
  BKFamily F{{{0, 1, 2, 3}, {0, 2}, {0}}, true};
  CHECK(validate_family(G, F));
  auto m = bk_metric(G, F);
  CHECK(m.eta[2][0] == Rational(1, 2));
  CHECK(m.eta[1][0] == Rational(1));
  CHECK(m.d[2][0] == Rational(1, 2));
  CHECK(m.d[1][0] == Rational(1));
  CHECK(m.d[3][1] == Rational(1, 2));
  CHECK(m.sandwich);
  CHECK(validate_tsi_metric(m.group));
}

TEST_CASE("BK family validation") {
  auto G = fx::zn(4);
  CHECK(validate_family(G, BKFamily{{{0, 1, 2}, {0}}, false}).item == "U0");
  CHECK(validate_family(G, BKFamily{{{0, 1, 2, 3}, {0, 2}}, false}).item == "terminal");
  CHECK(validate_family(G, BKFamily{{{0, 1, 2, 3}, {0, 1}, {0}}, false}).item == "symmetric");
  CHECK(validate_family(G, BKFamily{{{0, 1, 2, 3}, {1, 3}, {0}}, false}).item == "identity");
  CHECK(validate_family(G, BKFamily{{{0, 1, 2, 3}, {0, 2}, {0, 1, 3}, {0}}, false}).item
        == "descending");
  auto Z8 = fx::zn(8);
  // {0,1,7}^3 reaches 3, which is outside {0,1,2,6,7}
  CHECK(validate_family(Z8, BKFamily{{{0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 6, 7}, {0, 1, 7}, {0}},
                                     false})
            .item
        == "cube");
  auto S = fx::s3();
  // {e, s12} is a subgroup but not normal
  BKFamily nn{{{0, 1, 2, 3, 4, 5}, {0, 1}, {0}}, true};
  CHECK(validate_family(S, nn).item == "conjugacy");
  nn.conjugacy_invariant = false;
  CHECK(validate_family(S, nn));
  CHECK_THROWS(bk_metric(G, BKFamily{{{0, 1, 2}, {0}}, false}));
}

TEST_CASE("normal subgroups, largest first") {
  auto N = normal_subgroups(fx::s3());
  REQUIRE(N.size() == 3);
  CHECK(N.front().size() == 6);
  CHECK(N[1] == ElementSet{0, 3, 4});
  CHECK(N.back() == ElementSet{0});
  CHECK(normal_subgroups(fx::zn(12)).size() == 6);
}

TEST_CASE("random families: eta/2 <= d <= eta and d is a tsi metric") {
  std::mt19937_64                groups_rng(7);
  std::vector<FiniteMetricGroup> groups{fx::zn(2), fx::zn(4), fx::zn(6), fx::zn(8),
                                        fx::zn(9), fx::zn(12), fx::s3()};
  for (int trial = 0; trial < 50; ++trial) {
    auto const& G = groups[trial % groups.size()];
    auto        F = fx::random_family(G, groups_rng);
    REQUIRE(validate_family(G, F));
    auto        m = bk_metric(G, F);
    std::size_t n = G.order();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(m.eta[i][j] / 2 <= m.d[i][j]);
        CHECK(m.d[i][j] <= m.eta[i][j]);
      }
    }
    CHECK(m.sandwich);
    CHECK(validate_tsi_metric(m.group));
  }
}

TEST_CASE("interleaving on Z4 with A = {0,2}") {
  auto G1 = fx::zn(4);
  auto G2 = cyclic_group("Z4'", {Rational(0), Rational(1), Rational(1), Rational(1)},
                         {"x0", "x1", "x2", "x3"});
  auto I  = interleave_families(G1, {0, 2}, G2, {0, 2});
  CHECK(I.ok());
  CHECK(I.containments);
  CHECK(I.first.levels.size() == I.second.levels.size());
  CHECK(I.first.levels.back() == ElementSet{0});
  CHECK(I.second.levels.back() == ElementSet{0});
  CHECK(validate_family(G1, I.first));
  CHECK(validate_family(G2, I.second));
  CHECK(I.min_ratio == Rational(2));
  CHECK(I.max_ratio == Rational(2));
  CHECK(I.pairs == 2);
}

TEST_CASE("interleaving of S3 and Z6 over Z3") {
  auto S  = fx::s3();
  auto Z6 = fx::zn(6);
  // A = Z3: {e, c1, c2} in S3 and {0, 2, 4} in Z6
  auto I = interleave_families(S, {0, 3, 4}, Z6, {0, 2, 4});
  CHECK(I.containments);
  CHECK(I.ok());
  CHECK(validate_family(S, I.first));
  CHECK(validate_family(Z6, I.second));
  CHECK_THROWS(interleave_families(S, {0, 3, 4}, Z6, {0, 4, 2, 1}));
  CHECK_THROWS(interleave_families(S, {0, 3, 4}, Z6, {0, 2, 3}));
}

TEST_CASE("a hand-built pair that violates the containments") {
  BKFamily F1{{{0, 1, 2, 3}, {0, 2}, {0}}, true};
  BKFamily F2{{{0, 1, 2, 3}, {0}, {0}}, true};
  // G1 keeps A one level too long
  BKFamily G1{{{0, 1, 2, 3}, {0, 2}, {0, 2}, {0}}, true};
  BKFamily G2{{{0, 1, 2, 3}, {0}, {0}, {0}}, true};
  CHECK(check_interleaving(F1, {0, 2}, F2, {0, 2}));
  auto r = check_interleaving(G1, {0, 2}, G2, {0, 2});
  CHECK_FALSE(r);
  CHECK(r.item == "i");
  CHECK(check_interleaving(F1, {0, 2}, G2, {0, 2}).item == "length");
}

TEST_CASE("extending a norm from a subgroup") {
  auto G  = fx::zn(4);
  auto NG = norm_of(G);
  Subgroup A(G, {0, 2});
  NormTable NA{{0, Rational(0)}, {2, Rational(1, 2)}};
  auto      N = extend_norm(G, NG, A, NA);
  CHECK(N.at(0) == Rational(0));
  CHECK(N.at(1) == Rational(1));
  CHECK(N.at(2) == Rational(1, 2));
  CHECK(N.at(3) == Rational(1));
  auto rep = check_extension(G, NG, A, NA, N);
  CHECK(rep.ok());
  CHECK(rep.normal);

  // the trivial subgroup gives back N_G
  Subgroup E(G, {0});
  CHECK(extend_norm(G, NG, E, NormTable{{0, Rational(0)}}) == NG);

  // N_A above N_G is rejected
  CHECK_THROWS(extend_norm(G, NG, A, NormTable{{0, Rational(0)}, {2, Rational(2)}}));
  CHECK_THROWS(extend_norm(G, NG, A, NormTable{{0, Rational(0)}}));
}

TEST_CASE("extension in S3 over a non-normal subgroup") {
  auto     S  = fx::s3();
  auto     NG = norm_of(S);
  Subgroup A(S, {0, 1});
  NormTable NA{{0, Rational(0)}, {1, Rational(1, 4)}};
  auto      N   = extend_norm(S, NG, A, NA);
  auto      rep = check_extension(S, NG, A, NA, N);
  CHECK_FALSE(rep.normal);
  CHECK(rep.extends);
  CHECK(rep.dominated);
  CHECK(rep.axioms);
  // the result is not conjugation invariant, but nothing was claimed
  CHECK_FALSE(validate_norm(S, N, {0, 1, 2, 3, 4, 5}, true));
  CHECK(rep.ok());
}

TEST_CASE("validate_norm items") {
  auto      G = fx::zn(4);
  NormTable bad{{0, Rational(0)}, {1, Rational(1)}, {2, Rational(3)}, {3, Rational(1)}};
  CHECK(validate_norm(G, bad, {0, 1, 2, 3}, false).item == "triangle");
  NormTable asym{{0, Rational(0)}, {1, Rational(1)}, {2, Rational(1)}, {3, Rational(2)}};
  CHECK(validate_norm(G, asym, {0, 1, 2, 3}, false).item == "symmetric");
  NormTable zero{{0, Rational(0)}, {1, Rational(1)}, {2, Rational(0)}, {3, Rational(1)}};
  CHECK(validate_norm(G, zero, {0, 1, 2, 3}, false).item == "positive");
  CHECK(validate_norm(G, NormTable{{0, Rational(0)}}, {0, 2}, false).item == "domain");
}

TEST_CASE("Heisenberg commutators") {
  auto rep = heisenberg_obstruction(10);
  REQUIRE(rep.rows.size() == 10);
  CHECK(rep.central_holds);
  CHECK_FALSE(rep.literal_holds);
  auto const& r5 = rep.rows[4];
  CHECK(r5.n == 5);
  CHECK(r5.commutator[0][2] == 25);
  CHECK(r5.central);
  CHECK_FALSE(r5.literal);
  CHECK(r5.ratio == Rational(5, 2));
  CHECK(rep.rows[1].commutator[0][2] == 4);
  // unbounded ratio n^2 / 2n
  CHECK(rep.rows.back().ratio == Rational(5));
  CHECK_THROWS(heisenberg_obstruction(0));
  CHECK_THROWS(heisenberg_obstruction(51));

  IntMatrix x{{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK(mat_mul(x, mat_inv(x)) == mat_pow(x, 0));
  CHECK(mat_pow(x, -3) == mat_inv(mat_pow(x, 3)));
}

TEST_CASE("induced conjugacy on the circle") {
  CHECK(circle_induced_conjugacy(Rational(1, 5), Rational(2, 5)).conjugate);
  CHECK(circle_induced_conjugacy(Rational(1, 5), Rational(2, 5)).reason == "same period 5");
  auto v = circle_induced_conjugacy(Rational(1, 3), Rational(1, 4));
  CHECK_FALSE(v.conjugate);
  CHECK(v.reason == "periods 3 and 4 differ");
  CHECK(circle_induced_conjugacy(Rational(1, 3), Rational(2, 3)).reason == "g1 = -g2 (mod 1)");
  CHECK(circle_induced_conjugacy(Rational(7, 3), Rational(1, 3)).reason == "g1 = g2");
  CHECK(circle_induced_conjugacy(Rational(-1, 4), Rational(3, 4)).reason == "g1 = g2");
  CHECK(circle_induced_conjugacy(Rational(0), Rational(1, 2)).reason == "periods 1 and 2 differ");
}
