#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"

using namespace graev;
using fx::Rational;

namespace {
  struct Sys {
    AmalgamSystem sys = fx::amalgam_v4_z4();
    FiniteAmalgam S   = sys.amalgam();
    FiniteLetter  e() const { return S.identity(); }
    FiniteLetter  v(std::int64_t x) const { return S.letter(1, x); }  // p=1 q=2 pq=3
    FiniteLetter  z(std::int64_t x) const { return S.letter(2, x); }  // r=1 r2=2 r3=3
  };
}  // namespace

TEST_CASE("letters of A are stored canonically") {
  Sys s;
  CHECK(s.v(1) == s.z(2));  // p = r2
  CHECK(s.S.in_common(s.v(1)));
  CHECK_FALSE(s.S.in_common(s.v(2)));
  CHECK(s.S.is_identity(s.v(0)));
  CHECK(s.S.multipliable(s.v(1), s.z(1)));  // A letters multiply with anything
  CHECK_FALSE(s.S.multipliable(s.v(2), s.z(1)));
  CHECK(s.S.multiply(s.v(1), s.z(1)) == s.z(3));
}

TEST_CASE("reduce and normal form") {
  Sys  s;
  auto const& S = s.S;
  CHECK(S.reduce(FiniteWord{s.v(2), s.v(2)}).empty());
  CHECK(S.reduce(FiniteWord{s.v(2), s.z(2), s.v(2)}).size() == 1);
  // q r2 q = q p q = p, a single letter of A
  CHECK(S.normal_form(FiniteWord{s.v(2), s.z(2), s.v(2)}) == FiniteWord{s.v(1)});
  // q r and pq r3 are the same element; both normalize alike
  CHECK(S.normal_form(FiniteWord{s.v(2), s.z(1)}) == S.normal_form(FiniteWord{s.v(3), s.z(3)}));
  CHECK(S.is_trivial(FiniteWord{s.v(2), s.z(1), s.z(3), s.v(2)}));
  CHECK_FALSE(S.is_trivial(FiniteWord{s.v(2), s.z(1)}));
}

TEST_CASE("reduced forms of q r") {
  Sys  s;
  auto rf = s.S.reduced_forms(FiniteWord{s.v(2), s.z(1)});
  REQUIRE(rf.size() == 2);
  for (auto const& a : rf) {
    CHECK(s.S.is_reduced(a));
    CHECK(s.S.normal_form(a) == s.S.normal_form(FiniteWord{s.v(2), s.z(1)}));
  }
  // |A|^(n-1) forms for an alternating word of n letters
  auto rf3 = s.S.reduced_forms(FiniteWord{s.v(2), s.z(1), s.v(2)});
  CHECK(rf3.size() == 4);
  CHECK(s.S.reduced_forms(FiniteWord{}).size() == 1);
}

TEST_CASE("labels, external letters, alternation") {
  Sys        s;
  FiniteWord w{s.v(2), s.v(1), s.z(1), s.z(3)};
  CHECK(s.S.canonical_label(w) == Label{1, 0, 2, 2});
  CHECK(s.S.external_letters(w) == IndexSet{1, 3, 4});
  CHECK_FALSE(s.S.is_alternating(w));
  CHECK(s.S.is_alternating(FiniteWord{s.v(2), s.v(1), s.z(1)}));
}

TEST_CASE("free product words") {
  auto sys = fx::free_z2_z3();
  auto S   = sys.amalgam();
  auto a = S.letter(1, 1), b = S.letter(2, 1), b2 = S.letter(2, 2);
  CHECK(S.normal_form(FiniteWord{a, b, b, b2, a}) == FiniteWord{a, b, a});
  CHECK(S.reduced_forms(FiniteWord{a, b, a}).size() == 1);
  CHECK(S.word_name(FiniteWord{a, b2}) == "a b2");
}

TEST_CASE("balanced evaluation trees") {
  Sys  s;
  auto const& S = s.S;
  SECTION("g g^-1 is congruent as a whole: the root alone") {
    FiniteWord z{s.v(2), s.v(2)};
    auto       T = build_balanced_evaluation_tree(S, z);
    CHECK(validate_evaluation_tree(S, z, T));
    CHECK(T.size() == 1);
  }
  SECTION("an all-A word is a single root") {
    FiniteWord z{s.v(1), s.z(2)};
    auto       T = build_balanced_evaluation_tree(S, z);
    CHECK(T.size() == 1);
    CHECK(validate_evaluation_tree(S, z, T));
  }
  SECTION("non-trivial words are rejected with their value") {
    try {
      build_balanced_evaluation_tree(S, FiniteWord{s.v(2)});
      FAIL("expected an exception");
    } catch (std::invalid_argument const& e) {
      CHECK(std::string(e.what()).find("q") != std::string::npos);
    }
  }
  SECTION("random trivial words") {
    std::mt19937_64 rng(3);
    int             built = 0;
    for (int k = 0; k < 400 && built < 60; ++k) {
      auto w = fx::random_word(S, rng, 2 + rng() % 5);
      if (!S.is_trivial(w)) {
        continue;
      }
      ++built;
      auto T = build_balanced_evaluation_tree(S, w);
      INFO(S.word_name(w));
      CHECK(validate_evaluation_tree(S, w, T));
    }
    CHECK(built >= 20);
  }
}

TEST_CASE("congruent interval") {
  Sys        s;
  FiniteWord z{s.v(2), s.z(1), s.z(3), s.v(2)};
  auto       I = find_congruent_interval(s.S, z, s.S.canonical_label(z));
  CHECK(I == IndexSet::interval(2, 3));
  CHECK_THROWS(find_congruent_interval(s.S, FiniteWord{s.v(2)}, Label{1}));
}

TEST_CASE("tree validation catches broken trees") {
  Sys            s;
  FiniteWord     z{s.v(2), s.z(1), s.z(3), s.v(2)};
  EvaluationTree T(4);
  T.add(0, IndexSet::interval(2, 4));  // value q, not in A
  CHECK_FALSE(validate_evaluation_tree(s.S, z, T));
}
