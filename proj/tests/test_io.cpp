#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace graev;
using fx::Rational;

namespace {
  Document sample(std::string const& name) {
    return load_document(std::string(SAMPLES_DIR) + "/" + name);
  }

  std::size_t error_line(std::string const& text) {
    try {
      parse_document_string(text);
    } catch (ParseError const& e) {
      return e.line();
    }
    return 0;
  }

  std::string const z2 = "group Z2\nelements e a\ntable\ne a\na e\nmetric\n0 1\n1 0\n";
}  // namespace

TEST_CASE("free product sample") {
  auto doc = sample("free_z2_z3.txt");
  REQUIRE(doc.group_order == std::vector<std::string>{"Z2", "Z3"});
  auto sys = doc.system();
  CHECK(sys.check());
  auto S = sys.amalgam();
  auto w = parse_word(S, sys, "a b");
  CHECK(w.size() == 2);
  CHECK(parse_word(S, sys, "ab") == w);
  CHECK(parse_word(S, sys, "e") == FiniteWord{});
  CHECK(graev_distance(S, FiniteWord{}, w) == Rational(2));
  CHECK(parse_word(S, sys, "Z2.a b2") == FiniteWord{S.letter(1, 1), S.letter(2, 2)});
  CHECK_THROWS_AS(parse_word(S, sys, "c"), ParseError);
}

TEST_CASE("amalgam sample") {
  auto doc = sample("amalgam_v4_z4.txt");
  auto sys = doc.system();
  CHECK(sys.check());
  auto S = sys.amalgam();
  // e is shared; p and r2 name the same element of A
  CHECK(S.normal_form(parse_word(S, sys, "p")) == S.normal_form(parse_word(S, sys, "r2")));
  CHECK(graev_distance(S, parse_word(S, sys, "q"), parse_word(S, sys, "r")) == Rational(7, 4));
  CHECK(doc.owner("A") == "V");
  CHECK(doc.subgroup("A").size() == 2);
}

TEST_CASE("samples that fail validation") {
  auto bt = sample("broken_triangle.txt");
  CHECK_FALSE(validate_tsi_metric(bt.group("Z3")));
  auto dis = sample("disagree.txt");
  CHECK(check_amalgam_system(dis.system()).item == "agreement");
}

TEST_CASE("space sample and free words") {
  auto doc = sample("space3.txt");
  auto X   = doc.spaces.at("X");
  CHECK(X.validate());
  SymmetrizedSpace S(X);
  auto             w = parse_free_word(S, "x y^-1");
  CHECK(free_word_name(S, w) == "x y^-1");
  CHECK(free_word_name(S, FreeWord{}) == "e");
  CHECK(free_norm(S, w).value == Rational(3, 2));
  CHECK_THROWS_AS(parse_free_word(S, "z"), ParseError);
}

TEST_CASE("hnn sample and hnn words") {
  auto doc = sample("hnn_gap.txt");
  auto sys = doc.hnn_system();
  CHECK(sys.check());
  CHECK(sys.K == Rational(2));
  auto w = parse_hnn_word(sys, "t a t^-1 phi(a) t^3");
  REQUIRE(w.size() == 5);
  CHECK(w(1) == HLetter{true, 1});
  CHECK(w(3) == HLetter{true, -1});
  CHECK(w(4) == HLetter{false, 1});
  CHECK(t_degree(w) == 5);
  CHECK(t_exponent(w) == 3);
  CHECK_THROWS_AS(parse_hnn_word(sys, "t^x"), ParseError);
  CHECK_THROWS_AS(parse_hnn_word(sys, "phi(b)"), ParseError);
}

TEST_CASE("family and norm samples") {
  auto doc = sample("bk_z4.txt");
  REQUIRE(doc.families.size() == 1);
  auto F = doc.family(doc.families[0]);
  CHECK(F.conjugacy_invariant);
  CHECK(F.levels == std::vector<ElementSet>{{0, 1, 2, 3}, {0, 2}, {0}});
  auto ext = sample("extend_z4.txt");
  auto nd  = ext.find_norm("A");
  REQUIRE(nd);
  auto NA = ext.norm(*nd);
  CHECK(NA.at(2) == Rational(1, 2));
  CHECK(ext.find_norm("Z4") == nullptr);
}

TEST_CASE("embedding into the second group") {
  auto doc = sample("interleave_z4.txt");
  auto sys = doc.system();
  CHECK(sys.check());
  CHECK(sys.embed[1] == std::vector<std::int64_t>{0, 2});
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("group Z2\nelements e a\ntable\ne a\n") == 3);
  CHECK(error_line("group Z2\nelements e a\ntable\ne a\na\nmetric\n0 1\n1 0\n") == 5);
  CHECK(error_line("group Z2\nelements e a\ntable\ne a\na b\nmetric\n0 1\n1 0\n") == 1);
  CHECK(error_line(z2 + "frobnicate\n") == 9);
  CHECK(error_line(z2 + "subgroup A e\n") == 9);
  CHECK(error_line("subgroup A = e\n") == 1);
  CHECK(error_line(z2 + "metric\n") == 9);
  CHECK(error_line(z2 + "# comment only\n\nnorm Z2 : e=0 a=x\n") == 11);
  CHECK(error_line(z2 + "family Z2\nlevel 1: e\n") == 10);
  CHECK(error_line(z2) == 0);
  CHECK_THROWS_AS(load_document("/nonexistent/file.txt"), ParseError);
}

TEST_CASE("bad subgroups and embeddings are reported with their line") {
  auto doc = parse_document_string(z2 + "subgroup A = a\n");
  try {
    doc.subgroup("A");
    FAIL("expected a ParseError");
  } catch (ParseError const& e) {
    CHECK(e.line() == 9);
  }
  auto two = parse_document_string(z2 + "subgroup A = e a\n" + std::string("group Y\nelements e b\ntable\ne b\nb e\nmetric\n0 1\n1 0\n")
                                   + "factors Z2 Y over A\n");
  CHECK_THROWS_AS(two.system(), ParseError);
}
