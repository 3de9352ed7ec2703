#include <catch_amalgamated.hpp>

#include "graev/words.hpp"
#include "graev/rational.hpp"

using namespace graev;

TEST_CASE("words are 1-indexed and bounds-checked") {
  Word<int> w{4, 5, 6};
  CHECK(w.size() == 3);
  CHECK(w(1) == 4);
  CHECK(w(3) == 6);
  CHECK_THROWS_AS(w(0), std::out_of_range);
  CHECK_THROWS_AS(w(4), std::out_of_range);
  w(2) = 9;
  CHECK(w == Word<int>{4, 9, 6});
  CHECK(concat(w, Word<int>{1}) == Word<int>{4, 9, 6, 1});
  CHECK(concat(Word<int>{}, Word<int>{}).empty());
}

TEST_CASE("index sets") {
  IndexSet F{5, 2, 3, 2};
  CHECK(F.values() == std::vector<std::size_t>{2, 3, 5});
  CHECK(F.m() == 2);
  CHECK(F.M() == 5);
  CHECK_FALSE(F.is_interval());
  CHECK(IndexSet::interval(3, 6).is_interval());
  CHECK(IndexSet::interval(4, 3).empty());
  CHECK(F.minus(IndexSet{3}) == IndexSet{2, 5});
  CHECK(F.unite(IndexSet{4}) == IndexSet::interval(2, 5));
  CHECK(F.intersects(IndexSet{5, 9}));
  CHECK_FALSE(F.intersects(IndexSet{4}));
  CHECK_THROWS(IndexSet{}.m());
  CHECK_THROWS(IndexSet{0});
  CHECK(F.to_string() == "{2,3,5}");
  CHECK(IndexSet::interval(1, 3).to_string() == "[1,3]");
}

TEST_CASE("maximal subintervals split at gaps") {
  auto parts = maximal_subintervals(IndexSet{1, 2, 4, 6, 7, 8});
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == IndexSet{1, 2});
  CHECK(parts[1] == IndexSet{4});
  CHECK(parts[2] == IndexSet::interval(6, 8));
  CHECK(maximal_subintervals(IndexSet{}).empty());
}

TEST_CASE("subwords follow the index order") {
  Word<char> w{'a', 'b', 'c', 'd'};
  CHECK(subword(w, IndexSet{4, 2}) == Word<char>{'b', 'd'});
  CHECK_THROWS(subword(w, IndexSet{5}));
}

TEST_CASE("reports") {
  CHECK(static_cast<bool>(Report::pass()));
  auto r = Report::fail("triangle", "x,y,z");
  CHECK_FALSE(static_cast<bool>(r));
  CHECK(r.to_string() == "FAIL [triangle] x,y,z");
}

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK_THROWS(parse_rational("0.5"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational(""));
  CHECK(to_string(Rational(7, 4)) == "7/4");
  CHECK(to_string(Rational(2)) == "2");
}
