#pragma once

#include <algorithm>   // for sort
#include <compare>     // for operator<=>
#include <cstddef>     // for size_t
#include <cstdint>     // for int64_t
#include <functional>  // for function
#include <map>         // for map
#include <optional>    // for optional
#include <set>         // for set
#include <stdexcept>   // for invalid_argument
#include <string>      // for string
#include <utility>     // for move, pair
#include <vector>      // for vector

#include "factor.hpp"        // for MetricGroup, FactorPtr, FiniteFactor
#include "finite_group.hpp"  // for FiniteMetricGroup
#include "rational.hpp"      // for Rational
#include "words.hpp"         // for Word, IndexSet, Label, Report

namespace graev {

  // factor == 0 marks an element of the common subgroup A, stored as its image
  // in factor 1.  Factors are numbered 1..k.  Letters are kept canonical, so the
  // canonical label of a letter is just its factor.
  template <typename E>
  struct Letter {
    int factor = 0;
    E   element{};

    auto operator<=>(Letter const&) const = default;
    bool operator==(Letter const&) const  = default;
  };

  // A, as seen from each factor.  project(l, x) is the factor-1 image of x when
  // x lies in A, embed(l, c) the inverse map.  candidates lists A when finite,
  // and a truncation of it otherwise.
  template <typename E>
  struct CommonSubgroup {
    std::function<std::optional<E>(int, E const&)> project;
    std::function<E(int, E const&)>                embed;
    std::vector<E>                                 candidates;
    bool                                           finite = true;
  };

  template <typename E>
  class Amalgam {
   public:
    using element_type = E;
    using letter_type  = Letter<E>;
    using word_type    = Word<Letter<E>>;

    Amalgam() = default;
    Amalgam(std::vector<FactorPtr<E>> factors, CommonSubgroup<E> common)
        : _factors(std::move(factors)), _common(std::move(common)) {
      if (_factors.empty()) {
        throw std::invalid_argument("an amalgam needs at least one factor");
      }
    }

    int num_factors() const noexcept {
      return static_cast<int>(_factors.size());
    }
    MetricGroup<E> const& factor(int l) const {
      if (l < 1 || l > num_factors()) {
        throw std::out_of_range("no factor " + std::to_string(l));
      }
      return *_factors[l - 1];
    }
    CommonSubgroup<E> const& common() const noexcept {
      return _common;
    }
    bool finite_common() const noexcept {
      return _common.finite;
    }
    std::vector<letter_type> common_letters() const {
      std::vector<letter_type> out;
      for (auto const& c : _common.candidates) {
        out.push_back({0, c});
      }
      return out;
    }

    letter_type letter(int l, E const& x) const {
      (void) factor(l);
      if (auto c = _common.project(l, x)) {
        return {0, *c};
      }
      return {l, x};
    }
    letter_type identity() const {
      return {0, _factors[0]->identity()};
    }
    bool is_identity(letter_type const& x) const {
      return x == identity();
    }
    bool in_common(letter_type const& x) const noexcept {
      return x.factor == 0;
    }

    // x as an element of factor l; x must be multipliable with G_l
    E element_in(int l, letter_type const& x) const {
      if (x.factor == l) {
        return x.element;
      }
      if (x.factor != 0) {
        throw std::invalid_argument("letter is not in factor " + std::to_string(l));
      }
      return l == 1 ? x.element : _common.embed(l, x.element);
    }

    bool multipliable(letter_type const& x, letter_type const& y) const noexcept {
      return x.factor == 0 || y.factor == 0 || x.factor == y.factor;
    }

    letter_type multiply(letter_type const& x, letter_type const& y) const {
      if (!multipliable(x, y)) {
        throw std::invalid_argument("multiplying letters " + letter_name(x) + " and "
                                    + letter_name(y) + " of different factors");
      }
      int l = x.factor != 0 ? x.factor : (y.factor != 0 ? y.factor : 1);
      return letter(l, factor(l).multiply(element_in(l, x), element_in(l, y)));
    }

    letter_type inverse(letter_type const& x) const {
      int l = x.factor == 0 ? 1 : x.factor;
      return letter(l, factor(l).inverse(x.element));
    }

    // the amalgam metric on G = union of the factors
    Rational distance(letter_type const& x, letter_type const& y) const {
      if (multipliable(x, y)) {
        int l = x.factor != 0 ? x.factor : (y.factor != 0 ? y.factor : 1);
        return factor(l).distance(element_in(l, x), element_in(l, y));
      }
      std::optional<Rational> best;
      for (auto const& c : _common.candidates) {
        letter_type a{0, c};
        auto        v = factor(x.factor).distance(x.element, element_in(x.factor, a))
                 + factor(y.factor).distance(element_in(y.factor, a), y.element);
        if (!best || v < *best) {
          best = v;
        }
      }
      return *best;
    }

    Rational distance_to_common(letter_type const& x) const {
      if (x.factor == 0) {
        return Rational(0);
      }
      std::optional<Rational> best;
      for (auto const& c : _common.candidates) {
        auto v = factor(x.factor).distance(x.element, element_in(x.factor, {0, c}));
        if (!best || v < *best) {
          best = v;
        }
      }
      return *best;
    }

    std::string letter_name(letter_type const& x) const {
      int l = x.factor == 0 ? 1 : x.factor;
      return factor(l).element_name(x.element);
    }
    std::string word_name(word_type const& w) const {
      if (w.empty()) {
        return "e";
      }
      std::string s;
      for (std::size_t i = 1; i <= w.size(); ++i) {
        s += (i > 1 ? " " : "") + letter_name(w(i));
      }
      return s;
    }

    // ---- words ----

    Rational rho(word_type const& u, word_type const& v) const {
      if (u.size() != v.size()) {
        throw std::invalid_argument("rho of words of lengths " + std::to_string(u.size())
                                    + " and " + std::to_string(v.size()));
      }
      Rational s(0);
      for (std::size_t i = 1; i <= u.size(); ++i) {
        s += distance(u(i), v(i));
      }
      return s;
    }

    bool multipliable(word_type const& u, word_type const& v) const {
      if (u.size() != v.size()) {
        return false;
      }
      for (std::size_t i = 1; i <= u.size(); ++i) {
        if (!multipliable(u(i), v(i))) {
          return false;
        }
      }
      return true;
    }

    bool is_multipliable_set(word_type const& w, IndexSet const& F) const {
      int l = 0;
      for (auto i : F) {
        int f = w(i).factor;
        if (f == 0) {
          continue;
        }
        if (l == 0) {
          l = f;
        } else if (l != f) {
          return false;
        }
      }
      return true;
    }

    // product of the letters of a multipliable subword
    letter_type product(word_type const& w, IndexSet const& F) const {
      letter_type r = identity();
      for (auto i : F) {
        r = multiply(r, w(i));
      }
      return r;
    }

    word_type inverse(word_type const& w) const {
      std::vector<letter_type> out;
      for (std::size_t i = w.size(); i >= 1; --i) {
        out.push_back(inverse(w(i)));
      }
      return word_type(std::move(out));
    }

    // Multiplies adjacent multipliable letters until none are left; the
    // result is a reduced word with the same value (empty for e).
    word_type reduce(word_type const& w) const {
      std::vector<letter_type> st;
      for (auto const& x : w) {
        letter_type cur = x;
        while (true) {
          if (is_identity(cur)) {
            break;
          }
          if (!st.empty() && multipliable(st.back(), cur)) {
            cur = multiply(st.back(), cur);
            st.pop_back();
            continue;
          }
          st.push_back(cur);
          break;
        }
      }
      return word_type(std::move(st));
    }

    // The reduced form chosen greedily from the left: each letter is the least
    // one (in Letter order) of its coset x A.
    word_type normal_form(word_type const& w) const {
      auto r = reduce(w);
      if (r.size() <= 1) {
        return r;
      }
      std::vector<letter_type> out;
      letter_type              carry = identity();
      for (std::size_t i = 1; i < r.size(); ++i) {
        auto        x    = multiply(inverse(carry), r(i));
        letter_type best = x;
        for (auto const& c : _common.candidates) {
          auto y = multiply(x, letter_type{0, c});
          if (y < best) {
            best = y;
          }
        }
        carry = multiply(inverse(x), best);
        out.push_back(best);
      }
      out.push_back(multiply(inverse(carry), r(r.size())));
      return word_type(std::move(out));
    }

    bool is_trivial(word_type const& w) const {
      return reduce(w).empty();
    }

    word_type multiply(word_type const& f, word_type const& g) const {
      return normal_form(concat(f, g));
    }

    // All reduced forms of the element represented by w: insertions
    // a1, a1^-1 a2, ..., a_{n-1}^-1 between consecutive letters.
    std::vector<word_type> reduced_forms(word_type const& w) const {
      auto alpha = reduce(w);
      if (alpha.size() <= 1) {
        return {alpha};
      }
      std::set<word_type>      seen;
      std::vector<letter_type> cur;
      rf_rec(alpha, 1, identity(), cur, seen);
      return {seen.begin(), seen.end()};
    }

    IndexSet external_letters(word_type const& w) const {
      std::vector<std::size_t> v;
      for (std::size_t i = 1; i <= w.size(); ++i) {
        if (w(i).factor != 0) {
          v.push_back(i);
        }
      }
      return IndexSet(std::move(v));
    }

    bool is_alternating(word_type const& w) const {
      auto ext = external_letters(w).values();
      for (std::size_t k = 0; k + 1 < ext.size(); ++k) {
        if (w(ext[k]).factor == w(ext[k + 1]).factor) {
          return false;
        }
      }
      return true;
    }

    bool is_reduced(word_type const& w) const {
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (multipliable(w(i), w(i + 1))) {
          return false;
        }
      }
      return true;
    }

    Label canonical_label(word_type const& w) const {
      std::vector<int> v;
      for (auto const& x : w) {
        v.push_back(x.factor);
      }
      return Label(std::move(v));
    }

    // Every letter of G: A first, then each factor's elements outside A.
    // Only available when all factors are finite.
    std::vector<letter_type> alphabet() const {
      std::vector<letter_type> out = common_letters();
      for (int l = 1; l <= num_factors(); ++l) {
        auto el = factor(l).elements();
        if (!el) {
          throw std::invalid_argument("alphabet of an infinite factor");
        }
        for (auto const& x : *el) {
          if (!_common.project(l, x)) {
            out.push_back({l, x});
          }
        }
      }
      return out;
    }

   private:
    void rf_rec(word_type const&          alpha,
                std::size_t               i,
                letter_type const&        carry,
                std::vector<letter_type>& cur,
                std::set<word_type>&      seen) const {
      auto x = multiply(inverse(carry), alpha(i));
      if (i == alpha.size()) {
        cur.push_back(x);
        seen.insert(word_type(cur));
        cur.pop_back();
        return;
      }
      for (auto const& c : _common.candidates) {
        letter_type a{0, c};
        cur.push_back(multiply(x, a));
        rf_rec(alpha, i + 1, a, cur, seen);
        cur.pop_back();
      }
    }

    std::vector<FactorPtr<E>> _factors;
    CommonSubgroup<E>         _common;
  };

  using FiniteLetter  = Letter<std::int64_t>;
  using FiniteWord    = Word<FiniteLetter>;
  using FiniteAmalgam = Amalgam<std::int64_t>;

  // Finite factors G_1..G_k with a common subgroup A given abstractly (as a
  // finite metric group) and injective embeddings embed[l][a] in G_l.
  struct AmalgamSystem {
    std::vector<FiniteMetricGroup>         factors;
    FiniteMetricGroup                      common;
    std::vector<std::vector<std::int64_t>> embed;

    // Embeddings are monomorphisms and the factor metrics agree on A.
    Report check() const {
      if (embed.size() != factors.size()) {
        return Report::fail("embedding", "one embedding per factor expected");
      }
      auto const n = static_cast<std::int64_t>(common.order());
      for (std::size_t l = 0; l < factors.size(); ++l) {
        auto const& G = factors[l];
        auto const& f = embed[l];
        if (f.size() != common.order()) {
          return Report::fail("embedding", "embedding into " + G.name() + " has wrong size");
        }
        std::set<std::int64_t> img(f.begin(), f.end());
        if (img.size() != f.size()) {
          return Report::fail("embedding", "embedding into " + G.name() + " is not injective");
        }
        for (std::int64_t a = 0; a < n; ++a) {
          for (std::int64_t b = 0; b < n; ++b) {
            if (f[common.multiply(a, b)] != G.multiply(f[a], f[b])) {
              return Report::fail("embedding", "embedding into " + G.name()
                                                   + " is not a homomorphism at ("
                                                   + common.element_name(a) + ","
                                                   + common.element_name(b) + ")");
            }
          }
        }
      }
      for (std::size_t l = 1; l < factors.size(); ++l) {
        for (std::int64_t a = 0; a < n; ++a) {
          for (std::int64_t b = 0; b < n; ++b) {
            auto d0 = factors[0].distance(embed[0][a], embed[0][b]);
            auto d1 = factors[l].distance(embed[l][a], embed[l][b]);
            if (d0 != d1) {
              return Report::fail("agreement",
                                  "metrics disagree on A at (" + common.element_name(a) + ","
                                      + common.element_name(b) + "): " + factors[0].name()
                                      + " gives " + to_string(d0) + ", " + factors[l].name()
                                      + " gives " + to_string(d1));
            }
          }
        }
      }
      return Report::pass();
    }

    FiniteAmalgam amalgam() const {
      auto r = check();
      if (!r) {
        throw std::invalid_argument("amalgam system: " + r.to_string());
      }
      std::vector<FactorPtr<std::int64_t>> fs;
      for (auto const& G : factors) {
        fs.push_back(std::make_shared<FiniteFactor>(G));
      }
      // back[l][x] = index of x in A, or -1
      std::vector<std::vector<std::int64_t>> back;
      for (std::size_t l = 0; l < factors.size(); ++l) {
        back.emplace_back(factors[l].order(), -1);
        for (std::size_t a = 0; a < embed[l].size(); ++a) {
          back[l][embed[l][a]] = static_cast<std::int64_t>(a);
        }
      }
      CommonSubgroup<std::int64_t> C;
      auto                         emb = embed;
      C.project = [back, emb](int l, std::int64_t const& x) -> std::optional<std::int64_t> {
        auto a = back[l - 1][x];
        if (a < 0) {
          return std::nullopt;
        }
        return emb[0][a];
      };
      C.embed = [back, emb](int l, std::int64_t const& c) {
        return emb[l - 1][back[0][c]];
      };
      for (std::size_t a = 0; a < common.order(); ++a) {
        C.candidates.push_back(embed[0][a]);
      }
      std::sort(C.candidates.begin(), C.candidates.end());
      C.finite = true;
      return FiniteAmalgam(std::move(fs), std::move(C));
    }
  };

  // A = {e}
  inline AmalgamSystem free_product_system(std::vector<FiniteMetricGroup> factors) {
    AmalgamSystem S{std::move(factors), cyclic_group("1", {Rational(0)}, {"e"}), {}};
    for (auto const& G : S.factors) {
      S.embed.push_back({G.identity()});
    }
    return S;
  }

  // The amalgam metric is a metric on the finite union alphabet.
  inline Report check_union_metric(FiniteAmalgam const& S) {
    auto G = S.alphabet();
    for (auto const& x : G) {
      for (auto const& y : G) {
        auto d = S.distance(x, y);
        if ((x == y) != (d == Rational(0))) {
          return Report::fail("positivity", S.letter_name(x) + "," + S.letter_name(y));
        }
        if (d != S.distance(y, x)) {
          return Report::fail("symmetry", S.letter_name(x) + "," + S.letter_name(y));
        }
        for (auto const& z : G) {
          if (S.distance(x, z) > d + S.distance(y, z)) {
            return Report::fail("triangle", S.letter_name(x) + "," + S.letter_name(y) + ","
                                                + S.letter_name(z));
          }
        }
      }
    }
    return Report::pass();
  }

  // Factor tsi checks, embedding and agreement checks, then the union metric.
  inline Report check_amalgam_system(AmalgamSystem const& S) {
    for (auto const& G : S.factors) {
      auto r = validate_tsi_metric(G);
      if (!r) {
        r.message = G.name() + ": " + r.message;
        return r;
      }
    }
    auto r = S.check();
    if (!r) {
      return r;
    }
    return check_union_metric(S.amalgam());
  }

}  // namespace graev
