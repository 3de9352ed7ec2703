#pragma once

#include <algorithm>  // for sort, includes, max, min
#include <array>      // for array
#include <cstddef>    // for size_t
#include <cstdint>    // for int64_t
#include <map>        // for map
#include <numeric>    // for gcd
#include <optional>   // for optional
#include <set>        // for set
#include <stdexcept>  // for invalid_argument
#include <string>     // for string
#include <utility>    // for move, pair
#include <vector>     // for vector

#include "finite_group.hpp"  // for FiniteMetricGroup, Subgroup, is_normal
#include "rational.hpp"      // for Rational
#include "words.hpp"         // for Report

namespace graev {

  using ElementSet = std::vector<std::int64_t>;  // sorted

  namespace detail {
    inline ElementSet sorted(ElementSet v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return v;
    }
    inline bool subset(ElementSet const& a, ElementSet const& b) {
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }
    inline bool has(ElementSet const& a, std::int64_t x) {
      return std::binary_search(a.begin(), a.end(), x);
    }
    inline ElementSet all_of(FiniteMetricGroup const& G) {
      ElementSet v;
      for (std::size_t i = 0; i < G.order(); ++i) {
        v.push_back(static_cast<std::int64_t>(i));
      }
      return v;
    }
    inline std::string set_name(FiniteMetricGroup const& G, ElementSet const& s) {
      std::string out = "{";
      for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + G.element_name(s[i]);
      }
      return out + "}";
    }
  }  // namespace detail

  // ---- Birkhoff-Kakutani families ----

  struct BKFamily {
    std::vector<ElementSet> levels;  // U_0 = G, ..., U_m = {e}
    bool                    conjugacy_invariant = false;
  };

  inline Report validate_family(FiniteMetricGroup const& G, BKFamily const& F) {
    auto const& U = F.levels;
    if (U.empty()) {
      return Report::fail("levels", "family is empty");
    }
    if (U.front() != detail::all_of(G)) {
      return Report::fail("U0", "U_0 must be the whole group");
    }
    if (U.back() != ElementSet{G.identity()}) {
      return Report::fail("terminal", "the last level must be {e}");
    }
    for (std::size_t i = 0; i < U.size(); ++i) {
      auto const nm = "U_" + std::to_string(i);
      if (U[i] != detail::sorted(U[i])) {
        return Report::fail("levels", nm + " is not a sorted set");
      }
      for (auto x : U[i]) {
        if (x < 0 || x >= static_cast<std::int64_t>(G.order())) {
          return Report::fail("levels", nm + " has an element out of range");
        }
        if (!detail::has(U[i], G.inverse(x))) {
          return Report::fail("symmetric", nm + " misses the inverse of " + G.element_name(x));
        }
      }
      if (!detail::has(U[i], G.identity())) {
        return Report::fail("identity", nm + " misses e");
      }
      if (i + 1 < U.size()) {
        if (!detail::subset(U[i + 1], U[i])) {
          return Report::fail("descending", "U_" + std::to_string(i + 1) + " is not inside " + nm);
        }
        for (auto x : U[i + 1]) {
          for (auto y : U[i + 1]) {
            for (auto z : U[i + 1]) {
              if (!detail::has(U[i], G.multiply(G.multiply(x, y), z))) {
                return Report::fail("cube", "U_" + std::to_string(i + 1) + "^3 is not inside "
                                                + nm);
              }
            }
          }
        }
      }
      if (F.conjugacy_invariant) {
        for (auto x : U[i]) {
          for (std::size_t g = 0; g < G.order(); ++g) {
            auto gg = static_cast<std::int64_t>(g);
            if (!detail::has(U[i], G.multiply(G.multiply(gg, x), G.inverse(gg)))) {
              return Report::fail("conjugacy", nm + " is not conjugation invariant");
            }
          }
        }
      }
    }
    return Report::pass();
  }

  struct BKMetric {
    Matrix            eta;
    Matrix            d;
    FiniteMetricGroup group;
    Report            sandwich;
  };

  // eta(g1, g2) = 2^-n for the largest n with g2^-1 g1 in U_n (0 on the
  // diagonal); d is the shortest-path metric over eta.
  inline BKMetric bk_metric(FiniteMetricGroup const& G, BKFamily const& F) {
    auto r = validate_family(G, F);
    if (!r) {
      throw std::invalid_argument("bk family: " + r.to_string());
    }
    std::size_t const n = G.order();
    Matrix            eta(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          continue;
        }
        auto     q = G.multiply(G.inverse(static_cast<std::int64_t>(j)), static_cast<std::int64_t>(i));
        Rational w(1);
        for (std::size_t k = 1; k < F.levels.size() && detail::has(F.levels[k], q); ++k) {
          w /= 2;
        }
        eta[i][j] = w;
      }
    }
    Matrix d = eta;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          auto via = d[i][k] + d[k][j];
          if (via < d[i][j]) {
            d[i][j] = via;
          }
        }
      }
    }
    auto sandwich = Report::pass();
    for (std::size_t i = 0; i < n && sandwich; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!(eta[i][j] / 2 <= d[i][j] && d[i][j] <= eta[i][j])) {
          sandwich = Report::fail("sandwich", "eta/2 <= d <= eta fails at ("
                                                  + G.element_name(static_cast<std::int64_t>(i))
                                                  + "," + G.element_name(static_cast<std::int64_t>(j))
                                                  + ")");
          break;
        }
      }
    }
    FiniteMetricGroup H(G.name(), G.names(), G.table(), d);
    return {std::move(eta), std::move(d), std::move(H), sandwich};
  }

  // ---- normal subgroups ----

  // All normal subgroups, as sorted element sets, largest first.
  inline std::vector<ElementSet> normal_subgroups(FiniteMetricGroup const& G) {
    std::size_t const       n = G.order();
    std::vector<ElementSet> classes;
    std::vector<bool>       seen(n, false);
    for (std::size_t x = 0; x < n; ++x) {
      if (seen[x]) {
        continue;
      }
      ElementSet c;
      for (std::size_t g = 0; g < n; ++g) {
        auto gg = static_cast<std::int64_t>(g);
        auto y  = G.multiply(G.multiply(gg, static_cast<std::int64_t>(x)), G.inverse(gg));
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = true;
          c.push_back(y);
        }
      }
      classes.push_back(detail::sorted(c));
    }
    if (classes.size() > 20) {
      throw std::invalid_argument("normal_subgroups: too many conjugacy classes");
    }
    std::set<ElementSet> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << classes.size()); ++mask) {
      ElementSet s;
      for (std::size_t k = 0; k < classes.size(); ++k) {
        if (mask >> k & 1) {
          s.insert(s.end(), classes[k].begin(), classes[k].end());
        }
      }
      s = detail::sorted(s);
      if (!detail::has(s, G.identity())) {
        continue;
      }
      bool closed = true;
      for (auto a : s) {
        for (auto b : s) {
          if (!detail::has(s, G.multiply(a, b))) {
            closed = false;
            break;
          }
        }
        if (!closed) {
          break;
        }
      }
      if (closed) {
        out.insert(s);
      }
    }
    std::vector<ElementSet> v(out.begin(), out.end());
    std::stable_sort(v.begin(), v.end(),
                     [](auto const& a, auto const& b) { return a.size() > b.size(); });
    return v;
  }

  // ---- interleaving ----

  // A sits in G1 as A1 and in G2 as A2, matched index by index.
  struct Interleaving {
    BKFamily    first;
    BKFamily    second;
    Report      containments;
    Rational    min_ratio;
    Rational    max_ratio;
    std::size_t pairs = 0;

    bool ok() const {
      return static_cast<bool>(containments) && Rational(1, 8) <= min_ratio
             && max_ratio <= Rational(8);
    }
  };

  namespace detail {
    // indices a with emb[a] in X
    inline std::set<std::size_t> trace(ElementSet const& X, ElementSet const& emb) {
      std::set<std::size_t> out;
      for (std::size_t i = 0; i < emb.size(); ++i) {
        if (has(X, emb[i])) {
          out.insert(i);
        }
      }
      return out;
    }
    inline bool trace_subset(ElementSet const& X, ElementSet const& ex, ElementSet const& Y,
                             ElementSet const& ey) {
      auto tx = trace(X, ex);
      auto ty = trace(Y, ey);
      return std::includes(ty.begin(), ty.end(), tx.begin(), tx.end());
    }
  }  // namespace detail

  // U^(j)_{k+1} cap A inside U^(other)_k cap A for both j.  emb1[a], emb2[a]
  // are the images of the a-th element of A.
  inline Report check_interleaving(BKFamily const& F1, ElementSet const& emb1, BKFamily const& F2,
                                   ElementSet const& emb2) {
    if (F1.levels.size() != F2.levels.size()) {
      return Report::fail("length", "families have different lengths");
    }
    for (std::size_t k = 0; k + 1 < F1.levels.size(); ++k) {
      if (!detail::trace_subset(F1.levels[k + 1], emb1, F2.levels[k], emb2)) {
        return Report::fail("i", "U1_" + std::to_string(k + 1) + " cap A is not inside U2_"
                                     + std::to_string(k) + " cap A");
      }
      if (!detail::trace_subset(F2.levels[k + 1], emb2, F1.levels[k], emb1)) {
        return Report::fail("ii", "U2_" + std::to_string(k + 1) + " cap A is not inside U1_"
                                      + std::to_string(k) + " cap A");
      }
    }
    return Report::pass();
  }

  // Families of normal subgroups built in alternation: the leader drops to
  // its largest admissible proper normal subgroup, the follower takes its
  // largest admissible one.  Admissible means the trace on A lies inside the
  // other family's previous trace.
  inline Interleaving interleave_families(FiniteMetricGroup const& G1, ElementSet const& emb1,
                                          FiniteMetricGroup const& G2, ElementSet const& emb2) {
    if (emb1.size() != emb2.size() || emb1.empty()) {
      throw std::invalid_argument("interleave: A has different orders in the two groups");
    }
    auto pos = [](ElementSet const& emb, std::int64_t x) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < emb.size(); ++i) {
        if (emb[i] == x) {
          return i;
        }
      }
      return std::nullopt;
    };
    for (std::size_t i = 0; i < emb1.size(); ++i) {
      for (std::size_t j = 0; j < emb1.size(); ++j) {
        auto p1 = pos(emb1, G1.multiply(emb1[i], emb1[j]));
        auto p2 = pos(emb2, G2.multiply(emb2[i], emb2[j]));
        if (!p1 || !p2 || *p1 != *p2) {
          throw std::invalid_argument("interleave: the embeddings of A do not match");
        }
      }
    }
    auto const N1 = normal_subgroups(G1);
    auto const N2 = normal_subgroups(G2);
    BKFamily   F1{{detail::all_of(G1)}, true};
    BKFamily   F2{{detail::all_of(G2)}, true};
    ElementSet const E1{G1.identity()}, E2{G2.identity()};
    auto pick = [](std::vector<ElementSet> const& N, ElementSet const& cur, bool strict,
                   ElementSet const& eself, ElementSet const& other, ElementSet const& eother) {
      for (auto const& s : N) {
        if (!detail::subset(s, cur) || (strict && s == cur)) {
          continue;
        }
        if (detail::trace_subset(s, eself, other, eother)) {
          return s;
        }
      }
      return cur;  // unreachable: {e} always qualifies
    };
    bool second_leads = true;
    while (F1.levels.back() != E1 || F2.levels.back() != E2) {
      auto const u1 = F1.levels.back();
      auto const u2 = F2.levels.back();
      bool const s1 = !second_leads && u1 != E1;
      bool const s2 = second_leads && u2 != E2;
      F1.levels.push_back(pick(N1, u1, s1, emb1, u2, emb2));
      F2.levels.push_back(pick(N2, u2, s2, emb2, u1, emb1));
      second_leads = !second_leads;
    }
    Interleaving res{F1, F2, check_interleaving(F1, emb1, F2, emb2), Rational(0), Rational(0), 0};
    auto         d1    = bk_metric(G1, F1).d;
    auto         d2    = bk_metric(G2, F2).d;
    bool         first = true;
    for (std::size_t i = 0; i < emb1.size(); ++i) {
      for (std::size_t j = 0; j < emb1.size(); ++j) {
        if (i == j) {
          continue;
        }
        auto r = d2[static_cast<std::size_t>(emb2[i])][static_cast<std::size_t>(emb2[j])]
                 / d1[static_cast<std::size_t>(emb1[i])][static_cast<std::size_t>(emb1[j])];
        if (first || r < res.min_ratio) {
          res.min_ratio = r;
        }
        if (first || r > res.max_ratio) {
          res.max_ratio = r;
        }
        first = false;
        ++res.pairs;
      }
    }
    if (first) {
      res.min_ratio = res.max_ratio = Rational(1);
    }
    return res;
  }

  // ---- norms ----

  using NormTable = std::map<std::int64_t, Rational>;

  inline NormTable norm_of(FiniteMetricGroup const& G) {
    NormTable N;
    for (std::size_t x = 0; x < G.order(); ++x) {
      N[static_cast<std::int64_t>(x)] = G.distance(static_cast<std::int64_t>(x), G.identity());
    }
    return N;
  }

  // Norm axioms on the elements of `domain` (a subgroup), plus conjugation
  // invariance under the whole of G when tsi is set.
  inline Report validate_norm(FiniteMetricGroup const& G, NormTable const& N,
                              ElementSet const& domain, bool tsi) {
    for (auto x : domain) {
      if (!N.count(x)) {
        return Report::fail("domain", "no value at " + G.element_name(x));
      }
    }
    if (N.at(G.identity()) != Rational(0)) {
      return Report::fail("identity", "N(e) != 0");
    }
    for (auto x : domain) {
      if (N.at(x) < Rational(0) || (x != G.identity() && N.at(x) == Rational(0))) {
        return Report::fail("positive", "N(" + G.element_name(x) + ") is not positive");
      }
      if (N.at(G.inverse(x)) != N.at(x)) {
        return Report::fail("symmetric", "N(" + G.element_name(x) + ") != N of its inverse");
      }
      for (auto y : domain) {
        if (N.at(G.multiply(x, y)) > N.at(x) + N.at(y)) {
          return Report::fail("triangle", "N(" + G.element_name(x) + G.element_name(y)
                                              + ") > N(" + G.element_name(x) + ") + N("
                                              + G.element_name(y) + ")");
        }
      }
      if (tsi) {
        for (std::size_t h = 0; h < G.order(); ++h) {
          auto hh = static_cast<std::int64_t>(h);
          auto c  = G.multiply(G.multiply(hh, x), G.inverse(hh));
          if (N.at(c) != N.at(x)) {
            return Report::fail("conjugacy", "N(" + G.element_name(x) + ") changes under "
                                                 + G.element_name(hh));
          }
        }
      }
    }
    return Report::pass();
  }

  // N(g) = min over a in A of N_A(a) + N_G(a^-1 g)
  inline NormTable extend_norm(FiniteMetricGroup const& G, NormTable const& NG,
                               Subgroup const& A, NormTable const& NA) {
    for (auto a : A.elements()) {
      auto it = NA.find(a);
      if (it == NA.end()) {
        throw std::invalid_argument("extend_norm: N_A undefined at " + G.element_name(a));
      }
      if (it->second > NG.at(a)) {
        throw std::invalid_argument("extend_norm: N_A(" + G.element_name(a) + ") = "
                                    + to_string(it->second) + " exceeds N_G = "
                                    + to_string(NG.at(a)));
      }
    }
    NormTable N;
    for (std::size_t x = 0; x < G.order(); ++x) {
      auto                    g = static_cast<std::int64_t>(x);
      std::optional<Rational> best;
      for (auto a : A.elements()) {
        auto v = NA.at(a) + NG.at(G.multiply(G.inverse(a), g));
        if (!best || v < *best) {
          best = v;
        }
      }
      N[g] = *best;
    }
    return N;
  }

  struct ExtensionReport {
    Report extends;
    Report dominated;
    Report axioms;
    Report conjugacy;  // pass when A is not normal (nothing claimed)
    bool   normal = false;

    bool ok() const {
      return extends && dominated && axioms && conjugacy;
    }
  };

  inline ExtensionReport check_extension(FiniteMetricGroup const& G, NormTable const& NG,
                                         Subgroup const& A, NormTable const& NA,
                                         NormTable const& N) {
    ExtensionReport rep{Report::pass(), Report::pass(), Report::pass(), Report::pass(), false};
    for (auto a : A.elements()) {
      if (N.at(a) != NA.at(a)) {
        rep.extends = Report::fail("extends", "N(" + G.element_name(a) + ") = " + to_string(N.at(a))
                                                  + " but N_A = " + to_string(NA.at(a)));
        break;
      }
    }
    for (auto const& [g, v] : N) {
      if (v > NG.at(g)) {
        rep.dominated = Report::fail("dominated", "N(" + G.element_name(g) + ") > N_G");
        break;
      }
    }
    rep.axioms = validate_norm(G, N, detail::all_of(G), false);
    rep.normal = is_normal(G, A);
    if (rep.normal) {
      rep.conjugacy = validate_norm(G, N, detail::all_of(G), true);
    }
    return rep;
  }

  // ---- Heisenberg ----

  using IntMatrix = std::array<std::array<std::int64_t, 3>, 3>;

  inline IntMatrix mat_mul(IntMatrix const& a, IntMatrix const& b) {
    IntMatrix c{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          c[i][j] += a[i][k] * b[k][j];
        }
      }
    }
    return c;
  }

  // unitriangular inverse
  inline IntMatrix mat_inv(IntMatrix const& a) {
    IntMatrix r{{{1, -a[0][1], a[0][1] * a[1][2] - a[0][2]}, {0, 1, -a[1][2]}, {0, 0, 1}}};
    return r;
  }

  inline IntMatrix mat_pow(IntMatrix const& a, std::int64_t k) {
    if (k < 0) {
      return mat_pow(mat_inv(a), -k);
    }
    IntMatrix r{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (std::int64_t i = 0; i < k; ++i) {
      r = mat_mul(r, a);
    }
    return r;
  }

  struct HeisenbergRow {
    std::int64_t n;
    IntMatrix    commutator;  // x^n y^n x^-n y^-n
    bool         literal;     // equals z^{n^2} with z = I - E13
    bool         central;     // equals c^{n^2} with c = I + E13
    Rational     ratio;       // n^2 / 2n
  };

  struct HeisenbergReport {
    std::vector<HeisenbergRow> rows;
    bool                       literal_holds = true;
    bool                       central_holds = true;
  };

  inline HeisenbergReport heisenberg_obstruction(std::int64_t n_max) {
    if (n_max < 1 || n_max > 50) {
      throw std::invalid_argument("heisenberg: n must lie in [1,50]");
    }
    IntMatrix const x{{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
    IntMatrix const y{{{1, 0, 0}, {0, 1, 1}, {0, 0, 1}}};
    IntMatrix const z{{{1, 0, -1}, {0, 1, 0}, {0, 0, 1}}};
    IntMatrix const c{{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}};
    HeisenbergReport rep;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      auto com = mat_mul(mat_mul(mat_pow(x, n), mat_pow(y, n)),
                         mat_mul(mat_pow(x, -n), mat_pow(y, -n)));
      HeisenbergRow row{n, com, com == mat_pow(z, n * n), com == mat_pow(c, n * n),
                        Rational(n * n, 2 * n)};
      rep.literal_holds = rep.literal_holds && row.literal;
      rep.central_holds = rep.central_holds && row.central;
      rep.rows.push_back(row);
    }
    return rep;
  }

  // ---- circle ----

  struct CircleVerdict {
    bool        conjugate = false;
    std::string reason;
  };

  // Rational angles mod 1: induced-conjugate iff same period or g1 = +-g2.
  inline CircleVerdict circle_induced_conjugacy(Rational g1, Rational g2) {
    auto mod1 = [](Rational q) {
      auto f = q.numerator() / q.denominator();
      q -= Rational(f);
      if (q < Rational(0)) {
        q += Rational(1);
      }
      return q;
    };
    g1 = mod1(g1);
    g2 = mod1(g2);
    auto const p1 = g1.denominator(), p2 = g2.denominator();
    if (g1 == g2) {
      return {true, "g1 = g2"};
    }
    if (mod1(-g1) == g2) {
      return {true, "g1 = -g2 (mod 1)"};
    }
    if (p1 == p2) {
      return {true, "same period " + std::to_string(p1)};
    }
    return {false, "periods " + std::to_string(p1) + " and " + std::to_string(p2) + " differ"};
  }

}  // namespace graev
