#pragma once

#include <algorithm>  // for find, sort, unique
#include <cstddef>    // for size_t
#include <cstdint>    // for int64_t
#include <map>        // for map
#include <optional>   // for optional
#include <stdexcept>  // for invalid_argument
#include <string>     // for string
#include <utility>    // for move
#include <vector>     // for vector

#include "rational.hpp"  // for Rational
#include "words.hpp"     // for Report

namespace graev {

  using Table  = std::vector<std::vector<std::size_t>>;
  using Matrix = std::vector<std::vector<Rational>>;

  namespace detail {
    inline std::string idx(std::size_t i) {
      return std::to_string(i);
    }
  }  // namespace detail

  // Checks closure, identity, inverses and associativity of a Cayley table;
  // the first violation is reported with its witnesses.
  inline Report validate_group(Table const& table) {
    std::size_t const n = table.size();
    if (n == 0) {
      return Report::fail("shape", "empty table");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (table[i].size() != n) {
        return Report::fail("shape", "row " + detail::idx(i) + " has "
                                         + detail::idx(table[i].size())
                                         + " entries, expected " + detail::idx(n));
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (table[i][j] >= n) {
          return Report::fail("closure", "entry (" + detail::idx(i) + ","
                                             + detail::idx(j) + ") out of range");
        }
      }
    }
    std::optional<std::size_t> e;
    for (std::size_t c = 0; c < n && !e; ++c) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) {
        ok = table[c][x] == x && table[x][c] == x;
      }
      if (ok) {
        e = c;
      }
    }
    if (!e) {
      return Report::fail("identity", "no two-sided identity");
    }
    for (std::size_t x = 0; x < n; ++x) {
      bool found = false;
      for (std::size_t y = 0; y < n && !found; ++y) {
        found = table[x][y] == *e && table[y][x] == *e;
      }
      if (!found) {
        return Report::fail("inverse", "element " + detail::idx(x) + " has no inverse");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (table[table[i][j]][k] != table[i][table[j][k]]) {
            return Report::fail("associativity",
                                "(" + detail::idx(i) + "," + detail::idx(j) + ","
                                    + detail::idx(k) + ")");
          }
        }
      }
    }
    return Report::pass();
  }

  // A finite group given by its Cayley table, with a rational distance matrix.
  // The table must describe a group; whether the matrix is a two-sided
  // invariant metric is a separate question (validate_tsi_metric).
  class FiniteMetricGroup {
   public:
    using element_type = std::int64_t;

    FiniteMetricGroup() = default;

    FiniteMetricGroup(std::string              name,
                      std::vector<std::string> names,
                      Table                    table,
                      Matrix                   metric)
        : _name(std::move(name)),
          _names(std::move(names)),
          _table(std::move(table)),
          _metric(std::move(metric)) {
      auto r = validate_group(_table);
      if (!r) {
        throw std::invalid_argument("group " + _name + ": " + r.to_string());
      }
      std::size_t const n = _table.size();
      if (_names.size() != n) {
        throw std::invalid_argument("group " + _name + ": " + std::to_string(_names.size())
                                    + " names for " + std::to_string(n) + " elements");
      }
      if (_metric.size() != n) {
        throw std::invalid_argument("group " + _name + ": metric has wrong shape");
      }
      for (auto const& row : _metric) {
        if (row.size() != n) {
          throw std::invalid_argument("group " + _name + ": metric has wrong shape");
        }
      }
      for (std::size_t c = 0; c < n; ++c) {
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
          ok = _table[c][x] == x;
        }
        if (ok) {
          _identity = c;
          break;
        }
      }
      _inverse.assign(n, 0);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (_table[x][y] == _identity) {
            _inverse[x] = y;
          }
        }
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (!_index.emplace(_names[x], x).second) {
          throw std::invalid_argument("group " + _name + ": duplicate element name "
                                      + _names[x]);
        }
      }
    }

    std::string const& name() const noexcept {
      return _name;
    }
    std::size_t order() const noexcept {
      return _table.size();
    }
    element_type identity() const noexcept {
      return static_cast<element_type>(_identity);
    }
    element_type multiply(element_type x, element_type y) const {
      return static_cast<element_type>(_table.at(x).at(y));
    }
    element_type inverse(element_type x) const {
      return static_cast<element_type>(_inverse.at(x));
    }
    Rational distance(element_type x, element_type y) const {
      return _metric.at(x).at(y);
    }
    std::string const& element_name(element_type x) const {
      return _names.at(x);
    }
    std::optional<element_type> find(std::string const& nm) const {
      auto it = _index.find(nm);
      if (it == _index.end()) {
        return std::nullopt;
      }
      return static_cast<element_type>(it->second);
    }
    std::vector<std::string> const& names() const noexcept {
      return _names;
    }
    Table const& table() const noexcept {
      return _table;
    }
    Matrix const& metric() const noexcept {
      return _metric;
    }

    element_type power(element_type x, std::int64_t k) const {
      if (k < 0) {
        return power(inverse(x), -k);
      }
      element_type r = identity();
      for (std::int64_t i = 0; i < k; ++i) {
        r = multiply(r, x);
      }
      return r;
    }

   private:
    std::string                        _name;
    std::vector<std::string>           _names;
    Table                              _table;
    Matrix                             _metric;
    std::size_t                        _identity = 0;
    std::vector<std::size_t>           _inverse;
    std::map<std::string, std::size_t> _index;
  };

  // Metric axioms, two-sided invariance and the product inequality
  // d(g1 g2, f1 f2) <= d(g1, f1) + d(g2, f2), all checked exhaustively.
  inline Report validate_tsi_metric(FiniteMetricGroup const& G) {
    auto const  n  = static_cast<std::int64_t>(G.order());
    auto        nm = [&G](std::int64_t x) { return G.element_name(x); };
    for (std::int64_t x = 0; x < n; ++x) {
      for (std::int64_t y = 0; y < n; ++y) {
        auto d = G.distance(x, y);
        if (x == y && d != Rational(0)) {
          return Report::fail("zero-diagonal", "d(" + nm(x) + "," + nm(x) + ") = "
                                                   + to_string(d));
        }
        if (x != y && d <= Rational(0)) {
          return Report::fail("positivity", "d(" + nm(x) + "," + nm(y) + ") = "
                                                + to_string(d));
        }
        if (d != G.distance(y, x)) {
          return Report::fail("symmetry", "d(" + nm(x) + "," + nm(y) + ") = " + to_string(d)
                                              + " but d(" + nm(y) + "," + nm(x)
                                              + ") = " + to_string(G.distance(y, x)));
        }
      }
    }
    for (std::int64_t x = 0; x < n; ++x) {
      for (std::int64_t y = 0; y < n; ++y) {
        for (std::int64_t z = 0; z < n; ++z) {
          if (G.distance(x, z) > G.distance(x, y) + G.distance(y, z)) {
            return Report::fail("triangle", "(" + nm(x) + "," + nm(y) + "," + nm(z)
                                                + "): " + to_string(G.distance(x, z))
                                                + " > " + to_string(G.distance(x, y))
                                                + " + " + to_string(G.distance(y, z)));
          }
        }
      }
    }
    for (std::int64_t g = 0; g < n; ++g) {
      for (std::int64_t x = 0; x < n; ++x) {
        for (std::int64_t y = 0; y < n; ++y) {
          auto d = G.distance(x, y);
          if (G.distance(G.multiply(g, x), G.multiply(g, y)) != d) {
            return Report::fail("left-invariance", "g=" + nm(g) + ", (" + nm(x) + ","
                                                       + nm(y) + ")");
          }
          if (G.distance(G.multiply(x, g), G.multiply(y, g)) != d) {
            return Report::fail("right-invariance", "g=" + nm(g) + ", (" + nm(x) + ","
                                                        + nm(y) + ")");
          }
        }
      }
    }
    for (std::int64_t g1 = 0; g1 < n; ++g1) {
      for (std::int64_t g2 = 0; g2 < n; ++g2) {
        for (std::int64_t f1 = 0; f1 < n; ++f1) {
          for (std::int64_t f2 = 0; f2 < n; ++f2) {
            if (G.distance(G.multiply(g1, g2), G.multiply(f1, f2))
                > G.distance(g1, f1) + G.distance(g2, f2)) {
              return Report::fail("product-inequality", "g=(" + nm(g1) + "," + nm(g2)
                                                            + "), f=(" + nm(f1) + ","
                                                            + nm(f2) + ")");
            }
          }
        }
      }
    }
    return Report::pass();
  }

  // A subset of G closed under products and inverses.
  class Subgroup {
   public:
    using element_type = FiniteMetricGroup::element_type;

    Subgroup() = default;
    Subgroup(FiniteMetricGroup const& G, std::vector<element_type> elems) : _elems(std::move(elems)) {
      std::sort(_elems.begin(), _elems.end());
      _elems.erase(std::unique(_elems.begin(), _elems.end()), _elems.end());
      auto const n = static_cast<element_type>(G.order());
      for (auto x : _elems) {
        if (x < 0 || x >= n) {
          throw std::invalid_argument("subgroup element out of range");
        }
      }
      if (!contains(G.identity())) {
        throw std::invalid_argument("subgroup misses the identity");
      }
      for (auto x : _elems) {
        if (!contains(G.inverse(x))) {
          throw std::invalid_argument("subgroup not closed under inverse at "
                                      + G.element_name(x));
        }
        for (auto y : _elems) {
          if (!contains(G.multiply(x, y))) {
            throw std::invalid_argument("subgroup not closed under product at ("
                                        + G.element_name(x) + "," + G.element_name(y)
                                        + ")");
          }
        }
      }
    }

    static Subgroup trivial(FiniteMetricGroup const& G) {
      return Subgroup(G, {G.identity()});
    }
    static Subgroup whole(FiniteMetricGroup const& G) {
      std::vector<element_type> v;
      for (std::size_t x = 0; x < G.order(); ++x) {
        v.push_back(static_cast<element_type>(x));
      }
      return Subgroup(G, std::move(v));
    }

    bool contains(element_type x) const {
      return std::binary_search(_elems.begin(), _elems.end(), x);
    }
    std::vector<element_type> const& elements() const noexcept {
      return _elems;
    }
    std::size_t size() const noexcept {
      return _elems.size();
    }

   private:
    std::vector<element_type> _elems;
  };

  inline bool is_normal(FiniteMetricGroup const& G, Subgroup const& N) {
    for (std::size_t g = 0; g < G.order(); ++g) {
      auto gi = G.inverse(static_cast<std::int64_t>(g));
      for (auto x : N.elements()) {
        if (!N.contains(G.multiply(G.multiply(static_cast<std::int64_t>(g), x), gi))) {
          return false;
        }
      }
    }
    return true;
  }

  inline Rational diameter(FiniteMetricGroup const& G, Subgroup const& H) {
    Rational best(0);
    for (auto x : H.elements()) {
      for (auto y : H.elements()) {
        best = std::max(best, G.distance(x, y));
      }
    }
    return best;
  }

  // H as a group in its own right, with the restricted metric.  The i-th
  // element of the result is H.elements()[i].
  inline FiniteMetricGroup restrict_to(FiniteMetricGroup const& G,
                                       Subgroup const&          H,
                                       std::string              name) {
    auto const&              el = H.elements();
    std::size_t const        k  = el.size();
    std::vector<std::string> names;
    Table                    table(k, std::vector<std::size_t>(k));
    Matrix                   metric(k, std::vector<Rational>(k));
    auto pos = [&el](std::int64_t x) {
      return static_cast<std::size_t>(std::lower_bound(el.begin(), el.end(), x) - el.begin());
    };
    for (std::size_t i = 0; i < k; ++i) {
      names.push_back(G.element_name(el[i]));
      for (std::size_t j = 0; j < k; ++j) {
        table[i][j]  = pos(G.multiply(el[i], el[j]));
        metric[i][j] = G.distance(el[i], el[j]);
      }
    }
    return FiniteMetricGroup(std::move(name), std::move(names), std::move(table),
                             std::move(metric));
  }

  // The quotient G/N with d0(xN, yN) = min over h1, h2 in N of d(x h1, y h2).
  // Cosets are numbered in order of their least element and named after it.
  // coset_of, when given, receives the quotient map.
  inline FiniteMetricGroup factor_metric(FiniteMetricGroup const&   G,
                                         Subgroup const&            N,
                                         std::vector<std::size_t>* coset_of = nullptr) {
    if (!is_normal(G, N)) {
      throw std::invalid_argument("factor_metric: subgroup is not normal");
    }
    std::size_t const                     n = G.order();
    std::vector<std::size_t>              cls(n, n);
    std::vector<std::int64_t>             reps;
    for (std::size_t x = 0; x < n; ++x) {
      if (cls[x] != n) {
        continue;
      }
      for (auto h : N.elements()) {
        cls[static_cast<std::size_t>(G.multiply(static_cast<std::int64_t>(x), h))] = reps.size();
      }
      reps.push_back(static_cast<std::int64_t>(x));
    }
    std::size_t const        k = reps.size();
    std::vector<std::string> names;
    Table                    table(k, std::vector<std::size_t>(k));
    Matrix                   metric(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
      names.push_back(k == n ? G.element_name(reps[i]) : "[" + G.element_name(reps[i]) + "]");
      for (std::size_t j = 0; j < k; ++j) {
        table[i][j] = cls[static_cast<std::size_t>(G.multiply(reps[i], reps[j]))];
        std::optional<Rational> best;
        for (auto h1 : N.elements()) {
          for (auto h2 : N.elements()) {
            auto d = G.distance(G.multiply(reps[i], h1), G.multiply(reps[j], h2));
            if (!best || d < *best) {
              best = d;
            }
          }
        }
        metric[i][j] = *best;
      }
    }
    if (coset_of) {
      *coset_of = cls;
    }
    return FiniteMetricGroup(G.name() + "/N", std::move(names), std::move(table),
                             std::move(metric));
  }

  // Cyclic group Z/n with d(x, y) = norm[(x - y) mod n].
  inline FiniteMetricGroup cyclic_group(std::string              name,
                                        std::vector<Rational>    norm,
                                        std::vector<std::string> names = {}) {
    std::size_t const n = norm.size();
    if (names.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
      }
    }
    Table  table(n, std::vector<std::size_t>(n));
    Matrix metric(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        table[i][j]  = (i + j) % n;
        metric[i][j] = norm[(i + n - j) % n];
      }
    }
    return FiniteMetricGroup(std::move(name), std::move(names), std::move(table),
                             std::move(metric));
  }

  // d(x, y) = norm[x y^-1] over an arbitrary table.
  inline FiniteMetricGroup from_norm(std::string              name,
                                     std::vector<std::string> names,
                                     Table const&             table,
                                     std::vector<Rational>    norm) {
    std::size_t const n = table.size();
    // borrow the inverse computation from a provisional object
    FiniteMetricGroup tmp(name, names, table, Matrix(n, std::vector<Rational>(n)));
    Matrix            metric(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto q       = tmp.multiply(static_cast<std::int64_t>(i),
                              tmp.inverse(static_cast<std::int64_t>(j)));
        metric[i][j] = norm.at(static_cast<std::size_t>(q));
      }
    }
    return FiniteMetricGroup(std::move(name), std::move(names), table, std::move(metric));
  }

}  // namespace graev
