#pragma once

#include <algorithm>   // for sort, min
#include <cstddef>     // for size_t
#include <cstdint>     // for int64_t
#include <functional>  // for function
#include <map>         // for map
#include <optional>    // for optional
#include <stdexcept>   // for invalid_argument
#include <string>      // for string
#include <utility>     // for pair, move
#include <vector>      // for vector

#include "finite_group.hpp"  // for FiniteMetricGroup, Matrix
#include "rational.hpp"      // for Rational
#include "words.hpp"         // for Word, Report

namespace graev {

  // Point 0 is the basepoint e.
  struct PointedMetricSpace {
    std::string              name;
    std::vector<std::string> points;
    Matrix                   metric;

    std::size_t size() const noexcept {
      return points.size();
    }

    Report validate() const {
      std::size_t const n = points.size();
      if (n == 0) {
        return Report::fail("basepoint", "no points");
      }
      if (metric.size() != n) {
        return Report::fail("shape", "metric has " + std::to_string(metric.size()) + " rows");
      }
      for (auto const& row : metric) {
        if (row.size() != n) {
          return Report::fail("shape", "metric row of wrong length");
        }
      }
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          auto d = metric[x][y];
          if ((x == y) != (d == Rational(0)) || d < Rational(0)) {
            return Report::fail("positivity", "d(" + points[x] + "," + points[y] + ") = "
                                                  + to_string(d));
          }
          if (d != metric[y][x]) {
            return Report::fail("symmetry", points[x] + "," + points[y]);
          }
          for (std::size_t z = 0; z < n; ++z) {
            if (metric[x][z] > d + metric[y][z]) {
              return Report::fail("triangle", points[x] + "," + points[y] + "," + points[z]);
            }
          }
        }
      }
      return Report::pass();
    }
  };

  // X with formal inverses glued at e.  Symbol 0 is e, symbols 1..m are the
  // points of X, m+1..2m their inverses (m = |X| - 1).
  class SymmetrizedSpace {
   public:
    using symbol = int;

    SymmetrizedSpace() = default;
    explicit SymmetrizedSpace(PointedMetricSpace X) : _X(std::move(X)) {
      auto r = _X.validate();
      if (!r) {
        throw std::invalid_argument("space " + _X.name + ": " + r.to_string());
      }
    }

    PointedMetricSpace const& base() const noexcept {
      return _X;
    }
    int m() const noexcept {
      return static_cast<int>(_X.size()) - 1;
    }
    std::size_t size() const noexcept {
      return 2 * static_cast<std::size_t>(m()) + 1;
    }
    symbol inv(symbol s) const {
      if (s == 0) {
        return 0;
      }
      return s <= m() ? s + m() : s - m();
    }
    bool is_formal_inverse(symbol s) const noexcept {
      return s > m();
    }
    // index of the underlying point of X
    int point(symbol s) const noexcept {
      return is_formal_inverse(s) ? s - m() : s;
    }
    Rational distance(symbol x, symbol y) const {
      auto const& d = _X.metric;
      if (is_formal_inverse(x) == is_formal_inverse(y) || x == 0 || y == 0) {
        return d[point(x)][point(y)];
      }
      return d[point(x)][0] + d[0][point(y)];
    }
    std::string name(symbol s) const {
      if (is_formal_inverse(s)) {
        return _X.points[point(s)] + "^-1";
      }
      return _X.points[s];
    }
    std::optional<symbol> find(std::string const& nm) const {
      std::string base = nm;
      bool        inv  = false;
      if (base.size() > 3 && base.compare(base.size() - 3, 3, "^-1") == 0) {
        base.resize(base.size() - 3);
        inv = true;
      }
      for (std::size_t i = 0; i < _X.points.size(); ++i) {
        if (_X.points[i] == base) {
          auto s = static_cast<symbol>(i);
          return inv ? this->inv(s) : s;
        }
      }
      return std::nullopt;
    }
    std::vector<symbol> symbols() const {
      std::vector<symbol> v;
      for (std::size_t s = 0; s < size(); ++s) {
        v.push_back(static_cast<symbol>(s));
      }
      return v;
    }

   private:
    PointedMetricSpace _X;
  };

  inline SymmetrizedSpace build_symmetrized_space(PointedMetricSpace X) {
    return SymmetrizedSpace(std::move(X));
  }

  using FreeWord = Word<int>;

  // theta[i-1] = theta(i)
  using Match = std::vector<std::size_t>;

  inline bool is_match(Match const& th) {
    std::size_t const n = th.size();
    for (std::size_t i = 1; i <= n; ++i) {
      auto j = th[i - 1];
      if (j < 1 || j > n || th[j - 1] != i) {
        return false;
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j) {
        if (j < th[i - 1] && th[i - 1] < th[j - 1] && i < j) {
          return false;
        }
      }
    }
    return true;
  }

  namespace detail {
    inline void matches_rec(std::size_t l, std::size_t r, Match& th,
                            std::function<void()> const& done) {
      if (l > r) {
        done();
        return;
      }
      th[l - 1] = l;
      matches_rec(l + 1, r, th, done);
      for (std::size_t k = l + 1; k <= r; ++k) {
        th[l - 1] = k;
        th[k - 1] = l;
        matches_rec(l + 1, k - 1, th, [&, k, r] { matches_rec(k + 1, r, th, done); });
      }
    }
  }  // namespace detail

  // All matches on [1,n] in lexicographic order of the theta array.
  inline std::vector<Match> enumerate_matches(std::size_t n, std::size_t bound = 12) {
    if (n > bound) {
      throw std::invalid_argument("enumerate_matches: n = " + std::to_string(n)
                                  + " exceeds the bound " + std::to_string(bound));
    }
    std::vector<Match> out;
    Match              th(n, 0);
    detail::matches_rec(1, n, th, [&] { out.push_back(th); });
    std::sort(out.begin(), out.end());
    return out;
  }

  inline std::size_t motzkin(std::size_t n) {
    std::vector<std::size_t> M{1, 1};
    for (std::size_t k = 2; k <= n; ++k) {
      std::size_t v = M[k - 1];
      for (std::size_t i = 0; i + 2 <= k; ++i) {
        v += M[i] * M[k - 2 - i];
      }
      M.push_back(v);
    }
    return M[n];
  }

  inline FreeWord theta_word(SymmetrizedSpace const& X, FreeWord const& w, Match const& th) {
    if (w.size() != th.size()) {
      throw std::invalid_argument("theta_word: word of length " + std::to_string(w.size())
                                  + ", match on " + std::to_string(th.size()) + " points");
    }
    std::vector<int> v;
    for (std::size_t i = 1; i <= w.size(); ++i) {
      auto j = th[i - 1];
      if (j == i) {
        v.push_back(0);
      } else if (j > i) {
        v.push_back(w(i));
      } else {
        v.push_back(X.inv(w(j)));
      }
    }
    return FreeWord(std::move(v));
  }

  // free reduction: drop e, cancel x x^-1
  inline FreeWord free_reduce(SymmetrizedSpace const& X, FreeWord const& w) {
    std::vector<int> st;
    for (auto s : w) {
      if (s == 0) {
        continue;
      }
      if (!st.empty() && st.back() == X.inv(s)) {
        st.pop_back();
      } else {
        st.push_back(s);
      }
    }
    return FreeWord(std::move(st));
  }

  inline FreeWord free_inverse(SymmetrizedSpace const& X, FreeWord const& w) {
    std::vector<int> v;
    for (std::size_t i = w.size(); i >= 1; --i) {
      v.push_back(X.inv(w(i)));
    }
    return FreeWord(std::move(v));
  }

  inline Rational free_rho(SymmetrizedSpace const& X, FreeWord const& u, FreeWord const& v) {
    Rational s(0);
    for (std::size_t i = 1; i <= u.size(); ++i) {
      s += X.distance(u(i), v(i));
    }
    return s;
  }

  struct FreeNormResult {
    Rational value;
    FreeWord reduced;
    Match    theta;
  };

  // min over matches theta of rho(w, w^theta), w the reduced form of h.
  // Interval DP: theta(l) = l, or theta(l) = k splitting into (l,k) and (k,r].
  // The witness is the lexicographically least minimizing theta.
  class FreeNormDP {
   public:
    FreeNormDP(SymmetrizedSpace const& X, FreeWord w) : _X(X), _w(std::move(w)) {}

    FreeNormResult run() {
      std::size_t const n = _w.size();
      Match             th(n, 0);
      walk(1, n, th);
      return {F(1, n), _w, th};
    }

   private:
    Rational F(std::size_t l, std::size_t r) {
      if (l > r) {
        return Rational(0);
      }
      auto key = std::make_pair(l, r);
      if (auto it = _memo.find(key); it != _memo.end()) {
        return it->second;
      }
      Rational best = _X.distance(_w(l), 0) + F(l + 1, r);
      for (std::size_t k = l + 1; k <= r; ++k) {
        best = std::min(best, pair_cost(l, k) + F(l + 1, k - 1) + F(k + 1, r));
      }
      return _memo[key] = best;
    }
    Rational pair_cost(std::size_t l, std::size_t k) const {
      return _X.distance(_w(k), _X.inv(_w(l)));
    }
    void walk(std::size_t l, std::size_t r, Match& th) {
      if (l > r) {
        return;
      }
      auto target = F(l, r);
      if (_X.distance(_w(l), 0) + F(l + 1, r) == target) {
        th[l - 1] = l;
        walk(l + 1, r, th);
        return;
      }
      for (std::size_t k = l + 1; k <= r; ++k) {
        if (pair_cost(l, k) + F(l + 1, k - 1) + F(k + 1, r) == target) {
          th[l - 1] = k;
          th[k - 1] = l;
          walk(l + 1, k - 1, th);
          walk(k + 1, r, th);
          return;
        }
      }
      throw std::logic_error("FreeNormDP: witness walk failed");
    }

    SymmetrizedSpace const&                                 _X;
    FreeWord                                                _w;
    std::map<std::pair<std::size_t, std::size_t>, Rational> _memo;
  };

  inline FreeNormResult free_norm(SymmetrizedSpace const& X, FreeWord const& h) {
    return FreeNormDP(X, free_reduce(X, h)).run();
  }

  // oracle: every match of the reduced form
  inline FreeNormResult free_norm_enumerated(SymmetrizedSpace const& X,
                                             FreeWord const&         h,
                                             std::size_t             bound = 12) {
    auto                          w = free_reduce(X, h);
    std::optional<FreeNormResult> best;
    for (auto const& th : enumerate_matches(w.size(), bound)) {
      auto v = free_rho(X, w, theta_word(X, w, th));
      if (!best || v < best->value) {
        best = FreeNormResult{v, w, th};
      }
    }
    return *best;
  }

  inline Rational graev_distance_free(SymmetrizedSpace const& X,
                                      FreeWord const&         f,
                                      FreeWord const&         g) {
    return free_norm(X, concat(f, free_inverse(X, g))).value;
  }

  // The pointed space underlying a finite metric group, identity first.
  // order[k] is the group element behind point k.
  struct GroupSpace {
    SymmetrizedSpace          space;
    std::vector<std::int64_t> order;
    std::vector<int>          point_of;
  };

  inline GroupSpace group_space(FiniteMetricGroup const& G) {
    GroupSpace gs;
    auto const n = static_cast<std::int64_t>(G.order());
    gs.order.push_back(G.identity());
    for (std::int64_t x = 0; x < n; ++x) {
      if (x != G.identity()) {
        gs.order.push_back(x);
      }
    }
    gs.point_of.assign(G.order(), 0);
    PointedMetricSpace X{G.name(), {}, {}};
    for (std::size_t k = 0; k < gs.order.size(); ++k) {
      gs.point_of[gs.order[k]] = static_cast<int>(k);
      X.points.push_back(G.element_name(gs.order[k]));
    }
    for (auto x : gs.order) {
      std::vector<Rational> row;
      for (auto y : gs.order) {
        row.push_back(G.distance(x, y));
      }
      X.metric.push_back(std::move(row));
    }
    gs.space = SymmetrizedSpace(std::move(X));
    return gs;
  }

  // Formal inverses are replaced by group inverses.
  inline FreeWord sharp_word(FiniteMetricGroup const& G, GroupSpace const& gs, FreeWord const& u) {
    std::vector<int> v;
    for (auto s : u) {
      if (gs.space.is_formal_inverse(s)) {
        auto g = gs.order[gs.space.point(s)];
        v.push_back(gs.point_of[G.inverse(g)]);
      } else {
        v.push_back(s);
      }
    }
    return FreeWord(std::move(v));
  }

}  // namespace graev
