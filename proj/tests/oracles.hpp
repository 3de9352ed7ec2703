#pragma once

// Test-only reference computations.  Nothing here calls into the library's
// word machinery: groups are read as raw tables and words are evaluated by
// hand.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "graev/finite_group.hpp"
#include "graev/rational.hpp"

namespace oracle {

  using graev::Rational;

  struct Tab {
    std::vector<std::vector<int>>      mul;
    std::vector<std::vector<Rational>> d;
    int                                e = 0;
    std::vector<int>                   inv;
  };

  inline Tab tab(graev::FiniteMetricGroup const& G) {
    Tab  t;
    auto n = static_cast<int>(G.order());
    t.mul.assign(n, std::vector<int>(n));
    t.d.assign(n, std::vector<Rational>(n));
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        t.mul[x][y] = static_cast<int>(G.table()[x][y]);
        t.d[x][y]   = G.metric()[x][y];
      }
    }
    for (int c = 0; c < n; ++c) {
      bool ok = true;
      for (int x = 0; x < n; ++x) {
        ok = ok && t.mul[c][x] == x;
      }
      if (ok) {
        t.e = c;
      }
    }
    t.inv.assign(n, 0);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (t.mul[x][y] == t.e) {
          t.inv[x] = y;
        }
      }
    }
    return t;
  }

  // (factor, element); factor -1 is the identity
  struct Sym {
    int f = -1;
    int x = 0;
    bool operator==(Sym const&) const = default;
    auto operator<=>(Sym const&) const = default;
  };

  // free product normal form by a stack
  inline std::vector<Sym> evaluate(std::vector<Tab> const& G, std::vector<Sym> const& w) {
    std::vector<Sym> st;
    for (auto s : w) {
      if (s.f < 0 || s.x == G[s.f].e) {
        continue;
      }
      if (!st.empty() && st.back().f == s.f) {
        int y = G[s.f].mul[st.back().x][s.x];
        st.pop_back();
        if (y != G[s.f].e) {
          st.push_back({s.f, y});
        }
      } else {
        st.push_back(s);
      }
    }
    return st;
  }

  inline std::optional<Rational> letter_cost(std::vector<Tab> const& G, Sym a, Sym z) {
    if (a.f < 0 && z.f < 0) {
      return Rational(0);
    }
    if (a.f < 0) {
      return G[z.f].d[z.x][G[z.f].e];
    }
    if (z.f < 0) {
      return G[a.f].d[a.x][G[a.f].e];
    }
    if (a.f != z.f) {
      return std::nullopt;
    }
    return G[a.f].d[a.x][z.x];
  }

  // min rho(alpha, zeta) over letter-wise multipliable pairs of length L
  // with alpha evaluating to f and zeta to e, straight from the definition
  // of the Graev norm on a free product.
  inline Rational free_product_norm(std::vector<Tab> const& G, std::vector<Sym> const& f,
                                    std::size_t L) {
    std::vector<Sym> alphabet{{-1, 0}};
    for (int l = 0; l < static_cast<int>(G.size()); ++l) {
      for (int x = 0; x < static_cast<int>(G[l].mul.size()); ++x) {
        if (x != G[l].e) {
          alphabet.push_back({l, x});
        }
      }
    }
    auto target = evaluate(G, f);
    std::vector<std::vector<Sym>> alphas, zetas;
    std::vector<Sym>              cur(L);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == L) {
        auto v = evaluate(G, cur);
        if (v == target) {
          alphas.push_back(cur);
        }
        if (v.empty()) {
          zetas.push_back(cur);
        }
        return;
      }
      for (auto s : alphabet) {
        cur[i] = s;
        rec(i + 1);
      }
    };
    rec(0);
    std::optional<Rational> best;
    for (auto const& a : alphas) {
      for (auto const& z : zetas) {
        Rational sum(0);
        bool     ok = true;
        for (std::size_t i = 0; i < L && ok; ++i) {
          auto c = letter_cost(G, a[i], z[i]);
          if (!c) {
            ok = false;
          } else {
            sum += *c;
          }
        }
        if (ok && (!best || sum < *best)) {
          best = sum;
        }
      }
    }
    return *best;
  }

  // amalgam metric on the union alphabet: through A when factors differ.
  // emb[l][a] is the image of the a-th element of A in factor l.
  inline Rational amalgam_metric(std::vector<Tab> const& G,
                                 std::vector<std::vector<std::int64_t>> const& emb, int fx, int x,
                                 int fy, int y) {
    if (fx == fy) {
      return G[fx].d[x][y];
    }
    std::optional<Rational> best;
    for (std::size_t a = 0; a < emb[0].size(); ++a) {
      auto v = G[fx].d[x][emb[fx][a]] + G[fy].d[emb[fy][a]][y];
      if (!best || v < *best) {
        best = v;
      }
    }
    return *best;
  }

  // Motzkin numbers by their convolution recurrence
  inline std::uint64_t motzkin(std::size_t n) {
    std::vector<std::uint64_t> M{1, 1};
    for (std::size_t k = 2; k <= n; ++k) {
      std::uint64_t s = M[k - 1];
      for (std::size_t i = 0; i + 2 <= k; ++i) {
        s += M[i] * M[k - 2 - i];
      }
      M.push_back(s);
    }
    return M[n];
  }

  // all involutions of [1,n] with no i < j < th(i) < th(j), by brute force
  inline std::vector<std::vector<std::size_t>> matches(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t>              p(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = i + 1;
    }
    do {
      bool ok = true;
      for (std::size_t i = 1; i <= n && ok; ++i) {
        ok = p[p[i - 1] - 1] == i;
      }
      for (std::size_t i = 1; i <= n && ok; ++i) {
        for (std::size_t j = i + 1; j <= n && ok; ++j) {
          ok = !(i < j && j < p[i - 1] && p[i - 1] < p[j - 1]);
        }
      }
      if (ok) {
        out.push_back(p);
      }
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }

  // free group over a pointed space: letters +k / -k for point k, 0 for e.
  inline Rational sym_dist(std::vector<std::vector<Rational>> const& d, int x, int y) {
    auto pt = [](int s) { return s < 0 ? -s : s; };
    if (x == 0 || y == 0 || (x > 0) == (y > 0)) {
      return d[pt(x)][pt(y)];
    }
    return d[pt(x)][0] + d[0][pt(y)];
  }

  inline std::vector<int> free_reduce(std::vector<int> const& w) {
    std::vector<int> st;
    for (int s : w) {
      if (s == 0) {
        continue;
      }
      if (!st.empty() && st.back() == -s) {
        st.pop_back();
      } else {
        st.push_back(s);
      }
    }
    return st;
  }

  // min over all matches of rho(w, w^theta) on the reduced word
  inline Rational free_norm(std::vector<std::vector<Rational>> const& d, std::vector<int> w) {
    w = free_reduce(w);
    std::optional<Rational> best;
    for (auto const& th : matches(w.size())) {
      Rational s(0);
      for (std::size_t i = 1; i <= w.size(); ++i) {
        auto j = th[i - 1];
        int  z = j == i ? 0 : (j > i ? w[i - 1] : -w[j - 1]);
        s += sym_dist(d, w[i - 1], z);
      }
      if (!best || s < *best) {
        best = s;
      }
    }
    return best ? *best : Rational(0);
  }

}  // namespace oracle
