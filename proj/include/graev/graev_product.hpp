#pragma once

#include <algorithm>   // for sort
#include <cstddef>     // for size_t
#include <functional>  // for function
#include <map>         // for map
#include <memory>      // for shared_ptr
#include <optional>    // for optional
#include <set>         // for set
#include <stdexcept>   // for invalid_argument
#include <string>      // for string
#include <tuple>       // for tuple
#include <utility>     // for move, pair
#include <vector>      // for vector

#include "amalgam.hpp"          // for Amalgam, Letter
#include "evaluation_tree.hpp"  // for EvaluationTree, validate_evaluation_tree
#include "factor.hpp"           // for MetricGroup
#include "rational.hpp"         // for Rational
#include "words.hpp"            // for Word, IndexSet, Report

namespace graev {

  template <typename E>
  struct WordPair {
    Word<Letter<E>> alpha;
    Word<Letter<E>> zeta;

    bool operator==(WordPair const&) const = default;
  };

  template <typename E>
  bool is_f_pair(Amalgam<E> const& S, WordPair<E> const& p, Word<Letter<E>> const& f) {
    return p.alpha.size() == p.zeta.size() && S.normal_form(p.alpha) == S.normal_form(f)
           && S.is_trivial(p.zeta);
  }

  template <typename E>
  bool is_multipliable_pair(Amalgam<E> const& S, WordPair<E> const& p) {
    return S.multipliable(p.alpha, p.zeta) && S.is_trivial(p.zeta);
  }

  template <typename E>
  Report check_slim(Amalgam<E> const& S, WordPair<E> const& p, EvaluationTree const& T) {
    if (!is_multipliable_pair(S, p)) {
      return Report::fail("multipliable", "pair is not multipliable");
    }
    return validate_evaluation_tree(S, p.zeta, T, false, true);
  }

  template <typename E>
  Report check_simple(Amalgam<E> const& S, WordPair<E> const& p, EvaluationTree const& T) {
    auto r = check_slim(S, p, T);
    if (!r) {
      return r;
    }
    for (std::size_t i = 1; i <= p.zeta.size(); ++i) {
      if (S.in_common(p.zeta(i)) && !S.is_identity(p.zeta(i))) {
        return Report::fail("simple", "position " + std::to_string(i) + " holds "
                                          + S.letter_name(p.zeta(i)) + " in A");
      }
    }
    return Report::pass();
  }

  // ---- transfers ----

  namespace detail {
    template <typename E>
    void check_transfer_sequence(Amalgam<E> const&            S,
                                 WordPair<E> const&           p,
                                 std::vector<IndexSet> const& Is,
                                 bool                         right) {
      std::size_t const n = p.zeta.size();
      if (!S.multipliable(p.alpha, p.zeta)) {
        throw std::invalid_argument("transfer: pair is not multipliable");
      }
      for (std::size_t k = 0; k < Is.size(); ++k) {
        auto const& I = Is[k];
        if (I.empty() || !I.is_interval() || I.M() > n) {
          throw std::invalid_argument("transfer: bad interval " + I.to_string());
        }
        if (k > 0 && !(Is[k - 1].M() < I.m())) {
          throw std::invalid_argument("transfer: intervals out of order at " + I.to_string());
        }
        if (!value_in_common(S, p.zeta, I)) {
          throw std::invalid_argument("transfer: value on " + I.to_string() + " is not in A");
        }
      }
      if (!Is.empty() && right && Is.back().M() >= n) {
        throw std::invalid_argument("transfer: last interval reaches the end of the word");
      }
      if (!Is.empty() && !right && Is.front().m() <= 1) {
        throw std::invalid_argument("transfer: first interval starts at 1");
      }
    }
  }  // namespace detail

  // right (a,i)-transfer: alpha(i) a^-1, a alpha(i+1) and the same on zeta
  template <typename E>
  WordPair<E> right_transfer(Amalgam<E> const&            S,
                             WordPair<E>                  p,
                             std::vector<IndexSet> const& Is) {
    detail::check_transfer_sequence(S, p, Is, true);
    for (auto const& I : Is) {
      auto a  = *detail::value_in_common(S, p.zeta, I);
      auto ai = S.inverse(a);
      auto i  = I.M();
      p.alpha(i)     = S.multiply(p.alpha(i), ai);
      p.zeta(i)      = S.multiply(p.zeta(i), ai);
      p.alpha(i + 1) = S.multiply(a, p.alpha(i + 1));
      p.zeta(i + 1)  = S.multiply(a, p.zeta(i + 1));
    }
    return p;
  }

  // left transfers, applied from the last interval to the first
  template <typename E>
  WordPair<E> left_transfer(Amalgam<E> const&            S,
                            WordPair<E>                  p,
                            std::vector<IndexSet> const& Is) {
    detail::check_transfer_sequence(S, p, Is, false);
    for (auto it = Is.rbegin(); it != Is.rend(); ++it) {
      auto a  = *detail::value_in_common(S, p.zeta, *it);
      auto ai = S.inverse(a);
      auto i  = it->m();
      p.alpha(i)     = S.multiply(ai, p.alpha(i));
      p.zeta(i)      = S.multiply(ai, p.zeta(i));
      p.alpha(i - 1) = S.multiply(p.alpha(i - 1), a);
      p.zeta(i - 1)  = S.multiply(p.zeta(i - 1), a);
    }
    return p;
  }

  // ---- reductions ----

  // Splits every non-multipliable position i into alpha(i) e / a a^-1 zeta(i)
  // with a in A minimizing d(alpha(i), a) + d(a, zeta(i)).  A is finite, so the
  // minimum is attained and rho does not change.
  template <typename E>
  WordPair<E> to_multipliable(Amalgam<E> const& S, WordPair<E> const& p) {
    if (p.alpha.size() != p.zeta.size()) {
      throw std::invalid_argument("to_multipliable: lengths differ");
    }
    WordPair<E> q;
    for (std::size_t i = 1; i <= p.alpha.size(); ++i) {
      auto const& x = p.alpha(i);
      auto const& z = p.zeta(i);
      if (S.multipliable(x, z)) {
        q.alpha.push_back(x);
        q.zeta.push_back(z);
        continue;
      }
      std::optional<Letter<E>> best;
      Rational                 bv;
      for (auto const& a : S.common_letters()) {
        auto v = S.distance(x, a) + S.distance(a, z);
        if (!best || v < bv) {
          best = a;
          bv   = v;
        }
      }
      q.alpha.push_back(x);
      q.alpha.push_back(S.identity());
      q.zeta.push_back(*best);
      q.zeta.push_back(S.multiply(S.inverse(*best), z));
    }
    return q;
  }

  // Level by level from the deepest, transfer each node's value out of its
  // interval so that every node evaluates to e.
  template <typename E>
  WordPair<E> to_slim(Amalgam<E> const& S, WordPair<E> p, EvaluationTree const& T) {
    auto r = validate_evaluation_tree(S, p.zeta, T, false);
    if (!r) {
      throw std::invalid_argument("to_slim: " + r.to_string());
    }
    std::size_t const n = p.zeta.size();
    for (int h = T.height(); h >= 1; --h) {
      auto                               nodes = T.level(h);
      std::vector<IndexSet>              Is;
      for (int t : nodes) {
        Is.push_back(T.interval(t));
      }
      // touching runs of intervals
      std::vector<std::pair<std::size_t, std::size_t>> cls;
      for (std::size_t k = 0; k < Is.size(); ++k) {
        if (k > 0 && Is[k - 1].M() + 1 == Is[k].m()) {
          cls.back().second = k;
        } else {
          cls.push_back({k, k});
        }
      }
      auto slice = [&Is](std::size_t a, std::size_t b) {
        return std::vector<IndexSet>(Is.begin() + a, Is.begin() + b);
      };
      if (cls.size() >= 2) {
        auto split = cls[cls.size() - 2].second + 1;
        p          = right_transfer(S, p, slice(0, split));
        p          = left_transfer(S, p, slice(split, Is.size()));
      } else if (Is.back().M() < n) {
        p = right_transfer(S, p, Is);
      } else if (Is.front().m() > 1) {
        p = left_transfer(S, p, Is);
      } else {
        p = right_transfer(S, p, slice(0, Is.size() - 1));
      }
    }
    return p;
  }

  // Pushes every A-letter of zeta toward the nearest external letter of its
  // residual piece, leaving e behind.
  template <typename E>
  WordPair<E> to_simple(Amalgam<E> const& S, WordPair<E> p, EvaluationTree const& T) {
    auto r = check_slim(S, p, T);
    if (!r) {
      throw std::invalid_argument("to_simple: " + r.to_string());
    }
    std::size_t const n   = p.zeta.size();
    auto              ext = S.external_letters(p.zeta);
    std::vector<std::size_t> U, V;
    bool                     degenerate = false;
    for (int t = 0; t < static_cast<int>(T.size()) && !degenerate; ++t) {
      for (auto const& J : maximal_subintervals(T.residual(t))) {
        std::vector<std::size_t> F;
        for (auto i : J) {
          if (ext.contains(i)) {
            F.push_back(i);
          }
        }
        if (F.empty()) {
          degenerate = true;
          break;
        }
        for (std::size_t i = J.m(); i <= F.back(); ++i) {
          if (!ext.contains(i)) {
            U.push_back(i);
          }
        }
        for (std::size_t i = F.back(); i <= J.M(); ++i) {
          if (!ext.contains(i)) {
            V.push_back(i);
          }
        }
      }
    }
    auto singletons = [](std::vector<std::size_t> v) {
      std::sort(v.begin(), v.end());
      std::vector<IndexSet> out;
      for (auto i : v) {
        out.push_back(IndexSet{i});
      }
      return out;
    };
    if (degenerate) {
      if (T.size() != 1) {
        throw std::invalid_argument("to_simple: tree is not balanced");
      }
      std::vector<std::size_t> all;
      for (std::size_t i = 1; i < n; ++i) {
        all.push_back(i);
      }
      return right_transfer(S, p, singletons(all));
    }
    p = right_transfer(S, p, singletons(U));
    return left_transfer(S, p, singletons(V));
  }

  // xi(i) = alpha(i) on the list except j0; xi(j0) collects the inverses so
  // that the product over the list is e.
  template <typename E>
  Word<Letter<E>> symmetrize(Amalgam<E> const&      S,
                             WordPair<E> const&     p,
                             IndexSet const&        list,
                             std::size_t            j0) {
    if (!list.contains(j0)) {
      throw std::invalid_argument("symmetrize: j0 not in the list");
    }
    if (!S.is_multipliable_set(p.alpha, list)) {
      throw std::invalid_argument("symmetrize: alpha is not multipliable on "
                                  + list.to_string());
    }
    if (list.size() == 1) {
      return p.zeta;
    }
    auto xi = p.zeta;
    auto const& v  = list.values();
    std::size_t k0 = static_cast<std::size_t>(std::find(v.begin(), v.end(), j0) - v.begin());
    Letter<E>   x  = S.identity();
    for (std::size_t k = k0; k-- > 0;) {
      x = S.multiply(x, S.inverse(p.alpha(v[k])));
    }
    for (std::size_t k = v.size(); k-- > k0 + 1;) {
      x = S.multiply(x, S.inverse(p.alpha(v[k])));
    }
    for (auto i : v) {
      xi(i) = i == j0 ? x : p.alpha(i);
    }
    return xi;
  }

  // as above, after checking that the list is admissible for node t
  template <typename E>
  Word<Letter<E>> symmetrize(Amalgam<E> const&     S,
                             WordPair<E> const&    p,
                             EvaluationTree const& T,
                             int                   t,
                             IndexSet const&       list,
                             std::size_t           j0) {
    auto R = T.residual(t);
    for (auto i : list) {
      if (!R.contains(i)) {
        throw std::invalid_argument("symmetrize: " + std::to_string(i) + " is not in R_t");
      }
    }
    for (auto i : R) {
      if (!S.is_identity(p.zeta(i)) && !list.contains(i)) {
        throw std::invalid_argument("symmetrize: position " + std::to_string(i)
                                    + " is not e and missing from the list");
      }
    }
    return symmetrize(S, p, list, j0);
  }

  // One symmetrization per node, over the external letters of R_t with j0
  // the first of them.
  template <typename E>
  WordPair<E> to_symmetric(Amalgam<E> const& S, WordPair<E> p, EvaluationTree const& T) {
    for (int t = 0; t < static_cast<int>(T.size()); ++t) {
      std::vector<std::size_t> L;
      for (auto i : T.residual(t)) {
        if (!S.in_common(p.zeta(i))) {
          L.push_back(i);
        }
      }
      if (L.size() >= 2) {
        p.zeta = symmetrize(S, p, T, t, IndexSet(L), L.front());
      }
    }
    return p;
  }

  // ---- symmetric pairs ----

  // A symmetric zeta for alpha: a non-crossing partition of [1,n] into blocks
  // on which alpha is multipliable, and a distinguished position per block.
  template <typename E>
  struct SymmetricPair {
    Word<Letter<E>>          zeta;
    std::vector<IndexSet>    blocks;
    std::vector<std::size_t> js;
  };

  namespace detail {
    using Block     = std::vector<std::size_t>;
    using Partition = std::vector<Block>;

    // non-crossing partitions of [l, r]: choose the block of l, then
    // partition each gap of that block and the tail independently
    inline std::vector<Partition> nc_partitions(std::size_t                               l,
                                                std::size_t                               r,
                                                std::function<bool(Block const&)> const& ok) {
      if (l > r) {
        return {Partition{}};
      }
      std::vector<Partition> out;
      std::size_t const      span = r - l;
      for (std::size_t mask = 0; mask < (std::size_t(1) << span); ++mask) {
        Block block{l};
        for (std::size_t b = 0; b < span; ++b) {
          if (mask >> b & 1) {
            block.push_back(l + 1 + b);
          }
        }
        if (!ok(block)) {
          continue;
        }
        std::vector<Partition> combos{Partition{block}};
        for (std::size_t k = 0; k < block.size(); ++k) {
          std::size_t lo = block[k] + 1;
          std::size_t hi = k + 1 < block.size() ? block[k + 1] - 1 : r;
          if (lo > hi) {
            continue;
          }
          auto                   sub = nc_partitions(lo, hi, ok);
          std::vector<Partition> next;
          for (auto const& c : combos) {
            for (auto const& s : sub) {
              auto x = c;
              x.insert(x.end(), s.begin(), s.end());
              next.push_back(std::move(x));
            }
          }
          combos = std::move(next);
        }
        out.insert(out.end(), combos.begin(), combos.end());
      }
      return out;
    }
  }  // namespace detail

  inline std::vector<std::vector<IndexSet>> noncrossing_partitions(
      std::size_t                                                  n,
      std::function<bool(std::vector<std::size_t> const&)> const& ok) {
    auto                               raw = detail::nc_partitions(1, n, ok);
    std::vector<std::vector<IndexSet>> out;
    for (auto& P : raw) {
      std::vector<IndexSet> blocks;
      for (auto& b : P) {
        blocks.emplace_back(b);
      }
      std::sort(blocks.begin(), blocks.end());
      out.push_back(std::move(blocks));
    }
    return out;
  }

  template <typename E>
  Word<Letter<E>> zeta_from_blocks(Amalgam<E> const&               S,
                                   Word<Letter<E>> const&          alpha,
                                   std::vector<IndexSet> const&    blocks,
                                   std::vector<std::size_t> const& js) {
    WordPair<E> p{alpha, Word<Letter<E>>(alpha.size(), S.identity())};
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].size() >= 2) {
        p.zeta = symmetrize(S, p, blocks[b], js[b]);
      }
    }
    return p.zeta;
  }

  // Slim tree witnessing symmetry: one node per block, nested by span; one
  // top-level block (a singleton when there is one) becomes the root residual.
  inline EvaluationTree partition_tree(std::size_t n, std::vector<IndexSet> const& blocks) {
    EvaluationTree T(n);
    if (n == 0) {
      return T;
    }
    auto span = [&blocks](std::size_t b) {
      return IndexSet::interval(blocks[b].m(), blocks[b].M());
    };
    auto inside = [&](std::size_t a, std::size_t b) {  // span a strictly inside span b
      return a != b && blocks[b].m() < blocks[a].m() && blocks[a].M() < blocks[b].M();
    };
    std::vector<std::size_t> top;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      bool nested = false;
      for (std::size_t c = 0; c < blocks.size(); ++c) {
        nested = nested || inside(b, c);
      }
      if (!nested) {
        top.push_back(b);
      }
    }
    std::size_t root = top.front();
    for (auto b : top) {
      if (blocks[b].size() == 1) {
        root = b;
        break;
      }
    }
    // parents first: order by span length, longest first
    std::vector<std::size_t> order;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (b != root) {
        order.push_back(b);
      }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return span(a).size() > span(b).size();
    });
    std::map<std::size_t, int> node;
    for (auto b : order) {
      int         parent = 0;
      std::size_t best   = 0;
      for (auto c : order) {
        if (inside(b, c) && node.count(c) && (parent == 0 || span(c).size() < best)) {
          parent = node[c];
          best   = span(c).size();
        }
      }
      node[b] = T.add(parent, span(b));
    }
    return T;
  }

  // Every zeta with (alpha, zeta) symmetric, first occurrence kept.
  template <typename E>
  std::vector<SymmetricPair<E>> enumerate_symmetric_pairs(Amalgam<E> const&      S,
                                                          Word<Letter<E>> const& alpha) {
    auto ok = [&S, &alpha](std::vector<std::size_t> const& b) {
      if (b.size() == 1) {
        return true;
      }
      int f = alpha(b[0]).factor;
      for (auto i : b) {
        if (alpha(i).factor == 0 || alpha(i).factor != f) {
          return false;
        }
      }
      return true;
    };
    std::vector<SymmetricPair<E>> out;
    std::set<Word<Letter<E>>>     seen;
    for (auto const& blocks : noncrossing_partitions(alpha.size(), ok)) {
      std::vector<std::size_t> js(blocks.size(), 0);
      std::function<void(std::size_t)> rec = [&](std::size_t b) {
        if (b == blocks.size()) {
          auto z = zeta_from_blocks(S, alpha, blocks, js);
          if (seen.insert(z).second) {
            out.push_back({z, blocks, js});
          }
          return;
        }
        for (auto j : blocks[b]) {
          js[b] = j;
          rec(b + 1);
        }
      };
      rec(0);
    }
    return out;
  }

  // ---- the norm ----

  template <typename E>
  struct GraevResult {
    Rational        value;
    Word<Letter<E>> alpha;
    Word<Letter<E>> zeta;
    std::string     strategy;
    std::size_t     candidates = 0;
  };

  // min over non-crossing multipliable partitions of the sum over blocks of
  // d(product of alpha on the block, e); interval dynamic program.
  template <typename E>
  class NormDP {
   public:
    using L = Letter<E>;

    NormDP(Amalgam<E> const& S, Word<L> const& alpha) : _S(S), _a(alpha) {}

    Rational value() {
      return F(1, _a.size());
    }

    std::vector<IndexSet> blocks() {
      std::vector<IndexSet> out;
      walk_F(1, _a.size(), out);
      std::sort(out.begin(), out.end());
      return out;
    }

   private:
    Rational d0(L const& x) {
      return _S.distance(x, _S.identity());
    }
    bool joins(std::size_t l, std::size_t k) const {
      return _a(l).factor != 0 && _a(l).factor == _a(k).factor;
    }

    Rational F(std::size_t l, std::size_t r) {
      if (l > r) {
        return Rational(0);
      }
      auto key = std::make_pair(l, r);
      if (auto it = _F.find(key); it != _F.end()) {
        return it->second;
      }
      Rational best = d0(_a(l)) + F(l + 1, r);
      for (std::size_t k = l + 1; k <= r; ++k) {
        if (joins(l, k)) {
          best = std::min(best, F(l + 1, k - 1) + B(k, r, _S.multiply(_a(l), _a(k)), l));
        }
      }
      return _F[key] = best;
    }

    // block open with last element j and running product x; l = first element
    Rational B(std::size_t j, std::size_t r, L const& x, std::size_t l) {
      auto key = std::make_tuple(j, r, _a(l).factor, x);
      if (auto it = _B.find(key); it != _B.end()) {
        return it->second;
      }
      Rational best = d0(x) + F(j + 1, r);
      for (std::size_t k = j + 1; k <= r; ++k) {
        if (joins(l, k)) {
          best = std::min(best, F(j + 1, k - 1) + B(k, r, _S.multiply(x, _a(k)), l));
        }
      }
      return _B[key] = best;
    }

    void walk_F(std::size_t l, std::size_t r, std::vector<IndexSet>& out) {
      if (l > r) {
        return;
      }
      auto target = F(l, r);
      if (d0(_a(l)) + F(l + 1, r) == target) {
        out.push_back(IndexSet{l});
        walk_F(l + 1, r, out);
        return;
      }
      for (std::size_t k = l + 1; k <= r; ++k) {
        if (joins(l, k)) {
          auto x = _S.multiply(_a(l), _a(k));
          if (F(l + 1, k - 1) + B(k, r, x, l) == target) {
            walk_F(l + 1, k - 1, out);
            std::vector<std::size_t> blk{l, k};
            walk_B(k, r, x, l, blk, out);
            return;
          }
        }
      }
      throw std::logic_error("NormDP: witness walk failed");
    }

    void walk_B(std::size_t               j,
                std::size_t               r,
                L const&                  x,
                std::size_t               l,
                std::vector<std::size_t>& blk,
                std::vector<IndexSet>&    out) {
      auto target = B(j, r, x, l);
      if (d0(x) + F(j + 1, r) == target) {
        out.emplace_back(blk);
        walk_F(j + 1, r, out);
        return;
      }
      for (std::size_t k = j + 1; k <= r; ++k) {
        if (joins(l, k)) {
          auto y = _S.multiply(x, _a(k));
          if (F(j + 1, k - 1) + B(k, r, y, l) == target) {
            walk_F(j + 1, k - 1, out);
            blk.push_back(k);
            walk_B(k, r, y, l, blk, out);
            return;
          }
        }
      }
      throw std::logic_error("NormDP: witness walk failed");
    }

    Amalgam<E> const&                                       _S;
    Word<L>                                                 _a;
    std::map<std::pair<std::size_t, std::size_t>, Rational> _F;
    std::map<std::tuple<std::size_t, std::size_t, int, L>, Rational> _B;
  };

  // N(f) as the minimum over reduced forms alpha of f and symmetric zeta.
  // The witness zeta takes the first block element as distinguished index.
  template <typename E>
  GraevResult<E> graev_norm(Amalgam<E> const& S, Word<Letter<E>> const& f) {
    auto nf = S.normal_form(f);
    if (nf.empty()) {
      return {Rational(0), {}, {}, "symmetric", 1};
    }
    if (S.num_factors() == 1) {
      // one factor: the norm is the factor metric
      return {S.distance(nf(1), S.identity()), nf, Word<Letter<E>>{S.identity()}, "symmetric", 1};
    }
    std::optional<GraevResult<E>> best;
    std::size_t                   count = 0;
    for (auto const& alpha : S.reduced_forms(nf)) {
      ++count;
      NormDP<E> dp(S, alpha);
      auto      v = dp.value();
      if (!best || v < best->value) {
        auto                     blocks = dp.blocks();
        std::vector<std::size_t> js;
        for (auto const& b : blocks) {
          js.push_back(b.m());
        }
        best = GraevResult<E>{v, alpha, zeta_from_blocks(S, alpha, blocks, js), "symmetric", 0};
      }
    }
    best->candidates = count;
    return *best;
  }

  // Same minimum by explicit enumeration of symmetric pairs (oracle for the DP).
  template <typename E>
  GraevResult<E> graev_norm_enumerated(Amalgam<E> const& S, Word<Letter<E>> const& f) {
    auto nf = S.normal_form(f);
    if (nf.empty()) {
      return {Rational(0), {}, {}, "enumerated", 1};
    }
    std::optional<GraevResult<E>> best;
    std::size_t                   count = 0;
    for (auto const& alpha : S.reduced_forms(nf)) {
      for (auto const& sp : enumerate_symmetric_pairs(S, alpha)) {
        ++count;
        auto v = S.rho(alpha, sp.zeta);
        if (!best || v < best->value) {
          best = GraevResult<E>{v, alpha, sp.zeta, "enumerated", 0};
        }
      }
    }
    best->candidates = count;
    return *best;
  }

  template <typename E>
  Rational graev_distance(Amalgam<E> const&      S,
                          Word<Letter<E>> const& f,
                          Word<Letter<E>> const& g) {
    return graev_norm(S, S.multiply(f, S.inverse(g))).value;
  }

  // min over the letters of a reduced form of d(alpha(i), A)
  template <typename E>
  Rational norm_lower_bound(Amalgam<E> const& S, Word<Letter<E>> const& f) {
    auto alpha = S.normal_form(f);
    if (alpha.empty()) {
      return Rational(0);
    }
    std::optional<Rational> best;
    for (auto const& x : alpha) {
      auto v = S.distance_to_common(x);
      if (!best || v < *best) {
        best = v;
      }
    }
    return *best;
  }

  // Exhaustive search over all multipliable f-pairs of length <= L with letters
  // from the whole finite alphabet.
  template <typename E>
  class BruteForceOracle {
   public:
    using W = Word<Letter<E>>;

    explicit BruteForceOracle(Amalgam<E> const& S) : _S(S), _alphabet(S.alphabet()) {}

    GraevResult<E> norm(W const& f, std::size_t L) {
      auto nf = _S.normal_form(f);
      if (L < nf.size()) {
        throw std::invalid_argument("brute force: L = " + std::to_string(L)
                                    + " is below the length " + std::to_string(nf.size()));
      }
      GraevResult<E> res{Rational(0), {}, {}, "brute", 0};
      if (nf.empty()) {
        return res;
      }
      bool found = false;
      for (std::size_t l = 1; l <= L; ++l) {
        auto const& lv = level(l);
        auto        it = lv.by_value.find(nf);
        if (it == lv.by_value.end()) {
          continue;
        }
        for (auto const& alpha : it->second) {
          for (auto const& zeta : lv.trivial) {
            if (!_S.multipliable(alpha, zeta)) {
              continue;
            }
            ++res.candidates;
            auto v = _S.rho(alpha, zeta);
            if (!found || v < res.value) {
              found     = true;
              res.value = v;
              res.alpha = alpha;
              res.zeta  = zeta;
            }
          }
        }
      }
      return res;
    }

   private:
    struct Level {
      std::map<W, std::vector<W>> by_value;
      std::vector<W>              trivial;
    };

    Level const& level(std::size_t l) {
      if (auto it = _cache.find(l); it != _cache.end()) {
        return it->second;
      }
      Level                         lv;
      std::vector<std::size_t>      idx(l, 0);
      std::size_t const             k = _alphabet.size();
      while (true) {
        std::vector<Letter<E>> v;
        for (auto i : idx) {
          v.push_back(_alphabet[i]);
        }
        W    w(std::move(v));
        auto nf = _S.normal_form(w);
        if (nf.empty()) {
          lv.trivial.push_back(w);
        }
        lv.by_value[nf].push_back(w);
        std::size_t p = 0;
        while (p < l && ++idx[p] == k) {
          idx[p++] = 0;
        }
        if (p == l) {
          break;
        }
      }
      return _cache[l] = std::move(lv);
    }

    Amalgam<E> const&           _S;
    std::vector<Letter<E>>      _alphabet;
    std::map<std::size_t, Level> _cache;
  };

  template <typename E>
  GraevResult<E> brute_force_norm(Amalgam<E> const& S, Word<Letter<E>> const& f, std::size_t L) {
    BruteForceOracle<E> oracle(S);
    return oracle.norm(f, L);
  }

  // A candidate metric on a ball of words: it should extend d on G and stay
  // below the Graev metric.  Both findings are reported separately.
  struct MaximalityReport {
    bool        extends   = true;
    bool        dominated = true;
    std::string message;

    explicit operator bool() const noexcept {
      return extends && dominated;
    }
  };

  template <typename E>
  MaximalityReport check_maximality(
      Amalgam<E> const&                                                          S,
      std::vector<Word<Letter<E>>> const&                                        ball,
      std::function<Rational(Word<Letter<E>> const&, Word<Letter<E>> const&)> const& candidate) {
    MaximalityReport rep;
    auto             as_word = [&S](Letter<E> const& x) { return S.normal_form(Word<Letter<E>>{x}); };
    auto             G       = S.alphabet();
    for (auto const& x : G) {
      for (auto const& y : G) {
        auto c = candidate(as_word(x), as_word(y));
        if (c != S.distance(x, y)) {
          rep.extends = false;
          rep.message = "candidate gives " + to_string(c) + " at (" + S.letter_name(x) + ","
                        + S.letter_name(y) + ") where d is " + to_string(S.distance(x, y));
          break;
        }
      }
      if (!rep.extends) {
        break;
      }
    }
    for (auto const& f : ball) {
      for (auto const& g : ball) {
        auto c = candidate(f, g);
        auto d = graev_distance(S, f, g);
        if (c > d) {
          rep.dominated = false;
          if (rep.message.empty()) {
            rep.message = "candidate gives " + to_string(c) + " at (" + S.word_name(f) + ","
                          + S.word_name(g) + ") above the Graev value " + to_string(d);
          }
          return rep;
        }
      }
    }
    return rep;
  }

  // All elements of length <= len (normal forms), finite systems only.
  template <typename E>
  std::vector<Word<Letter<E>>> ball(Amalgam<E> const& S, std::size_t len) {
    std::set<Word<Letter<E>>> out{Word<Letter<E>>{}};
    std::set<Word<Letter<E>>> frontier{Word<Letter<E>>{}};
    auto                      G = S.alphabet();
    for (std::size_t k = 0; k < len; ++k) {
      std::set<Word<Letter<E>>> next;
      for (auto const& f : frontier) {
        for (auto const& x : G) {
          auto g = S.normal_form(concat(f, Word<Letter<E>>{x}));
          if (g.size() <= len && out.insert(g).second) {
            next.insert(g);
          }
        }
      }
      frontier = std::move(next);
    }
    return {out.begin(), out.end()};
  }

  // The Graev group of an amalgam, usable as a factor of a bigger amalgam.
  template <typename E>
  class AmalgamGroup : public MetricGroup<Word<Letter<E>>> {
   public:
    using W = Word<Letter<E>>;

    AmalgamGroup(std::shared_ptr<Amalgam<E> const> S, std::string name)
        : _S(std::move(S)), _name(std::move(name)) {}

    std::string name() const override {
      return _name;
    }
    W identity() const override {
      return {};
    }
    W multiply(W const& x, W const& y) const override {
      return _S->multiply(x, y);
    }
    W inverse(W const& x) const override {
      return _S->normal_form(_S->inverse(x));
    }
    Rational distance(W const& x, W const& y) const override {
      auto key = std::make_pair(x, y);
      if (auto it = _cache.find(key); it != _cache.end()) {
        return it->second;
      }
      return _cache[key] = graev_distance(*_S, x, y);
    }
    std::string element_name(W const& x) const override {
      return _S->word_name(x);
    }
    std::optional<std::vector<W>> elements() const override {
      return std::nullopt;
    }
    Amalgam<E> const& amalgam() const noexcept {
      return *_S;
    }

   private:
    std::shared_ptr<Amalgam<E> const>   _S;
    std::string                         _name;
    mutable std::map<std::pair<W, W>, Rational> _cache;
  };

}  // namespace graev
