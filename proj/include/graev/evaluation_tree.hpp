#pragma once

#include <algorithm>  // for max
#include <cstddef>    // for size_t
#include <optional>   // for optional
#include <stdexcept>  // for invalid_argument
#include <string>     // for string
#include <utility>    // for move
#include <vector>     // for vector

#include "amalgam.hpp"  // for Amalgam, Letter
#include "words.hpp"    // for IndexSet, Label, Report, Word

namespace graev {

  // Rooted tree of intervals; node 0 is the root.  "s below t" (s ≺ t) means
  // s is a proper descendant of t.
  class EvaluationTree {
   public:
    struct Node {
      IndexSet         interval;
      int              parent = -1;
      std::vector<int> children;
    };

    EvaluationTree() : EvaluationTree(0) {}
    explicit EvaluationTree(std::size_t n) : _n(n) {
      _nodes.push_back({IndexSet::interval(1, n), -1, {}});
    }

    int add(int parent, IndexSet I) {
      int id = static_cast<int>(_nodes.size());
      _nodes.push_back({std::move(I), parent, {}});
      _nodes.at(parent).children.push_back(id);
      return id;
    }

    std::size_t word_length() const noexcept {
      return _n;
    }
    std::size_t size() const noexcept {
      return _nodes.size();
    }
    Node const& node(int t) const {
      return _nodes.at(t);
    }
    IndexSet const& interval(int t) const {
      return _nodes.at(t).interval;
    }
    void set_interval(int t, IndexSet I) {
      _nodes.at(t).interval = std::move(I);
    }

    int depth(int t) const {
      int d = 0;
      for (int s = t; _nodes[s].parent >= 0; s = _nodes[s].parent) {
        ++d;
      }
      return d;
    }
    int height() const {
      int h = 0;
      for (int t = 0; t < static_cast<int>(size()); ++t) {
        h = std::max(h, depth(t));
      }
      return h;
    }
    bool below(int s, int t) const {
      for (int u = _nodes.at(s).parent; u >= 0; u = _nodes[u].parent) {
        if (u == t) {
          return true;
        }
      }
      return false;
    }
    bool is_leaf(int t) const {
      return _nodes.at(t).children.empty();
    }

    // R_t = I_t minus the intervals of all nodes below t
    IndexSet residual(int t) const {
      IndexSet R = interval(t);
      for (int s = 0; s < static_cast<int>(size()); ++s) {
        if (below(s, t)) {
          R = R.minus(interval(s));
        }
      }
      return R;
    }

    // nodes of the given depth, left to right
    std::vector<int> level(int h) const {
      std::vector<int> out;
      for (int t = 0; t < static_cast<int>(size()); ++t) {
        if (depth(t) == h) {
          out.push_back(t);
        }
      }
      std::sort(out.begin(), out.end(), [this](int a, int b) {
        return key(a) < key(b);
      });
      return out;
    }

    std::string render() const {
      std::string s;
      render_rec(0, 0, s);
      return s;
    }

   private:
    std::size_t key(int t) const {
      return interval(t).empty() ? 0 : interval(t).m();
    }
    void render_rec(int t, int ind, std::string& s) const {
      s += std::string(2 * ind, ' ') + (t == 0 ? "root" : "node " + std::to_string(t))
           + "  I=" + interval(t).to_string() + "  R=" + residual(t).to_string() + "\n";
      auto ch = _nodes[t].children;
      std::sort(ch.begin(), ch.end(), [this](int a, int b) { return key(a) < key(b); });
      for (int c : ch) {
        render_rec(c, ind + 1, s);
      }
    }

    std::size_t       _n;
    std::vector<Node> _nodes;
  };

  namespace detail {
    // zeta^[F] when it lies in A
    template <typename E>
    std::optional<Letter<E>> value_in_common(Amalgam<E> const&             S,
                                             Word<Letter<E>> const&        w,
                                             IndexSet const&               F) {
      auto r = S.reduce(subword(w, F));
      if (r.empty()) {
        return S.identity();
      }
      if (r.size() == 1 && S.in_common(r(1))) {
        return r(1);
      }
      return std::nullopt;
    }
  }  // namespace detail

  // Items (i)-(vi), and (vii)-(viii) when balanced is set.  slim additionally
  // asks for zeta^[I_t] = e at every node.
  template <typename E>
  Report validate_evaluation_tree(Amalgam<E> const&      S,
                                  Word<Letter<E>> const& zeta,
                                  Label const&           l,
                                  EvaluationTree const&  T,
                                  bool                   balanced = true,
                                  bool                   slim     = false) {
    std::size_t const n = zeta.size();
    int const         N = static_cast<int>(T.size());
    if (l.size() != n) {
      return Report::fail("label", "label length differs from word length");
    }
    for (std::size_t i = 1; i <= n; ++i) {
      if (zeta(i).factor != 0 && l(i) != zeta(i).factor) {
        return Report::fail("label", "position " + std::to_string(i)
                                         + " lies outside A but has label "
                                         + std::to_string(l(i)));
      }
    }
    for (int t = 0; t < N; ++t) {
      auto const& I = T.interval(t);
      if (!I.is_interval() || (t != 0 && I.empty()) || (!I.empty() && I.M() > n)) {
        return Report::fail("shape", "node " + std::to_string(t) + " has bad interval "
                                         + I.to_string());
      }
    }
    if (T.interval(0) != IndexSet::interval(1, n)) {
      return Report::fail("i", "root interval " + T.interval(0).to_string() + " is not [1,"
                                   + std::to_string(n) + "]");
    }
    for (int t = 0; t < N; ++t) {
      auto v = detail::value_in_common(S, zeta, T.interval(t));
      if (!v) {
        return Report::fail("ii", "value on " + T.interval(t).to_string() + " is not in A");
      }
      if (slim && !S.is_identity(*v)) {
        return Report::fail("slim", "value on " + T.interval(t).to_string() + " is "
                                        + S.letter_name(*v) + ", not e");
      }
    }
    for (int t = 1; t < N; ++t) {
      auto const& I = T.interval(t);
      if (zeta(I.m()).factor == 0 && l(I.m()) != 0) {
        return Report::fail("iii", "left end " + std::to_string(I.m()) + " of " + I.to_string());
      }
      if (zeta(I.M()).factor == 0 && l(I.M()) != 0) {
        return Report::fail("iii", "right end " + std::to_string(I.M()) + " of " + I.to_string());
      }
    }
    for (int s = 0; s < N; ++s) {
      for (int t = 0; t < N; ++t) {
        if (s == t) {
          continue;
        }
        if (T.depth(t) <= T.depth(s) && T.interval(s).intersects(T.interval(t))
            && !T.below(s, t)) {
          return Report::fail("iv", "intervals " + T.interval(s).to_string() + " and "
                                        + T.interval(t).to_string() + " meet out of order");
        }
        if (t != 0 && T.below(s, t)) {
          auto const& Is = T.interval(s);
          auto const& It = T.interval(t);
          if (!(It.m() < Is.m() && Is.M() < It.M())) {
            return Report::fail("v", Is.to_string() + " is not strictly inside "
                                         + It.to_string());
          }
        }
      }
    }
    for (int t = 0; t < N; ++t) {
      if (!S.is_multipliable_set(zeta, T.residual(t))) {
        return Report::fail("vi", "residual " + T.residual(t).to_string()
                                      + " is not multipliable");
      }
    }
    if (!balanced) {
      return Report::pass();
    }
    if (N > 1) {
      for (int t = 0; t < N; ++t) {
        for (auto const& J : maximal_subintervals(T.residual(t))) {
          bool ok = false;
          for (auto i : J) {
            ok = ok || l(i) != 0;
          }
          if (!ok) {
            return Report::fail("vii", "maximal subinterval " + J.to_string()
                                           + " of a residual carries only zero labels");
          }
        }
      }
    }
    for (int s = 1; s < N; ++s) {
      for (int t = 0; t < N; ++t) {
        if (!T.below(s, t)) {
          continue;
        }
        auto const& Is = T.interval(s);
        auto        R  = T.residual(t);
        if (Is.m() > 1 && R.contains(Is.m() - 1) && l(Is.m() - 1) == 0) {
          return Report::fail("viii", "position " + std::to_string(Is.m() - 1)
                                          + " left of " + Is.to_string() + " has label 0");
        }
        if (R.contains(Is.M() + 1) && l(Is.M() + 1) == 0) {
          return Report::fail("viii", "position " + std::to_string(Is.M() + 1)
                                          + " right of " + Is.to_string() + " has label 0");
        }
      }
    }
    return Report::pass();
  }

  template <typename E>
  Report validate_evaluation_tree(Amalgam<E> const&      S,
                                  Word<Letter<E>> const& zeta,
                                  EvaluationTree const&  T,
                                  bool                   balanced = true,
                                  bool                   slim     = false) {
    return validate_evaluation_tree(S, zeta, S.canonical_label(zeta), T, balanced, slim);
  }

  // Interval I with zeta^[I] in A, I multipliable, an external letter in I,
  // neighbours of I labelled nonzero and zero labels at any endpoint in A.
  // Built from the first run of same-factor external letters whose product
  // falls into A, widened up to the nearest nonzero labels.
  template <typename E>
  IndexSet find_congruent_interval(Amalgam<E> const&      S,
                                   Word<Letter<E>> const& zeta,
                                   Label const&           l) {
    if (!S.is_trivial(zeta)) {
      throw std::invalid_argument("find_congruent_interval: word is not trivial");
    }
    auto ext = S.external_letters(zeta).values();
    if (ext.empty()) {
      throw std::invalid_argument("find_congruent_interval: no external letters");
    }
    std::size_t const        n = zeta.size();
    std::optional<IndexSet>  J;
    for (std::size_t a = 0; a < ext.size() && !J;) {
      std::size_t b = a;
      while (b + 1 < ext.size() && zeta(ext[b + 1]).factor == zeta(ext[a]).factor) {
        ++b;
      }
      auto I = IndexSet::interval(ext[a], ext[b]);
      if (detail::value_in_common(S, zeta, I)) {
        J = I;
      }
      a = b + 1;
    }
    if (!J) {
      throw std::logic_error("find_congruent_interval: no run evaluates into A");
    }
    std::size_t jl = 1;
    for (std::size_t i = J->m(); i-- > 1;) {
      if (l(i) != 0) {
        jl = i + 1;
        break;
      }
    }
    std::size_t jr = n;
    for (std::size_t i = J->M() + 1; i <= n; ++i) {
      if (l(i) != 0) {
        jr = i - 1;
        break;
      }
    }
    return IndexSet::interval(jl, jr);
  }

  // Balanced evaluation tree by induction on the number of external letters:
  // collapse a congruent interval to one letter, recurse, re-inflate.
  template <typename E>
  EvaluationTree build_balanced_evaluation_tree(Amalgam<E> const&      S,
                                                Word<Letter<E>> const& zeta,
                                                Label const&           l) {
    if (!S.is_trivial(zeta)) {
      throw std::invalid_argument("build_balanced_evaluation_tree: word is not trivial, value "
                                  + S.word_name(S.normal_form(zeta)));
    }
    std::size_t const n = zeta.size();
    if (S.external_letters(zeta).empty()) {
      return EvaluationTree(n);
    }
    auto              I = find_congruent_interval(S, zeta, l);
    std::size_t const p = I.size();
    if (p == n) {
      return EvaluationTree(n);
    }
    int lambda0 = 0;
    for (auto i : I) {
      if (zeta(i).factor != 0) {
        lambda0 = l(i);
        break;
      }
    }
    std::size_t const              mI = I.m();
    std::vector<Letter<E>>         xi;
    std::vector<int>               lx;
    for (std::size_t i = 1; i < mI; ++i) {
      xi.push_back(zeta(i));
      lx.push_back(l(i));
    }
    xi.push_back(*detail::value_in_common(S, zeta, I));
    lx.push_back(lambda0);
    for (std::size_t i = I.M() + 1; i <= n; ++i) {
      xi.push_back(zeta(i));
      lx.push_back(l(i));
    }
    auto Tx = build_balanced_evaluation_tree(S, Word<Letter<E>>(xi), Label(lx));

    EvaluationTree T(n);
    // copy Tx node by node (parents precede children), re-inflating intervals
    std::vector<int> id(Tx.size(), 0);
    for (int t = 1; t < static_cast<int>(Tx.size()); ++t) {
      auto const& J = Tx.interval(t);
      IndexSet    K;
      if (J.M() < mI) {
        K = J;
      } else if (J.m() <= mI) {
        K = IndexSet::interval(J.m(), J.M() + p - 1);
      } else {
        K = IndexSet::interval(J.m() + p - 1, J.M() + p - 1);
      }
      id[t] = T.add(id[Tx.node(t).parent], K);
    }
    // deepest node of Tx whose interval holds m(I)
    int t0 = 0;
    for (int t = 0; t < static_cast<int>(Tx.size()); ++t) {
      if (Tx.interval(t).contains(mI) && Tx.depth(t) > Tx.depth(t0)) {
        t0 = t;
      }
    }
    T.add(id[t0], I);
    return T;
  }

  template <typename E>
  EvaluationTree build_balanced_evaluation_tree(Amalgam<E> const& S, Word<Letter<E>> const& zeta) {
    return build_balanced_evaluation_tree(S, zeta, S.canonical_label(zeta));
  }

}  // namespace graev
