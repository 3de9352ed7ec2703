#pragma once

#include <algorithm>   // for max, sort
#include <cstddef>     // for size_t
#include <cstdint>     // for int64_t
#include <functional>  // for function
#include <map>         // for map
#include <memory>      // for shared_ptr, make_shared
#include <optional>    // for optional
#include <set>         // for set
#include <stdexcept>   // for invalid_argument, logic_error
#include <string>      // for string
#include <utility>     // for move
#include <vector>      // for vector

#include "amalgam.hpp"          // for Amalgam, FiniteAmalgam, free_product_system
#include "evaluation_tree.hpp"  // for EvaluationTree, build_balanced_evaluation_tree
#include "factor.hpp"           // for FiniteFactor, IntegerLine
#include "finite_group.hpp"     // for FiniteMetricGroup, Subgroup
#include "graev_product.hpp"    // for WordPair, symmetrize, graev_norm
#include "rational.hpp"         // for Rational
#include "words.hpp"            // for Word, IndexSet, Report

namespace graev {

  namespace detail {
    inline CommonSubgroup<std::int64_t> trivial_common(std::vector<FactorPtr<std::int64_t>> fs) {
      CommonSubgroup<std::int64_t> C;
      auto                         e1 = fs.at(0)->identity();
      C.project = [fs, e1](int l, std::int64_t const& x) -> std::optional<std::int64_t> {
        if (x == fs[l - 1]->identity()) {
          return e1;
        }
        return std::nullopt;
      };
      C.embed      = [fs](int l, std::int64_t const&) { return fs[l - 1]->identity(); };
      C.candidates = {e1};
      return C;
    }

    inline FiniteMetricGroup scaled(FiniteMetricGroup const& G, Rational s) {
      Matrix M = G.metric();
      for (auto& row : M) {
        for (auto& x : row) {
          x *= s;
        }
      }
      return FiniteMetricGroup(G.name(), G.names(), G.table(), std::move(M));
    }
  }  // namespace detail

  // G * <stable letter>, with <t> carrying d(t^j, t^k) = |j - k|.
  inline FiniteAmalgam free_product_with_line(FiniteMetricGroup const& G, std::string letter) {
    std::vector<FactorPtr<std::int64_t>> fs{std::make_shared<FiniteFactor>(G),
                                            std::make_shared<IntegerLine>(std::move(letter))};
    auto C = detail::trivial_common(fs);
    return FiniteAmalgam(std::move(fs), std::move(C));
  }

  // The two metrics on G * tAt^-1: the one induced from G * <t> (Gt) and
  // the Graev metric of the free product G * A' with A' = tAt^-1 (GA).
  class InducedSetting {
   public:
    InducedSetting(FiniteMetricGroup G, Subgroup A)
        : _G(std::move(G)), _A(std::move(A)), _Gt(free_product_with_line(_G, "t")) {
      auto Ag = restrict_to(_G, _A, "tAt^-1");
      std::vector<std::string> names;
      for (auto x : _A.elements()) {
        names.push_back(x == _G.identity() ? "e" : "t " + _G.element_name(x) + " t^-1");
      }
      _Aconj = FiniteMetricGroup("tAt^-1", names, Ag.table(), Ag.metric());
      _GA    = free_product_system({_G, _Aconj}).amalgam();
    }

    FiniteMetricGroup const& group() const noexcept {
      return _G;
    }
    Subgroup const& subgroup() const noexcept {
      return _A;
    }
    FiniteAmalgam const& Gt() const noexcept {
      return _Gt;
    }
    FiniteAmalgam const& GA() const noexcept {
      return _GA;
    }
    FiniteLetter g(std::int64_t x) const {
      return _Gt.letter(1, x);
    }
    FiniteLetter t(std::int64_t k) const {
      return _Gt.letter(2, k);
    }
    // t a t^-1 as a letter of G * A'
    FiniteLetter conj(std::int64_t a) const {
      auto const& el = _A.elements();
      auto        it = std::lower_bound(el.begin(), el.end(), a);
      if (it == el.end() || *it != a) {
        throw std::invalid_argument(_G.element_name(a) + " is not in A");
      }
      return _GA.letter(2, it - el.begin());
    }

    // a word of G * A' written over G and <t>
    FiniteWord expand(FiniteWord const& f) const {
      FiniteWord out;
      for (auto const& x : f) {
        if (x.factor == 2) {
          out.push_back(t(1));
          out.push_back(g(_A.elements()[x.element]));
          out.push_back(t(-1));
        } else {
          out.push_back(g(x.element));
        }
      }
      return out;
    }

    bool is_t(FiniteLetter const& x, int sign) const {
      return x.factor == 2 && x.element == sign;
    }
    bool is_t(FiniteLetter const& x) const {
      return x.factor == 2 && (x.element == 1 || x.element == -1);
    }

   private:
    FiniteMetricGroup _G;
    Subgroup          _A;
    FiniteAmalgam     _Gt;
    FiniteMetricGroup _Aconj;
    FiniteAmalgam     _GA;
  };

  // ---- hereditary words ----

  // every <t>-letter is t or t^-1
  inline bool is_hereditary_word(InducedSetting const& H, FiniteWord const& zeta) {
    for (auto const& x : zeta) {
      if (x.factor == 2 && !H.is_t(x)) {
        return false;
      }
    }
    return H.Gt().is_trivial(zeta);
  }

  inline Report check_hereditary_pair(InducedSetting const& H, WordPair<std::int64_t> const& p) {
    auto const& S = H.Gt();
    if (!S.is_reduced(p.alpha)) {
      return Report::fail("reduced", "alpha is not reduced");
    }
    if (!S.multipliable(p.alpha, p.zeta)) {
      return Report::fail("multipliable", "alpha and zeta are not multipliable");
    }
    if (!is_hereditary_word(H, p.zeta)) {
      return Report::fail("hereditary", "zeta is not a trivial word with t-letters t^{+-1}");
    }
    for (std::size_t i = 1; i <= p.zeta.size(); ++i) {
      if (H.is_t(p.zeta(i)) && p.zeta(i) != p.alpha(i)) {
        return Report::fail("aligned", "zeta(" + std::to_string(i) + ") differs from alpha");
      }
    }
    return Report::pass();
  }

  // Per node of a balanced evaluation tree: symmetrize the <t>-letters of
  // R_s at the first of them, then spread the collected power t^N.
  inline WordPair<std::int64_t> to_hereditary(InducedSetting const& H, WordPair<std::int64_t> p) {
    auto const& S = H.Gt();
    if (!S.is_reduced(p.alpha)) {
      throw std::invalid_argument("to_hereditary: alpha is not reduced");
    }
    if (!S.multipliable(p.alpha, p.zeta) || !S.is_trivial(p.zeta)) {
      throw std::invalid_argument("to_hereditary: not a multipliable pair with trivial zeta");
    }
    auto T = build_balanced_evaluation_tree(S, p.zeta);
    for (int s = 0; s < static_cast<int>(T.size()); ++s) {
      auto                     R = T.residual(s);
      std::vector<std::size_t> ext;
      bool                     bad = false;
      for (auto i : R) {
        if (p.zeta(i).factor == 2) {
          ext.push_back(i);
          if (p.zeta(i) != p.alpha(i)) {
            bad = true;
          }
        }
      }
      if (!bad) {
        continue;
      }
      std::size_t const i1    = ext.front();
      auto              delta = symmetrize(S, p, IndexSet(ext), i1);
      std::int64_t      N     = delta(i1).factor == 2 ? delta(i1).element : 0;
      std::int64_t      e1    = p.alpha(i1).element;
      if (N != 0 && N != e1) {
        std::int64_t const sg   = N > 0 ? 1 : -1;
        std::int64_t       need = sg == e1 ? (N > 0 ? N : -N) - 1 : (N > 0 ? N : -N);
        delta(i1)               = sg == e1 ? p.alpha(i1) : S.identity();
        for (std::size_t k = 1; k < ext.size() && need > 0; ++k) {
          if (p.alpha(ext[k]).element == -sg) {
            delta(ext[k]) = S.identity();
            --need;
          }
        }
        if (need != 0) {
          throw std::logic_error("to_hereditary: not enough opposite t-letters");
        }
      }
      p.zeta = delta;
    }
    if (!S.is_trivial(p.zeta)) {
      throw std::logic_error("to_hereditary: result is not trivial");
    }
    return p;
  }

  // ---- structure trees ----

  namespace detail {
    // first interval t^{+-1} (G-letters) t^{-+1} with value e
    inline std::optional<IndexSet> innermost_t_interval(InducedSetting const& H,
                                                        FiniteWord const&     z) {
      std::vector<std::size_t> tp;
      for (std::size_t i = 1; i <= z.size(); ++i) {
        if (z(i).factor == 2) {
          tp.push_back(i);
        }
      }
      for (std::size_t k = 0; k + 1 < tp.size(); ++k) {
        auto p = tp[k], q = tp[k + 1];
        if (H.is_t(z(p)) && H.is_t(z(q)) && z(p).element == -z(q).element) {
          auto I = IndexSet::interval(p, q);
          if (H.Gt().is_trivial(subword(z, I))) {
            return I;
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace detail

  // Repeatedly cut out an innermost t..t^-1 interval and re-inflate.  The
  // third re-inflation case shifts the whole interval by |I|.
  inline EvaluationTree build_structure_tree(InducedSetting const& H, FiniteWord const& zeta) {
    if (!is_hereditary_word(H, zeta)) {
      throw std::invalid_argument("build_structure_tree: word is not hereditary");
    }
    std::size_t const n = zeta.size();
    auto              I = detail::innermost_t_interval(H, zeta);
    if (!I) {
      for (auto const& x : zeta) {
        if (x.factor == 2) {
          throw std::logic_error("build_structure_tree: no innermost interval found");
        }
      }
      return EvaluationTree(n);
    }
    std::size_t const m = I->size();
    if (m == n) {
      EvaluationTree T(n);
      T.add(0, IndexSet::interval(1, n));
      return T;
    }
    std::vector<FiniteLetter> d;
    for (std::size_t i = 1; i <= n; ++i) {
      if (!I->contains(i)) {
        d.push_back(zeta(i));
      }
    }
    auto              Td = build_structure_tree(H, FiniteWord(std::move(d)));
    std::size_t const mI = I->m();
    EvaluationTree    T(n);
    std::vector<int>  id(Td.size(), 0);
    for (int s = 1; s < static_cast<int>(Td.size()); ++s) {
      auto const& J = Td.interval(s);
      IndexSet    K;
      if (J.M() < mI) {
        K = J;
      } else if (J.m() < mI) {
        K = IndexSet::interval(J.m(), J.M() + m);
      } else {
        K = IndexSet::interval(J.m() + m, J.M() + m);
      }
      id[s] = T.add(id[Td.node(s).parent], K);
    }
    int parent = 0;
    if (mI != 1 && I->M() != n) {
      for (int s = 0; s < static_cast<int>(Td.size()); ++s) {
        auto const& J = Td.interval(s);
        if (J.m() < mI && mI <= J.M() && Td.depth(s) >= Td.depth(parent)) {
          parent = s;
        }
      }
    }
    T.add(id[parent], *I);
    return T;
  }

  // Items (i)-(iii) and (v)-(viii); (vii) reads H(s) as the depth of s.
  inline Report validate_structure_tree(InducedSetting const& H,
                                        FiniteWord const&     zeta,
                                        EvaluationTree const& T) {
    std::size_t const n = zeta.size();
    int const         N = static_cast<int>(T.size());
    if (T.interval(0) != IndexSet::interval(1, n)) {
      return Report::fail("i", "root interval is not [1," + std::to_string(n) + "]");
    }
    for (int s = 0; s < N; ++s) {
      auto const& I = T.interval(s);
      if (!I.empty() && !H.Gt().is_trivial(subword(zeta, I))) {
        return Report::fail("ii", "node " + std::to_string(s) + " does not evaluate to e");
      }
      if (s != 0) {
        if (!H.is_t(zeta(I.m())) || !H.is_t(zeta(I.M()))
            || zeta(I.m()).element != -zeta(I.M()).element) {
          return Report::fail("iii", "node " + std::to_string(s) + " is not bounded by t^{+-1}");
        }
      }
      auto R = T.residual(s);
      for (auto i : R) {
        bool end = s != 0 && (i == I.m() || i == I.M());
        if (!end && zeta(i).factor == 2) {
          return Report::fail(s == 0 ? "vi" : "v", "position " + std::to_string(i)
                                                       + " of R_" + std::to_string(s)
                                                       + " is a t-letter");
        }
      }
    }
    for (int s = 0; s < N; ++s) {
      for (int u = 0; u < N; ++u) {
        if (u == s) {
          continue;
        }
        if (T.depth(s) <= T.depth(u) && T.interval(s).intersects(T.interval(u))
            && !T.below(u, s)) {
          return Report::fail("vii", "nodes " + std::to_string(s) + " and " + std::to_string(u));
        }
        if (s != 0 && T.below(u, s)) {
          auto const& Is = T.interval(s);
          auto const& Iu = T.interval(u);
          if (!(Is.m() < Iu.m() && Iu.M() < Is.M())) {
            return Report::fail("viii", "node " + std::to_string(u) + " is not strictly inside "
                                            + std::to_string(s));
          }
        }
      }
    }
    return Report::pass();
  }

  // ---- rigid pairs ----

  namespace detail {
    inline void sym(FiniteAmalgam const& S, FiniteWord const& alpha, FiniteWord& xi,
                    std::vector<std::size_t> const& list) {
      if (list.size() >= 2) {
        xi = symmetrize(S, WordPair<std::int64_t>{alpha, xi}, IndexSet(list), list.front());
      } else if (list.size() == 1) {
        xi(list.front()) = S.identity();
      }
    }
  }  // namespace detail

  // The replacement on Q (a set of positions of alpha reading
  // nu_0 t mu_1 t^-1 nu_1 ... t mu_n t^-1 nu_n): t-letters kept, the nu-part
  // symmetrized at its first position, each mu_l at its first position.
  inline void beta_bar(InducedSetting const& H, FiniteWord const& alpha, FiniteWord& xi,
                       std::vector<std::size_t> const& Q) {
    std::vector<std::size_t>              nu;
    std::vector<std::vector<std::size_t>> mus;
    bool                                  inside = false;
    for (auto i : Q) {
      if (H.is_t(alpha(i), 1)) {
        if (inside) {
          throw std::logic_error("beta_bar: two t without t^-1");
        }
        inside = true;
        mus.emplace_back();
        xi(i) = alpha(i);
      } else if (H.is_t(alpha(i), -1)) {
        if (!inside) {
          throw std::logic_error("beta_bar: t^-1 without t");
        }
        inside = false;
        xi(i)  = alpha(i);
      } else {
        xi(i) = H.Gt().identity();
        (inside ? mus.back() : nu).push_back(i);
      }
    }
    detail::sym(H.Gt(), alpha, xi, nu);
    for (auto const& mu : mus) {
      detail::sym(H.Gt(), alpha, xi, mu);
    }
  }

  // The replacement on Q reading mu_0 t^-1 nu_0 t mu_1 ... t^-1 nu_{n-1} t mu_n:
  // the nu-part first, then mu_1..mu_{n-1}, then mu_0 with mu_n together.
  inline void gamma_bar(InducedSetting const& H, FiniteWord const& alpha, FiniteWord& xi,
                        std::vector<std::size_t> const& Q) {
    std::vector<std::size_t>              nu;
    std::vector<std::vector<std::size_t>> mus(1);
    bool                                  inside = false;
    for (auto i : Q) {
      if (H.is_t(alpha(i), -1)) {
        if (inside) {
          throw std::logic_error("gamma_bar: two t^-1 without t");
        }
        inside = true;
        xi(i)  = alpha(i);
      } else if (H.is_t(alpha(i), 1)) {
        if (!inside) {
          throw std::logic_error("gamma_bar: t without t^-1");
        }
        inside = false;
        mus.emplace_back();
        xi(i) = alpha(i);
      } else {
        xi(i) = H.Gt().identity();
        (inside ? nu : mus.back()).push_back(i);
      }
    }
    detail::sym(H.Gt(), alpha, xi, nu);
    for (std::size_t l = 1; l + 1 < mus.size(); ++l) {
      detail::sym(H.Gt(), alpha, xi, mus[l]);
    }
    std::vector<std::size_t> ends = mus.front();
    if (mus.size() > 1) {
      ends.insert(ends.end(), mus.back().begin(), mus.back().end());
    }
    detail::sym(H.Gt(), alpha, xi, ends);
  }

  inline bool is_rigid(InducedSetting const& H, WordPair<std::int64_t> const& p) {
    if (!check_hereditary_pair(H, p)) {
      return false;
    }
    for (std::size_t i = 1; i <= p.alpha.size(); ++i) {
      if (H.is_t(p.alpha(i)) && p.zeta(i) != p.alpha(i)) {
        return false;
      }
    }
    return true;
  }

  inline WordPair<std::int64_t> to_rigid(InducedSetting const& H, WordPair<std::int64_t> p) {
    auto r = check_hereditary_pair(H, p);
    if (!r) {
      throw std::invalid_argument("to_rigid: " + r.to_string());
    }
    auto       T  = build_structure_tree(H, p.zeta);
    FiniteWord xi = p.zeta;
    for (int s = 0; s < static_cast<int>(T.size()); ++s) {
      auto const&              I = T.interval(s);
      std::vector<std::size_t> Q;
      for (auto i : T.residual(s)) {
        if (s == 0 || (i != I.m() && i != I.M())) {
          Q.push_back(i);
        }
      }
      if (s != 0) {
        xi(I.m()) = p.alpha(I.m());
        xi(I.M()) = p.alpha(I.M());
      }
      if (Q.empty()) {
        continue;
      }
      if (s != 0 && H.is_t(p.alpha(I.m()), 1)) {
        gamma_bar(H, p.alpha, xi, Q);
      } else {
        beta_bar(H, p.alpha, xi, Q);
      }
    }
    if (!H.Gt().is_trivial(xi)) {
      throw std::logic_error("to_rigid: result is not trivial");
    }
    return {p.alpha, xi};
  }

  // ---- distances on G * tAt^-1 ----

  // min rho(alpha, xi) over rigid pairs: t-positions fixed, G-positions free.
  inline GraevResult<std::int64_t> rigid_minimum(InducedSetting const& H, FiniteWord const& f) {
    auto const& S     = H.GA();
    auto        alpha = H.expand(S.normal_form(f));
    GraevResult<std::int64_t> res{Rational(0), alpha, alpha, "rigid", 0};
    std::vector<std::size_t> free_pos;
    for (std::size_t i = 1; i <= alpha.size(); ++i) {
      if (!H.is_t(alpha(i))) {
        free_pos.push_back(i);
      }
    }
    auto const        n  = static_cast<std::int64_t>(H.group().order());
    FiniteWord        xi = alpha;
    bool              found = false;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == free_pos.size()) {
        ++res.candidates;
        if (!H.Gt().is_trivial(xi)) {
          return;
        }
        auto v = H.Gt().rho(alpha, xi);
        if (!found || v < res.value) {
          found     = true;
          res.value = v;
          res.zeta  = xi;
        }
        return;
      }
      for (std::int64_t g = 0; g < n; ++g) {
        xi(free_pos[k]) = H.g(g);
        rec(k + 1);
      }
    };
    rec(0);
    return res;
  }

  // d(f, e) for the Graev metric of G * <t>, restricted to G * tAt^-1.
  inline Rational induced_distance(InducedSetting const& H, FiniteWord const& f, FiniteWord const& g) {
    auto h = H.GA().multiply(f, H.GA().inverse(g));
    return graev_norm(H.Gt(), H.expand(h)).value;
  }

  inline Rational free_product_distance(InducedSetting const& H, FiniteWord const& f,
                                        FiniteWord const& g) {
    return graev_distance(H.GA(), f, g);
  }

  // Elements of G * tAt^-1 with at most max_t letters from tAt^-1 and at
  // most max_g letters from G.
  inline std::vector<FiniteWord> induced_ball(InducedSetting const& H, std::size_t max_t,
                                              std::size_t max_g) {
    std::vector<FiniteWord> out;
    for (auto const& w : ball(H.GA(), max_t + max_g)) {
      std::size_t nt = 0, ng = 0;
      for (auto const& x : w) {
        (x.factor == 2 ? nt : ng) += 1;
      }
      if (nt <= max_t && ng <= max_g) {
        out.push_back(w);
      }
    }
    return out;
  }

  struct DiamReport {
    bool        ok = true;
    Rational    diam;
    bool        small = true;  // diam A <= 1
    std::size_t pairs = 0;
    std::size_t equal = 0;
    std::size_t rigid_checked = 0;
    // gap witness when diam A > 1
    std::optional<std::int64_t> witness;
    Rational                    graev_value;
    Rational                    induced_value;
    std::string                 message;
  };

  // diam A <= 1: the two metrics agree on all pairs from the ball of
  // t-degree <= 2 and G-count <= 2, and the rigid minimum gives the same
  // norms.  diam A > 1: a with d(a,e) > 1 and f = a (t a^-1 t^-1) give
  // 2d(a,e) against at most 2.
  inline DiamReport check_diam_criterion(FiniteMetricGroup const& G0, Subgroup const& A,
                                         Rational scale = Rational(1)) {
    auto           G = detail::scaled(G0, Rational(1) / scale);
    InducedSetting H(G, A);
    DiamReport     rep;
    rep.diam  = diameter(G, A);
    rep.small = rep.diam <= Rational(1);
    if (rep.small) {
      auto B = induced_ball(H, 2, 2);
      for (auto const& f1 : B) {
        auto rm = rigid_minimum(H, f1);
        auto gv = graev_norm(H.GA(), f1).value;
        ++rep.rigid_checked;
        if (rm.value != gv) {
          rep.ok      = false;
          rep.message = "rigid minimum " + to_string(rm.value) + " differs from the Graev norm "
                        + to_string(gv) + " at " + H.GA().word_name(f1);
          return rep;
        }
        for (auto const& f2 : B) {
          ++rep.pairs;
          auto a = induced_distance(H, f1, f2);
          auto b = free_product_distance(H, f1, f2);
          if (a == b) {
            ++rep.equal;
          } else {
            rep.ok      = false;
            rep.message = "d = " + to_string(a) + " but Graev = " + to_string(b) + " at ("
                          + H.GA().word_name(f1) + ", " + H.GA().word_name(f2) + ")";
            return rep;
          }
        }
      }
      rep.message = "equality on " + std::to_string(rep.pairs) + " pairs from "
                    + std::to_string(B.size()) + " elements";
      return rep;
    }
    for (auto a : A.elements()) {
      if (G.distance(a, G.identity()) > Rational(1)) {
        rep.witness = a;
        break;
      }
    }
    auto const& S  = H.GA();
    auto        a  = *rep.witness;
    FiniteWord  f{S.letter(1, a), H.conj(G.inverse(a))};
    rep.graev_value   = graev_norm(S, f).value * scale;
    rep.induced_value = graev_norm(H.Gt(), H.expand(f)).value * scale;
    auto da           = G0.distance(a, G0.identity());
    rep.ok = rep.graev_value == Rational(2) * da && rep.induced_value <= Rational(2) * scale
             && rep.graev_value > rep.induced_value;
    rep.message = "witness a = " + G.element_name(a) + ": Graev norm of a t a^-1 t^-1 is 2d(a,e) = "
                  + to_string(rep.graev_value) + " > " + to_string(Rational(2) * scale)
                  + " >= induced norm " + to_string(rep.induced_value);
    return rep;
  }

  // ---- HNN extensions ----

  struct HnnSystem {
    FiniteMetricGroup                      G;
    Subgroup                               A;
    Subgroup                               B;
    std::map<std::int64_t, std::int64_t>   phi;
    Rational                               K;

    Report check() const {
      if (phi.size() != A.size()) {
        return Report::fail("phi", "phi must be defined on every element of A");
      }
      std::set<std::int64_t> img;
      for (auto a : A.elements()) {
        auto it = phi.find(a);
        if (it == phi.end()) {
          return Report::fail("phi", "phi undefined at " + G.element_name(a));
        }
        if (!B.contains(it->second)) {
          return Report::fail("phi", "phi(" + G.element_name(a) + ") is not in B");
        }
        img.insert(it->second);
      }
      if (img.size() != B.size()) {
        return Report::fail("phi", "phi is not a bijection onto B");
      }
      for (auto a : A.elements()) {
        for (auto b : A.elements()) {
          if (phi.at(G.multiply(a, b)) != G.multiply(phi.at(a), phi.at(b))) {
            return Report::fail("phi", "phi is not a homomorphism at (" + G.element_name(a)
                                           + "," + G.element_name(b) + ")");
          }
          if (G.distance(phi.at(a), phi.at(b)) != G.distance(a, b)) {
            return Report::fail("isometry", "d(phi(" + G.element_name(a) + "),phi("
                                                + G.element_name(b) + ")) != d("
                                                + G.element_name(a) + ","
                                                + G.element_name(b) + ")");
          }
        }
      }
      if (K <= Rational(0)) {
        return Report::fail("K", "K must be positive");
      }
      if (diameter(G, A) > K) {
        return Report::fail("K", "diam A = " + to_string(diameter(G, A)) + " exceeds K = "
                                     + to_string(K));
      }
      return Report::pass();
    }
  };

  // A word over G and <t>: t-letters carry their exponent.
  struct HLetter {
    bool         stable = false;
    std::int64_t value  = 0;

    auto operator<=>(HLetter const&) const = default;
    bool operator==(HLetter const&) const  = default;
  };
  using HWord = Word<HLetter>;

  inline std::int64_t t_degree(HWord const& w) {
    std::int64_t d = 0;
    for (auto const& x : w) {
      if (x.stable) {
        d += x.value < 0 ? -x.value : x.value;
      }
    }
    return d;
  }
  inline std::int64_t t_exponent(HWord const& w) {
    std::int64_t d = 0;
    for (auto const& x : w) {
      if (x.stable) {
        d += x.value;
      }
    }
    return d;
  }

  struct HnnBounds {
    Rational upper;
    Rational lower;

    bool exact() const {
      return upper == lower;
    }
  };

  // The amalgam of U = G * <u> and V = G * <v> over C = G * uAu^-1, glued
  // to G * vBv^-1 by u a u^-1 -> v phi(a) v^-1, with t = v^-1 u.  G carries
  // d/K and the result is scaled back by K.  C is infinite; insertions from
  // C range over its reduced words of at most c_len letters, so the value
  // found is an upper bound.  The lower bound comes from the map to Z^2
  // (l1 norm) sending u, v to the unit vectors, which gives 2K per unit of
  // t-exponent, and is exact on G.
  class HnnGroup {
   public:
    using W = FiniteWord;  // element of U or V
    using L = Letter<W>;

    explicit HnnGroup(HnnSystem sys, std::size_t c_len = 2, std::int64_t t_cap = 3)
        : _sys(std::move(sys)), _t_cap(t_cap) {
      auto r = _sys.check();
      if (!r) {
        throw std::invalid_argument("hnn system: " + r.to_string());
      }
      for (auto const& [a, b] : _sys.phi) {
        _phi_inv[b] = a;
      }
      _G = detail::scaled(_sys.G, Rational(1) / _sys.K);
      _U = std::make_shared<FiniteAmalgam>(free_product_with_line(_G, "u"));
      _V = std::make_shared<FiniteAmalgam>(free_product_with_line(_G, "v"));
      std::vector<FactorPtr<W>> fs{std::make_shared<AmalgamGroup<std::int64_t>>(_U, "G*<u>"),
                                   std::make_shared<AmalgamGroup<std::int64_t>>(_V, "G*<v>")};
      CommonSubgroup<W> C;
      C.project = [this](int l, W const& x) -> std::optional<W> {
        if (!in_C(x, l == 1 ? _sys.A : _sys.B)) {
          return std::nullopt;
        }
        return l == 1 ? x : map_middle(x, _phi_inv);
      };
      C.embed = [this](int l, W const& c) {
        return l == 1 ? c : map_middle(c, _sys.phi);
      };
      C.candidates = truncated_C(c_len);
      C.finite     = false;
      _H           = Amalgam<W>(std::move(fs), std::move(C));
    }

    HnnSystem const& system() const noexcept {
      return _sys;
    }
    Amalgam<W> const& amalgam() const noexcept {
      return _H;
    }

    Word<L> embed(HWord const& w) const {
      if (t_degree(w) > _t_cap) {
        throw std::invalid_argument("t-degree " + std::to_string(t_degree(w))
                                    + " exceeds the cap " + std::to_string(_t_cap));
      }
      Word<L> out;
      for (auto const& x : w) {
        if (!x.stable) {
          out.push_back(_H.letter(1, _U->normal_form(W{_U->letter(1, x.value)})));
          continue;
        }
        for (std::int64_t k = 0; k < (x.value < 0 ? -x.value : x.value); ++k) {
          if (x.value > 0) {
            out.push_back(_H.letter(2, W{_V->letter(2, -1)}));
            out.push_back(_H.letter(1, W{_U->letter(2, 1)}));
          } else {
            out.push_back(_H.letter(1, W{_U->letter(2, -1)}));
            out.push_back(_H.letter(2, W{_V->letter(2, 1)}));
          }
        }
      }
      return out;
    }

    HnnBounds norm(HWord const& w) const {
      auto nf = _H.normal_form(embed(w));
      if (nf.empty()) {
        return {Rational(0), Rational(0)};
      }
      // a single letter from G is measured in G
      if (nf.size() == 1 && _H.in_common(nf(1)) && nf(1).element.size() == 1
          && nf(1).element(1).factor == 1) {
        auto v = _sys.G.distance(nf(1).element(1).element, _sys.G.identity());
        return {v, v};
      }
      auto         up = graev_norm(_H, nf).value * _sys.K;
      std::int64_t ex = t_exponent(w);
      auto         lo = Rational(2) * _sys.K * Rational(ex < 0 ? -ex : ex);
      return {up, std::min(lo, up)};
    }

    HnnBounds distance(HWord const& f, HWord const& g) const {
      std::vector<HLetter> v(f.begin(), f.end());
      for (std::size_t i = g.size(); i >= 1; --i) {
        auto x = g(i);
        if (x.stable) {
          x.value = -x.value;
        } else {
          x.value = _sys.G.inverse(x.value);
        }
        v.push_back(x);
      }
      return norm(HWord(std::move(v)));
    }

    std::string element_name(HWord const& w) const {
      return _H.word_name(_H.normal_form(embed(w)));
    }

   private:
    // reduced words of G * xAx^-1 read off a reduced word of G * <x>
    static bool in_C(W const& w, Subgroup const& A) {
      std::size_t i = 1;
      while (i <= w.size()) {
        if (w(i).factor == 1) {
          ++i;
          continue;
        }
        if (w(i).factor == 2 && w(i).element == 1 && i + 2 <= w.size() && w(i + 1).factor == 1
            && A.contains(w(i + 1).element) && w(i + 2).factor == 2 && w(i + 2).element == -1) {
          i += 3;
          continue;
        }
        return false;
      }
      return true;
    }
    static W map_middle(W const& w, std::map<std::int64_t, std::int64_t> const& m) {
      W out = w;
      for (std::size_t i = 2; i + 1 <= out.size(); ++i) {
        if (out(i - 1).factor == 2 && out(i - 1).element == 1 && out(i).factor == 1) {
          out(i).element = m.at(out(i).element);
        }
      }
      return out;
    }
    std::vector<W> truncated_C(std::size_t c_len) const {
      std::vector<W> letters_g, letters_a;
      for (std::size_t x = 0; x < _G.order(); ++x) {
        auto g = static_cast<std::int64_t>(x);
        if (g == _G.identity()) {
          continue;
        }
        letters_g.push_back(W{_U->letter(1, g)});
        if (_sys.A.contains(g)) {
          letters_a.push_back(W{_U->letter(2, 1), _U->letter(1, g), _U->letter(2, -1)});
        }
      }
      std::set<W>                          out{W{}};
      std::function<void(W const&, int, std::size_t)> rec = [&](W const& cur, int last,
                                                                std::size_t k) {
        out.insert(cur);
        if (k == c_len) {
          return;
        }
        if (last != 1) {
          for (auto const& x : letters_g) {
            rec(concat(cur, x), 1, k + 1);
          }
        }
        if (last != 2) {
          for (auto const& x : letters_a) {
            rec(concat(cur, x), 2, k + 1);
          }
        }
      };
      rec(W{}, 0, 0);
      return {out.begin(), out.end()};
    }

    HnnSystem                              _sys;
    std::int64_t                           _t_cap;
    std::map<std::int64_t, std::int64_t>   _phi_inv;
    FiniteMetricGroup                      _G;
    std::shared_ptr<FiniteAmalgam>         _U;
    std::shared_ptr<FiniteAmalgam>         _V;
    Amalgam<W>                             _H;
  };

  inline HnnGroup hnn_construct(HnnSystem sys, std::size_t c_len = 2, std::int64_t t_cap = 3) {
    return HnnGroup(std::move(sys), c_len, t_cap);
  }

  // d'(a, phi(a)) <= 2K for every a in A, for a candidate extension d'.
  inline Report hnn_necessary_condition(
      HnnSystem const&                                               sys,
      std::function<Rational(HWord const&, HWord const&)> const&     dprime) {
    auto const  K  = sys.K;
    std::string bad;
    for (auto a : sys.A.elements()) {
      auto v = dprime(HWord{HLetter{false, a}}, HWord{HLetter{false, sys.phi.at(a)}});
      if (v > Rational(2) * K) {
        bad += (bad.empty() ? "" : "; ") + std::string("d'(") + sys.G.element_name(a) + ",phi("
               + sys.G.element_name(a) + ")) = " + to_string(v) + " > 2K = "
               + to_string(Rational(2) * K);
      }
    }
    if (!bad.empty()) {
      return Report::fail("2K", bad);
    }
    return Report::pass();
  }

  // d(g_1...g_{n-1}, a_1 g_1 a_2 ... g_{n-1} a_n) <= n when every d(a_i, e) <= 1
  inline Rational a_cancellation_gap(FiniteMetricGroup const&         G,
                                     std::vector<std::int64_t> const& g,
                                     std::vector<std::int64_t> const& a) {
    if (a.size() != g.size() + 1) {
      throw std::invalid_argument("a_cancellation_gap: need one more a than g");
    }
    auto p = G.identity();
    auto q = a[0];
    for (std::size_t k = 0; k < g.size(); ++k) {
      p = G.multiply(p, g[k]);
      q = G.multiply(G.multiply(q, g[k]), a[k + 1]);
    }
    return G.distance(p, q);
  }

}  // namespace graev
