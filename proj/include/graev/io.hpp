#pragma once

#include <algorithm>  // for find
#include <cstddef>    // for size_t
#include <cstdint>    // for int64_t
#include <fstream>    // for ifstream
#include <istream>    // for istream
#include <map>        // for map
#include <optional>   // for optional
#include <sstream>    // for istringstream
#include <stdexcept>  // for runtime_error
#include <string>     // for string
#include <utility>    // for move, pair
#include <vector>     // for vector

#include "amalgam.hpp"       // for AmalgamSystem, FiniteAmalgam, FiniteWord
#include "finite_group.hpp"  // for FiniteMetricGroup, Subgroup
#include "free_group.hpp"    // for PointedMetricSpace, SymmetrizedSpace, FreeWord
#include "hnn.hpp"           // for HnnSystem, HWord
#include "rational.hpp"      // for Rational, parse_rational
#include "sin_toolkit.hpp"   // for BKFamily, NormTable

namespace graev {

  class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, std::string const& msg)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          _line(line) {}
    std::size_t line() const noexcept {
      return _line;
    }

   private:
    std::size_t _line;
  };

  struct SubgroupDecl {
    std::string              group;
    std::vector<std::string> elements;
    std::size_t              line = 0;
  };

  struct EmbedDecl {
    std::string                        sub;
    std::string                        group;
    std::map<std::string, std::string> pairs;
    std::size_t                        line = 0;
  };

  struct FactorsDecl {
    std::vector<std::string>   groups;
    std::optional<std::string> over;
    std::size_t                line = 0;
  };

  struct HnnDecl {
    std::string                                      base, A, B;
    std::vector<std::pair<std::string, std::string>> phi;
    Rational                                         K;
    std::size_t                                      line = 0;
  };

  struct FamilyDecl {
    std::string                           group;
    bool                                  invariant = false;
    std::vector<std::vector<std::string>> levels;
    std::size_t                           line = 0;
  };

  struct NormDecl {
    std::string                     target;
    std::map<std::string, Rational> values;
    std::size_t                     line = 0;
  };

  // Everything one input file may declare.
  struct Document {
    std::vector<std::string>                 group_order;
    std::map<std::string, FiniteMetricGroup> groups;
    std::vector<std::string>                 subgroup_order;
    std::map<std::string, SubgroupDecl>      subgroups;
    std::vector<EmbedDecl>                   embeds;
    std::optional<FactorsDecl>               factors;
    std::optional<HnnDecl>                   hnn;
    std::vector<FamilyDecl>                  families;
    std::vector<NormDecl>                    norms;
    std::vector<std::string>                 space_order;
    std::map<std::string, PointedMetricSpace> spaces;

    FiniteMetricGroup const& group(std::string const& nm) const {
      auto it = groups.find(nm);
      if (it == groups.end()) {
        throw ParseError(0, "unknown group " + nm);
      }
      return it->second;
    }

    std::int64_t element(FiniteMetricGroup const& G, std::string const& nm,
                         std::size_t line = 0) const {
      auto x = G.find(nm);
      if (!x) {
        throw ParseError(line, "group " + G.name() + " has no element " + nm);
      }
      return *x;
    }

    Subgroup subgroup(std::string const& nm) const {
      auto it = subgroups.find(nm);
      if (it == subgroups.end()) {
        throw ParseError(0, "unknown subgroup " + nm);
      }
      auto const&               G = group(it->second.group);
      std::vector<std::int64_t> el;
      for (auto const& s : it->second.elements) {
        el.push_back(element(G, s, it->second.line));
      }
      try {
        return Subgroup(G, el);
      } catch (std::invalid_argument const& e) {
        throw ParseError(it->second.line, "subgroup " + nm + ": " + e.what());
      }
    }

    std::string const& owner(std::string const& sub) const {
      auto it = subgroups.find(sub);
      if (it == subgroups.end()) {
        throw ParseError(0, "unknown subgroup " + sub);
      }
      return it->second.group;
    }

    // The amalgam system from the `factors` line; free product without `over`.
    AmalgamSystem system() const {
      if (!factors) {
        if (groups.empty()) {
          throw ParseError(0, "no groups declared");
        }
        std::vector<FiniteMetricGroup> fs;
        for (auto const& g : group_order) {
          fs.push_back(groups.at(g));
        }
        return free_product_system(std::move(fs));
      }
      std::vector<FiniteMetricGroup> fs;
      for (auto const& g : factors->groups) {
        fs.push_back(group(g));
      }
      if (!factors->over) {
        return free_product_system(std::move(fs));
      }
      auto const& sub   = *factors->over;
      auto const& home  = owner(sub);
      auto const  A     = subgroup(sub);
      auto const& H     = group(home);
      auto        common = restrict_to(H, A, sub);
      AmalgamSystem S{fs, common, {}};
      for (auto const& gname : factors->groups) {
        auto const&               G = group(gname);
        std::vector<std::int64_t> emb;
        if (gname == home) {
          emb = A.elements();
        } else {
          auto it = std::find_if(embeds.begin(), embeds.end(), [&](EmbedDecl const& e) {
            return e.sub == sub && e.group == gname;
          });
          if (it == embeds.end()) {
            throw ParseError(factors->line, "no embedding of " + sub + " into " + gname);
          }
          for (auto a : A.elements()) {
            auto an = H.element_name(a);
            auto pt = it->pairs.find(an);
            if (pt == it->pairs.end()) {
              throw ParseError(it->line, "embedding of " + sub + " misses " + an);
            }
            emb.push_back(element(G, pt->second, it->line));
          }
        }
        S.embed.push_back(std::move(emb));
      }
      return S;
    }

    HnnSystem hnn_system() const {
      if (!hnn) {
        throw ParseError(0, "no hnn line");
      }
      auto const& G = group(hnn->base);
      if (owner(hnn->A) != hnn->base || owner(hnn->B) != hnn->base) {
        throw ParseError(hnn->line, "A and B must be subgroups of " + hnn->base);
      }
      HnnSystem sys{G, subgroup(hnn->A), subgroup(hnn->B), {}, hnn->K};
      for (auto const& [a, b] : hnn->phi) {
        sys.phi[element(G, a, hnn->line)] = element(G, b, hnn->line);
      }
      return sys;
    }

    BKFamily family(FamilyDecl const& F) const {
      auto const& G = group(F.group);
      BKFamily    out{{}, F.invariant};
      for (auto const& lv : F.levels) {
        ElementSet s;
        for (auto const& nm : lv) {
          s.push_back(element(G, nm, F.line));
        }
        out.levels.push_back(detail::sorted(s));
      }
      return out;
    }

    // values of a `norm` line; the target is a group or a subgroup
    NormTable norm(NormDecl const& N) const {
      std::string gname = groups.count(N.target) ? N.target : owner(N.target);
      auto const& G     = group(gname);
      NormTable   out;
      for (auto const& [k, v] : N.values) {
        out[element(G, k, N.line)] = v;
      }
      return out;
    }

    NormDecl const* find_norm(std::string const& target) const {
      for (auto const& n : norms) {
        if (n.target == target) {
          return &n;
        }
      }
      return nullptr;
    }
  };

  namespace detail {
    inline std::vector<std::string> split(std::string const& s) {
      std::vector<std::string> out;
      std::string              cur;
      for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',' || c == '{' || c == '}' || c == '\r') {
          if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
          }
        } else {
          cur += c;
        }
      }
      if (!cur.empty()) {
        out.push_back(cur);
      }
      return out;
    }

    inline std::string strip_comment(std::string s) {
      auto p = s.find('#');
      if (p != std::string::npos) {
        s.resize(p);
      }
      return s;
    }

    inline std::pair<std::string, std::string> split_pair(std::string const& tok, std::size_t line) {
      auto p = tok.find('=');
      if (p == std::string::npos || p == 0 || p + 1 == tok.size()) {
        throw ParseError(line, "expected name=value, got " + tok);
      }
      return {tok.substr(0, p), tok.substr(p + 1)};
    }

    inline Rational rational_at(std::string const& s, std::size_t line) {
      try {
        return parse_rational(s);
      } catch (std::exception const& e) {
        throw ParseError(line, e.what());
      }
    }
  }  // namespace detail

  inline Document parse_document(std::istream& in) {
    Document doc;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
    {
      std::string raw;
      std::size_t no = 0;
      while (std::getline(in, raw)) {
        ++no;
        auto t = detail::split(detail::strip_comment(raw));
        if (!t.empty()) {
          lines.emplace_back(no, std::move(t));
        }
      }
    }
    std::string last_group;
    std::size_t k = 0;
    auto        matrix_rows = [&](std::size_t n, std::size_t head) {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t r = 0; r < n; ++r) {
        if (k >= lines.size()) {
          throw ParseError(head, "expected " + std::to_string(n) + " rows");
        }
        auto const& [no, t] = lines[k++];
        if (t.size() != n) {
          throw ParseError(no, "row has " + std::to_string(t.size()) + " entries, expected "
                                   + std::to_string(n));
        }
        rows.push_back(t);
      }
      return rows;
    };
    while (k < lines.size()) {
      auto const [no, t] = lines[k++];
      auto const& kw     = t[0];
      if (kw == "group" || kw == "space") {
        if (t.size() != 2) {
          throw ParseError(no, kw + " takes one name");
        }
        std::vector<std::string>              names;
        std::vector<std::vector<std::string>> table, metric;
        bool                                  has_table = false, has_metric = false;
        while (k < lines.size()) {
          auto const& [n2, u] = lines[k];
          if (u[0] == (kw == "group" ? "elements" : "points")) {
            names.assign(u.begin() + 1, u.end());
            ++k;
          } else if (u[0] == "table" && kw == "group") {
            ++k;
            table     = matrix_rows(names.size(), n2);
            has_table = true;
          } else if (u[0] == "metric") {
            ++k;
            metric     = matrix_rows(names.size(), n2);
            has_metric = true;
          } else {
            break;
          }
        }
        if (names.empty() || !has_metric || (kw == "group" && !has_table)) {
          throw ParseError(no, kw + " " + t[1] + " is incomplete");
        }
        Matrix M;
        for (auto const& row : metric) {
          M.emplace_back();
          for (auto const& x : row) {
            M.back().push_back(detail::rational_at(x, no));
          }
        }
        if (kw == "space") {
          doc.spaces[t[1]] = PointedMetricSpace{t[1], names, M};
          doc.space_order.push_back(t[1]);
          continue;
        }
        std::map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < names.size(); ++i) {
          idx[names[i]] = i;
        }
        Table T;
        for (auto const& row : table) {
          T.emplace_back();
          for (auto const& x : row) {
            auto it = idx.find(x);
            if (it == idx.end()) {
              throw ParseError(no, "table entry " + x + " is not an element of " + t[1]);
            }
            T.back().push_back(it->second);
          }
        }
        try {
          doc.groups.insert_or_assign(t[1], FiniteMetricGroup(t[1], names, T, M));
        } catch (std::invalid_argument const& e) {
          throw ParseError(no, e.what());
        }
        doc.group_order.push_back(t[1]);
        last_group = t[1];
      } else if (kw == "subgroup") {
        if (t.size() < 3 || t[2] != "=") {
          throw ParseError(no, "expected: subgroup <name> = <elements>");
        }
        if (last_group.empty()) {
          throw ParseError(no, "subgroup before any group");
        }
        doc.subgroups[t[1]] = SubgroupDecl{last_group, {t.begin() + 3, t.end()}, no};
        doc.subgroup_order.push_back(t[1]);
      } else if (kw == "embed") {
        if (t.size() < 5 || t[2] != "into" || t[4] != ":") {
          throw ParseError(no, "expected: embed <subgroup> into <group> : a=b ...");
        }
        EmbedDecl e{t[1], t[3], {}, no};
        for (std::size_t i = 5; i < t.size(); ++i) {
          e.pairs.insert(detail::split_pair(t[i], no));
        }
        doc.embeds.push_back(std::move(e));
      } else if (kw == "factors") {
        FactorsDecl f{{}, std::nullopt, no};
        for (std::size_t i = 1; i < t.size(); ++i) {
          if (t[i] == "over") {
            if (i + 2 != t.size()) {
              throw ParseError(no, "expected one subgroup after over");
            }
            f.over = t[i + 1];
            break;
          }
          f.groups.push_back(t[i]);
        }
        if (f.groups.empty()) {
          throw ParseError(no, "factors needs at least one group");
        }
        doc.factors = std::move(f);
      } else if (kw == "hnn") {
        // hnn base G A sub B sub phi a=b ... K q
        HnnDecl h;
        h.line = no;
        std::size_t i = 1;
        auto        want = [&](std::string const& key) {
          if (i + 1 >= t.size() || t[i] != key) {
            throw ParseError(no, "expected " + key + " in hnn line");
          }
          i += 2;
          return t[i - 1];
        };
        h.base = want("base");
        h.A    = want("A");
        h.B    = want("B");
        if (i >= t.size() || t[i] != "phi") {
          throw ParseError(no, "expected phi in hnn line");
        }
        ++i;
        while (i < t.size() && t[i] != "K") {
          h.phi.push_back(detail::split_pair(t[i++], no));
        }
        if (i + 2 != t.size()) {
          throw ParseError(no, "expected K <rational> at the end of the hnn line");
        }
        h.K     = detail::rational_at(t[i + 1], no);
        doc.hnn = std::move(h);
      } else if (kw == "family") {
        if (t.size() < 2 || t.size() > 3 || (t.size() == 3 && t[2] != "invariant")) {
          throw ParseError(no, "expected: family <group> [invariant]");
        }
        FamilyDecl f{t[1], t.size() == 3, {}, no};
        while (k < lines.size() && lines[k].second[0] == "level") {
          auto const& [n2, u] = lines[k++];
          if (u.size() < 2 || u[1].empty() || u[1].back() != ':') {
            throw ParseError(n2, "expected: level <k>: <elements>");
          }
          auto idx = u[1].substr(0, u[1].size() - 1);
          if (idx != std::to_string(f.levels.size())) {
            throw ParseError(n2, "levels must be numbered 0, 1, ... in order");
          }
          f.levels.emplace_back(u.begin() + 2, u.end());
        }
        doc.families.push_back(std::move(f));
      } else if (kw == "norm") {
        if (t.size() < 3 || t[2] != ":") {
          throw ParseError(no, "expected: norm <group|subgroup> : name=value ...");
        }
        NormDecl n{t[1], {}, no};
        for (std::size_t i = 3; i < t.size(); ++i) {
          auto [a, b] = detail::split_pair(t[i], no);
          n.values[a] = detail::rational_at(b, no);
        }
        doc.norms.push_back(std::move(n));
      } else {
        throw ParseError(no, "unknown directive " + kw);
      }
    }
    return doc;
  }

  inline Document parse_document_string(std::string const& s) {
    std::istringstream in(s);
    return parse_document(in);
  }

  inline Document load_document(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw ParseError(0, "cannot open " + path);
    }
    return parse_document(in);
  }

  // ---- words ----

  namespace detail {
    // name -> candidate letters across the factors
    inline std::vector<FiniteLetter> resolve(FiniteAmalgam const&                  S,
                                             AmalgamSystem const&                  sys,
                                             std::string const&                    tok) {
      std::vector<FiniteLetter> out;
      auto                      dot = tok.find('.');
      for (std::size_t l = 0; l < sys.factors.size(); ++l) {
        auto const& G  = sys.factors[l];
        std::string nm = tok;
        if (dot != std::string::npos) {
          if (tok.substr(0, dot) != G.name()) {
            continue;
          }
          nm = tok.substr(dot + 1);
        }
        if (auto x = G.find(nm)) {
          auto L = S.letter(static_cast<int>(l + 1), *x);
          if (std::find(out.begin(), out.end(), L) == out.end()) {
            out.push_back(L);
          }
        }
      }
      return out;
    }
  }  // namespace detail

  // Whitespace-separated element names, optionally qualified as Group.name.
  // A token naming no element is split greedily into known names ("ab").
  inline FiniteWord parse_word(FiniteAmalgam const& S, AmalgamSystem const& sys,
                               std::string const& text) {
    FiniteWord w;
    for (auto const& tok : detail::split(text)) {
      if (tok == "e" || tok == "1") {
        continue;
      }
      auto c = detail::resolve(S, sys, tok);
      if (c.size() > 1) {
        throw ParseError(0, "ambiguous letter " + tok + "; qualify it as Group.name");
      }
      if (c.size() == 1) {
        w.push_back(c[0]);
        continue;
      }
      std::size_t p = 0;
      while (p < tok.size()) {
        std::size_t best = 0;
        FiniteLetter L;
        for (std::size_t len = tok.size() - p; len >= 1; --len) {
          auto cc = detail::resolve(S, sys, tok.substr(p, len));
          if (cc.size() == 1) {
            best = len;
            L    = cc[0];
            break;
          }
          if (cc.size() > 1) {
            throw ParseError(0, "ambiguous letter " + tok.substr(p, len) + " in " + tok);
          }
        }
        if (best == 0) {
          throw ParseError(0, "cannot read " + tok + " as a word");
        }
        w.push_back(L);
        p += best;
      }
    }
    return w;
  }

  inline FreeWord parse_free_word(SymmetrizedSpace const& X, std::string const& text) {
    std::vector<int> v;
    for (auto const& tok : detail::split(text)) {
      auto s = X.find(tok);
      if (!s) {
        throw ParseError(0, "space " + X.base().name + " has no letter " + tok);
      }
      v.push_back(*s);
    }
    return FreeWord(std::move(v));
  }

  inline std::string free_word_name(SymmetrizedSpace const& X, FreeWord const& w) {
    if (w.empty()) {
      return "e";
    }
    std::string out;
    for (auto s : w) {
      out += (out.empty() ? "" : " ") + X.name(s);
    }
    return out;
  }

  // Words over the HNN base group: element names, t, t^-1, t^k, phi(x).
  inline HWord parse_hnn_word(HnnSystem const& sys, std::string const& text) {
    std::vector<HLetter> v;
    auto const&          G = sys.G;
    for (auto const& tok : detail::split(text)) {
      if (tok == "t") {
        v.push_back({true, 1});
      } else if (tok.rfind("t^", 0) == 0) {
        try {
          std::size_t used = 0;
          auto        k    = std::stoll(tok.substr(2), &used);
          if (used != tok.size() - 2) {
            throw std::invalid_argument(tok);
          }
          v.push_back({true, k});
        } catch (std::exception const&) {
          throw ParseError(0, "bad power of t: " + tok);
        }
      } else if (tok.rfind("phi(", 0) == 0 && tok.back() == ')') {
        auto inner = tok.substr(4, tok.size() - 5);
        auto x     = G.find(inner);
        if (!x || !sys.phi.count(*x)) {
          throw ParseError(0, inner + " is not in the domain of phi");
        }
        v.push_back({false, sys.phi.at(*x)});
      } else if (tok == "e") {
        continue;
      } else {
        auto x = G.find(tok);
        if (!x) {
          throw ParseError(0, "group " + G.name() + " has no element " + tok);
        }
        if (*x != G.identity()) {
          v.push_back({false, *x});
        }
      }
    }
    return HWord(std::move(v));
  }

}  // namespace graev
