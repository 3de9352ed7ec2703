#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "graev/graev.hpp"

using namespace graev;

namespace {

  // exit codes
  constexpr int kOk = 0, kMath = 1, kUsage = 2;

  struct Session {
    std::string   format   = "human";
    std::uint64_t seed     = 0;
    std::string   strategy = "symmetric";
    std::size_t   max_len  = 0;  // 0: word length + 2
    std::int64_t  t_degree = 3;
    bool          witness  = false;
  };

  // Collects key=value records; human mode prints the text lines instead.
  class Out {
   public:
    Out(Session const& s, std::string command) : _s(s) {
      rec("command", std::move(command));
    }
    void rec(std::string k, std::string v) {
      _records.emplace_back(std::move(k), std::move(v));
    }
    void say(std::string line) {
      _human.push_back(std::move(line));
    }
    void both(std::string k, std::string v) {
      say(v);
      rec(std::move(k), std::move(v));
    }
    void labelled(std::string k, std::string v) {
      say(k + ": " + v);
      rec(std::move(k), std::move(v));
    }
    int done(int code) {
      if (_s.format == "records") {
        for (auto const& [k, v] : _records) {
          std::cout << k << '=' << v << '\n';
        }
        std::cout << "seed=" << _s.seed << '\n' << "status=" << code << '\n';
      } else {
        for (auto const& l : _human) {
          std::cout << l << '\n';
        }
      }
      return code;
    }

   private:
    Session const&                                   _s;
    std::vector<std::pair<std::string, std::string>> _records;
    std::vector<std::string>                         _human;
  };

  std::string verdict(Report const& r) {
    return r ? "ok" : r.to_string();
  }

  struct Loaded {
    Document      doc;
    AmalgamSystem sys;
    FiniteAmalgam S;
  };

  Loaded load_system(std::string const& file) {
    Loaded L{load_document(file), {}, {}};
    L.sys = L.doc.system();
    auto r = L.sys.check();
    if (!r) {
      throw std::domain_error("amalgam system: " + r.to_string());
    }
    L.S = L.sys.amalgam();
    return L;
  }

  std::size_t bound_for(Session const& s, std::size_t len) {
    return s.max_len ? s.max_len : len + 2;
  }

  // ---- commands ----

  int cmd_validate(Session const& s, std::string const& file) {
    Out  out(s, "validate");
    auto doc = load_document(file);
    bool ok  = true;
    auto note = [&](std::string what, Report const& r) {
      out.say(what + ": " + verdict(r));
      out.rec(what, verdict(r));
      ok = ok && static_cast<bool>(r);
    };
    for (auto const& g : doc.group_order) {
      note("group " + g, validate_tsi_metric(doc.groups.at(g)));
    }
    for (auto const& nm : doc.subgroup_order) {
      try {
        doc.subgroup(nm);
        note("subgroup " + nm, Report::pass());
      } catch (ParseError const& e) {
        note("subgroup " + nm, Report::fail("closure", e.what()));
      }
    }
    if (doc.factors && ok) {
      auto sys = doc.system();
      auto r   = check_amalgam_system(sys);
      note("system", r);
      if (r) {
        note("union metric", check_union_metric(sys.amalgam()));
      }
    }
    for (auto const& nm : doc.space_order) {
      note("space " + nm, doc.spaces.at(nm).validate());
    }
    if (doc.hnn && ok) {
      note("hnn", doc.hnn_system().check());
    }
    for (std::size_t i = 0; i < doc.families.size() && ok; ++i) {
      auto const& F = doc.families[i];
      note("family " + F.group, validate_family(doc.group(F.group), doc.family(F)));
    }
    return out.done(ok ? kOk : kMath);
  }

  int cmd_norm_like(Session const& s, std::string const& file, std::string const& f,
                    std::optional<std::string> const& g) {
    Out  out(s, g ? "dist" : "norm");
    auto L = load_system(file);
    auto u = parse_word(L.S, L.sys, f);
    auto h = u;
    if (g) {
      h = L.S.multiply(u, L.S.inverse(parse_word(L.S, L.sys, *g)));
    }
    h = L.S.normal_form(h);
    std::optional<GraevResult<std::int64_t>> sym, brute;
    if (s.strategy == "symmetric" || s.strategy == "both") {
      sym = graev_norm(L.S, h);
    }
    if (s.strategy == "brute" || s.strategy == "both") {
      auto len = bound_for(s, h.size());
      if (len < h.size()) {
        throw CLI::ValidationError("--max-length " + std::to_string(len)
                                   + " is shorter than the word (" + std::to_string(h.size())
                                   + ")");
      }
      brute = brute_force_norm(L.S, h, len);
    }
    if (sym && brute) {
      out.say("symmetric: " + to_string(sym->value));
      out.say("brute:     " + to_string(brute->value));
      out.rec("symmetric", to_string(sym->value));
      out.rec("brute", to_string(brute->value));
      if (sym->value != brute->value) {
        out.say("MISMATCH");
        return out.done(kMath);
      }
      out.rec("value", to_string(sym->value));
    } else {
      out.both("value", to_string((sym ? sym : brute)->value));
    }
    auto const& w = sym ? *sym : *brute;
    if (s.witness || s.format == "records") {
      auto a = L.S.word_name(w.alpha), z = L.S.word_name(w.zeta);
      if (s.witness) {
        out.say("alpha: " + a);
        out.say("zeta:  " + z);
      }
      out.rec("alpha", a);
      out.rec("zeta", z);
    }
    return out.done(kOk);
  }

  int cmd_reduce(Session const& s, std::string const& file, std::string const& w) {
    Out  out(s, "reduce");
    auto L = load_system(file);
    out.both("normal_form", L.S.word_name(L.S.normal_form(parse_word(L.S, L.sys, w))));
    return out.done(kOk);
  }

  int cmd_reduced_forms(Session const& s, std::string const& file, std::string const& w) {
    Out  out(s, "reduced-forms");
    auto L  = load_system(file);
    auto rf = L.S.reduced_forms(L.S.normal_form(parse_word(L.S, L.sys, w)));
    out.rec("count", std::to_string(rf.size()));
    for (auto const& a : rf) {
      out.both("form", L.S.word_name(a));
    }
    return out.done(kOk);
  }

  int cmd_tree(Session const& s, std::string const& file, std::string const& w) {
    Out  out(s, "tree");
    auto L    = load_system(file);
    auto zeta = parse_word(L.S, L.sys, w);
    if (!L.S.is_trivial(zeta)) {
      out.both("error", "word is not trivial; its normal form is "
                            + L.S.word_name(L.S.normal_form(zeta)));
      return out.done(kMath);
    }
    auto T = build_balanced_evaluation_tree(L.S, zeta);
    std::istringstream rendered(T.render());
    std::string        line;
    while (std::getline(rendered, line)) {
      out.both("node", line);
    }
    auto r = validate_evaluation_tree(L.S, zeta, T);
    out.labelled("balanced", verdict(r));
    return out.done(r ? kOk : kMath);
  }

  int cmd_matches(Session const& s, std::size_t n) {
    Out  out(s, "matches");
    auto ms = enumerate_matches(n);
    for (auto const& th : ms) {
      std::string line;
      for (std::size_t i = 0; i < th.size(); ++i) {
        line += (i ? " " : "") + std::to_string(th[i]);
      }
      out.both("match", line);
    }
    out.labelled("count", std::to_string(ms.size()));
    out.rec("motzkin", std::to_string(motzkin(n)));
    return out.done(ms.size() == motzkin(n) ? kOk : kMath);
  }

  int cmd_free_dist(Session const& s, std::string const& file, std::string const& u,
                    std::string const& v, std::string const& space) {
    Out  out(s, "free-dist");
    auto doc = load_document(file);
    if (doc.space_order.empty()) {
      throw ParseError(0, "no space declared");
    }
    auto const& nm = space.empty() ? doc.space_order.front() : space;
    if (!doc.spaces.count(nm)) {
      throw ParseError(0, "unknown space " + nm);
    }
    SymmetrizedSpace X(doc.spaces.at(nm));
    auto             a = parse_free_word(X, u), b = parse_free_word(X, v);
    auto             h = free_reduce(X, concat(a, free_inverse(X, b)));
    auto             r = free_norm(X, h);
    if (s.strategy == "both" || s.strategy == "brute") {
      auto e = free_norm_enumerated(X, h);
      out.rec("enumerated", to_string(e.value));
      if (s.strategy == "both") {
        out.say("dp:         " + to_string(r.value));
        out.say("enumerated: " + to_string(e.value));
        if (e.value != r.value) {
          out.say("MISMATCH");
          return out.done(kMath);
        }
      } else {
        r = e;
        out.say(to_string(r.value));
      }
    } else {
      out.say(to_string(r.value));
    }
    out.rec("value", to_string(r.value));
    out.rec("reduced", free_word_name(X, r.reduced));
    if (s.witness) {
      std::string th;
      for (std::size_t i = 0; i < r.theta.size(); ++i) {
        th += (i ? " " : "") + std::to_string(r.theta[i]);
      }
      out.both("theta", th);
    }
    return out.done(kOk);
  }

  int cmd_oracle(Session const& s, std::string const& file, std::size_t len) {
    Out         out(s, "oracle");
    auto        L = load_system(file);
    std::size_t n = 0, bad = 0;
    for (auto const& f : ball(L.S, len)) {
      ++n;
      auto a = graev_norm(L.S, f).value;
      auto b = brute_force_norm(L.S, f, bound_for(s, f.size())).value;
      if (a != b) {
        ++bad;
        out.say("mismatch at " + L.S.word_name(f) + ": symmetric " + to_string(a) + ", brute "
                + to_string(b));
      }
    }
    out.both("checked", std::to_string(n) + " elements of length <= " + std::to_string(len));
    out.labelled("mismatches", std::to_string(bad));
    return out.done(bad ? kMath : kOk);
  }

  int cmd_hnn(Session const& s, std::string const& sub, std::string const& file,
              std::vector<std::string> const& words) {
    Out  out(s, "hnn " + sub);
    auto doc = load_document(file);
    auto sys = doc.hnn_system();
    auto r   = sys.check();
    if (!r) {
      out.both("error", "hnn system: " + r.to_string());
      return out.done(kMath);
    }
    if (sub == "dist") {
      if (words.size() != 2) {
        throw CLI::ValidationError("hnn dist needs two words");
      }
      HnnGroup H(sys, 2, s.t_degree);
      auto     f = parse_hnn_word(sys, words[0]), g = parse_hnn_word(sys, words[1]);
      auto     b = H.distance(f, g);
      if (b.exact()) {
        out.both("value", to_string(b.upper));
      } else {
        out.say(to_string(b.lower) + " <= d <= " + to_string(b.upper));
        out.rec("lower", to_string(b.lower));
        out.rec("upper", to_string(b.upper));
      }
      return out.done(kOk);
    }
    if (sub == "check-diam") {
      auto rep = check_diam_criterion(sys.G, sys.A);
      out.labelled("diam", to_string(rep.diam));
      out.both("regime", rep.small ? "diam A <= 1: metrics agree" : "diam A > 1: gap");
      out.both("report", rep.message);
      if (!rep.small) {
        out.rec("graev", to_string(rep.graev_value));
        out.rec("induced", to_string(rep.induced_value));
      }
      return out.done(rep.ok ? kOk : kMath);
    }
    if (sub == "necessary") {
      HnnGroup H(sys, 2, s.t_degree);
      auto     rr = hnn_necessary_condition(
          sys, [&H](HWord const& f, HWord const& g) { return H.distance(f, g).upper; });
      out.both("bound", "d(a, phi(a)) <= 2K = " + to_string(Rational(2) * sys.K) + ": "
                            + verdict(rr));
      return out.done(rr ? kOk : kMath);
    }
    throw CLI::ValidationError("unknown hnn query " + sub);
  }

  std::string matrix_text(FiniteMetricGroup const& G, Matrix const& M) {
    std::string t;
    for (std::size_t i = 0; i < M.size(); ++i) {
      t += G.element_name(static_cast<std::int64_t>(i)) + ":";
      for (auto const& x : M[i]) {
        t += " " + to_string(x);
      }
      t += i + 1 < M.size() ? "\n" : "";
    }
    return t;
  }

  int cmd_bk(Session const& s, std::string const& file) {
    Out  out(s, "bk-metric");
    auto doc = load_document(file);
    if (doc.families.empty()) {
      throw ParseError(0, "no family declared");
    }
    bool ok = true;
    for (auto const& F : doc.families) {
      auto const& G   = doc.group(F.group);
      auto        fam = doc.family(F);
      auto        r   = validate_family(G, fam);
      if (!r) {
        out.both("family", F.group + ": " + r.to_string());
        ok = false;
        continue;
      }
      auto m = bk_metric(G, fam);
      out.say("metric on " + G.name() + ":");
      out.say(matrix_text(G, m.d));
      for (std::size_t i = 0; i < m.d.size(); ++i) {
        std::string row;
        for (auto const& x : m.d[i]) {
          row += (row.empty() ? "" : " ") + to_string(x);
        }
        out.rec("d." + G.element_name(static_cast<std::int64_t>(i)), row);
      }
      out.labelled("sandwich", verdict(m.sandwich));
      ok = ok && static_cast<bool>(m.sandwich);
      if (fam.conjugacy_invariant) {
        auto t = validate_tsi_metric(m.group);
        out.labelled("tsi", verdict(t));
        ok = ok && static_cast<bool>(t);
      }
    }
    return out.done(ok ? kOk : kMath);
  }

  int cmd_extend_norm(Session const& s, std::string const& file) {
    Out  out(s, "extend-norm");
    auto doc = load_document(file);
    // the norm line on a subgroup gives N_A; N_G is a norm line on its group,
    // else the group's metric
    NormDecl const* na = nullptr;
    for (auto const& n : doc.norms) {
      if (doc.subgroups.count(n.target)) {
        na = &n;
      }
    }
    if (!na) {
      throw ParseError(0, "no norm line on a subgroup");
    }
    auto const& gname = doc.owner(na->target);
    auto const& G     = doc.group(gname);
    auto        A     = doc.subgroup(na->target);
    auto        NA    = doc.norm(*na);
    NormTable   NG    = doc.find_norm(gname) ? doc.norm(*doc.find_norm(gname)) : norm_of(G);
    auto        N     = extend_norm(G, NG, A, NA);
    std::string line;
    for (auto const& [g, v] : N) {
      line += (line.empty() ? "" : " ") + G.element_name(g) + "=" + to_string(v);
      out.rec("N." + G.element_name(g), to_string(v));
    }
    out.say(line);
    auto rep = check_extension(G, NG, A, NA, N);
    out.labelled("extends", verdict(rep.extends));
    out.labelled("dominated", verdict(rep.dominated));
    out.labelled("axioms", verdict(rep.axioms));
    out.labelled("conjugacy", rep.normal ? verdict(rep.conjugacy) : "A not normal, not claimed");
    return out.done(rep.ok() ? kOk : kMath);
  }

  int cmd_interleave(Session const& s, std::string const& file) {
    Out  out(s, "interleave");
    auto L = load_document(file);
    auto sys = L.system();
    auto r   = sys.check();
    if (!r || sys.factors.size() != 2) {
      throw ParseError(0, "interleave needs two factors over a common subgroup");
    }
    auto I = interleave_families(sys.factors[0], sys.embed[0], sys.factors[1], sys.embed[1]);
    auto show = [&](std::string key, FiniteMetricGroup const& G, BKFamily const& F) {
      std::string t;
      for (auto const& l : F.levels) {
        t += (t.empty() ? "" : " > ") + detail::set_name(G, l);
      }
      out.both(key, t);
    };
    show("first", sys.factors[0], I.first);
    show("second", sys.factors[1], I.second);
    out.labelled("containments", verdict(I.containments));
    out.both("ratio", "d2/d1 on A in [" + to_string(I.min_ratio) + ", " + to_string(I.max_ratio)
                          + "] over " + std::to_string(I.pairs) + " pairs");
    return out.done(I.ok() ? kOk : kMath);
  }

  int cmd_heisenberg(Session const& s, std::int64_t n) {
    Out  out(s, "heisenberg");
    auto rep = heisenberg_obstruction(n);
    for (auto const& row : rep.rows) {
      auto const& c = row.commutator;
      out.both("n" + std::to_string(row.n),
               "n=" + std::to_string(row.n) + " [x^n,y^n] has corner " + std::to_string(c[0][2])
                   + "; equals z^{n^2} with z=I-E13: " + (row.literal ? "yes" : "no")
                   + "; equals c^{n^2} with c=I+E13: " + (row.central ? "yes" : "no")
                   + "; n^2/(2n) = " + to_string(row.ratio));
    }
    out.labelled("literal", rep.literal_holds ? "holds" : "fails ([x^n,y^n] = z^{-n^2})");
    out.labelled("central", rep.central_holds ? "holds" : "fails");
    out.both("conclusion", "n^2 <= 2n(d(x,e)+d(y,e)) for all n is impossible: no left-invariant "
                           "extension of |b| from the center");
    return out.done(rep.central_holds ? kOk : kMath);
  }

  int cmd_circle(Session const& s, std::string const& a, std::string const& b) {
    Out  out(s, "circle-conj");
    Rational g1, g2;
    try {
      g1 = parse_rational(a);
      g2 = parse_rational(b);
    } catch (std::exception const& e) {
      throw ParseError(0, std::string(e.what()) + " (angles must be exact rationals p/q)");
    }
    auto v = circle_induced_conjugacy(g1, g2);
    out.labelled("conjugate", v.conjugate ? "true" : "false");
    out.both("reason", v.reason);
    return out.done(kOk);
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graev: Graev metrics on free products, amalgams and HNN extensions"};
  app.require_subcommand(1);
  Session s;
  app.add_option("--format", s.format, "human | records")
      ->check(CLI::IsMember({"human", "records"}));
  app.add_option("--seed", s.seed, "seed recorded in the report");
  app.add_option("--strategy", s.strategy, "symmetric | brute | both")
      ->check(CLI::IsMember({"symmetric", "brute", "both"}));
  app.add_option("--max-length", s.max_len, "brute-force bound L")->check(CLI::PositiveNumber);
  app.add_option("--t-degree", s.t_degree, "cap on the t-degree of HNN words")
      ->check(CLI::PositiveNumber);
  app.add_flag("--witness", s.witness, "print the minimizing pair");

  std::string              file, w1, w2, space, hq;
  std::size_t              n = 0;
  std::int64_t             hn = 10;
  std::vector<std::string> hw;
  int                      code = kOk;

  auto* v = app.add_subcommand("validate", "check groups, systems, spaces, families");
  v->add_option("file", file)->required();
  auto* d = app.add_subcommand("dist", "Graev distance of two words");
  d->add_option("file", file)->required();
  d->add_option("f", w1)->required();
  d->add_option("g", w2)->required();
  auto* no = app.add_subcommand("norm", "Graev norm of a word");
  no->add_option("file", file)->required();
  no->add_option("f", w1)->required();
  auto* re = app.add_subcommand("reduce", "normal form");
  re->add_option("file", file)->required();
  re->add_option("w", w1)->required();
  auto* rf = app.add_subcommand("reduced-forms", "all reduced forms of an element");
  rf->add_option("file", file)->required();
  rf->add_option("w", w1)->required();
  auto* tr = app.add_subcommand("tree", "balanced evaluation tree of a trivial word");
  tr->add_option("file", file)->required();
  tr->add_option("zeta", w1)->required();
  auto* ma = app.add_subcommand("matches", "list the matches of length n");
  ma->add_option("n", n)->required()->check(CLI::Range(0, 12));
  auto* fd = app.add_subcommand("free-dist", "Graev distance in a free group");
  fd->add_option("file", file)->required();
  fd->add_option("u", w1)->required();
  fd->add_option("v", w2)->required();
  fd->add_option("--space", space);
  auto* orc = app.add_subcommand("oracle", "compare the norm with brute force on a ball");
  orc->add_option("file", file)->required();
  orc->add_option("len", n, "ball radius")->default_val(2);
  auto* hnn = app.add_subcommand("hnn", "HNN queries: dist | check-diam | necessary");
  hnn->add_option("query", hq)->required()->check(CLI::IsMember({"dist", "check-diam", "necessary"}));
  hnn->add_option("file", file)->required();
  hnn->add_option("words", hw);
  auto* bk = app.add_subcommand("bk-metric", "metric of a Birkhoff-Kakutani family");
  bk->add_option("file", file)->required();
  auto* en = app.add_subcommand("extend-norm", "extend a norm from a subgroup");
  en->add_option("file", file)->required();
  auto* il = app.add_subcommand("interleave", "interleaved families on two factors");
  il->add_option("file", file)->required();
  auto* he = app.add_subcommand("heisenberg", "commutator identity in the Heisenberg group");
  he->add_option("n", hn)->default_val(10)->check(CLI::Range(1, 50));
  auto* ci = app.add_subcommand("circle-conj", "induced conjugacy of rational rotations");
  ci->add_option("g1", w1)->required();
  ci->add_option("g2", w2)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int r = app.exit(e);
    return r == 0 ? kOk : kUsage;
  }

  try {
    if (v->parsed()) {
      code = cmd_validate(s, file);
    } else if (d->parsed()) {
      code = cmd_norm_like(s, file, w1, w2);
    } else if (no->parsed()) {
      code = cmd_norm_like(s, file, w1, std::nullopt);
    } else if (re->parsed()) {
      code = cmd_reduce(s, file, w1);
    } else if (rf->parsed()) {
      code = cmd_reduced_forms(s, file, w1);
    } else if (tr->parsed()) {
      code = cmd_tree(s, file, w1);
    } else if (ma->parsed()) {
      code = cmd_matches(s, n);
    } else if (fd->parsed()) {
      code = cmd_free_dist(s, file, w1, w2, space);
    } else if (orc->parsed()) {
      code = cmd_oracle(s, file, n);
    } else if (hnn->parsed()) {
      code = cmd_hnn(s, hq, file, hw);
    } else if (bk->parsed()) {
      code = cmd_bk(s, file);
    } else if (en->parsed()) {
      code = cmd_extend_norm(s, file);
    } else if (il->parsed()) {
      code = cmd_interleave(s, file);
    } else if (he->parsed()) {
      code = cmd_heisenberg(s, hn);
    } else if (ci->parsed()) {
      code = cmd_circle(s, w1, w2);
    }
  } catch (ParseError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (CLI::ValidationError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMath;
  }
  return code;
}
