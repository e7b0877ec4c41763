#include "gps/qe.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gps::qe {

namespace {

size_t count_occurrences(const Formula& f, const Var& x) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return 0;
    case Formula::Kind::Atom:
      return f.atom_data().lhs.coeff(x) != 0 ? 1 : 0;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      size_t n = 0;
      for (auto& k : f.children()) n += count_occurrences(k, x);
      return n;
    }
    case Formula::Kind::Exists:
      return count_occurrences(f.body(), x);
  }
  return 0;
}

void prenex_rec(const Formula& f, std::vector<Var>& binders,
                std::set<std::string>& used, Formula& out);

Formula prenex_children(const Formula& f, std::vector<Var>& binders,
                        std::set<std::string>& used) {
  std::vector<Formula> kids;
  for (auto& k : f.children()) {
    Formula o;
    prenex_rec(k, binders, used, o);
    kids.push_back(o);
  }
  return f.kind() == Formula::Kind::And ? Formula::conj(std::move(kids))
                                        : Formula::disj(std::move(kids));
}

void prenex_rec(const Formula& f, std::vector<Var>& binders,
                std::set<std::string>& used, Formula& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
      out = f;
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out = prenex_children(f, binders, used);
      return;
    case Formula::Kind::Exists: {
      Formula body = f.body();
      for (auto& b : f.binders()) {
        Var hoisted = b;
        if (!used.insert(b.name).second) {
          hoisted = cur(fresh_mid_name(b.name));
          used.insert(hoisted.name);
          body = body.substituted(b, Term::variable(hoisted));
        }
        binders.push_back(hoisted);
      }
      prenex_rec(body, binders, used, out);
      return;
    }
  }
}

}  // namespace

std::pair<std::vector<Var>, Formula> prenex(const Formula& f) {
  std::vector<Var> binders;
  std::set<std::string> used;
  for (auto& v : f.free_vars()) used.insert(v.name);
  Formula out;
  prenex_rec(f, binders, used, out);
  return {std::move(binders), std::move(out)};
}

namespace {

// Rewrites g under the substitution c*x := -r (c > 0), multiplying affected
// atoms through by c.
Formula rewrite_with_scaled_def(const Formula& g, const Var& x, const Int& c,
                                const Term& r) {
  switch (g.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return g;
    case Formula::Kind::Atom: {
      const Atom& b = g.atom_data();
      Int cb = b.lhs.coeff(x);
      if (cb == 0) return g;
      Term rest = b.lhs - Term::variable(x).scaled(cb);
      // c*(cb*x + rest) = cb*(c*x) + c*rest = -cb*r + c*rest
      Term nt = rest.scaled(c) - r.scaled(cb);
      Atom out{b.kind, nt, b.modulus == 0 ? Int(0) : b.modulus * c};
      return Formula::atom(std::move(out));
    }
    case Formula::Kind::And: {
      std::vector<Formula> ks;
      for (auto& k : g.children())
        ks.push_back(rewrite_with_scaled_def(k, x, c, r));
      return Formula::conj(std::move(ks));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> ks;
      for (auto& k : g.children())
        ks.push_back(rewrite_with_scaled_def(k, x, c, r));
      return Formula::disj(std::move(ks));
    }
    case Formula::Kind::Exists:
      throw std::logic_error("quantifier inside QF elimination");
  }
  throw std::logic_error("bad kind");
}

// Looks for a conjunction-spine equality defining x and substitutes it.
std::optional<Formula> try_equality_substitution(const Var& x,
                                                 const Formula& f) {
  std::vector<Formula> spine;
  if (f.kind() == Formula::Kind::And)
    spine = f.children();
  else if (f.kind() == Formula::Kind::Atom)
    spine = {f};
  else
    return std::nullopt;

  for (size_t i = 0; i < spine.size(); ++i) {
    if (spine[i].kind() != Formula::Kind::Atom) continue;
    const Atom& a = spine[i].atom_data();
    if (a.kind != AtomKind::EqZ) continue;
    Int c = a.lhs.coeff(x);
    if (c == 0) continue;
    Term lhs = c > 0 ? a.lhs : -a.lhs;
    if (c < 0) c = -c;
    Term r = lhs - Term::variable(x).scaled(c);  // c*x + r = 0
    std::vector<Formula> rebuilt;
    for (size_t j = 0; j < spine.size(); ++j) {
      if (j == i) continue;
      if (c == 1)
        rebuilt.push_back(spine[j].substituted(x, -r));
      else
        rebuilt.push_back(rewrite_with_scaled_def(spine[j], x, c, r));
    }
    if (c > 1) rebuilt.push_back(Formula::atom({AtomKind::Div, r, c}));
    return Formula::conj(std::move(rebuilt));
  }
  return std::nullopt;
}

struct CooperCtx {
  Var x;
  Int delta = 1;   // lcm of |coeff(x)|
  Int period = 1;  // lcm of delta and the scaled divisibility moduli
  std::vector<Term> lower_bounds;  // t with y > t somewhere in f
  std::vector<Term> upper_bounds;  // t with y < t somewhere in f
};

void scan_coeffs(const Formula& f, const Var& x, Int& delta) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      Int c = f.atom_data().lhs.coeff(x);
      if (c != 0) delta = lcm(delta, c);
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (auto& k : f.children()) scan_coeffs(k, x, delta);
      return;
    default:
      return;
  }
}

void push_unique(std::vector<Term>& v, const Term& t) {
  for (auto& u : v)
    if (u == t) return;
  v.push_back(t);
}

void collect_bounds(const Formula& f, CooperCtx& cx) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      const Atom& a = f.atom_data();
      Int c = a.lhs.coeff(cx.x);
      if (c == 0) return;
      Int m = cx.delta / (c < 0 ? -c : c);
      Term r = (a.lhs - Term::variable(cx.x).scaled(c)).scaled(m);
      bool pos = c > 0;
      switch (a.kind) {
        case AtomKind::LeZ:
          // pos:  y + r <= 0  gives  y <  -r + 1
          // neg: -y + r <= 0  gives  y >   r - 1
          if (pos)
            push_unique(cx.upper_bounds, -r + Term::constant(1));
          else
            push_unique(cx.lower_bounds, r - Term::constant(1));
          break;
        case AtomKind::EqZ: {
          Term val = pos ? -r : r;  // y = val
          push_unique(cx.lower_bounds, val - Term::constant(1));
          push_unique(cx.upper_bounds, val + Term::constant(1));
          break;
        }
        case AtomKind::NeZ: {
          Term val = pos ? -r : r;
          push_unique(cx.lower_bounds, val);
          push_unique(cx.upper_bounds, val);
          break;
        }
        case AtomKind::Div:
        case AtomKind::NotDiv:
          cx.period = lcm(cx.period, a.modulus * m);
          break;
      }
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (auto& k : f.children()) collect_bounds(k, cx);
      return;
    default:
      return;
  }
}

enum class Limit { None, MinusInf, PlusInf };

// Substitutes y := t (for y = delta*x) into f, taking limits on bound atoms.
Formula subst_scaled(const Formula& f, const CooperCtx& cx, const Term& t,
                     Limit limit) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom: {
      const Atom& a = f.atom_data();
      Int c = a.lhs.coeff(cx.x);
      if (c == 0) return f;
      Int m = cx.delta / (c < 0 ? -c : c);
      bool pos = c > 0;
      Term r = (a.lhs - Term::variable(cx.x).scaled(c)).scaled(m);
      Term applied = (pos ? t : -t) + r;
      switch (a.kind) {
        case AtomKind::LeZ:
          if (limit == Limit::MinusInf) return Formula::truth(!pos);
          if (limit == Limit::PlusInf) return Formula::truth(pos);
          return Formula::atom({AtomKind::LeZ, applied, 0});
        case AtomKind::EqZ:
          if (limit != Limit::None) return Formula::truth(false);
          return Formula::atom({AtomKind::EqZ, applied, 0});
        case AtomKind::NeZ:
          if (limit != Limit::None) return Formula::truth(true);
          return Formula::atom({AtomKind::NeZ, applied, 0});
        case AtomKind::Div:
          return Formula::atom({AtomKind::Div, applied, a.modulus * m});
        case AtomKind::NotDiv:
          return Formula::atom({AtomKind::NotDiv, applied, a.modulus * m});
      }
      throw std::logic_error("bad atom");
    }
    case Formula::Kind::And: {
      std::vector<Formula> ks;
      for (auto& k : f.children()) ks.push_back(subst_scaled(k, cx, t, limit));
      return Formula::conj(std::move(ks));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> ks;
      for (auto& k : f.children()) ks.push_back(subst_scaled(k, cx, t, limit));
      return Formula::disj(std::move(ks));
    }
    case Formula::Kind::Exists:
      throw std::logic_error("quantifier inside QF elimination");
  }
  throw std::logic_error("bad kind");
}

}  // namespace

Formula eliminate_one_exact(const Var& x, const Formula& f, size_t node_cap) {
  if (count_occurrences(f, x) == 0) return f;
  if (auto sub = try_equality_substitution(x, f)) return simplify(*sub);

  CooperCtx cx;
  cx.x = x;
  scan_coeffs(f, x, cx.delta);
  if (cx.delta < 0) cx.delta = -cx.delta;
  cx.period = cx.delta;
  collect_bounds(f, cx);

  bool use_lower = cx.lower_bounds.size() <= cx.upper_bounds.size();
  const auto& bounds = use_lower ? cx.lower_bounds : cx.upper_bounds;

  if (cx.period > 512) throw BlowupError("divisibility period too large");
  long period = static_cast<long>(cx.period);
  size_t estimate =
      static_cast<size_t>(period) * (bounds.size() + 1) * f.node_count();
  if (estimate > node_cap)
    throw BlowupError("cooper expansion exceeds node cap");

  Formula delta_link_true = Formula::truth(true);
  std::vector<Formula> disjuncts;
  for (long j = 1; j <= period; ++j) {
    Term tj = Term::constant(use_lower ? j : -j);
    Formula inst = subst_scaled(
        f, cx, tj, use_lower ? Limit::MinusInf : Limit::PlusInf);
    if (cx.delta > 1)
      inst = inst.and_with(Formula::atom({AtomKind::Div, tj, cx.delta}));
    disjuncts.push_back(std::move(inst));
  }
  for (auto& b : bounds) {
    for (long j = 1; j <= period; ++j) {
      Term t = use_lower ? b + Term::constant(j) : b - Term::constant(j);
      Formula inst = subst_scaled(f, cx, t, Limit::None);
      if (cx.delta > 1)
        inst = inst.and_with(Formula::atom({AtomKind::Div, t, cx.delta}));
      disjuncts.push_back(std::move(inst));
    }
  }
  Formula out = simplify(Formula::disj(std::move(disjuncts)));
  if (out.node_count() > node_cap)
    throw BlowupError("cooper result exceeds node cap");
  return out;
}

namespace {

Formula eliminate_one_over(const Var& x, const Formula& f, size_t node_cap);

Formula eliminate_over_conj(const Var& x, std::vector<Formula> spine,
                            size_t node_cap) {
  Formula whole = Formula::conj(spine);
  if (auto sub = try_equality_substitution(x, whole)) {
    Formula s = simplify(*sub);
    // The scaled rewrite keeps divisibility side conditions; x is gone.
    if (count_occurrences(s, x) == 0) return s;
    return eliminate_one_over(x, s, node_cap);
  }
  if (whole.kind() == Formula::Kind::And)
    spine = whole.children();
  else
    spine = {whole};

  std::vector<Formula> keep;
  std::vector<std::pair<Int, Term>> lowers;  // a*x >= t with a > 0
  std::vector<std::pair<Int, Term>> uppers;  // a*x <= t with a > 0
  for (auto& g : spine) {
    if (count_occurrences(g, x) == 0) {
      keep.push_back(g);
      continue;
    }
    if (g.kind() == Formula::Kind::Atom) {
      const Atom& a = g.atom_data();
      Int c = a.lhs.coeff(x);
      Term r = a.lhs - Term::variable(x).scaled(c);
      // c*x + r <= 0 reads as c*x <= -r; with c normalized positive this is
      // an upper bound c*x <= -r or a lower bound (-c)*x >= r.
      Int cc = c > 0 ? c : -c;
      Term bound = c > 0 ? -r : r;
      if (a.kind == AtomKind::LeZ) {
        (c > 0 ? uppers : lowers).emplace_back(cc, bound);
      } else if (a.kind == AtomKind::EqZ) {
        uppers.emplace_back(cc, bound);
        lowers.emplace_back(cc, bound);
      }
      // NeZ / Div / NotDiv need divisibility reasoning: dropped.
      continue;
    }
    keep.push_back(eliminate_one_over(x, g, node_cap));
  }
  for (auto& [a, l] : lowers)
    for (auto& [b, u] : uppers)
      keep.push_back(Formula::le(l.scaled(b), u.scaled(a)));
  return Formula::conj(std::move(keep));
}

Formula eliminate_one_over(const Var& x, const Formula& f, size_t node_cap) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
      return eliminate_over_conj(x, {f}, node_cap);
    case Formula::Kind::And:
      return eliminate_over_conj(x, f.children(), node_cap);
    case Formula::Kind::Or: {
      std::vector<Formula> ks;
      for (auto& k : f.children())
        ks.push_back(eliminate_one_over(x, k, node_cap));
      return Formula::disj(std::move(ks));
    }
    case Formula::Kind::Exists:
      return Formula::exists(f.binders(),
                             eliminate_one_over(x, f.body(), node_cap));
  }
  throw std::logic_error("bad kind");
}

Var pick_next(const std::vector<Var>& vars, const Formula& f) {
  std::vector<Formula> spine;
  if (f.kind() == Formula::Kind::And)
    spine = f.children();
  else if (f.kind() == Formula::Kind::Atom)
    spine = {f};
  for (auto& v : vars)
    for (auto& c : spine)
      if (c.kind() == Formula::Kind::Atom &&
          c.atom_data().kind == AtomKind::EqZ &&
          c.atom_data().lhs.coeff(v) != 0)
        return v;
  Var best = vars[0];
  size_t best_n = SIZE_MAX;
  for (auto& v : vars) {
    size_t n = count_occurrences(f, v);
    if (n < best_n) {
      best_n = n;
      best = v;
    }
  }
  return best;
}

}  // namespace

Formula eliminate(const std::vector<Var>& vars, const Formula& f, Mode mode,
                  size_t node_cap) {
  auto [hoisted, matrix] = prenex(f);
  std::vector<Var> todo = vars;
  for (auto& b : hoisted) todo.push_back(b);
  Formula g = simplify(matrix);
  while (!todo.empty()) {
    auto fv = g.free_vars();
    std::erase_if(todo, [&](const Var& v) { return !fv.count(v); });
    if (todo.empty()) break;
    Var x = pick_next(todo, g);
    std::erase_if(todo, [&](const Var& v) { return v == x; });
    g = mode == Mode::Exact ? eliminate_one_exact(x, g, node_cap)
                            : simplify(eliminate_one_over(x, g, node_cap));
  }
  return g;
}

Formula project_pre(const Formula& f, Mode mode, size_t node_cap) {
  std::vector<Var> primed;
  for (auto& v : f.free_vars())
    if (v.tag == VarTag::Next) primed.push_back(v);
  if (mode == Mode::Exact) {
    try {
      return simplify(eliminate(primed, f, Mode::Exact, node_cap));
    } catch (const BlowupError&) {
    }
  }
  return simplify(eliminate(primed, f, Mode::OverApprox, node_cap));
}

Formula project_post(const Formula& f, Mode mode, size_t node_cap) {
  std::vector<Var> unprimed;
  for (auto& v : f.free_vars())
    if (v.tag == VarTag::Cur) unprimed.push_back(v);
  Formula g;
  if (mode == Mode::Exact) {
    try {
      g = eliminate(unprimed, f, Mode::Exact, node_cap);
    } catch (const BlowupError&) {
      g = eliminate(unprimed, f, Mode::OverApprox, node_cap);
    }
  } else {
    g = eliminate(unprimed, f, Mode::OverApprox, node_cap);
  }
  return simplify(g.renamed([](const Var& v) { return v.unprimed(); }));
}

SpResult sp(const Formula& psi, const Formula& f, Mode mode, size_t node_cap) {
  std::map<Var, Term> sub;
  std::vector<Var> mids;
  std::set<Var> pre_vars;
  for (auto& v : psi.free_vars())
    if (v.tag == VarTag::Cur) pre_vars.insert(v);
  for (auto& v : f.free_vars())
    if (v.tag == VarTag::Cur) pre_vars.insert(v);
  for (auto& v : pre_vars) {
    Var m = cur(fresh_mid_name(v.name));
    mids.push_back(m);
    sub[v] = Term::variable(m);
  }
  Formula conj = psi.substituted(sub).and_with(f.substituted(sub));
  SpResult out;
  if (mode == Mode::Exact) {
    try {
      out.formula = eliminate(mids, conj, Mode::Exact, node_cap);
      out.exact = true;
    } catch (const BlowupError&) {
      out.formula = eliminate(mids, conj, Mode::OverApprox, node_cap);
      out.exact = false;
    }
  } else {
    out.formula = eliminate(mids, conj, Mode::OverApprox, node_cap);
    out.exact = false;
  }
  out.formula =
      simplify(out.formula.renamed([](const Var& v) { return v.unprimed(); }));
  return out;
}

Formula pre_image(const Formula& f, const Formula& post, Mode mode,
                  size_t node_cap) {
  Formula post_primed = post.renamed([](const Var& v) { return v.primed(); });
  Formula conj = f.and_with(post_primed);
  std::vector<Var> primed;
  for (auto& v : conj.free_vars())
    if (v.tag == VarTag::Next) primed.push_back(v);
  if (mode == Mode::Exact) {
    try {
      return simplify(eliminate(primed, conj, Mode::Exact, node_cap));
    } catch (const BlowupError&) {
    }
  }
  return simplify(eliminate(primed, conj, Mode::OverApprox, node_cap));
}

std::optional<Int> solve_univariate(const Var& x, const Formula& f) {
  if (f.is_true()) return Int(0);
  if (f.is_false()) return std::nullopt;

  Int period = 1;
  std::vector<Int> boundaries{0};
  std::function<void(const Formula&)> scan = [&](const Formula& g) {
    switch (g.kind()) {
      case Formula::Kind::Atom: {
        const Atom& a = g.atom_data();
        Int c = a.lhs.coeff(x);
        if (c == 0) return;
        Int r = a.lhs.constant_part();
        if (a.kind == AtomKind::Div || a.kind == AtomKind::NotDiv) {
          Int g2 = gcd(c, a.modulus);
          period = lcm(period, a.modulus / g2);
          return;
        }
        boundaries.push_back(floor_div(-r, c));
        boundaries.push_back(ceil_div(-r, c));
        return;
      }
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (auto& k : g.children()) scan(k);
        return;
      default:
        return;
    }
  };
  scan(f);

  auto holds = [&](const Int& v) {
    return f.eval([&](const Var& u) -> Int {
      if (u == x) return v;
      throw UsageError("solve_univariate: unexpected free variable " +
                       u.str());
    });
  };

  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                   boundaries.end());
  long p = static_cast<long>(period);
  std::set<Int> cands;
  for (auto& b : boundaries)
    for (long j = -p; j <= p; ++j) cands.insert(b + j);
  for (long j = 1; j <= p; ++j) {
    cands.insert(boundaries.front() - p - j);
    cands.insert(boundaries.back() + p + j);
  }
  std::vector<Int> ordered(cands.begin(), cands.end());
  std::sort(ordered.begin(), ordered.end(), [](const Int& a, const Int& b) {
    Int aa = a < 0 ? -a : a, ab = b < 0 ? -b : b;
    return aa != ab ? aa < ab : a < b;
  });
  for (auto& v : ordered)
    if (holds(v)) return v;
  return std::nullopt;
}

}  // namespace gps::qe
