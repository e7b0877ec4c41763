// Test-only oracles: brute-force enumeration over small boxes, independent of
// the implementation paths they check.
#pragma once

#include <functional>
#include <random>
#include <vector>

#include "gps/formula.hpp"

namespace gps::test {

// Enumerates all assignments of `vars` over [lo, hi] and calls fn; stops
// early when fn returns false.
inline void for_each_assignment(
    const std::vector<Var>& vars, long lo, long hi,
    const std::function<bool(const std::map<Var, Int>&)>& fn) {
  std::map<Var, Int> a;
  std::function<bool(size_t)> go = [&](size_t i) -> bool {
    if (i == vars.size()) return fn(a);
    for (long v = lo; v <= hi; ++v) {
      a[vars[i]] = v;
      if (!go(i + 1)) return false;
    }
    return true;
  };
  go(0);
}

inline bool eval_under(const Formula& f, const std::map<Var, Int>& a,
                       long binder_radius = 16) {
  return f.eval(
      [&](const Var& v) -> Int {
        auto it = a.find(v);
        if (it == a.end()) throw UsageError("unbound var " + v.str());
        return it->second;
      },
      binder_radius);
}

// Brute-force exists: does some assignment of `evars` over [elo, ehi] make f
// true under the partial assignment `a`?
inline bool exists_oracle(const Formula& f, const std::vector<Var>& evars,
                          long elo, long ehi, const std::map<Var, Int>& a) {
  bool found = false;
  for_each_assignment(evars, elo, ehi, [&](const std::map<Var, Int>& e) {
    std::map<Var, Int> merged = a;
    for (auto& [k, v] : e) merged[k] = v;
    if (eval_under(f, merged)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

// Random LIA formula generator for property tests.
class FormulaGen {
 public:
  FormulaGen(uint64_t seed, std::vector<Var> vars) : rng_(seed), vars_(vars) {}

  Term term(int max_coeff = 4, int max_const = 8) {
    Term t = Term::constant(uniform(-max_const, max_const));
    for (auto& v : vars_) {
      long c = uniform(-max_coeff, max_coeff);
      if (c != 0) t = t + Term::variable(v).scaled(c);
    }
    return t;
  }

  Formula atom() {
    switch (uniform(0, 6)) {
      case 0:
        return Formula::le(term(), term());
      case 1:
        return Formula::lt(term(), term());
      case 2:
        return Formula::eq(term(), term());
      case 3:
        return Formula::ne(term(), term());
      case 4:
        return Formula::ge(term(), term());
      case 5:
        return Formula::divides(2, term());
      default:
        return Formula::divides(3, term());
    }
  }

  Formula formula(int depth = 2) {
    if (depth == 0 || uniform(0, 3) == 0) return atom();
    int n = static_cast<int>(uniform(2, 3));
    std::vector<Formula> kids;
    for (int i = 0; i < n; ++i) kids.push_back(formula(depth - 1));
    return uniform(0, 1) ? Formula::conj(std::move(kids))
                         : Formula::disj(std::move(kids));
  }

  long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng_);
  }

  std::mt19937_64 rng_;
  std::vector<Var> vars_;
};

}  // namespace gps::test
