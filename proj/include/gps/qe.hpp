#pragma once

#include "gps/formula.hpp"

namespace gps::qe {

inline constexpr size_t kDefaultNodeCap = 50000;

enum class Mode { Exact, OverApprox };

// Exact-mode elimination exceeded the node cap.
struct BlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hoists all existential binders to the top (freshening on collision).
// Returns the binder list and the quantifier-free matrix.
std::pair<std::vector<Var>, Formula> prenex(const Formula& f);

// exists vars. f.  Exact mode is Cooper's method and returns an equivalent
// quantifier-free formula or throws BlowupError.  OverApprox mode is a
// Fourier-Motzkin-style bound combination that always terminates and returns
// a formula implied by the exact result.  Inner binders of f are hoisted and
// eliminated alongside `vars`.
Formula eliminate(const std::vector<Var>& vars, const Formula& f, Mode mode,
                  size_t node_cap = kDefaultNodeCap);

// Single-variable exact elimination on a quantifier-free NNF formula.
Formula eliminate_one_exact(const Var& x, const Formula& f, size_t node_cap);

// Over-approximations of exists X'. f (restricted to unprimed variables) and
// of exists X. f renamed to unprimed.
Formula project_pre(const Formula& f, Mode mode = Mode::OverApprox,
                    size_t node_cap = kDefaultNodeCap);
Formula project_post(const Formula& f, Mode mode = Mode::OverApprox,
                     size_t node_cap = kDefaultNodeCap);

struct SpResult {
  Formula formula;
  bool exact = true;
};

// Strongest postcondition (exists X. psi /\ f)[X' -> X].  Exact when the
// node cap allows; degrades to the over-approximate projection otherwise.
SpResult sp(const Formula& psi, const Formula& f, Mode mode = Mode::Exact,
            size_t node_cap = kDefaultNodeCap);

// Over-approximation of the states that can take one f-step into post:
// exists X'. f /\ post[X -> X'].
Formula pre_image(const Formula& f, const Formula& post,
                  Mode mode = Mode::Exact, size_t node_cap = kDefaultNodeCap);

// Model search for a formula whose only free variable is x (all other
// symbols already evaluated away).  Complete for linear integer arithmetic:
// candidates are taken near atom boundaries and over one divisibility period.
std::optional<Int> solve_univariate(const Var& x, const Formula& f);

}  // namespace gps::qe
