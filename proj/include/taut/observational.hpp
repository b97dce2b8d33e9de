#pragma once

#include "taut/machines.hpp"

namespace taut {

// ---------------------------------------------------------------------------
// Continuation-monad (CPS) view of a T-automaton with a finite output object.
// A CpsElem is the full extensional table of an element of T_B X = B^X -> B:
// functions f: X -> B are encoded base-|B| with digit i = f(x_i), and table
// entries index into the interned B carrier of the owning automaton.
// ---------------------------------------------------------------------------

struct CpsElem {
    std::vector<int> table;  // size |B|^|X|

    bool operator==(const CpsElem& o) const = default;
    bool operator<(const CpsElem& o) const { return table < o.table; }
};

struct CpsAutomaton {
    MonadDesc monad;  // of the source automaton; used for printing B values
    std::vector<std::string> inputs;
    std::vector<std::string> states;
    std::vector<OutVal> bvals;  // the finite output object B
    std::vector<int> out;       // per state, index into bvals
    std::vector<std::vector<CpsElem>> trans;  // [state][input]

    int nb() const { return static_cast<int>(bvals.size()); }
};

// Build the CPS-transform. The output object is the closure of the output
// values under the algebra applied along every transition element; throws
// when that closure exceeds max_b (B not finite).
CpsAutomaton cps_transform(const TAutomaton& a, int max_b = 64);

// Trace semantics of the CPS automaton from eta(x): Kleisli-compose the word
// columns and evaluate at the output assignment.
OutVal cps_trace(const CpsAutomaton& c, int state, const Word& w);

// Generalized powerset construction over CpsElem states; always converges
// when the budget covers |B|^(|B|^|X|) reachable tables.
struct CpsDeterminizeResult {
    bool budget_exhausted = false;
    MooreAutomaton moore;
    int start = 0;
};
CpsDeterminizeResult cps_determinize(const CpsAutomaton& c, int x0, int max_states = 10000);

// ---------------------------------------------------------------------------
// Omega-additive monoid structure on B, driving the tau-chain sums.
// ---------------------------------------------------------------------------

struct OmegaMonoid {
    OutVal zero;
    std::function<OutVal(const OutVal&, const OutVal&)> add;
    bool idempotent = true;
    int stable_steps = 10;  // consecutive unchanged partial sums required
                            // for non-idempotent instances
};

// Pointwise join / semiring sum on the automaton's output object.
OmegaMonoid omega_join(const MonadDesc& d);
OmegaMonoid omega_sum(const MonadDesc& d);

// Tau-elimination: CPS-transform over A + {tau}, then replace each transition
// by the sum over tau-chain prefixes and each output by the tau-star closure
// of the outputs (saturation). The result is an automaton over A without
// "tau". Returns nullopt when the partial sums do not stabilize within fuel
// iterations or the required B closure is not finite; throws when no monoid
// is supplied (the sums are undefined without one).
std::optional<CpsAutomaton> tau_eliminate(const TAutomaton& a,
                                          const std::optional<OmegaMonoid>& om,
                                          int fuel = 1000, int max_b = 64);

// ---------------------------------------------------------------------------
// Observational trace semantics computed directly on configurations, without
// materializing CpsElem tables (usable when B is infinite, e.g. tape
// automata). "tau" in the input alphabet is the unobservable action.
// ---------------------------------------------------------------------------

struct ObsResult {
    RunVerdict verdict = RunVerdict::Unknown;
    OutVal value;  // valid unless Unknown
};

// Powerset: epsilon-closure (exact). Semimodule: partial sums over tau-chain
// lengths with stabilization. Tape: configuration search started at head 0 on
// the all-blank tape, evaluating the output predicate at the reached
// configurations. Fuel counts configuration expansions / sum iterations.
ObsResult obs_trace(const TAutomaton& a, int state, const Word& w, int fuel = 10000);

}  // namespace taut
