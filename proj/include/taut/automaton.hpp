#pragma once

#include <optional>
#include <variant>

#include "taut/lincomb.hpp"
#include "taut/sexpr.hpp"
#include "taut/storemonad.hpp"
#include "taut/term.hpp"

namespace taut {

enum class MonadKind { Pow, Lin, Stack, NdStack, MultiStack, Tape };

// Which monad a T-automaton lives in, with its parameters.
struct MonadDesc {
    MonadKind kind = MonadKind::Pow;
    SemiringOps sr;                 // Lin
    std::vector<std::string> syms;  // storage alphabet (single-character names)
    int m = 1;                      // stack count for MultiStack

    int nsym() const { return static_cast<int>(syms.size()); }
    int sym_index(const std::string& name) const;
    int blank() const;  // index of "_" (tape)
};

using StateSet = std::set<int>;
using TElem = std::variant<StateSet, LinComb<int>, StackElem<int>, NdStackElem<int>,
                           MultiStackElem<int>, TapeElem<int>>;
// Output values: Scalar covers powerset (bool) and semimodule automata.
using OutVal = std::variant<Scalar, StackPred, MultiStackPred, WindowPred>;

// The paper's triple (o, t, a): finite states, transitions into TX, and the
// per-instance output algebra baked into algebra_map below.
struct TAutomaton {
    MonadDesc monad;
    std::vector<std::string> inputs;
    std::vector<std::string> states;
    std::vector<OutVal> out;                // per state
    std::vector<std::vector<TElem>> trans;  // [state][input]

    int state_index(const std::string& name) const;
    int input_index(const std::string& name) const;
};

// --- monad-element operations dispatched on the monad kind -----------------

TElem unit_elem(const MonadDesc& d, int state);
TElem empty_elem(const MonadDesc& d);  // additive kinds only (Pow/Lin/Nd/Multi)
TElem kleisli_elem(const MonadDesc& d, const std::function<TElem(int)>& f, const TElem& p);
TElem elem_minimize(const MonadDesc& d, TElem e);
bool elem_eq(const MonadDesc& d, const TElem& a, const TElem& b);
std::string elem_key(const MonadDesc& d, const TElem& e);  // canonical, minimized
std::vector<int> elem_results(const TElem& e);             // states mentioned

// Output algebra: a(Tf(e)).
OutVal algebra_map(const MonadDesc& d, const TElem& e, const std::function<OutVal(int)>& f);

bool out_eq(const MonadDesc& d, const OutVal& a, const OutVal& b);
std::string out_print(const MonadDesc& d, const OutVal& v);
OutVal out_parse(const MonadDesc& d, const SExpr& e);
SExpr out_to_sexpr(const MonadDesc& d, const OutVal& v);
// Truthiness for acceptance-style queries: nonzero scalar / predicate at the
// designated start storage (empty stack(s); blank tape).
bool out_truthy(const MonadDesc& d, const OutVal& v);

// Theory operations on the output object B (used to evaluate expression
// output terms): op is the surface operation name; syms carries symbol /
// index parameters, e.g. push symbol or stack index.
OutVal b_apply_op(const MonadDesc& d, const std::string& op,
                  const std::vector<std::string>& params, const std::vector<OutVal>& args);
// B-literal from an atom (true/false/number/semiring value).
OutVal b_literal(const MonadDesc& d, const std::string& text);

// Transition terms <-> monad elements (machine-file theory-term syntax).
TElem elem_from_sexpr(const TAutomaton& a, const SExpr& e);
SExpr elem_to_sexpr(const TAutomaton& a, const TElem& e);  // term form if possible
// Term form over state variables; throws for monads without generator terms
// (multi-stack, tape).
SExpr elem_to_term_sexpr(const TAutomaton& a, const TElem& e);

// --- semantics -------------------------------------------------------------

using Word = std::vector<int>;  // input indices

// Trace semantics by the derivative recursion.
OutVal trace(const TAutomaton& a, int state, const Word& w);

struct MooreAutomaton {
    std::vector<std::string> inputs;
    std::vector<std::string> states;
    std::vector<OutVal> out;
    std::vector<std::vector<int>> next;  // [state][input]
};

OutVal moore_output(const MooreAutomaton& m, int state, const Word& w);

struct DeterminizeResult {
    bool budget_exhausted = false;
    MooreAutomaton moore;           // valid when !budget_exhausted
    std::vector<TElem> state_elems; // the TX-elements behind each Moore state
    int start = 0;
};

// Generalized powerset construction from eta(x0), canonical minimized
// TX-elements as states.
DeterminizeResult determinize(const TAutomaton& a, int x0, int max_states = 10000);

enum class EquivVerdict { Equivalent, Inequivalent, BudgetExhausted };

struct EquivResult {
    EquivVerdict verdict;
    Word witness;  // for Inequivalent
};

EquivResult trace_equiv_exact(const TAutomaton& a1, int x1, const TAutomaton& a2, int x2,
                              int max_states = 10000);
EquivResult trace_equiv_bounded(const TAutomaton& a1, int x1, const TAutomaton& a2, int x2,
                                int maxlen);

// Derivative closure of an abstract series: deriv must be total on inputs;
// key must be injective on distinct series states.
struct SeriesOps {
    int ninputs;
    std::function<OutVal(const std::string&)> out;                 // by key
    std::function<std::string(const std::string&, int)> deriv;     // key, input -> key
};

std::optional<MooreAutomaton> rational_closure(const std::string& start, const SeriesOps& s,
                                               int max_states = 10000);

// --- files -----------------------------------------------------------------

MonadDesc monad_from_sexpr(const SExpr& e);
SExpr monad_to_sexpr(const MonadDesc& d);
TAutomaton automaton_from_sexpr(const SExpr& e);
SExpr automaton_to_sexpr(const TAutomaton& a);
TAutomaton automaton_parse(const std::string& text);
std::string automaton_print(const TAutomaton& a);

// Validation used by `check`: totality, arity of stored tables, algebra unit
// law on sampled outputs. Returns problem descriptions.
std::vector<std::string> automaton_check(const TAutomaton& a);

// Parse a word over the automaton's inputs: either one atom per symbol, a
// comma-separated list, or (for single-character input names) a plain string.
Word word_parse(const std::vector<std::string>& inputs, const std::string& text);
std::string word_print(const std::vector<std::string>& inputs, const Word& w);

}  // namespace taut
