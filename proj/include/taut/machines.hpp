#pragma once

#include "taut/automaton.hpp"

namespace taut {

enum class RunVerdict { Accept, Reject, Unknown };

// ---------------------------------------------------------------------------
// Deterministic pushdown automaton with epsilon moves. Stack symbols are
// single characters; push strings are written top-first ("-" = empty in
// files). delta keys use input index -1 for epsilon rows.
// ---------------------------------------------------------------------------

struct Dpda {
    std::vector<std::string> inputs;
    std::string stack_syms;  // includes the bottom symbol
    char bottom = '_';
    std::vector<std::string> states;
    std::map<std::tuple<int, int, char>, std::pair<int, std::string>> delta;
    int start = 0;
    std::set<int> accept;

    int state_index(const std::string& name) const;
    int input_index(const std::string& name) const;
    bool real_time() const;  // no epsilon rows
};

// Exclusivity (per (q,gamma) either the eps row or input rows) and
// bottom-preservation (rows on the bottom symbol re-emit it).
std::vector<std::string> dpda_check(const Dpda& m);
bool dpda_accepts(const Dpda& m, const Word& w, int eps_fuel = 10000);
Dpda dpda_from_sexpr(const SExpr& e);
SExpr dpda_to_sexpr(const Dpda& m);
Dpda dpda_parse(const std::string& text);
std::string dpda_print(const Dpda& m);

// ---------------------------------------------------------------------------
// Nondeterministic pushdown quasi-real-time machine over m stacks; a
// transition reads the tops of all stacks at once.
// ---------------------------------------------------------------------------

struct Npdqrt {
    std::vector<std::string> inputs;
    std::string stack_syms;
    char bottom = '_';
    int m = 1;
    std::vector<std::string> states;
    std::map<std::tuple<int, int, std::string>,  // (state, input/-1, tops)
             std::set<std::pair<int, std::vector<std::string>>>>
        delta;
    int start = 0;
    std::set<int> accept;
    bool accept_empty = false;  // accept by empty storage instead of final states

    int state_index(const std::string& name) const;
    int input_index(const std::string& name) const;
    bool real_time() const;
};

bool npdqrt_accepts(const Npdqrt& m, const Word& w, int eps_fuel = 50);
Npdqrt npdqrt_from_sexpr(const SExpr& e);
SExpr npdqrt_to_sexpr(const Npdqrt& m);
Npdqrt npdqrt_parse(const std::string& text);
std::string npdqrt_print(const Npdqrt& m);

// ---------------------------------------------------------------------------
// Reactive deterministic Turing machine: transitions consume an input letter
// or fire silently (tau, input index -1); each writes one cell and moves the
// head by at most one position.
// ---------------------------------------------------------------------------

struct Rdtm {
    std::vector<std::string> inputs;
    std::string tape_syms;  // includes the blank
    char blank = '_';
    std::vector<std::string> states;
    std::map<std::tuple<int, int, char>, std::tuple<int, char, int>> delta;  // move -1/0/+1
    int start = 0;
    std::set<int> accept;

    int state_index(const std::string& name) const;
    int input_index(const std::string& name) const;
};

RunVerdict rdtm_accepts(const Rdtm& m, const Word& w, int fuel = 10000);
Rdtm rdtm_from_sexpr(const SExpr& e);
SExpr rdtm_to_sexpr(const Rdtm& m);
Rdtm rdtm_parse(const std::string& text);
std::string rdtm_print(const Rdtm& m);

// ---------------------------------------------------------------------------
// Classical one-tape deterministic Turing machine; the input word is written
// on the tape before the run and the machine halts where delta is undefined.
// Input letters must name tape symbols.
// ---------------------------------------------------------------------------

struct Dtm {
    std::vector<std::string> inputs;
    std::string tape_syms;
    char blank = '_';
    std::vector<std::string> states;
    std::map<std::pair<int, char>, std::tuple<int, char, int>> delta;
    int start = 0;
    std::set<int> accept;

    int state_index(const std::string& name) const;
};

RunVerdict dtm_accepts(const Dtm& m, const Word& w, int fuel = 10000);
Dtm dtm_from_sexpr(const SExpr& e);
SExpr dtm_to_sexpr(const Dtm& m);
Dtm dtm_parse(const std::string& text);
std::string dtm_print(const Dtm& m);

// ---------------------------------------------------------------------------
// Converters between classical machines and automata over store monads.
// ---------------------------------------------------------------------------

struct StoreAutomaton {
    TAutomaton aut;
    int start = 0;
    int init_sym = 0;  // initial stack symbol (index into aut.monad.syms)
};

// Real-time DPDA -> stack automaton with an explicit dead state; transitions
// read only the top stack symbol.
StoreAutomaton dpda_to_stack_automaton(const Dpda& M);
// Stack automaton -> quasi-real-time DPDA with prefix-buffering states; the
// produced machine starts by pushing gamma0 over its bottom marker.
Dpda stack_automaton_to_dpda(const TAutomaton& a, int x0, int gamma0);

// Real-time NPDQRT -> nondeterministic multi-stack automaton, and back via
// per-stack prefix buffering.
StoreAutomaton npdqrt_to_multistack_automaton(const Npdqrt& M);
Npdqrt multistack_automaton_to_npdqrt(const TAutomaton& a, int x0, int gamma0);

// Two-phase simulation: copy the input onto the tape, then run the machine
// on internal transitions only.
Rdtm dtm_to_rdtm(const Dtm& M);

// RDTM -> tape automaton over inputs A + {tau} with radius-1 elements, and
// back via window-buffered states with internal write/reread chains.
struct TapeAutomatonResult {
    TAutomaton aut;
    int start = 0;
};
TapeAutomatonResult rdtm_to_tape_automaton(const Rdtm& M);
Rdtm tape_automaton_to_rdtm(const TAutomaton& a, int x0);

}  // namespace taut
