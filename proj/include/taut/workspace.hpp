#pragma once

#include "taut/expr.hpp"
#include "taut/machines.hpp"
#include "taut/observational.hpp"

namespace taut {

// ---------------------------------------------------------------------------
// Loaded objects and the named registry behind the command-line front end.
// File kinds are detected from content: s-expression files dispatch on their
// head symbol, plain "X -> ..." production text is a grammar.
// ---------------------------------------------------------------------------

enum class ObjKind { Automaton, Expression, Dpda, Npdqrt, Rdtm, Dtm, Grammar };

std::string objkind_name(ObjKind k);

struct WsObject {
    ObjKind kind = ObjKind::Automaton;
    TAutomaton aut;
    ExprFile expr;
    Dpda dpda;
    Npdqrt npdqrt;
    Rdtm rdtm;
    Dtm dtm;
    CFG cfg;
};

WsObject object_parse(const std::string& text);
WsObject object_load(const std::string& path);
// Canonical serialization of the object (the byte-identical output contract).
std::string object_print(const WsObject& o);

struct Workspace {
    // keyed by (kind, name): names are unique per kind
    std::map<std::pair<ObjKind, std::string>, WsObject> objects;

    using Key = std::pair<ObjKind, std::string>;

    void add(const std::string& name, WsObject o);  // throws on duplicate
    const WsObject& get(const Key& key) const;
    // unique object with this name across kinds; throws if absent/ambiguous
    const WsObject& get(const std::string& name) const;
    // registers the file under its stem (basename without extension)
    Key load(const std::string& path);
};

// ---------------------------------------------------------------------------
// Batch commands. Each returns the text to print on stdout plus the process
// exit code: 0 success/equivalent/accept, 1 reject/inequivalent, 2 unknown,
// 3 input error (signalled by exceptions from the command functions).
// ---------------------------------------------------------------------------

struct QueryOpts {
    int fuel = 10000;
    bool fuel_set = false;  // whether --fuel was given (machines with their
                            // own default chain bounds keep it otherwise)
    int max_states = 10000;
    unsigned seed = 0;
    bool json = false;
};

struct CmdResult {
    int exit_code = 0;
    std::string output;
};

// Membership / weight query. state defaults to the object's start (automata:
// first state); word syntax as word_parse, with "eps" for the empty word.
CmdResult cmd_accept(const WsObject& o, const std::optional<std::string>& state,
                     const std::string& word, const QueryOpts& q);

// All accepted words of length <= max_len in shortlex order, one per line.
CmdResult cmd_enumerate(const WsObject& o, const std::optional<std::string>& state,
                        int max_len, const QueryOpts& q);

// Trace equivalence of two automata/expressions (machines must be converted
// first). exact uses the generalized powerset construction, bounded checks
// all words up to the bound.
CmdResult cmd_equiv(const WsObject& o1, const std::optional<std::string>& s1,
                    const WsObject& o2, const std::optional<std::string>& s2, bool exact,
                    int bound, const QueryOpts& q);

// kinds: expr2aut aut2expr dpda2aut aut2dpda rdtm2aut aut2rdtm dtm2rdtm
// cfg2algexpr; args carry the state / initial-symbol / start-nonterminal
// operands the kind needs. Output is the converted object file; converters
// that produce a designated start state emit it as a leading ";" comment.
CmdResult cmd_convert(const std::string& kind, const WsObject& o,
                      const std::vector<std::string>& args, const QueryOpts& q);

// File-level validation; automata additionally get a seeded probe comparing
// trace semantics against the determinized Moore automaton.
CmdResult cmd_check(const WsObject& o, const QueryOpts& q);

}  // namespace taut
