#pragma once

#include <memory>

#include "taut/automaton.hpp"

namespace taut {

// One node type covers the three fixpoint languages:
//  - reactive:  Var | RMu (one kid per input + beta output term) | theory
//    operations (Plus/Empty/Scale/Op) over reactive subterms
//  - additive:  Lit | Var | Empty | Mu | Act | Scale | Plus
//  - algebraic: additive plus Hole (the sequencing placeholder) and Seq
// Lit nodes carry output-object literals and appear in beta terms and the
// additive/algebraic languages.
enum class ExprKind { Var, Lit, Empty, Hole, Mu, RMu, Act, Scale, Plus, Seq, Op };

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind = ExprKind::Var;
    std::string name;                 // Var/Mu/RMu binder, Act input, Lit text,
                                      // Scale scalar text, Op operation name
    std::vector<std::string> params;  // Op symbol/index parameters
    std::vector<ExprP> kids;          // RMu: one per input, in input order
    ExprP beta;                       // RMu output term (ground: Lit/ops only)
};

ExprP ex_var(std::string name);
ExprP ex_lit(std::string text);
ExprP ex_empty();
ExprP ex_hole();
ExprP ex_mu(std::string name, ExprP body);
ExprP ex_rmu(std::string name, std::vector<ExprP> kids, ExprP beta);
ExprP ex_act(std::string input, ExprP e);
ExprP ex_scale(std::string r, ExprP e);
ExprP ex_plus(std::vector<ExprP> kids);
ExprP ex_seq(ExprP a, ExprP b);
ExprP ex_op(std::string name, std::vector<std::string> params, std::vector<ExprP> kids);

// Canonical serialization with de-Bruijn indices for bound variables;
// expression equality throughout is equality of keys.
std::string expr_key(const ExprP& e);
bool expr_equal(const ExprP& a, const ExprP& b);
std::set<std::string> expr_free_vars(const ExprP& e);
// Substitute value for free occurrences of name (value is closed in all uses).
ExprP expr_subst(const ExprP& e, const std::string& name, const ExprP& value);

// --- surface syntax --------------------------------------------------------

ExprP expr_from_sexpr(const SExpr& s, const std::vector<std::string>& inputs);
SExpr expr_to_sexpr(const ExprP& e);
ExprP expr_parse(const std::string& text, const std::vector<std::string>& inputs);
std::string expr_print(const ExprP& e);

// Expression files carry their monad and input alphabet:
// (expression (monad ...) (inputs ...) <expr>)
struct ExprFile {
    MonadDesc monad;
    std::vector<std::string> inputs;
    ExprP expr;
};
ExprFile exprfile_from_sexpr(const SExpr& s);
ExprFile exprfile_parse(const std::string& text);
std::string exprfile_print(const ExprFile& f);

// --- reactive expressions --------------------------------------------------

OutVal rexp_out(const MonadDesc& d, const ExprP& e);
// Derivative with additive simplification (plus-flattening, empty removal,
// idempotent deduplication) to keep derivative chains small.
ExprP rexp_deriv(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                 int a, bool simplify = true);
OutVal rexp_trace(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                  const Word& w);
std::vector<ExprP> expr_closure(const MonadDesc& d, const std::vector<std::string>& inputs,
                                const ExprP& e, int max_size = 100000);

// Kleene theorem, both directions.
std::pair<TAutomaton, int> expr_to_automaton(const MonadDesc& d,
                                             const std::vector<std::string>& inputs,
                                             const ExprP& e);
ExprP automaton_to_expr(const TAutomaton& a, int state);

// --- additive / algebraic expressions --------------------------------------

// nullopt when guarded; otherwise a path to an unguarded variable occurrence.
std::optional<std::string> guardedness_check(const ExprP& e);

Scalar aexp_out(const MonadDesc& d, const ExprP& e);      // o
Scalar aexp_out_bar(const MonadDesc& d, const ExprP& e);  // o-bar: Hole -> 1, Lit -> 0
ExprP aexp_deriv(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                 int a, bool prune = true);
Scalar aexp_trace(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                  const Word& w);

// Additive <-> reactive translations (semimodule theories).
ExprP tr(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e);
ExprP trbar(const std::vector<std::string>& inputs, const ExprP& e);

// --- context-free grammars -------------------------------------------------

struct CfgProd {
    std::string lhs;
    std::vector<std::string> rhs;  // empty for eps; otherwise terminal then nonterminals
};

struct CFG {
    std::vector<std::string> nts;  // in order of first appearance on a lhs
    std::vector<CfgProd> prods;
    std::vector<std::string> terminals;

    bool is_nt(const std::string& s) const;
};

CFG cfg_parse(const std::string& text);
// Requires Greibach normal form and an idempotent semiring; returns u1 * b
// with b = 1 of the semiring.
ExprP cfg_to_algexpr(const CFG& g, const std::string& start, const MonadDesc& d);

}  // namespace taut
