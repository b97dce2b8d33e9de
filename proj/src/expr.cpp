#include "taut/expr.hpp"

#include <algorithm>
#include <sstream>

namespace taut {

// --------------------------------------------------------------------------
// Node builders
// --------------------------------------------------------------------------

namespace {

ExprP mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprP ex_var(std::string name) { return mk({ExprKind::Var, std::move(name), {}, {}, {}}); }
ExprP ex_lit(std::string text) { return mk({ExprKind::Lit, std::move(text), {}, {}, {}}); }
ExprP ex_empty() { return mk({ExprKind::Empty, {}, {}, {}, {}}); }
ExprP ex_hole() { return mk({ExprKind::Hole, {}, {}, {}, {}}); }
ExprP ex_mu(std::string name, ExprP body) {
    return mk({ExprKind::Mu, std::move(name), {}, {std::move(body)}, {}});
}
ExprP ex_rmu(std::string name, std::vector<ExprP> kids, ExprP beta) {
    return mk({ExprKind::RMu, std::move(name), {}, std::move(kids), std::move(beta)});
}
ExprP ex_act(std::string input, ExprP e) {
    return mk({ExprKind::Act, std::move(input), {}, {std::move(e)}, {}});
}
ExprP ex_scale(std::string r, ExprP e) {
    return mk({ExprKind::Scale, std::move(r), {}, {std::move(e)}, {}});
}
ExprP ex_plus(std::vector<ExprP> kids) {
    return mk({ExprKind::Plus, {}, {}, std::move(kids), {}});
}
ExprP ex_seq(ExprP a, ExprP b) {
    return mk({ExprKind::Seq, {}, {}, {std::move(a), std::move(b)}, {}});
}
ExprP ex_op(std::string name, std::vector<std::string> params, std::vector<ExprP> kids) {
    return mk({ExprKind::Op, std::move(name), std::move(params), std::move(kids), {}});
}

// --------------------------------------------------------------------------
// Keys, free variables, substitution
// --------------------------------------------------------------------------

namespace {

void key_rec(const ExprP& e, std::vector<std::string>& binders, std::string& out) {
    switch (e->kind) {
        case ExprKind::Var: {
            for (int i = static_cast<int>(binders.size()) - 1; i >= 0; i--)
                if (binders[i] == e->name) {
                    out += "#" + std::to_string(binders.size() - 1 - i) + ";";
                    return;
                }
            out += "v" + e->name + ";";
            return;
        }
        case ExprKind::Lit: out += "l" + e->name + ";"; return;
        case ExprKind::Empty: out += "0;"; return;
        case ExprKind::Hole: out += "h;"; return;
        case ExprKind::Mu:
        case ExprKind::RMu: {
            out += e->kind == ExprKind::Mu ? "m(" : "M(";
            binders.push_back(e->name);
            for (const ExprP& k : e->kids) key_rec(k, binders, out);
            if (e->beta) {
                out += "|";
                key_rec(e->beta, binders, out);
            }
            binders.pop_back();
            out += ")";
            return;
        }
        case ExprKind::Act: out += "a" + e->name + "("; break;
        case ExprKind::Scale: out += "s" + e->name + "("; break;
        case ExprKind::Plus: out += "+("; break;
        case ExprKind::Seq: out += "*("; break;
        case ExprKind::Op: {
            out += "f" + e->name;
            for (const std::string& p : e->params) out += "," + p;
            out += "(";
            break;
        }
    }
    for (const ExprP& k : e->kids) key_rec(k, binders, out);
    out += ")";
}

void free_vars_rec(const ExprP& e, std::set<std::string>& bound, std::set<std::string>& out) {
    if (e->kind == ExprKind::Var) {
        if (!bound.count(e->name)) out.insert(e->name);
        return;
    }
    bool binds = (e->kind == ExprKind::Mu || e->kind == ExprKind::RMu) && !bound.count(e->name);
    if (binds) bound.insert(e->name);
    for (const ExprP& k : e->kids) free_vars_rec(k, bound, out);
    if (e->beta) free_vars_rec(e->beta, bound, out);
    if (binds) bound.erase(e->name);
}

}  // namespace

std::string expr_key(const ExprP& e) {
    std::vector<std::string> binders;
    std::string out;
    key_rec(e, binders, out);
    return out;
}

bool expr_equal(const ExprP& a, const ExprP& b) { return expr_key(a) == expr_key(b); }

std::set<std::string> expr_free_vars(const ExprP& e) {
    std::set<std::string> bound, out;
    free_vars_rec(e, bound, out);
    return out;
}

ExprP expr_subst(const ExprP& e, const std::string& name, const ExprP& value) {
    switch (e->kind) {
        case ExprKind::Var: return e->name == name ? value : e;
        case ExprKind::Lit:
        case ExprKind::Empty:
        case ExprKind::Hole: return e;
        default: break;
    }
    if ((e->kind == ExprKind::Mu || e->kind == ExprKind::RMu) && e->name == name) return e;
    Expr out = *e;
    bool changed = false;
    for (ExprP& k : out.kids) {
        ExprP k2 = expr_subst(k, name, value);
        changed |= k2 != k;
        k = k2;
    }
    return changed ? mk(std::move(out)) : e;
}

// --------------------------------------------------------------------------
// Surface syntax
// --------------------------------------------------------------------------

namespace {

bool all_digits(const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

ExprP parse_rec(const SExpr& s, const std::vector<std::string>& inputs,
                std::set<std::string>& bound) {
    if (s.atom) return bound.count(s.text) ? ex_var(s.text) : ex_lit(s.text);
    if (s.size() == 0) throw ParseError("empty expression");
    const std::string& h = s.head();
    auto kid = [&](size_t i) { return parse_rec(s[i], inputs, bound); };
    if (h == "var") return ex_var(s[1].text);
    if (h == "lit") return ex_lit(s[1].text);
    if (h == "hole") return ex_hole();
    if (h == "empty") return ex_empty();
    if (h == "mu") {
        if (s.size() < 3 || !s[1].atom) throw ParseError("(mu <x> ...)");
        std::string x = s[1].text;
        if (bound.count(x)) throw ParseError("mu rebinds variable " + x);
        bool reactive = false;
        for (size_t i = 2; i < s.size(); i++)
            if (!s[i].atom && s[i].size() > 0 && s[i].head() == "out") reactive = true;
        bound.insert(x);
        if (!reactive) {
            if (s.size() != 3) throw ParseError("(mu <x> <body>)");
            ExprP body = kid(2);
            bound.erase(x);
            return ex_mu(x, body);
        }
        std::map<std::string, ExprP> by_input;
        ExprP beta;
        for (size_t i = 2; i < s.size(); i++) {
            const SExpr& cl = s[i];
            if (cl.atom || cl.size() != 2 || !cl[0].atom)
                throw ParseError("mu clauses are (<input> <expr>) or (out <beta>)");
            if (cl.head() == "out") {
                std::set<std::string> none;
                beta = parse_rec(cl[1], inputs, none);
            } else {
                if (by_input.count(cl[0].text))
                    throw ParseError("duplicate input clause " + cl[0].text);
                by_input[cl[0].text] = parse_rec(cl[1], inputs, bound);
            }
        }
        bound.erase(x);
        if (!beta) throw ParseError("mu lacks (out ...)");
        std::vector<ExprP> kids;
        for (const std::string& a : inputs) {
            auto it = by_input.find(a);
            if (it == by_input.end()) throw ParseError("mu lacks a clause for input " + a);
            kids.push_back(it->second);
            by_input.erase(it);
        }
        if (!by_input.empty())
            throw ParseError("mu clause for unknown input " + by_input.begin()->first);
        return ex_rmu(x, std::move(kids), beta);
    }
    if (h == "act") {
        if (s.size() != 3 || !s[1].atom) throw ParseError("(act <input> <expr>)");
        return ex_act(s[1].text, kid(2));
    }
    if (h == "plus") {
        std::vector<ExprP> kids;
        for (size_t i = 1; i < s.size(); i++) kids.push_back(kid(i));
        return ex_plus(std::move(kids));
    }
    if (h == "scale") {
        if (s.size() != 3 || !s[1].atom) throw ParseError("(scale <r> <expr>)");
        return ex_scale(s[1].text, kid(2));
    }
    if (h == "seq") {
        if (s.size() != 3) throw ParseError("(seq <e1> <e2>)");
        return ex_seq(kid(1), kid(2));
    }
    // storage theory operations
    std::vector<std::string> params;
    size_t first = 1;
    if (h == "push") {
        // (push <sym> e) or (push <stack> <sym> e) for multiple stacks
        params.push_back(s[1].text);
        first = 2;
        if (s.size() == 4) {
            params.push_back(s[2].text);
            first = 3;
        }
    } else if (h == "write") {
        params.push_back(s[1].text);
        first = 2;
    } else if (h == "pop" && s.size() > 1 && s[1].atom && all_digits(s[1].text)) {
        params.push_back(s[1].text);
        first = 2;
    } else if (h != "pop" && h != "read" && h != "lmove" && h != "rmove") {
        throw ParseError("unknown expression form: " + h);
    }
    std::vector<ExprP> kids;
    for (size_t i = first; i < s.size(); i++) kids.push_back(kid(i));
    return ex_op(h, std::move(params), std::move(kids));
}

}  // namespace

ExprP expr_from_sexpr(const SExpr& s, const std::vector<std::string>& inputs) {
    std::set<std::string> bound;
    return parse_rec(s, inputs, bound);
}

SExpr expr_to_sexpr(const ExprP& e) {
    auto atom = [](const std::string& t) { return SExpr::make_atom(t); };
    switch (e->kind) {
        case ExprKind::Var:
        case ExprKind::Lit: return atom(e->name);
        case ExprKind::Empty: return SExpr::make_list({atom("empty")});
        case ExprKind::Hole: return SExpr::make_list({atom("hole")});
        case ExprKind::Mu:
            return SExpr::make_list({atom("mu"), atom(e->name), expr_to_sexpr(e->kids[0])});
        case ExprKind::RMu: {
            SExpr out = SExpr::make_list({atom("mu"), atom(e->name)});
            // kid order matches the input order used at parse time; the file
            // carries the inputs clause, so positions are recovered there
            for (size_t i = 0; i < e->kids.size(); i++)
                out.items.push_back(
                    SExpr::make_list({atom("@" + std::to_string(i)), expr_to_sexpr(e->kids[i])}));
            out.items.push_back(SExpr::make_list({atom("out"), expr_to_sexpr(e->beta)}));
            return out;
        }
        case ExprKind::Act:
            return SExpr::make_list({atom("act"), atom(e->name), expr_to_sexpr(e->kids[0])});
        case ExprKind::Scale:
            return SExpr::make_list({atom("scale"), atom(e->name), expr_to_sexpr(e->kids[0])});
        case ExprKind::Plus: {
            SExpr out = SExpr::make_list({atom("plus")});
            for (const ExprP& k : e->kids) out.items.push_back(expr_to_sexpr(k));
            return out;
        }
        case ExprKind::Seq:
            return SExpr::make_list(
                {atom("seq"), expr_to_sexpr(e->kids[0]), expr_to_sexpr(e->kids[1])});
        case ExprKind::Op: {
            SExpr out = SExpr::make_list({atom(e->name)});
            for (const std::string& p : e->params) out.items.push_back(atom(p));
            for (const ExprP& k : e->kids) out.items.push_back(expr_to_sexpr(k));
            return out;
        }
    }
    throw std::logic_error("expr_to_sexpr");
}

ExprP expr_parse(const std::string& text, const std::vector<std::string>& inputs) {
    return expr_from_sexpr(sexpr_parse(text), inputs);
}

std::string expr_print(const ExprP& e) { return sexpr_print(expr_to_sexpr(e)); }

ExprFile exprfile_from_sexpr(const SExpr& s) {
    if (s.atom || s.head() != "expression") throw ParseError("expected (expression ...)");
    ExprFile f;
    const SExpr* body = nullptr;
    for (size_t i = 1; i < s.size(); i++) {
        if (!s[i].atom && s[i].size() > 0 && s[i].head() == "monad")
            f.monad = monad_from_sexpr(s[i]);
        else if (!s[i].atom && s[i].size() > 0 && s[i].head() == "inputs")
            for (size_t j = 1; j < s[i].size(); j++) f.inputs.push_back(s[i][j].text);
        else
            body = &s[i];
    }
    if (f.inputs.empty()) throw ParseError("expression file lacks (inputs ...)");
    if (!body) throw ParseError("expression file lacks an expression");
    f.expr = expr_from_sexpr(*body, f.inputs);
    return f;
}

ExprFile exprfile_parse(const std::string& text) {
    return exprfile_from_sexpr(sexpr_parse(text));
}

std::string exprfile_print(const ExprFile& f) {
    SExpr ins = SExpr::make_list({SExpr::make_atom("inputs")});
    for (const std::string& a : f.inputs) ins.items.push_back(SExpr::make_atom(a));
    // RMu kids print as positional clauses; rewrite them with input names
    std::function<SExpr(const ExprP&)> conv = [&](const ExprP& e) -> SExpr {
        if (e->kind == ExprKind::RMu) {
            SExpr out = SExpr::make_list({SExpr::make_atom("mu"), SExpr::make_atom(e->name)});
            for (size_t i = 0; i < e->kids.size(); i++)
                out.items.push_back(SExpr::make_list(
                    {SExpr::make_atom(f.inputs.at(i)), conv(e->kids[i])}));
            out.items.push_back(
                SExpr::make_list({SExpr::make_atom("out"), expr_to_sexpr(e->beta)}));
            return out;
        }
        SExpr out = expr_to_sexpr(e);
        if (!out.atom && !e->kids.empty()) {
            out.items.clear();
            SExpr proto = expr_to_sexpr(e);
            for (size_t i = 0; i < proto.size(); i++) out.items.push_back(proto[i]);
            // replace kid positions with converted kids
            size_t kid_at = proto.size() - e->kids.size();
            for (size_t i = 0; i < e->kids.size(); i++)
                out.items[kid_at + i] = conv(e->kids[i]);
        }
        return out;
    };
    std::string out = "(expression\n  " + sexpr_print(monad_to_sexpr(f.monad)) + "\n  " +
                      sexpr_print(ins) + "\n  " + sexpr_print(conv(f.expr)) + ")\n";
    return out;
}

// --------------------------------------------------------------------------
// Reactive expressions
// --------------------------------------------------------------------------

namespace {

OutVal beta_eval(const MonadDesc& d, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Lit: return b_literal(d, e->name);
        case ExprKind::Empty: return b_apply_op(d, "empty", {}, {});
        case ExprKind::Plus:
        case ExprKind::Scale:
        case ExprKind::Op: {
            std::vector<OutVal> args;
            for (const ExprP& k : e->kids) args.push_back(beta_eval(d, k));
            if (e->kind == ExprKind::Plus) return b_apply_op(d, "plus", {}, args);
            if (e->kind == ExprKind::Scale) return b_apply_op(d, "scale", {e->name}, args);
            return b_apply_op(d, e->name, e->params, args);
        }
        default: throw std::runtime_error("ill-formed output term in expression");
    }
}

bool monad_idempotent(const MonadDesc& d) {
    switch (d.kind) {
        case MonadKind::Pow:
        case MonadKind::NdStack:
        case MonadKind::MultiStack: return true;
        case MonadKind::Lin: return d.sr.is_idempotent;
        default: return false;
    }
}

// additive simplification of reactive terms: flatten plus, drop empties,
// deduplicate under idempotence
ExprP rexp_simplify(const MonadDesc& d, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Var:
        case ExprKind::Lit:
        case ExprKind::Empty:
        case ExprKind::RMu: return e;
        case ExprKind::Plus: {
            std::vector<ExprP> flat;
            for (const ExprP& k : e->kids) {
                ExprP k2 = rexp_simplify(d, k);
                if (k2->kind == ExprKind::Empty) continue;
                if (k2->kind == ExprKind::Plus)
                    flat.insert(flat.end(), k2->kids.begin(), k2->kids.end());
                else
                    flat.push_back(k2);
            }
            if (monad_idempotent(d)) {
                std::map<std::string, ExprP> uniq;
                for (const ExprP& k : flat) uniq.emplace(expr_key(k), k);
                flat.clear();
                for (auto& [key, k] : uniq) flat.push_back(k);
            }
            if (flat.empty()) return ex_empty();
            if (flat.size() == 1) return flat[0];
            return ex_plus(std::move(flat));
        }
        default: {
            Expr out = *e;
            for (ExprP& k : out.kids) k = rexp_simplify(d, k);
            return mk(std::move(out));
        }
    }
}

ExprP rexp_deriv_raw(const ExprP& e, int a) {
    switch (e->kind) {
        case ExprKind::RMu: return expr_subst(e->kids.at(a), e->name, e);
        case ExprKind::Empty: return e;
        case ExprKind::Plus:
        case ExprKind::Scale:
        case ExprKind::Op: {
            Expr out = *e;
            for (ExprP& k : out.kids) k = rexp_deriv_raw(k, a);
            return mk(std::move(out));
        }
        default: throw std::runtime_error("derivative of an open or ill-formed expression");
    }
}

}  // namespace

OutVal rexp_out(const MonadDesc& d, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::RMu: return beta_eval(d, e->beta);
        case ExprKind::Empty: return b_apply_op(d, "empty", {}, {});
        case ExprKind::Plus:
        case ExprKind::Scale:
        case ExprKind::Op: {
            std::vector<OutVal> args;
            for (const ExprP& k : e->kids) args.push_back(rexp_out(d, k));
            if (e->kind == ExprKind::Plus) return b_apply_op(d, "plus", {}, args);
            if (e->kind == ExprKind::Scale) return b_apply_op(d, "scale", {e->name}, args);
            return b_apply_op(d, e->name, e->params, args);
        }
        default: throw std::runtime_error("output of an open or ill-formed expression");
    }
}

ExprP rexp_deriv(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                 int a, bool simplify) {
    (void)inputs;
    ExprP raw = rexp_deriv_raw(e, a);
    return simplify ? rexp_simplify(d, raw) : raw;
}

OutVal rexp_trace(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                  const Word& w) {
    ExprP cur = rexp_simplify(d, e);
    for (int a : w) cur = rexp_deriv(d, inputs, cur, a);
    return rexp_out(d, cur);
}

std::vector<ExprP> expr_closure(const MonadDesc& d, const std::vector<std::string>& inputs,
                                const ExprP& e, int max_size) {
    std::map<std::string, ExprP> seen;
    std::vector<ExprP> queue{rexp_simplify(d, e)};
    seen.emplace(expr_key(queue[0]), queue[0]);
    for (size_t i = 0; i < queue.size(); i++) {
        for (size_t a = 0; a < inputs.size(); a++) {
            ExprP next = rexp_deriv(d, inputs, queue[i], static_cast<int>(a));
            std::string key = expr_key(next);
            if (!seen.count(key)) {
                if (static_cast<int>(seen.size()) >= max_size)
                    throw std::runtime_error("expression closure exceeds size budget");
                seen.emplace(key, next);
                queue.push_back(next);
            }
        }
    }
    std::vector<ExprP> out;
    for (auto& [k, ex] : seen) out.push_back(ex);
    return out;
}

// --------------------------------------------------------------------------
// Kleene theorem
// --------------------------------------------------------------------------

namespace {

void collect_binders(const ExprP& e, std::vector<std::pair<std::string, ExprP>>& out) {
    if (e->kind == ExprKind::RMu) {
        for (const auto& [n, sub] : out)
            if (n == e->name)
                throw std::runtime_error("mu binds variable " + e->name + " twice");
        out.emplace_back(e->name, e);
    }
    for (const ExprP& k : e->kids) collect_binders(k, out);
}

// reactive term over binder variables -> transition-term s-expression over
// state names (RMu subterms collapse to their own state)
SExpr term_sexpr(const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Var:
        case ExprKind::RMu: return SExpr::make_atom(e->name);
        case ExprKind::Empty: return SExpr::make_list({SExpr::make_atom("empty")});
        case ExprKind::Plus: {
            SExpr out = SExpr::make_list({SExpr::make_atom("plus")});
            for (const ExprP& k : e->kids) out.items.push_back(term_sexpr(k));
            return out;
        }
        case ExprKind::Scale:
            return SExpr::make_list(
                {SExpr::make_atom("scale"), SExpr::make_atom(e->name), term_sexpr(e->kids[0])});
        case ExprKind::Op: {
            SExpr out = SExpr::make_list({SExpr::make_atom(e->name)});
            for (const std::string& p : e->params) out.items.push_back(SExpr::make_atom(p));
            for (const ExprP& k : e->kids) out.items.push_back(term_sexpr(k));
            return out;
        }
        default: throw std::runtime_error("expression is not a reactive theory term");
    }
}

// transition-term s-expression -> expression term with Var leaves
ExprP term_expr(const SExpr& s) {
    if (s.atom) return ex_var(s.text);
    const std::string& h = s.head();
    if (h == "var") return ex_var(s[1].text);
    if (h == "empty") return ex_empty();
    if (h == "plus") {
        std::vector<ExprP> kids;
        for (size_t i = 1; i < s.size(); i++) kids.push_back(term_expr(s[i]));
        return ex_plus(std::move(kids));
    }
    if (h == "scale") return ex_scale(s[1].text, term_expr(s[2]));
    if (h == "push") {
        if (s.size() == 4) return ex_op("push", {s[1].text, s[2].text}, {term_expr(s[3])});
        return ex_op("push", {s[1].text}, {term_expr(s[2])});
    }
    std::vector<ExprP> kids;
    std::vector<std::string> params;
    size_t first = 1;
    if (h == "pop" && s.size() > 1 && s[1].atom && all_digits(s[1].text)) {
        params.push_back(s[1].text);
        first = 2;
    }
    for (size_t i = first; i < s.size(); i++) kids.push_back(term_expr(s[i]));
    return ex_op(h, std::move(params), std::move(kids));
}

// generator beta term for an output value (the designated c_i terms)
ExprP outval_beta(const MonadDesc& d, const OutVal& v) {
    if (auto* s = std::get_if<Scalar>(&v)) return ex_lit(d.sr.print(*s));
    if (auto* p0 = std::get_if<StackPred>(&v)) {
        StackPred p = stackpred_minimize(*p0);
        std::function<ExprP(const StackPred&)> rec = [&](const StackPred& q) -> ExprP {
            if (q.k == 0) return ex_lit(q.table.at("") ? "true" : "false");
            std::vector<ExprP> kids;
            for (int c = 0; c < q.nsym; c++) {
                StackPred sub;
                sub.nsym = q.nsym;
                sub.k = q.k - 1;
                std::string pre(1, static_cast<char>(c));
                for (const std::string& w : all_prefix_keys(q.nsym, q.k - 1))
                    sub.table.emplace(w, q.table.at(pre + w));
                kids.push_back(rec(stackpred_minimize(std::move(sub))));
            }
            kids.push_back(ex_lit(q.table.at("") ? "true" : "false"));
            return ex_op("pop", {}, std::move(kids));
        };
        return rec(p);
    }
    throw std::runtime_error("no generator terms for the outputs of this automaton");
}

}  // namespace

std::pair<TAutomaton, int> expr_to_automaton(const MonadDesc& d,
                                             const std::vector<std::string>& inputs,
                                             const ExprP& e) {
    if (!expr_free_vars(e).empty())
        throw std::runtime_error("expression is not closed: free variable " +
                                 *expr_free_vars(e).begin());
    std::vector<std::pair<std::string, ExprP>> binders;
    collect_binders(e, binders);
    bool fresh_start = e->kind != ExprKind::RMu;
    TAutomaton a;
    a.monad = d;
    a.inputs = inputs;
    for (const auto& [n, sub] : binders) a.states.push_back(n);
    std::string start_name = "q0";
    if (fresh_start) {
        while (std::find(a.states.begin(), a.states.end(), start_name) != a.states.end())
            start_name += "_";
        a.states.push_back(start_name);
    }
    size_t n = binders.size();
    a.out.resize(a.states.size(), Scalar{false});
    a.trans.resize(a.states.size());
    for (size_t i = 0; i < n; i++) {
        a.out[i] = beta_eval(d, binders[i].second->beta);
        for (size_t j = 0; j < inputs.size(); j++)
            a.trans[i].push_back(elem_from_sexpr(a, term_sexpr(binders[i].second->kids[j])));
    }
    int start;
    if (fresh_start) {
        start = static_cast<int>(n);
        TElem start_elem = elem_from_sexpr(a, term_sexpr(e));
        a.out[start] = algebra_map(d, start_elem, [&](int y) { return a.out[y]; });
        for (size_t j = 0; j < inputs.size(); j++)
            a.trans[start].push_back(
                kleisli_elem(d, [&](int y) { return a.trans[y][j]; }, start_elem));
    } else {
        start = static_cast<int>(
            std::find(a.states.begin(), a.states.end(), e->name) - a.states.begin());
    }
    return {std::move(a), start};
}

ExprP automaton_to_expr(const TAutomaton& a, int state) {
    size_t n = a.states.size();
    // eliminate the designated state last
    std::vector<int> order{state};
    for (size_t i = 0; i < n; i++)
        if (static_cast<int>(i) != state) order.push_back(static_cast<int>(i));
    // t_j^i as expression terms over state-name variables, c_i as beta terms
    std::vector<std::vector<ExprP>> t(n);
    std::vector<ExprP> c(n);
    for (size_t pos = 0; pos < n; pos++) {
        int i = order[pos];
        c[pos] = outval_beta(a.monad, a.out[i]);
        for (size_t j = 0; j < a.inputs.size(); j++)
            t[pos].push_back(term_expr(elem_to_term_sexpr(a, a.trans[i][j])));
    }
    std::vector<ExprP> u(n);
    for (int pos = static_cast<int>(n) - 1; pos >= 0; pos--) {
        std::vector<ExprP> kids = t[pos];
        for (ExprP& kid : kids) {
            for (size_t k = pos + 1; k < n; k++)
                kid = expr_subst(kid, a.states[order[k]], u[k]);
            kid = rexp_simplify(a.monad, kid);
        }
        u[pos] = ex_rmu(a.states[order[pos]], std::move(kids), c[pos]);
    }
    return u[0];
}

// --------------------------------------------------------------------------
// Guardedness
// --------------------------------------------------------------------------

namespace {

// is x guarded in e?  records the path to the first unguarded occurrence
bool guarded_in(const std::string& x, const ExprP& e, std::string path, std::string& where) {
    switch (e->kind) {
        case ExprKind::Var:
            if (e->name == x) {
                where = path + "/" + x;
                return false;
            }
            return true;
        case ExprKind::Lit:
        case ExprKind::Empty:
        case ExprKind::Hole:
        case ExprKind::Act:
        case ExprKind::RMu: return true;
        case ExprKind::Mu:
            if (e->name == x) return true;
            return guarded_in(x, e->kids[0], path + "/mu " + e->name, where);
        case ExprKind::Seq:
            // the star clause: guardedness of the left part suffices
            return guarded_in(x, e->kids[0], path + "/seq.0", where);
        default: {
            for (size_t i = 0; i < e->kids.size(); i++)
                if (!guarded_in(x, e->kids[i], path + "/" + std::to_string(i), where))
                    return false;
            return true;
        }
    }
}

bool check_guard_rec(const ExprP& e, std::string path, std::string& where) {
    if (e->kind == ExprKind::Mu) {
        if (!guarded_in(e->name, e->kids[0], path + "/mu " + e->name, where)) return false;
    }
    for (size_t i = 0; i < e->kids.size(); i++)
        if (!check_guard_rec(e->kids[i], path + "/" + std::to_string(i), where)) return false;
    return true;
}

}  // namespace

std::optional<std::string> guardedness_check(const ExprP& e) {
    std::string where;
    if (check_guard_rec(e, "", where)) return std::nullopt;
    return where;
}

// --------------------------------------------------------------------------
// Additive / algebraic out and derivative
// --------------------------------------------------------------------------

namespace {

Scalar aexp_out_rec(const MonadDesc& d, const ExprP& e, bool bar, int depth) {
    if (depth > 5000) throw std::runtime_error("output evaluation diverges (unguarded mu?)");
    const SemiringOps& sr = d.sr;
    switch (e->kind) {
        case ExprKind::Lit: return bar ? sr.zero : sr.parse(e->name);
        case ExprKind::Empty: return sr.zero;
        case ExprKind::Hole: return bar ? sr.one : sr.zero;
        case ExprKind::Act: return sr.zero;
        case ExprKind::Mu:
            return aexp_out_rec(d, expr_subst(e->kids[0], e->name, e), bar, depth + 1);
        case ExprKind::Scale:
            return sr.mul(sr.parse(e->name), aexp_out_rec(d, e->kids[0], bar, depth + 1));
        case ExprKind::Plus: {
            Scalar acc = sr.zero;
            for (const ExprP& k : e->kids) acc = sr.add(acc, aexp_out_rec(d, k, bar, depth + 1));
            return acc;
        }
        case ExprKind::Seq: {
            Scalar left_bar = aexp_out_rec(d, e->kids[0], true, depth + 1);
            Scalar right = aexp_out_rec(d, e->kids[1], bar, depth + 1);
            if (bar) return sr.mul(left_bar, right);  // hole needs both sides to expose it
            Scalar left = aexp_out_rec(d, e->kids[0], false, depth + 1);
            return sr.add(sr.mul(left_bar, right), left);
        }
        default: throw std::runtime_error("output of an open or ill-formed expression");
    }
}

ExprP aexp_simplify(const MonadDesc& d, const ExprP& e) {
    if (e->kind != ExprKind::Plus) return e;
    std::vector<ExprP> flat;
    for (const ExprP& k : e->kids) {
        if (k->kind == ExprKind::Empty) continue;
        if (k->kind == ExprKind::Plus)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(k);
    }
    if (d.sr.is_idempotent) {
        std::map<std::string, ExprP> uniq;
        for (const ExprP& k : flat) uniq.emplace(expr_key(k), k);
        flat.clear();
        for (auto& [key, k] : uniq) flat.push_back(k);
    }
    if (flat.empty()) return ex_empty();
    if (flat.size() == 1) return flat[0];
    return ex_plus(std::move(flat));
}

ExprP aexp_deriv_rec(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                     int a, bool prune, int depth) {
    if (depth > 5000) throw std::runtime_error("derivative diverges (unguarded mu?)");
    const SemiringOps& sr = d.sr;
    switch (e->kind) {
        case ExprKind::Lit:
        case ExprKind::Empty:
        case ExprKind::Hole: return ex_empty();
        case ExprKind::Act: return e->name == inputs.at(a) ? e->kids[0] : ex_empty();
        case ExprKind::Mu:
            return aexp_deriv_rec(d, inputs, expr_subst(e->kids[0], e->name, e), a, prune,
                                  depth + 1);
        case ExprKind::Scale: {
            ExprP k = aexp_deriv_rec(d, inputs, e->kids[0], a, prune, depth + 1);
            if (prune && k->kind == ExprKind::Empty) return ex_empty();
            if (prune && sr.eq(sr.parse(e->name), sr.one)) return k;
            return ex_scale(e->name, k);
        }
        case ExprKind::Plus: {
            std::vector<ExprP> kids;
            for (const ExprP& k : e->kids)
                kids.push_back(aexp_deriv_rec(d, inputs, k, a, prune, depth + 1));
            ExprP out = ex_plus(std::move(kids));
            return prune ? aexp_simplify(d, out) : out;
        }
        case ExprKind::Seq: {
            ExprP dleft = aexp_deriv_rec(d, inputs, e->kids[0], a, prune, depth + 1);
            ExprP left_term = (prune && dleft->kind == ExprKind::Empty)
                                  ? ex_empty()
                                  : ex_seq(dleft, e->kids[1]);
            Scalar obar = aexp_out_rec(d, e->kids[0], true, depth + 1);
            ExprP right_term;
            if (prune && sr.eq(obar, sr.zero)) {
                right_term = ex_empty();
            } else {
                ExprP dright = aexp_deriv_rec(d, inputs, e->kids[1], a, prune, depth + 1);
                if (prune && (dright->kind == ExprKind::Empty || sr.eq(obar, sr.one)))
                    right_term = dright;
                else
                    right_term = ex_scale(sr.print(obar), dright);
            }
            ExprP out = ex_plus({left_term, right_term});
            return prune ? aexp_simplify(d, out) : out;
        }
        default: throw std::runtime_error("derivative of an open or ill-formed expression");
    }
}

}  // namespace

Scalar aexp_out(const MonadDesc& d, const ExprP& e) { return aexp_out_rec(d, e, false, 0); }
Scalar aexp_out_bar(const MonadDesc& d, const ExprP& e) { return aexp_out_rec(d, e, true, 0); }

ExprP aexp_deriv(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                 int a, bool prune) {
    return aexp_deriv_rec(d, inputs, e, a, prune, 0);
}

Scalar aexp_trace(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e,
                  const Word& w) {
    ExprP cur = e;
    for (int a : w) cur = aexp_deriv(d, inputs, cur, a, true);
    return aexp_out(d, cur);
}

// --------------------------------------------------------------------------
// tr / trbar
// --------------------------------------------------------------------------

namespace {

struct TrState {
    const MonadDesc& d;
    const std::vector<std::string>& inputs;
    std::map<std::string, std::string> in_progress;  // mu key -> bound variable
    std::map<std::string, ExprP> done;               // mu key -> closed result
    int counter = 0;
};

ExprP tr_rec(TrState& st, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Lit: {
            std::vector<ExprP> kids(st.inputs.size(), ex_empty());
            return ex_rmu("z" + std::to_string(st.counter++), std::move(kids), e);
        }
        case ExprKind::Act: {
            std::vector<ExprP> kids(st.inputs.size(), ex_empty());
            for (size_t i = 0; i < st.inputs.size(); i++)
                if (st.inputs[i] == e->name) kids[i] = tr_rec(st, e->kids[0]);
            return ex_rmu("z" + std::to_string(st.counter++), std::move(kids), ex_empty());
        }
        case ExprKind::Empty: return ex_empty();
        case ExprKind::Plus: {
            std::vector<ExprP> kids;
            for (const ExprP& k : e->kids) kids.push_back(tr_rec(st, k));
            return ex_plus(std::move(kids));
        }
        case ExprKind::Scale: return ex_scale(e->name, tr_rec(st, e->kids[0]));
        case ExprKind::Mu: {
            std::string key = expr_key(e);
            auto ip = st.in_progress.find(key);
            if (ip != st.in_progress.end()) return ex_var(ip->second);
            auto dn = st.done.find(key);
            if (dn != st.done.end()) return dn->second;
            std::string z = "z" + std::to_string(st.counter++);
            st.in_progress.emplace(key, z);
            std::vector<ExprP> kids;
            for (size_t a = 0; a < st.inputs.size(); a++)
                kids.push_back(tr_rec(
                    st, aexp_deriv_rec(st.d, st.inputs, e, static_cast<int>(a), false, 0)));
            ExprP beta = ex_lit(st.d.sr.print(aexp_out(st.d, e)));
            ExprP res = ex_rmu(z, std::move(kids), beta);
            st.in_progress.erase(key);
            if (expr_free_vars(res).empty()) st.done.emplace(key, res);
            return res;
        }
        default: throw std::runtime_error("tr: not an additive expression");
    }
}

ExprP beta_to_additive(const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Lit:
        case ExprKind::Empty: return e;
        case ExprKind::Plus: {
            std::vector<ExprP> kids;
            for (const ExprP& k : e->kids) kids.push_back(beta_to_additive(k));
            return ex_plus(std::move(kids));
        }
        case ExprKind::Scale: return ex_scale(e->name, beta_to_additive(e->kids[0]));
        default: throw std::runtime_error("trbar: output term is not additive");
    }
}

}  // namespace

ExprP tr(const MonadDesc& d, const std::vector<std::string>& inputs, const ExprP& e) {
    if (auto bad = guardedness_check(e))
        throw std::runtime_error("unguarded variable at " + *bad);
    TrState st{d, inputs, {}, {}, 0};
    return tr_rec(st, e);
}

ExprP trbar(const std::vector<std::string>& inputs, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Var:
        case ExprKind::Empty: return e;
        case ExprKind::RMu: {
            std::vector<ExprP> sum;
            for (size_t i = 0; i < e->kids.size(); i++)
                sum.push_back(ex_act(inputs.at(i), trbar(inputs, e->kids[i])));
            sum.push_back(beta_to_additive(e->beta));
            return ex_mu(e->name, ex_plus(std::move(sum)));
        }
        case ExprKind::Plus: {
            std::vector<ExprP> kids;
            for (const ExprP& k : e->kids) kids.push_back(trbar(inputs, k));
            return ex_plus(std::move(kids));
        }
        case ExprKind::Scale: return ex_scale(e->name, trbar(inputs, e->kids[0]));
        default: throw std::runtime_error("trbar: not a reactive expression");
    }
}

// --------------------------------------------------------------------------
// Context-free grammars
// --------------------------------------------------------------------------

bool CFG::is_nt(const std::string& s) const {
    return std::find(nts.begin(), nts.end(), s) != nts.end();
}

CFG cfg_parse(const std::string& text) {
    CFG g;
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        if (toks.size() < 3 || toks[1] != "->")
            throw std::runtime_error("bad production (want 'X -> ...'): " + line);
        rows.push_back(std::move(toks));
        const std::string& lhs = rows.back()[0];
        if (!g.is_nt(lhs)) g.nts.push_back(lhs);
    }
    std::set<std::string> terms;
    for (const auto& toks : rows) {
        CfgProd p;
        p.lhs = toks[0];
        if (!(toks.size() == 3 && toks[2] == "eps"))
            p.rhs.assign(toks.begin() + 2, toks.end());
        for (const std::string& s : p.rhs)
            if (!g.is_nt(s)) terms.insert(s);
        g.prods.push_back(std::move(p));
    }
    g.terminals.assign(terms.begin(), terms.end());
    if (g.prods.empty()) throw std::runtime_error("empty grammar");
    return g;
}

ExprP cfg_to_algexpr(const CFG& g, const std::string& start, const MonadDesc& d) {
    if (!d.sr.is_idempotent)
        throw std::runtime_error("cfg import needs an idempotent semiring");
    if (!g.is_nt(start)) throw std::runtime_error("unknown start symbol: " + start);
    for (const CfgProd& p : g.prods) {
        if (p.rhs.empty()) continue;
        if (g.is_nt(p.rhs[0]))
            throw std::runtime_error("not in Greibach normal form: " + p.lhs +
                                     " starts with a nonterminal");
        for (size_t i = 1; i < p.rhs.size(); i++)
            if (!g.is_nt(p.rhs[i]))
                throw std::runtime_error("not in Greibach normal form: " + p.lhs +
                                         " has a terminal after position 1");
    }
    // order: start first, then the rest in declaration order
    std::vector<std::string> order{start};
    for (const std::string& x : g.nts)
        if (x != start) order.push_back(x);
    size_t n = order.size();
    std::vector<ExprP> t(n), dflt(n);
    for (size_t i = 0; i < n; i++) {
        std::vector<ExprP> sum;
        bool has_eps = false;
        for (const CfgProd& p : g.prods) {
            if (p.lhs != order[i]) continue;
            if (p.rhs.empty()) {
                has_eps = true;
                continue;
            }
            ExprP body;
            for (size_t k = p.rhs.size() - 1; k >= 1; k--) {
                ExprP v = ex_var(p.rhs[k]);
                body = body ? ex_seq(v, body) : v;
            }
            sum.push_back(ex_act(p.rhs[0], body ? body : ex_hole()));
        }
        t[i] = sum.empty() ? ex_empty() : ex_plus(std::move(sum));
        dflt[i] = has_eps ? ex_hole() : ex_empty();
    }
    std::vector<ExprP> u(n);
    for (int i = static_cast<int>(n) - 1; i >= 0; i--) {
        ExprP body = t[i];
        for (size_t k = i + 1; k < n; k++) body = expr_subst(body, order[k], u[k]);
        u[i] = ex_mu(order[i], ex_plus({body, dflt[i]}));
    }
    return ex_seq(u[0], ex_lit(d.sr.print(d.sr.one)));
}

}  // namespace taut
