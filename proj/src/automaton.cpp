#include "taut/automaton.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace taut {

// --------------------------------------------------------------------------
// MonadDesc / TAutomaton lookups
// --------------------------------------------------------------------------

int MonadDesc::sym_index(const std::string& name) const {
    for (int i = 0; i < nsym(); i++)
        if (syms[i] == name) return i;
    throw std::runtime_error("unknown storage symbol: " + name);
}

int MonadDesc::blank() const { return sym_index("_"); }

int TAutomaton::state_index(const std::string& name) const {
    for (size_t i = 0; i < states.size(); i++)
        if (states[i] == name) return static_cast<int>(i);
    throw std::runtime_error("unknown state: " + name);
}

int TAutomaton::input_index(const std::string& name) const {
    for (size_t i = 0; i < inputs.size(); i++)
        if (inputs[i] == name) return static_cast<int>(i);
    throw std::runtime_error("unknown input: " + name);
}

namespace {

std::string sym_string_print(const MonadDesc& d, const std::string& idx) {
    std::string out;
    for (char c : idx) out += d.syms.at(static_cast<unsigned char>(c));
    return out.empty() ? "-" : out;
}

std::string sym_string_parse(const MonadDesc& d, const std::string& text) {
    if (text == "-" || text == "eps" || text.empty()) return "";
    std::string out;
    for (char c : text) out += static_cast<char>(d.sym_index(std::string(1, c)));
    return out;
}

std::string tuple_print(const MonadDesc& d, const StackTuple& t) {
    std::string out;
    for (size_t i = 0; i < t.size(); i++) {
        if (i) out += ',';
        std::string w = sym_string_print(d, t[i]);
        out += (w == "-" ? "" : w);
    }
    return out.empty() ? "-" : out;
}

StackTuple tuple_parse(const MonadDesc& d, const std::string& text) {
    StackTuple out;
    std::string body = text == "-" ? std::string(d.m - 1, ',') : text;
    std::string cur;
    for (char c : body) {
        if (c == ',') {
            out.push_back(sym_string_parse(d, cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(sym_string_parse(d, cur));
    if (static_cast<int>(out.size()) != d.m)
        throw std::runtime_error("stack tuple has wrong arity: " + text);
    return out;
}

const char* kind_name(MonadKind k) {
    switch (k) {
        case MonadKind::Pow: return "pow";
        case MonadKind::Lin: return "lincomb";
        case MonadKind::Stack: return "stack";
        case MonadKind::NdStack: return "ndstack";
        case MonadKind::MultiStack: return "multistack";
        case MonadKind::Tape: return "tape";
    }
    return "?";
}

}  // namespace

// --------------------------------------------------------------------------
// Element operations
// --------------------------------------------------------------------------

TElem unit_elem(const MonadDesc& d, int state) {
    switch (d.kind) {
        case MonadKind::Pow: return StateSet{state};
        case MonadKind::Lin: return lincomb_unit(state, d.sr);
        case MonadKind::Stack: return stack_unit(state, d.nsym());
        case MonadKind::NdStack: return ndstack_unit(state, d.nsym());
        case MonadKind::MultiStack: return multistack_unit(state, d.nsym(), d.m);
        case MonadKind::Tape: return tape_unit(state, d.nsym());
    }
    throw std::logic_error("unit_elem");
}

TElem empty_elem(const MonadDesc& d) {
    switch (d.kind) {
        case MonadKind::Pow: return StateSet{};
        case MonadKind::Lin: return LinComb<int>{};
        case MonadKind::NdStack: return ndstack_empty<int>(d.nsym());
        case MonadKind::MultiStack: return multistack_empty<int>(d.nsym(), d.m);
        default:
            throw std::runtime_error(std::string("monad ") + kind_name(d.kind) +
                                     " has no empty element");
    }
}

TElem kleisli_elem(const MonadDesc& d, const std::function<TElem(int)>& f, const TElem& p) {
    switch (d.kind) {
        case MonadKind::Pow: {
            std::function<StateSet(const int&)> g = [&](const int& x) {
                return std::get<StateSet>(f(x));
            };
            return powerset_kleisli(g, std::get<StateSet>(p));
        }
        case MonadKind::Lin: {
            std::function<LinComb<int>(const int&)> g = [&](const int& x) {
                return std::get<LinComb<int>>(f(x));
            };
            return lincomb_kleisli(g, std::get<LinComb<int>>(p), d.sr);
        }
        case MonadKind::Stack: {
            std::function<StackElem<int>(const int&)> g = [&](const int& x) {
                return std::get<StackElem<int>>(f(x));
            };
            return stack_kleisli(g, std::get<StackElem<int>>(p));
        }
        case MonadKind::NdStack: {
            std::function<NdStackElem<int>(const int&)> g = [&](const int& x) {
                return std::get<NdStackElem<int>>(f(x));
            };
            return ndstack_kleisli(g, std::get<NdStackElem<int>>(p));
        }
        case MonadKind::MultiStack: {
            std::function<MultiStackElem<int>(const int&)> g = [&](const int& x) {
                return std::get<MultiStackElem<int>>(f(x));
            };
            return multistack_kleisli(g, std::get<MultiStackElem<int>>(p));
        }
        case MonadKind::Tape: {
            std::function<TapeElem<int>(const int&)> g = [&](const int& x) {
                return std::get<TapeElem<int>>(f(x));
            };
            return tape_kleisli(g, std::get<TapeElem<int>>(p));
        }
    }
    throw std::logic_error("kleisli_elem");
}

TElem elem_minimize(const MonadDesc& d, TElem e) {
    switch (d.kind) {
        case MonadKind::Pow:
        case MonadKind::Lin: return e;
        case MonadKind::Stack: return stack_minimize(std::get<StackElem<int>>(std::move(e)));
        case MonadKind::NdStack:
            return ndstack_minimize(std::get<NdStackElem<int>>(std::move(e)));
        case MonadKind::MultiStack:
            return multistack_minimize(std::get<MultiStackElem<int>>(std::move(e)));
        case MonadKind::Tape: return tape_minimize(std::get<TapeElem<int>>(std::move(e)));
    }
    throw std::logic_error("elem_minimize");
}

bool elem_eq(const MonadDesc& d, const TElem& a, const TElem& b) {
    if (d.kind == MonadKind::Lin && d.sr.name == "real") {
        const auto& x = std::get<LinComb<int>>(a);
        const auto& y = std::get<LinComb<int>>(b);
        auto keys = x.coef;
        for (const auto& [k, v] : y.coef) keys.emplace(k, d.sr.zero);
        for (const auto& [k, v] : keys) {
            Scalar cx = x.coef.count(k) ? x.coef.at(k) : d.sr.zero;
            Scalar cy = y.coef.count(k) ? y.coef.at(k) : d.sr.zero;
            if (!d.sr.eq(cx, cy)) return false;
        }
        return true;
    }
    return elem_minimize(d, a) == elem_minimize(d, b);
}

std::vector<int> elem_results(const TElem& e) {
    std::set<int> out;
    if (auto* s = std::get_if<StateSet>(&e)) {
        out.insert(s->begin(), s->end());
    } else if (auto* l = std::get_if<LinComb<int>>(&e)) {
        for (const auto& [k, c] : l->coef) out.insert(k);
    } else if (auto* st = std::get_if<StackElem<int>>(&e)) {
        for (const auto& [w, v] : st->table) out.insert(v.first);
    } else if (auto* nd = std::get_if<NdStackElem<int>>(&e)) {
        for (const auto& [w, v] : nd->table)
            for (const auto& [x, t] : v) out.insert(x);
    } else if (auto* ms = std::get_if<MultiStackElem<int>>(&e)) {
        for (const auto& [w, v] : ms->table)
            for (const auto& [x, t] : v) out.insert(x);
    } else if (auto* tp = std::get_if<TapeElem<int>>(&e)) {
        for (const auto& [w, v] : tp->table) out.insert(std::get<0>(v));
    }
    return {out.begin(), out.end()};
}

OutVal algebra_map(const MonadDesc& d, const TElem& e, const std::function<OutVal(int)>& f) {
    switch (d.kind) {
        case MonadKind::Pow: {
            bool any = false;
            for (int x : std::get<StateSet>(e))
                if (std::get<bool>(std::get<Scalar>(f(x)))) any = true;
            return Scalar{any};
        }
        case MonadKind::Lin: {
            Scalar acc = d.sr.zero;
            for (const auto& [x, c] : std::get<LinComb<int>>(e).coef)
                acc = d.sr.add(acc, d.sr.mul(c, std::get<Scalar>(f(x))));
            return acc;
        }
        case MonadKind::Stack: {
            std::function<StackPred(const int&)> g = [&](const int& x) {
                return std::get<StackPred>(f(x));
            };
            return stack_algebra_map(std::get<StackElem<int>>(e), g);
        }
        case MonadKind::NdStack: {
            std::function<StackPred(const int&)> g = [&](const int& x) {
                return std::get<StackPred>(f(x));
            };
            return ndstack_algebra_map(std::get<NdStackElem<int>>(e), g);
        }
        case MonadKind::MultiStack: {
            std::function<MultiStackPred(const int&)> g = [&](const int& x) {
                return std::get<MultiStackPred>(f(x));
            };
            return multistack_algebra_map(std::get<MultiStackElem<int>>(e), g);
        }
        case MonadKind::Tape: {
            std::function<WindowPred(const int&)> g = [&](const int& x) {
                return std::get<WindowPred>(f(x));
            };
            return tape_algebra_map(std::get<TapeElem<int>>(e), g);
        }
    }
    throw std::logic_error("algebra_map");
}

bool out_eq(const MonadDesc& d, const OutVal& a, const OutVal& b) {
    if (std::holds_alternative<Scalar>(a))
        return std::holds_alternative<Scalar>(b) &&
               d.sr.eq(std::get<Scalar>(a), std::get<Scalar>(b));
    if (auto* p = std::get_if<StackPred>(&a)) {
        auto* q = std::get_if<StackPred>(&b);
        return q && stackpred_minimize(*p) == stackpred_minimize(*q);
    }
    if (auto* p = std::get_if<MultiStackPred>(&a)) {
        auto* q = std::get_if<MultiStackPred>(&b);
        return q && multistackpred_minimize(*p) == multistackpred_minimize(*q);
    }
    auto* p = std::get_if<WindowPred>(&a);
    auto* q = std::get_if<WindowPred>(&b);
    return p && q && windowpred_minimize(*p) == windowpred_minimize(*q);
}

bool out_truthy(const MonadDesc& d, const OutVal& v) {
    if (auto* s = std::get_if<Scalar>(&v)) return !d.sr.eq(*s, d.sr.zero);
    if (auto* p = std::get_if<StackPred>(&v)) return stackpred_apply(*p, "");
    if (auto* p = std::get_if<MultiStackPred>(&v))
        return multistackpred_apply(*p, StackTuple(p->m));
    const auto& p = std::get<WindowPred>(v);
    return p.table.at(std::string(2 * p.k + 1, static_cast<char>(d.blank())));
}

// --------------------------------------------------------------------------
// Output-object theory operations and literals
// --------------------------------------------------------------------------

namespace {

StackPred stackpred_or(const StackPred& a, const StackPred& b) {
    StackPred out;
    out.nsym = a.nsym;
    out.k = std::max(a.k, b.k);
    for (const std::string& w : all_prefix_keys(a.nsym, out.k))
        out.table.emplace(w, stackpred_apply(a, w) || stackpred_apply(b, w));
    return stackpred_minimize(std::move(out));
}

MultiStackPred multistackpred_or(const MultiStackPred& a, const MultiStackPred& b) {
    MultiStackPred out;
    out.nsym = a.nsym;
    out.m = a.m;
    out.k = std::max(a.k, b.k);
    for (const StackTuple& w : all_tuple_keys(a.nsym, a.m, out.k))
        out.table.emplace(w, multistackpred_apply(a, w) || multistackpred_apply(b, w));
    return multistackpred_minimize(std::move(out));
}

StackPred stackpred_pop(const std::vector<StackPred>& branches, const StackPred& q) {
    int k2 = 1;
    for (const auto& b : branches) k2 = std::max(k2, b.k + 1);
    check_bound_cap(k2, "pred pop");
    StackPred out;
    out.nsym = q.nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(q.nsym, k2)) {
        if (w.empty())
            out.table.emplace(w, stackpred_apply(q, ""));
        else
            out.table.emplace(
                w, stackpred_apply(branches[static_cast<unsigned char>(w[0])], w.substr(1)));
    }
    return stackpred_minimize(std::move(out));
}

StackPred stackpred_push(int sym, const StackPred& p) {
    StackPred out;
    out.nsym = p.nsym;
    out.k = std::max(p.k - 1, 0);
    std::string c(1, static_cast<char>(sym));
    for (const std::string& w : all_prefix_keys(p.nsym, out.k))
        out.table.emplace(w, stackpred_apply(p, c + w));
    return stackpred_minimize(std::move(out));
}

MultiStackPred multistackpred_pop(int stack, const std::vector<MultiStackPred>& branches,
                                  const MultiStackPred& q) {
    int k2 = 1;
    for (const auto& b : branches) k2 = std::max(k2, b.k + 1);
    k2 = std::max(k2, q.k);
    check_bound_cap(k2, "pred pop");
    MultiStackPred out;
    out.nsym = q.nsym;
    out.m = q.m;
    out.k = k2;
    for (const StackTuple& w : all_tuple_keys(q.nsym, q.m, k2)) {
        if (w[stack].empty()) {
            out.table.emplace(w, multistackpred_apply(q, w));
        } else {
            StackTuple w2 = w;
            int sym = static_cast<unsigned char>(w2[stack][0]);
            w2[stack] = w2[stack].substr(1);
            out.table.emplace(w, multistackpred_apply(branches[sym], w2));
        }
    }
    return multistackpred_minimize(std::move(out));
}

MultiStackPred multistackpred_push(int stack, int sym, const MultiStackPred& p) {
    MultiStackPred out;
    out.nsym = p.nsym;
    out.m = p.m;
    out.k = p.k;
    for (const StackTuple& w : all_tuple_keys(p.nsym, p.m, p.k)) {
        StackTuple w2 = w;
        w2[stack] = std::string(1, static_cast<char>(sym)) + w2[stack];
        out.table.emplace(w, multistackpred_apply(p, w2));
    }
    return multistackpred_minimize(std::move(out));
}

bool windowpred_at(const WindowPred& p, const std::string& buf, int h) {
    return p.table.at(buf.substr(h - p.k, 2 * p.k + 1));
}

WindowPred windowpred_read(const std::vector<WindowPred>& branches) {
    int k2 = 0;
    for (const auto& b : branches) k2 = std::max(k2, b.k);
    check_bound_cap(k2, "pred read");
    WindowPred out;
    out.nsym = static_cast<int>(branches.size());
    out.k = k2;
    for (const std::string& w : all_strings(out.nsym, 2 * k2 + 1))
        out.table.emplace(w, windowpred_at(branches[static_cast<unsigned char>(w[k2])], w, k2));
    return windowpred_minimize(std::move(out));
}

WindowPred windowpred_write(int sym, const WindowPred& p) {
    WindowPred out;
    out.nsym = p.nsym;
    out.k = p.k;
    for (const std::string& w : all_strings(p.nsym, 2 * p.k + 1)) {
        std::string w2 = w;
        w2[p.k] = static_cast<char>(sym);
        out.table.emplace(w, windowpred_at(p, w2, p.k));
    }
    return windowpred_minimize(std::move(out));
}

WindowPred windowpred_move(int dir, const WindowPred& p) {
    int k2 = p.k + 1;
    check_bound_cap(k2, "pred move");
    WindowPred out;
    out.nsym = p.nsym;
    out.k = k2;
    for (const std::string& w : all_strings(p.nsym, 2 * k2 + 1))
        out.table.emplace(w, windowpred_at(p, w, k2 + dir));
    return windowpred_minimize(std::move(out));
}

}  // namespace

OutVal b_apply_op(const MonadDesc& d, const std::string& op,
                  const std::vector<std::string>& params, const std::vector<OutVal>& args) {
    auto scalar_args = [&]() {
        std::vector<Scalar> out;
        for (const OutVal& a : args) out.push_back(std::get<Scalar>(a));
        return out;
    };
    switch (d.kind) {
        case MonadKind::Pow:
        case MonadKind::Lin: {
            if (op == "plus") {
                Scalar acc = d.sr.zero;
                for (const Scalar& a : scalar_args()) acc = d.sr.add(acc, a);
                return acc;
            }
            if (op == "empty") return d.sr.zero;
            if (op == "scale")
                return d.sr.mul(d.sr.parse(params.at(0)), std::get<Scalar>(args.at(0)));
            break;
        }
        case MonadKind::Stack:
        case MonadKind::NdStack: {
            if (op == "pop") {
                std::vector<StackPred> br;
                for (int i = 0; i < d.nsym(); i++) br.push_back(std::get<StackPred>(args.at(i)));
                return stackpred_pop(br, std::get<StackPred>(args.at(d.nsym())));
            }
            if (op == "push")
                return stackpred_push(d.sym_index(params.at(0)), std::get<StackPred>(args.at(0)));
            if (op == "plus" && d.kind == MonadKind::NdStack) {
                StackPred acc = stackpred_const(false, d.nsym());
                for (const OutVal& a : args) acc = stackpred_or(acc, std::get<StackPred>(a));
                return acc;
            }
            if (op == "empty" && d.kind == MonadKind::NdStack)
                return stackpred_const(false, d.nsym());
            break;
        }
        case MonadKind::MultiStack: {
            int stack = params.empty() ? 0 : std::stoi(params.at(0)) - 1;
            if (op == "pop") {
                std::vector<MultiStackPred> br;
                for (int i = 0; i < d.nsym(); i++)
                    br.push_back(std::get<MultiStackPred>(args.at(i)));
                return multistackpred_pop(stack, br,
                                          std::get<MultiStackPred>(args.at(d.nsym())));
            }
            if (op == "push")
                return multistackpred_push(stack, d.sym_index(params.at(1)),
                                           std::get<MultiStackPred>(args.at(0)));
            if (op == "plus") {
                MultiStackPred acc = multistackpred_const(false, d.nsym(), d.m);
                for (const OutVal& a : args)
                    acc = multistackpred_or(acc, std::get<MultiStackPred>(a));
                return acc;
            }
            if (op == "empty") return multistackpred_const(false, d.nsym(), d.m);
            break;
        }
        case MonadKind::Tape: {
            if (op == "read") {
                std::vector<WindowPred> br;
                for (int i = 0; i < d.nsym(); i++) br.push_back(std::get<WindowPred>(args.at(i)));
                return windowpred_read(br);
            }
            if (op == "write")
                return windowpred_write(d.sym_index(params.at(0)),
                                        std::get<WindowPred>(args.at(0)));
            if (op == "lmove") return windowpred_move(-1, std::get<WindowPred>(args.at(0)));
            if (op == "rmove") return windowpred_move(+1, std::get<WindowPred>(args.at(0)));
            break;
        }
    }
    throw std::runtime_error(std::string("operation ") + op + " not available on outputs of " +
                             kind_name(d.kind) + " automata");
}

OutVal b_literal(const MonadDesc& d, const std::string& text) {
    switch (d.kind) {
        case MonadKind::Pow:
        case MonadKind::Lin: return d.sr.parse(text);
        case MonadKind::Stack:
        case MonadKind::NdStack:
            if (text == "true" || text == "1") return stackpred_const(true, d.nsym());
            if (text == "false" || text == "0") return stackpred_const(false, d.nsym());
            break;
        case MonadKind::MultiStack:
            if (text == "true" || text == "1") return multistackpred_const(true, d.nsym(), d.m);
            if (text == "false" || text == "0")
                return multistackpred_const(false, d.nsym(), d.m);
            break;
        case MonadKind::Tape:
            if (text == "true" || text == "1") return windowpred_const(true, d.nsym());
            if (text == "false" || text == "0") return windowpred_const(false, d.nsym());
            break;
    }
    throw std::runtime_error("cannot read output literal '" + text + "' for " +
                             kind_name(d.kind) + " automata");
}

SExpr out_to_sexpr(const MonadDesc& d, const OutVal& v) {
    if (auto* s = std::get_if<Scalar>(&v)) return SExpr::make_atom(d.sr.print(*s));
    SExpr e = SExpr::make_list({SExpr::make_atom("pred")});
    auto entry = [&](const std::string& key, bool b) {
        e.items.push_back(SExpr::make_list(
            {SExpr::make_atom(key), SExpr::make_atom(b ? "1" : "0")}));
    };
    if (auto* p = std::get_if<StackPred>(&v)) {
        StackPred q = stackpred_minimize(*p);
        if (q.k == 0) return SExpr::make_atom(q.table.at("") ? "true" : "false");
        for (const auto& [w, b] : q.table) entry(sym_string_print(d, w), b);
    } else if (auto* p = std::get_if<MultiStackPred>(&v)) {
        MultiStackPred q = multistackpred_minimize(*p);
        if (q.k == 0) return SExpr::make_atom(q.table.at(StackTuple(q.m)) ? "true" : "false");
        for (const auto& [w, b] : q.table) entry(tuple_print(d, w), b);
    } else {
        WindowPred q = windowpred_minimize(std::get<WindowPred>(v));
        if (q.k == 0 && q.table.size() == static_cast<size_t>(d.nsym())) {
            bool all = true, none = true;
            for (const auto& [w, b] : q.table) (b ? none : all) = false;
            if (all) return SExpr::make_atom("true");
            if (none) return SExpr::make_atom("false");
        }
        for (const auto& [w, b] : q.table) entry(sym_string_print(d, w), b);
    }
    return e;
}

OutVal out_parse(const MonadDesc& d, const SExpr& e) {
    if (e.atom) return b_literal(d, e.text);
    if (e.head() != "pred") throw std::runtime_error("expected output literal or (pred ...)");
    std::vector<std::pair<std::string, bool>> entries;
    size_t maxlen = 0;
    for (size_t i = 1; i < e.size(); i++) {
        const SExpr& it = e[i];
        if (it.atom || it.size() != 2 || !it[0].atom || !it[1].atom)
            throw std::runtime_error("(pred ...) entries are (<prefix> <0|1>)");
        entries.emplace_back(it[0].text, it[1].text != "0");
    }
    switch (d.kind) {
        case MonadKind::Stack:
        case MonadKind::NdStack: {
            StackPred p;
            p.nsym = d.nsym();
            std::map<std::string, bool> given;
            for (auto& [w, b] : entries) {
                std::string key = sym_string_parse(d, w);
                maxlen = std::max(maxlen, key.size());
                given[key] = b;
            }
            p.k = static_cast<int>(maxlen);
            for (const std::string& w : all_prefix_keys(p.nsym, p.k))
                p.table.emplace(w, given.count(w) ? given[w] : false);
            // unlisted longer prefixes inherit listed shorter ones
            for (auto& [w, b] : p.table)
                if (!given.count(w))
                    for (int l = static_cast<int>(w.size()) - 1; l >= 0; l--)
                        if (given.count(w.substr(0, l))) {
                            b = given[w.substr(0, l)];
                            break;
                        }
            return stackpred_minimize(std::move(p));
        }
        case MonadKind::MultiStack: {
            MultiStackPred p;
            p.nsym = d.nsym();
            p.m = d.m;
            std::map<StackTuple, bool> given;
            for (auto& [w, b] : entries) {
                StackTuple key = tuple_parse(d, w);
                for (const std::string& c : key) maxlen = std::max(maxlen, c.size());
                given[key] = b;
            }
            p.k = static_cast<int>(maxlen);
            for (const StackTuple& w : all_tuple_keys(p.nsym, p.m, p.k))
                p.table.emplace(w, given.count(w) ? given[w] : false);
            return multistackpred_minimize(std::move(p));
        }
        case MonadKind::Tape: {
            WindowPred p;
            p.nsym = d.nsym();
            std::map<std::string, bool> given;
            for (auto& [w, b] : entries) {
                std::string key = sym_string_parse(d, w);
                if (key.size() % 2 == 0)
                    throw std::runtime_error("tape predicate windows have odd length");
                maxlen = std::max(maxlen, key.size());
                given[key] = b;
            }
            p.k = static_cast<int>(maxlen / 2);
            for (const std::string& w : all_strings(p.nsym, 2 * p.k + 1)) {
                auto it = given.find(w);
                p.table.emplace(w, it != given.end() ? it->second : false);
            }
            return windowpred_minimize(std::move(p));
        }
        default: throw std::runtime_error("(pred ...) literal needs a storage monad");
    }
}

std::string out_print(const MonadDesc& d, const OutVal& v) {
    return sexpr_print(out_to_sexpr(d, v));
}

// --------------------------------------------------------------------------
// Transition terms <-> elements
// --------------------------------------------------------------------------

namespace {

TElem elem_from_sexpr_rec(const TAutomaton& a, const SExpr& e);

TElem raw_table_from_sexpr(const TAutomaton& a, const SExpr& e) {
    const MonadDesc& d = a.monad;
    const std::string& h = e.head();
    if (h == "sttable") {
        StackElem<int> out;
        out.nsym = d.nsym();
        out.k = std::stoi(e[1].text);
        for (size_t i = 2; i < e.size(); i++)
            out.table.emplace(sym_string_parse(d, e[i][0].text),
                              std::make_pair(a.state_index(e[i][1].text),
                                             sym_string_parse(d, e[i][2].text)));
        return out;
    }
    if (h == "ndtable") {
        NdStackElem<int> out;
        out.nsym = d.nsym();
        out.k = std::stoi(e[1].text);
        for (size_t i = 2; i < e.size(); i++) {
            std::set<std::pair<int, std::string>> v;
            for (size_t j = 1; j < e[i].size(); j++)
                v.emplace(a.state_index(e[i][j][0].text),
                          sym_string_parse(d, e[i][j][1].text));
            out.table.emplace(sym_string_parse(d, e[i][0].text), std::move(v));
        }
        return out;
    }
    if (h == "msttable") {
        MultiStackElem<int> out;
        out.nsym = d.nsym();
        out.m = d.m;
        out.k = std::stoi(e[1].text);
        for (size_t i = 2; i < e.size(); i++) {
            std::set<std::pair<int, StackTuple>> v;
            for (size_t j = 1; j < e[i].size(); j++)
                v.emplace(a.state_index(e[i][j][0].text), tuple_parse(d, e[i][j][1].text));
            out.table.emplace(tuple_parse(d, e[i][0].text), std::move(v));
        }
        return out;
    }
    if (h == "tapetable") {
        TapeElem<int> out;
        out.nsym = d.nsym();
        out.k = std::stoi(e[1].text);
        for (size_t i = 2; i < e.size(); i++)
            out.table.emplace(sym_string_parse(d, e[i][0].text),
                              std::make_tuple(a.state_index(e[i][1].text),
                                              std::stoi(e[i][2].text),
                                              sym_string_parse(d, e[i][3].text)));
        return out;
    }
    throw std::runtime_error("unknown raw table form: " + h);
}

TElem elem_from_sexpr_rec(const TAutomaton& a, const SExpr& e) {
    const MonadDesc& d = a.monad;
    if (e.atom) return unit_elem(d, a.state_index(e.text));
    const std::string& h = e.head();
    if (h == "var") return unit_elem(d, a.state_index(e[1].text));
    if (h == "sttable" || h == "ndtable" || h == "msttable" || h == "tapetable")
        return raw_table_from_sexpr(a, e);
    auto arg = [&](size_t i) { return elem_from_sexpr_rec(a, e[i]); };
    if (h == "empty" || (h == "plus" && e.size() == 1)) return empty_elem(d);
    if (h == "plus") {
        TElem acc = arg(1);
        for (size_t i = 2; i < e.size(); i++) {
            TElem b = arg(i);
            switch (d.kind) {
                case MonadKind::Pow: {
                    auto s = std::get<StateSet>(acc);
                    const auto& t = std::get<StateSet>(b);
                    s.insert(t.begin(), t.end());
                    acc = std::move(s);
                    break;
                }
                case MonadKind::Lin:
                    acc = lincomb_add(std::get<LinComb<int>>(acc), std::get<LinComb<int>>(b),
                                      d.sr);
                    break;
                case MonadKind::NdStack:
                    acc = ndstack_plus(std::get<NdStackElem<int>>(acc),
                                       std::get<NdStackElem<int>>(b));
                    break;
                case MonadKind::MultiStack:
                    acc = multistack_plus(std::get<MultiStackElem<int>>(acc),
                                          std::get<MultiStackElem<int>>(b));
                    break;
                default:
                    throw std::runtime_error("plus is not a theory operation of " +
                                             std::string(kind_name(d.kind)));
            }
        }
        return acc;
    }
    if (h == "scale") {
        if (d.kind != MonadKind::Lin)
            throw std::runtime_error("scale needs the semimodule monad");
        return lincomb_scale(d.sr.parse(e[1].text), std::get<LinComb<int>>(arg(2)),
                             d.sr);
    }
    if (h == "pop") {
        if (d.kind == MonadKind::Stack) {
            if (static_cast<int>(e.size()) != d.nsym() + 2)
                throw std::runtime_error("pop takes one branch per symbol plus empty branch");
            std::vector<StackElem<int>> br;
            for (int i = 0; i < d.nsym(); i++)
                br.push_back(std::get<StackElem<int>>(arg(1 + i)));
            return stack_pop(br, std::get<StackElem<int>>(arg(1 + d.nsym())));
        }
        if (d.kind == MonadKind::NdStack) {
            std::vector<NdStackElem<int>> br;
            for (int i = 0; i < d.nsym(); i++)
                br.push_back(std::get<NdStackElem<int>>(arg(1 + i)));
            return ndstack_pop(br, std::get<NdStackElem<int>>(arg(1 + d.nsym())));
        }
        if (d.kind == MonadKind::MultiStack) {
            int stack = std::stoi(e[1].text) - 1;
            std::vector<MultiStackElem<int>> br;
            for (int i = 0; i < d.nsym(); i++)
                br.push_back(std::get<MultiStackElem<int>>(arg(2 + i)));
            return multistack_pop(stack, br,
                                  std::get<MultiStackElem<int>>(arg(2 + d.nsym())));
        }
    }
    if (h == "push") {
        if (d.kind == MonadKind::Stack)
            return stack_push(d.sym_index(e[1].text), std::get<StackElem<int>>(arg(2)));
        if (d.kind == MonadKind::NdStack)
            return ndstack_push(d.sym_index(e[1].text), std::get<NdStackElem<int>>(arg(2)));
        if (d.kind == MonadKind::MultiStack)
            return multistack_push(std::stoi(e[1].text) - 1, d.sym_index(e[2].text),
                                   std::get<MultiStackElem<int>>(arg(3)));
    }
    if (d.kind == MonadKind::Tape) {
        if (h == "read") {
            std::vector<TapeElem<int>> br;
            for (int i = 0; i < d.nsym(); i++) br.push_back(std::get<TapeElem<int>>(arg(1 + i)));
            return tape_read(br);
        }
        if (h == "write")
            return tape_write(d.sym_index(e[1].text), std::get<TapeElem<int>>(arg(2)));
        if (h == "lmove") return tape_move(-1, std::get<TapeElem<int>>(arg(1)));
        if (h == "rmove") return tape_move(+1, std::get<TapeElem<int>>(arg(1)));
    }
    throw std::runtime_error("operation '" + h + "' is not interpretable in the " +
                             kind_name(d.kind) + " monad");
}

SExpr push_chain(const TAutomaton& a, int state, const std::string& stack) {
    SExpr t = SExpr::make_atom(a.states[state]);
    for (char c : stack)
        t = SExpr::make_list({SExpr::make_atom("push"),
                              SExpr::make_atom(a.monad.syms[static_cast<unsigned char>(c)]),
                              t});
    return t;
}

SExpr stack_term_rec(const TAutomaton& a, const StackElem<int>& e) {
    if (e.k == 0) {
        const auto& [x, t] = e.table.at("");
        return push_chain(a, x, t);
    }
    SExpr out = SExpr::make_list({SExpr::make_atom("pop")});
    for (int c = 0; c < e.nsym; c++) {
        StackElem<int> sub;
        sub.nsym = e.nsym;
        sub.k = e.k - 1;
        std::string pre(1, static_cast<char>(c));
        for (const std::string& w : all_prefix_keys(e.nsym, e.k - 1))
            sub.table.emplace(w, e.table.at(pre + w));
        out.items.push_back(stack_term_rec(a, stack_minimize(std::move(sub))));
    }
    const auto& [x, t] = e.table.at("");
    out.items.push_back(push_chain(a, x, t));
    return out;
}

SExpr ndset_term(const TAutomaton& a, const std::set<std::pair<int, std::string>>& v) {
    if (v.empty()) return SExpr::make_list({SExpr::make_atom("empty")});
    if (v.size() == 1) return push_chain(a, v.begin()->first, v.begin()->second);
    SExpr out = SExpr::make_list({SExpr::make_atom("plus")});
    for (const auto& [x, t] : v) out.items.push_back(push_chain(a, x, t));
    return out;
}

SExpr ndstack_term_rec(const TAutomaton& a, const NdStackElem<int>& e) {
    if (e.k == 0) return ndset_term(a, e.table.at(""));
    SExpr out = SExpr::make_list({SExpr::make_atom("pop")});
    for (int c = 0; c < e.nsym; c++) {
        NdStackElem<int> sub;
        sub.nsym = e.nsym;
        sub.k = e.k - 1;
        std::string pre(1, static_cast<char>(c));
        for (const std::string& w : all_prefix_keys(e.nsym, e.k - 1))
            sub.table.emplace(w, e.table.at(pre + w));
        out.items.push_back(ndstack_term_rec(a, ndstack_minimize(std::move(sub))));
    }
    out.items.push_back(ndset_term(a, e.table.at("")));
    return out;
}

SExpr raw_table_to_sexpr(const TAutomaton& a, const TElem& e) {
    const MonadDesc& d = a.monad;
    auto atom = [](const std::string& s) { return SExpr::make_atom(s); };
    if (auto* ms = std::get_if<MultiStackElem<int>>(&e)) {
        SExpr out = SExpr::make_list({atom("msttable"), atom(std::to_string(ms->k))});
        for (const auto& [w, v] : ms->table) {
            SExpr row = SExpr::make_list({atom(tuple_print(d, w))});
            for (const auto& [x, t] : v)
                row.items.push_back(
                    SExpr::make_list({atom(a.states[x]), atom(tuple_print(d, t))}));
            out.items.push_back(std::move(row));
        }
        return out;
    }
    const auto& tp = std::get<TapeElem<int>>(e);
    SExpr out = SExpr::make_list({atom("tapetable"), atom(std::to_string(tp.k))});
    for (const auto& [w, v] : tp.table)
        out.items.push_back(SExpr::make_list(
            {atom(sym_string_print(d, w)), atom(a.states[std::get<0>(v)]),
             atom(std::to_string(std::get<1>(v))), atom(sym_string_print(d, std::get<2>(v)))}));
    return out;
}

}  // namespace

TElem elem_from_sexpr(const TAutomaton& a, const SExpr& e) {
    return elem_minimize(a.monad, elem_from_sexpr_rec(a, e));
}

SExpr elem_to_term_sexpr(const TAutomaton& a, const TElem& e) {
    const MonadDesc& d = a.monad;
    switch (d.kind) {
        case MonadKind::Pow: {
            const auto& s = std::get<StateSet>(e);
            if (s.empty()) return SExpr::make_list({SExpr::make_atom("empty")});
            if (s.size() == 1) return SExpr::make_atom(a.states[*s.begin()]);
            SExpr out = SExpr::make_list({SExpr::make_atom("plus")});
            for (int x : s) out.items.push_back(SExpr::make_atom(a.states[x]));
            return out;
        }
        case MonadKind::Lin: {
            const auto& l = std::get<LinComb<int>>(e);
            if (l.coef.empty()) return SExpr::make_list({SExpr::make_atom("empty")});
            std::vector<SExpr> parts;
            for (const auto& [x, c] : l.coef) {
                if (d.sr.eq(c, d.sr.one))
                    parts.push_back(SExpr::make_atom(a.states[x]));
                else
                    parts.push_back(SExpr::make_list({SExpr::make_atom("scale"),
                                                      SExpr::make_atom(d.sr.print(c)),
                                                      SExpr::make_atom(a.states[x])}));
            }
            if (parts.size() == 1) return parts[0];
            SExpr out = SExpr::make_list({SExpr::make_atom("plus")});
            for (SExpr& p : parts) out.items.push_back(std::move(p));
            return out;
        }
        case MonadKind::Stack:
            return stack_term_rec(a, stack_minimize(std::get<StackElem<int>>(e)));
        case MonadKind::NdStack:
            return ndstack_term_rec(a, ndstack_minimize(std::get<NdStackElem<int>>(e)));
        default:
            throw std::runtime_error(std::string("no generator terms for elements of the ") +
                                     kind_name(d.kind) + " monad");
    }
}

SExpr elem_to_sexpr(const TAutomaton& a, const TElem& e) {
    if (a.monad.kind == MonadKind::MultiStack || a.monad.kind == MonadKind::Tape)
        return raw_table_to_sexpr(a, e);
    return elem_to_term_sexpr(a, e);
}

std::string elem_key(const MonadDesc& d, const TElem& e) {
    TElem m = elem_minimize(d, e);
    std::ostringstream ss;
    if (auto* s = std::get_if<StateSet>(&m)) {
        ss << "{";
        for (int x : *s) ss << x << ",";
        ss << "}";
    } else if (auto* l = std::get_if<LinComb<int>>(&m)) {
        ss << "[";
        for (const auto& [x, c] : l->coef) ss << x << ":" << d.sr.print(c) << ",";
        ss << "]";
    } else if (auto* st = std::get_if<StackElem<int>>(&m)) {
        ss << "st" << st->k << "{";
        for (const auto& [w, v] : st->table) ss << w << ">" << v.first << "." << v.second << ";";
        ss << "}";
    } else if (auto* nd = std::get_if<NdStackElem<int>>(&m)) {
        ss << "nd" << nd->k << "{";
        for (const auto& [w, v] : nd->table) {
            ss << w << ">";
            for (const auto& [x, t] : v) ss << x << "." << t << "|";
            ss << ";";
        }
        ss << "}";
    } else if (auto* ms = std::get_if<MultiStackElem<int>>(&m)) {
        ss << "ms" << ms->k << "{";
        for (const auto& [w, v] : ms->table) {
            for (const std::string& c : w) ss << c << ",";
            ss << ">";
            for (const auto& [x, t] : v) {
                ss << x << ".";
                for (const std::string& c : t) ss << c << ",";
                ss << "|";
            }
            ss << ";";
        }
        ss << "}";
    } else {
        const auto& tp = std::get<TapeElem<int>>(m);
        ss << "tp" << tp.k << "{";
        for (const auto& [w, v] : tp.table)
            ss << w << ">" << std::get<0>(v) << "." << std::get<1>(v) << "." << std::get<2>(v)
               << ";";
        ss << "}";
    }
    return ss.str();
}

// --------------------------------------------------------------------------
// Semantics
// --------------------------------------------------------------------------

OutVal trace(const TAutomaton& a, int state, const Word& w) {
    int n = static_cast<int>(a.states.size());
    std::vector<OutVal> vals = a.out;
    for (int pos = static_cast<int>(w.size()) - 1; pos >= 0; pos--) {
        std::vector<OutVal> prev(n, a.out[0]);
        for (int x = 0; x < n; x++)
            prev[x] = algebra_map(a.monad, a.trans[x][w[pos]],
                                  [&](int y) { return vals[y]; });
        vals = std::move(prev);
    }
    return vals[state];
}

OutVal moore_output(const MooreAutomaton& m, int state, const Word& w) {
    int cur = state;
    for (int a : w) cur = m.next[cur][a];
    return m.out[cur];
}

DeterminizeResult determinize(const TAutomaton& a, int x0, int max_states) {
    DeterminizeResult res;
    MooreAutomaton& mo = res.moore;
    mo.inputs = a.inputs;
    std::map<std::string, int> index;
    std::deque<int> queue;
    auto intern = [&](const TElem& e) {
        TElem m = elem_minimize(a.monad, e);
        std::string key = elem_key(a.monad, m);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(res.state_elems.size());
        index.emplace(key, id);
        res.state_elems.push_back(m);
        mo.states.push_back(key);
        mo.out.push_back(algebra_map(a.monad, m, [&](int y) { return a.out[y]; }));
        mo.next.emplace_back(a.inputs.size(), -1);
        queue.push_back(id);
        return id;
    };
    try {
        res.start = intern(unit_elem(a.monad, x0));
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            for (size_t ai = 0; ai < a.inputs.size(); ai++) {
                TElem next = kleisli_elem(
                    a.monad, [&](int y) { return a.trans[y][ai]; }, res.state_elems[id]);
                if (static_cast<int>(res.state_elems.size()) >= max_states &&
                    !index.count(elem_key(a.monad, elem_minimize(a.monad, next)))) {
                    res.budget_exhausted = true;
                    return res;
                }
                mo.next[id][ai] = intern(next);
            }
        }
    } catch (const std::runtime_error& err) {
        // growing locality bounds hitting the cap mean a diverging closure
        if (std::string(err.what()).find("exceeds cap") != std::string::npos) {
            res.budget_exhausted = true;
            return res;
        }
        throw;
    }
    return res;
}

EquivResult trace_equiv_exact(const TAutomaton& a1, int x1, const TAutomaton& a2, int x2,
                              int max_states) {
    DeterminizeResult d1 = determinize(a1, x1, max_states);
    DeterminizeResult d2 = determinize(a2, x2, max_states);
    if (d1.budget_exhausted || d2.budget_exhausted)
        return {EquivVerdict::BudgetExhausted, {}};
    // product BFS with parent pointers for the witness
    std::map<std::pair<int, int>, int> seen;
    std::vector<std::tuple<int, int, int, int>> nodes;  // s1, s2, parent, input
    std::deque<int> queue;
    seen[{d1.start, d2.start}] = 0;
    nodes.emplace_back(d1.start, d2.start, -1, -1);
    queue.push_back(0);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        auto [s1, s2, par, inp] = nodes[id];
        if (!out_eq(a1.monad, d1.moore.out[s1], d2.moore.out[s2])) {
            Word w;
            for (int cur = id; std::get<2>(nodes[cur]) != -1; cur = std::get<2>(nodes[cur]))
                w.push_back(std::get<3>(nodes[cur]));
            std::reverse(w.begin(), w.end());
            return {EquivVerdict::Inequivalent, w};
        }
        for (size_t ai = 0; ai < a1.inputs.size(); ai++) {
            std::pair<int, int> nxt{d1.moore.next[s1][ai], d2.moore.next[s2][ai]};
            if (!seen.count(nxt)) {
                seen[nxt] = static_cast<int>(nodes.size());
                nodes.emplace_back(nxt.first, nxt.second, id, static_cast<int>(ai));
                queue.push_back(seen[nxt]);
            }
        }
    }
    return {EquivVerdict::Equivalent, {}};
}

EquivResult trace_equiv_bounded(const TAutomaton& a1, int x1, const TAutomaton& a2, int x2,
                                int maxlen) {
    std::deque<Word> queue{Word{}};
    while (!queue.empty()) {
        Word w = queue.front();
        queue.pop_front();
        if (!out_eq(a1.monad, trace(a1, x1, w), trace(a2, x2, w)))
            return {EquivVerdict::Inequivalent, w};
        if (static_cast<int>(w.size()) < maxlen)
            for (size_t ai = 0; ai < a1.inputs.size(); ai++) {
                Word w2 = w;
                w2.push_back(static_cast<int>(ai));
                queue.push_back(std::move(w2));
            }
    }
    return {EquivVerdict::Equivalent, {}};
}

std::optional<MooreAutomaton> rational_closure(const std::string& start, const SeriesOps& s,
                                               int max_states) {
    MooreAutomaton mo;
    for (int i = 0; i < s.ninputs; i++) mo.inputs.push_back("i" + std::to_string(i));
    std::map<std::string, int> index;
    std::deque<int> queue;
    auto intern = [&](const std::string& key) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(mo.states.size());
        index.emplace(key, id);
        mo.states.push_back(key);
        mo.out.push_back(s.out(key));
        mo.next.emplace_back(s.ninputs, -1);
        queue.push_back(id);
        return id;
    };
    intern(start);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        std::string key = mo.states[id];
        for (int ai = 0; ai < s.ninputs; ai++) {
            std::string nxt = s.deriv(key, ai);
            if (static_cast<int>(mo.states.size()) >= max_states && !index.count(nxt))
                return std::nullopt;
            mo.next[id][ai] = intern(nxt);
        }
    }
    return mo;
}

// --------------------------------------------------------------------------
// Files
// --------------------------------------------------------------------------

namespace {

std::vector<std::string> syms_from_sexpr(const SExpr& e) {
    std::vector<std::string> out;
    if (e.atom) {
        for (char c : e.text) out.emplace_back(1, c);
    } else {
        for (const SExpr& it : e.items) {
            if (!it.atom || it.text.size() != 1)
                throw std::runtime_error("storage symbols must be single characters");
            out.push_back(it.text);
        }
    }
    for (const std::string& s : out)
        if (s == "-" || s == ",")
            throw std::runtime_error("storage symbol '" + s + "' is reserved");
    return out;
}

}  // namespace

MonadDesc monad_from_sexpr(const SExpr& e) {
    if (e.atom || e.head() != "monad") throw std::runtime_error("expected (monad ...)");
    MonadDesc d;
    d.sr = bool_semiring();
    const std::string& kind = e[1].text;
    if (kind == "pow") {
        d.kind = MonadKind::Pow;
    } else if (kind == "lincomb") {
        d.kind = MonadKind::Lin;
        if (e.size() < 3) throw std::runtime_error("(monad lincomb <semiring>)");
        if (e[2].atom) {
            // also accept the unquoted split form: polyset (2)
            if (e[2].text == "polyset" && e.size() >= 4 && !e[3].atom)
                d.sr = polyset_semiring(std::stoi(e[3][0].text));
            else
                d.sr = semiring_by_name(e[2].text);
        } else if (e[2].head() == "polyset") {
            d.sr = polyset_semiring(std::stoi(e[2][1].text));
        } else {
            throw std::runtime_error("bad semiring in (monad lincomb ...)");
        }
    } else if (kind == "stack" || kind == "ndstack" || kind == "tape") {
        d.kind = kind == "stack" ? MonadKind::Stack
                                 : (kind == "ndstack" ? MonadKind::NdStack : MonadKind::Tape);
        d.syms = syms_from_sexpr(e[2]);
        if (d.kind == MonadKind::Tape) {
            bool has_blank = false;
            for (const std::string& s : d.syms) has_blank |= s == "_";
            if (!has_blank) d.syms.insert(d.syms.begin(), "_");
        }
    } else if (kind == "multistack") {
        d.kind = MonadKind::MultiStack;
        d.m = std::stoi(e[2].text);
        d.syms = syms_from_sexpr(e[3]);
    } else {
        throw std::runtime_error("unknown monad: " + kind);
    }
    return d;
}

SExpr monad_to_sexpr(const MonadDesc& d) {
    SExpr e = SExpr::make_list({SExpr::make_atom("monad"), SExpr::make_atom(kind_name(d.kind))});
    if (d.kind == MonadKind::Lin) {
        if (d.sr.name == "polyset")
            e.items.push_back(SExpr::make_list({SExpr::make_atom("polyset"),
                                                SExpr::make_atom(std::to_string(d.sr.poly_rank))}));
        else
            e.items.push_back(SExpr::make_atom(d.sr.name));
    }
    if (d.kind == MonadKind::MultiStack)
        e.items.push_back(SExpr::make_atom(std::to_string(d.m)));
    if (!d.syms.empty()) {
        std::string syms;
        for (const std::string& s : d.syms) syms += s;
        e.items.push_back(SExpr::make_atom(syms));
    }
    return e;
}

TAutomaton automaton_from_sexpr(const SExpr& e) {
    if (e.atom || e.head() != "automaton") throw std::runtime_error("expected (automaton ...)");
    TAutomaton a;
    std::vector<const SExpr*> state_clauses;
    for (size_t i = 1; i < e.size(); i++) {
        const SExpr& it = e[i];
        if (it.head() == "monad") {
            a.monad = monad_from_sexpr(it);
        } else if (it.head() == "inputs") {
            for (size_t j = 1; j < it.size(); j++) a.inputs.push_back(it[j].text);
        } else if (it.head() == "state") {
            a.states.push_back(it[1].text);
            state_clauses.push_back(&it);
        } else {
            throw std::runtime_error("unknown automaton clause: " + it.head());
        }
    }
    if (a.inputs.empty()) throw std::runtime_error("automaton needs (inputs ...)");
    if (a.states.empty()) throw std::runtime_error("automaton needs at least one state");
    a.out.resize(a.states.size(), Scalar{false});
    a.trans.resize(a.states.size());
    for (size_t si = 0; si < state_clauses.size(); si++) {
        const SExpr& st = *state_clauses[si];
        std::map<int, TElem> ontab;
        bool have_out = false;
        for (size_t j = 2; j < st.size(); j++) {
            const SExpr& cl = st[j];
            if (cl.head() == "out") {
                a.out[si] = out_parse(a.monad, cl[1]);
                have_out = true;
            } else if (cl.head() == "on") {
                int ai = a.input_index(cl[1].text);
                ontab[ai] = elem_from_sexpr(a, cl[2]);
            } else {
                throw std::runtime_error("unknown state clause: " + cl.head());
            }
        }
        if (!have_out)
            throw std::runtime_error("state " + a.states[si] + " lacks (out ...)");
        for (size_t ai = 0; ai < a.inputs.size(); ai++) {
            auto it = ontab.find(static_cast<int>(ai));
            if (it == ontab.end())
                throw std::runtime_error("state " + a.states[si] +
                                         " lacks a transition on input " + a.inputs[ai]);
            a.trans[si].push_back(std::move(it->second));
        }
    }
    return a;
}

SExpr automaton_to_sexpr(const TAutomaton& a) {
    SExpr e = SExpr::make_list({SExpr::make_atom("automaton"), monad_to_sexpr(a.monad)});
    SExpr ins = SExpr::make_list({SExpr::make_atom("inputs")});
    for (const std::string& i : a.inputs) ins.items.push_back(SExpr::make_atom(i));
    e.items.push_back(std::move(ins));
    for (size_t si = 0; si < a.states.size(); si++) {
        SExpr st = SExpr::make_list({SExpr::make_atom("state"), SExpr::make_atom(a.states[si]),
                                     SExpr::make_list({SExpr::make_atom("out"),
                                                       out_to_sexpr(a.monad, a.out[si])})});
        for (size_t ai = 0; ai < a.inputs.size(); ai++)
            st.items.push_back(SExpr::make_list({SExpr::make_atom("on"),
                                                 SExpr::make_atom(a.inputs[ai]),
                                                 elem_to_sexpr(a, a.trans[si][ai])}));
        e.items.push_back(std::move(st));
    }
    return e;
}

TAutomaton automaton_parse(const std::string& text) {
    return automaton_from_sexpr(sexpr_parse(text));
}

std::string automaton_print(const TAutomaton& a) {
    // one clause per line for readability
    SExpr e = automaton_to_sexpr(a);
    std::string out = "(automaton";
    for (size_t i = 1; i < e.size(); i++) out += "\n  " + sexpr_print(e[i]);
    return out + ")\n";
}

std::vector<std::string> automaton_check(const TAutomaton& a) {
    std::vector<std::string> problems;
    size_t n = a.states.size();
    if (a.out.size() != n || a.trans.size() != n) {
        problems.push_back("output/transition tables not total on states");
        return problems;
    }
    for (size_t i = 0; i < n; i++)
        if (a.trans[i].size() != a.inputs.size())
            problems.push_back("state " + a.states[i] + ": transitions not total on inputs");
    // algebra unit law a(eta(b)) = b on every stored output
    for (size_t i = 0; i < n && problems.empty(); i++) {
        TElem u = unit_elem(a.monad, static_cast<int>(i));
        OutVal b = algebra_map(a.monad, u, [&](int y) { return a.out[y]; });
        if (!out_eq(a.monad, b, a.out[i]))
            problems.push_back("algebra unit law fails at state " + a.states[i]);
    }
    return problems;
}

Word word_parse(const std::vector<std::string>& inputs, const std::string& text) {
    auto index = [&](const std::string& name) {
        for (size_t i = 0; i < inputs.size(); i++)
            if (inputs[i] == name) return static_cast<int>(i);
        throw std::runtime_error("unknown input symbol: " + name);
    };
    Word w;
    if (text.empty() || text == "eps" || text == "-") return w;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) w.push_back(index(tok));
        return w;
    }
    bool single = true;
    for (const std::string& i : inputs) single &= i.size() == 1;
    if (single) {
        for (char c : text) w.push_back(index(std::string(1, c)));
        return w;
    }
    w.push_back(index(text));
    return w;
}

std::string word_print(const std::vector<std::string>& inputs, const Word& w) {
    if (w.empty()) return "eps";
    bool single = true;
    for (const std::string& i : inputs) single &= i.size() == 1;
    std::string out;
    for (size_t i = 0; i < w.size(); i++) {
        if (i && !single) out += ',';
        out += inputs[w[i]];
    }
    return out;
}

}  // namespace taut
