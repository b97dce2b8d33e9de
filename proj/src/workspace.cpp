#include "taut/workspace.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace taut {

namespace {

using nlohmann::json;

json sexpr_to_json(const SExpr& e) {
    if (e.atom) return e.text;
    json arr = json::array();
    for (size_t i = 0; i < e.size(); i++) arr.push_back(sexpr_to_json(e[i]));
    return arr;
}

// Temporarily raise the store-element locality cap so long-word traces on
// stack/tape automata are not rejected.
struct CapRaise {
    int save;
    explicit CapRaise(int need) : save(store_bound_cap) {
        if (need > store_bound_cap) store_bound_cap = need;
    }
    ~CapRaise() { store_bound_cap = save; }
};

bool has_tau(const std::vector<std::string>& inputs) {
    return std::find(inputs.begin(), inputs.end(), "tau") != inputs.end();
}

// words are read and printed over the visible alphabet (tau excluded), but
// carried as indices into the full input list
struct VisibleAlphabet {
    std::vector<std::string> names;
    std::vector<int> to_full;

    explicit VisibleAlphabet(const std::vector<std::string>& inputs) {
        for (size_t i = 0; i < inputs.size(); i++)
            if (inputs[i] != "tau") {
                names.push_back(inputs[i]);
                to_full.push_back(static_cast<int>(i));
            }
    }
    Word parse(const std::string& text) const {
        Word w = word_parse(names, text);
        for (int& c : w) c = to_full[c];
        return w;
    }
    std::string print(const Word& w) const {
        Word v = w;
        for (int& c : v)
            c = static_cast<int>(std::find(to_full.begin(), to_full.end(), c) - to_full.begin());
        return word_print(names, v);
    }
};

bool expr_contains(const ExprP& e, std::initializer_list<ExprKind> kinds) {
    for (ExprKind k : kinds)
        if (e->kind == k) return true;
    for (const ExprP& kid : e->kids)
        if (expr_contains(kid, kinds)) return true;
    return e->beta && expr_contains(e->beta, kinds);
}

// additive/algebraic expressions go through the scalar evaluator; everything
// else through the reactive one
bool expr_is_additive(const ExprP& e) {
    return expr_contains(e, {ExprKind::Mu, ExprKind::Act, ExprKind::Hole, ExprKind::Seq});
}

const std::vector<std::string>& object_inputs(const WsObject& o) {
    switch (o.kind) {
        case ObjKind::Automaton: return o.aut.inputs;
        case ObjKind::Expression: return o.expr.inputs;
        case ObjKind::Dpda: return o.dpda.inputs;
        case ObjKind::Npdqrt: return o.npdqrt.inputs;
        case ObjKind::Rdtm: return o.rdtm.inputs;
        case ObjKind::Dtm: return o.dtm.inputs;
        case ObjKind::Grammar: return o.cfg.terminals;
    }
    throw std::logic_error("bad object kind");
}

struct AcceptOut {
    RunVerdict verdict = RunVerdict::Unknown;
    std::string value = "unknown";
};

AcceptOut accept_eval(const WsObject& o, const std::optional<std::string>& state, const Word& w,
                      const QueryOpts& q) {
    AcceptOut r;
    switch (o.kind) {
        case ObjKind::Automaton: {
            int x = state ? o.aut.state_index(*state) : 0;
            if (has_tau(o.aut.inputs)) {
                ObsResult res = obs_trace(o.aut, x, w, q.fuel);
                r.verdict = res.verdict;
                if (res.verdict != RunVerdict::Unknown) {
                    r.value = out_print(o.aut.monad, res.value);
                    r.verdict = out_truthy(o.aut.monad, res.value) ? RunVerdict::Accept
                                                                   : RunVerdict::Reject;
                }
            } else {
                CapRaise cap(static_cast<int>(w.size()) + 4);
                OutVal v = trace(o.aut, x, w);
                r.value = out_print(o.aut.monad, v);
                r.verdict = out_truthy(o.aut.monad, v) ? RunVerdict::Accept : RunVerdict::Reject;
            }
            break;
        }
        case ObjKind::Expression: {
            const ExprFile& f = o.expr;
            OutVal v;
            if (expr_is_additive(f.expr))
                v = aexp_trace(f.monad, f.inputs, f.expr, w);
            else
                v = rexp_trace(f.monad, f.inputs, f.expr, w);
            r.value = out_print(f.monad, v);
            r.verdict = out_truthy(f.monad, v) ? RunVerdict::Accept : RunVerdict::Reject;
            break;
        }
        case ObjKind::Dpda:
            r.verdict = dpda_accepts(o.dpda, w, q.fuel) ? RunVerdict::Accept : RunVerdict::Reject;
            break;
        case ObjKind::Npdqrt:
            // the quasi-real-time chain bound, not a step budget: keep the
            // machine default unless --fuel was given
            r.verdict = npdqrt_accepts(o.npdqrt, w, q.fuel_set ? q.fuel : 50)
                            ? RunVerdict::Accept
                            : RunVerdict::Reject;
            break;
        case ObjKind::Rdtm: r.verdict = rdtm_accepts(o.rdtm, w, q.fuel); break;
        case ObjKind::Dtm: r.verdict = dtm_accepts(o.dtm, w, q.fuel); break;
        case ObjKind::Grammar: throw std::runtime_error("grammars answer no queries directly; convert with cfg2algexpr first");
    }
    if (o.kind != ObjKind::Automaton && o.kind != ObjKind::Expression) {
        r.value = r.verdict == RunVerdict::Accept   ? "accept"
                  : r.verdict == RunVerdict::Reject ? "reject"
                                                    : "unknown";
    }
    return r;
}

int verdict_code(RunVerdict v) {
    return v == RunVerdict::Accept ? 0 : v == RunVerdict::Reject ? 1 : 2;
}

std::string verdict_name(RunVerdict v) {
    return v == RunVerdict::Accept ? "accept" : v == RunVerdict::Reject ? "reject" : "unknown";
}

// automata and expressions only; states of converted expressions are the
// closure of the expression itself
std::pair<TAutomaton, int> to_automaton(const WsObject& o,
                                        const std::optional<std::string>& state) {
    switch (o.kind) {
        case ObjKind::Automaton:
            return {o.aut, state ? o.aut.state_index(*state) : 0};
        case ObjKind::Expression: {
            const ExprFile& f = o.expr;
            ExprP e = f.expr;
            if (expr_contains(e, {ExprKind::Hole, ExprKind::Seq}))
                throw std::runtime_error(
                    "algebraic expressions (with * or the placeholder) have no finite "
                    "automaton in general");
            if (expr_is_additive(e)) e = tr(f.monad, f.inputs, e);
            return expr_to_automaton(f.monad, f.inputs, e);
        }
        default:
            throw std::runtime_error(objkind_name(o.kind) +
                                     " is a machine file; convert it to an automaton first");
    }
}

}  // namespace

std::string objkind_name(ObjKind k) {
    switch (k) {
        case ObjKind::Automaton: return "automaton";
        case ObjKind::Expression: return "expression";
        case ObjKind::Dpda: return "dpda";
        case ObjKind::Npdqrt: return "npdqrt";
        case ObjKind::Rdtm: return "rdtm";
        case ObjKind::Dtm: return "dtm";
        case ObjKind::Grammar: return "grammar";
    }
    return "?";
}

WsObject object_parse(const std::string& text) {
    // find the first significant character, skipping blanks and ; comments
    size_t pos = 0;
    while (pos < text.size()) {
        char c = text[pos];
        if (std::isspace(static_cast<unsigned char>(c))) {
            pos++;
        } else if (c == ';') {
            while (pos < text.size() && text[pos] != '\n') pos++;
        } else {
            break;
        }
    }
    if (pos >= text.size()) throw std::runtime_error("empty file");
    WsObject o;
    if (text[pos] != '(') {  // plain production lines
        o.kind = ObjKind::Grammar;
        o.cfg = cfg_parse(text);
        return o;
    }
    SExpr s = sexpr_parse(text);
    std::string h = s.atom ? s.text : s.head();
    if (h == "automaton") {
        o.kind = ObjKind::Automaton;
        o.aut = automaton_from_sexpr(s);
    } else if (h == "expression") {
        o.kind = ObjKind::Expression;
        o.expr = exprfile_from_sexpr(s);
    } else if (h == "dpda") {
        o.kind = ObjKind::Dpda;
        o.dpda = dpda_parse(text);
    } else if (h == "npdqrt") {
        o.kind = ObjKind::Npdqrt;
        o.npdqrt = npdqrt_parse(text);
    } else if (h == "rdtm") {
        o.kind = ObjKind::Rdtm;
        o.rdtm = rdtm_parse(text);
    } else if (h == "dtm") {
        o.kind = ObjKind::Dtm;
        o.dtm = dtm_parse(text);
    } else {
        throw std::runtime_error("unknown object head: " + h);
    }
    return o;
}

WsObject object_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return object_parse(buf.str());
}

std::string object_print(const WsObject& o) {
    switch (o.kind) {
        case ObjKind::Automaton: return automaton_print(o.aut);
        case ObjKind::Expression: return exprfile_print(o.expr);
        case ObjKind::Dpda: return dpda_print(o.dpda);
        case ObjKind::Npdqrt: return npdqrt_print(o.npdqrt);
        case ObjKind::Rdtm: return rdtm_print(o.rdtm);
        case ObjKind::Dtm: return dtm_print(o.dtm);
        case ObjKind::Grammar: {
            std::string out;
            for (const CfgProd& p : o.cfg.prods) {
                out += p.lhs + " ->";
                if (p.rhs.empty()) out += " eps";
                for (const std::string& s : p.rhs) out += " " + s;
                out += "\n";
            }
            return out;
        }
    }
    throw std::logic_error("bad object kind");
}

void Workspace::add(const std::string& name, WsObject o) {
    auto key = std::make_pair(o.kind, name);
    if (objects.count(key))
        throw std::runtime_error("duplicate " + objkind_name(o.kind) + " name: " + name);
    objects.emplace(std::move(key), std::move(o));
}

const WsObject& Workspace::get(const Key& key) const {
    auto it = objects.find(key);
    if (it == objects.end())
        throw std::runtime_error("unknown " + objkind_name(key.first) + ": " + key.second);
    return it->second;
}

const WsObject& Workspace::get(const std::string& name) const {
    const WsObject* found = nullptr;
    for (const auto& [key, obj] : objects)
        if (key.second == name) {
            if (found) throw std::runtime_error("ambiguous name: " + name);
            found = &obj;
        }
    if (!found) throw std::runtime_error("unknown object: " + name);
    return *found;
}

Workspace::Key Workspace::load(const std::string& path) {
    std::string name = std::filesystem::path(path).stem().string();
    WsObject o = object_load(path);
    Key key{o.kind, name};
    add(name, std::move(o));
    return key;
}

CmdResult cmd_accept(const WsObject& o, const std::optional<std::string>& state,
                     const std::string& word, const QueryOpts& q) {
    Word w = VisibleAlphabet(object_inputs(o)).parse(word);
    AcceptOut r = accept_eval(o, state, w, q);
    CmdResult res;
    res.exit_code = verdict_code(r.verdict);
    if (q.json) {
        json j{{"command", "accept"}, {"verdict", verdict_name(r.verdict)}, {"value", r.value}};
        res.output = j.dump() + "\n";
    } else {
        res.output = r.value + "\n";
    }
    return res;
}

CmdResult cmd_enumerate(const WsObject& o, const std::optional<std::string>& state, int max_len,
                        const QueryOpts& q) {
    VisibleAlphabet vis(object_inputs(o));
    const std::vector<int>& letters = vis.to_full;
    CapRaise cap(max_len + 4);
    std::vector<std::string> accepted;
    int unknown = 0;
    std::vector<Word> frontier{{}};
    for (int len = 0; len <= max_len; len++) {
        for (const Word& w : frontier) {
            AcceptOut r = accept_eval(o, state, w, q);
            if (r.verdict == RunVerdict::Accept) accepted.push_back(vis.print(w));
            if (r.verdict == RunVerdict::Unknown) unknown++;
        }
        if (len == max_len) break;
        std::vector<Word> next;
        next.reserve(frontier.size() * letters.size());
        for (const Word& w : frontier)
            for (int c : letters) {
                Word v = w;
                v.push_back(c);
                next.push_back(std::move(v));
            }
        frontier = std::move(next);
    }
    CmdResult res;
    if (q.json) {
        json j{{"command", "enumerate"}, {"words", accepted}, {"unknown", unknown}};
        res.output = j.dump() + "\n";
    } else {
        for (const std::string& s : accepted) res.output += s + "\n";
    }
    return res;
}

CmdResult cmd_equiv(const WsObject& o1, const std::optional<std::string>& s1, const WsObject& o2,
                    const std::optional<std::string>& s2, bool exact, int bound,
                    const QueryOpts& q) {
    auto [a1, x1] = to_automaton(o1, s1);
    auto [a2, x2] = to_automaton(o2, s2);
    if (a1.inputs != a2.inputs)
        throw std::runtime_error("objects have different input alphabets");
    CapRaise cap(exact ? store_bound_cap : bound + 4);
    EquivResult r = exact ? trace_equiv_exact(a1, x1, a2, x2, q.max_states)
                          : trace_equiv_bounded(a1, x1, a2, x2, bound);
    CmdResult res;
    std::string verdict, witness;
    switch (r.verdict) {
        case EquivVerdict::Equivalent:
            verdict = "equivalent";
            res.exit_code = 0;
            break;
        case EquivVerdict::Inequivalent:
            verdict = "inequivalent";
            witness = word_print(a1.inputs, r.witness);
            res.exit_code = 1;
            break;
        case EquivVerdict::BudgetExhausted:
            verdict = "unknown";
            res.exit_code = 2;
            break;
    }
    if (q.json) {
        json j{{"command", "equiv"}, {"verdict", verdict}};
        if (!witness.empty()) j["witness"] = witness;
        res.output = j.dump() + "\n";
    } else {
        res.output = verdict + (witness.empty() ? "" : ": " + witness) + "\n";
    }
    return res;
}

CmdResult cmd_convert(const std::string& kind, const WsObject& o,
                      const std::vector<std::string>& args, const QueryOpts& q) {
    auto need = [&](size_t n, const std::string& what) {
        if (args.size() != n)
            throw std::runtime_error("convert " + kind + " needs " + what);
    };
    auto require = [&](ObjKind k) {
        if (o.kind != k)
            throw std::runtime_error("convert " + kind + " expects a " + objkind_name(k) +
                                     " file, got " + objkind_name(o.kind));
    };
    std::string start;  // designated start state of the output, when any
    std::string body;
    if (kind == "expr2aut") {
        require(ObjKind::Expression);
        need(0, "no extra arguments");
        auto [aut, x0] = to_automaton(o, std::nullopt);
        start = aut.states[x0];
        body = automaton_print(aut);
    } else if (kind == "aut2expr") {
        require(ObjKind::Automaton);
        need(1, "a state argument");
        ExprFile f;
        f.monad = o.aut.monad;
        f.inputs = o.aut.inputs;
        f.expr = automaton_to_expr(o.aut, o.aut.state_index(args[0]));
        body = exprfile_print(f);
    } else if (kind == "dpda2aut") {
        require(ObjKind::Dpda);
        need(0, "no extra arguments");
        StoreAutomaton r = dpda_to_stack_automaton(o.dpda);
        start = r.aut.states[r.start] + " init " + r.aut.monad.syms[r.init_sym];
        body = automaton_print(r.aut);
    } else if (kind == "aut2dpda") {
        require(ObjKind::Automaton);
        need(2, "a state and an initial stack symbol");
        body = dpda_print(stack_automaton_to_dpda(o.aut, o.aut.state_index(args[0]),
                                                  o.aut.monad.sym_index(args[1])));
    } else if (kind == "rdtm2aut") {
        require(ObjKind::Rdtm);
        need(0, "no extra arguments");
        TapeAutomatonResult r = rdtm_to_tape_automaton(o.rdtm);
        start = r.aut.states[r.start];
        body = automaton_print(r.aut);
    } else if (kind == "aut2rdtm") {
        require(ObjKind::Automaton);
        need(1, "a state argument");
        body = rdtm_print(tape_automaton_to_rdtm(o.aut, o.aut.state_index(args[0])));
    } else if (kind == "dtm2rdtm") {
        require(ObjKind::Dtm);
        need(0, "no extra arguments");
        body = rdtm_print(dtm_to_rdtm(o.dtm));
    } else if (kind == "cfg2algexpr") {
        require(ObjKind::Grammar);
        need(1, "the start nonterminal");
        ExprFile f;
        f.monad.kind = MonadKind::Lin;
        f.monad.sr = bool_semiring();
        f.inputs = o.cfg.terminals;
        f.expr = cfg_to_algexpr(o.cfg, args[0], f.monad);
        body = exprfile_print(f);
    } else {
        throw std::runtime_error("unknown conversion: " + kind);
    }
    CmdResult res;
    if (q.json) {
        json j{{"command", "convert"}, {"kind", kind}, {"object", sexpr_to_json(sexpr_parse(body))}};
        if (!start.empty()) j["start"] = start;
        res.output = j.dump() + "\n";
    } else {
        if (!start.empty()) res.output += "; start " + start + "\n";
        res.output += body;
    }
    return res;
}

CmdResult cmd_check(const WsObject& o, const QueryOpts& q) {
    std::vector<std::string> problems;
    switch (o.kind) {
        case ObjKind::Automaton: {
            problems = automaton_check(o.aut);
            if (problems.empty() && !has_tau(o.aut.inputs)) {
                // seeded probe: traces must agree with the determinization
                try {
                    CapRaise cap(8);
                    DeterminizeResult dr = determinize(o.aut, 0, q.max_states);
                    if (!dr.budget_exhausted) {
                        std::mt19937 rng(q.seed);
                        int ni = static_cast<int>(o.aut.inputs.size());
                        for (int it = 0; it < 20; it++) {
                            Word w;
                            int len = static_cast<int>(rng() % 4);
                            for (int i = 0; i < len; i++)
                                w.push_back(static_cast<int>(rng() % ni));
                            if (!out_eq(o.aut.monad, trace(o.aut, 0, w),
                                        moore_output(dr.moore, dr.start, w)))
                                problems.push_back("trace/determinize disagree at " +
                                                   word_print(o.aut.inputs, w));
                        }
                    }
                } catch (const std::exception&) {
                    // probe not applicable (e.g. locality bound exceeded)
                }
            }
            break;
        }
        case ObjKind::Dpda: problems = dpda_check(o.dpda); break;
        default: break;  // parsers validate the remaining kinds structurally
    }
    CmdResult res;
    res.exit_code = problems.empty() ? 0 : 1;
    if (q.json) {
        json j{{"command", "check"}, {"problems", problems}};
        res.output = j.dump() + "\n";
    } else if (problems.empty()) {
        res.output = "ok\n";
    } else {
        for (const std::string& p : problems) res.output += p + "\n";
    }
    return res;
}

}  // namespace taut
