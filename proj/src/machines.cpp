#include "taut/machines.hpp"

#include <deque>
#include <functional>

namespace taut {

namespace {

int name_index(const std::vector<std::string>& names, const std::string& name,
               const char* what) {
    for (size_t i = 0; i < names.size(); i++)
        if (names[i] == name) return static_cast<int>(i);
    throw ParseError(std::string(what) + ": unknown name '" + name + "'");
}

char single_char(const SExpr& e, const char* what) {
    if (!e.atom || e.text.size() != 1)
        throw ParseError(std::string(what) + ": expected a single-character symbol, got '" +
                         (e.atom ? e.text : sexpr_print(e)) + "'");
    return e.text[0];
}

const SExpr& clause(const SExpr& e, const std::string& head, const char* what) {
    for (size_t i = 1; i < e.size(); i++)
        if (e[i].is_list() && e[i].head() == head) return e[i];
    throw ParseError(std::string(what) + ": missing (" + head + " ...) clause");
}

bool has_clause(const SExpr& e, const std::string& head) {
    for (size_t i = 1; i < e.size(); i++)
        if (e[i].is_list() && e[i].head() == head) return true;
    return false;
}

std::vector<std::string> atom_list(const SExpr& e, const char* what) {
    std::vector<std::string> out;
    for (size_t i = 1; i < e.size(); i++) {
        if (!e[i].atom) throw ParseError(std::string(what) + ": expected atoms");
        out.push_back(e[i].text);
    }
    return out;
}

// Storage-alphabet clause: symbols, then the keyword and its special symbol
// ((stack A B bottom _) / (tape a b blank _)).
std::pair<std::string, char> alphabet_clause(const SExpr& e, const std::string& keyword,
                                             const char* what) {
    std::string syms;
    char special = 0;
    for (size_t i = 1; i < e.size(); i++) {
        if (e[i].atom && e[i].text == keyword) {
            if (i + 1 != e.size() - 1)
                throw ParseError(std::string(what) + ": '" + keyword +
                                 "' must be followed by exactly one symbol");
            special = single_char(e[i + 1], what);
            break;
        }
        char c = single_char(e[i], what);
        if (c == '-' || c == ',')
            throw ParseError(std::string(what) + ": symbol '" + std::string(1, c) +
                             "' is reserved");
        syms += c;
    }
    if (special == 0)
        throw ParseError(std::string(what) + ": missing '" + keyword + "' symbol");
    if (syms.find(special) == std::string::npos) syms += special;
    return {syms, special};
}

std::string push_atom(const SExpr& e, const std::string& syms, const char* what) {
    if (!e.atom) throw ParseError(std::string(what) + ": expected a push string atom");
    if (e.text == "-") return "";
    for (char c : e.text)
        if (syms.find(c) == std::string::npos)
            throw ParseError(std::string(what) + ": unknown storage symbol '" +
                             std::string(1, c) + "'");
    return e.text;
}

std::string push_print(const std::string& s) { return s.empty() ? "-" : s; }

int move_parse(const SExpr& e, const char* what) {
    if (e.atom && e.text == "L") return -1;
    if (e.atom && e.text == "N") return 0;
    if (e.atom && e.text == "R") return 1;
    throw ParseError(std::string(what) + ": expected head move L, N or R");
}

const char* move_print(int d) { return d < 0 ? "L" : d > 0 ? "R" : "N"; }

SExpr atom(std::string s) { return SExpr::make_atom(std::move(s)); }

}  // namespace

// ---------------------------------------------------------------------------
// DPDA
// ---------------------------------------------------------------------------

int Dpda::state_index(const std::string& name) const {
    return name_index(states, name, "dpda state");
}

int Dpda::input_index(const std::string& name) const {
    return name_index(inputs, name, "dpda input");
}

bool Dpda::real_time() const {
    for (const auto& [k, v] : delta)
        if (std::get<1>(k) == -1) return false;
    return true;
}

std::vector<std::string> dpda_check(const Dpda& m) {
    std::vector<std::string> problems;
    for (size_t q = 0; q < m.states.size(); q++)
        for (char g : m.stack_syms) {
            bool has_eps = m.delta.count({static_cast<int>(q), -1, g}) > 0;
            bool has_in = false;
            for (size_t i = 0; i < m.inputs.size(); i++)
                has_in |= m.delta.count({static_cast<int>(q), static_cast<int>(i), g}) > 0;
            if (has_eps && has_in)
                problems.push_back("state " + m.states[q] + ", symbol " + std::string(1, g) +
                                   ": both epsilon and input rows defined");
        }
    for (const auto& [k, v] : m.delta)
        if (std::get<2>(k) == m.bottom &&
            (v.second.empty() || v.second.back() != m.bottom))
            problems.push_back("state " + m.states[std::get<0>(k)] +
                               ": transition on the bottom symbol does not re-emit it");
    return problems;
}

bool dpda_accepts(const Dpda& m, const Word& w, int eps_fuel) {
    int q = m.start;
    std::string st(1, m.bottom);  // top first
    size_t pos = 0;
    while (true) {
        if (pos == w.size() && m.accept.count(q)) return true;
        if (st.empty()) return false;
        auto eps = m.delta.find({q, -1, st[0]});
        if (eps != m.delta.end()) {
            if (eps_fuel-- <= 0) return false;
            q = eps->second.first;
            st = eps->second.second + st.substr(1);
            continue;
        }
        if (pos == w.size()) return false;
        auto it = m.delta.find({q, w[pos], st[0]});
        if (it == m.delta.end()) return false;
        q = it->second.first;
        st = it->second.second + st.substr(1);
        pos++;
    }
}

Dpda dpda_from_sexpr(const SExpr& e) {
    if (e.head() != "dpda") throw ParseError("dpda: expected (dpda ...)");
    Dpda M;
    M.inputs = atom_list(clause(e, "inputs", "dpda"), "dpda inputs");
    std::tie(M.stack_syms, M.bottom) = alphabet_clause(clause(e, "stack", "dpda"), "bottom",
                                                       "dpda stack");
    for (size_t i = 1; i < e.size(); i++)
        if (e[i].is_list() && e[i].head() == "state") {
            if (e[i].size() < 2 || !e[i][1].atom) throw ParseError("dpda: bad state clause");
            M.states.push_back(e[i][1].text);
        }
    if (M.states.empty()) throw ParseError("dpda: no states");
    int q = 0;
    for (size_t i = 1; i < e.size(); i++) {
        if (!e[i].is_list() || e[i].head() != "state") continue;
        for (size_t j = 2; j < e[i].size(); j++) {
            const SExpr& t = e[i][j];
            bool eps = t.head() == "eps";
            if (!eps && t.head() != "on") throw ParseError("dpda: bad transition clause");
            size_t base = eps ? 1 : 2;
            if (t.size() != base + 4 || !t[base + 1].atom || t[base + 1].text != "->")
                throw ParseError("dpda: transition must be (" +
                                 std::string(eps ? "eps" : "on <input>") +
                                 " <sym> -> <state> <push>)");
            int in = eps ? -1 : M.input_index(t[1].text);
            char g = single_char(t[base], "dpda transition");
            if (M.stack_syms.find(g) == std::string::npos)
                throw ParseError("dpda: unknown stack symbol '" + std::string(1, g) + "'");
            int q2 = M.state_index(t[base + 2].text);
            std::string push = push_atom(t[base + 3], M.stack_syms, "dpda transition");
            if (!M.delta.emplace(std::make_tuple(q, in, g), std::make_pair(q2, push)).second)
                throw ParseError("dpda: duplicate transition row");
        }
        q++;
    }
    for (const std::string& f : atom_list(clause(e, "accept", "dpda"), "dpda accept"))
        M.accept.insert(M.state_index(f));
    auto problems = dpda_check(M);
    if (!problems.empty()) throw ParseError("dpda: " + problems[0]);
    return M;
}

SExpr dpda_to_sexpr(const Dpda& m) {
    std::vector<SExpr> top{atom("dpda")};
    std::vector<SExpr> ins{atom("inputs")};
    for (const std::string& a : m.inputs) ins.push_back(atom(a));
    top.push_back(SExpr::make_list(std::move(ins)));
    std::vector<SExpr> st{atom("stack")};
    for (char c : m.stack_syms)
        if (c != m.bottom) st.push_back(atom(std::string(1, c)));
    st.push_back(atom("bottom"));
    st.push_back(atom(std::string(1, m.bottom)));
    top.push_back(SExpr::make_list(std::move(st)));
    std::vector<std::vector<SExpr>> rows(m.states.size());
    for (const auto& [k, v] : m.delta) {
        std::vector<SExpr> t;
        if (std::get<1>(k) == -1)
            t.push_back(atom("eps"));
        else {
            t.push_back(atom("on"));
            t.push_back(atom(m.inputs[std::get<1>(k)]));
        }
        t.push_back(atom(std::string(1, std::get<2>(k))));
        t.push_back(atom("->"));
        t.push_back(atom(m.states[v.first]));
        t.push_back(atom(push_print(v.second)));
        rows[std::get<0>(k)].push_back(SExpr::make_list(std::move(t)));
    }
    for (size_t q = 0; q < m.states.size(); q++) {
        std::vector<SExpr> sc{atom("state"), atom(m.states[q])};
        for (SExpr& r : rows[q]) sc.push_back(std::move(r));
        top.push_back(SExpr::make_list(std::move(sc)));
    }
    std::vector<SExpr> acc{atom("accept")};
    for (int f : m.accept) acc.push_back(atom(m.states[f]));
    top.push_back(SExpr::make_list(std::move(acc)));
    return SExpr::make_list(std::move(top));
}

Dpda dpda_parse(const std::string& text) { return dpda_from_sexpr(sexpr_parse(text)); }
std::string dpda_print(const Dpda& m) { return sexpr_print(dpda_to_sexpr(m)); }

// ---------------------------------------------------------------------------
// NPDQRT
// ---------------------------------------------------------------------------

int Npdqrt::state_index(const std::string& name) const {
    return name_index(states, name, "npdqrt state");
}

int Npdqrt::input_index(const std::string& name) const {
    return name_index(inputs, name, "npdqrt input");
}

bool Npdqrt::real_time() const {
    for (const auto& [k, v] : delta)
        if (std::get<1>(k) == -1) return false;
    return true;
}

bool npdqrt_accepts(const Npdqrt& m, const Word& w, int eps_fuel) {
    // node: state, input position, stack contents (top first), eps-chain length
    using Node = std::tuple<int, size_t, std::vector<std::string>, int>;
    std::deque<Node> queue;
    std::set<Node> seen;
    std::vector<std::string> init(m.m, std::string(1, m.bottom));
    queue.emplace_back(m.start, 0, std::move(init), 0);
    seen.insert(queue.front());
    while (!queue.empty()) {
        auto [q, pos, stacks, chain] = queue.front();
        queue.pop_front();
        if (pos == w.size()) {
            bool empty = true;
            for (const std::string& s : stacks) empty &= s.empty();
            if (m.accept_empty ? empty : m.accept.count(q) > 0) return true;
        }
        std::string tops;
        bool stuck = false;
        for (const std::string& s : stacks) {
            if (s.empty()) stuck = true;
            else tops += s[0];
        }
        if (stuck) continue;
        auto step = [&](int in, int chain2) {
            auto it = m.delta.find({q, in, tops});
            if (it == m.delta.end()) return;
            for (const auto& [q2, pushes] : it->second) {
                std::vector<std::string> st2(m.m);
                for (int i = 0; i < m.m; i++) st2[i] = pushes[i] + stacks[i].substr(1);
                Node n{q2, in == -1 ? pos : pos + 1, std::move(st2), chain2};
                if (seen.insert(n).second) queue.push_back(std::move(n));
            }
        };
        if (chain < eps_fuel) step(-1, chain + 1);
        if (pos < w.size()) step(w[pos], 0);
    }
    return false;
}

Npdqrt npdqrt_from_sexpr(const SExpr& e) {
    if (e.head() != "npdqrt") throw ParseError("npdqrt: expected (npdqrt ...)");
    Npdqrt M;
    const SExpr& sc = clause(e, "stacks", "npdqrt");
    if (sc.size() != 2 || !sc[1].atom) throw ParseError("npdqrt: bad (stacks <m>) clause");
    M.m = std::stoi(sc[1].text);
    if (M.m < 1) throw ParseError("npdqrt: stack count must be positive");
    M.inputs = atom_list(clause(e, "inputs", "npdqrt"), "npdqrt inputs");
    std::tie(M.stack_syms, M.bottom) = alphabet_clause(clause(e, "stack", "npdqrt"),
                                                       "bottom", "npdqrt stack");
    M.accept_empty = has_clause(e, "accept-empty");
    for (size_t i = 1; i < e.size(); i++)
        if (e[i].is_list() && e[i].head() == "state") {
            if (e[i].size() < 2 || !e[i][1].atom) throw ParseError("npdqrt: bad state clause");
            M.states.push_back(e[i][1].text);
        }
    if (M.states.empty()) throw ParseError("npdqrt: no states");
    int q = 0;
    size_t width = static_cast<size_t>(M.m);
    for (size_t i = 1; i < e.size(); i++) {
        if (!e[i].is_list() || e[i].head() != "state") continue;
        for (size_t j = 2; j < e[i].size(); j++) {
            const SExpr& t = e[i][j];
            bool eps = t.head() == "eps";
            if (!eps && t.head() != "on") throw ParseError("npdqrt: bad transition clause");
            size_t base = eps ? 1 : 2;
            if (t.size() != base + 2 * width + 2 || !t[base + width].atom ||
                t[base + width].text != "->")
                throw ParseError("npdqrt: transition must read one top and write one push "
                                 "string per stack");
            int in = eps ? -1 : M.input_index(t[1].text);
            std::string tops;
            for (size_t s = 0; s < width; s++) {
                char g = single_char(t[base + s], "npdqrt transition");
                if (M.stack_syms.find(g) == std::string::npos)
                    throw ParseError("npdqrt: unknown stack symbol '" + std::string(1, g) +
                                     "'");
                tops += g;
            }
            int q2 = M.state_index(t[base + width + 1].text);
            std::vector<std::string> pushes;
            for (size_t s = 0; s < width; s++)
                pushes.push_back(
                    push_atom(t[base + width + 2 + s], M.stack_syms, "npdqrt transition"));
            M.delta[{q, in, tops}].emplace(q2, std::move(pushes));
        }
        q++;
    }
    for (const std::string& f : atom_list(clause(e, "accept", "npdqrt"), "npdqrt accept"))
        M.accept.insert(M.state_index(f));
    return M;
}

SExpr npdqrt_to_sexpr(const Npdqrt& m) {
    std::vector<SExpr> top{atom("npdqrt"),
                           SExpr::make_list({atom("stacks"), atom(std::to_string(m.m))})};
    std::vector<SExpr> ins{atom("inputs")};
    for (const std::string& a : m.inputs) ins.push_back(atom(a));
    top.push_back(SExpr::make_list(std::move(ins)));
    std::vector<SExpr> st{atom("stack")};
    for (char c : m.stack_syms)
        if (c != m.bottom) st.push_back(atom(std::string(1, c)));
    st.push_back(atom("bottom"));
    st.push_back(atom(std::string(1, m.bottom)));
    top.push_back(SExpr::make_list(std::move(st)));
    if (m.accept_empty) top.push_back(SExpr::make_list({atom("accept-empty")}));
    std::vector<std::vector<SExpr>> rows(m.states.size());
    for (const auto& [k, targets] : m.delta)
        for (const auto& [q2, pushes] : targets) {
            std::vector<SExpr> t;
            if (std::get<1>(k) == -1)
                t.push_back(atom("eps"));
            else {
                t.push_back(atom("on"));
                t.push_back(atom(m.inputs[std::get<1>(k)]));
            }
            for (char g : std::get<2>(k)) t.push_back(atom(std::string(1, g)));
            t.push_back(atom("->"));
            t.push_back(atom(m.states[q2]));
            for (const std::string& p : pushes) t.push_back(atom(push_print(p)));
            rows[std::get<0>(k)].push_back(SExpr::make_list(std::move(t)));
        }
    for (size_t q = 0; q < m.states.size(); q++) {
        std::vector<SExpr> sc{atom("state"), atom(m.states[q])};
        for (SExpr& r : rows[q]) sc.push_back(std::move(r));
        top.push_back(SExpr::make_list(std::move(sc)));
    }
    std::vector<SExpr> acc{atom("accept")};
    for (int f : m.accept) acc.push_back(atom(m.states[f]));
    top.push_back(SExpr::make_list(std::move(acc)));
    return SExpr::make_list(std::move(top));
}

Npdqrt npdqrt_parse(const std::string& text) { return npdqrt_from_sexpr(sexpr_parse(text)); }
std::string npdqrt_print(const Npdqrt& m) { return sexpr_print(npdqrt_to_sexpr(m)); }

// ---------------------------------------------------------------------------
// RDTM
// ---------------------------------------------------------------------------

int Rdtm::state_index(const std::string& name) const {
    return name_index(states, name, "rdtm state");
}

int Rdtm::input_index(const std::string& name) const {
    return name_index(inputs, name, "rdtm input");
}

namespace {

// Sparse tape: cells keyed by absolute position, blanks implicit.
struct TapeStore {
    std::map<int, char> cells;
    char blank;

    char get(int i) const {
        auto it = cells.find(i);
        return it == cells.end() ? blank : it->second;
    }
    void set(int i, char c) {
        if (c == blank)
            cells.erase(i);
        else
            cells[i] = c;
    }
    std::string key(int head) const {
        std::string out = std::to_string(head) + ":";
        if (!cells.empty()) {
            int lo = cells.begin()->first;
            out = std::to_string(head - lo) + ":";
            for (int i = lo; i <= cells.rbegin()->first; i++) out += get(i);
        }
        return out;
    }
};

}  // namespace

RunVerdict rdtm_accepts(const Rdtm& m, const Word& w, int fuel) {
    struct Node {
        int q;
        size_t pos;
        int head;
        TapeStore tape;
    };
    std::deque<Node> queue;
    std::set<std::string> seen;
    queue.push_back({m.start, 0, 0, TapeStore{{}, m.blank}});
    seen.insert("0|0|" + queue.front().tape.key(0));
    while (!queue.empty()) {
        if (fuel-- <= 0) return RunVerdict::Unknown;
        Node n = std::move(queue.front());
        queue.pop_front();
        if (n.pos == w.size() && m.accept.count(n.q)) return RunVerdict::Accept;
        auto step = [&](int in) {
            auto it = m.delta.find({n.q, in, n.tape.get(n.head)});
            if (it == m.delta.end()) return;
            Node n2 = n;
            n2.q = std::get<0>(it->second);
            n2.tape.set(n2.head, std::get<1>(it->second));
            n2.head += std::get<2>(it->second);
            if (in != -1) n2.pos++;
            std::string key = std::to_string(n2.q) + "|" + std::to_string(n2.pos) + "|" +
                              n2.tape.key(n2.head);
            if (seen.insert(key).second) queue.push_back(std::move(n2));
        };
        step(-1);
        if (n.pos < w.size()) step(w[n.pos]);
    }
    return RunVerdict::Reject;
}

Rdtm rdtm_from_sexpr(const SExpr& e) {
    if (e.head() != "rdtm") throw ParseError("rdtm: expected (rdtm ...)");
    Rdtm M;
    M.inputs = atom_list(clause(e, "inputs", "rdtm"), "rdtm inputs");
    for (const std::string& a : M.inputs)
        if (a == "tau") throw ParseError("rdtm: input name 'tau' is reserved");
    std::tie(M.tape_syms, M.blank) = alphabet_clause(clause(e, "tape", "rdtm"), "blank",
                                                     "rdtm tape");
    for (size_t i = 1; i < e.size(); i++)
        if (e[i].is_list() && e[i].head() == "state") {
            if (e[i].size() < 2 || !e[i][1].atom) throw ParseError("rdtm: bad state clause");
            M.states.push_back(e[i][1].text);
        }
    if (M.states.empty()) throw ParseError("rdtm: no states");
    int q = 0;
    for (size_t i = 1; i < e.size(); i++) {
        if (!e[i].is_list() || e[i].head() != "state") continue;
        for (size_t j = 2; j < e[i].size(); j++) {
            const SExpr& t = e[i][j];
            bool tau = t.head() == "tau";
            if (!tau && t.head() != "on") throw ParseError("rdtm: bad transition clause");
            size_t base = tau ? 1 : 2;
            if (t.size() != base + 5 || !t[base + 1].atom || t[base + 1].text != "->")
                throw ParseError("rdtm: transition must be (" +
                                 std::string(tau ? "tau" : "on <input>") +
                                 " <sym> -> <state> <sym> <L|N|R>)");
            int in = tau ? -1 : M.input_index(t[1].text);
            char g = single_char(t[base], "rdtm transition");
            char g2 = single_char(t[base + 3], "rdtm transition");
            if (M.tape_syms.find(g) == std::string::npos ||
                M.tape_syms.find(g2) == std::string::npos)
                throw ParseError("rdtm: unknown tape symbol");
            int q2 = M.state_index(t[base + 2].text);
            int d = move_parse(t[base + 4], "rdtm transition");
            if (!M.delta.emplace(std::make_tuple(q, in, g), std::make_tuple(q2, g2, d))
                     .second)
                throw ParseError("rdtm: duplicate transition row");
        }
        q++;
    }
    for (const std::string& f : atom_list(clause(e, "accept", "rdtm"), "rdtm accept"))
        M.accept.insert(M.state_index(f));
    return M;
}

SExpr rdtm_to_sexpr(const Rdtm& m) {
    std::vector<SExpr> top{atom("rdtm")};
    std::vector<SExpr> ins{atom("inputs")};
    for (const std::string& a : m.inputs) ins.push_back(atom(a));
    top.push_back(SExpr::make_list(std::move(ins)));
    std::vector<SExpr> tp{atom("tape")};
    for (char c : m.tape_syms)
        if (c != m.blank) tp.push_back(atom(std::string(1, c)));
    tp.push_back(atom("blank"));
    tp.push_back(atom(std::string(1, m.blank)));
    top.push_back(SExpr::make_list(std::move(tp)));
    std::vector<std::vector<SExpr>> rows(m.states.size());
    for (const auto& [k, v] : m.delta) {
        std::vector<SExpr> t;
        if (std::get<1>(k) == -1)
            t.push_back(atom("tau"));
        else {
            t.push_back(atom("on"));
            t.push_back(atom(m.inputs[std::get<1>(k)]));
        }
        t.push_back(atom(std::string(1, std::get<2>(k))));
        t.push_back(atom("->"));
        t.push_back(atom(m.states[std::get<0>(v)]));
        t.push_back(atom(std::string(1, std::get<1>(v))));
        t.push_back(atom(move_print(std::get<2>(v))));
        rows[std::get<0>(k)].push_back(SExpr::make_list(std::move(t)));
    }
    for (size_t q = 0; q < m.states.size(); q++) {
        std::vector<SExpr> sc{atom("state"), atom(m.states[q])};
        for (SExpr& r : rows[q]) sc.push_back(std::move(r));
        top.push_back(SExpr::make_list(std::move(sc)));
    }
    std::vector<SExpr> acc{atom("accept")};
    for (int f : m.accept) acc.push_back(atom(m.states[f]));
    top.push_back(SExpr::make_list(std::move(acc)));
    return SExpr::make_list(std::move(top));
}

Rdtm rdtm_parse(const std::string& text) { return rdtm_from_sexpr(sexpr_parse(text)); }
std::string rdtm_print(const Rdtm& m) { return sexpr_print(rdtm_to_sexpr(m)); }

// ---------------------------------------------------------------------------
// DTM
// ---------------------------------------------------------------------------

int Dtm::state_index(const std::string& name) const {
    return name_index(states, name, "dtm state");
}

RunVerdict dtm_accepts(const Dtm& m, const Word& w, int fuel) {
    TapeStore tape{{}, m.blank};
    for (size_t i = 0; i < w.size(); i++) tape.set(static_cast<int>(i), m.inputs[w[i]][0]);
    int q = m.start;
    int head = 0;
    while (fuel-- > 0) {
        auto it = m.delta.find({q, tape.get(head)});
        if (it == m.delta.end())
            return m.accept.count(q) ? RunVerdict::Accept : RunVerdict::Reject;
        q = std::get<0>(it->second);
        tape.set(head, std::get<1>(it->second));
        head += std::get<2>(it->second);
    }
    return RunVerdict::Unknown;
}

Dtm dtm_from_sexpr(const SExpr& e) {
    if (e.head() != "dtm") throw ParseError("dtm: expected (dtm ...)");
    Dtm M;
    M.inputs = atom_list(clause(e, "inputs", "dtm"), "dtm inputs");
    std::tie(M.tape_syms, M.blank) = alphabet_clause(clause(e, "tape", "dtm"), "blank",
                                                     "dtm tape");
    for (const std::string& a : M.inputs)
        if (a.size() != 1 || M.tape_syms.find(a[0]) == std::string::npos)
            throw ParseError("dtm: every input letter must name a tape symbol");
    for (size_t i = 1; i < e.size(); i++)
        if (e[i].is_list() && e[i].head() == "state") {
            if (e[i].size() < 2 || !e[i][1].atom) throw ParseError("dtm: bad state clause");
            M.states.push_back(e[i][1].text);
        }
    if (M.states.empty()) throw ParseError("dtm: no states");
    int q = 0;
    for (size_t i = 1; i < e.size(); i++) {
        if (!e[i].is_list() || e[i].head() != "state") continue;
        for (size_t j = 2; j < e[i].size(); j++) {
            const SExpr& t = e[i][j];
            if (t.head() != "on" || t.size() != 6 || !t[2].atom || t[2].text != "->")
                throw ParseError("dtm: transition must be (on <sym> -> <state> <sym> "
                                 "<L|N|R>)");
            char g = single_char(t[1], "dtm transition");
            char g2 = single_char(t[4], "dtm transition");
            if (M.tape_syms.find(g) == std::string::npos ||
                M.tape_syms.find(g2) == std::string::npos)
                throw ParseError("dtm: unknown tape symbol");
            int q2 = M.state_index(t[3].text);
            int d = move_parse(t[5], "dtm transition");
            if (!M.delta.emplace(std::make_pair(q, g), std::make_tuple(q2, g2, d)).second)
                throw ParseError("dtm: duplicate transition row");
        }
        q++;
    }
    for (const std::string& f : atom_list(clause(e, "accept", "dtm"), "dtm accept"))
        M.accept.insert(M.state_index(f));
    return M;
}

SExpr dtm_to_sexpr(const Dtm& m) {
    std::vector<SExpr> top{atom("dtm")};
    std::vector<SExpr> ins{atom("inputs")};
    for (const std::string& a : m.inputs) ins.push_back(atom(a));
    top.push_back(SExpr::make_list(std::move(ins)));
    std::vector<SExpr> tp{atom("tape")};
    for (char c : m.tape_syms)
        if (c != m.blank) tp.push_back(atom(std::string(1, c)));
    tp.push_back(atom("blank"));
    tp.push_back(atom(std::string(1, m.blank)));
    top.push_back(SExpr::make_list(std::move(tp)));
    std::vector<std::vector<SExpr>> rows(m.states.size());
    for (const auto& [k, v] : m.delta)
        rows[k.first].push_back(SExpr::make_list({atom("on"), atom(std::string(1, k.second)),
                                                  atom("->"), atom(m.states[std::get<0>(v)]),
                                                  atom(std::string(1, std::get<1>(v))),
                                                  atom(move_print(std::get<2>(v)))}));
    for (size_t q = 0; q < m.states.size(); q++) {
        std::vector<SExpr> sc{atom("state"), atom(m.states[q])};
        for (SExpr& r : rows[q]) sc.push_back(std::move(r));
        top.push_back(SExpr::make_list(std::move(sc)));
    }
    std::vector<SExpr> acc{atom("accept")};
    for (int f : m.accept) acc.push_back(atom(m.states[f]));
    top.push_back(SExpr::make_list(std::move(acc)));
    return SExpr::make_list(std::move(top));
}

Dtm dtm_parse(const std::string& text) { return dtm_from_sexpr(sexpr_parse(text)); }
std::string dtm_print(const Dtm& m) { return sexpr_print(dtm_to_sexpr(m)); }

// ---------------------------------------------------------------------------
// DPDA <-> stack automaton
// ---------------------------------------------------------------------------

StoreAutomaton dpda_to_stack_automaton(const Dpda& M) {
    if (!M.real_time())
        throw std::runtime_error("dpda_to_stack_automaton: machine has epsilon rows");
    TAutomaton a;
    a.monad.kind = MonadKind::Stack;
    a.monad.sr = bool_semiring();
    for (char c : M.stack_syms) a.monad.syms.push_back(std::string(1, c));
    a.inputs = M.inputs;
    a.states = M.states;
    a.states.push_back("dead");
    int n = static_cast<int>(M.states.size());
    int nd = static_cast<int>(M.stack_syms.size());
    for (int q = 0; q <= n; q++) {
        a.out.push_back(stackpred_const(q < n && M.accept.count(q) > 0, nd));
        std::vector<TElem> row;
        for (size_t i = 0; i < M.inputs.size(); i++) {
            if (q == n) {
                // the dead state ignores the stack (the construction's sink;
                // erasing the whole stack is not a local operation, and the
                // stack content is irrelevant once the state is dead)
                row.push_back(stack_unit(n, nd));
                continue;
            }
            StackElem<int> e;
            e.nsym = nd;
            e.k = 1;
            e.table.emplace("", std::make_pair(n, ""));
            for (int s = 0; s < nd; s++) {
                auto it = M.delta.find({q, static_cast<int>(i), M.stack_syms[s]});
                std::string key(1, static_cast<char>(s));
                if (it == M.delta.end()) {
                    e.table.emplace(key, std::make_pair(n, ""));
                } else {
                    std::string push;
                    for (char c : it->second.second)
                        push += static_cast<char>(M.stack_syms.find(c));
                    e.table.emplace(key, std::make_pair(it->second.first, std::move(push)));
                }
            }
            row.push_back(stack_minimize(std::move(e)));
        }
        a.trans.push_back(std::move(row));
    }
    return {std::move(a), M.start, static_cast<int>(M.stack_syms.find(M.bottom))};
}

namespace {

char fresh_bottom(const std::string& used) {
    for (char c : std::string("_#$%&!0123456789"))
        if (used.find(c) == std::string::npos) return c;
    throw std::runtime_error("no unused bottom symbol available");
}

// Buffers s·bot^k with s over the storage alphabet and |s|+k <= n.
std::vector<std::string> all_buffers(const std::string& gam, char bot, int n) {
    std::vector<std::string> out;
    for (int len = 0; len <= n; len++)
        for (int g = 0; g <= len; g++)
            for (const std::string& s : all_strings(static_cast<int>(gam.size()), g)) {
                std::string b;
                for (char c : s) b += gam[static_cast<unsigned char>(c)];
                b += std::string(len - g, bot);
                out.push_back(std::move(b));
            }
    return out;
}

}  // namespace

Dpda stack_automaton_to_dpda(const TAutomaton& a, int x0, int gamma0) {
    if (a.monad.kind != MonadKind::Stack)
        throw std::runtime_error("stack_automaton_to_dpda: not a stack automaton");
    int nsym = a.monad.nsym();
    std::string gam;
    for (const std::string& s : a.monad.syms) gam += s[0];
    char bot = fresh_bottom(gam);
    int n = 1;
    for (size_t x = 0; x < a.states.size(); x++) {
        n = std::max(n, std::get<StackPred>(a.out[x]).k);
        for (size_t i = 0; i < a.inputs.size(); i++)
            n = std::max(n, std::get<StackElem<int>>(a.trans[x][i]).k);
    }
    Dpda M;
    M.inputs = a.inputs;
    M.stack_syms = gam + bot;
    M.bottom = bot;
    M.states.push_back("init");
    std::map<std::pair<int, std::string>, int> idx;
    std::vector<std::string> bufs = all_buffers(gam, bot, n);
    for (size_t x = 0; x < a.states.size(); x++)
        for (const std::string& b : bufs) {
            idx[{static_cast<int>(x), b}] = static_cast<int>(M.states.size());
            M.states.push_back(a.states[x] + "." + b);
        }
    M.delta[{0, -1, bot}] = {idx.at({x0, ""}),
                             std::string(1, gam[gamma0]) + std::string(1, bot)};
    for (const auto& [key, st] : idx) {
        auto [x, buf] = key;
        if (static_cast<int>(buf.size()) < n) {
            bool pure = buf.find(bot) == std::string::npos;
            if (pure)
                for (char g : gam)
                    M.delta[{st, -1, g}] = {idx.at({x, buf + g}), ""};
            M.delta[{st, -1, bot}] = {idx.at({x, buf + bot}), std::string(1, bot)};
        } else {
            std::string s = buf.substr(0, buf.find(bot));  // npos -> whole buffer
            std::string sidx;
            for (char c : s) sidx += static_cast<char>(gam.find(c));
            for (size_t i = 0; i < a.inputs.size(); i++) {
                auto [y, t] = stack_apply(std::get<StackElem<int>>(a.trans[x][i]), sidx);
                std::string push;
                for (char c : t) push += gam[static_cast<unsigned char>(c)];
                for (char g : M.stack_syms)
                    M.delta[{st, static_cast<int>(i), g}] = {idx.at({y, ""}),
                                                             push + std::string(1, g)};
            }
            if (stackpred_apply(std::get<StackPred>(a.out[x]), sidx)) M.accept.insert(st);
        }
    }
    M.start = 0;
    return M;
}

// ---------------------------------------------------------------------------
// NPDQRT <-> multi-stack automaton
// ---------------------------------------------------------------------------

StoreAutomaton npdqrt_to_multistack_automaton(const Npdqrt& M) {
    if (!M.real_time())
        throw std::runtime_error("npdqrt_to_multistack_automaton: machine has epsilon rows");
    TAutomaton a;
    a.monad.kind = MonadKind::MultiStack;
    a.monad.sr = bool_semiring();
    a.monad.m = M.m;
    for (char c : M.stack_syms) a.monad.syms.push_back(std::string(1, c));
    a.inputs = M.inputs;
    a.states = M.states;
    int nd = static_cast<int>(M.stack_syms.size());
    for (size_t q = 0; q < M.states.size(); q++) {
        a.out.push_back(
            multistackpred_const(M.accept.count(static_cast<int>(q)) > 0, nd, M.m));
        std::vector<TElem> row;
        for (size_t i = 0; i < M.inputs.size(); i++) {
            MultiStackElem<int> e;
            e.nsym = nd;
            e.m = M.m;
            e.k = 1;
            for (const StackTuple& key : all_tuple_keys(nd, M.m, 1)) {
                std::set<std::pair<int, StackTuple>> val;
                bool full = true;
                for (const std::string& ki : key) full &= ki.size() == 1;
                if (full) {
                    std::string tops;
                    for (const std::string& ki : key)
                        tops += M.stack_syms[static_cast<unsigned char>(ki[0])];
                    auto it = M.delta.find(
                        {static_cast<int>(q), static_cast<int>(i), tops});
                    if (it != M.delta.end())
                        for (const auto& [q2, pushes] : it->second) {
                            StackTuple t(M.m);
                            for (int s = 0; s < M.m; s++)
                                for (char c : pushes[s])
                                    t[s] += static_cast<char>(M.stack_syms.find(c));
                            val.emplace(q2, std::move(t));
                        }
                }
                e.table.emplace(key, std::move(val));
            }
            row.push_back(multistack_minimize(std::move(e)));
        }
        a.trans.push_back(std::move(row));
    }
    return {std::move(a), M.start, static_cast<int>(M.stack_syms.find(M.bottom))};
}

Npdqrt multistack_automaton_to_npdqrt(const TAutomaton& a, int x0, int gamma0) {
    if (a.monad.kind != MonadKind::MultiStack)
        throw std::runtime_error("multistack_automaton_to_npdqrt: not a multi-stack "
                                 "automaton");
    int nsym = a.monad.nsym();
    int m = a.monad.m;
    std::string gam;
    for (const std::string& s : a.monad.syms) gam += s[0];
    char bot = fresh_bottom(gam);
    int n = 1;
    for (size_t x = 0; x < a.states.size(); x++) {
        n = std::max(n, std::get<MultiStackPred>(a.out[x]).k);
        for (size_t i = 0; i < a.inputs.size(); i++)
            n = std::max(n, std::get<MultiStackElem<int>>(a.trans[x][i]).k);
    }
    Npdqrt M;
    M.inputs = a.inputs;
    M.stack_syms = gam + bot;
    M.bottom = bot;
    M.m = m;
    M.states.push_back("init");
    std::vector<std::string> bufs = all_buffers(gam, bot, n);
    std::vector<std::vector<std::string>> tuples{{}};
    for (int i = 0; i < m; i++) {
        std::vector<std::vector<std::string>> next;
        for (const auto& t : tuples)
            for (const std::string& b : bufs) {
                auto t2 = t;
                t2.push_back(b);
                next.push_back(std::move(t2));
            }
        tuples = std::move(next);
    }
    std::map<std::pair<int, std::vector<std::string>>, int> idx;
    for (size_t x = 0; x < a.states.size(); x++)
        for (const auto& t : tuples) {
            idx[{static_cast<int>(x), t}] = static_cast<int>(M.states.size());
            std::string name = a.states[x];
            for (const std::string& b : t) name += "." + (b.empty() ? "-" : b);
            M.states.push_back(std::move(name));
        }
    std::vector<std::string> tops_all = all_strings(static_cast<int>(M.stack_syms.size()), m);
    auto tops_chars = [&](const std::string& t) {
        std::string out;
        for (char c : t) out += M.stack_syms[static_cast<unsigned char>(c)];
        return out;
    };
    {
        std::vector<std::string> push0(m, std::string(1, gam[gamma0]) + std::string(1, bot));
        std::vector<std::string> empties(m);
        M.delta[{0, -1, std::string(m, bot)}] = {{idx.at({x0, empties}), push0}};
    }
    for (const auto& [key, st] : idx) {
        const auto& [x, bufsx] = key;
        int j = -1;
        for (int i = 0; i < m; i++)
            if (static_cast<int>(bufsx[i].size()) < n) {
                j = i;
                break;
            }
        if (j >= 0) {
            bool pure = bufsx[j].find(bot) == std::string::npos;
            for (const std::string& tt : tops_all) {
                std::string tops = tops_chars(tt);
                char gj = tops[j];
                if (gj != bot && !pure) continue;
                auto bufs2 = bufsx;
                bufs2[j] += gj;
                std::vector<std::string> pushes(m);
                for (int i = 0; i < m; i++)
                    if (i != j) pushes[i] = std::string(1, tops[i]);
                if (gj == bot) pushes[j] = std::string(1, bot);
                M.delta[{st, -1, tops}].emplace(idx.at({x, bufs2}), std::move(pushes));
            }
        } else {
            StackTuple sidx(m);
            for (int i = 0; i < m; i++) {
                std::string s = bufsx[i].substr(0, bufsx[i].find(bot));
                for (char c : s) sidx[i] += static_cast<char>(gam.find(c));
            }
            for (size_t i = 0; i < a.inputs.size(); i++) {
                auto results =
                    multistack_apply(std::get<MultiStackElem<int>>(a.trans[x][i]), sidx);
                for (const std::string& tt : tops_all) {
                    std::string tops = tops_chars(tt);
                    for (const auto& [y, t] : results) {
                        std::vector<std::string> pushes(m);
                        for (int s = 0; s < m; s++) {
                            for (char c : t[s]) pushes[s] += gam[static_cast<unsigned char>(c)];
                            pushes[s] += tops[s];
                        }
                        std::vector<std::string> empties(m);
                        M.delta[{st, static_cast<int>(i), tops}].emplace(
                            idx.at({y, empties}), std::move(pushes));
                    }
                }
            }
            if (multistackpred_apply(std::get<MultiStackPred>(a.out[x]), sidx))
                M.accept.insert(st);
        }
    }
    M.start = 0;
    return M;
}

// ---------------------------------------------------------------------------
// DTM -> RDTM (two-phase simulation)
// ---------------------------------------------------------------------------

Rdtm dtm_to_rdtm(const Dtm& M) {
    Rdtm R;
    R.inputs = M.inputs;
    R.tape_syms = M.tape_syms;
    R.blank = M.blank;
    R.states = {"copy", "rewind"};
    for (const std::string& q : M.states) R.states.push_back("run." + q);
    int acc = static_cast<int>(R.states.size());
    R.states.push_back("halt-accept");
    int rej = acc + 1;
    R.states.push_back("halt-reject");
    auto sim = [](int q) { return q + 2; };
    for (size_t i = 0; i < M.inputs.size(); i++)
        for (char g : M.tape_syms)
            R.delta[{0, static_cast<int>(i), g}] = {0, M.inputs[i][0], 1};
    for (char g : M.tape_syms) {
        R.delta[{0, -1, g}] = {1, g, -1};
        if (g != M.blank) R.delta[{1, -1, g}] = {1, g, -1};
    }
    R.delta[{1, -1, M.blank}] = {sim(M.start), M.blank, 1};
    for (size_t q = 0; q < M.states.size(); q++)
        for (char g : M.tape_syms) {
            auto it = M.delta.find({static_cast<int>(q), g});
            if (it != M.delta.end())
                R.delta[{sim(static_cast<int>(q)), -1, g}] = {
                    sim(std::get<0>(it->second)), std::get<1>(it->second),
                    std::get<2>(it->second)};
            else
                R.delta[{sim(static_cast<int>(q)), -1, g}] = {
                    M.accept.count(static_cast<int>(q)) ? acc : rej, g, 0};
        }
    R.start = 0;
    R.accept = {acc};
    return R;
}

// ---------------------------------------------------------------------------
// RDTM <-> tape automaton
// ---------------------------------------------------------------------------

TapeAutomatonResult rdtm_to_tape_automaton(const Rdtm& M) {
    if (M.blank != '_')
        throw std::runtime_error("rdtm_to_tape_automaton: blank symbol must be '_'");
    TAutomaton a;
    a.monad.kind = MonadKind::Tape;
    a.monad.sr = bool_semiring();
    for (char c : M.tape_syms) a.monad.syms.push_back(std::string(1, c));
    a.inputs = M.inputs;
    a.inputs.push_back("tau");
    a.states = M.states;
    a.states.push_back("dead");
    int n = static_cast<int>(M.states.size());
    int nd = static_cast<int>(M.tape_syms.size());
    for (int q = 0; q <= n; q++) {
        a.out.push_back(windowpred_const(q < n && M.accept.count(q) > 0, nd));
        std::vector<TElem> row;
        for (size_t i = 0; i < a.inputs.size(); i++) {
            int in = i + 1 == a.inputs.size() ? -1 : static_cast<int>(i);
            if (q == n) {
                row.push_back(tape_unit(n, nd));
                continue;
            }
            TapeElem<int> e;
            e.nsym = nd;
            e.k = 1;
            for (const std::string& w : all_strings(nd, 3)) {
                char g = M.tape_syms[static_cast<unsigned char>(w[1])];
                auto it = M.delta.find({q, in, g});
                if (it == M.delta.end()) {
                    e.table.emplace(w, std::make_tuple(n, 0, w));
                } else {
                    std::string neww = w;
                    neww[1] = static_cast<char>(M.tape_syms.find(std::get<1>(it->second)));
                    e.table.emplace(
                        w, std::make_tuple(std::get<0>(it->second),
                                           std::get<2>(it->second), std::move(neww)));
                }
            }
            row.push_back(tape_minimize(std::move(e)));
        }
        a.trans.push_back(std::move(row));
    }
    return {std::move(a), M.start};
}

Rdtm tape_automaton_to_rdtm(const TAutomaton& a, int x0) {
    if (a.monad.kind != MonadKind::Tape)
        throw std::runtime_error("tape_automaton_to_rdtm: not a tape automaton");
    int nsym = a.monad.nsym();
    std::string gam;
    for (const std::string& s : a.monad.syms) gam += s[0];
    int blank = a.monad.blank();
    int tau_in = -1;
    for (size_t i = 0; i < a.inputs.size(); i++)
        if (a.inputs[i] == "tau") tau_in = static_cast<int>(i);
    int n = 0;
    for (size_t x = 0; x < a.states.size(); x++) {
        n = std::max(n, std::get<WindowPred>(a.out[x]).k);
        for (size_t i = 0; i < a.inputs.size(); i++)
            n = std::max(n, std::get<TapeElem<int>>(a.trans[x][i]).k);
    }
    int width = 2 * n + 1;
    Rdtm R;
    for (size_t i = 0; i < a.inputs.size(); i++)
        if (static_cast<int>(i) != tau_in) R.inputs.push_back(a.inputs[i]);
    R.tape_syms = gam;
    R.blank = gam[blank];
    auto win_chars = [&](const std::string& w) {
        std::string out;
        for (char c : w) out += gam[static_cast<unsigned char>(c)];
        return out;
    };
    std::map<std::pair<int, std::string>, int> midx;  // (state, window in index bytes)
    std::deque<std::pair<int, std::string>> queue;
    auto main_state = [&](int x, const std::string& win) {
        auto key = std::make_pair(x, win);
        auto it = midx.find(key);
        if (it != midx.end()) return it->second;
        int st = static_cast<int>(R.states.size());
        midx.emplace(key, st);
        R.states.push_back(a.states[x] + "." + win_chars(win));
        const WindowPred& p = std::get<WindowPred>(a.out[x]);
        if (p.table.at(win.substr(n - p.k, 2 * p.k + 1))) R.accept.insert(st);
        queue.push_back(key);
        return st;
    };
    int chain_ctr = 0;
    auto fresh = [&](const std::string& name) {
        int st = static_cast<int>(R.states.size());
        R.states.push_back(name);
        return st;
    };
    R.start = main_state(x0, std::string(width, static_cast<char>(blank)));
    while (!queue.empty()) {
        auto [x, win] = queue.front();
        queue.pop_front();
        int st = midx.at({x, win});
        for (size_t ai = 0; ai < a.inputs.size(); ai++) {
            const auto& elem = std::get<TapeElem<int>>(a.trans[x][ai]);
            std::string buf = win;
            int h = n;
            int y = tape_run(elem, buf, h);
            int j = h - n;
            int rin = static_cast<int>(ai) == tau_in
                          ? -1
                          : (static_cast<int>(ai) < tau_in || tau_in == -1
                                 ? static_cast<int>(ai)
                                 : static_cast<int>(ai) - 1);
            std::string base = "c" + std::to_string(chain_ctr++);
            // deterministic actions before the reread: walk to the left edge,
            // write the updated window back, walk to the new left edge
            struct Act {
                int write;  // symbol index or -1 to keep the scanned cell
                int move;
            };
            std::vector<Act> acts;
            for (int k = 0; k < n; k++) acts.push_back({-1, -1});
            for (int i = 0; i < width; i++)
                acts.push_back({static_cast<unsigned char>(buf[i]), 1});
            for (int k = 0; k < width - j; k++) acts.push_back({-1, -1});
            // chain the actions; the first one is driven by the consuming
            // transition, the rest by internal steps
            int prev = -1;  // -1 marks "wire from the main state"
            auto wire = [&](int from, int in, const Act& act, int to) {
                if (from == -1) {
                    char g0 = gam[static_cast<unsigned char>(win[n])];
                    char wr = act.write < 0 ? g0 : gam[act.write];
                    R.delta[{st, in, g0}] = {to, wr, act.move};
                } else {
                    for (char g : gam) {
                        char wr = act.write < 0 ? g : gam[act.write];
                        R.delta[{from, -1, g}] = {to, wr, act.move};
                    }
                }
            };
            // reread states, one per partially collected window
            std::map<std::string, int> readstate;
            std::function<int(const std::string&)> read_at =
                [&](const std::string& acc) -> int {
                auto it = readstate.find(acc);
                if (it != readstate.end()) return it->second;
                int rs = fresh(base + ".r" + std::to_string(acc.size()) + "." +
                               win_chars(acc));
                readstate.emplace(acc, rs);
                return rs;
            };
            int first_read = read_at("");
            for (size_t k = 0; k < acts.size(); k++) {
                int to = k + 1 < acts.size()
                             ? fresh(base + ".p" + std::to_string(k + 1))
                             : first_read;
                wire(prev, rin, acts[k], to);
                prev = to;
            }
            // collect the 2n+1 cells around the new head position, then walk
            // back to it and land in the buffered target state
            std::deque<std::string> rq{""};
            while (!rq.empty()) {
                std::string acc = rq.front();
                rq.pop_front();
                int rs = read_at(acc);
                if (static_cast<int>(acc.size()) == width) {
                    int back = rs;
                    for (int k = 0; k <= n; k++) {
                        int to = k < n ? fresh(base + ".b" + std::to_string(k) + "." +
                                               win_chars(acc))
                                       : main_state(y, acc);
                        for (char g : gam) R.delta[{back, -1, g}] = {to, g, -1};
                        back = to;
                    }
                    continue;
                }
                for (int s = 0; s < nsym; s++) {
                    std::string acc2 = acc + static_cast<char>(s);
                    int to = read_at(acc2);
                    R.delta[{rs, -1, gam[s]}] = {to, gam[s], 1};
                    rq.push_back(std::move(acc2));
                }
            }
        }
    }
    return R;
}

}  // namespace taut
