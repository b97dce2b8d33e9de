#include "taut/observational.hpp"

#include <deque>

namespace taut {

namespace {

// f: X -> B encoded base-nb, digit x = f(x).
int fdigit(size_t code, int x, int nb) {
    for (int i = 0; i < x; i++) code /= nb;
    return static_cast<int>(code % nb);
}

size_t fcount(int nb, int n) {
    size_t c = 1;
    for (int i = 0; i < n; i++) {
        if (c > 1000000) throw std::runtime_error("cps: function space too large");
        c *= nb;
    }
    return c;
}

size_t fencode(const std::vector<int>& digits, int nb) {
    size_t code = 0;
    for (size_t i = digits.size(); i-- > 0;) code = code * nb + digits[i];
    return code;
}

struct BTable {
    const MonadDesc* d;
    std::vector<OutVal> vals;

    int find(const OutVal& v) const {
        for (size_t i = 0; i < vals.size(); i++)
            if (out_eq(*d, vals[i], v)) return static_cast<int>(i);
        return -1;
    }
    // returns -1 when the cap would be exceeded
    int intern(const OutVal& v, int max_b) {
        int i = find(v);
        if (i >= 0) return i;
        if (static_cast<int>(vals.size()) >= max_b) return -1;
        vals.push_back(v);
        return static_cast<int>(vals.size()) - 1;
    }
};

// Close the output values under the algebra along every transition element
// (and, when given, under the monoid sum). Returns false if the closure
// exceeds max_b.
bool close_b(const TAutomaton& a, BTable& B, const OmegaMonoid* om, int max_b) {
    int n = static_cast<int>(a.states.size());
    for (const OutVal& v : a.out)
        if (B.intern(v, max_b) < 0) return false;
    if (om && B.intern(om->zero, max_b) < 0) return false;
    bool grew = true;
    while (grew) {
        grew = false;
        size_t old = B.vals.size();
        int nb = static_cast<int>(old);
        size_t nf = fcount(nb, n);
        for (int x = 0; x < n; x++)
            for (size_t i = 0; i < a.inputs.size(); i++)
                for (size_t g = 0; g < nf; g++) {
                    OutVal r = algebra_map(a.monad, a.trans[x][i],
                                           [&](int y) { return B.vals[fdigit(g, y, nb)]; });
                    int idx = B.intern(r, max_b);
                    if (idx < 0) return false;
                    if (idx >= nb) grew = true;
                }
        if (om)
            for (size_t i = 0; i < old; i++)
                for (size_t j = i; j < old; j++) {
                    int idx = B.intern(om->add(B.vals[i], B.vals[j]), max_b);
                    if (idx < 0) return false;
                    if (idx >= nb) grew = true;
                }
        grew |= B.vals.size() > old;
    }
    return true;
}

// Assemble the CPS automaton over an already-closed B.
CpsAutomaton assemble_cps(const TAutomaton& a, BTable B) {
    CpsAutomaton c;
    c.monad = a.monad;
    c.inputs = a.inputs;
    c.states = a.states;
    c.bvals = std::move(B.vals);
    BTable lookup{&a.monad, c.bvals};
    int n = static_cast<int>(a.states.size());
    int nb = c.nb();
    size_t nf = fcount(nb, n);
    for (int x = 0; x < n; x++) {
        c.out.push_back(lookup.find(a.out[x]));
        std::vector<CpsElem> row;
        for (size_t i = 0; i < a.inputs.size(); i++) {
            CpsElem e;
            e.table.resize(nf);
            for (size_t g = 0; g < nf; g++) {
                OutVal r = algebra_map(a.monad, a.trans[x][i], [&](int y) {
                    return c.bvals[fdigit(g, y, nb)];
                });
                int idx = lookup.find(r);
                if (idx < 0) throw std::runtime_error("cps: output object not closed");
                e.table[g] = idx;
            }
            row.push_back(std::move(e));
        }
        c.trans.push_back(std::move(row));
    }
    return c;
}

// Kleisli composition in the continuation monad:
// (do x <- p; F[x])(g) = p(lambda x. F[x](g)).
CpsElem cps_comp(const CpsElem& p, const std::vector<CpsElem>& F, int nb) {
    int n = static_cast<int>(F.size());
    CpsElem r;
    r.table.resize(p.table.size());
    std::vector<int> digits(n);
    for (size_t g = 0; g < p.table.size(); g++) {
        for (int x = 0; x < n; x++) digits[x] = F[x].table[g];
        r.table[g] = p.table[fencode(digits, nb)];
    }
    return r;
}

CpsElem cps_eta(int x, int nb, size_t nf) {
    CpsElem e;
    e.table.resize(nf);
    for (size_t g = 0; g < nf; g++) e.table[g] = fdigit(g, x, nb);
    return e;
}

}  // namespace

CpsAutomaton cps_transform(const TAutomaton& a, int max_b) {
    BTable B{&a.monad, {}};
    if (!close_b(a, B, nullptr, max_b))
        throw std::runtime_error("cps_transform: output object is not finite (closure "
                                 "exceeds " +
                                 std::to_string(max_b) + " values)");
    return assemble_cps(a, std::move(B));
}

OutVal cps_trace(const CpsAutomaton& c, int state, const Word& w) {
    int n = static_cast<int>(c.states.size());
    int nb = c.nb();
    size_t nf = fcount(nb, n);
    CpsElem p = cps_eta(state, nb, nf);
    for (int a : w) {
        std::vector<CpsElem> col;
        for (int x = 0; x < n; x++) col.push_back(c.trans[x][a]);
        p = cps_comp(p, col, nb);
    }
    return c.bvals[p.table[fencode(c.out, nb)]];
}

CpsDeterminizeResult cps_determinize(const CpsAutomaton& c, int x0, int max_states) {
    int n = static_cast<int>(c.states.size());
    int nb = c.nb();
    size_t nf = fcount(nb, n);
    size_t oenc = fencode(c.out, nb);
    CpsDeterminizeResult res;
    res.moore.inputs = c.inputs;
    std::map<CpsElem, int> idx;
    std::vector<CpsElem> elems;
    std::deque<int> queue;
    auto state_of = [&](CpsElem e) {
        auto it = idx.find(e);
        if (it != idx.end()) return it->second;
        int s = static_cast<int>(elems.size());
        idx.emplace(e, s);
        elems.push_back(std::move(e));
        res.moore.states.push_back("d" + std::to_string(s));
        res.moore.out.push_back(c.bvals[elems[s].table[oenc]]);
        res.moore.next.emplace_back();
        queue.push_back(s);
        return s;
    };
    res.start = state_of(cps_eta(x0, nb, nf));
    while (!queue.empty()) {
        if (static_cast<int>(elems.size()) > max_states) {
            res.budget_exhausted = true;
            return res;
        }
        int s = queue.front();
        queue.pop_front();
        for (size_t a = 0; a < c.inputs.size(); a++) {
            std::vector<CpsElem> col;
            for (int x = 0; x < n; x++) col.push_back(c.trans[x][a]);
            int tgt = state_of(cps_comp(elems[s], col, nb));
            res.moore.next[s].push_back(tgt);
        }
    }
    return res;
}

OmegaMonoid omega_join(const MonadDesc& d) {
    OmegaMonoid om;
    om.idempotent = true;
    switch (d.kind) {
        case MonadKind::Stack:
        case MonadKind::NdStack:
            om.zero = stackpred_const(false, d.nsym());
            om.add = [nsym = d.nsym()](const OutVal& a, const OutVal& b) -> OutVal {
                const StackPred& p = std::get<StackPred>(a);
                const StackPred& q = std::get<StackPred>(b);
                StackPred r;
                r.nsym = nsym;
                r.k = std::max(p.k, q.k);
                for (const std::string& w : all_prefix_keys(nsym, r.k))
                    r.table.emplace(w, stackpred_apply(p, w) || stackpred_apply(q, w));
                return stackpred_minimize(std::move(r));
            };
            break;
        case MonadKind::MultiStack:
            om.zero = multistackpred_const(false, d.nsym(), d.m);
            om.add = [nsym = d.nsym(), m = d.m](const OutVal& a, const OutVal& b) -> OutVal {
                const MultiStackPred& p = std::get<MultiStackPred>(a);
                const MultiStackPred& q = std::get<MultiStackPred>(b);
                MultiStackPred r;
                r.nsym = nsym;
                r.m = m;
                r.k = std::max(p.k, q.k);
                for (const StackTuple& w : all_tuple_keys(nsym, m, r.k))
                    r.table.emplace(w,
                                    multistackpred_apply(p, w) || multistackpred_apply(q, w));
                return multistackpred_minimize(std::move(r));
            };
            break;
        case MonadKind::Tape:
            om.zero = windowpred_const(false, d.nsym());
            om.add = [nsym = d.nsym()](const OutVal& a, const OutVal& b) -> OutVal {
                const WindowPred& p = std::get<WindowPred>(a);
                const WindowPred& q = std::get<WindowPred>(b);
                WindowPred r;
                r.nsym = nsym;
                r.k = std::max(p.k, q.k);
                for (const std::string& w : all_strings(nsym, 2 * r.k + 1))
                    r.table.emplace(w, p.table.at(w.substr(r.k - p.k, 2 * p.k + 1)) ||
                                           q.table.at(w.substr(r.k - q.k, 2 * q.k + 1)));
                return windowpred_minimize(std::move(r));
            };
            break;
        default: {
            if (!d.sr.is_idempotent)
                throw std::runtime_error("omega_join: semiring sum is not idempotent");
            om.zero = d.sr.zero;
            om.add = [sr = d.sr](const OutVal& a, const OutVal& b) -> OutVal {
                return sr.add(std::get<Scalar>(a), std::get<Scalar>(b));
            };
        }
    }
    return om;
}

OmegaMonoid omega_sum(const MonadDesc& d) {
    OmegaMonoid om;
    om.idempotent = d.sr.is_idempotent;
    om.zero = d.sr.zero;
    om.add = [sr = d.sr](const OutVal& a, const OutVal& b) -> OutVal {
        return sr.add(std::get<Scalar>(a), std::get<Scalar>(b));
    };
    return om;
}

std::optional<CpsAutomaton> tau_eliminate(const TAutomaton& a,
                                          const std::optional<OmegaMonoid>& om, int fuel,
                                          int max_b) {
    if (!om)
        throw std::runtime_error(
            "tau_eliminate: an omega-additive monoid on the output object is required "
            "to sum tau-chains");
    int tau = -1;
    for (size_t i = 0; i < a.inputs.size(); i++)
        if (a.inputs[i] == "tau") tau = static_cast<int>(i);
    BTable B{&a.monad, {}};
    if (!close_b(a, B, &*om, max_b)) return std::nullopt;
    CpsAutomaton c = assemble_cps(a, std::move(B));
    int n = static_cast<int>(c.states.size());
    int nb = c.nb();
    CpsAutomaton res;
    res.monad = c.monad;
    res.states = c.states;
    res.bvals = c.bvals;
    for (size_t i = 0; i < c.inputs.size(); i++)
        if (static_cast<int>(i) != tau) res.inputs.push_back(c.inputs[i]);
    if (tau < 0) {  // no unobservable action: the sums have a single term
        res.out = c.out;
        for (int x = 0; x < n; x++) res.trans.push_back(c.trans[x]);
        return res;
    }
    BTable lookup{&a.monad, res.bvals};
    auto addb = [&](int i, int j) {
        int r = lookup.find(om->add(res.bvals[i], res.bvals[j]));
        if (r < 0) throw std::runtime_error("tau_eliminate: output object not closed");
        return r;
    };
    std::vector<CpsElem> tau_col;
    for (int x = 0; x < n; x++) tau_col.push_back(c.trans[x][tau]);
    CpsElem zero_elem;
    zero_elem.table.assign(fcount(nb, n), lookup.find(om->zero));
    size_t oenc = fencode(c.out, nb);
    // running chain terms and partial sums, per non-tau input and per state
    std::vector<std::vector<CpsElem>> term, sum;
    for (size_t i = 0; i < c.inputs.size(); i++) {
        if (static_cast<int>(i) == tau) continue;
        std::vector<CpsElem> col;
        for (int x = 0; x < n; x++) col.push_back(c.trans[x][i]);
        term.push_back(col);
        sum.push_back(std::move(col));
    }
    std::vector<CpsElem> ochain = tau_col;  // tau^i as an element, i = 1, 2, ...
    std::vector<int> osum = c.out;
    auto elem_add = [&](const CpsElem& p, const CpsElem& q) {
        CpsElem r;
        r.table.resize(p.table.size());
        for (size_t g = 0; g < p.table.size(); g++) r.table[g] = addb(p.table[g], q.table[g]);
        return r;
    };
    auto snapshot = [&]() {
        std::vector<int> s;
        for (const auto& group : {std::cref(term), std::cref(sum)})
            for (const auto& col : group.get())
                for (const CpsElem& e : col)
                    s.insert(s.end(), e.table.begin(), e.table.end());
        for (const CpsElem& e : ochain) s.insert(s.end(), e.table.begin(), e.table.end());
        s.insert(s.end(), osum.begin(), osum.end());
        return s;
    };
    std::set<std::vector<int>> seen{snapshot()};
    int stable = 0;
    bool converged = false;
    for (int it = 0; it < fuel && !converged; it++) {
        bool changed = false;
        for (size_t i = 0; i < term.size(); i++) {
            std::vector<CpsElem> prev = term[i];
            for (int x = 0; x < n; x++) {
                term[i][x] = cps_comp(tau_col[x], prev, nb);
                CpsElem s2 = elem_add(sum[i][x], term[i][x]);
                if (!(s2 == sum[i][x])) changed = true;
                sum[i][x] = std::move(s2);
            }
        }
        std::vector<CpsElem> och2;
        for (int x = 0; x < n; x++) och2.push_back(cps_comp(tau_col[x], ochain, nb));
        for (int x = 0; x < n; x++) {
            int v = addb(osum[x], ochain[x].table[oenc]);
            if (v != osum[x]) changed = true;
            osum[x] = v;
        }
        ochain = std::move(och2);
        // the iteration state determines the future; revisiting one with the
        // sums unchanged in between means the sums are final
        if (!seen.insert(snapshot()).second) {
            converged = true;
            break;
        }
        stable = changed ? 0 : stable + 1;
        if (!om->idempotent && stable >= om->stable_steps) converged = true;
    }
    if (!converged) return std::nullopt;
    res.out = osum;
    for (int x = 0; x < n; x++) {
        std::vector<CpsElem> row;
        for (size_t i = 0; i < term.size(); i++) row.push_back(sum[i][x]);
        res.trans.push_back(std::move(row));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Configuration-level observational semantics
// ---------------------------------------------------------------------------

namespace {

ObsResult obs_trace_pow(const TAutomaton& a, int tau, int state, const Word& w) {
    auto closure = [&](StateSet s) {
        if (tau < 0) return s;
        std::deque<int> q(s.begin(), s.end());
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : std::get<StateSet>(a.trans[x][tau]))
                if (s.insert(y).second) q.push_back(y);
        }
        return s;
    };
    StateSet cur = closure({state});
    for (int c : w) {
        StateSet next;
        for (int x : cur)
            for (int y : std::get<StateSet>(a.trans[x][c])) next.insert(y);
        cur = closure(std::move(next));
    }
    bool acc = false;
    for (int x : cur) acc |= !a.monad.sr.is_zero(std::get<Scalar>(a.out[x]));
    return {acc ? RunVerdict::Accept : RunVerdict::Reject,
            acc ? a.monad.sr.one : a.monad.sr.zero};
}

ObsResult obs_trace_lin(const TAutomaton& a, int tau, int state, const Word& w, int fuel) {
    const SemiringOps& sr = a.monad.sr;
    int n = static_cast<int>(a.states.size());
    std::vector<Scalar> v(n, sr.zero);
    v[state] = sr.one;
    auto step = [&](const std::vector<Scalar>& u, int in) {
        std::vector<Scalar> r(n, sr.zero);
        for (int x = 0; x < n; x++) {
            if (sr.is_zero(u[x])) continue;
            for (const auto& [y, c] : std::get<LinComb<int>>(a.trans[x][in]).coef)
                r[y] = sr.add(r[y], sr.mul(u[x], c));
        }
        return r;
    };
    auto veq = [&](const std::vector<Scalar>& p, const std::vector<Scalar>& q) {
        for (int x = 0; x < n; x++)
            if (!sr.eq(p[x], q[x])) return false;
        return true;
    };
    // tau-star: sum of v * M_tau^i with stabilization; exact repeat of the
    // (term, sum) pair also certifies convergence
    auto tau_star = [&](std::vector<Scalar> u) -> std::optional<std::vector<Scalar>> {
        if (tau < 0) return u;
        std::vector<Scalar> s = u, t = u;
        int stable = 0;
        std::set<std::string> seen;
        auto snap = [&]() {
            std::string out;
            for (const Scalar& c : t) out += sr.print(c) + ",";
            out += ";";
            for (const Scalar& c : s) out += sr.print(c) + ",";
            return out;
        };
        seen.insert(snap());
        for (int i = 0; i < fuel; i++) {
            t = step(t, tau);
            std::vector<Scalar> s2(n);
            for (int x = 0; x < n; x++) s2[x] = sr.add(s[x], t[x]);
            bool changed = !veq(s2, s);
            s = std::move(s2);
            if (!seen.insert(snap()).second) return s;
            stable = changed ? 0 : stable + 1;
            if (!sr.is_idempotent && stable >= 10) return s;
        }
        return std::nullopt;
    };
    for (int c : w) {
        auto star = tau_star(v);
        if (!star) return {RunVerdict::Unknown, sr.zero};
        v = step(*star, c);
    }
    auto star = tau_star(v);
    if (!star) return {RunVerdict::Unknown, sr.zero};
    Scalar val = sr.zero;
    for (int x = 0; x < n; x++)
        val = sr.add(val, sr.mul((*star)[x], std::get<Scalar>(a.out[x])));
    return {sr.is_zero(val) ? RunVerdict::Reject : RunVerdict::Accept, val};
}

ObsResult obs_trace_tape(const TAutomaton& a, int tau, int state, const Word& w, int fuel) {
    char blank = static_cast<char>(a.monad.blank());
    struct Cfg {
        int x;
        std::string buf;  // index bytes
        int h;
        size_t pos;
    };
    auto key = [&](const Cfg& c) {
        int lo = 0, hi = static_cast<int>(c.buf.size());
        while (lo < hi && c.buf[lo] == blank && lo < c.h) lo++;
        while (hi > lo && c.buf[hi - 1] == blank && hi - 1 > c.h) hi--;
        return std::to_string(c.x) + "|" + std::to_string(c.pos) + "|" +
               std::to_string(c.h - lo) + "|" + c.buf.substr(lo, hi - lo);
    };
    auto pad = [&](Cfg& c, int r) {
        while (c.h - r < 0) {
            c.buf.insert(c.buf.begin(), blank);
            c.h++;
        }
        while (c.h + r >= static_cast<int>(c.buf.size())) c.buf += blank;
    };
    std::deque<Cfg> queue{{state, std::string(1, blank), 0, 0}};
    std::set<std::string> seen{key(queue.front())};
    while (!queue.empty()) {
        if (fuel-- <= 0) return {RunVerdict::Unknown, a.monad.sr.zero};
        Cfg c = queue.front();
        queue.pop_front();
        if (c.pos == w.size()) {
            const WindowPred& p = std::get<WindowPred>(a.out[c.x]);
            Cfg t = c;
            pad(t, p.k);
            if (p.table.at(t.buf.substr(t.h - p.k, 2 * p.k + 1)))
                return {RunVerdict::Accept, a.monad.sr.one};
        }
        auto step = [&](int in) {
            const auto& e = std::get<TapeElem<int>>(a.trans[c.x][in]);
            Cfg t = c;
            pad(t, e.k);
            t.x = tape_run(e, t.buf, t.h);
            if (in != tau) t.pos++;
            std::string k = key(t);
            if (seen.insert(std::move(k)).second) queue.push_back(std::move(t));
        };
        if (tau >= 0) step(tau);
        if (c.pos < w.size()) step(w[c.pos]);
    }
    return {RunVerdict::Reject, a.monad.sr.zero};
}

}  // namespace

ObsResult obs_trace(const TAutomaton& a, int state, const Word& w, int fuel) {
    int tau = -1;
    for (size_t i = 0; i < a.inputs.size(); i++)
        if (a.inputs[i] == "tau") tau = static_cast<int>(i);
    switch (a.monad.kind) {
        case MonadKind::Pow:
            return obs_trace_pow(a, tau, state, w);
        case MonadKind::Lin:
            return obs_trace_lin(a, tau, state, w, fuel);
        case MonadKind::Tape:
            return obs_trace_tape(a, tau, state, w, fuel);
        default:
            throw std::runtime_error(
                "obs_trace: configuration search is not implemented for this monad");
    }
}

}  // namespace taut
