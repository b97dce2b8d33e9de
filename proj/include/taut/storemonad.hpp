#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace taut {

// Locality-bound cap for dense prefix/window tables (configurable at runtime).
inline int store_bound_cap = 6;

inline void check_bound_cap(int k, const char* what) {
    if (k > store_bound_cap)
        throw std::runtime_error(std::string(what) + ": locality bound " + std::to_string(k) +
                                 " exceeds cap " + std::to_string(store_bound_cap));
}

// All strings over symbols 0..nsym-1 of the given length (symbols are bytes).
inline std::vector<std::string> all_strings(int nsym, int len) {
    std::vector<std::string> out{""};
    for (int i = 0; i < len; i++) {
        std::vector<std::string> next;
        next.reserve(out.size() * nsym);
        for (const std::string& w : out)
            for (int c = 0; c < nsym; c++) next.push_back(w + static_cast<char>(c));
        out = std::move(next);
    }
    return out;
}

// All strings of length <= len (short keys are exact stacks, full-length keys
// are extendable prefixes).
inline std::vector<std::string> all_prefix_keys(int nsym, int len) {
    std::vector<std::string> out;
    for (int l = 0; l <= len; l++)
        for (std::string& w : all_strings(nsym, l)) out.push_back(std::move(w));
    return out;
}

// ---------------------------------------------------------------------------
// Stack monad: elements read only a bounded stack prefix.
// Table keys w with |w| < k describe the exact stack w; keys with |w| = k
// describe all stacks w·u via (r(w), t(w)·u).
// ---------------------------------------------------------------------------

template <class X>
struct StackElem {
    int nsym = 1;
    int k = 0;
    std::map<std::string, std::pair<X, std::string>> table;

    bool operator==(const StackElem& o) const {
        return nsym == o.nsym && k == o.k && table == o.table;
    }
    bool operator<(const StackElem& o) const {
        return std::tie(nsym, k, table) < std::tie(o.nsym, o.k, o.table);
    }
};

template <class X>
std::pair<X, std::string> stack_apply(const StackElem<X>& e, const std::string& s) {
    if (static_cast<int>(s.size()) >= e.k) {
        const auto& [x, t] = e.table.at(s.substr(0, e.k));
        return {x, t + s.substr(e.k)};
    }
    return e.table.at(s);
}

template <class X>
StackElem<X> stack_minimize(StackElem<X> e) {
    for (int k0 = 0; k0 < e.k; k0++) {
        bool ok = true;
        for (const auto& [w, v] : e.table) {
            if (static_cast<int>(w.size()) <= k0) continue;
            const auto& [x0, t0] = e.table.at(w.substr(0, k0));
            if (!(v.first == x0) || v.second != t0 + w.substr(k0)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            StackElem<X> out;
            out.nsym = e.nsym;
            out.k = k0;
            for (const auto& [w, v] : e.table)
                if (static_cast<int>(w.size()) <= k0) out.table.emplace(w, v);
            return out;
        }
    }
    return e;
}

template <class X>
bool stack_equal(const StackElem<X>& a, const StackElem<X>& b) {
    return stack_minimize(a) == stack_minimize(b);
}

template <class X>
StackElem<X> stack_unit(const X& x, int nsym) {
    StackElem<X> e;
    e.nsym = nsym;
    e.table.emplace("", std::make_pair(x, ""));
    return e;
}

template <class X, class Y>
StackElem<Y> stack_kleisli(const std::function<StackElem<Y>(const X&)>& f,
                           const StackElem<X>& p) {
    int kf = 0;
    std::map<X, StackElem<Y>> fx;
    for (const auto& [w, v] : p.table)
        if (!fx.count(v.first)) {
            fx.emplace(v.first, f(v.first));
            kf = std::max(kf, fx.at(v.first).k);
        }
    int k2 = p.k + kf;
    check_bound_cap(k2, "stack_kleisli");
    StackElem<Y> out;
    out.nsym = p.nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(p.nsym, k2)) {
        auto [x, s1] = stack_apply(p, w);
        out.table.emplace(w, stack_apply(fx.at(x), s1));
    }
    return stack_minimize(std::move(out));
}

// Theory operations: pop(x_1..x_n, y) branches on the top symbol (y on empty
// stack); push_c(x) puts c on top and proceeds with x.
template <class X>
StackElem<X> stack_pop(const std::vector<StackElem<X>>& branches, const StackElem<X>& on_empty) {
    int nsym = on_empty.nsym;
    if (static_cast<int>(branches.size()) != nsym)
        throw std::runtime_error("stack_pop: need one branch per stack symbol");
    int k2 = 1;
    for (const auto& b : branches) k2 = std::max(k2, b.k + 1);
    check_bound_cap(k2, "stack_pop");
    StackElem<X> out;
    out.nsym = nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(nsym, k2)) {
        if (w.empty())
            out.table.emplace(w, stack_apply(on_empty, ""));
        else
            out.table.emplace(w, stack_apply(branches[static_cast<unsigned char>(w[0])],
                                             w.substr(1)));
    }
    return stack_minimize(std::move(out));
}

template <class X>
StackElem<X> stack_push(int sym, const StackElem<X>& cont) {
    int k2 = std::max(cont.k - 1, 0);
    StackElem<X> out;
    out.nsym = cont.nsym;
    out.k = k2;
    std::string c(1, static_cast<char>(sym));
    for (const std::string& w : all_prefix_keys(cont.nsym, k2))
        out.table.emplace(w, stack_apply(cont, c + w));
    return stack_minimize(std::move(out));
}

// ---------------------------------------------------------------------------
// Nondeterministic stack monad (tensor of stack with finite powerset):
// table values are finite sets of (result, new stack).
// ---------------------------------------------------------------------------

template <class X>
struct NdStackElem {
    int nsym = 1;
    int k = 0;
    std::map<std::string, std::set<std::pair<X, std::string>>> table;

    bool operator==(const NdStackElem& o) const {
        return nsym == o.nsym && k == o.k && table == o.table;
    }
    bool operator<(const NdStackElem& o) const {
        return std::tie(nsym, k, table) < std::tie(o.nsym, o.k, o.table);
    }
};

template <class X>
std::set<std::pair<X, std::string>> ndstack_apply(const NdStackElem<X>& e,
                                                  const std::string& s) {
    if (static_cast<int>(s.size()) >= e.k) {
        std::set<std::pair<X, std::string>> out;
        for (const auto& [x, t] : e.table.at(s.substr(0, e.k)))
            out.emplace(x, t + s.substr(e.k));
        return out;
    }
    return e.table.at(s);
}

template <class X>
NdStackElem<X> ndstack_minimize(NdStackElem<X> e) {
    for (int k0 = 0; k0 < e.k; k0++) {
        bool ok = true;
        for (const auto& [w, v] : e.table) {
            if (static_cast<int>(w.size()) <= k0) continue;
            std::set<std::pair<X, std::string>> want;
            for (const auto& [x, t] : e.table.at(w.substr(0, k0)))
                want.emplace(x, t + w.substr(k0));
            if (v != want) {
                ok = false;
                break;
            }
        }
        if (ok) {
            NdStackElem<X> out;
            out.nsym = e.nsym;
            out.k = k0;
            for (const auto& [w, v] : e.table)
                if (static_cast<int>(w.size()) <= k0) out.table.emplace(w, v);
            return out;
        }
    }
    return e;
}

template <class X>
bool ndstack_equal(const NdStackElem<X>& a, const NdStackElem<X>& b) {
    return ndstack_minimize(a) == ndstack_minimize(b);
}

template <class X>
NdStackElem<X> ndstack_unit(const X& x, int nsym) {
    NdStackElem<X> e;
    e.nsym = nsym;
    e.table[""] = {{x, ""}};
    return e;
}

template <class X>
NdStackElem<X> ndstack_empty(int nsym) {
    NdStackElem<X> e;
    e.nsym = nsym;
    e.table[""] = {};
    return e;
}

template <class X>
NdStackElem<X> ndstack_plus(const NdStackElem<X>& a, const NdStackElem<X>& b) {
    NdStackElem<X> out;
    out.nsym = a.nsym;
    out.k = std::max(a.k, b.k);
    for (const std::string& w : all_prefix_keys(a.nsym, out.k)) {
        auto s = ndstack_apply(a, w);
        auto t = ndstack_apply(b, w);
        s.insert(t.begin(), t.end());
        out.table.emplace(w, std::move(s));
    }
    return ndstack_minimize(std::move(out));
}

template <class X, class Y>
NdStackElem<Y> ndstack_kleisli(const std::function<NdStackElem<Y>(const X&)>& f,
                               const NdStackElem<X>& p) {
    int kf = 0;
    std::map<X, NdStackElem<Y>> fx;
    for (const auto& [w, v] : p.table)
        for (const auto& [x, t] : v)
            if (!fx.count(x)) {
                fx.emplace(x, f(x));
                kf = std::max(kf, fx.at(x).k);
            }
    int k2 = p.k + kf;
    check_bound_cap(k2, "ndstack_kleisli");
    NdStackElem<Y> out;
    out.nsym = p.nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(p.nsym, k2)) {
        std::set<std::pair<Y, std::string>> acc;
        for (const auto& [x, s1] : ndstack_apply(p, w)) {
            auto next = ndstack_apply(fx.at(x), s1);
            acc.insert(next.begin(), next.end());
        }
        out.table.emplace(w, std::move(acc));
    }
    return ndstack_minimize(std::move(out));
}

template <class X>
NdStackElem<X> ndstack_pop(const std::vector<NdStackElem<X>>& branches,
                           const NdStackElem<X>& on_empty) {
    int nsym = on_empty.nsym;
    if (static_cast<int>(branches.size()) != nsym)
        throw std::runtime_error("ndstack_pop: need one branch per stack symbol");
    int k2 = 1;
    for (const auto& b : branches) k2 = std::max(k2, b.k + 1);
    check_bound_cap(k2, "ndstack_pop");
    NdStackElem<X> out;
    out.nsym = nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(nsym, k2)) {
        if (w.empty())
            out.table.emplace(w, ndstack_apply(on_empty, ""));
        else
            out.table.emplace(w, ndstack_apply(branches[static_cast<unsigned char>(w[0])],
                                               w.substr(1)));
    }
    return ndstack_minimize(std::move(out));
}

template <class X>
NdStackElem<X> ndstack_push(int sym, const NdStackElem<X>& cont) {
    int k2 = std::max(cont.k - 1, 0);
    NdStackElem<X> out;
    out.nsym = cont.nsym;
    out.k = k2;
    std::string c(1, static_cast<char>(sym));
    for (const std::string& w : all_prefix_keys(cont.nsym, k2))
        out.table.emplace(w, ndstack_apply(cont, c + w));
    return ndstack_minimize(std::move(out));
}

// ---------------------------------------------------------------------------
// Multi-stack monad: tensor of m stack monads with finite powerset.
// Keys are m-tuples of prefixes; extension works per coordinate.
// ---------------------------------------------------------------------------

using StackTuple = std::vector<std::string>;

inline std::vector<StackTuple> all_tuple_keys(int nsym, int m, int len) {
    std::vector<StackTuple> out{StackTuple{}};
    std::vector<std::string> keys = all_prefix_keys(nsym, len);
    for (int i = 0; i < m; i++) {
        std::vector<StackTuple> next;
        next.reserve(out.size() * keys.size());
        for (const StackTuple& t : out)
            for (const std::string& w : keys) {
                StackTuple t2 = t;
                t2.push_back(w);
                next.push_back(std::move(t2));
            }
        out = std::move(next);
    }
    return out;
}

template <class X>
struct MultiStackElem {
    int nsym = 1;
    int m = 1;
    int k = 0;
    std::map<StackTuple, std::set<std::pair<X, StackTuple>>> table;

    bool operator==(const MultiStackElem& o) const {
        return nsym == o.nsym && m == o.m && k == o.k && table == o.table;
    }
    bool operator<(const MultiStackElem& o) const {
        return std::tie(nsym, m, k, table) < std::tie(o.nsym, o.m, o.k, o.table);
    }
};

template <class X>
std::set<std::pair<X, StackTuple>> multistack_apply(const MultiStackElem<X>& e,
                                                    const StackTuple& s) {
    StackTuple key(e.m);
    StackTuple rest(e.m);
    for (int i = 0; i < e.m; i++) {
        if (static_cast<int>(s[i].size()) >= e.k) {
            key[i] = s[i].substr(0, e.k);
            rest[i] = s[i].substr(e.k);
        } else {
            key[i] = s[i];
        }
    }
    std::set<std::pair<X, StackTuple>> out;
    for (const auto& [x, t] : e.table.at(key)) {
        StackTuple t2(e.m);
        for (int i = 0; i < e.m; i++) t2[i] = t[i] + rest[i];
        out.emplace(x, std::move(t2));
    }
    return out;
}

template <class X>
MultiStackElem<X> multistack_minimize(MultiStackElem<X> e) {
    for (int k0 = 0; k0 < e.k; k0++) {
        bool ok = true;
        for (const auto& [w, v] : e.table) {
            StackTuple w0(e.m), rest(e.m);
            bool trunc = false;
            for (int i = 0; i < e.m; i++) {
                if (static_cast<int>(w[i].size()) > k0) {
                    w0[i] = w[i].substr(0, k0);
                    rest[i] = w[i].substr(k0);
                    trunc = true;
                } else {
                    w0[i] = w[i];
                }
            }
            if (!trunc) continue;
            std::set<std::pair<X, StackTuple>> want;
            for (const auto& [x, t] : e.table.at(w0)) {
                StackTuple t2(e.m);
                for (int i = 0; i < e.m; i++) t2[i] = t[i] + rest[i];
                want.emplace(x, std::move(t2));
            }
            if (v != want) {
                ok = false;
                break;
            }
        }
        if (ok) {
            MultiStackElem<X> out;
            out.nsym = e.nsym;
            out.m = e.m;
            out.k = k0;
            for (const auto& [w, v] : e.table) {
                bool keep = true;
                for (const std::string& wi : w)
                    if (static_cast<int>(wi.size()) > k0) keep = false;
                if (keep) out.table.emplace(w, v);
            }
            return out;
        }
    }
    return e;
}

template <class X>
bool multistack_equal(const MultiStackElem<X>& a, const MultiStackElem<X>& b) {
    return multistack_minimize(a) == multistack_minimize(b);
}

template <class X>
MultiStackElem<X> multistack_unit(const X& x, int nsym, int m) {
    MultiStackElem<X> e;
    e.nsym = nsym;
    e.m = m;
    e.table[StackTuple(m)] = {{x, StackTuple(m)}};
    return e;
}

template <class X>
MultiStackElem<X> multistack_empty(int nsym, int m) {
    MultiStackElem<X> e;
    e.nsym = nsym;
    e.m = m;
    e.table[StackTuple(m)] = {};
    return e;
}

template <class X>
MultiStackElem<X> multistack_plus(const MultiStackElem<X>& a, const MultiStackElem<X>& b) {
    MultiStackElem<X> out;
    out.nsym = a.nsym;
    out.m = a.m;
    out.k = std::max(a.k, b.k);
    for (const StackTuple& w : all_tuple_keys(a.nsym, a.m, out.k)) {
        auto s = multistack_apply(a, w);
        auto t = multistack_apply(b, w);
        s.insert(t.begin(), t.end());
        out.table.emplace(w, std::move(s));
    }
    return multistack_minimize(std::move(out));
}

template <class X, class Y>
MultiStackElem<Y> multistack_kleisli(const std::function<MultiStackElem<Y>(const X&)>& f,
                                     const MultiStackElem<X>& p) {
    int kf = 0;
    std::map<X, MultiStackElem<Y>> fx;
    for (const auto& [w, v] : p.table)
        for (const auto& [x, t] : v)
            if (!fx.count(x)) {
                fx.emplace(x, f(x));
                kf = std::max(kf, fx.at(x).k);
            }
    int k2 = p.k + kf;
    check_bound_cap(k2, "multistack_kleisli");
    MultiStackElem<Y> out;
    out.nsym = p.nsym;
    out.m = p.m;
    out.k = k2;
    for (const StackTuple& w : all_tuple_keys(p.nsym, p.m, k2)) {
        std::set<std::pair<Y, StackTuple>> acc;
        for (const auto& [x, s1] : multistack_apply(p, w)) {
            auto next = multistack_apply(fx.at(x), s1);
            acc.insert(next.begin(), next.end());
        }
        out.table.emplace(w, std::move(acc));
    }
    return multistack_minimize(std::move(out));
}

// pop on stack index i; one branch per symbol plus the empty-stack branch.
template <class X>
MultiStackElem<X> multistack_pop(int stack, const std::vector<MultiStackElem<X>>& branches,
                                 const MultiStackElem<X>& on_empty) {
    int nsym = on_empty.nsym;
    int m = on_empty.m;
    int k2 = 1;
    for (const auto& b : branches) k2 = std::max(k2, b.k + 1);
    k2 = std::max(k2, on_empty.k);
    check_bound_cap(k2, "multistack_pop");
    MultiStackElem<X> out;
    out.nsym = nsym;
    out.m = m;
    out.k = k2;
    for (const StackTuple& w : all_tuple_keys(nsym, m, k2)) {
        if (w[stack].empty()) {
            out.table.emplace(w, multistack_apply(on_empty, w));
        } else {
            StackTuple w2 = w;
            int sym = static_cast<unsigned char>(w2[stack][0]);
            w2[stack] = w2[stack].substr(1);
            out.table.emplace(w, multistack_apply(branches[sym], w2));
        }
    }
    return multistack_minimize(std::move(out));
}

template <class X>
MultiStackElem<X> multistack_push(int stack, int sym, const MultiStackElem<X>& cont) {
    int k2 = cont.k;
    check_bound_cap(k2, "multistack_push");
    MultiStackElem<X> out;
    out.nsym = cont.nsym;
    out.m = cont.m;
    out.k = k2;
    for (const StackTuple& w : all_tuple_keys(cont.nsym, cont.m, k2)) {
        StackTuple w2 = w;
        w2[stack] = std::string(1, static_cast<char>(sym)) + w2[stack];
        out.table.emplace(w, multistack_apply(cont, w2));
    }
    return multistack_minimize(std::move(out));
}

// ---------------------------------------------------------------------------
// Tape monad: head-relative windows of radius k. An element reads the window
// of 2k+1 cells around the head, rewrites it, and shifts the head by at most k.
// ---------------------------------------------------------------------------

template <class X>
struct TapeElem {
    int nsym = 1;  // includes the blank symbol
    int k = 0;     // radius
    // window (length 2k+1) -> (result, head shift in [-k,k], new window)
    std::map<std::string, std::tuple<X, int, std::string>> table;

    bool operator==(const TapeElem& o) const {
        return nsym == o.nsym && k == o.k && table == o.table;
    }
    bool operator<(const TapeElem& o) const {
        return std::tie(nsym, k, table) < std::tie(o.nsym, o.k, o.table);
    }
};

// Run e on a window buffer with the head at index h; rewrites buf in place and
// moves h. Requires h +- e.k in range.
template <class X>
X tape_run(const TapeElem<X>& e, std::string& buf, int& h) {
    std::string w = buf.substr(h - e.k, 2 * e.k + 1);
    const auto& [x, shift, neww] = e.table.at(w);
    for (int i = 0; i < 2 * e.k + 1; i++) buf[h - e.k + i] = neww[i];
    h += shift;
    return x;
}

template <class X>
TapeElem<X> tape_minimize(TapeElem<X> e) {
    for (int k0 = 0; k0 < e.k; k0++) {
        std::map<std::string, std::tuple<X, int, std::string>> cand;
        bool ok = true;
        for (const auto& [w, v] : e.table) {
            const auto& [x, shift, neww] = v;
            if (shift < -k0 || shift > k0) {
                ok = false;
                break;
            }
            std::string c = w.substr(e.k - k0, 2 * k0 + 1);
            std::string nc = neww.substr(e.k - k0, 2 * k0 + 1);
            // outside the smaller window the tape must be untouched
            if (neww.substr(0, e.k - k0) != w.substr(0, e.k - k0) ||
                neww.substr(e.k + k0 + 1) != w.substr(e.k + k0 + 1)) {
                ok = false;
                break;
            }
            auto it = cand.find(c);
            if (it == cand.end())
                cand.emplace(c, std::make_tuple(x, shift, nc));
            else if (!(std::get<0>(it->second) == x) || std::get<1>(it->second) != shift ||
                     std::get<2>(it->second) != nc) {
                ok = false;
                break;
            }
        }
        if (ok) {
            TapeElem<X> out;
            out.nsym = e.nsym;
            out.k = k0;
            out.table = std::move(cand);
            return out;
        }
    }
    return e;
}

template <class X>
bool tape_equal(const TapeElem<X>& a, const TapeElem<X>& b) {
    return tape_minimize(a) == tape_minimize(b);
}

template <class X>
TapeElem<X> tape_unit(const X& x, int nsym) {
    TapeElem<X> e;
    e.nsym = nsym;
    for (const std::string& w : all_strings(nsym, 1))
        e.table.emplace(w, std::make_tuple(x, 0, w));
    return e;
}

template <class X, class Y>
TapeElem<Y> tape_kleisli(const std::function<TapeElem<Y>(const X&)>& f, const TapeElem<X>& p) {
    int kf = 0;
    std::map<X, TapeElem<Y>> fx;
    for (const auto& [w, v] : p.table)
        if (!fx.count(std::get<0>(v))) {
            fx.emplace(std::get<0>(v), f(std::get<0>(v)));
            kf = std::max(kf, fx.at(std::get<0>(v)).k);
        }
    int k2 = p.k + kf;
    check_bound_cap(k2, "tape_kleisli");
    TapeElem<Y> out;
    out.nsym = p.nsym;
    out.k = k2;
    for (const std::string& w : all_strings(p.nsym, 2 * k2 + 1)) {
        std::string buf = w;
        int h = k2;
        X x = tape_run(p, buf, h);
        Y y = tape_run(fx.at(x), buf, h);
        out.table.emplace(w, std::make_tuple(y, h - k2, buf));
    }
    return tape_minimize(std::move(out));
}

// Theory operations: read branches on the scanned symbol; write_c overwrites
// it; lmove/rmove shift the head.
template <class X>
TapeElem<X> tape_read(const std::vector<TapeElem<X>>& branches) {
    int nsym = static_cast<int>(branches.size());
    int k2 = 0;
    for (const auto& b : branches) k2 = std::max(k2, b.k);
    check_bound_cap(k2, "tape_read");
    TapeElem<X> out;
    out.nsym = nsym;
    out.k = k2;
    for (const std::string& w : all_strings(nsym, 2 * k2 + 1)) {
        std::string buf = w;
        int h = k2;
        X x = tape_run(branches[static_cast<unsigned char>(w[k2])], buf, h);
        out.table.emplace(w, std::make_tuple(x, h - k2, buf));
    }
    return tape_minimize(std::move(out));
}

template <class X>
TapeElem<X> tape_write(int sym, const TapeElem<X>& cont) {
    int k2 = std::max(cont.k, 0);
    check_bound_cap(k2, "tape_write");
    TapeElem<X> out;
    out.nsym = cont.nsym;
    out.k = k2;
    for (const std::string& w : all_strings(cont.nsym, 2 * k2 + 1)) {
        std::string buf = w;
        buf[k2] = static_cast<char>(sym);
        int h = k2;
        X x = tape_run(cont, buf, h);
        out.table.emplace(w, std::make_tuple(x, h - k2, buf));
    }
    return tape_minimize(std::move(out));
}

template <class X>
TapeElem<X> tape_move(int dir, const TapeElem<X>& cont) {  // dir: -1 left, +1 right
    int k2 = cont.k + 1;
    check_bound_cap(k2, "tape_move");
    TapeElem<X> out;
    out.nsym = cont.nsym;
    out.k = k2;
    for (const std::string& w : all_strings(cont.nsym, 2 * k2 + 1)) {
        std::string buf = w;
        int h = k2 + dir;
        X x = tape_run(cont, buf, h);
        out.table.emplace(w, std::make_tuple(x, h - k2, buf));
    }
    return tape_minimize(std::move(out));
}

// ---------------------------------------------------------------------------
// Bounded predicates: the output objects B for stack / multi-stack / tape
// automata. Equality is equality of minimized tables.
// ---------------------------------------------------------------------------

struct StackPred {
    int nsym = 1;
    int k = 0;
    std::map<std::string, bool> table;

    bool operator==(const StackPred& o) const = default;
    bool operator<(const StackPred& o) const {
        return std::tie(nsym, k, table) < std::tie(o.nsym, o.k, o.table);
    }
};

inline bool stackpred_apply(const StackPred& p, const std::string& s) {
    if (static_cast<int>(s.size()) >= p.k) return p.table.at(s.substr(0, p.k));
    return p.table.at(s);
}

inline StackPred stackpred_minimize(StackPred p) {
    for (int k0 = 0; k0 < p.k; k0++) {
        bool ok = true;
        for (const auto& [w, v] : p.table) {
            if (static_cast<int>(w.size()) <= k0) continue;
            if (v != p.table.at(w.substr(0, k0))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            StackPred out;
            out.nsym = p.nsym;
            out.k = k0;
            for (const auto& [w, v] : p.table)
                if (static_cast<int>(w.size()) <= k0) out.table.emplace(w, v);
            return out;
        }
    }
    return p;
}

inline StackPred stackpred_const(bool b, int nsym) {
    StackPred p;
    p.nsym = nsym;
    p.table[""] = b;
    return p;
}

struct MultiStackPred {
    int nsym = 1;
    int m = 1;
    int k = 0;
    std::map<StackTuple, bool> table;

    bool operator==(const MultiStackPred& o) const = default;
    bool operator<(const MultiStackPred& o) const {
        return std::tie(nsym, m, k, table) < std::tie(o.nsym, o.m, o.k, o.table);
    }
};

inline bool multistackpred_apply(const MultiStackPred& p, const StackTuple& s) {
    StackTuple key(p.m);
    for (int i = 0; i < p.m; i++)
        key[i] = static_cast<int>(s[i].size()) >= p.k ? s[i].substr(0, p.k) : s[i];
    return p.table.at(key);
}

inline MultiStackPred multistackpred_minimize(MultiStackPred p) {
    for (int k0 = 0; k0 < p.k; k0++) {
        bool ok = true;
        for (const auto& [w, v] : p.table) {
            StackTuple w0(p.m);
            bool trunc = false;
            for (int i = 0; i < p.m; i++) {
                w0[i] = static_cast<int>(w[i].size()) > k0 ? w[i].substr(0, k0) : w[i];
                trunc |= w0[i] != w[i];
            }
            if (trunc && v != p.table.at(w0)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            MultiStackPred out;
            out.nsym = p.nsym;
            out.m = p.m;
            out.k = k0;
            for (const auto& [w, v] : p.table) {
                bool keep = true;
                for (const std::string& wi : w)
                    if (static_cast<int>(wi.size()) > k0) keep = false;
                if (keep) out.table.emplace(w, v);
            }
            return out;
        }
    }
    return p;
}

inline MultiStackPred multistackpred_const(bool b, int nsym, int m) {
    MultiStackPred p;
    p.nsym = nsym;
    p.m = m;
    p.table[StackTuple(m)] = b;
    return p;
}

struct WindowPred {
    int nsym = 1;
    int k = 0;
    std::map<std::string, bool> table;  // windows of length 2k+1

    bool operator==(const WindowPred& o) const = default;
    bool operator<(const WindowPred& o) const {
        return std::tie(nsym, k, table) < std::tie(o.nsym, o.k, o.table);
    }
};

inline WindowPred windowpred_minimize(WindowPred p) {
    for (int k0 = 0; k0 < p.k; k0++) {
        std::map<std::string, bool> cand;
        bool ok = true;
        for (const auto& [w, v] : p.table) {
            std::string c = w.substr(p.k - k0, 2 * k0 + 1);
            auto it = cand.find(c);
            if (it == cand.end())
                cand.emplace(c, v);
            else if (it->second != v) {
                ok = false;
                break;
            }
        }
        if (ok) {
            WindowPred out;
            out.nsym = p.nsym;
            out.k = k0;
            out.table = std::move(cand);
            return out;
        }
    }
    return p;
}

inline WindowPred windowpred_const(bool b, int nsym) {
    WindowPred p;
    p.nsym = nsym;
    for (const std::string& w : all_strings(nsym, 1)) p.table.emplace(w, b);
    return p;
}

// ---------------------------------------------------------------------------
// Output-algebra evaluation a(Tf(t)): map each result through f into a bounded
// predicate and compose with the element's storage action.
// ---------------------------------------------------------------------------

template <class X>
StackPred stack_algebra_map(const StackElem<X>& e,
                            const std::function<StackPred(const X&)>& f) {
    int kf = 0;
    std::map<X, StackPred> fx;
    for (const auto& [w, v] : e.table)
        if (!fx.count(v.first)) {
            fx.emplace(v.first, f(v.first));
            kf = std::max(kf, fx.at(v.first).k);
        }
    int k2 = e.k + kf;
    check_bound_cap(k2, "stack_algebra_map");
    StackPred out;
    out.nsym = e.nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(e.nsym, k2)) {
        auto [x, s1] = stack_apply(e, w);
        out.table.emplace(w, stackpred_apply(fx.at(x), s1));
    }
    return stackpred_minimize(std::move(out));
}

template <class X>
StackPred ndstack_algebra_map(const NdStackElem<X>& e,
                              const std::function<StackPred(const X&)>& f) {
    int kf = 0;
    std::map<X, StackPred> fx;
    for (const auto& [w, v] : e.table)
        for (const auto& [x, t] : v)
            if (!fx.count(x)) {
                fx.emplace(x, f(x));
                kf = std::max(kf, fx.at(x).k);
            }
    int k2 = e.k + kf;
    check_bound_cap(k2, "ndstack_algebra_map");
    StackPred out;
    out.nsym = e.nsym;
    out.k = k2;
    for (const std::string& w : all_prefix_keys(e.nsym, k2)) {
        bool any = false;
        for (const auto& [x, s1] : ndstack_apply(e, w))
            if (stackpred_apply(fx.at(x), s1)) any = true;
        out.table.emplace(w, any);
    }
    return stackpred_minimize(std::move(out));
}

template <class X>
MultiStackPred multistack_algebra_map(const MultiStackElem<X>& e,
                                      const std::function<MultiStackPred(const X&)>& f) {
    int kf = 0;
    std::map<X, MultiStackPred> fx;
    for (const auto& [w, v] : e.table)
        for (const auto& [x, t] : v)
            if (!fx.count(x)) {
                fx.emplace(x, f(x));
                kf = std::max(kf, fx.at(x).k);
            }
    int k2 = e.k + kf;
    check_bound_cap(k2, "multistack_algebra_map");
    MultiStackPred out;
    out.nsym = e.nsym;
    out.m = e.m;
    out.k = k2;
    for (const StackTuple& w : all_tuple_keys(e.nsym, e.m, k2)) {
        bool any = false;
        for (const auto& [x, s1] : multistack_apply(e, w))
            if (multistackpred_apply(fx.at(x), s1)) any = true;
        out.table.emplace(w, any);
    }
    return multistackpred_minimize(std::move(out));
}

template <class X>
WindowPred tape_algebra_map(const TapeElem<X>& e,
                            const std::function<WindowPred(const X&)>& f) {
    int kf = 0;
    std::map<X, WindowPred> fx;
    for (const auto& [w, v] : e.table)
        if (!fx.count(std::get<0>(v))) {
            fx.emplace(std::get<0>(v), f(std::get<0>(v)));
            kf = std::max(kf, fx.at(std::get<0>(v)).k);
        }
    int k2 = e.k + kf;
    check_bound_cap(k2, "tape_algebra_map");
    WindowPred out;
    out.nsym = e.nsym;
    out.k = k2;
    for (const std::string& w : all_strings(e.nsym, 2 * k2 + 1)) {
        std::string buf = w;
        int h = k2;
        X x = tape_run(e, buf, h);
        const WindowPred& p = fx.at(x);
        out.table.emplace(w, p.table.at(buf.substr(h - p.k, 2 * p.k + 1)));
    }
    return windowpred_minimize(std::move(out));
}

}  // namespace taut
