#pragma once

// Shared random-element generators for monad-law and locality tests.

#include <random>

#include "taut/storemonad.hpp"

namespace taut::gen {

inline StackElem<int> rand_stack(std::mt19937& rng, int nsym, int maxk, int carrier) {
    StackElem<int> e;
    e.nsym = nsym;
    e.k = static_cast<int>(rng() % (maxk + 1));
    for (const std::string& w : all_prefix_keys(nsym, e.k)) {
        int len = static_cast<int>(rng() % (e.k + 2));
        std::string t;
        for (int i = 0; i < len; i++) t += static_cast<char>(rng() % nsym);
        e.table.emplace(w, std::make_pair(static_cast<int>(rng() % carrier), t));
    }
    return e;
}

inline NdStackElem<int> rand_ndstack(std::mt19937& rng, int nsym, int maxk, int carrier) {
    NdStackElem<int> e;
    e.nsym = nsym;
    e.k = static_cast<int>(rng() % (maxk + 1));
    for (const std::string& w : all_prefix_keys(nsym, e.k)) {
        std::set<std::pair<int, std::string>> v;
        int n = static_cast<int>(rng() % 3);
        for (int j = 0; j < n; j++) {
            int len = static_cast<int>(rng() % (e.k + 2));
            std::string t;
            for (int i = 0; i < len; i++) t += static_cast<char>(rng() % nsym);
            v.emplace(static_cast<int>(rng() % carrier), t);
        }
        e.table.emplace(w, std::move(v));
    }
    return e;
}

inline MultiStackElem<int> rand_multistack(std::mt19937& rng, int nsym, int m, int maxk,
                                           int carrier) {
    MultiStackElem<int> e;
    e.nsym = nsym;
    e.m = m;
    e.k = static_cast<int>(rng() % (maxk + 1));
    for (const StackTuple& w : all_tuple_keys(nsym, m, e.k)) {
        std::set<std::pair<int, StackTuple>> v;
        int n = static_cast<int>(rng() % 3);
        for (int j = 0; j < n; j++) {
            StackTuple t(m);
            for (int c = 0; c < m; c++) {
                int len = static_cast<int>(rng() % (e.k + 2));
                for (int i = 0; i < len; i++) t[c] += static_cast<char>(rng() % nsym);
            }
            v.emplace(static_cast<int>(rng() % carrier), std::move(t));
        }
        e.table.emplace(w, std::move(v));
    }
    return e;
}

inline TapeElem<int> rand_tape(std::mt19937& rng, int nsym, int maxk, int carrier) {
    TapeElem<int> e;
    e.nsym = nsym;
    e.k = static_cast<int>(rng() % (maxk + 1));
    for (const std::string& w : all_strings(nsym, 2 * e.k + 1)) {
        std::string neww;
        for (int i = 0; i < 2 * e.k + 1; i++) neww += static_cast<char>(rng() % nsym);
        int shift = e.k == 0 ? 0 : static_cast<int>(rng() % (2 * e.k + 1)) - e.k;
        e.table.emplace(w, std::make_tuple(static_cast<int>(rng() % carrier), shift, neww));
    }
    return e;
}

// Extensional equality probes: run both elements on every storage state up to
// a probe depth beyond both bounds.

inline bool ext_eq_stack(const StackElem<int>& a, const StackElem<int>& b, int extra = 3) {
    if (a.nsym != b.nsym) return false;
    int depth = std::max(a.k, b.k) + extra;
    for (const std::string& s : all_prefix_keys(a.nsym, depth))
        if (stack_apply(a, s) != stack_apply(b, s)) return false;
    return true;
}

inline bool ext_eq_ndstack(const NdStackElem<int>& a, const NdStackElem<int>& b,
                           int extra = 3) {
    if (a.nsym != b.nsym) return false;
    int depth = std::max(a.k, b.k) + extra;
    for (const std::string& s : all_prefix_keys(a.nsym, depth))
        if (ndstack_apply(a, s) != ndstack_apply(b, s)) return false;
    return true;
}

inline bool ext_eq_multistack(const MultiStackElem<int>& a, const MultiStackElem<int>& b,
                              int extra = 2) {
    if (a.nsym != b.nsym || a.m != b.m) return false;
    int depth = std::max(a.k, b.k) + extra;
    for (const StackTuple& s : all_tuple_keys(a.nsym, a.m, depth))
        if (multistack_apply(a, s) != multistack_apply(b, s)) return false;
    return true;
}

inline bool ext_eq_tape(const TapeElem<int>& a, const TapeElem<int>& b, int extra = 2) {
    if (a.nsym != b.nsym) return false;
    int r = std::max(a.k, b.k) + extra;
    for (const std::string& w : all_strings(a.nsym, 2 * r + 1)) {
        std::string ba = w, bb = w;
        int ha = r, hb = r;
        int xa = tape_run(a, ba, ha);
        int xb = tape_run(b, bb, hb);
        if (xa != xb || ha != hb || ba != bb) return false;
    }
    return true;
}

}  // namespace taut::gen
