#pragma once

#include <functional>
#include <map>
#include <set>

#include "taut/semiring.hpp"

namespace taut {

// Free semimodule monad: finite formal linear combinations with nonzero
// coefficients, keyed by ordered basis elements.
template <class K>
struct LinComb {
    std::map<K, Scalar> coef;

    bool operator==(const LinComb& o) const { return coef == o.coef; }
    bool operator<(const LinComb& o) const { return coef < o.coef; }
};

template <class K>
LinComb<K> lincomb_normalize(const std::vector<std::pair<Scalar, K>>& raw,
                             const SemiringOps& sr) {
    LinComb<K> out;
    for (const auto& [c, k] : raw) {
        auto it = out.coef.find(k);
        if (it == out.coef.end())
            out.coef.emplace(k, c);
        else
            it->second = sr.add(it->second, c);
    }
    for (auto it = out.coef.begin(); it != out.coef.end();)
        it = sr.is_zero(it->second) ? out.coef.erase(it) : std::next(it);
    return out;
}

template <class K>
LinComb<K> lincomb_unit(const K& k, const SemiringOps& sr) {
    LinComb<K> out;
    out.coef.emplace(k, sr.one);
    return out;
}

template <class K>
LinComb<K> lincomb_add(const LinComb<K>& a, const LinComb<K>& b, const SemiringOps& sr) {
    std::vector<std::pair<Scalar, K>> raw;
    for (const auto& [k, c] : a.coef) raw.emplace_back(c, k);
    for (const auto& [k, c] : b.coef) raw.emplace_back(c, k);
    return lincomb_normalize(raw, sr);
}

template <class K>
LinComb<K> lincomb_scale(const Scalar& r, const LinComb<K>& a, const SemiringOps& sr) {
    std::vector<std::pair<Scalar, K>> raw;
    for (const auto& [k, c] : a.coef) raw.emplace_back(sr.mul(r, c), k);
    return lincomb_normalize(raw, sr);
}

// Kleisli extension: sum_x p(x) * f(x), renormalized.
template <class K, class K2>
LinComb<K2> lincomb_kleisli(const std::function<LinComb<K2>(const K&)>& f,
                            const LinComb<K>& p, const SemiringOps& sr) {
    std::vector<std::pair<Scalar, K2>> raw;
    for (const auto& [x, c] : p.coef)
        for (const auto& [y, d] : f(x).coef) raw.emplace_back(sr.mul(c, d), y);
    return lincomb_normalize(raw, sr);
}

// Evaluate a combination of semiring values: sum_b p(b) * b.
// This is the free-algebra structure on the semiring itself.
inline Scalar lincomb_eval(const LinComb<Scalar>& p, const SemiringOps& sr) {
    Scalar acc = sr.zero;
    for (const auto& [b, c] : p.coef) acc = sr.add(acc, sr.mul(c, b));
    return acc;
}

// Finite powerset monad (isomorphic to LinComb over the boolean semiring).
template <class K>
std::set<K> powerset_unit(const K& k) {
    return {k};
}

template <class K, class K2>
std::set<K2> powerset_kleisli(const std::function<std::set<K2>(const K&)>& f,
                              const std::set<K>& p) {
    std::set<K2> out;
    for (const K& x : p) {
        std::set<K2> img = f(x);
        out.insert(img.begin(), img.end());
    }
    return out;
}

template <class K>
std::set<K> lincomb_to_set(const LinComb<K>& p) {
    std::set<K> out;
    for (const auto& [k, c] : p.coef)
        if (std::get<bool>(c)) out.insert(k);
    return out;
}

template <class K>
LinComb<K> set_to_lincomb(const std::set<K>& s) {
    LinComb<K> out;
    for (const K& k : s) out.coef.emplace(k, true);
    return out;
}

}  // namespace taut
