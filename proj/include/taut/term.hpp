#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "taut/sexpr.hpp"

namespace taut {

// Algebraic signature: operation name -> arity.
struct Signature {
    std::map<std::string, int> ops;

    bool has(const std::string& name) const { return ops.count(name) != 0; }
    int arity(const std::string& name) const {
        auto it = ops.find(name);
        if (it == ops.end()) throw std::runtime_error("unknown operation: " + name);
        return it->second;
    }
};

// First-order term: variable or operation applied to subterms. No binders here.
struct Term {
    bool is_var = false;
    std::string name;  // variable or operation name
    std::vector<Term> args;

    static Term var(std::string x) {
        Term t;
        t.is_var = true;
        t.name = std::move(x);
        return t;
    }
    static Term app(std::string f, std::vector<Term> as = {}) {
        Term t;
        t.name = std::move(f);
        t.args = std::move(as);
        return t;
    }

    bool operator==(const Term& o) const {
        return is_var == o.is_var && name == o.name && args == o.args;
    }
    bool operator<(const Term& o) const {
        if (is_var != o.is_var) return is_var < o.is_var;
        if (name != o.name) return name < o.name;
        return args < o.args;
    }
};

// Well-formedness: every App node matches the signature's arity.
// Returns std::nullopt if ok, otherwise a path description of the first offending node.
std::optional<std::string> check_arity(const Signature& sig, const Term& t);

// Simultaneous substitution; variables outside the map are left alone.
Term substitute(const Term& t, const std::map<std::string, Term>& sigma);

// Variables occurring in t, in encounter order without duplicates.
std::vector<std::string> term_vars(const Term& t);

// Bottom-up evaluation in an arbitrary carrier.
template <class V>
V evaluate(const Term& t,
           const std::function<V(const std::string&, const std::vector<V>&)>& interp,
           const std::function<V(const std::string&)>& env) {
    if (t.is_var) return env(t.name);
    std::vector<V> vals;
    vals.reserve(t.args.size());
    for (const Term& a : t.args) vals.push_back(evaluate<V>(a, interp, env));
    return interp(t.name, vals);
}

// S-expression syntax: `(f t1 ... tn)`, `(var x)`, constants `(c)`.
SExpr term_to_sexpr(const Term& t);
Term term_from_sexpr(const SExpr& e);
std::string term_print(const Term& t);
Term term_parse(const std::string& s);

}  // namespace taut
