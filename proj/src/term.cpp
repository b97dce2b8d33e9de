#include "taut/term.hpp"

#include <set>

namespace taut {

namespace {

std::optional<std::string> check_rec(const Signature& sig, const Term& t, std::string path) {
    if (t.is_var) return std::nullopt;
    auto it = sig.ops.find(t.name);
    if (it == sig.ops.end()) return path + ": unknown operation " + t.name;
    if (static_cast<int>(t.args.size()) != it->second)
        return path + ": " + t.name + " expects " + std::to_string(it->second) +
               " arguments, got " + std::to_string(t.args.size());
    for (size_t i = 0; i < t.args.size(); i++) {
        auto r = check_rec(sig, t.args[i], path + "/" + t.name + "." + std::to_string(i));
        if (r) return r;
    }
    return std::nullopt;
}

void vars_rec(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (t.is_var) {
        if (seen.insert(t.name).second) out.push_back(t.name);
        return;
    }
    for (const Term& a : t.args) vars_rec(a, out, seen);
}

}  // namespace

std::optional<std::string> check_arity(const Signature& sig, const Term& t) {
    return check_rec(sig, t, "");
}

Term substitute(const Term& t, const std::map<std::string, Term>& sigma) {
    if (t.is_var) {
        auto it = sigma.find(t.name);
        return it == sigma.end() ? t : it->second;
    }
    Term out = Term::app(t.name);
    out.args.reserve(t.args.size());
    for (const Term& a : t.args) out.args.push_back(substitute(a, sigma));
    return out;
}

std::vector<std::string> term_vars(const Term& t) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    vars_rec(t, out, seen);
    return out;
}

SExpr term_to_sexpr(const Term& t) {
    if (t.is_var)
        return SExpr::make_list({SExpr::make_atom("var"), SExpr::make_atom(t.name)});
    SExpr e = SExpr::make_list({SExpr::make_atom(t.name)});
    for (const Term& a : t.args) e.items.push_back(term_to_sexpr(a));
    return e;
}

Term term_from_sexpr(const SExpr& e) {
    if (e.atom) throw ParseError("term must be a list, got atom '" + e.text + "'");
    if (e.items.empty() || !e.items[0].atom) throw ParseError("term list must start with a name");
    if (e.head() == "var") {
        if (e.size() != 2 || !e[1].atom) throw ParseError("(var x) takes one atom");
        return Term::var(e[1].text);
    }
    Term t = Term::app(e.head());
    for (size_t i = 1; i < e.size(); i++) t.args.push_back(term_from_sexpr(e[i]));
    return t;
}

std::string term_print(const Term& t) { return sexpr_print(term_to_sexpr(t)); }

Term term_parse(const std::string& s) { return term_from_sexpr(sexpr_parse(s)); }

}  // namespace taut
