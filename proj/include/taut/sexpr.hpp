#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace taut {

// Minimal s-expression values: atoms and lists.
struct SExpr {
    bool atom = false;
    std::string text;          // atom payload
    std::vector<SExpr> items;  // list payload

    static SExpr make_atom(std::string s) {
        SExpr e;
        e.atom = true;
        e.text = std::move(s);
        return e;
    }
    static SExpr make_list(std::vector<SExpr> xs = {}) {
        SExpr e;
        e.items = std::move(xs);
        return e;
    }

    bool is_list() const { return !atom; }
    size_t size() const { return items.size(); }
    const SExpr& operator[](size_t i) const { return items[i]; }

    // head atom of a list, or "" if not applicable
    const std::string& head() const {
        static const std::string empty;
        if (atom || items.empty() || !items[0].atom) return empty;
        return items[0].text;
    }
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse a single s-expression; trailing input is an error.
SExpr sexpr_parse(const std::string& input);

// Parse a sequence of s-expressions (e.g. a whole file).
std::vector<SExpr> sexpr_parse_all(const std::string& input);

std::string sexpr_print(const SExpr& e);

}  // namespace taut
