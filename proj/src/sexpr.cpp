#include "taut/sexpr.hpp"

#include <cctype>

namespace taut {

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size()) {
            char c = s[pos];
            if (c == ';') {  // comment to end of line
                while (pos < s.size() && s[pos] != '\n') pos++;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                pos++;
            } else {
                break;
            }
        }
    }

    bool done() {
        skip_ws();
        return pos >= s.size();
    }

    SExpr next() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            pos++;
            SExpr list = SExpr::make_list();
            while (true) {
                skip_ws();
                if (pos >= s.size()) throw ParseError("missing ')'");
                if (s[pos] == ')') {
                    pos++;
                    return list;
                }
                list.items.push_back(next());
            }
        }
        if (c == ')') throw ParseError("unexpected ')' at offset " + std::to_string(pos));
        if (c == '"') {  // quoted atom, for symbol strings like "γγ'"
            pos++;
            std::string text;
            while (pos < s.size() && s[pos] != '"') text += s[pos++];
            if (pos >= s.size()) throw ParseError("unterminated string");
            pos++;
            return SExpr::make_atom(text);
        }
        std::string text;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')' && s[pos] != ';') {
            text += s[pos++];
        }
        return SExpr::make_atom(text);
    }
};

bool needs_quotes(const std::string& a) {
    if (a.empty()) return true;
    for (char c : a) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' ||
            c == ';')
            return true;
    }
    return false;
}

}  // namespace

SExpr sexpr_parse(const std::string& input) {
    Cursor cur{input};
    SExpr e = cur.next();
    if (!cur.done()) throw ParseError("trailing input after s-expression");
    return e;
}

std::vector<SExpr> sexpr_parse_all(const std::string& input) {
    Cursor cur{input};
    std::vector<SExpr> out;
    while (!cur.done()) out.push_back(cur.next());
    return out;
}

std::string sexpr_print(const SExpr& e) {
    if (e.atom) {
        if (needs_quotes(e.text)) return "\"" + e.text + "\"";
        return e.text;
    }
    std::string out = "(";
    for (size_t i = 0; i < e.items.size(); i++) {
        if (i) out += ' ';
        out += sexpr_print(e.items[i]);
    }
    out += ')';
    return out;
}

}  // namespace taut
