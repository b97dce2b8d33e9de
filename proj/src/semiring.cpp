#include "taut/semiring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace taut {

PolyElem poly_mul(const PolyElem& p, const PolyElem& q) {
    if (p.zero || q.zero) return PolyElem::make_zero();
    // interface between p's positive word and q's negative word
    std::string pos = p.pos, neg = q.neg;
    size_t cut = 0;
    while (!pos.empty() && cut < neg.size()) {
        if (pos.back() != neg[cut]) return PolyElem::make_zero();
        pos.pop_back();
        cut++;
    }
    PolyElem r;
    r.neg = p.neg + neg.substr(cut);
    r.pos = pos + q.pos;
    return r;
}

PolySet polyset_normalize(PolySet s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](const PolyElem& p) { return p.zero; }),
            s.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

namespace {

template <class T>
const T& as(const Scalar& s, const char* what) {
    if (!std::holds_alternative<T>(s))
        throw std::runtime_error(std::string("scalar is not of type ") + what);
    return std::get<T>(s);
}

}  // namespace

Scalar SemiringOps::add(const Scalar& a, const Scalar& b) const {
    if (name == "bool") return as<bool>(a, "bool") || as<bool>(b, "bool");
    if (name == "nat") return as<uint64_t>(a, "nat") + as<uint64_t>(b, "nat");
    if (name == "real") return as<double>(a, "real") + as<double>(b, "real");
    PolySet u = as<PolySet>(a, "polyset");
    const PolySet& v = as<PolySet>(b, "polyset");
    u.insert(u.end(), v.begin(), v.end());
    return polyset_normalize(std::move(u));
}

Scalar SemiringOps::mul(const Scalar& a, const Scalar& b) const {
    if (name == "bool") return as<bool>(a, "bool") && as<bool>(b, "bool");
    if (name == "nat") return as<uint64_t>(a, "nat") * as<uint64_t>(b, "nat");
    if (name == "real") return as<double>(a, "real") * as<double>(b, "real");
    const PolySet& u = as<PolySet>(a, "polyset");
    const PolySet& v = as<PolySet>(b, "polyset");
    PolySet out;
    for (const PolyElem& x : u)
        for (const PolyElem& y : v) out.push_back(poly_mul(x, y));
    return polyset_normalize(std::move(out));
}

bool SemiringOps::eq(const Scalar& a, const Scalar& b) const {
    if (name == "real")
        return std::fabs(as<double>(a, "real") - as<double>(b, "real")) <= 1e-9;
    return a == b;
}

bool SemiringOps::leq(const Scalar& a, const Scalar& b) const { return eq(add(a, b), b); }

std::string SemiringOps::print(const Scalar& a) const {
    if (name == "bool") return as<bool>(a, "bool") ? "true" : "false";
    if (name == "nat") return std::to_string(as<uint64_t>(a, "nat"));
    if (name == "real") {
        std::ostringstream ss;
        ss << as<double>(a, "real");
        return ss.str();
    }
    const PolySet& s = as<PolySet>(a, "polyset");
    std::string out = "{";
    for (size_t i = 0; i < s.size(); i++) {
        if (i) out += ", ";
        out += poly_print(s[i]);
    }
    return out + "}";
}

Scalar SemiringOps::parse(const std::string& text) const {
    try {
        if (name == "bool") {
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw std::runtime_error("");
        }
        if (name == "nat") return static_cast<uint64_t>(std::stoull(text));
        if (name == "real") return std::stod(text);
        // polyset: {e1, e2, ...} or a single element
        std::string body = text;
        if (!body.empty() && body.front() == '{') {
            if (body.back() != '}') throw std::runtime_error("");
            body = body.substr(1, body.size() - 2);
        }
        PolySet out;
        std::string item;
        std::stringstream ss(body);
        while (std::getline(ss, item, ',')) {
            size_t b = item.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            size_t e = item.find_last_not_of(" \t");
            out.push_back(poly_parse(item.substr(b, e - b + 1), poly_rank));
        }
        return polyset_normalize(std::move(out));
    } catch (std::exception&) {
        throw std::runtime_error("cannot parse '" + text + "' as " + name + " value");
    }
}

SemiringOps bool_semiring() {
    SemiringOps s;
    s.name = "bool";
    s.zero = false;
    s.one = true;
    s.is_idempotent = true;
    return s;
}

SemiringOps nat_semiring() {
    SemiringOps s;
    s.name = "nat";
    s.zero = uint64_t{0};
    s.one = uint64_t{1};
    return s;
}

SemiringOps real_semiring() {
    SemiringOps s;
    s.name = "real";
    s.zero = 0.0;
    s.one = 1.0;
    return s;
}

SemiringOps polyset_semiring(int rank) {
    if (rank < 1) throw std::runtime_error("polyset rank must be >= 1");
    SemiringOps s;
    s.name = "polyset";
    s.poly_rank = rank;
    s.zero = PolySet{};
    s.one = PolySet{PolyElem::identity()};
    s.is_idempotent = true;
    return s;
}

SemiringOps semiring_by_name(const std::string& name) {
    if (name == "bool") return bool_semiring();
    if (name == "nat") return nat_semiring();
    if (name == "real") return real_semiring();
    if (name.rfind("polyset(", 0) == 0 && name.back() == ')')
        return polyset_semiring(std::stoi(name.substr(8, name.size() - 9)));
    if (name == "polyset") return polyset_semiring(2);
    throw std::runtime_error("unknown semiring: " + name);
}

std::string poly_print(const PolyElem& p) {
    if (p.zero) return "0";
    if (p.is_identity()) return "1";
    std::string out;
    for (char c : p.neg) {
        if (!out.empty()) out += ' ';
        out += "g" + std::to_string(c + 1) + "'";
    }
    for (char c : p.pos) {
        if (!out.empty()) out += ' ';
        out += "g" + std::to_string(c + 1);
    }
    return out;
}

PolyElem poly_parse(const std::string& text, int rank) {
    if (text == "0") return PolyElem::make_zero();
    if (text == "1") return PolyElem::identity();
    PolyElem acc;  // multiply generators left to right
    std::stringstream ss(text);
    std::string tok;
    while (ss >> tok) {
        bool inv = tok.back() == '\'';
        if (inv) tok.pop_back();
        if (tok.size() < 2 || tok[0] != 'g')
            throw std::runtime_error("bad polycyclic token: " + tok);
        int idx = std::stoi(tok.substr(1)) - 1;
        if (idx < 0 || idx >= rank)
            throw std::runtime_error("generator index out of range: " + tok);
        PolyElem g;
        (inv ? g.neg : g.pos) += static_cast<char>(idx);
        acc = poly_mul(acc, g);
    }
    return acc;
}

}  // namespace taut
