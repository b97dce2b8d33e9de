#include "doctest.h"
#include "taut/term.hpp"

#include <cstdint>

using namespace taut;

TEST_CASE("sexpr round trip") {
    SExpr e = sexpr_parse("(f (var x) (g) atom)");
    CHECK(e.head() == "f");
    CHECK(e.size() == 4);
    CHECK(sexpr_print(e) == "(f (var x) (g) atom)");
    CHECK_THROWS_AS(sexpr_parse("(f"), ParseError);
    CHECK_THROWS_AS(sexpr_parse("(f) junk"), ParseError);
    CHECK(sexpr_parse("; comment\n(a)").head() == "a");
}

TEST_CASE("check_arity") {
    Signature sig;
    sig.ops = {{"f", 2}, {"c", 0}};
    CHECK(!check_arity(sig, term_parse("(f (var x) (var y))")));
    CHECK(!check_arity(sig, term_parse("(c)")));
    auto bad = check_arity(sig, term_parse("(f (var x))"));
    REQUIRE(bad.has_value());
    CHECK(bad->find("f expects 2") != std::string::npos);
    CHECK(check_arity(sig, term_parse("(g)")).has_value());
    // offending node path points below the root
    auto nested = check_arity(sig, term_parse("(f (var x) (f (c)))"));
    REQUIRE(nested.has_value());
    CHECK(nested->find("/f.1") != std::string::npos);
}

TEST_CASE("substitute") {
    Term t = term_parse("(f (var x) (var y))");
    std::map<std::string, Term> sigma{{"x", term_parse("(c)")}};
    CHECK(term_print(substitute(t, sigma)) == "(f (c) (var y))");
    // simultaneous, not iterated
    std::map<std::string, Term> rec{{"x", term_parse("(f (var x) (var x))")}};
    CHECK(term_print(substitute(Term::var("x"), rec)) == "(f (var x) (var x))");
    CHECK(substitute(t, {}) == t);
    // composition on disjoint variables
    std::map<std::string, Term> rho{{"y", term_parse("(c)")}};
    std::map<std::string, Term> both{{"x", term_parse("(c)")}, {"y", term_parse("(c)")}};
    CHECK(substitute(substitute(t, sigma), rho) == substitute(t, both));
}

TEST_CASE("evaluate") {
    std::function<bool(const std::string&, const std::vector<bool>&)> orI =
        [](const std::string& f, const std::vector<bool>& as) {
            bool v = false;
            for (bool a : as) v = v || a;
            return v;
        };
    std::function<bool(const std::string&)> env = [](const std::string& x) { return x == "y"; };
    CHECK(evaluate<bool>(term_parse("(plus (var x) (var y))"), orI, env) == true);
    CHECK(evaluate<bool>(term_parse("(var x)"), orI, env) == false);

    // r2(x) + r3(x) at x=1 over nat is 5
    std::function<uint64_t(const std::string&, const std::vector<uint64_t>&)> natI =
        [](const std::string& f, const std::vector<uint64_t>& as) -> uint64_t {
        if (f == "plus") return as[0] + as[1];
        if (f == "r2") return 2 * as[0];
        if (f == "r3") return 3 * as[0];
        throw std::runtime_error("unknown op " + f);
    };
    std::function<uint64_t(const std::string&)> one = [](const std::string&) -> uint64_t {
        return 1;
    };
    CHECK(evaluate<uint64_t>(term_parse("(plus (r2 (var x)) (r3 (var x)))"), natI, one) == 5);
}

TEST_CASE("evaluate commutes with substitute") {
    std::function<uint64_t(const std::string&, const std::vector<uint64_t>&)> natI =
        [](const std::string& f, const std::vector<uint64_t>& as) -> uint64_t {
        if (f == "plus") return as[0] + as[1];
        if (f == "c") return 7;
        throw std::runtime_error("unknown op " + f);
    };
    Term t = term_parse("(plus (var x) (plus (var y) (c)))");
    std::map<std::string, Term> sigma{{"x", term_parse("(plus (var y) (var y))")}};
    std::function<uint64_t(const std::string&)> env = [](const std::string& x) -> uint64_t {
        return x == "y" ? 3 : 100;
    };
    std::function<uint64_t(const std::string&)> env2 = [&](const std::string& x) -> uint64_t {
        auto it = sigma.find(x);
        if (it != sigma.end()) return evaluate<uint64_t>(it->second, natI, env);
        return env(x);
    };
    CHECK(evaluate<uint64_t>(substitute(t, sigma), natI, env) ==
          evaluate<uint64_t>(t, natI, env2));
}
