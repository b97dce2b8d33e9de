#include "doctest.h"
#include "taut/lincomb.hpp"

#include <random>

using namespace taut;

namespace {

Scalar rand_coeff(const SemiringOps& sr, std::mt19937& rng) {
    if (sr.name == "bool") return static_cast<bool>(rng() & 1);
    if (sr.name == "nat") return static_cast<uint64_t>(rng() % 5);
    if (sr.name == "real") return (rng() % 400) / 100.0;
    PolySet s;
    if (rng() % 2) s.push_back(PolyElem::identity());
    if (rng() % 2) {
        PolyElem p;
        p.pos += static_cast<char>(rng() % sr.poly_rank);
        s.push_back(p);
    }
    return polyset_normalize(std::move(s));
}

LinComb<int> rand_comb(const SemiringOps& sr, std::mt19937& rng, int basis) {
    std::vector<std::pair<Scalar, int>> raw;
    int n = rng() % 4;
    for (int i = 0; i < n; i++) raw.emplace_back(rand_coeff(sr, rng), rng() % basis);
    return lincomb_normalize(raw, sr);
}

bool comb_eq(const LinComb<int>& a, const LinComb<int>& b, const SemiringOps& sr) {
    if (sr.name != "real") return a == b;
    auto keys = a.coef;
    for (const auto& [k, v] : b.coef) keys.emplace(k, sr.zero);
    for (const auto& [k, v] : keys) {
        Scalar x = a.coef.count(k) ? a.coef.at(k) : sr.zero;
        Scalar y = b.coef.count(k) ? b.coef.at(k) : sr.zero;
        if (!sr.eq(x, y)) return false;
    }
    return true;
}

void kleisli_laws(const SemiringOps& sr, int cases) {
    std::mt19937 rng(7);
    for (int i = 0; i < cases; i++) {
        // random f, g : int -> LinComb<int> over a small basis
        std::map<int, LinComb<int>> ftab, gtab;
        for (int x = 0; x < 4; x++) {
            ftab[x] = rand_comb(sr, rng, 4);
            gtab[x] = rand_comb(sr, rng, 4);
        }
        std::function<LinComb<int>(const int&)> f = [&](const int& x) { return ftab[x]; };
        std::function<LinComb<int>(const int&)> g = [&](const int& x) { return gtab[x]; };
        LinComb<int> p = rand_comb(sr, rng, 4);
        std::function<LinComb<int>(const int&)> eta = [&](const int& x) {
            return lincomb_unit(x, sr);
        };
        // unit laws
        CHECK(comb_eq(lincomb_kleisli(eta, p, sr), p, sr));
        int x0 = rng() % 4;
        CHECK(comb_eq(lincomb_kleisli(f, lincomb_unit(x0, sr), sr), f(x0), sr));
        // associativity: (f* . g)* = f* . g*
        std::function<LinComb<int>(const int&)> fg = [&](const int& x) {
            return lincomb_kleisli(f, g(x), sr);
        };
        CHECK(comb_eq(lincomb_kleisli(fg, p, sr),
                      lincomb_kleisli(f, lincomb_kleisli(g, p, sr), sr), sr));
    }
}

}  // namespace

TEST_CASE("normalize") {
    SemiringOps nat = nat_semiring();
    auto c = lincomb_normalize<std::string>({{uint64_t{2}, "x"}, {uint64_t{3}, "x"}}, nat);
    REQUIRE(c.coef.size() == 1);
    CHECK(std::get<uint64_t>(c.coef.at("x")) == 5);
    CHECK(lincomb_normalize<std::string>({{uint64_t{0}, "x"}}, nat).coef.empty());
    auto one = lincomb_normalize<std::string>({{uint64_t{1}, "x"}}, nat);
    CHECK(one == lincomb_unit<std::string>("x", nat));
}

TEST_CASE("semimodule kleisli basics") {
    SemiringOps nat = nat_semiring();
    LinComb<std::string> p =
        lincomb_normalize<std::string>({{uint64_t{2}, "x"}, {uint64_t{3}, "y"}}, nat);
    std::function<LinComb<std::string>(const std::string&)> f =
        [&](const std::string&) { return lincomb_unit<std::string>("z", nat); };
    auto r = lincomb_kleisli(f, p, nat);
    REQUIRE(r.coef.size() == 1);
    CHECK(std::get<uint64_t>(r.coef.at("z")) == 5);
    CHECK(lincomb_kleisli(f, LinComb<std::string>{}, nat).coef.empty());
}

TEST_CASE("kleisli triple laws, all semirings") {
    kleisli_laws(bool_semiring(), 260);
    kleisli_laws(nat_semiring(), 260);
    kleisli_laws(real_semiring(), 260);
    kleisli_laws(polyset_semiring(2), 150);
}

TEST_CASE("powerset ops and iso with bool lincomb") {
    std::set<int> p{1, 2};
    std::function<std::set<int>(const int&)> f = [](const int& x) {
        return x == 1 ? std::set<int>{5} : std::set<int>{5, 6};
    };
    CHECK(powerset_kleisli(f, p) == std::set<int>{5, 6});
    CHECK(powerset_kleisli(f, std::set<int>{}).empty());
    CHECK(powerset_unit(3) == std::set<int>{3});

    SemiringOps b = bool_semiring();
    std::mt19937 rng(3);
    for (int i = 0; i < 200; i++) {
        std::set<int> s;
        for (int x = 0; x < 5; x++)
            if (rng() % 2) s.insert(x);
        CHECK(lincomb_to_set(set_to_lincomb(s)) == s);
        // kleisli agrees through the iso
        LinComb<int> l = set_to_lincomb(s);
        std::function<LinComb<int>(const int&)> fl = [&](const int& x) {
            return set_to_lincomb(f(x % 2 + 1));
        };
        std::function<std::set<int>(const int&)> fs = [&](const int& x) {
            return f(x % 2 + 1);
        };
        CHECK(lincomb_to_set(lincomb_kleisli(fl, l, b)) == powerset_kleisli(fs, s));
    }
}
