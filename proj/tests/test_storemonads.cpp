#include "doctest.h"
#include "gen.hpp"
#include "taut/storemonad.hpp"

#include <random>

using namespace taut;
using namespace taut::gen;

TEST_CASE("stack apply and theory ops") {
    int nsym = 3;  // symbols 0,1,2; call 2 "gamma"
    // push_2 with k=0
    StackElem<int> push2 = stack_push(2, stack_unit(0, nsym));
    auto [x, s] = stack_apply(push2, std::string("\0\1", 2));
    CHECK(x == 0);
    CHECK(s == std::string("\2\0\1", 3));
    CHECK(push2.k == 0);

    // pop with distinct branch results
    std::vector<StackElem<int>> branches{stack_unit(1, nsym), stack_unit(2, nsym),
                                         stack_unit(3, nsym)};
    StackElem<int> pop = stack_pop(branches, stack_unit(9, nsym));
    CHECK(pop.k == 1);
    auto [xe, se] = stack_apply(pop, "");
    CHECK(xe == 9);
    auto [x2, s2] = stack_apply(pop, std::string("\2\0", 2));
    CHECK(x2 == 3);
    CHECK(s2 == std::string("\0", 1));

    // unit leaves everything unchanged
    StackElem<int> u = stack_unit(7, nsym);
    CHECK(stack_apply(u, std::string("\1\2", 2)) ==
          std::make_pair(7, std::string("\1\2", 2)));
    CHECK(u.k == 0);
}

TEST_CASE("stack theory axioms, extensionally") {
    int nsym = 2;
    // carriers: 0..nsym-1 are the x_i, nsym is y
    std::vector<StackElem<int>> xs;
    for (int i = 0; i < nsym; i++) xs.push_back(stack_unit(i, nsym));
    StackElem<int> y = stack_unit(nsym, nsym);
    StackElem<int> pop = stack_pop(xs, y);
    // push_i(pop(x1..xn,y)) = x_i
    for (int i = 0; i < nsym; i++) CHECK(ext_eq_stack(stack_push(i, pop), xs[i]));
    // pop(push_1(x),...,push_n(x),x) = x
    StackElem<int> xcell = stack_unit(5, nsym);
    std::vector<StackElem<int>> pushed;
    for (int i = 0; i < nsym; i++) pushed.push_back(stack_push(i, xcell));
    CHECK(ext_eq_stack(stack_pop(pushed, xcell), xcell));
    // pop(x1..xn, pop(y1..yn, z)) = pop(x1..xn, z)
    std::vector<StackElem<int>> ys{stack_unit(10, nsym), stack_unit(11, nsym)};
    StackElem<int> z = stack_unit(12, nsym);
    CHECK(ext_eq_stack(stack_pop(xs, stack_pop(ys, z)), stack_pop(xs, z)));
}

TEST_CASE("minimize_bound") {
    int nsym = 2;
    // build push artificially at k=3 and watch it collapse to k=0
    StackElem<int> push0 = stack_push(0, stack_unit(1, nsym));
    StackElem<int> fat;
    fat.nsym = nsym;
    fat.k = 3;
    for (const std::string& w : all_prefix_keys(nsym, 3))
        fat.table.emplace(w, stack_apply(push0, w));
    StackElem<int> slim = stack_minimize(fat);
    CHECK(slim.k == 0);
    CHECK(slim == push0);
    CHECK(stack_equal(fat, push0));

    // pop genuinely needs k=1
    StackElem<int> pop = stack_pop({stack_unit(0, nsym), stack_unit(1, nsym)},
                                   stack_unit(2, nsym));
    CHECK(stack_minimize(pop).k == 1);
    CHECK(stack_minimize(stack_unit(4, nsym)).k == 0);
}

TEST_CASE("stack kleisli laws and locality, random") {
    std::mt19937 rng(42);
    int nsym = 2, carrier = 3;
    for (int i = 0; i < 120; i++) {
        std::map<int, StackElem<int>> ft, gt;
        for (int x = 0; x < carrier; x++) {
            ft[x] = rand_stack(rng, nsym, 1, carrier);
            gt[x] = rand_stack(rng, nsym, 1, carrier);
        }
        std::function<StackElem<int>(const int&)> f = [&](const int& x) { return ft[x]; };
        std::function<StackElem<int>(const int&)> g = [&](const int& x) { return gt[x]; };
        std::function<StackElem<int>(const int&)> eta = [&](const int& x) {
            return stack_unit(x, nsym);
        };
        StackElem<int> p = rand_stack(rng, nsym, 1, carrier);
        CHECK(ext_eq_stack(stack_kleisli(eta, p), p));
        int x0 = rng() % carrier;
        CHECK(ext_eq_stack(stack_kleisli(f, stack_unit(x0, nsym)), ft[x0]));
        std::function<StackElem<int>(const int&)> fg = [&](const int& x) {
            return stack_kleisli(f, gt[x]);
        };
        StackElem<int> lhs = stack_kleisli(fg, p);
        StackElem<int> rhs = stack_kleisli(f, stack_kleisli(g, p));
        CHECK(ext_eq_stack(lhs, rhs));
        // composition respects the k_p + k_f locality budget
        int kf = 0;
        for (auto& [k, v] : gt) kf = std::max(kf, v.k);
        CHECK(stack_kleisli(g, p).k <= p.k + kf);
    }
}

TEST_CASE("ndstack ops and kleisli laws") {
    std::mt19937 rng(43);
    int nsym = 2, carrier = 3;
    // nondeterministic pop-or-skip on stack "0": {(pop branch, eps), (skip, "0")}
    NdStackElem<int> popb = ndstack_pop({ndstack_unit(1, nsym), ndstack_unit(2, nsym)},
                                        ndstack_empty<int>(nsym));
    NdStackElem<int> skip = ndstack_unit(7, nsym);
    NdStackElem<int> either = ndstack_plus(popb, skip);
    auto v = ndstack_apply(either, std::string("\0", 1));
    CHECK(v == std::set<std::pair<int, std::string>>{{1, ""}, {7, std::string("\0", 1)}});
    // empty stack: pop branch fails into its empty-alternative (no results)
    auto ve = ndstack_apply(either, "");
    CHECK(ve == std::set<std::pair<int, std::string>>{{7, ""}});

    for (int i = 0; i < 100; i++) {
        std::map<int, NdStackElem<int>> ft, gt;
        for (int x = 0; x < carrier; x++) {
            ft[x] = rand_ndstack(rng, nsym, 1, carrier);
            gt[x] = rand_ndstack(rng, nsym, 1, carrier);
        }
        std::function<NdStackElem<int>(const int&)> f = [&](const int& x) { return ft[x]; };
        std::function<NdStackElem<int>(const int&)> g = [&](const int& x) { return gt[x]; };
        std::function<NdStackElem<int>(const int&)> eta = [&](const int& x) {
            return ndstack_unit(x, nsym);
        };
        NdStackElem<int> p = rand_ndstack(rng, nsym, 1, carrier);
        CHECK(ext_eq_ndstack(ndstack_kleisli(eta, p), p));
        int x0 = rng() % carrier;
        CHECK(ext_eq_ndstack(ndstack_kleisli(f, ndstack_unit(x0, nsym)), ft[x0]));
        std::function<NdStackElem<int>(const int&)> fg = [&](const int& x) {
            return ndstack_kleisli(f, gt[x]);
        };
        CHECK(ext_eq_ndstack(ndstack_kleisli(fg, p),
                             ndstack_kleisli(f, ndstack_kleisli(g, p))));
    }
}

TEST_CASE("multistack ops, tensor law, kleisli laws") {
    std::mt19937 rng(44);
    int nsym = 2, m = 2, carrier = 2;
    // push to stack 0 and push to stack 1 commute (tensor law)
    MultiStackElem<int> u = multistack_unit(0, nsym, m);
    MultiStackElem<int> ab = multistack_push(0, 1, multistack_push(1, 0, u));
    MultiStackElem<int> ba = multistack_push(1, 0, multistack_push(0, 1, u));
    CHECK(ext_eq_multistack(ab, ba));
    // push to stack 0 leaves stack 1 untouched
    auto r = multistack_apply(multistack_push(0, 1, u),
                              StackTuple{std::string("\0", 1), std::string("\1", 1)});
    CHECK(r == std::set<std::pair<int, StackTuple>>{
                   {0, StackTuple{std::string("\1\0", 2), std::string("\1", 1)}}});

    for (int i = 0; i < 40; i++) {
        std::map<int, MultiStackElem<int>> ft, gt;
        for (int x = 0; x < carrier; x++) {
            ft[x] = rand_multistack(rng, nsym, m, 1, carrier);
            gt[x] = rand_multistack(rng, nsym, m, 1, carrier);
        }
        std::function<MultiStackElem<int>(const int&)> f = [&](const int& x) { return ft[x]; };
        std::function<MultiStackElem<int>(const int&)> g = [&](const int& x) { return gt[x]; };
        std::function<MultiStackElem<int>(const int&)> eta = [&](const int& x) {
            return multistack_unit(x, nsym, m);
        };
        MultiStackElem<int> p = rand_multistack(rng, nsym, m, 1, carrier);
        CHECK(ext_eq_multistack(multistack_kleisli(eta, p), p));
        int x0 = rng() % carrier;
        CHECK(ext_eq_multistack(multistack_kleisli(f, multistack_unit(x0, nsym, m)), ft[x0]));
        std::function<MultiStackElem<int>(const int&)> fg = [&](const int& x) {
            return multistack_kleisli(f, gt[x]);
        };
        CHECK(ext_eq_multistack(multistack_kleisli(fg, p),
                                multistack_kleisli(f, multistack_kleisli(g, p)), 1));
    }
}

TEST_CASE("tape ops") {
    int nsym = 3;  // 0 = blank, symbols 1,2
    // write 1 then move right: k = 1 element
    TapeElem<int> wr = tape_write(1, tape_move(+1, tape_unit(0, nsym)));
    std::string buf(7, '\0');
    int h = 3;
    CHECK(tape_run(wr, buf, h) == 0);
    CHECK(h == 4);
    CHECK(buf[3] == 1);
    // read branches on the scanned symbol
    TapeElem<int> rd = tape_read<int>({tape_unit(0, nsym), tape_unit(1, nsym),
                                       tape_unit(2, nsym)});
    std::string buf2(5, '\2');
    int h2 = 2;
    CHECK(tape_run(rd, buf2, h2) == 2);
    CHECK(h2 == 2);
    // rmove then lmove is the identity
    TapeElem<int> rl = tape_move(+1, tape_move(-1, tape_unit(4, nsym)));
    CHECK(ext_eq_tape(rl, tape_unit(4, nsym)));
    CHECK(tape_minimize(rl).k == 0);
    // write then read takes the written branch
    TapeElem<int> wrd = tape_write(2, rd);
    CHECK(ext_eq_tape(wrd, tape_write(2, tape_unit(2, nsym))));
}

TEST_CASE("tape kleisli laws, random") {
    std::mt19937 rng(45);
    int nsym = 2, carrier = 2;
    for (int i = 0; i < 60; i++) {
        std::map<int, TapeElem<int>> ft, gt;
        for (int x = 0; x < carrier; x++) {
            ft[x] = rand_tape(rng, nsym, 1, carrier);
            gt[x] = rand_tape(rng, nsym, 1, carrier);
        }
        std::function<TapeElem<int>(const int&)> f = [&](const int& x) { return ft[x]; };
        std::function<TapeElem<int>(const int&)> g = [&](const int& x) { return gt[x]; };
        std::function<TapeElem<int>(const int&)> eta = [&](const int& x) {
            return tape_unit(x, nsym);
        };
        TapeElem<int> p = rand_tape(rng, nsym, 1, carrier);
        CHECK(ext_eq_tape(tape_kleisli(eta, p), p));
        int x0 = rng() % carrier;
        CHECK(ext_eq_tape(tape_kleisli(f, tape_unit(x0, nsym)), ft[x0]));
        std::function<TapeElem<int>(const int&)> fg = [&](const int& x) {
            return tape_kleisli(f, gt[x]);
        };
        CHECK(ext_eq_tape(tape_kleisli(fg, p), tape_kleisli(f, tape_kleisli(g, p)), 1));
        // locality budget
        int kg = 0;
        for (auto& [k, v] : gt) kg = std::max(kg, v.k);
        CHECK(tape_kleisli(g, p).k <= p.k + kg);
    }
}

TEST_CASE("tensor-commutation identity in the tape monad") {
    // write_i(lmove^k(write_j(rmove^k(x)))) = lmove^k(write_j(rmove^k(write_i(x))))
    int nsym = 2;
    for (int k = 1; k <= 3; k++) {
        for (int i = 0; i < nsym; i++)
            for (int j = 0; j < nsym; j++) {
                auto moves = [&](int dir, TapeElem<int> e) {
                    for (int t = 0; t < k; t++) e = tape_move(dir, e);
                    return e;
                };
                TapeElem<int> x = tape_unit(0, nsym);
                TapeElem<int> lhs = tape_write(i, moves(-1, tape_write(j, moves(+1, x))));
                TapeElem<int> rhs = moves(-1, tape_write(j, moves(+1, tape_write(i, x))));
                CHECK(ext_eq_tape(lhs, rhs, 1));
            }
    }
}

TEST_CASE("predicates minimize") {
    StackPred p = stackpred_const(true, 2);
    CHECK(stackpred_apply(p, std::string("\0\1", 2)));
    StackPred fat;
    fat.nsym = 2;
    fat.k = 2;
    for (const std::string& w : all_prefix_keys(2, 2))
        fat.table.emplace(w, !w.empty() && w[0] == 0);
    StackPred slim = stackpred_minimize(fat);
    CHECK(slim.k == 1);
    WindowPred wp = windowpred_const(false, 2);
    CHECK(wp.k == 0);
}

TEST_CASE("bound cap is enforced") {
    std::mt19937 rng(46);
    StackElem<int> deep = rand_stack(rng, 2, 1, 1);
    deep.k = 1;
    int saved = store_bound_cap;
    store_bound_cap = 1;
    std::function<StackElem<int>(const int&)> f = [&](const int&) { return deep; };
    CHECK_THROWS_WITH_AS(stack_kleisli(f, deep), doctest::Contains("exceeds cap"),
                         std::runtime_error);
    store_bound_cap = saved;
}
