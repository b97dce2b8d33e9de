#include "doctest.h"
#include "taut/observational.hpp"

#include <random>

using namespace taut;

namespace {

std::vector<Word> all_words(int ninputs, int maxlen) {
    std::vector<Word> out{{}};
    size_t lo = 0;
    for (int l = 0; l < maxlen; l++) {
        size_t hi = out.size();
        for (size_t i = lo; i < hi; i++)
            for (int c = 0; c < ninputs; c++) {
                Word w = out[i];
                w.push_back(c);
                out.push_back(std::move(w));
            }
        lo = hi;
    }
    return out;
}

TAutomaton fig_nfa() {
    return automaton_parse(R"(
(automaton (monad pow) (inputs a b)
  (state q0 (out false) (on a q0) (on b q1))
  (state q1 (out false) (on a (empty)) (on b (plus q0 q2)))
  (state q2 (out true) (on a q0) (on b (empty))))
)");
}

bool scalar_truthy(const OutVal& v) {
    return !bool_semiring().is_zero(std::get<Scalar>(v));
}

// Random powerset automaton over {a,b} (optionally with a tau column).
TAutomaton rand_nfa(std::mt19937& rng, int maxstates, bool with_tau) {
    TAutomaton a;
    a.monad.kind = MonadKind::Pow;
    a.monad.sr = bool_semiring();
    a.inputs = {"a", "b"};
    if (with_tau) a.inputs.push_back("tau");
    int n = 1 + static_cast<int>(rng() % maxstates);
    for (int x = 0; x < n; x++) {
        a.states.push_back("q" + std::to_string(x));
        a.out.push_back(Scalar(rng() % 2 == 0));
        std::vector<TElem> row;
        for (size_t i = 0; i < a.inputs.size(); i++) {
            StateSet s;
            for (int y = 0; y < n; y++)
                if (rng() % 3 == 0) s.insert(y);
            row.push_back(std::move(s));
        }
        a.trans.push_back(std::move(row));
    }
    return a;
}

// Random stack automaton whose output object closes at two constant
// predicates: every transition element has a unique target state, so the
// algebra sends any f: X -> {const0, const1} to a constant again.
TAutomaton rand_stack_aut(std::mt19937& rng) {
    TAutomaton a;
    a.monad.kind = MonadKind::Stack;
    a.monad.sr = bool_semiring();
    a.monad.syms = {"A", "B"};
    a.inputs = {"a", "b"};
    int n = 1 + static_cast<int>(rng() % 3);
    for (int x = 0; x < n; x++) {
        a.states.push_back("x" + std::to_string(x));
        a.out.push_back(stackpred_const(rng() % 2 == 0, 2));
        std::vector<TElem> row;
        for (size_t i = 0; i < a.inputs.size(); i++) {
            int y = static_cast<int>(rng() % n);
            StackElem<int> e;
            e.nsym = 2;
            e.k = static_cast<int>(rng() % 3);
            for (const std::string& w : all_prefix_keys(2, e.k)) {
                int len = static_cast<int>(rng() % (e.k + 2));
                std::string t;
                for (int j = 0; j < len; j++) t += static_cast<char>(rng() % 2);
                e.table.emplace(w, std::make_pair(y, t));
            }
            row.push_back(stack_minimize(std::move(e)));
        }
        a.trans.push_back(std::move(row));
    }
    return a;
}

// Textbook epsilon-closure NFA acceptance, written independently of the
// library's set machinery.
bool eps_nfa_accepts(const TAutomaton& a, int start, const Word& w) {
    int tau = -1;
    for (size_t i = 0; i < a.inputs.size(); i++)
        if (a.inputs[i] == "tau") tau = static_cast<int>(i);
    auto close = [&](std::set<int> s) {
        bool grew = true;
        while (grew && tau >= 0) {
            grew = false;
            std::set<int> add;
            for (int x : s)
                for (int y : std::get<StateSet>(a.trans[x][tau]))
                    if (!s.count(y)) add.insert(y);
            for (int y : add) s.insert(y);
            grew = !add.empty();
        }
        return s;
    };
    std::set<int> cur = close({start});
    for (int c : w) {
        std::set<int> next;
        for (int x : cur)
            for (int y : std::get<StateSet>(a.trans[x][c])) next.insert(y);
        cur = close(next);
    }
    for (int x : cur)
        if (scalar_truthy(a.out[x])) return true;
    return false;
}

const char* kAnBnDtm = R"((dtm (inputs a b) (tape a b X Y blank _)
  (state q0 (on a -> q1 X R) (on Y -> q3 Y R) (on _ -> qa _ N))
  (state q1 (on a -> q1 a R) (on Y -> q1 Y R) (on b -> q2 Y L))
  (state q2 (on a -> q2 a L) (on Y -> q2 Y L) (on X -> q0 X R))
  (state q3 (on Y -> q3 Y R) (on _ -> qa _ N))
  (state qa)
  (accept qa)))";

bool is_anbn(const Word& w) {
    size_t n = w.size() / 2;
    if (w.size() != 2 * n) return false;
    for (size_t i = 0; i < w.size(); i++)
        if (w[i] != (i < n ? 0 : 1)) return false;
    return true;
}

}  // namespace

TEST_CASE("cps transform preserves traces on the figure nfa") {
    TAutomaton a = fig_nfa();
    CpsAutomaton c = cps_transform(a);
    CHECK(c.nb() == 2);
    CHECK(scalar_truthy(cps_trace(c, 0, {1, 1})));  // "bb"
    for (const Word& w : all_words(2, 6))
        CHECK(out_eq(a.monad, cps_trace(c, 0, w), trace(a, 0, w)));
    CHECK_FALSE(cps_determinize(c, 0).budget_exhausted);
}

TEST_CASE("cps elements of a deterministic automaton are evaluation maps") {
    // singleton transitions: kappa . eta-like elements evaluate f at the target
    TAutomaton a;
    a.monad.kind = MonadKind::Pow;
    a.monad.sr = bool_semiring();
    a.inputs = {"a"};
    a.states = {"p", "q"};
    a.out = {Scalar(false), Scalar(true)};
    a.trans = {{StateSet{1}}, {StateSet{0}}};
    CpsAutomaton c = cps_transform(a);
    int nb = c.nb();
    for (int x = 0; x < 2; x++) {
        int y = x == 0 ? 1 : 0;
        for (size_t g = 0; g < c.trans[x][0].table.size(); g++) {
            size_t code = g;
            for (int i = 0; i < y; i++) code /= nb;
            CHECK(c.trans[x][0].table[g] == static_cast<int>(code % nb));
        }
    }
}

TEST_CASE("cps transform agrees with direct traces on random automata") {
    std::mt19937 rng(11);
    for (int it = 0; it < 100; it++) {
        TAutomaton a = rand_nfa(rng, 3, false);
        CpsAutomaton c = cps_transform(a);
        CHECK(c.nb() <= 2);
        for (const Word& w : all_words(2, 6))
            CHECK(out_eq(a.monad, cps_trace(c, 0, w), trace(a, 0, w)));
        CHECK_FALSE(cps_determinize(c, 0).budget_exhausted);
    }
    int save = store_bound_cap;
    store_bound_cap = 16;
    for (int it = 0; it < 100; it++) {
        TAutomaton a = rand_stack_aut(rng);
        CpsAutomaton c = cps_transform(a);
        CHECK(c.nb() <= 2);
        for (const Word& w : all_words(2, 6))
            CHECK(out_eq(a.monad, cps_trace(c, 0, w), trace(a, 0, w)));
        CHECK_FALSE(cps_determinize(c, 0).budget_exhausted);
    }
    store_bound_cap = save;
}

TEST_CASE("cps transform rejects an infinite output object") {
    // a pop element shifts any predicate deeper into the stack at each
    // algebra application, so the closure never stabilizes
    TAutomaton a;
    a.monad.kind = MonadKind::Stack;
    a.monad.sr = bool_semiring();
    a.monad.syms = {"A"};
    a.inputs = {"a"};
    a.states = {"x"};
    StackPred top;
    top.nsym = 1;
    top.k = 1;
    top.table.emplace("", false);
    top.table.emplace(std::string(1, '\0'), true);
    a.out = {top};
    StackElem<int> pop;
    pop.nsym = 1;
    pop.k = 1;
    pop.table.emplace("", std::make_pair(0, ""));
    pop.table.emplace(std::string(1, '\0'), std::make_pair(0, std::string()));
    a.trans = {{pop}};
    int save = store_bound_cap;
    store_bound_cap = 70;
    CHECK_THROWS(cps_transform(a, 16));
    store_bound_cap = save;
}

TEST_CASE("tau elimination basics") {
    // q0 --tau--> q1, q1 accepting: the observational output of q0 is true
    TAutomaton a;
    a.monad.kind = MonadKind::Pow;
    a.monad.sr = bool_semiring();
    a.inputs = {"a", "tau"};
    a.states = {"q0", "q1"};
    a.out = {Scalar(false), Scalar(true)};
    a.trans = {{StateSet{}, StateSet{1}}, {StateSet{}, StateSet{}}};
    auto r = tau_eliminate(a, omega_join(a.monad));
    REQUIRE(r.has_value());
    CHECK(scalar_truthy(r->bvals[r->out[0]]));
    CHECK(r->inputs == std::vector<std::string>{"a"});
    // without a monoid the sums are undefined
    CHECK_THROWS(tau_eliminate(a, std::nullopt));
}

TEST_CASE("tau elimination on a tau-free automaton is the cps transform") {
    TAutomaton a = fig_nfa();
    CpsAutomaton c = cps_transform(a);
    auto r = tau_eliminate(a, omega_join(a.monad));
    REQUIRE(r.has_value());
    CHECK(r->out == c.out);
    for (size_t x = 0; x < a.states.size(); x++)
        for (size_t i = 0; i < a.inputs.size(); i++) CHECK(r->trans[x][i] == c.trans[x][i]);
}

TEST_CASE("tau elimination handles tau cycles") {
    // q0 --tau--> q0 and q0 --a--> q1: saturation terminates, language {a}
    TAutomaton a;
    a.monad.kind = MonadKind::Pow;
    a.monad.sr = bool_semiring();
    a.inputs = {"a", "tau"};
    a.states = {"q0", "q1"};
    a.out = {Scalar(false), Scalar(true)};
    a.trans = {{StateSet{1}, StateSet{0}}, {StateSet{}, StateSet{}}};
    auto r = tau_eliminate(a, omega_join(a.monad));
    REQUIRE(r.has_value());
    CHECK_FALSE(scalar_truthy(cps_trace(*r, 0, {})));
    CHECK(scalar_truthy(cps_trace(*r, 0, {0})));
    CHECK_FALSE(scalar_truthy(cps_trace(*r, 0, {0, 0})));
}

TEST_CASE("tau elimination matches the epsilon-closure oracle") {
    std::mt19937 rng(23);
    for (int it = 0; it < 100; it++) {
        TAutomaton a = rand_nfa(rng, 5, true);
        auto r = tau_eliminate(a, omega_join(a.monad));
        REQUIRE(r.has_value());
        for (const Word& w : all_words(2, 8)) {
            bool expect = eps_nfa_accepts(a, 0, w);
            CHECK(scalar_truthy(cps_trace(*r, 0, w)) == expect);
            ObsResult o = obs_trace(a, 0, w);
            CHECK(o.verdict == (expect ? RunVerdict::Accept : RunVerdict::Reject));
        }
    }
}

TEST_CASE("obs_trace without tau equals plain trace semantics") {
    TAutomaton a = fig_nfa();
    for (const Word& w : all_words(2, 7))
        CHECK((obs_trace(a, 0, w).verdict == RunVerdict::Accept) ==
              out_truthy(a.monad, trace(a, 0, w)));
}

TEST_CASE("obs_trace on weighted automata sums tau chains") {
    // nat weights: x0 --tau/2--> x1, outputs 1 and 3: value at eps is 1 + 2*3
    TAutomaton a;
    a.monad.kind = MonadKind::Lin;
    a.monad.sr = nat_semiring();
    a.inputs = {"a", "tau"};
    a.states = {"x0", "x1"};
    a.out = {Scalar(std::uint64_t{1}), Scalar(std::uint64_t{3})};
    LinComb<int> none, totau;
    totau.coef.emplace(1, Scalar(std::uint64_t{2}));
    a.trans = {{none, totau}, {none, none}};
    ObsResult r = obs_trace(a, 0, {});
    CHECK(r.verdict == RunVerdict::Accept);
    CHECK(out_eq(a.monad, r.value, Scalar(std::uint64_t{7})));
    // a tau self-loop with weight 1 diverges over nat
    TAutomaton b = a;
    std::get<LinComb<int>>(b.trans[0][1]).coef.emplace(0, Scalar(std::uint64_t{1}));
    CHECK(obs_trace(b, 0, {}, 500).verdict == RunVerdict::Unknown);
    // over the reals a tau self-loop of weight 1/2 converges geometrically
    TAutomaton c;
    c.monad.kind = MonadKind::Lin;
    c.monad.sr = real_semiring();
    c.inputs = {"tau"};
    c.states = {"x0"};
    c.out = {Scalar(1.0)};
    LinComb<int> half;
    half.coef.emplace(0, Scalar(0.5));
    c.trans = {{half}};
    ObsResult rr = obs_trace(c, 0, {});
    CHECK(rr.verdict == RunVerdict::Accept);
    CHECK(std::abs(std::get<double>(std::get<Scalar>(rr.value)) - 2.0) < 1e-6);
}

TEST_CASE("obs_trace on the tape automaton from the marking dtm") {
    Dtm d = dtm_parse(kAnBnDtm);
    Rdtm r = dtm_to_rdtm(d);
    TapeAutomatonResult T = rdtm_to_tape_automaton(r);
    CHECK(obs_trace(T.aut, T.start, {0, 1}, 500).verdict == RunVerdict::Accept);
    CHECK(obs_trace(T.aut, T.start, {1, 0}, 500).verdict == RunVerdict::Reject);
    for (const Word& w : all_words(2, 5)) {
        int fuel = 100 * (10 * static_cast<int>(w.size() * w.size()) + 200);
        RunVerdict expect = rdtm_accepts(r, w, fuel);
        CHECK(obs_trace(T.aut, T.start, w, fuel).verdict == expect);
        CHECK(expect == (is_anbn(w) ? RunVerdict::Accept : RunVerdict::Reject));
    }
}
