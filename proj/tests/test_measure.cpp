#include <random>

#include "doctest.h"
#include "idealab/measure.hpp"

using namespace idealab;

TEST_CASE("density windows are exact rationals") {
    CHECK(density_window(SetExpr::evens(), BigInt(10)).ratio == make_rat(1, 2));
    CHECK(density_window(SetExpr::squares(), BigInt(1'000'000)).ratio ==
          make_rat(1000, 1'000'000));
    CHECK(density_window(SetExpr::empty(), BigInt(500)).ratio == 0);

    auto est = density_window(SetExpr::evens(), BigInt(1) << 40);
    CHECK(est.ratio == make_rat(1, 2));
    CHECK(est.liminf_env == make_rat(1, 2));
}

TEST_CASE("summable partials") {
    auto geo = summable_partial(WeightFn::geometric(make_rat(1, 2)), SetExpr::full(), BigInt(50));
    CHECK(geo.exact);
    CHECK(*geo.upper < 2);

    // half-harmonic sums pass 10 by 2^40, certified from below by dyadic blocks
    auto hh = summable_partial(WeightFn::harmonic(), SetExpr::evens(), BigInt(1) << 40);
    CHECK(hh.method == "dyadic-lower-bound");
    CHECK(hh.lower > 10);

    auto fin = summable_partial(WeightFn::harmonic(), SetExpr::explicit_set({0, 1, 3}), BigInt(100));
    CHECK(fin.exact);
    CHECK(fin.lower == Rat(1) + make_rat(1, 2) + make_rat(1, 4));
}

TEST_CASE("eu ratios") {
    CHECK(eu_ratio(WeightFn::constant(Rat(1)), SetExpr::evens(), BigInt(100)) == make_rat(1, 2));

    // against density: counts over the same index range agree exactly
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        BigInt n = 10 + rng() % 400;
        SetExpr a = SetExpr::ap(rng() % 4, 1 + rng() % 5);
        Rat r = eu_ratio(WeightFn::constant(Rat(1)), a, n);
        BigInt cnt = *a.count_below(n + 1) - (a.contains(0) ? 1 : 0);
        CHECK(r == make_rat(cnt, n));
    }

    CHECK_THROWS_AS((void)eu_ratio(WeightFn::constant(Rat(0)), SetExpr::evens(), BigInt(10)), Error);
}

TEST_CASE("eu ratios reproduce the non-dense counterexample bounds at n = 3") {
    auto tp = GridSchedule::two_pow_factorial();
    auto h = WeightFn::per_block(tp, WeightFn::BlockValue::Length);

    BlockRuleSpec last1;
    last1.kind = BlockRuleSpec::Kind::Last;
    last1.count = CountFn::constant_count(BigInt(1));
    SetExpr maxima = SetExpr::block_rule(tp, last1);  // {max I_n}

    BigInt k = tp.max_elem(3);
    Rat ratio = eu_ratio(h, maxima, k);
    CHECK(ratio <= make_rat(3, 40320));
    CHECK(ratio == make_rat(2 + 24 + 40320, BigInt(1) + 4 + 576 + BigInt(40320) * 40320 - 1));

    SetExpr shifted = SetExpr::image(InjectionExpr::shift(1), maxima);  // {min I_{n+1}}
    BigInt k2 = tp.start(4);
    Rat ratio2 = eu_ratio(h, shifted, k2);
    BigInt f16 = factorial(16), f8sq = factorial(8) * factorial(8);
    CHECK(ratio2 >= f16 / Rat(f16 + 3 * f8sq));
    CHECK(f16 / Rat(f16 + 3 * f8sq) > make_rat(999, 1000));
}

TEST_CASE("farah block measures") {
    auto fact = GridSchedule::factorial();
    // A = I_5 exactly
    auto s5 = to_nat(fact.start(5)), e5 = to_nat(fact.end(5));
    std::vector<Nat> i5;
    for (Nat x = *s5; x < *e5; ++x) i5.push_back(x);
    SetExpr a = SetExpr::explicit_set(i5);
    CHECK(farah_block_measure(fact, a, 5) == 1);
    CHECK(farah_block_measure(fact, a, 4) == 0);
    CHECK(farah_block_measure(fact, a, 6) == 0);

    // |A_n| = n!/M on I_n gives 1/M
    BlockRuleSpec rule;
    rule.kind = BlockRuleSpec::Kind::First;
    rule.count = CountFn::scaled_length(make_rat(1, 3));
    SetExpr b = SetExpr::block_rule(fact, rule);
    CHECK(farah_block_measure(fact, b, 6) == make_rat(240, 720));

    CHECK(farah_block_measure(fact, SetExpr::empty(), 4) == 0);
}

TEST_CASE("exh tails") {
    auto geo = SubmeasureExpr::summable(WeightFn::geometric(make_rat(1, 2)));
    auto t = exh_tail(geo, SetExpr::full(), 10, 4096);
    CHECK(t.lower >= make_rat(1, 1024));
    REQUIRE(t.upper.has_value());
    CHECK(*t.upper == make_rat(1, 512));

    auto tp = GridSchedule::two_pow_factorial();
    BlockRuleSpec last1;
    last1.kind = BlockRuleSpec::Kind::Last;
    last1.count = CountFn::constant_count(BigInt(1));
    SetExpr maxima = SetExpr::block_rule(tp, last1);
    auto fs = SubmeasureExpr::farah_sup(GridSchedule::factorial());
    BlockRuleSpec last1f = last1;
    SetExpr maxima_f = SetExpr::block_rule(GridSchedule::factorial(), last1f);
    Nat cut = *to_nat(GridSchedule::factorial().start(4));
    auto tf = exh_tail(fs, maxima_f, cut, 10'000);
    REQUIRE(tf.upper.has_value());
    CHECK(*tf.upper == make_rat(1, 24));
    CHECK(tf.lower == make_rat(1, 24));

    SetExpr fin = SetExpr::explicit_set({1, 5, 9});
    auto t3 = exh_tail(geo, fin, 10, 100);
    CHECK(t3.lower == 0);
    CHECK(t3.upper == std::optional<Rat>(Rat(0)));
}

TEST_CASE("abel-dini partial sums") {
    // x_n = 1, delta = 1: telescoping keeps sums under 2
    auto r = abel_dini(WeightFn::constant(Rat(1)), Rat(1), BigInt(100'000));
    CHECK(r.bounded_below_two);
    CHECK(r.final_sum.lower > make_rat(8, 5));

    // delta = 0 gives the harmonic series; passes 5 around e^5
    auto h = abel_dini(WeightFn::constant(Rat(1)), Rat(0), BigInt(200));
    CHECK(h.final_sum.lower > 5);
    CHECK(!h.bounded_below_two);

    // x_n = 1/n, delta = 1: bounded with shrinking increments
    auto r2 = abel_dini(WeightFn::harmonic(), Rat(1), BigInt(20'000));
    REQUIRE(r2.final_sum.upper.has_value());
    CHECK(*r2.final_sum.upper < 2);

    CHECK_THROWS_AS((void)abel_dini(WeightFn::constant(Rat(1)), make_rat(1, 2), BigInt(10)), Error);
}

TEST_CASE("submeasure axioms on random windows") {
    std::mt19937_64 rng(32);
    std::vector<SubmeasureExpr> phis = {
        SubmeasureExpr::summable(WeightFn::harmonic()),
        SubmeasureExpr::eu_normalized(WeightFn::constant(Rat(1))),
        SubmeasureExpr::farah_sup(GridSchedule::factorial()),
    };
    for (const auto& phi : phis) {
        for (int trial = 0; trial < 170; ++trial) {
            std::vector<Nat> ea, eb;
            for (int i = 0; i < 30; ++i) {
                ea.push_back(rng() % 200);
                eb.push_back(rng() % 200);
            }
            SetExpr a = SetExpr::explicit_set(ea), b = SetExpr::explicit_set(eb);
            SetExpr ab = SetExpr::set_union(a, b);
            Rat pa = phi.window_value(a, 256), pb = phi.window_value(b, 256),
                pab = phi.window_value(ab, 256);
            CHECK(pa <= pab);
            CHECK(pab <= pa + pb);
        }
        CHECK(phi.window_value(SetExpr::empty(), 256) == 0);
    }
}

TEST_CASE("fin/exh invariance samples") {
    std::vector<std::pair<std::string, SetExpr>> family = {
        {"evens", SetExpr::evens()},
        {"odds", SetExpr::odds()},
        {"squares", SetExpr::squares()},
        {"powers2", SetExpr::powers(2)},
        {"ap03", SetExpr::ap(0, 3)},
    };
    // density sup-form with unit weights, f(n) = 2n, c = 1/2
    auto phi = SubmeasureExpr::eu_normalized(WeightFn::constant(Rat(1)));
    auto rep = finexh_invariance_check(phi, InjectionExpr::affine(2, 0), make_rat(1, 2), family,
                                       2048);
    CHECK(rep.all_hold);

    auto rep2 = finexh_invariance_check(phi, InjectionExpr::identity(), Rat(1), family, 2048);
    CHECK(rep2.all_hold);

    auto phi3 = SubmeasureExpr::summable(WeightFn::geometric(make_rat(1, 2)));
    auto rep3 = finexh_invariance_check(phi3, InjectionExpr::shift(1), make_rat(1, 2), family, 512);
    CHECK(rep3.all_hold);

    CHECK_THROWS_AS((void)finexh_invariance_check(phi, InjectionExpr::swap_pairs(), Rat(1), family,
                                                  128),
                    Error);
}
