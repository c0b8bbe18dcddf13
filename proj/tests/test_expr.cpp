#include <random>

#include "doctest.h"
#include "idealab/expr.hpp"

using namespace idealab;

namespace {

std::vector<Nat> elems(const SetExpr& e, Nat bound) { return e.window(bound).elems; }

// Random boolean trees over a few leaf generators, for property tests.
SetExpr random_tree(std::mt19937_64& rng, int depth) {
    if (depth == 0) {
        switch (rng() % 6) {
            case 0: return SetExpr::evens();
            case 1: return SetExpr::squares();
            case 2: return SetExpr::powers(2);
            case 3: return SetExpr::ap(rng() % 5, 1 + rng() % 6);
            case 4: return SetExpr::explicit_set({Nat(rng() % 50), Nat(rng() % 50), Nat(rng() % 50)});
            default: return SetExpr::cofinite({Nat(rng() % 20), Nat(rng() % 20)});
        }
    }
    switch (rng() % 4) {
        case 0: return SetExpr::set_union(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 1:
            return SetExpr::set_intersection(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 2:
            return SetExpr::set_difference(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        default: return SetExpr::complement(random_tree(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("window basics") {
    CHECK(elems(SetExpr::squares(), 10) == std::vector<Nat>{0, 1, 4, 9});
    CHECK(elems(SetExpr::complement(SetExpr::evens()), 5) == std::vector<Nat>{1, 3});
    CHECK(elems(SetExpr::fs_set({1, 2, 4}), 10) == std::vector<Nat>{1, 2, 3, 4, 5, 6, 7});
    CHECK(elems(SetExpr::powers(2), 70) == std::vector<Nat>{1, 2, 4, 8, 16, 32, 64});
    CHECK(elems(SetExpr::empty(), 100).empty());
}

TEST_CASE("malformed generators are rejected") {
    CHECK_THROWS_AS(SetExpr::ap(3, 0), Error);
    CHECK_THROWS_AS(SetExpr::powers(1), Error);
    CHECK_THROWS_AS(SetExpr::fs_set({0, 3}), Error);
}

TEST_CASE("windows are prefix-consistent") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        SetExpr e = random_tree(rng, 2);
        Nat n = 1 + rng() % 200, m = n + rng() % 200;
        auto wn = elems(e, n);
        auto wm = elems(e, m);
        std::vector<Nat> truncated;
        for (Nat x : wm)
            if (x < n) truncated.push_back(x);
        CHECK(wn == truncated);
    }
}

TEST_CASE("windows agree with element-wise membership") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        SetExpr e = random_tree(rng, 2);
        Nat n = 1 + rng() % 300;
        auto w = elems(e, n);
        std::vector<Nat> direct;
        for (Nat x = 0; x < n; ++x)
            if (e.contains(x)) direct.push_back(x);
        CHECK(w == direct);
    }
}

TEST_CASE("De Morgan laws hold at window level") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 30; ++i) {
        SetExpr a = random_tree(rng, 1), b = random_tree(rng, 1);
        Nat n = 1 + rng() % 200;
        auto lhs = elems(SetExpr::complement(SetExpr::set_union(a, b)), n);
        auto rhs = elems(
            SetExpr::set_intersection(SetExpr::complement(a), SetExpr::complement(b)), n);
        CHECK(lhs == rhs);
        auto lhs2 = elems(SetExpr::complement(SetExpr::set_intersection(a, b)), n);
        auto rhs2 = elems(SetExpr::set_union(SetExpr::complement(a), SetExpr::complement(b)), n);
        CHECK(lhs2 == rhs2);
    }
}

TEST_CASE("closed-form counts match window sizes") {
    std::mt19937_64 rng(14);
    std::vector<SetExpr> sets = {SetExpr::squares(),      SetExpr::powers(3),
                                 SetExpr::ap(1, 3),       SetExpr::cofinite({2, 5, 9}),
                                 SetExpr::fs_set({1, 4}), SetExpr::complement(SetExpr::squares())};
    for (const auto& e : sets) {
        for (int i = 0; i < 10; ++i) {
            Nat n = rng() % 500;
            auto c = e.count_below(big_of(n));
            REQUIRE(c.has_value());
            CHECK(*c == BigInt(static_cast<unsigned long>(elems(e, n).size())));
        }
    }
}

TEST_CASE("select is the inverse of rank") {
    std::vector<SetExpr> sets = {SetExpr::squares(), SetExpr::ap(5, 7), SetExpr::cofinite({0, 3}),
                                 SetExpr::complement(SetExpr::squares()),
                                 SetExpr::set_union(SetExpr::evens(), SetExpr::explicit_set({7}))};
    for (const auto& e : sets) {
        auto w = elems(e, 400);
        for (Nat k = 0; k < w.size(); ++k) CHECK(e.select(k) == std::optional<Nat>(w[k]));
    }
}

TEST_CASE("block rule windows and counts") {
    auto fact = GridSchedule::factorial();

    BlockRuleSpec half;
    half.kind = BlockRuleSpec::Kind::First;
    half.count = CountFn::scaled_length(make_rat(1, 2));
    SetExpr a = SetExpr::block_rule(fact, half);
    auto counts = a.block_counts(fact, 5);
    CHECK(counts[4] == 12);  // floor(4!/2)

    BlockRuleSpec none;
    none.kind = BlockRuleSpec::Kind::None;
    auto zero_counts = SetExpr::block_rule(fact, none).block_counts(fact, 6);
    for (const auto& c : zero_counts) CHECK(c == 0);

    // one element per interval, on the (2^n)! schedule
    auto tp = GridSchedule::two_pow_factorial();
    BlockRuleSpec last1;
    last1.kind = BlockRuleSpec::Kind::Last;
    last1.count = CountFn::constant_count(BigInt(1));
    auto maxima = SetExpr::block_rule(tp, last1);
    auto mc = maxima.block_counts(tp, 4);
    for (const auto& c : mc) CHECK(c == 1);
    CHECK(maxima.contains(0));   // max I_0 (I_0 = {0})
    CHECK(maxima.contains(2));   // I_1 = [1,3)
    CHECK(maxima.contains(26));  // I_2 = [3,27)
    CHECK(!maxima.contains(25));
}

TEST_CASE("block counts sum to window counts across covered intervals") {
    auto fact = GridSchedule::factorial();
    std::mt19937_64 rng(15);
    for (int i = 0; i < 12; ++i) {
        SetExpr e = random_tree(rng, 1);
        auto counts = e.block_counts(fact, 6);
        Nat cover = *to_nat(fact.end(5));
        auto w = elems(e, cover);
        BigInt total = 0;
        for (const auto& c : counts) total += c;
        CHECK(total == BigInt(static_cast<unsigned long>(w.size())));
    }
}

TEST_CASE("index-set block rule") {
    auto dy = GridSchedule::dyadic();
    BlockRuleSpec rule;
    rule.kind = BlockRuleSpec::Kind::IndexSet;
    rule.index_set = std::make_shared<SetExpr>(SetExpr::powers(2));
    SetExpr a = SetExpr::block_rule(dy, rule);
    // included blocks are I_1 = [2,4), I_2 = [4,8), I_4 = [16,32), ...
    CHECK(a.contains(2));
    CHECK(a.contains(5));
    CHECK(!a.contains(9));
    CHECK(a.contains(17));
    CHECK(!a.contains(32));
}

TEST_CASE("images and preimages") {
    auto dbl = InjectionExpr::affine(2, 0);
    SetExpr img = SetExpr::image(dbl, SetExpr::squares());
    CHECK(elems(img, 20) == std::vector<Nat>{0, 2, 8, 18});
    CHECK(img.contains(8));
    CHECK(!img.contains(4));
    CHECK(*img.count_below(BigInt(20)) == 4);

    SetExpr pre = SetExpr::preimage(dbl, SetExpr::squares());
    CHECK(elems(pre, 10) == std::vector<Nat>{0, 2, 8});  // 2x is a square

    auto sq = InjectionExpr::power(2);
    SetExpr img2 = SetExpr::image(sq, SetExpr::full());
    CHECK(elems(img2, 30) == elems(SetExpr::squares(), 30));
    CHECK(*img2.count_below(BigInt(1'000'000)) == 1000);
}

TEST_CASE("enumerate injection walks a set in increasing order") {
    auto f = InjectionExpr::enumerate(SetExpr::evens());
    CHECK(f.apply(3) == std::optional<Nat>(6));
    CHECK(f.invert(6) == std::optional<Nat>(3));
    CHECK(f.invert(7) == std::nullopt);

    auto g = InjectionExpr::enumerate(SetExpr::complement(SetExpr::squares()));
    CHECK(g.apply(0) == std::optional<Nat>(2));  // non-squares start 2, 3, 5, ...
    CHECK(g.apply(2) == std::optional<Nat>(5));
}

TEST_CASE("piecewise swap built from cases") {
    // swap 2k <-> 2k+1 expressed piecewise, versus the built-in
    auto swapped = InjectionExpr::piecewise(
        {{SetExpr::evens(), InjectionExpr::shift(1)}},
        InjectionExpr::compose(InjectionExpr::inverse(InjectionExpr::shift(1)),
                               InjectionExpr::identity()));
    auto builtin = InjectionExpr::swap_pairs();
    for (Nat x = 0; x < 64; ++x) CHECK(swapped.apply(x) == builtin.apply(x));
    for (Nat y = 0; y < 64; ++y) CHECK(swapped.invert(y) == builtin.invert(y));
}

TEST_CASE("fixed points") {
    CHECK(elems(fixed_points(InjectionExpr::identity(), 10), 10) ==
          std::vector<Nat>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(elems(fixed_points(InjectionExpr::shift(1), 10), 10).empty());
    CHECK(elems(fixed_points(InjectionExpr::swap_pairs(), 6), 6).empty());

    // non-injective map is rejected with a colliding pair
    auto clash = InjectionExpr::piecewise({{SetExpr::explicit_set({0, 1}), InjectionExpr::shift(5)}},
                                          InjectionExpr::identity());
    // 0 -> 5, 1 -> 6, 5 -> 5: collision between 0 and 5
    CHECK_THROWS_AS((void)fixed_points(clash, 10), Error);
}

TEST_CASE("product and sections") {
    auto sp = BaseSpace::omega_squared();
    SetExpr col7 = SetExpr::product(SetExpr::explicit_set({7}), SetExpr::full(), sp);
    CHECK(col7.contains(sp.encode({7, 3})));
    CHECK(!col7.contains(sp.encode({6, 3})));
    CHECK(elems(SetExpr::column(col7, 7), 5) == std::vector<Nat>{0, 1, 2, 3, 4});
    CHECK(elems(SetExpr::column(col7, 6), 5).empty());

    SetExpr d = SetExpr::lower_triangle();
    CHECK(d.contains(sp.encode({3, 1})));
    CHECK(!d.contains(sp.encode({1, 3})));
    CHECK(elems(SetExpr::column(d, 4), 10) == std::vector<Nat>{0, 1, 2, 3, 4});
    CHECK(elems(SetExpr::row_section(d, 4), 7) == std::vector<Nat>{4, 5, 6});

    CHECK(col7.support_row_bound() == std::optional<Nat>(8));
    CHECK(d.support_row_bound() == std::nullopt);
}

TEST_CASE("grid sets") {
    SetExpr g = SetExpr::grid_set(2, 0, 1, 2);  // (3,1),(3,2),(4,1),(4,2)
    auto sp = BaseSpace::omega_squared();
    CHECK(g.contains(sp.encode({3, 1})));
    CHECK(g.contains(sp.encode({4, 2})));
    CHECK(!g.contains(sp.encode({2, 0})));
    CHECK(g.window(~Nat(0) >> 1).elems.size() == 4);
}

TEST_CASE("subsets-of generator") {
    SetExpr pairs = SetExpr::subsets_of(SetExpr::evens(), 2);
    auto sp = BaseSpace::n_subsets(2);
    CHECK(pairs.contains(sp.encode({0, 2})));
    CHECK(!pairs.contains(sp.encode({0, 1})));
}

TEST_CASE("structural facts") {
    CHECK(SetExpr::squares().structurally_infinite() == std::optional<bool>(true));
    CHECK(SetExpr::explicit_set({1, 2}).structurally_infinite() == std::optional<bool>(false));
    CHECK(SetExpr::fs_set({1, 2}).structurally_infinite() == std::optional<bool>(false));
    CHECK(SetExpr::complement(SetExpr::evens()).structurally_infinite() ==
          std::optional<bool>(true));

    CHECK(SetExpr::evens().structural_density() == std::optional<Rat>(make_rat(1, 2)));
    CHECK(SetExpr::squares().structural_density() == std::optional<Rat>(Rat(0)));
    CHECK(SetExpr::complement(SetExpr::ap(0, 4)).structural_density() ==
          std::optional<Rat>(make_rat(3, 4)));
    CHECK(SetExpr::image(InjectionExpr::affine(2, 1), SetExpr::evens()).structural_density() ==
          std::optional<Rat>(make_rat(1, 4)));
    CHECK(SetExpr::image(InjectionExpr::power(2), SetExpr::full()).structural_density() ==
          std::optional<Rat>(Rat(0)));
    // power images of proper subsets are deliberately not certified
    CHECK(SetExpr::image(InjectionExpr::power(2), SetExpr::evens()).structural_density() ==
          std::nullopt);

    CHECK(SetExpr::powers(2).structural_ap_bound() == std::optional<Nat>(2));
    CHECK(SetExpr::odds().fs_obstruction().has_value());
    CHECK(!SetExpr::evens().fs_obstruction().has_value());
}
