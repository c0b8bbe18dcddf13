#include <random>

#include "doctest.h"
#include "idealab/detect.hpp"

using namespace idealab;

TEST_CASE("longest_ap on simple windows") {
    auto [len, w] = longest_ap({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(len == 10);
    CHECK(w.start == 0);
    CHECK(w.step == 1);

    auto [len2, w2] = longest_ap({1, 25, 49, 100});
    CHECK(len2 == 3);
    CHECK(w2.start == 1);
    CHECK(w2.step == 24);

    auto [len3, w3] = longest_ap({});
    CHECK(len3 == 0);
    (void)w3;
}

TEST_CASE("square numbers contain no progression of length 4") {
    auto sq = SetExpr::squares().window(2500).elems;
    auto [len, w] = longest_ap(sq);
    CHECK(len == 3);
    CHECK(w.start == 1);
    CHECK(w.step == 24);
}

TEST_CASE("longest_ap matches the cubic oracle on random sets") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Nat> elems;
        Nat size = rng() % 41;
        for (Nat i = 0; i < size; ++i) elems.push_back(rng() % 120);
        auto fast = longest_ap(elems);
        auto slow = longest_ap_bruteforce(elems);
        CHECK(fast.first == slow.first);
        CHECK(fast.second.start == slow.second.start);
        CHECK(fast.second.step == slow.second.step);
    }
}

TEST_CASE("grid copies") {
    auto sp = BaseSpace::omega_squared();
    SetExpr full = SetExpr::product(SetExpr::explicit_set({0, 1, 2, 3, 4}),
                                    SetExpr::explicit_set({0, 1, 2, 3, 4}), sp);
    auto w = full.window(sp.encode({9, 9}));
    auto g = find_grid_copy(w, 2);
    REQUIRE(g.has_value());
    CHECK(g->v1 == 0);
    CHECK(g->v2 == 0);
    CHECK(g->alpha == 1);
    CHECK(grid_witness_valid(*g, full));

    // D restricted to the 10x10 box: the first side-2 grid in search order
    // sits at v = (1,0), covering (2,1),(2,2),(3,1),(3,2)
    SetExpr d = SetExpr::lower_triangle();
    std::vector<Nat> pts;
    for (Nat i = 0; i < 10; ++i)
        for (Nat j = 0; j <= i; ++j) pts.push_back(sp.encode({i, j}));
    std::sort(pts.begin(), pts.end());
    Window dw{pts.back() + 1, pts};
    auto gd = find_grid_copy(dw, 2);
    REQUIRE(gd.has_value());
    CHECK(gd->v1 == 1);
    CHECK(gd->v2 == 0);
    CHECK(gd->alpha == 1);
    CHECK(grid_witness_valid(*gd, d));

    CHECK(!find_grid_copy(Window{0, {}}, 1).has_value());
}

TEST_CASE("grid detection is monotone in the side") {
    std::mt19937_64 rng(22);
    auto sp = BaseSpace::omega_squared();
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Nat> pts;
        for (int i = 0; i < 60; ++i) pts.push_back(sp.encode({rng() % 12, rng() % 12}));
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        Window w{pts.empty() ? 0 : pts.back() + 1, pts};
        for (Nat k = 3; k >= 2; --k)
            if (find_grid_copy(w, k)) CHECK(find_grid_copy(w, k - 1).has_value());
    }
}

TEST_CASE("fs_contained") {
    auto check = fs_contained({1, 2, 4}, SetExpr::full());
    CHECK(check.contained);
    CHECK(check.sums == std::vector<Nat>{1, 2, 3, 4, 5, 6, 7});

    auto check2 = fs_contained({1, 2}, SetExpr::evens());
    CHECK(!check2.contained);
    CHECK(check2.missing_sum == std::optional<Nat>(1));

    auto check3 = fs_contained({2, 4, 8}, SetExpr::evens());
    CHECK(check3.contained);
    CHECK(check3.sums == std::vector<Nat>{2, 4, 6, 8, 10, 12, 14});
}

TEST_CASE("fs containment is monotone under sub-generators") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Nat> b;
        for (int i = 0; i < 5; ++i) b.push_back(1 + rng() % 30);
        SetExpr a = SetExpr::ap(rng() % 3, 1 + rng() % 3);
        if (!fs_contained(b, a).contained) continue;
        for (std::size_t drop = 0; drop < b.size(); ++drop) {
            auto sub = b;
            sub.erase(sub.begin() + drop);
            if (!sub.empty()) CHECK(fs_contained(sub, a).contained);
        }
    }
}

TEST_CASE("find_fs_generator prefers small distinct-sum generators") {
    auto evens100 = SetExpr::evens().window(100);
    auto b = find_fs_generator(evens100, 3);
    REQUIRE(b.has_value());
    CHECK(*b == std::vector<Nat>{2, 4, 8});

    Window tiny{4, {1, 2, 3}};
    auto b2 = find_fs_generator(tiny, 2);
    REQUIRE(b2.has_value());
    CHECK(*b2 == std::vector<Nat>{1, 2});

    auto odds100 = SetExpr::odds().window(100);
    CHECK(!find_fs_generator(odds100, 2).has_value());
}

TEST_CASE("ramsey blocks in colex order") {
    auto sp = BaseSpace::n_subsets(2);
    SetExpr all_pairs = SetExpr::subsets_of(SetExpr::explicit_set({0, 1, 2, 3, 4, 5}), 2);
    auto w = all_pairs.window(sp.encode({4, 5}) + 1);
    auto b = ramsey_block(w, sp, 3);
    REQUIRE(b.has_value());
    CHECK(*b == std::vector<Nat>{0, 1, 2});

    // pairs {i,j} with i+j even
    SetExpr parity = SetExpr::set_union(SetExpr::subsets_of(SetExpr::evens(), 2),
                                        SetExpr::subsets_of(SetExpr::odds(), 2));
    auto w2 = parity.window(200);
    auto b2 = ramsey_block(w2, sp, 3);
    REQUIRE(b2.has_value());
    CHECK(*b2 == std::vector<Nat>{0, 2, 4});

    CHECK(!ramsey_block(Window{0, {}}, sp, 2).has_value());
    CHECK_THROWS_AS((void)ramsey_block(w, sp, 13), Error);
}

TEST_CASE("column profile of the lower triangle") {
    auto sp = BaseSpace::omega_squared();
    std::vector<Nat> pts;
    for (Nat i = 0; i < 8; ++i)
        for (Nat j = 0; j <= i; ++j) pts.push_back(sp.encode({i, j}));
    std::sort(pts.begin(), pts.end());
    auto p = column_profile(Window{pts.back() + 1, pts});
    for (Nat k = 0; k < 8; ++k) CHECK(p.counts[k] == k + 1);
    CHECK(p.max_count == 8);
    CHECK(p.argmax == std::optional<Nat>(7));

    CHECK(column_profile(Window{0, {}}).max_count == 0);
}
