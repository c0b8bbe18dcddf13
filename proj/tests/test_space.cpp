#include <random>

#include "doctest.h"
#include "idealab/base_space.hpp"
#include "idealab/schedule.hpp"

using namespace idealab;

TEST_CASE("pairing is bijective on windows") {
    for (Nat m = 0; m < 10'000; ++m) {
        auto p = pair_decode(m);
        CHECK(pair_encode(p[0], p[1]) == m);
    }
    CHECK(pair_encode(0, 0) == 0);
    // anti-diagonals are traversed by ascending row
    CHECK(pair_encode(0, 1) == 1);
    CHECK(pair_encode(1, 0) == 2);
}

TEST_CASE("encode/decode round trip on random points per space") {
    std::mt19937_64 rng(7);
    std::vector<BaseSpace> spaces = {BaseSpace::omega(), BaseSpace::omega_squared(),
                                     BaseSpace::two_copies(), BaseSpace::n_subsets(2),
                                     BaseSpace::n_subsets(3), BaseSpace::omega_times_omega()};
    for (const auto& sp : spaces) {
        for (int i = 0; i < 10'000; ++i) {
            Nat code = rng() % 1'000'000;
            auto pt = sp.decode(code);
            CHECK(sp.encode(pt) == code);
        }
    }
}

TEST_CASE("colex encoding of n-subsets") {
    BaseSpace s2 = BaseSpace::n_subsets(2);
    CHECK(s2.encode({0, 1}) == 0);
    CHECK(s2.encode({0, 2}) == 1);
    CHECK(s2.encode({1, 2}) == 2);
    CHECK(s2.encode({0, 3}) == 3);
    CHECK(s2.decode(2) == std::vector<Nat>{1, 2});
    // singleton space is the identity
    BaseSpace s1 = BaseSpace::n_subsets(1);
    CHECK(s1.encode({42}) == 42);
}

TEST_CASE("two-copies interleaving") {
    BaseSpace tc = BaseSpace::two_copies();
    CHECK(tc.encode({0, 5}) == 10);
    CHECK(tc.encode({1, 5}) == 11);
    CHECK(tc.decode(11) == std::vector<Nat>{1, 5});
}

TEST_CASE("factorial schedule offsets are exact") {
    auto s = GridSchedule::factorial();
    CHECK(s.length(0) == 1);
    CHECK(s.length(4) == 24);
    CHECK(s.start(4) == 1 + 1 + 2 + 6);
    CHECK(s.start(10) == BigInt("409114"));
    CHECK(*s.block_of(BigInt(9)) == 3);  // I_3 = [4, 10)
    CHECK(*s.block_of(BigInt(10)) == 4);
}

TEST_CASE("two-pow-factorial schedule") {
    auto s = GridSchedule::two_pow_factorial();
    CHECK(s.length(0) == 1);      // (2^0)! = 1
    CHECK(s.length(1) == 2);      // (2^1)! = 2
    CHECK(s.length(3) == 40320);  // (2^3)! = 8!
    CHECK(s.start(3) == 1 + 2 + 24);
}

TEST_CASE("dyadic-kn schedule reproduces the exponent recursion") {
    auto s = GridSchedule::dyadic_kn();
    CHECK(s.k_exponent(0) == 0);
    CHECK(s.k_exponent(1) == 0);
    CHECK(s.k_exponent(2) == 1);
    CHECK(s.k_exponent(3) == 3);
    CHECK(s.k_exponent(4) == 5);
    CHECK(s.k_exponent(5) == 8);
    // growth law 2^{k_n} >= n 2^{k_{n-1}} for n <= 40
    for (std::size_t n = 1; n <= 40; ++n) {
        CHECK(two_pow(s.k_exponent(n)) >=
              BigInt(static_cast<unsigned long>(n)) * two_pow(s.k_exponent(n - 1)));
    }
    CHECK(s.start(1) == 1);
    CHECK(s.end(1) == 2);
    CHECK(s.start(2) == 2);
    CHECK(s.end(2) == 8);
    CHECK(s.length(0) == 0);  // I_0 = [2^0, 2^0) is empty
}

TEST_CASE("schedules partition from their start offset") {
    for (auto s : {GridSchedule::factorial(), GridSchedule::dyadic(),
                   GridSchedule::custom({BigInt(3), BigInt(5)})}) {
        BigInt expected = s.start_offset();
        for (std::size_t n = 0; n < 12; ++n) {
            CHECK(s.start(n) == expected);
            expected += s.length(n);
            CHECK(s.end(n) == expected);
        }
    }
}
