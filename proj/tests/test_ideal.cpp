#include <random>

#include "doctest.h"
#include "idealab/ideal.hpp"

using namespace idealab;

namespace {

SetExpr d_set() { return SetExpr::lower_triangle(); }

std::vector<IdealDescriptor> catalog() {
    return {IdealDescriptor::fin(),
            IdealDescriptor::van_der_waerden(),
            IdealDescriptor::hindman(),
            IdealDescriptor::folkman(),
            IdealDescriptor::density_zero(),
            IdealDescriptor::summable(WeightFn::harmonic()),
            IdealDescriptor::erdos_ulam(WeightFn::constant(Rat(1)))};
}

SetExpr random_omega_set(std::mt19937_64& rng) {
    switch (rng() % 7) {
        case 0: return SetExpr::evens();
        case 1: return SetExpr::odds();
        case 2: return SetExpr::squares();
        case 3: return SetExpr::powers(2 + rng() % 3);
        case 4: return SetExpr::ap(rng() % 8, 1 + rng() % 8);
        case 5: {
            std::vector<Nat> e;
            for (int i = 0; i < 20; ++i) e.push_back(rng() % 300);
            return SetExpr::explicit_set(e);
        }
        default:
            return SetExpr::set_union(SetExpr::ap(rng() % 4, 2 + rng() % 4),
                                      SetExpr::explicit_set({Nat(rng() % 50)}));
    }
}

}  // namespace

TEST_CASE("fin membership") {
    CHECK(member(IdealDescriptor::fin(), SetExpr::powers(2), 5).kind == VerdictKind::ProvenOut);
    CHECK(member(IdealDescriptor::fin(), SetExpr::explicit_set({1, 2, 3}), 5).kind ==
          VerdictKind::ProvenIn);
    CHECK(member(IdealDescriptor::fin(), SetExpr::fs_set({1, 2, 4}), 5).kind ==
          VerdictKind::ProvenIn);
}

TEST_CASE("van der waerden membership") {
    auto v = member(IdealDescriptor::van_der_waerden(), SetExpr::evens(), 50);
    CHECK(v.kind == VerdictKind::EvidenceOut);
    CHECK(v.certificate["type"] == "ap");
    CHECK(v.strength >= 50);
    CHECK(replay_certificate(IdealDescriptor::van_der_waerden(), SetExpr::evens(), v));

    // powers of two carry a structural progression bound
    auto p = member(IdealDescriptor::van_der_waerden(), SetExpr::powers(2), 10);
    CHECK(p.kind == VerdictKind::ProvenIn);
    CHECK(p.certificate["type"] == "ap-bound");
}

TEST_CASE("ed-fin membership") {
    auto v = member(IdealDescriptor::ed_fin(), d_set(), 10);
    CHECK(v.kind == VerdictKind::EvidenceOut);
    CHECK(v.strength >= 10);
    CHECK(replay_certificate(IdealDescriptor::ed_fin(), d_set(), v));

    // a bounded strip of D: columns hold at most 3 points
    auto sp = BaseSpace::omega_squared();
    SetExpr strip = SetExpr::set_intersection(
        d_set(), SetExpr::product(SetExpr::full(), SetExpr::explicit_set({0, 1, 2}), sp));
    auto vs = member(IdealDescriptor::ed_fin(), strip, 10);
    CHECK(vs.kind == VerdictKind::ProvenIn);
    CHECK(vs.certificate["bound"] == 3);

    SetExpr off_d = SetExpr::product(SetExpr::explicit_set({0}), SetExpr::explicit_set({5}), sp);
    CHECK_THROWS_AS((void)member(IdealDescriptor::ed_fin(), off_d, 5), Error);
}

TEST_CASE("ramsey membership") {
    auto v = member(IdealDescriptor::ramsey(2), SetExpr::subsets_of(SetExpr::evens(), 2), 6);
    CHECK(v.kind == VerdictKind::ProvenOut);

    std::vector<Nat> few;
    auto sp = BaseSpace::n_subsets(2);
    few.push_back(sp.encode({0, 1}));
    few.push_back(sp.encode({2, 3}));
    auto vin = member(IdealDescriptor::ramsey(2), SetExpr::explicit_set(few, sp), 4);
    CHECK(vin.kind == VerdictKind::ProvenIn);
}

TEST_CASE("hindman and folkman membership") {
    auto h = member(IdealDescriptor::hindman(), SetExpr::odds(), 6);
    CHECK(h.kind == VerdictKind::ProvenIn);
    CHECK(h.certificate["type"] == "residue-obstruction");

    auto he = member(IdealDescriptor::hindman(), SetExpr::evens(), 4);
    CHECK(he.kind == VerdictKind::EvidenceOut);
    CHECK(replay_certificate(IdealDescriptor::hindman(), SetExpr::evens(), he));

    auto f = member(IdealDescriptor::folkman(), SetExpr::evens(), 4);
    CHECK(f.kind == VerdictKind::EvidenceOut);

    auto fo = member(IdealDescriptor::folkman(), SetExpr::odds(), 4);
    CHECK(fo.kind == VerdictKind::ProvenIn);
}

TEST_CASE("gallai membership") {
    auto v = member(IdealDescriptor::gallai(2), SetExpr::full(BaseSpace::omega_squared()), 3);
    CHECK(v.kind == VerdictKind::EvidenceOut);
    CHECK(v.certificate["type"] == "grid");

    // D contains grids of every side, so the verdict is out-evidence here too
    auto vd = member(IdealDescriptor::gallai(2), d_set(), 3);
    CHECK(vd.kind == VerdictKind::EvidenceOut);
}

TEST_CASE("density-zero membership") {
    CHECK(member(IdealDescriptor::density_zero(), SetExpr::squares(), 5).kind ==
          VerdictKind::ProvenIn);
    CHECK(member(IdealDescriptor::density_zero(), SetExpr::evens(), 5).kind ==
          VerdictKind::ProvenOut);
    CHECK(member(IdealDescriptor::density_zero(), SetExpr::full(), 5).kind ==
          VerdictKind::ProvenOut);

    // annotations are cross-checked before being trusted
    Annotation good;
    good.density = Rat(0);
    good.justification = "one element per dyadic block";
    BlockRuleSpec rule;
    rule.kind = BlockRuleSpec::Kind::First;
    rule.count = CountFn::constant_count(BigInt(1));
    SetExpr sparse = SetExpr::block_rule(GridSchedule::dyadic(), rule).with_annotation(good);
    auto v = member(IdealDescriptor::density_zero(), sparse, 5);
    CHECK(v.kind == VerdictKind::ProvenIn);

    Annotation bad;
    bad.density = Rat(0);
    bad.justification = "wrong";
    SetExpr lying =
        SetExpr::set_union(SetExpr::evens(), SetExpr::explicit_set({1})).with_annotation(bad);
    CHECK_THROWS_AS((void)member(IdealDescriptor::density_zero(), lying, 5), Error);
}

TEST_CASE("summable membership") {
    auto geo = IdealDescriptor::summable(WeightFn::geometric(make_rat(1, 2)));
    CHECK(member(geo, SetExpr::full(), 5).kind == VerdictKind::ProvenIn);

    auto harm = IdealDescriptor::summable(WeightFn::harmonic());
    CHECK(member(harm, SetExpr::explicit_set({3, 5}), 5).kind == VerdictKind::ProvenIn);

    MemberOptions opts;
    opts.divergence_scale = Rat(5);  // desk-scale threshold
    auto v = member(harm, SetExpr::evens(), 20, opts);
    CHECK(v.kind == VerdictKind::EvidenceOut);
}

TEST_CASE("erdos-ulam membership") {
    auto eu = IdealDescriptor::erdos_ulam(WeightFn::constant(Rat(1)));
    CHECK(member(eu, SetExpr::squares(), 5).kind == VerdictKind::ProvenIn);
    CHECK(member(eu, SetExpr::evens(), 5).kind == VerdictKind::ProvenOut);
    CHECK_THROWS_AS((void)IdealDescriptor::erdos_ulam(WeightFn::geometric(make_rat(1, 2))), Error);
}

TEST_CASE("farah membership closed forms") {
    auto fact = GridSchedule::factorial();
    auto fd = IdealDescriptor::farah_density(fact);

    BlockRuleSpec last1;
    last1.kind = BlockRuleSpec::Kind::Last;
    last1.count = CountFn::constant_count(BigInt(1));
    CHECK(member(fd, SetExpr::block_rule(fact, last1), 5).kind == VerdictKind::ProvenIn);

    BlockRuleSpec half;
    half.kind = BlockRuleSpec::Kind::First;
    half.count = CountFn::scaled_length(make_rat(1, 2));
    auto v = member(fd, SetExpr::block_rule(fact, half), 5);
    CHECK(v.kind == VerdictKind::ProvenOut);
    CHECK(v.certificate["limit"] == "1/2");

    CHECK(member(fd, SetExpr::squares(), 8).kind == VerdictKind::EvidenceIn);
}

TEST_CASE("restriction") {
    auto rfin = restrict_ideal(IdealDescriptor::fin(), SetExpr::evens());
    CHECK(member(rfin, SetExpr::evens(), 5).kind == VerdictKind::ProvenOut);

    auto rid = restrict_ideal(IdealDescriptor::density_zero(), SetExpr::explicit_set({1, 2, 3}));
    CHECK(member(rid, SetExpr::set_union(SetExpr::evens(), SetExpr::odds()), 5).kind ==
          VerdictKind::ProvenIn);

    auto rd = restrict_ideal(IdealDescriptor::density_zero(), SetExpr::evens());
    auto v = member(rd, SetExpr::ap(0, 4), 8);
    CHECK(v.kind == VerdictKind::EvidenceOut);
}

TEST_CASE("restriction coherence on random triples") {
    std::mt19937_64 rng(41);
    auto ideals = catalog();
    for (int i = 0; i < 100; ++i) {
        const auto& ideal = ideals[rng() % ideals.size()];
        SetExpr x = random_omega_set(rng);
        SetExpr a = random_omega_set(rng);
        auto lhs = member(restrict_ideal(ideal, x), a, 6);
        auto rhs = member(ideal, SetExpr::set_intersection(a, x), 6);
        CHECK(lhs.kind == rhs.kind);
    }
}

TEST_CASE("direct sum") {
    auto dsum = direct_sum(IdealDescriptor::fin(), IdealDescriptor::fin());
    auto tc = BaseSpace::two_copies();
    SetExpr a = SetExpr::product(SetExpr::explicit_set({0}), SetExpr::evens(), tc);
    CHECK(member(dsum, a, 6).kind == VerdictKind::ProvenOut);

    SetExpr b = SetExpr::product(SetExpr::explicit_set({0, 1}), SetExpr::explicit_set({1, 2}), tc);
    CHECK(member(dsum, b, 6).kind == VerdictKind::ProvenIn);
}

TEST_CASE("fin-oplus-full") {
    auto ideal = IdealDescriptor::fin_oplus_full();
    auto tc = BaseSpace::two_copies();
    SetExpr a = SetExpr::set_union(
        SetExpr::product(SetExpr::explicit_set({0}), SetExpr::full(), tc),
        SetExpr::product(SetExpr::explicit_set({1}), SetExpr::explicit_set({3, 7}), tc));
    CHECK(member(ideal, a, 6).kind == VerdictKind::ProvenIn);

    SetExpr b = SetExpr::product(SetExpr::explicit_set({1}), SetExpr::evens(), tc);
    CHECK(member(ideal, b, 6).kind == VerdictKind::ProvenOut);
}

TEST_CASE("fubini product") {
    auto finfin = fubini_product(IdealDescriptor::fin(), IdealDescriptor::fin());
    auto sp = BaseSpace::omega_times_omega();
    SetExpr col = SetExpr::product(SetExpr::explicit_set({2}), SetExpr::full(), sp);
    auto v = member(finfin, col, 8);
    CHECK(v.kind == VerdictKind::ProvenIn);

    SetExpr plane = SetExpr::full(sp);
    auto vp = member(finfin, plane, 8);
    CHECK(vp.kind == VerdictKind::EvidenceOut);

    auto ww =
        fubini_product(IdealDescriptor::van_der_waerden(), IdealDescriptor::van_der_waerden());
    auto vd = member(ww, d_set(), 8);
    CHECK(vd.kind == VerdictKind::EvidenceIn);
}

TEST_CASE("fubini sum") {
    auto ideal = fubini_sum(IdealDescriptor::fin(),
                            {IdealDescriptor::fin(), IdealDescriptor::density_zero()},
                            IdealDescriptor::fin());
    auto sp = BaseSpace::omega_times_omega();
    // row 1 judged by the density ideal: squares sit inside it
    SetExpr a = SetExpr::product(SetExpr::explicit_set({1}), SetExpr::squares(), sp);
    CHECK(member(ideal, a, 8).kind == VerdictKind::ProvenIn);
}

TEST_CASE("soundness: out certificates replay") {
    std::mt19937_64 rng(42);
    auto ideals = catalog();
    for (int i = 0; i < 120; ++i) {
        const auto& ideal = ideals[rng() % ideals.size()];
        SetExpr a = random_omega_set(rng);
        Verdict v = member(ideal, a, 4 + rng() % 8);
        if (v.out_ish()) CHECK(replay_certificate(ideal, a, v));
    }
}

TEST_CASE("monotonicity: subsets of members never prove out") {
    std::mt19937_64 rng(43);
    auto ideals = catalog();
    for (int i = 0; i < 80; ++i) {
        const auto& ideal = ideals[rng() % ideals.size()];
        SetExpr b = random_omega_set(rng);
        SetExpr a = SetExpr::set_intersection(b, random_omega_set(rng));
        Verdict vb = member(ideal, b, 6);
        if (vb.kind == VerdictKind::ProvenIn)
            CHECK(member(ideal, a, 6).kind != VerdictKind::ProvenOut);
    }
}

TEST_CASE("proven verdicts are stable under effort") {
    std::mt19937_64 rng(44);
    auto ideals = catalog();
    for (int i = 0; i < 60; ++i) {
        const auto& ideal = ideals[rng() % ideals.size()];
        SetExpr a = random_omega_set(rng);
        Verdict low = member(ideal, a, 2);
        if (low.proven()) {
            Verdict high = member(ideal, a, 16);
            CHECK(low.kind == high.kind);
        }
    }
}

TEST_CASE("finite-union closure never contradicts a proven-out part") {
    std::mt19937_64 rng(45);
    std::vector<IdealDescriptor> ideals = {IdealDescriptor::van_der_waerden(),
                                           IdealDescriptor::hindman()};
    for (int i = 0; i < 60; ++i) {
        const auto& ideal = ideals[rng() % ideals.size()];
        SetExpr a = random_omega_set(rng);
        SetExpr b = random_omega_set(rng);
        Verdict va = member(ideal, a, 5);
        Verdict vu = member(ideal, SetExpr::set_union(a, b), 5);
        if (va.kind == VerdictKind::ProvenOut) CHECK(vu.kind != VerdictKind::ProvenIn);
    }
}

TEST_CASE("space mismatches are rejected") {
    CHECK_THROWS_AS((void)member(IdealDescriptor::fin(), d_set(), 3), Error);
    CHECK_THROWS_AS((void)member(IdealDescriptor::ed_fin(), SetExpr::evens(), 3), Error);
}
