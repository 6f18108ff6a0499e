#include <doctest.h>

#include "blockshift/arithmetic.hpp"
#include "blockshift/errors.hpp"
#include "blockshift/realization.hpp"

using namespace blockshift;

namespace {

const Schedule& binary_depth2() {
    static const Schedule s = build_schedule(Alphabet("01"), SparseSetSpec::squares(), 2, {}, Profile::faithful);
    return s;
}

// u = 1, 0, 0, 0, ... over the first `n` indices
TargetSequence one_then_zeros(std::int64_t n) {
    std::vector<Symbol> v(static_cast<std::size_t>(n), 0);
    v[0] = 1;
    return TargetSequence::explicit_list(v);
}

TargetSequence mu_indicator(std::int64_t n) {
    return mu_indicator_target(std::make_shared<const MobiusTable>(n), Alphabet("01"));
}

}  // namespace

TEST_CASE("init_partial examples") {
    const Alphabet a("01");
    const auto x = init_partial(TargetSequence::explicit_list({1, 0, 1}), SparseSetSpec::squares(), {-7, 7});
    CHECK(render(a, x.cells()) == "********1**0***");
    const auto empty = init_partial(TargetSequence::explicit_list({1}), SparseSetSpec::squares(), {-3, 0});
    CHECK(render(a, empty.cells()) == "****");
    const auto mu = init_partial(mu_indicator(4), SparseSetSpec::squares(), {1, 16});
    CHECK(render(a, mu.cells()) == "1**0****0******0");
    CHECK_THROWS_AS(init_partial(TargetSequence::explicit_list({1}), SparseSetSpec::squares(), {1, 4}),
                    IncompleteData);
}

TEST_CASE("fill_level on the central level-1 block") {
    const Schedule& s = binary_depth2();
    const auto x0 = init_partial(one_then_zeros(2), s.sparse, {-7, 7});
    const auto x1 = fill_level(x0, 1, s);
    CHECK(render(s.alphabet, x1.cells()) == "000000101100101");
    CHECK(is_admissible_block(x1.cells(), 1, s).result == Tri::yes);
}

TEST_CASE("fill_level leaves blocks disjoint from S alone") {
    const Schedule& s = binary_depth2();
    const auto x0 = init_partial(one_then_zeros(4), s.sparse, {-22, 22});
    const auto x1 = fill_level(x0, 1, s);
    CHECK(render(s.alphabet, x1.view({-22, -8})) == "***************");
    CHECK(x1.view({-7, 7}).size() == 15);
    CHECK(std::ranges::count(x1.view({8, 22}), kStar) == 0);
}

TEST_CASE("fill_level precondition failures") {
    const Schedule& s = binary_depth2();
    // five filled cells in one level-1 block: not fewer than r/3 = 5
    PartialWindow crowded = PartialWindow::stars({-7, 7});
    for (Coord c : {1, 2, 3, 4, 5}) crowded.set(c, 0);
    CHECK_THROWS_AS(fill_level(crowded, 1, s), DensityViolation);

    // a partially filled level-1 cell inside a level-2 block
    PartialWindow mixed = PartialWindow::stars(block_interval(0, s.m(2)));
    mixed.set(1, 1);
    try {
        fill_level(mixed, 2, s);
        FAIL("expected ConstructionInvariant");
    } catch (const ConstructionInvariant& e) {
        CHECK(e.block() == 0);
    }
    CHECK_THROWS_AS(fill_level(crowded, 3, s), InvalidParameter);
}

TEST_CASE("realize depth 1") {
    const Schedule s = build_schedule(Alphabet("01"), SparseSetSpec::squares(), 1, {}, Profile::faithful);
    const auto x = realize(one_then_zeros(2), s, 1);
    CHECK(render(s.alphabet, x.cells()) == "000000101100101");
    CHECK(verify_realization(x, one_then_zeros(2), s.sparse).checked == 2);
}

TEST_CASE("realize depth 2 and monotonicity") {
    const Schedule& s = binary_depth2();
    const auto u = mu_indicator(833);
    const auto x = realize(u, s, 2);
    CHECK(x.range() == Interval{-693607, 693607});
    const auto report = verify_realization(x, u, s.sparse);
    CHECK(report.passed);
    CHECK(report.checked == 832);

    const Schedule s1 = build_schedule(Alphabet("01"), SparseSetSpec::squares(), 1, {}, Profile::faithful);
    const auto x1 = realize(u, s1, 1);
    CHECK(std::ranges::equal(x1.cells(), x.view({-7, 7})));

    const auto first = s.sparse.value(5);
    PartialWindow bad = x;
    bad.set(first, static_cast<Symbol>(1 - bad.at(first)));
    const auto fail = verify_realization(bad, u, s.sparse);
    CHECK_FALSE(fail.passed);
    CHECK(fail.first_mismatch == 5);

    CHECK(verify_realization(x.slice({-693607, 0}), u, s.sparse).checked == 0);
}

TEST_CASE("realize errors") {
    const Schedule far = build_schedule(Alphabet("01"), SparseSetSpec::explicit_complete({1000000000}), 1, {},
                                        Profile::faithful);
    CHECK_THROWS_AS(realize(one_then_zeros(1), far, 1), EmptyCore);
    const Schedule& s = binary_depth2();
    CHECK_THROWS_AS(realize(one_then_zeros(2), s, 2), IncompleteData);
    CHECK_THROWS_AS(realize(one_then_zeros(2), s, 3), InvalidParameter);
    CHECK_THROWS_AS(one_then_zeros(2).at(3), IncompleteData);
}

TEST_CASE("cycle offset changes filler but not constraints") {
    const Schedule s = build_schedule(Alphabet("01"), SparseSetSpec::squares(), 1, {}, Profile::faithful);
    const auto a = realize(one_then_zeros(2), s, 1, {0});
    const auto b = realize(one_then_zeros(2), s, 1, {1});
    CHECK_FALSE(a == b);
    CHECK(verify_realization(b, one_then_zeros(2), s.sparse).passed);
    CHECK(is_admissible_block(b.cells(), 1, s).result == Tri::yes);
}

TEST_CASE("fast profile realization is seeded") {
    const SparseSetSpec sq = SparseSetSpec::squares();
    const auto table = std::make_shared<const MobiusTable>(100);
    const Alphabet a("0+-");
    const auto u = mu_sign_target(table, a);
    ScheduleConfig c1;
    c1.seed = 1;
    ScheduleConfig c2;
    c2.seed = 2;
    const auto s1 = build_schedule(a, sq, 2, {}, Profile::fast, c1);
    const auto s2 = build_schedule(a, sq, 2, {}, Profile::fast, c2);
    const auto x1 = realize(u, s1, 2);
    CHECK(x1 == realize(u, build_schedule(a, sq, 2, {}, Profile::fast, c1), 2));
    CHECK_FALSE(x1 == realize(u, s2, 2));
    CHECK(verify_realization(x1, u, sq).passed);
    CHECK(is_admissible_block(x1.cells(), 2, s1).result == Tri::yes);
}
