#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "reefopt/substrates.hpp"

using namespace reefopt;

namespace {

bool contiguous_block_swap(const Genome& child, const Genome& a, const Genome& b) {
    // positions taken from b must form one non-empty contiguous block
    std::vector<int> from_b;
    for (std::size_t k = 0; k < child.size(); ++k) {
        if (child[k] == b[k]) from_b.push_back(static_cast<int>(k));
        else if (child[k] != a[k]) return false;
    }
    if (from_b.empty()) return false;
    for (std::size_t k = 1; k < from_b.size(); ++k)
        if (from_b[k] != from_b[k - 1] + 1) return false;
    return true;
}

int alternation_switches(const Genome& child, const Genome& a, const Genome& b) {
    // number of boundaries between a-sourced and b-sourced runs; parents must
    // differ at every position
    int switches = 0;
    bool prev_from_b = child[0] == b[0];
    for (std::size_t k = 1; k < child.size(); ++k) {
        const bool from_b = child[k] == b[k];
        if (from_b != prev_from_b) ++switches;
        prev_from_b = from_b;
    }
    return switches;
}

} // namespace

TEST_CASE("schedule endpoints and interpolation") {
    CHECK(schedule_value(20, 5, 0, 1000) == 20.0);
    CHECK(schedule_value(20, 5, 999, 1000) == 5.0);
    CHECK(schedule_value(0.4, 0.1, 333, 1000) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(schedule_value(7, 99, 0, 1) == 7.0);  // single-iteration run
    CHECK(LinearSchedule{0.2, 0.02}.at(0, 100) == 0.2);
    CHECK_THROWS_AS(schedule_value(1, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("substrate names round-trip") {
    for (auto kind : {SubstrateKind::HS, SubstrateKind::DE, SubstrateKind::TwoPx,
                      SubstrateKind::MPx, SubstrateKind::GM, SubstrateKind::SAbM})
        CHECK(substrate_kind_from_name(substrate_kind_name(kind)) == kind);
    CHECK(substrate_kind_name(SubstrateKind::TwoPx) == "2Px");
    CHECK_THROWS_AS(substrate_kind_from_name("PSO"), std::invalid_argument);
}

TEST_CASE("hs_mutate memory and resampling") {
    const EncodingSpec e = uniform_real_encoding(6, -10.0, 10.0);
    RngStream rng(42);
    const Genome x{1, 2, 3, 4, 5, 6};
    const std::vector<const Genome*> pop{&x};

    // hmcr=1, par=0, single member: pure copy
    CHECK(hs_mutate(x, pop, 1.0, 0.0, {0.0}, e, rng) == x);

    // hmcr=0: every gene uniform in bounds, overwhelmingly different from x
    const Genome u = hs_mutate(x, pop, 0.0, 0.0, {0.0}, e, rng);
    int same = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(u[i] >= -10.0);
        CHECK(u[i] <= 10.0);
        same += u[i] == x[i];
    }
    CHECK(same == 0);

    // par=1 with hmcr=1: each gene moves by exactly +/- delta of its group
    const Genome p = hs_mutate(x, pop, 1.0, 1.0, {0.25}, e, rng);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(std::abs(std::abs(p[i] - x[i]) - 0.25) < 1e-12);

    // per-group deltas are routed by the gene's group tag
    EncodingSpec grouped = uniform_real_encoding(4, -10.0, 10.0);
    grouped.genes[2].group = 1;
    grouped.genes[3].group = 1;
    const Genome y{0, 0, 0, 0};
    const std::vector<const Genome*> pop2{&y};
    const Genome q = hs_mutate(y, pop2, 1.0, 1.0, {0.01, 0.5}, grouped, rng);
    CHECK(std::abs(q[0]) == doctest::Approx(0.01));
    CHECK(std::abs(q[1]) == doctest::Approx(0.01));
    CHECK(std::abs(q[2]) == doctest::Approx(0.5));
    CHECK(std::abs(q[3]) == doctest::Approx(0.5));

    // hmcr=1 keeps every gene colocated in some population member
    const Genome m1{1, 1, 1, 1, 1, 1}, m2{2, 2, 2, 2, 2, 2};
    const std::vector<const Genome*> pop3{&m1, &m2};
    for (int rep = 0; rep < 50; ++rep) {
        const Genome z = hs_mutate(m1, pop3, 1.0, 0.0, {0.0}, e, rng);
        for (double v : z) CHECK((v == 1.0 || v == 2.0));
    }
}

TEST_CASE("de_mutate formula and edge cases") {
    const EncodingSpec e = uniform_real_encoding(2, -100.0, 100.0);
    RngStream rng(7);
    const Genome x1{1, 2}, x2{3, 4}, x3{1, 1};
    const std::vector<const Genome*> pop{&x1, &x2, &x3};

    // either partner ordering may be drawn
    const Genome expect_a{2.0, 3.5};   // x1 + 0.5 (x2 - x3)
    const Genome expect_b{0.0, 0.5};   // x1 + 0.5 (x3 - x2)
    bool saw_a = false, saw_b = false;
    for (int rep = 0; rep < 100; ++rep) {
        const Genome l = de_mutate(x1, pop, 0.5, e, rng);
        if (l == expect_a) saw_a = true;
        else if (l == expect_b) saw_b = true;
        else FAIL("unexpected DE larva");
    }
    CHECK(saw_a);
    CHECK(saw_b);

    // f = 0 returns x1 exactly
    CHECK(de_mutate(x1, pop, 0.0, e, rng) == x1);

    // identical partners cancel
    const Genome dup{5, 5};
    const std::vector<const Genome*> pop2{&x1, &dup, &dup};
    CHECK(de_mutate(x1, pop2, 0.9, e, rng) == x1);

    const std::vector<const Genome*> tiny{&x1, &x2};
    CHECK_THROWS_AS(de_mutate(x1, tiny, 0.5, e, rng), std::invalid_argument);
}

TEST_CASE("crossover_2p swaps one contiguous block") {
    RngStream rng(3);
    const Genome a{1, 1, 1, 1, 1, 1, 1};
    const Genome b{2, 2, 2, 2, 2, 2, 2};
    for (int rep = 0; rep < 500; ++rep) {
        auto [c1, c2] = crossover_2p(a, b, rng);
        CHECK(contiguous_block_swap(c1, a, b));
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(c1[k] + c2[k] == 3.0);
    }
    auto [s1, s2] = crossover_2p(a, a, rng);
    CHECK(s1 == a);
    CHECK(s2 == a);
}

TEST_CASE("crossover_mp alternates exactly m_points times") {
    RngStream rng(11);
    const Genome a{1, 1, 1, 1, 1, 1, 1, 1};
    const Genome b{2, 2, 2, 2, 2, 2, 2, 2};
    for (int m = 1; m <= 7; ++m) {
        for (int rep = 0; rep < 50; ++rep) {
            auto [c1, c2] = crossover_mp(a, b, m, rng);
            CHECK(c1[0] == a[0]);  // leading segment stays with the first parent
            CHECK(alternation_switches(c1, a, b) == m);
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(c1[k] + c2[k] == 3.0);
        }
    }
    // m = 1 reduces to one-point crossover
    for (int rep = 0; rep < 50; ++rep) {
        auto [c1, c2] = crossover_mp(a, b, 1, rng);
        CHECK(contiguous_block_swap(c1, a, b));
    }
    CHECK_THROWS_AS(crossover_mp(a, b, 8, rng), std::invalid_argument);
    CHECK_THROWS_AS(crossover_mp(a, b, 0, rng), std::invalid_argument);
}

TEST_CASE("crossover positionwise multiset property") {
    const EncodingSpec e = uniform_real_encoding(12, -5.0, 5.0);
    RngStream rng(99);
    for (int rep = 0; rep < 10000; ++rep) {
        const Genome a = random_genome(e, rng);
        const Genome b = random_genome(e, rng);
        auto [c1, c2] = rep % 2 == 0 ? crossover_2p(a, b, rng)
                                     : crossover_mp(a, b, 1 + rep % 11, rng);
        for (std::size_t k = 0; k < a.size(); ++k) {
            const bool straight = c1[k] == a[k] && c2[k] == b[k];
            const bool crossed = c1[k] == b[k] && c2[k] == a[k];
            CHECK((straight || crossed));
        }
    }
}

TEST_CASE("gaussian_mutate") {
    const EncodingSpec e = uniform_real_encoding(3, -1000.0, 1000.0);
    RngStream rng(5);
    const Genome x{1, 2, 3};
    CHECK(gaussian_mutate(x, {0, 0, 0}, e, rng) == x);

    // replaying the stream recovers the drawn deltas
    RngStream r1(123), r2(123);
    const Genome l = gaussian_mutate(x, {2.0, 2.0, 2.0}, e, r1);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(l[i] - x[i] == doctest::Approx(2.0 * r2.gaussian()).epsilon(1e-12));

    // sample mean of deltas stays near zero
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) sum += rng.gaussian();
    CHECK(std::abs(sum / draws) < 5.0 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("quadratic map") {
    AttractorSpec zero;
    auto z = quadratic_map_iterate(zero, 10);
    REQUIRE(z.has_value());
    CHECK(z->size() == 10);
    for (const auto& [x, y] : *z) {
        CHECK(x == 0.0);
        CHECK(y == 0.0);
    }

    AttractorSpec ident;
    ident.a[1] = 1.0;   // x' = x
    ident.a[10] = 1.0;  // y' = y
    auto zi = quadratic_map_iterate(ident, 100);
    REQUIRE(zi.has_value());
    for (const auto& [x, y] : *zi) {
        CHECK(x == 0.05);
        CHECK(y == 0.05);
    }

    // deterministic for fixed coefficients
    AttractorSpec s;
    RngStream rng(7);
    for (auto& c : s.a) c = rng.uniform(-1.2, 1.2);
    CHECK(quadratic_map_iterate(s, 200) == quadratic_map_iterate(s, 200));

    AttractorSpec diverging;
    diverging.a[0] = 1.0;
    diverging.a[2] = 4.0;  // x' = 1 + 4 x^2 blows up
    CHECK_FALSE(quadratic_map_iterate(diverging, 50).has_value());

    CHECK_THROWS_AS(quadratic_map_iterate(zero, 1), std::invalid_argument);
    CHECK_THROWS_AS(quadratic_map_iterate(zero, 5001), std::invalid_argument);
}

TEST_CASE("sabm_mutate stays in bounds and clamps idempotently") {
    const EncodingSpec e = uniform_real_encoding(30, -2.0, 2.0);
    RngStream rng(21);
    const Genome x(30, 0.5);
    for (int rep = 0; rep < 20; ++rep) {
        const Genome l = sabm_mutate(x, e, rng, std::vector<double>(30, 0.1));
        CHECK(e.in_bounds(l));
        CHECK(clamp_round(l, e) == l);
    }
}

TEST_CASE("brood changes at most one gene") {
    const EncodingSpec e = uniform_real_encoding(8, -3.0, 3.0);
    RngStream rng(13);
    const Genome x{1, -1, 2, -2, 0, 0.5, -0.5, 3};
    for (int rep = 0; rep < 200; ++rep) {
        const Genome l = brood(x, e, rng);
        int diff = 0;
        for (std::size_t i = 0; i < x.size(); ++i) diff += l[i] != x[i];
        CHECK(diff <= 1);
        CHECK(e.in_bounds(l));
    }
}

TEST_CASE("substrate_spawn dispatch") {
    const EncodingSpec e = uniform_real_encoding(6, -1.0, 1.0);
    RngStream rng(17);
    const Genome x{0, 0, 0, 0, 0, 0};
    const Genome o1{0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, o2{-0.5, -0.5, -0.5, -0.5, -0.5, -0.5};
    const std::vector<const Genome*> pop{&x, &o1, &o2};

    SubstrateConfig cross;
    cross.kind = SubstrateKind::TwoPx;
    CHECK(substrate_spawn(cross, x, pop, e, rng, 0, 100).size() == 2);

    SubstrateConfig gm;
    gm.kind = SubstrateKind::GM;
    CHECK(substrate_spawn(gm, x, pop, e, rng, 0, 100).size() == 1);

    // DE degrades to brooding without two distinct partners
    SubstrateConfig de;
    de.kind = SubstrateKind::DE;
    const std::vector<const Genome*> lonely{&x};
    const auto fallback = substrate_spawn(de, x, lonely, e, rng, 0, 100);
    REQUIRE(fallback.size() == 1);
    int diff = 0;
    for (std::size_t i = 0; i < x.size(); ++i) diff += fallback[0][i] != x[i];
    CHECK(diff <= 1);

    // GM range-proportional sigma follows the schedule
    EncodingSpec wide = uniform_real_encoding(1, 0.0, 50.0);
    SubstrateConfig gmp;
    gmp.kind = SubstrateKind::GM;
    gmp.sigma = {0.2, 0.02};
    gmp.sigma_range_proportional = true;
    RngStream ra(31), rb(31);
    const Genome c{25.0};
    const auto larva = substrate_spawn(gmp, c, {}, wide, ra, 0, 100);
    const double expected = 25.0 + 0.2 * 50.0 * rb.gaussian();
    CHECK(larva[0][0] == doctest::Approx(std::clamp(expected, 0.0, 50.0)));
}

TEST_CASE("substrate config validation") {
    const EncodingSpec e = uniform_real_encoding(4, 0.0, 1.0);
    SubstrateConfig hs;
    hs.kind = SubstrateKind::HS;
    hs.hmcr = 1.5;
    CHECK_THROWS_AS(hs.validate(e), std::invalid_argument);

    SubstrateConfig mpx;
    mpx.kind = SubstrateKind::MPx;
    mpx.m_points = 4;  // >= genome length
    CHECK_THROWS_AS(mpx.validate(e), std::invalid_argument);
    mpx.m_points = 3;
    CHECK_NOTHROW(mpx.validate(e));
}
