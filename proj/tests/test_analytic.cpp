#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "walkcast/analytic.hpp"
#include "walkcast/rng.hpp"
#include "walkcast/topology.hpp"

using namespace walkcast;

namespace {

/// Independent oracle: P(tau_a > t) for the walk on Z, where tau_a is the
/// first time the walk reaches +a, by dynamic programming with an absorbing
/// barrier at a. Kept deliberately different from the reflection-identity
/// route used by the library.
Rational hitting_tail_dp(std::int64_t t, std::int64_t a, bool lazy) {
    // state x in [-t, a-1]; offset by t
    std::map<std::int64_t, Rational> mass;
    mass[0] = 1;
    const Rational hold = lazy ? Rational(1, 2) : Rational(0);
    const Rational move = lazy ? Rational(1, 4) : Rational(1, 2);
    for (std::int64_t s = 0; s < t; ++s) {
        std::map<std::int64_t, Rational> next;
        for (const auto& [x, p] : mass) {
            if (lazy) next[x] += p * hold;
            if (x + 1 < a) next[x + 1] += p * move;  // reaching a absorbs
            next[x - 1] += p * move;
        }
        mass = std::move(next);
    }
    Rational alive = 0;
    for (const auto& [x, p] : mass) alive += p;
    return alive;
}

}  // namespace

TEST_CASE("one-step occupation laws") {
    GraphTopology p(GraphKind::Path, 5);
    DistributionVector d0 = evolve_distribution(p, 3, 0);
    CHECK(d0.p == std::vector<double>{0, 0, 1, 0, 0});

    DistributionVector d1 = evolve_distribution(p, 3, 1);
    CHECK(d1.p[1] == doctest::Approx(0.5));
    CHECK(d1.p[3] == doctest::Approx(0.5));
    CHECK(d1.p[2] == doctest::Approx(0.0));

    DistributionVector e1 = evolve_distribution(p, 1, 1);
    CHECK(e1.p[1] == doctest::Approx(1.0));  // endpoint move is forced

    // mass conservation at larger horizons
    DistributionVector d9 = evolve_distribution(p, 2, 9);
    double sum = 0;
    for (double x : d9.p) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("exact evolution anchors the floating-point one") {
    for (GraphKind kind : {GraphKind::Path, GraphKind::Cycle}) {
        GraphTopology g(kind, 6);
        for (std::int64_t t : {1, 4, 11}) {
            DistributionVector approx = evolve_distribution(g, 2, t);
            std::vector<Rational> exact = evolve_distribution_exact(g, 2, t);
            REQUIRE(exact.size() == approx.p.size());
            Rational total = 0;
            for (std::size_t j = 0; j < exact.size(); ++j) {
                CHECK(std::abs(approx.p[j] - static_cast<double>(exact[j])) < 1e-13);
                total += exact[j];
            }
            CHECK(total == 1);
        }
    }
}

TEST_CASE("reversibility, symmetry and the factor-2 ratio bound") {
    GraphTopology p(GraphKind::Path, 16);
    for (std::int64_t t : {0, 1, 5, 20, 64}) {
        ReversibilityReport rep = check_reversibility(p, t);
        CHECK(rep.ok);
        CHECK(rep.max_balance_violation <= 1e-12);
        CHECK(rep.ratio_bounds_ok);
    }
    GraphTopology c(GraphKind::Cycle, 13);
    for (std::int64_t t : {0, 1, 7, 40}) {
        ReversibilityReport rep = check_reversibility(c, t);
        CHECK(rep.ok);
        CHECK(rep.max_symmetry_violation <= 1e-12);
        CHECK(rep.ratio_bounds_ok);
    }
}

TEST_CASE("point masses of the walk on Z") {
    CHECK(z_walk_point_mass({false, 1, 1}) == Rational(1, 2));
    CHECK(z_walk_point_mass({false, 1, -1}) == Rational(1, 2));
    CHECK(z_walk_point_mass({false, 2, 1}) == 0);  // parity
    CHECK(z_walk_point_mass({false, 2, 2}) == Rational(1, 4));
    CHECK(z_walk_point_mass({false, 2, 0}) == Rational(1, 2));
    CHECK(z_walk_point_mass({false, 4, 0}) == Rational(3, 8));

    CHECK(z_walk_point_mass({true, 1, 0}) == Rational(1, 2));
    CHECK(z_walk_point_mass({true, 1, 1}) == Rational(1, 4));
    CHECK(z_walk_point_mass({true, 2, 0}) == Rational(3, 8));
    CHECK(z_walk_point_mass({true, 2, 2}) == Rational(1, 16));
}

TEST_CASE("full law matches point masses and sums to one") {
    for (bool lazy : {false, true}) {
        const std::int64_t t = 25;
        std::vector<Rational> dist = z_walk_distribution(lazy, t);
        REQUIRE(dist.size() == static_cast<std::size_t>(2 * t + 1));
        Rational total = 0;
        for (std::int64_t a = -t; a <= t; ++a) {
            const Rational& q = dist[static_cast<std::size_t>(a + t)];
            CHECK(q == z_walk_point_mass({lazy, t, a}));
            total += q;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("anti-concentration bound") {
    CHECK(z_walk_below_prob(false, 4, 1) == Rational(3, 8));
    CHECK(z_walk_anticoncentration_bound(100, 5) == doctest::Approx(2.0));
    CHECK(z_walk_anticoncentration_bound(64, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(z_walk_anticoncentration_bound(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(z_walk_anticoncentration_bound(10, 0), std::invalid_argument);

    for (bool lazy : {false, true}) {
        for (std::int64_t t : {16, 49, 100, 225}) {
            auto a_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(t)));
            for (std::int64_t a = 1; a <= a_max; ++a) {
                Rational p = z_walk_below_prob(lazy, t, a);
                CHECK(satisfies_anticoncentration_bound(p, t, a));
                CHECK(static_cast<double>(p) <= z_walk_anticoncentration_bound(t, a) + 1e-15);
            }
        }
    }
}

TEST_CASE("hitting tails: reflection identity vs absorbing DP") {
    CHECK(hitting_tail(1, 1, false) == Rational(1, 2));
    CHECK(hitting_tail(2, 2, false) == Rational(3, 4));
    CHECK(hitting_tail(2, 1, false) == Rational(1, 2));
    CHECK(hitting_tail(3, 1, false) == Rational(3, 8));

    for (bool lazy : {false, true}) {
        for (std::int64_t t : {1, 2, 3, 5, 12, 30}) {
            for (std::int64_t a = 1; a <= std::min<std::int64_t>(t, 6); ++a) {
                CHECK(hitting_tail(t, a, lazy) == hitting_tail_dp(t, a, lazy));
            }
        }
    }

    // the tail also sits under the 4a/sqrt(t) envelope on a grid
    for (bool lazy : {false, true}) {
        for (std::int64_t t : {16, 64, 144}) {
            auto a_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(t)));
            for (std::int64_t a = 1; a <= a_max; ++a) {
                CHECK(satisfies_anticoncentration_bound(hitting_tail(t, a, lazy), t, a));
            }
        }
    }
}

TEST_CASE("hitting tails match simulated frequencies") {
    struct Case {
        std::int64_t t;
        std::int64_t a;
        bool lazy;
    };
    for (const Case& c : {Case{100, 5, false}, Case{400, 10, false}, Case{100, 5, true}}) {
        const int trials = 60'000;
        StreamKey key = stream_key(SeedSpec{271'828, 0, static_cast<std::uint64_t>(c.t)},
                                   Stream::Step);
        int survived = 0;
        for (int tr = 0; tr < trials; ++tr) {
            std::int64_t x = 0;
            bool hit = false;
            for (std::int64_t s = 1; s <= c.t && !hit; ++s) {
                std::uint64_t raw =
                    substream_u64(key, static_cast<std::uint64_t>(tr), static_cast<std::uint64_t>(s));
                if (c.lazy) {
                    std::uint64_t u = uniform_below(raw, 4);
                    if (u == 0) x += 1;
                    if (u == 1) x -= 1;
                } else {
                    x += uniform_below(raw, 2) == 0 ? 1 : -1;
                }
                hit = x >= c.a;
            }
            if (!hit) ++survived;
        }
        double freq = static_cast<double>(survived) / trials;
        double exact = static_cast<double>(hitting_tail(c.t, c.a, c.lazy));
        CHECK(std::abs(freq - exact) < 0.01);
    }
}

TEST_CASE("Chernoff envelope") {
    CHECK(chernoff_bound(1.0, 12.0) == doctest::Approx(2.0 * std::exp(-4.0)));
    CHECK(chernoff_bound(0.5, 24.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK_THROWS_AS(chernoff_bound(0.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(chernoff_bound(1.5, 10.0), std::domain_error);
    CHECK_THROWS_AS(chernoff_bound(-0.1, 10.0), std::domain_error);
}

TEST_CASE("exact binomial tail sits under the Chernoff envelope") {
    const int n = 120;
    const Rational p(1, 2);
    const Rational eps(1, 3);
    Rational tail = binomial_two_sided_tail(n, p, eps);
    // cross-check against a direct double summation of the pmf
    double direct = 0.0;
    double mu = 60.0;
    for (int x = 0; x <= n; ++x) {
        if (std::abs(x - mu) >= mu / 3.0) {
            double logpmf = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                            std::lgamma(n - x + 1.0) - n * std::log(2.0);
            direct += std::exp(logpmf);
        }
    }
    CHECK(std::abs(static_cast<double>(tail) - direct) < 1e-12);
    CHECK(static_cast<double>(tail) <= chernoff_bound(1.0 / 3.0, 60.0));
}

TEST_CASE("Hoeffding-Azuma envelope and exact maximal deviation") {
    std::vector<double> c2{1.0, 1.0};
    CHECK(azuma_bound(2.0, c2) == doctest::Approx(2.0 * std::exp(-1.0)));
    std::vector<double> c_mixed{1.0, 2.0, 2.0};
    CHECK(azuma_bound(3.0, c_mixed) == doctest::Approx(2.0 * std::exp(-0.5)));

    CHECK(max_deviation_exact(1, 1) == doctest::Approx(1.0));
    CHECK(max_deviation_exact(2, 2) == doctest::Approx(0.5));
    CHECK(max_deviation_exact(3, 2) == doctest::Approx(0.5));

    // exact <= envelope on a grid of +-1 walks
    for (int t : {5, 10, 20, 40}) {
        std::vector<double> c(static_cast<std::size_t>(t), 1.0);
        for (int b = 1; b <= t; ++b) {
            CHECK(max_deviation_exact(t, b) <= azuma_bound(static_cast<double>(b), c) + 1e-15);
        }
    }
}

TEST_CASE("exact broadcast expectations on tiny instances") {
    GraphTopology p2(GraphKind::Path, 2);
    CHECK(expected_xi_oracle(p2, 2) == Rational(1, 2));
    // on P_2 agents co-located with agent 0 stay green and the rest swap into
    // it after one round, so E[xi] = P(not all co-located) = 3/4 for k = 3
    CHECK(expected_xi_oracle(p2, 3) == Rational(3, 4));

    GraphTopology c3(GraphKind::Cycle, 3);
    CHECK(expected_xi_oracle(c3, 2) == Rational(4, 3));
    // with two agents closure and direct propagation coincide
    CHECK(expected_xi_oracle(c3, 2, PropagationMode::DirectOnly) == Rational(4, 3));

    GraphTopology big(GraphKind::Path, 7);
    CHECK_THROWS_AS(expected_xi_oracle(big, 2), std::domain_error);
    GraphTopology p4(GraphKind::Path, 4);
    CHECK_THROWS_AS(expected_xi_oracle(p4, 4), std::domain_error);
}

TEST_CASE("oracle agrees with a hand-built chain on C_3 with two agents") {
    // from distinct (hence adjacent) vertices the pair meets this round with
    // probability 1/2 (1/4 co-location + 1/4 swap), so E[xi | apart] = 2 and
    // E[xi] = (1/3) * 0 + (2/3) * 2 = 4/3
    GraphTopology c3(GraphKind::Cycle, 3);
    CHECK(expected_xi_oracle(c3, 2) == Rational(1, 3) * 0 + Rational(2, 3) * 2);
}
