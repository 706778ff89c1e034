#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "rbmo/space.hpp"

using namespace rbmo;

namespace {

Space make_s3() { return Space::from_coords({{0.0}, {1.0}, {3.0}}, {1.0, 1.0, 1.0}); }

std::vector<PointId> sorted_members(const Space& s, const Ball& b) { return s.members(b); }

}  // namespace

TEST_CASE("load: euclidean coords") {
    const Space s3 = make_s3();
    CHECK(s3.size() == 3);
    CHECK(s3.dist(0, 2) == 3.0);
    CHECK(s3.name(0) == "p0");
}

TEST_CASE("load: explicit matrix and total mass") {
    const Space s = Space::from_matrix({{0.0, 1.0}, {1.0, 0.0}}, {2.0, 3.0});
    CHECK(s.size() == 2);
    CHECK(s.total_mass() == 5.0);
}

TEST_CASE("load: triangle violation reports the offending triple") {
    const std::vector<std::vector<double>> dist{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
    CHECK_THROWS_WITH_AS(Space::from_matrix(dist, {1, 1, 1}, {"a", "b", "c"}),
                         "triangle violation (a,b,c)", ValidationError);
}

TEST_CASE("load: other validation errors") {
    CHECK_THROWS_AS(Space::from_matrix({{0, 1}, {2, 0}}, {1, 1}), ValidationError);  // asymmetric
    CHECK_THROWS_AS(Space::from_matrix({{0, 1}, {1, 0}}, {1, 0}), ValidationError);  // weight
    CHECK_THROWS_AS(Space::from_matrix({{0, 0}, {0, 0}}, {1, 1}), ValidationError);  // zero dist
}

TEST_CASE("restrict") {
    const Space s3 = make_s3();
    const Space sub = s3.restrict({0, 1});
    CHECK(sub.size() == 2);
    CHECK(sub.dist(0, 1) == 1.0);

    const Space all = s3.restrict({0, 1, 2});
    CHECK(all.size() == 3);
    CHECK(all.dist(0, 2) == 3.0);

    const Space one = s3.restrict({2});
    CHECK(one.size() == 1);
    CHECK(one.total_mass() == 1.0);

    CHECK_THROWS_AS(s3.restrict({}), std::invalid_argument);
}

TEST_CASE("ball members and measure") {
    const Space s3 = make_s3();
    CHECK(sorted_members(s3, Ball{0, 1.5}) == std::vector<PointId>{0, 1});
    CHECK(sorted_members(s3, Ball{0, 0.5}) == std::vector<PointId>{0});
    CHECK(sorted_members(s3, Ball{1, 2.5}) == std::vector<PointId>{0, 1, 2});
    CHECK(s3.measure(Ball{0, 1.5}) == 2.0);
    CHECK(s3.measure(Ball{0, 0.5}) == 1.0);
    CHECK(s3.measure(Ball{1, 2.0 * 3.0}) == s3.total_mass());
    CHECK_THROWS_AS(s3.members(Ball{7, 1.0}), std::invalid_argument);
}

TEST_CASE("dilate") {
    CHECK(dilate(Ball{0, 2.0}, 5.0) == Ball{0, 10.0});
    CHECK(dilate(Ball{1, 3.5}, 1.0) == Ball{1, 3.5});
    CHECK(dilate(dilate(Ball{0, 2.0}, 2.0), 0.5) == Ball{0, 2.0});
    CHECK_THROWS_AS(dilate(Ball{0, 1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("canonical family radii") {
    const Space s3 = make_s3();
    const CanonicalFamily fam(s3);
    REQUIRE(fam.count(0) == 3);
    CHECK(fam.ball(fam.index(0, 0)).radius == 0.5);
    CHECK(fam.ball(fam.index(0, 1)).radius == 2.0);
    CHECK(fam.ball(fam.index(0, 2)).radius == 6.0);
    CHECK(sorted_members(s3, fam.ball(fam.index(0, 0))) == std::vector<PointId>{0});
    CHECK(sorted_members(s3, fam.ball(fam.index(0, 1))) == std::vector<PointId>{0, 1});
    CHECK(sorted_members(s3, fam.ball(fam.index(0, 2))) == std::vector<PointId>{0, 1, 2});

    const Space one = Space::from_coords({{0.0}}, {1.0});
    const CanonicalFamily fam1(one);
    REQUIRE(fam1.size() == 1);
    CHECK(fam1.ball(0).radius == 2.0);

    const Space two = Space::from_matrix({{0, 1}, {1, 0}}, {1, 1});
    const CanonicalFamily fam2(two);
    REQUIRE(fam2.count(0) == 2);
    CHECK(fam2.ball(fam2.index(0, 0)).radius == 0.5);
    CHECK(fam2.ball(fam2.index(0, 1)).radius == 2.0);
}

TEST_CASE("canonicalize snaps to the member-set representative") {
    const Space s3 = make_s3();
    const CanonicalFamily fam(s3);
    CHECK(fam.canonicalize(s3, Ball{0, 1.2}) == Ball{0, 2.0});
    CHECK(fam.canonicalize(s3, Ball{0, 100.0}) == Ball{0, 6.0});
    for (const Ball& b : fam.balls()) CHECK(fam.canonicalize(s3, b) == b);
}

TEST_CASE("canonicalize: idempotent and member-set preserving on random balls") {
    const Space grid = generate_uniform_grid(8, 1);
    const CanonicalFamily fam(grid);
    std::mt19937_64 rng(17);
    for (int it = 0; it < 200; ++it) {
        const PointId c = static_cast<PointId>(rng() % grid.size());
        const double r = 1e-3 + (rng() % 10000) / 500.0;
        const Ball b{c, r};
        const Ball snapped = fam.canonicalize(grid, b);
        CHECK(snapped.center == c);
        CHECK(grid.members(snapped) == grid.members(b));
        CHECK(fam.canonicalize(grid, snapped) == snapped);
    }
}

TEST_CASE("integrate and average") {
    const Space s3 = make_s3();
    const std::vector<double> f{1.0, 0.0, 0.0};
    CHECK(s3.integrate(Ball{0, 1.5}, f) == 1.0);
    CHECK(s3.average(Ball{0, 1.5}, f) == 0.5);

    const std::vector<double> c{3.25, 3.25, 3.25};
    CHECK(s3.average(Ball{1, 2.5}, c) == 3.25);

    const std::vector<double> g{0.0, 0.0, 1.0};
    CHECK(s3.integrate(Ball{1, 2.5}, g) == 1.0);
    CHECK(s3.average(Ball{1, 2.5}, g) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("generators") {
    const Space grid = generate_space("uniform_grid(4,1)");
    CHECK(grid.size() == 4);
    CHECK(grid.dist(0, 3) == 3.0);
    CHECK(grid.weight(2) == 1.0);

    const Space dust = generate_space("cantor_dust(2)");
    REQUIRE(dust.size() == 4);
    CHECK(dust.weight(0) == 0.25);
    CHECK(dust.dist(0, 1) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(dust.dist(0, 3) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));

    const Space seg = generate_space("segment_plus_cluster(8,100)");
    REQUIRE(seg.size() == 9);
    CHECK(seg.weight(8) == 1000.0);
    CHECK(seg.dist(7, 8) == 100.0);

    const Space r1 = generate_space("random_euclidean(12,7)");
    const Space r2 = generate_space("random_euclidean(12,7)");
    CHECK(r1.dist(3, 9) == r2.dist(3, 9));  // deterministic

    CHECK_THROWS_AS(generate_space("banana(3)"), ConfigError);
}

TEST_CASE("membership monotone in the radius") {
    const Space grid = generate_uniform_grid(6, 1);
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        const PointId c = static_cast<PointId>(rng() % grid.size());
        const double r1 = 0.1 + (rng() % 1000) / 100.0;
        const double r2 = r1 + (rng() % 1000) / 100.0;
        const auto m1 = grid.members(Ball{c, r1});
        const auto m2 = grid.members(Ball{c, r2});
        CHECK(std::includes(m2.begin(), m2.end(), m1.begin(), m1.end()));
    }
}

TEST_CASE("canonical family realises every open-ball member set exactly once per center") {
    for (const char* spec : {"uniform_grid(5,1)", "cantor_dust(3)", "random_euclidean(9,3)"}) {
        const Space s = generate_space(spec);
        const CanonicalFamily fam(s);
        for (PointId c = 0; c < s.size(); ++c) {
            // exhaustive sweep: radii strictly inside every breakpoint gap and
            // beyond the largest breakpoint realise every distinct set
            std::set<std::vector<PointId>> seen;
            const auto& bp = s.breakpoints(c);
            for (std::size_t k = 0; k < bp.size(); ++k) {
                const double next = k + 1 < bp.size() ? bp[k + 1] : 2.0 * bp[k] + 2.0;
                for (double frac : {0.25, 0.5, 0.75})
                    seen.insert(s.members(Ball{c, bp[k] + frac * (next - bp[k])}));
            }
            std::set<std::vector<PointId>> canonical;
            for (int k = 0; k < fam.count(c); ++k)
                canonical.insert(s.members(fam.ball(fam.index(c, k))));
            CHECK(canonical == seen);
            CHECK(static_cast<int>(canonical.size()) == fam.count(c));
        }
    }
}

TEST_CASE("restrict: ball members are the parent intersection") {
    const Space grid = generate_uniform_grid(8, 1);
    const std::vector<PointId> subset{0, 2, 3, 5, 7};
    const Space sub = grid.restrict(subset);
    std::mt19937_64 rng(11);
    for (int it = 0; it < 100; ++it) {
        const int ci = static_cast<int>(rng() % subset.size());
        const double r = 0.2 + (rng() % 1000) / 120.0;
        const auto sub_members = sub.members(Ball{ci, r});
        std::vector<PointId> mapped;
        for (PointId m : sub_members) mapped.push_back(subset[m]);
        std::vector<PointId> expect;
        for (PointId m : grid.members(Ball{subset[ci], r}))
            if (std::count(subset.begin(), subset.end(), m)) expect.push_back(m);
        CHECK(mapped == expect);
    }
}

TEST_CASE("ball measure bounds: weight(center) <= mu(B) <= mu(X)") {
    for (const char* spec : {"uniform_grid(6,1)", "segment_plus_cluster(5,30)", "cantor_dust(3)"}) {
        const Space s = generate_space(spec);
        const CanonicalFamily fam(s);
        for (const Ball& b : fam.balls()) {
            CHECK(s.measure(b) >= s.weight(b.center));
            CHECK(s.measure(b) <= s.total_mass());
        }
    }
}

TEST_CASE("make_function specs") {
    const Space grid = generate_uniform_grid(6, 1);
    CHECK(make_function(grid, "constant:2.5") == std::vector<double>(6, 2.5));
    const auto spike = make_function(grid, "spike:3");
    CHECK(spike[3] == 1.0);
    CHECK(spike[0] == 0.0);
    const auto saw = make_function(grid, "sawtooth:3");
    CHECK(saw[4] == doctest::Approx(1.0 / 3.0));
    CHECK(make_function(grid, "random:9") == make_function(grid, "random:9"));
    CHECK_THROWS_AS(make_function(grid, "spike:99"), ConfigError);
}
