#include <doctest.h>

#include <cmath>
#include <set>

#include "assoclab/graphs.hpp"
#include "assoclab/rng.hpp"

using namespace assoclab;

namespace {

// symmetry and hollow diagonal, checked entrywise
void check_symmetric_hollow(const InteractionMatrix& q) {
    const int n = q.size();
    for (int i = 0; i < n; ++i) {
        CHECK(q.entry(i, i) == 0.0);
        for (int j = i + 1; j < n; ++j) CHECK(q.entry(i, j) == q.entry(j, i));
    }
}

}  // namespace

TEST_CASE("curie-weiss entries are 1/n") {
    auto q = build_interaction(GraphFamily::curie_weiss(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(q.entry(i, j) == doctest::Approx(i == j ? 0.0 : 1.0 / 3).epsilon(1e-15));
    check_symmetric_hollow(q);
}

TEST_CASE("complete bipartite n=4 couples the two halves at 2/n") {
    auto q = build_interaction(GraphFamily::complete_bipartite(4));
    // halves {0,1} and {2,3}
    CHECK(q.entry(0, 2) == doctest::Approx(0.5));
    CHECK(q.entry(0, 3) == doctest::Approx(0.5));
    CHECK(q.entry(1, 2) == doctest::Approx(0.5));
    CHECK(q.entry(0, 1) == 0.0);
    CHECK(q.entry(2, 3) == 0.0);
    check_symmetric_hollow(q);
}

TEST_CASE("2x2 lattice: hand enumeration") {
    auto q = build_interaction(GraphFamily::lattice(2, 2));
    REQUIRE(q.size() == 4);
    for (int v = 0; v < 4; ++v) CHECK(q.degree(v) == 2);
    for (int v = 0; v < 4; ++v)
        for (int32_t u : q.neighbors(v)) CHECK(q.entry(v, u) == 1.0);
    CHECK(q.edge_count() == 4);
    check_symmetric_hollow(q);
}

TEST_CASE("lattice edge counts and interior degrees") {
    // edges of a side^dim grid: dim * (side-1) * side^(dim-1)
    for (int side : {2, 3, 4}) {
        for (int dim : {1, 2}) {
            auto q = build_interaction(GraphFamily::lattice(side, dim));
            int64_t expect = 1;
            for (int d = 0; d < dim - 1; ++d) expect *= side;
            expect *= static_cast<int64_t>(dim) * (side - 1);
            CHECK(q.edge_count() == expect);
        }
    }
    auto q = build_interaction(GraphFamily::lattice(4, 2));
    // interior vertex of the 4x4 grid: index 5 = (1,1)
    CHECK(q.degree(5) == 4);
    CHECK(q.degree(0) == 2);  // corner
}

TEST_CASE("assumption report: curie-weiss") {
    auto q = build_interaction(GraphFamily::curie_weiss(100));
    auto rep = check_assumptions(q);
    CHECK(rep.is_regular);
    CHECK(rep.max_entry_times_n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.frobenius_sq == doctest::Approx(0.99).epsilon(1e-12));
    REQUIRE(rep.known_spectral_gap.has_value());
    CHECK(*rep.known_spectral_gap);
    // row sums are exactly (n-1)/n by construction
    for (double rs : q.row_sums()) CHECK(rs == doctest::Approx(0.99).epsilon(1e-13));
}

TEST_CASE("assumption report: lattice 4x4 is not regular") {
    auto q = build_interaction(GraphFamily::lattice(4, 2));
    auto rep = check_assumptions(q);
    CHECK_FALSE(rep.is_regular);
    CHECK(q.row_sum(0) == doctest::Approx(2.0));  // corner row
    CHECK_FALSE(rep.known_spectral_gap.has_value());
}

TEST_CASE("assumption report: complete bipartite n=6") {
    auto q = build_interaction(GraphFamily::complete_bipartite(6));
    auto rep = check_assumptions(q);
    CHECK(rep.is_regular);
    CHECK(rep.max_row_sum_dev <= 1e-12);
    CHECK(rep.max_entry_times_n == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(rep.known_spectral_gap.has_value());
    CHECK(*rep.known_spectral_gap);
}

TEST_CASE("random regular graphs are simple and exactly d-regular") {
    for (auto [n, d] : {std::pair{16, 3}, {50, 7}, {200, 50}, {120, 60}}) {
        auto q = build_interaction(GraphFamily::random_regular(n, d, 7));
        for (int v = 0; v < n; ++v) {
            auto nb = q.neighbors(v);
            REQUIRE(static_cast<int>(nb.size()) == d);
            std::set<int32_t> uniq(nb.begin(), nb.end());
            CHECK(static_cast<int>(uniq.size()) == d);  // no duplicate edges
            CHECK(uniq.count(v) == 0);                  // no self loop
        }
        auto rep = check_assumptions(q);
        CHECK(rep.is_regular);
        CHECK(rep.max_row_sum_dev < 1e-12);
        check_symmetric_hollow(q);
    }
}

TEST_CASE("random regular construction is deterministic in the seed") {
    auto a = build_interaction(GraphFamily::random_regular(64, 6, 42));
    auto b = build_interaction(GraphFamily::random_regular(64, 6, 42));
    auto c = build_interaction(GraphFamily::random_regular(64, 6, 43));
    bool same_ab = true, same_ac = true;
    for (int v = 0; v < 64; ++v) {
        auto na = a.neighbors(v), nb = b.neighbors(v), nc = c.neighbors(v);
        same_ab = same_ab && std::equal(na.begin(), na.end(), nb.begin(), nb.end());
        same_ac = same_ac && nc.size() == na.size() &&
                  std::equal(na.begin(), na.end(), nc.begin(), nc.end());
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(build_interaction(GraphFamily::complete_bipartite(5)), Error);
    CHECK_THROWS_AS(build_interaction(GraphFamily::random_regular(5, 3, 1)), Error);  // odd n*d
    CHECK_THROWS_AS(build_interaction(GraphFamily::random_regular(4, 4, 1)), Error);  // d >= n
    CHECK_THROWS_AS(GraphFamily::lattice(1, 2), Error);
    CHECK_THROWS_AS(GraphFamily::explicit_matrix(2, {0.0, 1.0, 2.0, 0.0}), Error);  // asymmetric
    CHECK_THROWS_AS(GraphFamily::explicit_matrix(2, {1.0, 0.5, 0.5, 0.0}), Error);  // diagonal
}

TEST_CASE("explicit matrix round trip from text") {
    auto fam = explicit_matrix_from_text("0 0.25 0.25\n0.25 0 0.5\n0.25 0.5 0");
    auto q = build_interaction(fam);
    CHECK(q.size() == 3);
    CHECK(q.entry(1, 2) == doctest::Approx(0.5));
    CHECK(q.row_sum(2) == doctest::Approx(0.75));
    check_symmetric_hollow(q);
}
