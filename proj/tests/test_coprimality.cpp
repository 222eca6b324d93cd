#include <catch2/catch_amalgamated.hpp>

#include "germcalc/coprimality.hpp"
#include "helpers.hpp"

using namespace germcalc;
using gtest_helpers::fixture_f1;
using gtest_helpers::fixture_f2;
using gtest_helpers::make_series;
using gtest_helpers::random_series;

namespace {

using Cell = std::pair<int, std::vector<unsigned>>; // column, expected q - p

// The full 19 x 10 index skeleton at m = 3, d = 2, frozen cell by cell;
// columns not listed are null (difference outside N^3 or equal indexes).
const std::vector<std::vector<Cell>> kSkeleton32 = {
    {{0, {1, 0, 0}}, {6, {2, 0, 0}}, {9, {3, 0, 0}}},
    {{0, {0, 1, 0}}, {1, {1, 0, 0}}, {6, {1, 1, 0}}, {7, {2, 0, 0}}, {9, {2, 1, 0}}},
    {{0, {0, 0, 1}}, {2, {1, 0, 0}}, {6, {1, 0, 1}}, {8, {2, 0, 0}}, {9, {2, 0, 1}}},
    {{1, {0, 1, 0}}, {3, {1, 0, 0}}, {6, {0, 2, 0}}, {7, {1, 1, 0}}, {9, {1, 2, 0}}},
    {{1, {0, 0, 1}}, {2, {0, 1, 0}}, {4, {1, 0, 0}}, {6, {0, 1, 1}}, {7, {1, 0, 1}},
     {8, {1, 1, 0}}, {9, {1, 1, 1}}},
    {{2, {0, 0, 1}}, {5, {1, 0, 0}}, {6, {0, 0, 2}}, {8, {1, 0, 1}}, {9, {1, 0, 2}}},
    {{3, {0, 1, 0}}, {7, {0, 2, 0}}, {9, {0, 3, 0}}},
    {{3, {0, 0, 1}}, {4, {0, 1, 0}}, {7, {0, 1, 1}}, {8, {0, 2, 0}}, {9, {0, 2, 1}}},
    {{4, {0, 0, 1}}, {5, {0, 1, 0}}, {7, {0, 0, 2}}, {8, {0, 1, 1}}, {9, {0, 1, 2}}},
    {{5, {0, 0, 1}}, {8, {0, 0, 2}}, {9, {0, 0, 3}}},
    {{6, {1, 0, 0}}, {9, {2, 0, 0}}},
    {{6, {0, 1, 0}}, {7, {1, 0, 0}}, {9, {1, 1, 0}}},
    {{6, {0, 0, 1}}, {8, {1, 0, 0}}, {9, {1, 0, 1}}},
    {{7, {0, 1, 0}}, {9, {0, 2, 0}}},
    {{7, {0, 0, 1}}, {8, {0, 1, 0}}, {9, {0, 1, 1}}},
    {{8, {0, 0, 1}}, {9, {0, 0, 2}}},
    {{9, {1, 0, 0}}},
    {{9, {0, 1, 0}}},
    {{9, {0, 0, 1}}},
};

// The 9 x 12 matrix of the pair ((x-1)(x+y)^2, (1-3y)(x+y)) at d = 2,
// frozen entry by entry; its rank is 6.
const int kFixtureMatrix[9][12] = {
    {0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 1, 0},
    {0, -1, 0, -1, 0, 0, -2, 3, -1, 0, 2, 0},
    {0, 0, 0, -1, 0, -1, -1, 3, -2, 3, 1, 0},
    {0, 0, 0, 0, 0, -1, 0, 0, -1, 3, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, -1, 0, 0, -1, 0},
    {0, 0, 0, 0, 0, 0, 0, -1, 0, -1, -2, 3},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, 3},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1},
};

std::vector<ExactSeries> fixture_pair(unsigned trunc = 6)
{
    return {fixture_f1(trunc), fixture_f2(trunc)};
}

} // namespace

TEST_CASE("index skeleton at m = 3, d = 2")
{
    auto sk = build_index_matrix(3, 2);
    REQUIRE(sk.rows.size() == 19);
    REQUIRE(sk.cols.size() == 10);

    CHECK(sk.rows.front() == MultiIndex{3, 0, 0});
    CHECK(sk.rows.back() == MultiIndex{0, 0, 1});
    CHECK(sk.cols.front() == MultiIndex{2, 0, 0});
    CHECK(sk.cols.back() == MultiIndex{0, 0, 0});

    for (std::size_t i = 0; i < 19; ++i) {
        std::size_t next = 0;
        for (std::size_t j = 0; j < 10; ++j) {
            auto e = sk.entry(i, j);
            bool listed = next < kSkeleton32[i].size()
                          && kSkeleton32[i][next].first == static_cast<int>(j);
            if (listed) {
                REQUIRE(e.has_value());
                CHECK(*e == MultiIndex(kSkeleton32[i][next].second));
                ++next;
            } else {
                // a blank cell in the reference layout: outside N^3 or 0
                CHECK((!e.has_value() || e->degree() == 0));
            }
        }
        CHECK(next == kSkeleton32[i].size());
    }
}

TEST_CASE("skeleton block triangularity and nesting")
{
    for (auto [m, d] : std::vector<std::pair<std::size_t, unsigned>>{{2, 1}, {3, 1}, {2, 3}}) {
        auto small = build_index_matrix(m, d);
        auto big = build_index_matrix(m, d + 1);

        // entries with |q| < |p| vanish
        for (std::size_t i = 0; i < big.rows.size(); ++i)
            for (std::size_t j = 0; j < big.cols.size(); ++j)
                if (big.rows[i].degree() < big.cols[j].degree())
                    CHECK(!big.entry(i, j).has_value());

        // the small skeleton is the bottom-right block of the next one
        std::size_t roff = big.rows.size() - small.rows.size();
        std::size_t coff = big.cols.size() - small.cols.size();
        for (std::size_t i = 0; i < small.rows.size(); ++i) {
            CHECK(big.rows[roff + i] == small.rows[i]);
            for (std::size_t j = 0; j < small.cols.size(); ++j) {
                CHECK(big.cols[coff + j] == small.cols[j]);
                CHECK(big.entry(roff + i, coff + j) == small.entry(i, j));
            }
        }
    }

    // the smallest case: single row (1), single column (0), entry (1)
    auto tiny = build_index_matrix(1, 0);
    REQUIRE(tiny.rows.size() == 1);
    REQUIRE(tiny.cols.size() == 1);
    CHECK(*tiny.entry(0, 0) == MultiIndex{1});
}

TEST_CASE("cofactor matrix of the fixture pair")
{
    auto sys = build_system(fixture_pair(), 2);
    REQUIRE(sys.rows == 9);
    REQUIRE(sys.cols == 12);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 12; ++j)
            CHECK(sys.at(i, j) == GaussianRational(kFixtureMatrix[i][j]));

    CHECK(exact_rank(sys) == 6);
    CHECK(fixture_f2().valuation().value() == 1);
    CHECK(std::min(fixture_f1().valuation().value(), fixture_f2().valuation().value()) == 1);
}

TEST_CASE("degenerate and malformed systems")
{
    std::vector<ExactSeries> zeros{ExactSeries::zero(2, 4), ExactSeries::zero(2, 4)};
    auto sys = build_system(zeros, 2);
    CHECK(exact_rank(sys) == 0);

    std::vector<ExactSeries> with_const{make_series(2, 4, {{{0, 0}, 1}}),
                                        make_series(2, 4, {{{1, 0}, 1}})};
    CHECK_THROWS_AS(build_system(with_const, 1), domain_error);

    std::vector<ExactSeries> thin{make_series(2, 2, {{{1, 0}, 1}}),
                                  make_series(2, 2, {{{0, 1}, 1}})};
    CHECK_THROWS_AS(build_system(thin, 3), truncation_error);

    // identity block has full rank
    std::vector<std::vector<GaussianRational>> eye(4, std::vector<GaussianRational>(4));
    for (int i = 0; i < 4; ++i) eye[i][i] = GaussianRational(1);
    CHECK(exact_rank(eye) == 4);
}

TEST_CASE("compositeness at a rank")
{
    std::vector<ExactSeries> xy{make_series(2, 6, {{{1, 0}, 1}}),
                                make_series(2, 6, {{{0, 1}, 1}})};
    CHECK(!composite_at_rank(xy, 0)); // rank 2 > bound 1: coprime witness

    CHECK(composite_at_rank(fixture_pair(), 2)); // rank 6 <= bound 6

    auto g = make_series(2, 6, {{{1, 0}, 1}, {{0, 2}, -3}});
    std::vector<ExactSeries> gg{g, g};
    for (unsigned d = 0; d <= 3; ++d) CHECK(composite_at_rank(gg, d));
}

TEST_CASE("monotonicity: failing to be composite persists to larger ranks")
{
    std::mt19937_64 rng(61);
    int done = 0;
    while (done < 8) {
        std::vector<ExactSeries> f{random_series(rng, 2, 8, 1), random_series(rng, 2, 8, 1)};
        if (f[0].is_zero() || f[1].is_zero()) continue;
        int first_fail = -1;
        for (unsigned d = 0; d <= 5; ++d) {
            bool comp = composite_at_rank(f, d);
            if (first_fail < 0 && !comp) first_fail = static_cast<int>(d);
            if (first_fail >= 0) CHECK(!comp);
        }
        ++done;
    }
}

TEST_CASE("coprimality decision")
{
    std::vector<ExactSeries> xy{make_series(2, 6, {{{1, 0}, 1}}),
                                make_series(2, 6, {{{0, 1}, 1}})};
    auto v = decide_coprime(xy, 5);
    CHECK(v.status == CoprimalityVerdict::Status::coprime_certified);
    CHECK(v.witness_d == 0);
    CHECK(v.ranks.size() == 1);
    CHECK(v.ranks[0].rank == 2);
    CHECK(v.ranks[0].bound == 1);

    auto w = decide_coprime(fixture_pair(), 4);
    CHECK(w.status == CoprimalityVerdict::Status::composite_consistent);
    CHECK(w.ranks.size() == 5);
    for (const auto& r : w.ranks) CHECK(r.rank <= r.bound);

    auto g = make_series(2, 8, {{{1, 0}, 1}, {{1, 1}, 2}});
    auto vg = decide_coprime(std::vector<ExactSeries>{g, g}, 6);
    CHECK(vg.status == CoprimalityVerdict::Status::composite_consistent);

    std::vector<ExactSeries> bad{make_series(2, 6, {{{0, 0}, 2}}), xy[0]};
    CHECK(decide_coprime(bad, 3).status == CoprimalityVerdict::Status::inputs_degenerate);
}

TEST_CASE("decision agrees with the polynomial gcd oracle")
{
    std::mt19937_64 rng(67);
    int done = 0;
    while (done < 12) {
        bool plant = done % 2 == 0;
        Poly f1(2, 10), f2(2, 10);
        if (plant) {
            auto g = random_series(rng, 2, 2, 1, 3);
            auto a = random_series(rng, 2, 3, 0, 4);
            auto b = random_series(rng, 2, 3, 0, 4);
            if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
            f1 = pmul(g, a).with_trunc(10);
            f2 = pmul(g, b).with_trunc(10);
        } else {
            f1 = random_series(rng, 2, 4, 1, 6).with_trunc(10);
            f2 = random_series(rng, 2, 4, 1, 6).with_trunc(10);
        }
        if (f1.is_zero() || f2.is_zero()) continue;
        if (!f1.constant_term().is_zero() || !f2.constant_term().is_zero()) continue;

        bool gcd_unit = poly_is_constant(poly_gcd(f1, f2));
        auto verdict = decide_coprime(std::vector<ExactSeries>{f1, f2}, 9);
        if (gcd_unit)
            CHECK(verdict.status == CoprimalityVerdict::Status::coprime_certified);
        else
            CHECK(verdict.status == CoprimalityVerdict::Status::composite_consistent);
        ++done;
    }
}

TEST_CASE("general k: pairwise-difference system")
{
    // (f, f, f): composite-consistent with the k > 2 layout
    auto g = make_series(3, 5, {{{1, 0, 0}, 1}, {{0, 1, 1}, 1}});
    std::vector<ExactSeries> trip{g, g, g};
    auto sys = build_system(trip, 1);
    CHECK(sys.rows == 3 * build_index_matrix(3, 1).rows.size());
    CHECK(sys.cols == 3 * build_index_matrix(3, 1).cols.size());
    CHECK(decide_coprime(trip, 3).status == CoprimalityVerdict::Status::composite_consistent);

    // (x, y, z) is coprime
    std::vector<ExactSeries> xyz{make_series(3, 5, {{{1, 0, 0}, 1}}),
                                 make_series(3, 5, {{{0, 1, 0}, 1}}),
                                 make_series(3, 5, {{{0, 0, 1}, 1}})};
    auto v = decide_coprime(xyz, 4);
    CHECK(v.status == CoprimalityVerdict::Status::coprime_certified);

    // the full pairwise layout never certifies less than the reduced one:
    // rank of the redundant system stays within the same verdict
    for (const auto& rec : v.ranks) CHECK(rec.bound == 2 * count_upto(3, rec.d));
}

TEST_CASE("cofactor valuation bounds")
{
    // k = 2 reduces to the opposite valuation
    std::vector<Poly> f{make_series(2, 2, {{{2, 0}, 1}}), make_series(2, 3, {{{0, 3}, 1}})};
    auto eps = epsilon_bounds(f);
    REQUIRE(eps.size() == 2);
    CHECK(eps[0] == 3);
    CHECK(eps[1] == 2);

    std::vector<Poly> cyc{make_series(3, 2, {{{1, 1, 0}, 1}}),
                          make_series(3, 2, {{{0, 1, 1}, 1}}),
                          make_series(3, 2, {{{1, 0, 1}, 1}})};
    auto e3 = epsilon_bounds(cyc);
    CHECK(e3 == std::vector<long>{1, 1, 1});

    auto g = make_series(2, 3, {{{1, 0}, 1}, {{2, 1}, 5}});
    auto gg = epsilon_bounds(std::vector<Poly>{g, g});
    CHECK(gg == std::vector<long>{1, 1});

    CHECK_THROWS_AS(epsilon_bounds(std::vector<Poly>{g, Poly::zero(2, 2)}), domain_error);
}

TEST_CASE("Milnor dimension estimates")
{
    std::vector<ExactSeries> xy{make_series(2, 6, {{{1, 0}, 1}}),
                                make_series(2, 6, {{{0, 1}, 1}})};
    auto m1 = milnor_dim_estimate(xy, 3);
    CHECK(m1.dim == 1);
    CHECK(m1.stabilized);

    std::vector<ExactSeries> cusp{make_series(2, 8, {{{2, 0}, 1}}),
                                  make_series(2, 8, {{{0, 3}, 1}})};
    auto m2 = milnor_dim_estimate(cusp, 6);
    CHECK(m2.dim == 6);
    CHECK(m2.stabilized);

    std::vector<ExactSeries> half{make_series(2, 6, {{{2, 0}, 1}}),
                                  make_series(2, 6, {{{0, 1}, 1}})};
    CHECK(milnor_dim_estimate(half, 5).dim == 2); // basis {1, x}

    // a composite family never stabilizes: the quotient keeps growing
    auto g = make_series(2, 10, {{{1, 0}, 1}});
    std::vector<ExactSeries> gg{g, g};
    CHECK(!milnor_dim_estimate(gg, 6).stabilized);
}
