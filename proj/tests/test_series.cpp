#include <catch2/catch_amalgamated.hpp>

#include "germcalc/series.hpp"
#include "helpers.hpp"

using namespace germcalc;
using gtest_helpers::make_series;
using gtest_helpers::random_series;

TEST_CASE("degree-lexicographic order on multi-indexes")
{
    // frozen comparison chain: (2,0) > (1,1) > (0,2) > (1,0) > (0,1) > (0,0)
    std::vector<MultiIndex> chain{{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}, {0, 0}};
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        CHECK(deglex_less(chain[i + 1], chain[i]));

    CHECK(deglex_compare(MultiIndex{1, 0}, MultiIndex{1, 0}) == std::strong_ordering::equal);
    // degree dominates: |(1,1,0)| = 2 < 3 = |(0,0,3)|
    CHECK(deglex_less(MultiIndex{1, 1, 0}, MultiIndex{0, 0, 3}));
    CHECK_THROWS_AS(deglex_less(MultiIndex{1, 0}, MultiIndex{1, 0, 0}), domain_error);
}

TEST_CASE("deglex order properties over an enumerated block")
{
    auto all = enumerate_upto(3, 4);
    CHECK(all.size() == count_upto(3, 4));
    CHECK(all.size() == 35); // binom(7, 4)

    // enumeration is strictly increasing (total, antisymmetric)
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        CHECK(deglex_less(all[i], all[i + 1]));
        CHECK(!deglex_less(all[i + 1], all[i]));
    }
    // transitivity on a sample
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int t = 0; t < 200; ++t) {
        auto a = all[pick(rng)], b = all[pick(rng)], c = all[pick(rng)];
        if (deglex_less(a, b) && deglex_less(b, c)) CHECK(deglex_less(a, c));
    }
}

TEST_CASE("series addition and Cauchy product")
{
    auto one_plus = make_series(1, 4, {{{0}, 1}, {{1}, 1}});
    auto one_minus = make_series(1, 4, {{{0}, 1}, {{1}, -1}});
    CHECK(one_plus * one_minus == make_series(1, 4, {{{0}, 1}, {{2}, -1}}));

    // (x-1)(x+y)^2 expanded
    auto xm1 = make_series(2, 6, {{{1, 0}, 1}, {{0, 0}, -1}});
    auto xpy = make_series(2, 6, {{{1, 0}, 1}, {{0, 1}, 1}});
    auto f1 = xm1 * xpy * xpy;
    CHECK(f1 == gtest_helpers::fixture_f1());

    auto zero = ExactSeries::zero(2, 6);
    CHECK(f1 * zero == zero);
}

TEST_CASE("product is commutative and associative at equal truncations")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        auto f = random_series(rng, 2, 8);
        auto g = random_series(rng, 2, 8);
        auto h = random_series(rng, 2, 8);
        CHECK(f * g == g * f);
        CHECK((f * g) * h == f * (g * h));
    }
}

TEST_CASE("jet projector")
{
    auto geom = [&] {
        ExactSeries f(1, 6);
        for (unsigned n = 0; n <= 6; ++n) f.set_coeff(MultiIndex{n}, GaussianRational(1));
        return f;
    }();
    CHECK(jet(geom, 2) == make_series(1, 2, {{{0}, 1}, {{1}, 1}, {{2}, 1}}));
    CHECK(jet(geom, 0) == ExactSeries::constant(1, 0, GaussianRational(1)));

    auto f1_high = make_series(2, 6, {{{3, 0}, 1}, {{2, 1}, 2}, {{2, 0}, -1}});
    CHECK(jet(f1_high, 2) == make_series(2, 2, {{{2, 0}, -1}}));

    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto f = random_series(rng, 2, 9);
        unsigned N = t % 10, M = (t * 7) % 10;
        CHECK(jet(jet(f, N), M) == jet(f, std::min(N, M)));
    }
}

TEST_CASE("taylor coefficients")
{
    auto f = make_series(1, 3, {{{0}, 1}, {{2}, 3}});
    CHECK(f.taylor_coeff(MultiIndex{2}) == GaussianRational(3));

    CHECK(gtest_helpers::fixture_f1().taylor_coeff(MultiIndex{1, 1}) == GaussianRational(-2));
    CHECK(ExactSeries::zero(1, 3).taylor_coeff(MultiIndex{1}) == GaussianRational(0));
    CHECK_THROWS_AS(f.taylor_coeff(MultiIndex{4}), truncation_error);
}

TEST_CASE("valuation")
{
    CHECK(gtest_helpers::fixture_f2().valuation().value() == 1);
    CHECK(ExactSeries::zero(1, 5).valuation().truncation_limited());
    CHECK(make_series(1, 6, {{{3}, 1}, {{5}, 1}}).valuation().value() == 3);

    // multiplicativity whenever the sum stays within the truncation
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 20) {
        auto f = random_series(rng, 2, 10, 1);
        auto g = random_series(rng, 2, 10, 1);
        if (f.is_zero() || g.is_zero()) continue;
        unsigned vf = f.valuation().value(), vg = g.valuation().value();
        if (vf + vg > 10) continue;
        CHECK((f * g).valuation().value() == vf + vg);
        ++checked;
    }
}

TEST_CASE("derivation")
{
    // exp is its own derivative up to the dropped order
    ExactSeries e(1, 6);
    Rational fact = 1;
    for (unsigned n = 0; n <= 6; ++n) {
        if (n > 0) fact *= n;
        e.set_coeff(MultiIndex{n}, GaussianRational(Rational(1) / fact));
    }
    CHECK(e.derive(0) == e.jet(5));

    CHECK(make_series(2, 4, {{{2, 1}, 1}}).derive(0) == make_series(2, 3, {{{1, 1}, 2}}));
    CHECK(make_series(1, 0, {{{0}, 5}}).derive(0) == ExactSeries::zero(1, 0));
    CHECK_THROWS_AS(make_series(1, 3, {}).derive(1), domain_error);

    // Leibniz rule, exact
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        auto f = random_series(rng, 2, 8);
        auto g = random_series(rng, 2, 8);
        for (std::size_t j = 0; j < 2; ++j)
            CHECK((f * g).derive(j) == f.derive(j) * g + f * g.derive(j));
    }
}

TEST_CASE("series equality compares up to the common truncation")
{
    auto f = make_series(1, 5, {{{1}, 1}, {{5}, 7}});
    auto g = make_series(1, 3, {{{1}, 1}});
    CHECK(f == g); // degree-5 term is beyond g's truncation
    CHECK(f.with_trunc(5) == f);
    auto h = make_series(1, 3, {{{1}, 2}});
    CHECK(!(f == h));
    CHECK(!(f == make_series(2, 5, {{{1, 0}, 1}})));
}
