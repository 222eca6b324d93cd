#ifndef GERMCALC_TEST_HELPERS_HPP
#define GERMCALC_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "germcalc/series.hpp"

namespace gtest_helpers {

using germcalc::Complex;
using germcalc::ExactSeries;
using germcalc::GaussianRational;
using germcalc::MultiIndex;
using germcalc::Rational;

struct Term {
    std::vector<unsigned> exp;
    long num;
    long den = 1;
};

inline ExactSeries make_series(std::size_t vars, unsigned trunc, std::initializer_list<Term> ts)
{
    ExactSeries f(vars, trunc);
    for (const auto& t : ts)
        f.add_coeff(MultiIndex(t.exp), GaussianRational(Rational(t.num, t.den)));
    return f;
}

// Sparse random series with small rational coefficients; valuation >= min_deg.
inline ExactSeries random_series(std::mt19937_64& rng, std::size_t vars, unsigned trunc,
                                 unsigned min_deg = 0, unsigned terms = 6,
                                 bool nonneg = false)
{
    ExactSeries f(vars, trunc);
    std::uniform_int_distribution<long> num(nonneg ? 0 : -9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    std::uniform_int_distribution<unsigned> expo(0, trunc);
    for (unsigned t = 0; t < terms; ++t) {
        std::vector<unsigned> e(vars, 0);
        unsigned budget = trunc;
        for (auto& x : e) {
            x = expo(rng) % (budget + 1);
            budget -= x;
        }
        MultiIndex n(e);
        if (n.degree() < min_deg || n.degree() > trunc) continue;
        f.add_coeff(n, GaussianRational(Rational(num(rng), den(rng))));
    }
    return f;
}

inline germcalc::Series<Complex> to_approx(const ExactSeries& f)
{
    germcalc::Series<Complex> out(f.vars(), f.trunc());
    for (const auto& [n, c] : f.coeffs())
        out.set_coeff(n, germcalc::scalar_traits<GaussianRational>::to_complex(c));
    return out;
}

// (x - 1)(x + y)^2 and (1 - 3y)(x + y): the pair behind the frozen
// rank-6 matrix fixture used across the coprimality tests.
inline ExactSeries fixture_f1(unsigned trunc = 6)
{
    return make_series(2, trunc,
                       {{{3, 0}, 1}, {{2, 1}, 2}, {{1, 2}, 1},
                        {{2, 0}, -1}, {{1, 1}, -2}, {{0, 2}, -1}});
}

inline ExactSeries fixture_f2(unsigned trunc = 6)
{
    return make_series(2, trunc, {{{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, -3}, {{0, 2}, -3}});
}

} // namespace gtest_helpers

#endif
