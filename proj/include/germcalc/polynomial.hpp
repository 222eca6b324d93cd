#ifndef GERMCALC_POLYNOMIAL_HPP
#define GERMCALC_POLYNOMIAL_HPP

#include <optional>
#include <vector>

#include "germcalc/errors.hpp"
#include "germcalc/series.hpp"

// Exact polynomial arithmetic over Q(i), layered on Series with truncation
// orders kept large enough that nothing is ever cut off.  Used by the
// coprimality valuation bounds and by test oracles; sizes stay small.

namespace germcalc {

using Poly = Series<GaussianRational>;

inline std::optional<unsigned> poly_degree(const Poly& f)
{
    if (f.is_zero()) return std::nullopt;
    unsigned d = 0;
    for (const auto& [n, c] : f.coeffs()) d = std::max(d, n.degree());
    return d;
}

inline bool poly_is_constant(const Poly& f)
{
    auto d = poly_degree(f);
    return !d || *d == 0;
}

// Product with no truncation loss.
inline Poly pmul(const Poly& f, const Poly& g)
{
    unsigned df = poly_degree(f).value_or(0);
    unsigned dg = poly_degree(g).value_or(0);
    return f.with_trunc(df + dg) * g.with_trunc(df + dg);
}

inline Poly padd(const Poly& f, const Poly& g)
{
    unsigned d = std::max(poly_degree(f).value_or(0), poly_degree(g).value_or(0));
    return f.with_trunc(d) + g.with_trunc(d);
}

// Deglex-leading term.
inline std::pair<MultiIndex, GaussianRational> leading_term(const Poly& f)
{
    if (f.is_zero()) throw domain_error("leading_term of zero polynomial");
    auto it = std::prev(f.coeffs().end());
    return {it->first, it->second};
}

// Scales f so its deglex-leading coefficient is 1.
inline Poly monic(const Poly& f)
{
    if (f.is_zero()) return f;
    auto [n, c] = leading_term(f);
    return f.scaled(GaussianRational(1) / c);
}

// Exact quotient f / g, or empty when g does not divide f.  Reduction by
// the single divisor in deglex order: the leading term strictly decreases,
// so for true multiples the remainder reaches zero.
inline std::optional<Poly> divexact(const Poly& f, const Poly& g)
{
    if (g.is_zero()) throw domain_error("division by zero polynomial");
    unsigned df = poly_degree(f).value_or(0);
    Poly q(f.vars(), df);
    Poly r = f.with_trunc(df);
    auto [gn, gc] = leading_term(g);
    while (!r.is_zero()) {
        auto [rn, rc] = leading_term(r);
        auto dn = rn.minus(gn);
        if (!dn) return std::nullopt;
        GaussianRational qc = rc / gc;
        q.add_coeff(*dn, qc);
        r = r - g.with_trunc(df).mul_monomial(*dn, qc).jet(df);
    }
    return q;
}

namespace detail {

inline unsigned deg_in_var(const Poly& f, std::size_t j)
{
    unsigned d = 0;
    for (const auto& [n, c] : f.coeffs()) d = std::max(d, n[j]);
    return d;
}

// Coefficient of x_j^d, as a polynomial with the j-th exponent zeroed.
inline Poly coeff_in_var(const Poly& f, std::size_t j, unsigned d)
{
    Poly out(f.vars(), f.trunc());
    for (const auto& [n, c] : f.coeffs()) {
        if (n[j] != d) continue;
        auto e = n.exps();
        e[j] = 0;
        out.set_coeff(MultiIndex(std::move(e)), c);
    }
    return out;
}

inline std::optional<std::size_t> first_variable(const Poly& f, const Poly& g)
{
    for (std::size_t j = 0; j < f.vars(); ++j)
        if (deg_in_var(f, j) > 0 || deg_in_var(g, j) > 0) return j;
    return std::nullopt;
}

} // namespace detail

inline Poly poly_gcd(Poly f, Poly g);

namespace detail {

// gcd of the x_j-coefficients of f.
inline Poly content_in_var(const Poly& f, std::size_t j)
{
    Poly c(f.vars(), 0);
    for (unsigned d = 0; d <= deg_in_var(f, j); ++d) {
        Poly cd = coeff_in_var(f, j, d);
        if (cd.is_zero()) continue;
        c = c.is_zero() ? monic(cd) : poly_gcd(c, cd);
    }
    return c;
}

// Pseudo-remainder of f by g with respect to x_j; the exact pseudo-division
// scale factor is dropped since every caller re-primitivizes.
inline Poly pseudo_rem(Poly f, const Poly& g, std::size_t j)
{
    unsigned dg = deg_in_var(g, j);
    Poly lg = coeff_in_var(g, j, dg);
    while (!f.is_zero() && deg_in_var(f, j) >= dg) {
        // f <- lc_j(g) f - lc_j(f) x_j^{dr-dg} g
        unsigned dr = deg_in_var(f, j);
        Poly lr = coeff_in_var(f, j, dr);
        std::vector<unsigned> e(f.vars(), 0u);
        e[j] = dr - dg;
        Poly t = pmul(lr, Poly::monomial(f.vars(), dr - dg, MultiIndex(e), GaussianRational(1)));
        f = padd(pmul(lg, f), pmul(t, g).scaled(GaussianRational(-1)));
    }
    return f;
}

} // namespace detail

// Monic gcd over Q(i)[x_1..x_m]: primitive Euclidean algorithm in the first
// occurring variable, recursing on contents.
inline Poly poly_gcd(Poly f, Poly g)
{
    if (f.is_zero()) return monic(g);
    if (g.is_zero()) return monic(f);
    if (poly_is_constant(f) || poly_is_constant(g))
        return Poly::constant(f.vars(), 0, GaussianRational(1));

    auto jv = detail::first_variable(f, g);
    if (!jv) return Poly::constant(f.vars(), 0, GaussianRational(1));
    std::size_t j = *jv;

    Poly cf = detail::content_in_var(f, j);
    Poly cg = detail::content_in_var(g, j);
    Poly c = poly_gcd(cf, cg);
    Poly F = *divexact(f, cf);
    Poly G = *divexact(g, cg);
    if (detail::deg_in_var(F, j) < detail::deg_in_var(G, j)) std::swap(F, G);

    while (!G.is_zero()) {
        Poly r = detail::pseudo_rem(F, G, j);
        F = G;
        G = r.is_zero() ? r : *divexact(r, detail::content_in_var(r, j));
    }
    return monic(pmul(c, F));
}

inline Poly poly_lcm(const Poly& f, const Poly& g)
{
    if (f.is_zero() || g.is_zero()) throw domain_error("lcm of zero polynomial");
    auto q = divexact(pmul(f, g), poly_gcd(f, g));
    return monic(*q);
}

inline Poly poly_gcd(const std::vector<Poly>& fs)
{
    if (fs.empty()) throw domain_error("gcd of empty family");
    Poly g = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) g = poly_gcd(g, fs[i]);
    return monic(g);
}

inline Poly poly_lcm(const std::vector<Poly>& fs)
{
    if (fs.empty()) throw domain_error("lcm of empty family");
    Poly l = monic(fs[0]);
    for (std::size_t i = 1; i < fs.size(); ++i) l = poly_lcm(l, fs[i]);
    return l;
}

} // namespace germcalc

#endif
