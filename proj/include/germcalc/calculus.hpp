#ifndef GERMCALC_CALCULUS_HPP
#define GERMCALC_CALCULUS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "germcalc/errors.hpp"
#include "germcalc/series.hpp"

namespace germcalc {

// f(g_1, ..., g_m) for g_l with zero constant term.  The jet of the result
// to degree N is determined by the jets of f and g to degree N, so the
// result carries trunc = min(trunc_f, min_l trunc_{g_l}).
template <class S>
Series<S> compose(const Series<S>& f, std::span<const Series<S>> g)
{
    if (g.empty()) throw domain_error("compose: empty substitution tuple");
    if (f.vars() != g.size())
        throw domain_error("compose: arity mismatch, f has " + std::to_string(f.vars())
                           + " variable(s), got " + std::to_string(g.size()) + " substitution(s)");
    std::size_t out_vars = g[0].vars();
    unsigned out_trunc = f.trunc();
    for (const auto& gl : g) {
        if (gl.vars() != out_vars) throw domain_error("compose: substitutions disagree on arity");
        if (!scalar_traits<S>::is_zero(gl.constant_term()))
            throw domain_error("compose: substitution has nonzero constant term");
        out_trunc = std::min(out_trunc, gl.trunc());
    }

    // cached powers g_l^p; g_l(0) = 0 makes val(g_l^p) >= p, so p <= out_trunc
    std::vector<std::vector<Series<S>>> pow(g.size());
    for (std::size_t l = 0; l < g.size(); ++l)
        pow[l].push_back(Series<S>::constant(out_vars, out_trunc, scalar_traits<S>::one()));
    auto power = [&](std::size_t l, unsigned p) -> const Series<S>& {
        while (pow[l].size() <= p) pow[l].push_back(pow[l].back() * g[l].jet(out_trunc));
        return pow[l][p];
    };

    Series<S> out(out_vars, out_trunc);
    for (const auto& [n, c] : f.coeffs()) {
        if (n.degree() > out_trunc) break;
        Series<S> term = Series<S>::constant(out_vars, out_trunc, c);
        for (std::size_t l = 0; l < g.size(); ++l)
            if (n[l] > 0) term = term * power(l, n[l]);
        out = out + term;
    }
    return out;
}

template <class S>
Series<S> compose(const Series<S>& f, const std::vector<Series<S>>& g)
{
    return compose(f, std::span<const Series<S>>(g));
}

// One-variable convenience overload.
template <class S>
Series<S> compose1(const Series<S>& f, const Series<S>& g)
{
    std::vector<Series<S>> t{g};
    return compose(f, t);
}

// exp(g) = exp(g(0)) * sum_p (g - g(0))^p / p!.  Exact scalars only admit
// g(0) = 0 (the traits reject anything else).
template <class S>
Series<S> exp_series(const Series<S>& g)
{
    using T = scalar_traits<S>;
    S c = g.constant_term();
    Series<S> w = g - Series<S>::constant(g.vars(), g.trunc(), c);
    Series<S> acc = Series<S>::constant(g.vars(), g.trunc(), T::one());
    Series<S> wp = acc;
    Rational fact = 1;
    for (unsigned p = 1; p <= g.trunc(); ++p) {
        wp = wp * w;
        if (wp.is_zero()) break;
        fact *= static_cast<long>(p);
        acc = acc + wp.scaled(T::from_rational(Rational(1) / fact));
    }
    return acc.scaled(T::exp(c));
}

// log(1 + h) = sum_{p>0} (-1)^{p+1} h^p / p for h with zero constant term.
template <class S>
Series<S> log_map(const Series<S>& h)
{
    using T = scalar_traits<S>;
    if (!T::is_zero(h.constant_term()))
        throw domain_error("log_map: argument must have zero constant term");
    Series<S> acc(h.vars(), h.trunc());
    Series<S> hp = Series<S>::constant(h.vars(), h.trunc(), T::one());
    for (unsigned p = 1; p <= h.trunc(); ++p) {
        hp = hp * h;
        if (hp.is_zero()) break;
        S coef = T::from_ratio(p % 2 == 1 ? 1 : -1, static_cast<long>(p));
        acc = acc + hp.scaled(coef);
    }
    return acc;
}

// 1/f for f with invertible constant term.
template <class S>
Series<S> invert_series(const Series<S>& f)
{
    using T = scalar_traits<S>;
    S c = f.constant_term();
    if (T::is_zero(c)) throw domain_error("invert_series: constant term vanishes");
    // 1/f = (1/c) sum_p w^p  with  w = 1 - f/c
    Series<S> w = Series<S>::constant(f.vars(), f.trunc(), T::one()) - f.scaled(T::one() / c);
    Series<S> acc = Series<S>::constant(f.vars(), f.trunc(), T::one());
    Series<S> wp = acc;
    for (unsigned p = 1; p <= f.trunc(); ++p) {
        wp = wp * w;
        if (wp.is_zero()) break;
        acc = acc + wp;
    }
    return acc.scaled(T::one() / c);
}

// Germ of a biholomorphism fixing 0: one variable, zero constant term,
// invertible linear coefficient.
template <class S>
class DiffeoGerm {
public:
    explicit DiffeoGerm(Series<S> f) : f_(std::move(f))
    {
        if (f_.vars() != 1) throw domain_error("diffeo germ must be univariate");
        if (!scalar_traits<S>::is_zero(f_.constant_term()))
            throw domain_error("diffeo germ must fix the origin");
        if (f_.trunc() < 1 || scalar_traits<S>::is_zero(linear_coeff()))
            throw domain_error("diffeo germ needs a nonzero linear coefficient");
    }

    static DiffeoGerm identity(unsigned trunc)
    {
        return DiffeoGerm(Series<S>::variable(1, trunc, 0));
    }

    const Series<S>& series() const { return f_; }
    unsigned trunc() const { return f_.trunc(); }
    S linear_coeff() const { return f_.coeff(MultiIndex{1}); }

    friend DiffeoGerm compose(const DiffeoGerm& f, const DiffeoGerm& g)
    {
        return DiffeoGerm(compose1(f.f_, g.f_));
    }

    friend bool operator==(const DiffeoGerm& f, const DiffeoGerm& g) { return f.f_ == g.f_; }

private:
    Series<S> f_;
};

// D(g) = z exp(g): the section of the compositional-inverse construction.
// trunc grows by one through the exact multiplication by z.
template <class S>
DiffeoGerm<S> diffeo_from(const Series<S>& g)
{
    if (g.vars() != 1) throw domain_error("diffeo_from: expected a univariate series");
    return DiffeoGerm<S>(exp_series(g).mul_monomial(MultiIndex{1}, scalar_traits<S>::one()));
}

// Compositional inverse by degree-wise triangular solve:
// the unique h with d(h(z)) = h(d(z)) = z up to the truncation order.
template <class S>
DiffeoGerm<S> comp_inverse(const DiffeoGerm<S>& d)
{
    using T = scalar_traits<S>;
    unsigned N = d.trunc();
    S d1 = d.linear_coeff();
    Series<S> h(1, N);
    h.set_coeff(MultiIndex{1}, T::one() / d1);
    for (unsigned n = 2; n <= N; ++n) {
        S cn = compose1(d.series(), h).coeff(MultiIndex{n});
        h.set_coeff(MultiIndex{n}, -(cn / d1));
    }
    return DiffeoGerm<S>(h);
}

// H(g): the unique germ with H(0) = 0 and D(H(g)) equal to the inverse of
// D(g).  Computed as log of iota(g)/z.
template <class S>
Series<S> h_map(const Series<S>& g)
{
    using T = scalar_traits<S>;
    Series<S> w = comp_inverse(diffeo_from(g)).series().div_monomial(MultiIndex{1});
    S w0 = w.constant_term();
    // (w - w0)/w0 rather than w/w0 - 1: the constant term must cancel
    // exactly, also with floating scalars
    Series<S> v = (w - Series<S>::constant(1, w.trunc(), w0)).scaled(T::one() / w0);
    Series<S> out = log_map(v);
    out.add_coeff(MultiIndex{0}, T::log(w0));
    return out;
}

enum class FrechetOp {
    right_compose, // g -> f o g, f fixed
    diffeo,        // g -> D(g)
    inverse        // g -> iota(g) = D(g)^{o-1}
};

template <class S>
struct DirectionalDerivative {
    Series<S> analytic;
    Series<S> finite_difference;
};

namespace detail {

template <class S>
Series<S> frechet_apply(FrechetOp op, const Series<S>* f_fixed, const Series<S>& g)
{
    switch (op) {
    case FrechetOp::right_compose: return compose1(*f_fixed, g);
    case FrechetOp::diffeo: return diffeo_from(g).series();
    case FrechetOp::inverse: return comp_inverse(diffeo_from(g)).series();
    }
    throw domain_error("frechet_apply: unknown operation");
}

} // namespace detail

// Closed-form directional derivative at g in direction h, next to the
// centered difference (op(g + eps h) - op(g - eps h)) / (2 eps).  Over exact
// scalars the difference quotient itself is computed without rounding.
template <class S>
DirectionalDerivative<S> frechet_dir(FrechetOp op, const Series<S>& f_fixed,
                                     const Series<S>& g, const Series<S>& h, const S& eps)
{
    using T = scalar_traits<S>;
    if (g.vars() != 1 || h.vars() != 1)
        throw domain_error("frechet_dir: univariate germs expected");
    if (T::is_zero(eps)) throw domain_error("frechet_dir: eps must be nonzero");

    Series<S> analytic(1, 0);
    switch (op) {
    case FrechetOp::right_compose: {
        // d(f o g) . h = (f' o g) x h
        analytic = compose1(f_fixed.derive(0), g) * h;
        break;
    }
    case FrechetOp::diffeo: {
        // dD(g) . h = D(g) x h
        analytic = diffeo_from(g).series() * h;
        break;
    }
    case FrechetOp::inverse: {
        // d iota(g) . h = -((z / (1 + z g')) x h) o iota(g)
        Series<S> z = Series<S>::variable(1, g.trunc() + 1, 0);
        Series<S> denom = Series<S>::constant(1, g.trunc(), T::one())
                          + Series<S>::variable(1, g.trunc() + 1, 0) * g.derive(0);
        Series<S> a = z * invert_series(denom) * h;
        analytic = -compose1(a, comp_inverse(diffeo_from(g)).series());
        break;
    }
    }

    Series<S> he = h.scaled(eps);
    Series<S> plus = detail::frechet_apply(op, &f_fixed, g + he);
    Series<S> minus = detail::frechet_apply(op, &f_fixed, g - he);
    S half_step = T::one() / (eps + eps);
    Series<S> fd = (plus - minus).scaled(half_step);

    unsigned t = std::min(analytic.trunc(), fd.trunc());
    return {analytic.jet(t), fd.jet(t)};
}

// Group commutator [f, g] = f^{o-1} o g^{o-1} o f o g.
template <class S>
DiffeoGerm<S> commutator(const DiffeoGerm<S>& f, const DiffeoGerm<S>& g)
{
    return compose(comp_inverse(f), compose(comp_inverse(g), compose(f, g)));
}

struct SolvabilityCheck {
    bool passes = false;         // no violation up to the jet order checked
    unsigned order = 0;          // jet order of the check
    unsigned fail_degree = 0;    // meaningful when !passes
    // Passing at a finite truncation is necessary, never sufficient: the
    // relation could still fail beyond the checked order.
    static constexpr bool necessary_only = true;
};

// Loray's relation for the group generated by two germs:
// solvable iff [f, [f, g o g]] = Id.  Checked up to jet `order`.
template <class S>
SolvabilityCheck solvable2_test(const DiffeoGerm<S>& f, const DiffeoGerm<S>& g, unsigned order)
{
    DiffeoGerm<S> fj(f.series().jet(order));
    DiffeoGerm<S> gj(g.series().jet(order));
    DiffeoGerm<S> w = commutator(fj, commutator(fj, compose(gj, gj)));
    Series<S> dev = w.series() - Series<S>::variable(1, order, 0);
    SolvabilityCheck r;
    r.order = order;
    if (dev.is_zero()) {
        r.passes = true;
        return r;
    }
    r.passes = false;
    r.fail_degree = dev.valuation().value();
    return r;
}

} // namespace germcalc

#endif
