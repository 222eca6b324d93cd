#ifndef GERMCALC_NORMS_HPP
#define GERMCALC_NORMS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "germcalc/errors.hpp"
#include "germcalc/series.hpp"

namespace germcalc {

// Weight sequence a = (a_n) generating the norm sum_n a_n |f_n|.
// The factorial family a(alpha)_n = (n!)^{-alpha} extends to multi-indexes
// as (n!)^{-alpha} with n! the product of component factorials; it lies in
// the admissible class (a_n^{1/n} -> 0) for every alpha > 0.  Explicit
// finite tables carry no tail information: any query past the table is
// answered with an error rather than a guess.
class WeightSequence {
public:
    static WeightSequence factorial(double alpha)
    {
        if (!(alpha > 0)) throw domain_error("factorial weight needs alpha > 0");
        WeightSequence w;
        w.alpha_ = alpha;
        return w;
    }

    static WeightSequence explicit_table(std::vector<double> table)
    {
        for (double a : table)
            if (!(a > 0)) throw domain_error("weights must be strictly positive");
        WeightSequence w;
        w.table_ = std::move(table);
        return w;
    }

    bool is_factorial() const { return table_.empty(); }
    double alpha() const { return alpha_; }
    std::size_t table_size() const { return table_.size(); }

    // log a_n; the factorial branch uses lgamma so large ranks never overflow.
    double log_weight(unsigned long n) const
    {
        if (is_factorial()) return -alpha_ * std::lgamma(static_cast<double>(n) + 1.0);
        if (n >= table_.size())
            throw domain_error("explicit weight table has no entry at rank " + std::to_string(n));
        return std::log(table_[n]);
    }

    double weight(unsigned long n) const { return std::exp(log_weight(n)); }

    double weight(const MultiIndex& n) const
    {
        if (is_factorial()) {
            double lg = 0.0;
            for (std::size_t j = 0; j < n.size(); ++j)
                lg += std::lgamma(static_cast<double>(n[j]) + 1.0);
            return std::exp(-alpha_ * lg);
        }
        return weight(static_cast<unsigned long>(n.degree()));
    }

    // Exact rational weight 1/(n!)^alpha, available when alpha is integral.
    std::optional<Rational> exact_weight(const MultiIndex& n) const
    {
        if (!is_factorial()) return std::nullopt;
        double ip;
        if (std::modf(alpha_, &ip) != 0.0) return std::nullopt;
        mpz_class f = n.factorial();
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(ip));
        return Rational(mpz_class(1), p);
    }

private:
    WeightSequence() = default;
    double alpha_ = 0.0;
    std::vector<double> table_;
};

// Partial sum of the weighted coefficient norm over the stored support.
// A truncated series only ever yields a lower bound for the germ's norm;
// tail_bounded records that no tail estimate is claimed.
struct NormReport {
    double value = 0.0;
    unsigned truncation_order = 0;
    bool tail_bounded = false;
};

template <class S>
NormReport a_norm(const Series<S>& f, const WeightSequence& w)
{
    NormReport r;
    r.truncation_order = f.trunc();
    r.tail_bounded = false;
    for (const auto& [n, c] : f.coeffs())
        r.value += w.weight(n) * scalar_traits<S>::abs(c);
    return r;
}

// Exact variant for real-rational coefficients under an integral-exponent
// factorial weight; used where property checks must be free of rounding.
inline Rational a_norm_exact(const Series<GaussianRational>& f, const WeightSequence& w)
{
    Rational acc = 0;
    for (const auto& [n, c] : f.coeffs()) {
        if (c.im != 0)
            throw domain_error("a_norm_exact: coefficients must be real rationals");
        auto aw = w.exact_weight(n);
        if (!aw) throw domain_error("a_norm_exact: weight is not rational");
        acc += *aw * abs(c.re);
    }
    return acc;
}

struct Amplitude {
    double value = 0.0;
    unsigned long argmax = 0;
};

namespace detail {

inline Amplitude scan_max(const WeightSequence& w, double log_r, unsigned long lo,
                          unsigned long hi)
{
    Amplitude best;
    double best_log = -std::numeric_limits<double>::infinity();
    for (unsigned long n = lo; n <= hi; ++n) {
        double v = w.log_weight(n) + static_cast<double>(n) * log_r;
        if (v > best_log) {
            best_log = v;
            best.argmax = n;
        }
    }
    best.value = std::exp(best_log);
    return best;
}

} // namespace detail

// max_n a_n r^n.  For the factorial family the maximizer sits within one
// rank of ceil(r^{1/alpha}); the scan window widens that localization by 8
// ranks on both sides to absorb floating error in the center estimate.
inline Amplitude amplitude(const WeightSequence& w, double r)
{
    if (!(r > 0)) throw domain_error("amplitude needs r > 0");
    double log_r = std::log(r);
    if (w.is_factorial()) {
        double center = std::ceil(std::pow(r, 1.0 / w.alpha()));
        unsigned long c = center < 1.0 ? 1ul : static_cast<unsigned long>(center);
        unsigned long lo = c > 9 ? c - 9 : 0;
        return detail::scan_max(w, log_r, lo, c + 9);
    }
    if (w.table_size() == 0) throw domain_error("amplitude: empty weight table");
    Amplitude best = detail::scan_max(w, log_r, 0, w.table_size() - 1);
    if (best.argmax + 1 == w.table_size())
        throw domain_error("amplitude: weight table too short to certify the maximum");
    return best;
}

// Partial sum of the comparison function: sum_{n<=N} a_n x^n.
template <class S>
S comparison(const WeightSequence& w, const S& x, unsigned N)
{
    using T = scalar_traits<S>;
    S acc = T::zero();
    S xn = T::one();
    for (unsigned long n = 0; n <= N; ++n) {
        if (n > 0) xn = xn * x;
        S an;
        if constexpr (T::exact) {
            MultiIndex mi{static_cast<unsigned>(n)};
            auto aw = w.exact_weight(mi);
            if (!aw)
                throw domain_error("comparison: weight not representable exactly "
                                   "(use approx scalars or an integral alpha)");
            an = T::from_rational(*aw);
        } else {
            an = T::from_long(1) * S(w.weight(n));
        }
        acc = acc + an * xn;
    }
    return acc;
}

// Finite-truncation window estimates of Hadamard's liminf |f_n|^{-1/n}.
// The window covers the upper half of the stored degrees; a truncated
// series can never certify the limit, hence the explicit flags.
struct RadiusBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool upper_unbounded = false; // zero tail in the window
    unsigned window_lo = 0, window_hi = 0;
};

template <class S>
RadiusBounds radius_bounds(const Series<S>& f)
{
    if (f.trunc() < 2) throw domain_error("radius_bounds needs truncation >= 2");
    RadiusBounds r;
    r.window_lo = (f.trunc() + 1) / 2;
    r.window_hi = f.trunc();

    std::vector<double> mass(f.trunc() + 1, 0.0);
    for (const auto& [n, c] : f.coeffs()) mass[n.degree()] += scalar_traits<S>::abs(c);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool seen = false;
    for (unsigned n = r.window_lo; n <= r.window_hi; ++n) {
        if (mass[n] == 0.0) continue;
        seen = true;
        double est = std::exp(-std::log(mass[n]) / static_cast<double>(n));
        lo = std::min(lo, est);
        hi = std::max(hi, est);
    }
    if (!seen) {
        r.upper_unbounded = true;
        r.lower = std::numeric_limits<double>::infinity();
        r.upper = std::numeric_limits<double>::infinity();
        return r;
    }
    r.lower = lo;
    r.upper = hi;
    return r;
}

struct DerivConstant {
    double value = 0.0;      // D_{k,alpha,beta}
    unsigned long argmax = 0;
    double root = 0.0;       // positive solution of (x+k)^{beta+1} = x^{alpha+1}
};

// Optimal constant in the derivative bound
//   ||f^{(k)}||_{a(alpha)} <= D ||f - J_k(f)||_{a(beta)},
// D = sup_n (n+k)!^{beta+1} / n!^{alpha+1}, located within one rank of the
// root of (x+k)^{beta+1} = x^{alpha+1} and found by bisection.
inline DerivConstant deriv_constant(unsigned k, double alpha, double beta)
{
    if (!(alpha > beta && beta > 0))
        throw domain_error("deriv_constant needs alpha > beta > 0");

    auto log_term = [&](unsigned long n) {
        return (beta + 1.0) * std::lgamma(static_cast<double>(n + k) + 1.0)
               - (alpha + 1.0) * std::lgamma(static_cast<double>(n) + 1.0);
    };

    DerivConstant out;
    if (k == 0) {
        // terms n!^{beta-alpha} <= 1, attained at n = 0
        out.value = 1.0;
        out.argmax = 0;
        out.root = 1.0;
        return out;
    }

    // root of x^{delta+1} - x = k, delta = (alpha-beta)/(beta+1)
    double delta = (alpha - beta) / (beta + 1.0);
    auto g = [&](double x) { return std::pow(x, delta + 1.0) - x - static_cast<double>(k); };
    double lo = 1.0, hi = 2.0;
    while (g(hi) < 0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
    }
    out.root = 0.5 * (lo + hi);

    unsigned long c = static_cast<unsigned long>(std::ceil(out.root));
    unsigned long wlo = c > 9 ? c - 9 : 0;
    unsigned long whi = c + 9;
    double best = -std::numeric_limits<double>::infinity();
    for (unsigned long n = wlo; n <= whi; ++n) {
        double v = log_term(n);
        if (v > best) {
            best = v;
            out.argmax = n;
        }
    }
    out.value = std::exp(best);
    return out;
}

struct ProductBoundWitness {
    bool holds = false;
    bool exact = false; // compared with exact rational arithmetic
    double lhs = 0.0;   // ||f x g||
    double rhs = 0.0;   // ||f|| ||g||
};

namespace detail {

inline bool real_nonneg_support(const Series<GaussianRational>& f)
{
    for (const auto& [n, c] : f.coeffs())
        if (c.im != 0 || c.re < 0) return false;
    return true;
}

} // namespace detail

// Checks ||f x g||_{a(alpha)} <= ||f|| ||g|| on the truncated supports.
// Real nonnegative rational inputs under an integral alpha are compared
// exactly; everything else falls back to floating point with a 1e-12
// relative slack.
template <class S>
ProductBoundWitness check_product_bound(const Series<S>& f, const Series<S>& g, double alpha)
{
    WeightSequence w = WeightSequence::factorial(alpha);
    ProductBoundWitness out;
    if constexpr (scalar_traits<S>::exact) {
        if (detail::real_nonneg_support(f) && detail::real_nonneg_support(g)
            && w.exact_weight(MultiIndex(f.vars())).has_value()) {
            Rational lhs = a_norm_exact(f * g, w);
            Rational rhs = a_norm_exact(f, w) * a_norm_exact(g, w);
            out.exact = true;
            out.holds = lhs <= rhs;
            out.lhs = lhs.get_d();
            out.rhs = rhs.get_d();
            return out;
        }
    }
    double lhs = a_norm(f * g, w).value;
    double rhs = a_norm(f, w).value * a_norm(g, w).value;
    out.holds = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
    out.lhs = lhs;
    out.rhs = rhs;
    return out;
}

struct PolydiscRadius {
    double value = 0.0;
    unsigned long argmin = 0;
};

// Window estimate of liminf a_n r_n: the largest a-ball radius a naive
// polydisc of poly-radius r can contain.
inline PolydiscRadius naive_polydisc_radius(const WeightSequence& w,
                                            const std::vector<double>& r, unsigned window)
{
    if (r.empty()) throw domain_error("naive_polydisc_radius: empty radius sequence");
    PolydiscRadius out;
    out.value = std::numeric_limits<double>::infinity();
    unsigned long hi = std::min<unsigned long>(window, r.size() - 1);
    for (unsigned long n = 0; n <= hi; ++n) {
        if (!(r[n] > 0)) throw domain_error("naive_polydisc_radius: radii must be positive");
        double v = std::exp(w.log_weight(n)) * r[n];
        if (v < out.value) {
            out.value = v;
            out.argmin = n;
        }
    }
    return out;
}

} // namespace germcalc

#endif
