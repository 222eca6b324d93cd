#ifndef GERMCALC_SERIES_HPP
#define GERMCALC_SERIES_HPP

#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "germcalc/errors.hpp"
#include "germcalc/multi_index.hpp"
#include "germcalc/scalar.hpp"

namespace germcalc {

// Valuation of a truncated series.  An empty `nu` means the series vanishes
// through its truncation order; that is only a lower-bound statement about
// the underlying germ, so callers must branch on `truncation_limited()`.
struct Valuation {
    std::optional<unsigned> nu;

    bool truncation_limited() const { return !nu.has_value(); }
    unsigned value() const
    {
        if (!nu) throw domain_error("valuation is truncation-limited (series is zero up to trunc)");
        return *nu;
    }
};

// Truncated multivariate formal power series: every monomial of total degree
// <= trunc() is either stored or zero; nothing is known beyond trunc().
// Operations return the largest truncation fully determined by their inputs.
// Values are immutable in spirit: all mutators are construction helpers.
template <class S>
class Series {
public:
    using scalar_type = S;
    using traits = scalar_traits<S>;
    using coeff_map = std::map<MultiIndex, S, DeglexLess>;

    Series(std::size_t vars, unsigned trunc) : vars_(vars), trunc_(trunc) {}

    static Series zero(std::size_t vars, unsigned trunc) { return Series(vars, trunc); }

    static Series constant(std::size_t vars, unsigned trunc, S c)
    {
        Series f(vars, trunc);
        f.set_coeff(MultiIndex(vars), std::move(c));
        return f;
    }

    static Series monomial(std::size_t vars, unsigned trunc, const MultiIndex& n, S c)
    {
        Series f(vars, trunc);
        f.set_coeff(n, std::move(c));
        return f;
    }

    // The coordinate function z_j.
    static Series variable(std::size_t vars, unsigned trunc, std::size_t j)
    {
        return monomial(vars, trunc, MultiIndex::unit(vars, j), traits::one());
    }

    std::size_t vars() const { return vars_; }
    unsigned trunc() const { return trunc_; }
    const coeff_map& coeffs() const { return coef_; }
    bool is_zero() const { return coef_.empty(); }

    // Stores c at position n; monomials beyond the truncation order are
    // discarded, zero is erased so coeffs() is exactly the support.
    void set_coeff(const MultiIndex& n, S c)
    {
        check_arity(n);
        if (n.degree() > trunc_) return;
        if (traits::is_zero(c))
            coef_.erase(n);
        else
            coef_[n] = std::move(c);
    }

    void add_coeff(const MultiIndex& n, const S& c)
    {
        check_arity(n);
        if (n.degree() > trunc_) return;
        auto it = coef_.find(n);
        if (it == coef_.end()) {
            if (!traits::is_zero(c)) coef_.emplace(n, c);
            return;
        }
        it->second += c;
        if (traits::is_zero(it->second)) coef_.erase(it);
    }

    const S& coeff(const MultiIndex& n) const
    {
        check_arity(n);
        static const S zero_value = traits::zero();
        auto it = coef_.find(n);
        return it == coef_.end() ? zero_value : it->second;
    }

    // Taylor coefficient f_n; positions beyond trunc are not determined.
    const S& taylor_coeff(const MultiIndex& n) const
    {
        if (n.degree() > trunc_)
            throw truncation_error("taylor_coeff at degree " + std::to_string(n.degree())
                                   + " exceeds truncation " + std::to_string(trunc_));
        return coeff(n);
    }

    S constant_term() const { return coeff(MultiIndex(vars_)); }

    Valuation valuation() const
    {
        if (coef_.empty()) return {std::nullopt};
        return {coef_.begin()->first.degree()};
    }

    // Keeps total degree <= N.
    Series jet(unsigned N) const
    {
        Series out(vars_, std::min(N, trunc_));
        for (const auto& [n, c] : coef_)
            if (n.degree() <= N) out.coef_.emplace(n, c);
        return out;
    }

    // Declares a different truncation order.  Raising it asserts that the
    // caller knows all omitted coefficients vanish (exact polynomials).
    Series with_trunc(unsigned N) const
    {
        if (N < trunc_) return jet(N);
        Series out(vars_, N);
        out.coef_ = coef_;
        return out;
    }

    Series operator-() const
    {
        Series out(vars_, trunc_);
        for (const auto& [n, c] : coef_) out.coef_.emplace(n, -c);
        return out;
    }

    friend Series operator+(const Series& f, const Series& g)
    {
        f.check_same_vars(g);
        Series out = f.jet(std::min(f.trunc_, g.trunc_));
        for (const auto& [n, c] : g.coef_) out.add_coeff(n, c);
        return out;
    }

    friend Series operator-(const Series& f, const Series& g) { return f + (-g); }

    // Cauchy product, truncated to min(trunc_f, trunc_g).
    friend Series operator*(const Series& f, const Series& g)
    {
        f.check_same_vars(g);
        Series out(f.vars_, std::min(f.trunc_, g.trunc_));
        for (const auto& [n1, c1] : f.coef_) {
            if (n1.degree() > out.trunc_) break;
            for (const auto& [n2, c2] : g.coef_) {
                if (n1.degree() + n2.degree() > out.trunc_) break;
                out.add_coeff(n1.plus(n2), c1 * c2);
            }
        }
        return out;
    }

    Series scaled(const S& a) const
    {
        Series out(vars_, trunc_);
        if (traits::is_zero(a)) return out;
        for (const auto& [n, c] : coef_) out.set_coeff(n, c * a);
        return out;
    }

    // Exact multiplication by a single monomial; raises trunc by |n|.
    Series mul_monomial(const MultiIndex& n, const S& a) const
    {
        check_arity(n);
        Series out(vars_, trunc_ + n.degree());
        if (traits::is_zero(a)) return out;
        for (const auto& [k, c] : coef_) out.coef_.emplace(k.plus(n), c * a);
        return out;
    }

    // Exact division by a monomial; every stored term must be divisible.
    // Lowers trunc by |n| (coefficients above it are no longer determined).
    Series div_monomial(const MultiIndex& n) const
    {
        check_arity(n);
        unsigned d = n.degree();
        if (trunc_ < d)
            throw truncation_error("div_monomial: truncation too small");
        Series out(vars_, trunc_ - d);
        for (const auto& [k, c] : coef_) {
            auto q = k.minus(n);
            if (!q) throw domain_error("div_monomial: term " + k.to_string()
                                       + " not divisible by " + n.to_string());
            out.coef_.emplace(*q, c);
        }
        return out;
    }

    // d/dz_j.  Coefficient rule (n_j + 1) f_{n+e_j}; drops trunc by one.
    Series derive(std::size_t j) const
    {
        if (j >= vars_) throw domain_error("derive: variable index out of range");
        if (trunc_ == 0) return Series(vars_, 0);
        Series out(vars_, trunc_ - 1);
        for (const auto& [n, c] : coef_) {
            if (n[j] == 0) continue;
            std::vector<unsigned> e = n.exps();
            unsigned k = e[j];
            e[j] = k - 1;
            out.set_coeff(MultiIndex(std::move(e)), c * traits::from_long(static_cast<long>(k)));
        }
        return out;
    }

    // Equal when arities match and coefficients agree up to the smaller
    // truncation order.
    friend bool operator==(const Series& f, const Series& g)
    {
        if (f.vars_ != g.vars_) return false;
        unsigned t = std::min(f.trunc_, g.trunc_);
        auto it = f.coef_.begin(), jt = g.coef_.begin();
        while (true) {
            while (it != f.coef_.end() && it->first.degree() > t) ++it;
            while (jt != g.coef_.end() && jt->first.degree() > t) ++jt;
            bool fe = it == f.coef_.end() || it->first.degree() > t;
            bool ge = jt == g.coef_.end() || jt->first.degree() > t;
            if (fe || ge) return fe && ge;
            if (!(it->first == jt->first) || !(it->second == jt->second)) return false;
            ++it;
            ++jt;
        }
    }

    // Numeric evaluation at a point (used by the transport integrator).
    Complex eval(const std::vector<Complex>& z) const
    {
        if (z.size() != vars_) throw domain_error("eval: wrong point dimension");
        Complex acc{0.0, 0.0};
        for (const auto& [n, c] : coef_) {
            Complex term = traits::to_complex(c);
            for (std::size_t j = 0; j < vars_; ++j)
                for (unsigned e = 0; e < n[j]; ++e) term *= z[j];
            acc += term;
        }
        return acc;
    }

    std::string to_string() const
    {
        if (coef_.empty()) return "0 (+O^" + std::to_string(trunc_ + 1) + ")";
        std::ostringstream os;
        bool first = true;
        for (const auto& [n, c] : coef_) {
            if (!first) os << " + ";
            first = false;
            os << traits::to_string(c) << "*z^" << n.to_string();
        }
        os << " + O^" << trunc_ + 1;
        return os.str();
    }

private:
    void check_arity(const MultiIndex& n) const
    {
        if (n.size() != vars_)
            throw domain_error("multi-index arity " + std::to_string(n.size())
                               + " does not match series in " + std::to_string(vars_)
                               + " variable(s)");
    }
    void check_same_vars(const Series& g) const
    {
        if (vars_ != g.vars_)
            throw domain_error("series arity mismatch: " + std::to_string(vars_) + " vs "
                               + std::to_string(g.vars_));
    }

    std::size_t vars_;
    unsigned trunc_;
    coeff_map coef_;
};

template <class S>
Series<S> jet(const Series<S>& f, unsigned N)
{
    return f.jet(N);
}

using ExactSeries  = Series<GaussianRational>;
using ApproxSeries = Series<Complex>;

} // namespace germcalc

#endif
