#ifndef GERMCALC_FLOWS_HPP
#define GERMCALC_FLOWS_HPP

#include <string>
#include <vector>

#include "germcalc/calculus.hpp"
#include "germcalc/errors.hpp"
#include "germcalc/series.hpp"

namespace germcalc {

// Germ of a holomorphic vector field: one series per component, all sharing
// the variable count.  trunc() is the smallest component truncation.
template <class S>
struct VectorField {
    std::vector<Series<S>> components;

    explicit VectorField(std::vector<Series<S>> comps) : components(std::move(comps))
    {
        if (components.empty()) throw domain_error("vector field needs at least one component");
        for (const auto& c : components)
            if (c.vars() != components.size())
                throw domain_error("vector field components must live in as many variables "
                                   "as there are components");
    }

    std::size_t dim() const { return components.size(); }

    unsigned trunc() const
    {
        unsigned t = components[0].trunc();
        for (const auto& c : components) t = std::min(t, c.trunc());
        return t;
    }
};

// X . f = sum_j X_j d f / d z_j.
template <class S>
Series<S> lie_derivative(const VectorField<S>& X, const Series<S>& f)
{
    if (f.vars() != X.dim()) throw domain_error("lie_derivative: dimension mismatch");
    Series<S> acc(f.vars(), f.trunc() == 0 ? 0 : f.trunc() - 1);
    for (std::size_t j = 0; j < X.dim(); ++j)
        acc = acc + X.components[j] * f.derive(j);
    return acc;
}

// Flow of X as a series in (z, t): components in dim+1 variables with t
// last, truncated in total degree.  Setting t = 0 gives the identity.
template <class S>
struct FlowSeries {
    std::vector<Series<S>> components;
    unsigned order = 0;

    std::size_t dim() const { return components.size(); }

    // Substitutes t = 0.
    std::vector<Series<S>> at_time_zero() const
    {
        std::vector<Series<S>> out;
        for (const auto& c : components) {
            Series<S> r(c.vars() - 1, c.trunc());
            for (const auto& [n, a] : c.coeffs()) {
                if (n[c.vars() - 1] != 0) continue;
                std::vector<unsigned> e(n.exps().begin(), n.exps().end() - 1);
                r.set_coeff(MultiIndex(std::move(e)), a);
            }
            out.push_back(std::move(r));
        }
        return out;
    }
};

namespace detail {

// Series in m variables viewed in m+1 (new variable appended, unused).
template <class S>
Series<S> append_variable(const Series<S>& f)
{
    Series<S> out(f.vars() + 1, f.trunc());
    for (const auto& [n, c] : f.coeffs()) {
        std::vector<unsigned> e = n.exps();
        e.push_back(0);
        out.set_coeff(MultiIndex(std::move(e)), c);
    }
    return out;
}

} // namespace detail

// Lie-series flow: Phi = sum_k t^k / k! (X .^k Id), assembled to total
// degree `order` in (z, t).  Each iterated Lie derivative costs one order
// of truncation, hence the precondition trunc(X) >= order.
template <class S>
FlowSeries<S> flow_series(const VectorField<S>& X, unsigned order)
{
    using T = scalar_traits<S>;
    if (X.trunc() < order)
        throw truncation_error("flow_series: field truncation " + std::to_string(X.trunc())
                               + " < requested order " + std::to_string(order));
    std::size_t m = X.dim();
    FlowSeries<S> flow;
    flow.order = order;

    for (std::size_t i = 0; i < m; ++i) {
        Series<S> term = Series<S>::variable(m, X.trunc() + 1, i); // X .^0 Id
        Series<S> comp(m + 1, order);
        Rational kfact = 1;
        for (unsigned k = 0; k <= order; ++k) {
            if (k > 0) {
                term = lie_derivative(X, term);
                kfact *= static_cast<long>(k);
            }
            if (term.trunc() + k < order)
                throw truncation_error("flow_series: internal truncation shortfall");
            std::vector<unsigned> te(m + 1, 0u);
            te[m] = k;
            // the t^k factor is an exact monomial, so this multiplication
            // loses no determined coefficients
            Series<S> part = detail::append_variable(term.jet(order - k))
                                 .mul_monomial(MultiIndex(std::move(te)),
                                               T::from_rational(Rational(1) / kfact));
            comp = comp + part;
        }
        flow.components.push_back(std::move(comp));
    }
    return flow;
}

// dPhi/dt - X o Phi, identically zero at truncation when Phi is the flow.
// The substitution is legal because Phi has zero constant term in (z, t).
template <class S>
std::vector<Series<S>> flow_residual(const VectorField<S>& X, const FlowSeries<S>& Phi)
{
    if (Phi.dim() != X.dim()) throw domain_error("flow_residual: dimension mismatch");
    std::size_t m = X.dim();
    std::vector<Series<S>> out;
    for (std::size_t i = 0; i < m; ++i) {
        Series<S> dt = Phi.components[i].derive(m);
        Series<S> sub = compose(X.components[i], Phi.components);
        out.push_back(dt - sub);
    }
    return out;
}

// Scalar ODE P(z, f - f(0), ..., f^(k) - f^(k)(0)) = 0 encoded by a germ P
// in the k+2 variables (z, delta_0, ..., delta_k).
template <class S>
struct OdeSpec {
    unsigned k = 0;
    Series<S> P;

    OdeSpec(unsigned k_, Series<S> P_) : k(k_), P(std::move(P_))
    {
        if (P.vars() != k + 2)
            throw domain_error("OdeSpec: P must have k+2 variables, got "
                               + std::to_string(P.vars()));
    }
};

// Companion vector field in (z, delta_0, ..., delta_k):
//   dz = 1, d delta_j = delta_{j+1} (j < k),
//   d delta_k = -(P_z + sum_{j<k} P_{delta_j} delta_{j+1}) / P_{delta_k}.
// Requires P_{delta_k}(0) != 0 so the quotient expands at the origin.
template <class S>
VectorField<S> companion_field(const OdeSpec<S>& spec)
{
    using T = scalar_traits<S>;
    std::size_t m = spec.k + 2;
    if (spec.P.trunc() < 1) throw truncation_error("companion_field: truncation too small");
    unsigned t = spec.P.trunc() - 1;

    Series<S> dPdk = spec.P.derive(1 + spec.k);
    if (T::is_zero(dPdk.constant_term()))
        throw domain_error("companion_field: dP/d delta_k vanishes at the origin "
                           "(degenerate equation)");

    Series<S> num = spec.P.derive(0);
    for (unsigned j = 0; j < spec.k; ++j) {
        Series<S> dj1 = Series<S>::variable(m, t + 1, 2 + j); // delta_{j+1}
        num = num + spec.P.derive(1 + j) * dj1;
    }

    std::vector<Series<S>> comps;
    comps.push_back(Series<S>::constant(m, t, T::one()));
    for (unsigned j = 0; j < spec.k; ++j)
        comps.push_back(Series<S>::variable(m, t, 2 + j));
    comps.push_back((num * invert_series(dPdk)).scaled(-T::one()));
    return VectorField<S>(std::move(comps));
}

template <class S>
unsigned poly_like_degree(const Series<S>& f)
{
    unsigned d = 0;
    for (const auto& [n, c] : f.coeffs()) d = std::max(d, n.degree());
    return d;
}

// J(z) + delta_0-component of the flow of the companion field, taken from
// the origin at time z.  Reproduces solutions whose k-jet derivative part
// vanishes; the jet J is added on top as stated.
template <class S>
Series<S> ode_solve(const Series<S>& J, const OdeSpec<S>& spec, unsigned order)
{
    if (J.vars() != 1) throw domain_error("ode_solve: jet must be univariate");
    if (poly_like_degree(J) > spec.k)
        throw domain_error("ode_solve: jet degree exceeds the equation order");
    VectorField<S> X = companion_field(spec);
    FlowSeries<S> Phi = flow_series(X, order);

    // restrict the delta_0 component to starting point 0: keep pure t-powers
    const Series<S>& d0 = Phi.components[1];
    Series<S> out(1, order);
    std::size_t tvar = spec.k + 2;
    for (const auto& [n, c] : d0.coeffs()) {
        bool pure_t = true;
        for (std::size_t j = 0; j < tvar; ++j)
            if (n[j] != 0) { pure_t = false; break; }
        if (pure_t) out.set_coeff(MultiIndex{n[tvar]}, c);
    }
    return out + J.with_trunc(order);
}

} // namespace germcalc

#endif
