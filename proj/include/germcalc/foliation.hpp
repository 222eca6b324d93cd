#ifndef GERMCALC_FOLIATION_HPP
#define GERMCALC_FOLIATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "germcalc/calculus.hpp"
#include "germcalc/coprimality.hpp"
#include "germcalc/errors.hpp"
#include "germcalc/flows.hpp"
#include "germcalc/series.hpp"

namespace germcalc {

// Planar foliation y' = P/Q at a singular point with zero linear part.
// P and Q are exact; every algebraic gate below runs on exact scalars,
// only the transport integration is numeric.
struct FoliationPair {
    ExactSeries P, Q;
    CoprimalityVerdict verdict;

    static FoliationPair make(const ExactSeries& P, const ExactSeries& Q, unsigned d_max)
    {
        if (P.vars() != 2 || Q.vars() != 2)
            throw domain_error("foliation pair must be bivariate");
        auto check_zlp = [](const ExactSeries& f, const char* name) {
            if (!f.coeff(MultiIndex{0, 0}).is_zero() || !f.coeff(MultiIndex{1, 0}).is_zero()
                || !f.coeff(MultiIndex{0, 1}).is_zero())
                throw domain_error(std::string(name) + " must have zero first jet");
        };
        check_zlp(P, "P");
        check_zlp(Q, "Q");
        FoliationPair fp{P, Q, {}};
        fp.verdict = decide_coprime(std::vector<ExactSeries>{P, Q}, d_max);
        return fp;
    }

    static FoliationPair make(const ExactSeries& P, const ExactSeries& Q)
    {
        // certificates arrive at small rank; cap the scan so the default
        // stays cheap, and never ask for more than the truncation carries
        unsigned t = std::min(P.trunc(), Q.trunc());
        return make(P, Q, std::min(t >= 1 ? t - 1 : 0, 8u));
    }
};

namespace detail {

// y -> x u on exponents: x^p y^q -> x^{p+q} u^q; exact, trunc preserved
// (every target degree <= trunc is fully determined, cf. p + 2q <= p + q).
inline ExactSeries substitute_y_xu(const ExactSeries& f)
{
    ExactSeries out(2, f.trunc());
    for (const auto& [n, c] : f.coeffs())
        out.set_coeff(MultiIndex{n[0] + n[1], n[1]}, c);
    return out;
}

} // namespace detail

// Chart (x, u), blow-up (x, y) = (x, x u).  The pulled-back field divided
// by x^2 has components (Q(x,xu)/x, (P(x,xu) - u Q(x,xu))/x^2), both exact
// polynomials of the chart because P, Q have zero first jet.
inline VectorField<GaussianRational> blowup_chart_x(const FoliationPair& f)
{
    ExactSeries Qs = detail::substitute_y_xu(f.Q);
    ExactSeries Ps = detail::substitute_y_xu(f.P);
    ExactSeries a = Qs.div_monomial(MultiIndex{1, 0});
    ExactSeries uQ = Qs.mul_monomial(MultiIndex{0, 1}, GaussianRational(1)).jet(Qs.trunc());
    ExactSeries b = (Ps - uQ).div_monomial(MultiIndex{2, 0});
    return VectorField<GaussianRational>({a.jet(b.trunc()), b});
}

// Coefficients (phi3, phi2, phi1, phi0) of the tangent cubic
// phi(u) = -Q02 u^3 + (P02 - Q11) u^2 + (P11 - Q20) u + P20,
// read off the second jets.
inline std::array<GaussianRational, 4> tangent_cubic(const FoliationPair& f)
{
    auto P2 = [&](unsigned i, unsigned j) { return f.P.coeff(MultiIndex{i, j}); };
    auto Q2 = [&](unsigned i, unsigned j) { return f.Q.coeff(MultiIndex{i, j}); };
    return {-Q2(0, 2), P2(0, 2) - Q2(1, 1), P2(1, 1) - Q2(2, 0), P2(2, 0)};
}

// Discriminant 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2 of
// a u^3 + b u^2 + c u + d, exact.
inline GaussianRational cubic_discriminant(const std::array<GaussianRational, 4>& phi)
{
    const auto& [a, b, c, d] = phi;
    GaussianRational s18(18), s4(4), s27(27);
    return s18 * a * b * c * d - s4 * b * b * b * d + b * b * c * c - s4 * a * c * c * c
           - s27 * a * a * d * d;
}

struct RndStarReport {
    bool member = false;
    std::vector<std::string> violations;
    GaussianRational discriminant;
};

// Exact membership test for the class that is reduced and non-dicritic
// after a single blow-up, with all three singular points simple and away
// from the chart origin.
inline RndStarReport rnd_star_test(const FoliationPair& f)
{
    RndStarReport r;
    auto phi = tangent_cubic(f);
    r.discriminant = cubic_discriminant(phi);
    if (phi[0].is_zero())
        r.violations.push_back("Q_{0,2} = 0: dicritic risk, cubic degenerates");
    if (phi[3].is_zero())
        r.violations.push_back("P_{2,0} = 0: singular point at the chart origin");
    if (r.discriminant.is_zero())
        r.violations.push_back("discriminant = 0: repeated singular point");
    if (f.verdict.status != CoprimalityVerdict::Status::coprime_certified)
        r.violations.push_back("coprimality not certified: improper representative");
    r.member = r.violations.empty();
    return r;
}

struct SingularPoint {
    Complex u;        // root of the tangent cubic on the divisor
    Complex lambda_x; // eigenvalue transverse to the divisor
    Complex lambda_u; // eigenvalue along the divisor, phi'(u)
    Complex ratio;    // lambda_x / lambda_u
};

// Roots of the cubic as companion-matrix eigenvalues, with the eigenvalue
// pair of the linearized foliation at each; deterministic order by
// increasing real part, imaginary part breaking ties.
inline std::vector<SingularPoint> singular_data(const FoliationPair& f)
{
    RndStarReport gate = rnd_star_test(f);
    if (!gate.member) {
        std::string why;
        for (const auto& v : gate.violations) why += " [" + v + "]";
        throw domain_error("singular_data: input not in the admissible class:" + why);
    }
    auto phi = tangent_cubic(f);
    using T = scalar_traits<GaussianRational>;
    Complex a3 = T::to_complex(phi[0]), a2 = T::to_complex(phi[1]), a1 = T::to_complex(phi[2]),
            a0 = T::to_complex(phi[3]);

    Eigen::Matrix3cd comp = Eigen::Matrix3cd::Zero();
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    comp(0, 2) = -a0 / a3;
    comp(1, 2) = -a1 / a3;
    comp(2, 2) = -a2 / a3;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw numeric_error("singular_data: eigenvalue iteration did not converge");

    auto Q2 = [&](unsigned i, unsigned j) { return T::to_complex(f.Q.coeff(MultiIndex{i, j})); };
    std::vector<SingularPoint> pts;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(es.eigenvalues()[i]));
    for (int i = 0; i < 3; ++i) {
        Complex u = es.eigenvalues()[i];
        Complex residual = ((a3 * u + a2) * u + a1) * u + a0;
        if (std::abs(residual) > 1e-9 * std::max(1.0, std::abs(a3) * scale * scale * scale))
            throw numeric_error("singular_data: root residual " + std::to_string(std::abs(residual)));
        SingularPoint p;
        p.u = u;
        p.lambda_x = (Q2(0, 2) * u + Q2(1, 1)) * u + Q2(2, 0);
        p.lambda_u = (3.0 * a3 * u + 2.0 * a2) * u + a1;
        if (std::abs(p.lambda_x) == 0.0 || std::abs(p.lambda_u) == 0.0)
            throw numeric_error("singular_data: vanishing eigenvalue at u = "
                                + std::to_string(u.real()));
        p.ratio = p.lambda_x / p.lambda_u;
        pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const SingularPoint& l, const SingularPoint& r) {
        if (l.u.real() != r.u.real()) return l.u.real() < r.u.real();
        return l.u.imag() < r.u.imag();
    });
    return pts;
}

// Polygonal circuit in the u-plane; closed (last vertex joins the first).
struct LoopSpec {
    std::vector<Complex> vertices;

    static LoopSpec circle(Complex center, double radius, std::size_t n = 64,
                           double base_angle = 0.0)
    {
        LoopSpec l;
        for (std::size_t i = 0; i <= n; ++i) {
            double th = base_angle + 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
            l.vertices.push_back(center + radius * Complex{std::cos(th), std::sin(th)});
        }
        return l;
    }

    // Loop around one singular point, based at `base`: straight stick to
    // the circle, once around, straight back.
    static LoopSpec around(Complex base, Complex center, double radius, std::size_t n = 64)
    {
        Complex dir = base - center;
        double dist = std::abs(dir);
        if (dist <= radius) throw domain_error("loop base lies inside the circle");
        Complex entry = center + dir / dist * radius;
        double th0 = std::arg(entry - center);
        LoopSpec l;
        l.vertices.push_back(base);
        LoopSpec c = circle(center, radius, n, th0);
        l.vertices.insert(l.vertices.end(), c.vertices.begin(), c.vertices.end());
        l.vertices.push_back(base);
        return l;
    }

    // Lollipop with the stick pushed sideways until it clears every
    // obstacle by `margin`.  Different offsets give conjugate loops, which
    // generate the same group and carry the same multiplier.
    static LoopSpec around_avoiding(Complex base, Complex center, double radius,
                                    const std::vector<Complex>& obstacles, double margin,
                                    std::size_t n = 64)
    {
        Complex dir = base - center;
        double dist = std::abs(dir);
        if (dist <= radius) throw domain_error("loop base lies inside the circle");
        Complex d = dir / dist;
        Complex entry = center + d * radius;
        Complex perp = d * Complex{0.0, 1.0};

        std::vector<Complex> others;
        for (Complex o : obstacles)
            if (std::abs(o - center) > radius * 0.5) others.push_back(o);

        for (double off : {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0}) {
            Complex shift = perp * (off * radius);
            LoopSpec l;
            l.vertices.push_back(base);
            if (off != 0.0) {
                l.vertices.push_back(base + shift);
                l.vertices.push_back(entry + shift);
            }
            l.vertices.push_back(entry);
            LoopSpec c = circle(center, radius, n, std::arg(entry - center));
            l.vertices.insert(l.vertices.end(), c.vertices.begin(), c.vertices.end());
            if (off != 0.0) {
                l.vertices.push_back(entry + shift);
                l.vertices.push_back(base + shift);
            }
            l.vertices.push_back(base);
            if (l.min_distance_to(others) >= margin) return l;
        }
        throw domain_error("around_avoiding: no routing clears the obstacles");
    }

    LoopSpec reversed() const
    {
        LoopSpec l;
        l.vertices.assign(vertices.rbegin(), vertices.rend());
        return l;
    }

    LoopSpec concat(const LoopSpec& o) const
    {
        LoopSpec l = *this;
        l.vertices.insert(l.vertices.end(), o.vertices.begin(), o.vertices.end());
        return l;
    }

    double min_distance_to(const std::vector<Complex>& pts) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
            Complex a = vertices[i], ab = vertices[i + 1] - a;
            double len2 = std::norm(ab);
            for (Complex p : pts) {
                Complex ap = p - a;
                double t = len2 == 0.0
                               ? 0.0
                               : std::clamp((ap.real() * ab.real() + ap.imag() * ab.imag()) / len2,
                                            0.0, 1.0);
                best = std::min(best, std::abs(a + t * ab - p));
            }
        }
        return best;
    }
};

// Right-hand side of the transport equation dx/du = rhs(x, u).
using TransportRhs = std::function<Complex(Complex, Complex)>;

struct TransportSettings {
    double rel_tol = 1e-10;
    double margin_factor = 0.1; // loop must keep this * (min root gap) away
    unsigned samples = 8;
    unsigned fit_degree = 6;
    double confidence_tol = 1e-6;
};

namespace detail {

// Dormand-Prince 5(4) adaptive step for a scalar complex ODE along the
// straight segment u(s) = u0 + s (u1 - u0), s in [0, 1].
inline Complex integrate_segment(const TransportRhs& rhs, Complex u0, Complex u1, Complex x,
                                 double rel_tol)
{
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Complex du = u1 - u0;
    auto f = [&](double s, Complex y) { return du * rhs(y, u0 + s * du); };

    double s = 0.0, h = 0.5;
    int rejects_in_a_row = 0;
    while (s < 1.0) {
        h = std::min(h, 1.0 - s);
        Complex k1 = f(s, x);
        Complex k2 = f(s + c2 * h, x + h * (a21 * k1));
        Complex k3 = f(s + c3 * h, x + h * (a31 * k1 + a32 * k2));
        Complex k4 = f(s + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Complex k5 = f(s + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Complex k6 = f(s + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Complex x5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Complex k7 = f(s + h, x5);
        Complex err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double tol = rel_tol * std::max({std::abs(x), std::abs(x5), 1e-290});
        double e = std::abs(err);
        if (e <= tol) {
            s += h;
            x = x5;
            rejects_in_a_row = 0;
        } else if (++rejects_in_a_row > 60) {
            throw numeric_error("transport: step size collapsed (trajectory too close to a "
                                "singular fiber)");
        }
        double fac = e == 0.0 ? 4.0 : 0.9 * std::pow(tol / e, 0.2);
        h *= std::clamp(fac, 0.2, 4.0);
        if (h < 1e-14)
            throw numeric_error("transport: step size underflow near u = "
                                + std::to_string((u0 + s * du).real()));
    }
    return x;
}

} // namespace detail

inline Complex transport_loop(const TransportRhs& rhs, const LoopSpec& loop, Complex x,
                              double rel_tol)
{
    if (loop.vertices.size() < 2) throw domain_error("transport_loop: empty loop");
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i)
        x = detail::integrate_segment(rhs, loop.vertices[i], loop.vertices[i + 1], x, rel_tol);
    return x;
}

// Least-squares fit of a zero-constant-term polynomial germ through the
// transported pairs; coefficients of x, x^2, ..., x^degree.
struct GermFit {
    std::vector<Complex> coeffs;
    double residual = 0.0;

    Complex eval(Complex x) const
    {
        Complex acc{0.0, 0.0};
        for (std::size_t i = coeffs.size(); i > 0; --i) acc = (acc + coeffs[i - 1]) * x;
        return acc;
    }
};

inline GermFit fit_germ(const std::vector<std::pair<Complex, Complex>>& samples, unsigned degree)
{
    if (samples.size() < degree)
        throw domain_error("fit_germ: fewer samples than fit coefficients");
    double xscale = 0.0;
    for (const auto& [xin, xout] : samples) xscale = std::max(xscale, std::abs(xin));
    if (xscale == 0.0) throw domain_error("fit_germ: degenerate samples");

    Eigen::MatrixXcd A(samples.size(), degree);
    Eigen::VectorXcd b(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Complex xh = samples[i].first / xscale;
        Complex p = xh;
        for (unsigned j = 0; j < degree; ++j) {
            A(static_cast<Eigen::Index>(i), j) = p;
            p *= xh;
        }
        b(static_cast<Eigen::Index>(i)) = samples[i].second;
    }
    Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(b);

    GermFit fit;
    double sc = 1.0;
    for (unsigned j = 0; j < degree; ++j) {
        sc /= xscale;
        fit.coeffs.push_back(sol(j) * sc);
    }
    for (const auto& [xin, xout] : samples)
        fit.residual = std::max(fit.residual, std::abs(fit.eval(xin) - xout));
    return fit;
}

// First-return germ on the transversal {u = base}: numeric transport of a
// fan of starting points along the loop, then a polynomial fit.
struct HolonomyGerm {
    std::vector<std::pair<Complex, Complex>> samples;
    GermFit fitted;
    double residual = 0.0;
    bool low_confidence = false;

    DiffeoGerm<Complex> germ(unsigned trunc) const
    {
        ApproxSeries s(1, trunc);
        for (std::size_t j = 0; j < fitted.coeffs.size(); ++j)
            s.set_coeff(MultiIndex{static_cast<unsigned>(j + 1)}, fitted.coeffs[j]);
        return DiffeoGerm<Complex>(s);
    }
};

// dx/du for the blown-up foliation: x * (Q(x,xu)/x^2) / ((P - uQ)(x,xu)/x^2),
// both factors exact polynomials evaluated numerically.
inline TransportRhs transport_rhs(const FoliationPair& f)
{
    ExactSeries Qs = detail::substitute_y_xu(f.Q);
    ExactSeries Ps = detail::substitute_y_xu(f.P);
    ExactSeries num = Qs.div_monomial(MultiIndex{2, 0});
    ExactSeries uQ = Qs.mul_monomial(MultiIndex{0, 1}, GaussianRational(1)).jet(Qs.trunc());
    ExactSeries den = (Ps - uQ).div_monomial(MultiIndex{2, 0});

    // flatten to plain coefficient lists; eval cost dominates the transport
    struct Term {
        unsigned ex, eu;
        Complex c;
    };
    auto flatten = [](const ExactSeries& s) {
        std::vector<Term> t;
        for (const auto& [n, c] : s.coeffs())
            t.push_back({n[0], n[1], scalar_traits<GaussianRational>::to_complex(c)});
        return t;
    };
    auto nt = flatten(num), dt = flatten(den);
    auto eval = [](const std::vector<Term>& terms, Complex x, Complex u) {
        Complex acc{0.0, 0.0};
        for (const auto& t : terms) {
            Complex v = t.c;
            for (unsigned i = 0; i < t.ex; ++i) v *= x;
            for (unsigned i = 0; i < t.eu; ++i) v *= u;
            acc += v;
        }
        return acc;
    };
    return [nt, dt, eval](Complex x, Complex u) -> Complex {
        Complex den_v = eval(dt, x, u);
        if (std::abs(den_v) < 1e-280)
            throw numeric_error("transport: vanishing denominator (singular fiber)");
        return x * eval(nt, x, u) / den_v;
    };
}

inline HolonomyGerm holonomy(const FoliationPair& f, const LoopSpec& loop,
                             const TransportSettings& settings = {})
{
    auto pts = singular_data(f); // also runs the exact membership gate
    std::vector<Complex> roots;
    for (const auto& p : pts) roots.push_back(p.u);

    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            gap = std::min(gap, std::abs(roots[i] - roots[j]));
    if (loop.min_distance_to(roots) < settings.margin_factor * gap)
        throw domain_error("holonomy: loop passes closer than the configured margin to a "
                           "singular point");

    double uscale = 0.0;
    for (Complex r : roots) uscale = std::max(uscale, std::abs(r));
    double r0 = 1e-2 * uscale;
    double rho = std::pow(12.0, -1.0 / std::max(1u, settings.samples - 1));

    TransportRhs rhs = transport_rhs(f);
    HolonomyGerm h;
    for (unsigned i = 0; i < settings.samples; ++i) {
        double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(settings.samples);
        Complex xin = r0 * std::pow(rho, static_cast<double>(i))
                      * Complex{std::cos(th), std::sin(th)};
        Complex xout = transport_loop(rhs, loop, xin, settings.rel_tol);
        h.samples.emplace_back(xin, xout);
    }
    h.fitted = fit_germ(h.samples, settings.fit_degree);
    h.residual = h.fitted.residual;
    h.low_confidence = h.residual > settings.confidence_tol * std::max(1e-30, r0);
    return h;
}

struct SolvabilityReport {
    enum class Verdict { passes, fails, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    unsigned order = 0;
    unsigned fail_degree = 0;
    double margin = 0.0;   // size of the violation of the group relation
    double residual = 0.0; // worst fit residual of the two generators
};

namespace detail {

inline GermFit split_fit(const std::vector<std::pair<Complex, Complex>>& samples,
                         unsigned degree, int parity)
{
    std::vector<std::pair<Complex, Complex>> half;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (static_cast<int>(i % 2) == parity) half.push_back(samples[i]);
    return fit_germ(half, degree);
}

inline DiffeoGerm<Complex> fit_to_germ(const GermFit& fit, unsigned trunc)
{
    ApproxSeries s(1, trunc);
    for (std::size_t j = 0; j < fit.coeffs.size(); ++j)
        s.set_coeff(MultiIndex{static_cast<unsigned>(j + 1)}, fit.coeffs[j]);
    return DiffeoGerm<Complex>(s);
}

// coefficients of [f, [f, g o g]] - Id up to `order`
inline ApproxSeries loray_deviation(const DiffeoGerm<Complex>& f, const DiffeoGerm<Complex>& g,
                                    unsigned order)
{
    auto w = commutator(f, commutator(f, compose(g, g)));
    return w.series() - ApproxSeries::variable(1, order, 0);
}

} // namespace detail

// Fits the holonomy generators around the first two singular points and
// runs the two-generator solvability relation on the fitted germs.  The
// noise floor per degree is calibrated empirically: each generator is also
// fitted on two disjoint halves of its transported samples, and the
// disagreement of the resulting relation deviations measures what the
// numerics can resolve.  A failure is reported only where the deviation
// clears that floor by an order of magnitude.
inline SolvabilityReport solvability_report(const FoliationPair& f, unsigned order,
                                            TransportSettings settings = {})
{
    settings.fit_degree = std::max(settings.fit_degree, order);
    settings.samples = std::max(settings.samples, 2 * settings.fit_degree + 4);
    auto pts = singular_data(f);
    std::vector<Complex> roots;
    for (const auto& p : pts) roots.push_back(p.u);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            gap = std::min(gap, std::abs(roots[i] - roots[j]));

    Complex base{0.0, 0.0}; // chart origin, never singular in this class
    double radius = 0.3 * gap;
    double margin = settings.margin_factor * gap;
    HolonomyGerm h1 =
        holonomy(f, LoopSpec::around_avoiding(base, roots[0], radius, roots, margin), settings);
    HolonomyGerm h2 =
        holonomy(f, LoopSpec::around_avoiding(base, roots[1], radius, roots, margin), settings);

    SolvabilityReport rep;
    rep.order = order;
    rep.residual = std::max(h1.residual, h2.residual);

    unsigned deg = settings.fit_degree;
    ApproxSeries dev = detail::loray_deviation(h1.germ(order), h2.germ(order), order);
    ApproxSeries dev_a =
        detail::loray_deviation(detail::fit_to_germ(detail::split_fit(h1.samples, deg, 0), order),
                                detail::fit_to_germ(detail::split_fit(h2.samples, deg, 0), order),
                                order);
    ApproxSeries dev_b =
        detail::loray_deviation(detail::fit_to_germ(detail::split_fit(h1.samples, deg, 1), order),
                                detail::fit_to_germ(detail::split_fit(h2.samples, deg, 1), order),
                                order);

    rep.margin = 0.0;
    unsigned first = 0;
    bool cleared = false;
    for (unsigned d = 1; d <= order; ++d) {
        MultiIndex n{d};
        double mag = std::abs(dev.coeff(n));
        double noise = std::abs(dev_a.coeff(n) - dev_b.coeff(n)) + 1e-13;
        rep.margin = std::max(rep.margin, mag);
        if (mag > 10.0 * noise && !cleared) {
            cleared = true;
            first = d;
        }
    }

    if (cleared) {
        rep.verdict = SolvabilityReport::Verdict::fails;
        rep.fail_degree = first;
    } else if (h1.low_confidence || h2.low_confidence) {
        rep.verdict = SolvabilityReport::Verdict::inconclusive;
    } else {
        rep.verdict = SolvabilityReport::Verdict::passes;
    }
    return rep;
}

} // namespace germcalc

#endif
