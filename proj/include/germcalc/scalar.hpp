#ifndef GERMCALC_SCALAR_HPP
#define GERMCALC_SCALAR_HPP

#include <cmath>
#include <complex>
#include <string>

#include <gmpxx.h>

#include "germcalc/errors.hpp"

namespace germcalc {

using Rational = mpq_class;
using Complex  = std::complex<double>;

// Parses "p", "-p" or "p/q" with arbitrary-precision integers.
inline Rational parse_rational(const std::string& text)
{
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw domain_error("bad rational literal: '" + text + "'");
    if (q.get_den() == 0)
        throw domain_error("zero denominator in rational literal: '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const Rational& q)
{
    return q.get_str();
}

// Element of Q(i).  All arithmetic is exact; there is no rounding anywhere.
struct GaussianRational {
    Rational re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long n) : re(n), im(0) {}
    // mpq_class(p, q) does not canonicalize; gmp comparisons require it
    GaussianRational(Rational r) : re(std::move(r)), im(0) { re.canonicalize(); }
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i))
    {
        re.canonicalize();
        im.canonicalize();
    }

    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o)
    {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o)
    {
        Rational n = o.re * o.re + o.im * o.im;
        if (n == 0) throw domain_error("division by zero scalar");
        Rational r = (re * o.re + im * o.im) / n;
        Rational i = (im * o.re - re * o.im) / n;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

// |s|^2, exact.
inline Rational abs2(const GaussianRational& s) { return s.re * s.re + s.im * s.im; }

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool exact = true;

    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return {1}; }
    static GaussianRational from_long(long n) { return {n}; }
    static GaussianRational from_ratio(long p, long q) { return {Rational(p, q)}; }
    static GaussianRational from_rational(const Rational& q) { return {q}; }

    static bool is_zero(const GaussianRational& s) { return s.is_zero(); }

    static Complex to_complex(const GaussianRational& s)
    {
        return {s.re.get_d(), s.im.get_d()};
    }
    static double abs(const GaussianRational& s) { return std::abs(to_complex(s)); }

    // exp/log of a nonzero rational is transcendental: representable only in
    // approximate mode.  Exact mode supports the base point alone.
    static GaussianRational exp(const GaussianRational& s)
    {
        if (!s.is_zero())
            throw domain_error("exact scalar cannot represent exp of a nonzero constant");
        return one();
    }
    static GaussianRational log(const GaussianRational& s)
    {
        if (!(s == one()))
            throw domain_error("exact scalar cannot represent log of a constant other than 1");
        return zero();
    }

    static std::string to_string(const GaussianRational& s)
    {
        if (s.im == 0) return rational_to_string(s.re);
        return rational_to_string(s.re) + (s.im > 0 ? "+" : "") + rational_to_string(s.im) + "i";
    }
};

template <>
struct scalar_traits<Complex> {
    static constexpr bool exact = false;

    static Complex zero() { return {0.0, 0.0}; }
    static Complex one() { return {1.0, 0.0}; }
    static Complex from_long(long n) { return {static_cast<double>(n), 0.0}; }
    static Complex from_ratio(long p, long q)
    {
        return {static_cast<double>(p) / static_cast<double>(q), 0.0};
    }
    static Complex from_rational(const Rational& q) { return {q.get_d(), 0.0}; }

    static bool is_zero(const Complex& s) { return s == Complex{0.0, 0.0}; }

    static Complex to_complex(const Complex& s) { return s; }
    static double abs(const Complex& s) { return std::abs(s); }

    static Complex exp(const Complex& s) { return std::exp(s); }
    static Complex log(const Complex& s) { return std::log(s); }

    static std::string to_string(const Complex& s)
    {
        return "(" + std::to_string(s.real()) + "," + std::to_string(s.imag()) + ")";
    }
};

} // namespace germcalc

#endif
