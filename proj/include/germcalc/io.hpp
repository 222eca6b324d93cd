#ifndef GERMCALC_IO_HPP
#define GERMCALC_IO_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "germcalc/errors.hpp"
#include "germcalc/series.hpp"

namespace germcalc {

using json = nlohmann::ordered_json;

// All floating output goes through one spot: 17 significant digits, so
// identical runs emit byte-identical documents.
inline std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json complex_to_json(const Complex& c)
{
    return json{{"re", c.real()}, {"im", c.imag()}};
}

// Series document:
//   {"vars": ["x","y"], "trunc": 6,
//    "terms": [{"exp": [2,0], "re": "-1", "im": "0"}, ...]}
// Exact coefficients are rational strings "p/q"; approximate mode uses
// plain JSON numbers.

namespace detail {

inline Rational coeff_field_exact(const json& term, const char* key)
{
    if (!term.contains(key)) return Rational(0);
    const json& v = term.at(key);
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw domain_error(std::string("exact mode needs rational strings in '") + key + "'");
}

inline double coeff_field_approx(const json& term, const char* key)
{
    if (!term.contains(key)) return 0.0;
    const json& v = term.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
    throw domain_error(std::string("bad numeric field '") + key + "'");
}

template <class S>
S coeff_from_term(const json& term);

template <>
inline GaussianRational coeff_from_term<GaussianRational>(const json& term)
{
    return {coeff_field_exact(term, "re"), coeff_field_exact(term, "im")};
}

template <>
inline Complex coeff_from_term<Complex>(const json& term)
{
    return {coeff_field_approx(term, "re"), coeff_field_approx(term, "im")};
}

} // namespace detail

template <class S>
Series<S> series_from_json(const json& doc)
{
    if (!doc.contains("vars") || !doc.at("vars").is_array())
        throw domain_error("series document needs a 'vars' array");
    if (!doc.contains("trunc") || !doc.at("trunc").is_number_unsigned())
        throw domain_error("series document needs a nonnegative 'trunc'");
    std::size_t m = doc.at("vars").size();
    if (m == 0) throw domain_error("series document needs at least one variable");
    unsigned trunc = doc.at("trunc").get<unsigned>();

    Series<S> f(m, trunc);
    if (!doc.contains("terms")) return f;
    for (const json& term : doc.at("terms")) {
        if (!term.contains("exp") || !term.at("exp").is_array()
            || term.at("exp").size() != m)
            throw domain_error("term 'exp' must list one exponent per variable");
        std::vector<unsigned> e;
        for (const json& x : term.at("exp")) {
            if (!x.is_number_unsigned()) throw domain_error("exponents must be naturals");
            e.push_back(x.get<unsigned>());
        }
        MultiIndex n(std::move(e));
        if (n.degree() > trunc)
            throw domain_error("term of degree " + std::to_string(n.degree())
                               + " exceeds the declared truncation "
                               + std::to_string(trunc));
        f.add_coeff(n, detail::coeff_from_term<S>(term));
    }
    return f;
}

inline std::vector<std::string> default_var_names(std::size_t m)
{
    static const char* names[] = {"x", "y", "z", "w"};
    std::vector<std::string> v;
    for (std::size_t i = 0; i < m; ++i)
        v.push_back(i < 4 ? names[i] : "x" + std::to_string(i));
    return v;
}

template <class S>
json series_to_json(const Series<S>& f, const std::vector<std::string>& vars = {})
{
    json doc;
    doc["vars"] = vars.empty() ? default_var_names(f.vars()) : vars;
    doc["trunc"] = f.trunc();
    json terms = json::array();
    for (const auto& [n, c] : f.coeffs()) {
        json t;
        t["exp"] = n.exps();
        if constexpr (scalar_traits<S>::exact) {
            t["re"] = rational_to_string(c.re);
            t["im"] = rational_to_string(c.im);
        } else {
            t["re"] = c.real();
            t["im"] = c.imag();
        }
        terms.push_back(std::move(t));
    }
    doc["terms"] = std::move(terms);
    return doc;
}

inline json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open input file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw domain_error("malformed JSON in " + path + ": " + e.what());
    }
    return doc;
}

template <class S>
Series<S> load_series(const std::string& path)
{
    return series_from_json<S>(load_json_file(path));
}

} // namespace germcalc

#endif
