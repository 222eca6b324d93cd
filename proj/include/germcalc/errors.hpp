#ifndef GERMCALC_ERRORS_HPP
#define GERMCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace germcalc {

// Domain violations: bad arity, nonzero constant term where one is
// forbidden, invalid weights/parameters, malformed input documents.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A request needs coefficients beyond the declared truncation order.
class truncation_error : public domain_error {
public:
    explicit truncation_error(const std::string& what) : domain_error(what) {}
};

// Numeric procedures that failed to reach the requested confidence
// (root finder, transport integrator, fit residuals).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace germcalc

#endif
