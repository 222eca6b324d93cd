#ifndef GERMCALC_MULTI_INDEX_HPP
#define GERMCALC_MULTI_INDEX_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "germcalc/errors.hpp"

namespace germcalc {

// Exponent vector of a monomial z^n.  Immutable after construction.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t m) : exps_(m, 0u) {}
    MultiIndex(std::initializer_list<unsigned> e) : exps_(e) {}
    explicit MultiIndex(std::vector<unsigned> e) : exps_(std::move(e)) {}

    static MultiIndex unit(std::size_t m, std::size_t j)
    {
        MultiIndex n(m);
        n.exps_[j] = 1;
        return n;
    }

    std::size_t size() const { return exps_.size(); }
    unsigned operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<unsigned>& exps() const { return exps_; }

    unsigned degree() const
    {
        return std::accumulate(exps_.begin(), exps_.end(), 0u);
    }

    // n! = prod n_l!
    mpz_class factorial() const
    {
        mpz_class f = 1;
        for (unsigned e : exps_) {
            mpz_class t;
            mpz_fac_ui(t.get_mpz_t(), e);
            f *= t;
        }
        return f;
    }

    MultiIndex plus(const MultiIndex& o) const
    {
        require_same_size(o);
        std::vector<unsigned> e(exps_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.exps_[i];
        return MultiIndex(std::move(e));
    }

    // Componentwise difference, empty when the result would leave N^m.
    std::optional<MultiIndex> minus(const MultiIndex& o) const
    {
        require_same_size(o);
        std::vector<unsigned> e(exps_);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < o.exps_[i]) return std::nullopt;
            e[i] -= o.exps_[i];
        }
        return MultiIndex(std::move(e));
    }

    bool operator==(const MultiIndex& o) const { return exps_ == o.exps_; }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(exps_[i]);
        }
        return s + ")";
    }

    void require_same_size(const MultiIndex& o) const
    {
        if (exps_.size() != o.exps_.size())
            throw domain_error("multi-index dimension mismatch: " + to_string() + " vs "
                               + o.to_string());
    }

private:
    std::vector<unsigned> exps_;
};

// Total degree first, lexicographic tie-break.  This is the total order
// every coefficient map and matrix layout in the library iterates in.
inline std::strong_ordering deglex_compare(const MultiIndex& a, const MultiIndex& b)
{
    a.require_same_size(b);
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

inline bool deglex_less(const MultiIndex& a, const MultiIndex& b)
{
    return deglex_compare(a, b) < 0;
}

struct DeglexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return deglex_less(a, b); }
};

// All n in N^m with |n| = d, increasing deglex order.
inline std::vector<MultiIndex> enumerate_degree(std::size_t m, unsigned d)
{
    std::vector<MultiIndex> out;
    if (m == 0) {
        if (d == 0) out.emplace_back(std::vector<unsigned>{});
        return out;
    }
    std::vector<unsigned> e(m, 0u);
    e[m - 1] = d;
    // lexicographically smallest first; step to the next composition of d
    while (true) {
        out.emplace_back(e);
        // find rightmost position j < m-1 with something to its right
        std::size_t j = m - 1;
        while (j > 0 && e[j] == 0) --j;
        if (j == 0) break;
        unsigned rest = e[j] - 1;
        ++e[j - 1];
        e[j] = 0;
        e[m - 1] = rest;
    }
    return out;
}

// All n in N^m with |n| <= d, increasing deglex order.
// Size is binom(m + d, d).
inline std::vector<MultiIndex> enumerate_upto(std::size_t m, unsigned d)
{
    std::vector<MultiIndex> out;
    for (unsigned k = 0; k <= d; ++k) {
        auto level = enumerate_degree(m, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

inline mpz_class binomial(unsigned long n, unsigned long k)
{
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

// Number of multi-indexes of length m with total degree <= d.
inline unsigned long count_upto(std::size_t m, unsigned d)
{
    return binomial(m + d, d).get_ui();
}

} // namespace germcalc

#endif
