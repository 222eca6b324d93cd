#ifndef GERMCALC_COPRIMALITY_HPP
#define GERMCALC_COPRIMALITY_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "germcalc/errors.hpp"
#include "germcalc/polynomial.hpp"
#include "germcalc/series.hpp"

namespace germcalc {

// Index skeleton of the cofactor map at rank d: rows are the monomials q
// with 0 < |q| <= d+1, columns the monomials p with |p| <= d, both listed
// in decreasing deglex order, entry q - p when that lies in N^m.  The
// skeleton is block-triangular by homogeneous degree and nests inside the
// skeleton at rank d+1 as the bottom-right sub-matrix.
struct IndexSkeleton {
    std::size_t m = 0;
    unsigned d = 0;
    std::vector<MultiIndex> rows; // q, decreasing deglex
    std::vector<MultiIndex> cols; // p, decreasing deglex

    std::optional<MultiIndex> entry(std::size_t i, std::size_t j) const
    {
        return rows[i].minus(cols[j]);
    }
};

inline IndexSkeleton build_index_matrix(std::size_t m, unsigned d)
{
    if (m < 1) throw domain_error("build_index_matrix needs m >= 1");
    IndexSkeleton sk;
    sk.m = m;
    sk.d = d;
    auto qs = enumerate_upto(m, d + 1); // increasing deglex, starts at 0
    for (auto it = qs.rbegin(); it != qs.rend(); ++it)
        if (it->degree() > 0) sk.rows.push_back(*it);
    auto ps = enumerate_upto(m, d);
    sk.cols.assign(ps.rbegin(), ps.rend());
    return sk;
}

// Matrix of the map (h_1, ..., h_k) -> (J_{d+1}(f_p h_p - f_q h_q))_{p<q}
// with exact entries.  For k = 2 each skeleton column expands into the
// +f_1 / -f_2 pair; for k > 2 one block row group per pair (p, q).
template <class S>
struct MacaulaySystem {
    IndexSkeleton skeleton;
    std::size_t k = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<S>> a; // rows x cols, dense

    const S& at(std::size_t i, std::size_t j) const { return a[i][j]; }
};

template <class S>
MacaulaySystem<S> build_system(const std::vector<Series<S>>& f, unsigned d)
{
    if (f.size() < 2) throw domain_error("build_system needs at least two series");
    std::size_t m = f[0].vars();
    for (const auto& fl : f) {
        if (fl.vars() != m) throw domain_error("build_system: mixed arities");
        if (!scalar_traits<S>::is_zero(fl.constant_term()))
            throw domain_error("build_system: inputs must have zero constant term");
        if (fl.trunc() < d + 1)
            throw truncation_error("build_system: truncation " + std::to_string(fl.trunc())
                                   + " < d+1 = " + std::to_string(d + 1));
    }

    MacaulaySystem<S> sys;
    sys.skeleton = build_index_matrix(m, d);
    sys.k = f.size();
    std::size_t R = sys.skeleton.rows.size();
    std::size_t C = sys.skeleton.cols.size();
    std::size_t pairs = sys.k * (sys.k - 1) / 2;
    sys.rows = pairs * R;
    sys.cols = sys.k * C;
    sys.a.assign(sys.rows, std::vector<S>(sys.cols, scalar_traits<S>::zero()));

    std::size_t block = 0;
    for (std::size_t p = 0; p < sys.k; ++p) {
        for (std::size_t q = p + 1; q < sys.k; ++q, ++block) {
            for (std::size_t i = 0; i < R; ++i) {
                for (std::size_t j = 0; j < C; ++j) {
                    auto n = sys.skeleton.entry(i, j);
                    if (!n) continue;
                    // column group j carries one column per member l,
                    // the (p,q) difference hits l = p with +, l = q with -
                    const S& cp = f[p].coeff(*n);
                    if (!scalar_traits<S>::is_zero(cp))
                        sys.a[block * R + i][j * sys.k + p] = cp;
                    const S& cq = f[q].coeff(*n);
                    if (!scalar_traits<S>::is_zero(cq))
                        sys.a[block * R + i][j * sys.k + q] = -cq;
                }
            }
        }
    }
    return sys;
}

namespace detail {

// Scales a row of Gaussian rationals to Gaussian integers (denominators
// cleared); rank is unchanged and the fraction-free elimination then works
// on integer-valued entries.
inline void clear_denominators(std::vector<GaussianRational>& row)
{
    mpz_class l = 1;
    for (const auto& s : row) {
        mpz_class d1 = s.re.get_den(), d2 = s.im.get_den();
        mpz_class g;
        mpz_lcm(g.get_mpz_t(), l.get_mpz_t(), d1.get_mpz_t());
        mpz_lcm(l.get_mpz_t(), g.get_mpz_t(), d2.get_mpz_t());
    }
    if (l == 1) return;
    GaussianRational scale{Rational(l), Rational(0)};
    for (auto& s : row) s *= scale;
}

inline void clear_denominators(std::vector<Complex>&) {}

} // namespace detail

// Exact rank by fraction-free (Bareiss) elimination with deterministic
// pivoting: first row with a nonzero entry in the current column.
template <class S>
std::size_t exact_rank(std::vector<std::vector<S>> a)
{
    static_assert(scalar_traits<S>::exact, "exact_rank requires exact scalars");
    if (a.empty()) return 0;
    std::size_t rows = a.size(), cols = a[0].size();
    for (auto& row : a) detail::clear_denominators(row);

    std::size_t rank = 0;
    S prev = scalar_traits<S>::one();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && scalar_traits<S>::is_zero(a[piv][col])) ++piv;
        if (piv == rows) continue;
        std::swap(a[rank], a[piv]);
        const S pivot = a[rank][col];
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (pivot * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = scalar_traits<S>::zero();
        }
        prev = pivot;
        ++rank;
    }
    return rank;
}

template <class S>
std::size_t exact_rank(const MacaulaySystem<S>& sys)
{
    return exact_rank(sys.a);
}

// rank bound (k-1) * binom(m+d, d) characterizing compositeness at rank d.
inline unsigned long composite_rank_bound(std::size_t m, unsigned d, std::size_t k)
{
    return (k - 1) * count_upto(m, d);
}

template <class S>
bool composite_at_rank(const std::vector<Series<S>>& f, unsigned d)
{
    auto sys = build_system(f, d);
    return exact_rank(sys) <= composite_rank_bound(f[0].vars(), d, f.size());
}

struct RankRecord {
    unsigned d = 0;
    unsigned long rank = 0;
    unsigned long bound = 0;
};

// Vocabulary matters here: truncated inputs can certify coprimality (a
// single rank overshoot is conclusive) but never compositeness, which
// would require information past every truncation order.
struct CoprimalityVerdict {
    enum class Status { coprime_certified, composite_consistent, inputs_degenerate };
    Status status = Status::inputs_degenerate;
    unsigned witness_d = 0; // certificate rank, or the last rank scanned
    std::vector<RankRecord> ranks;
};

template <class S>
CoprimalityVerdict decide_coprime(const std::vector<Series<S>>& f, unsigned d_max)
{
    CoprimalityVerdict v;
    for (const auto& fl : f) {
        if (!scalar_traits<S>::is_zero(fl.constant_term())) {
            v.status = CoprimalityVerdict::Status::inputs_degenerate;
            return v;
        }
        if (fl.trunc() < d_max + 1)
            throw truncation_error("decide_coprime: need truncation >= d_max + 1");
    }
    for (unsigned d = 0; d <= d_max; ++d) {
        auto sys = build_system(f, d);
        RankRecord rec{d, exact_rank(sys), composite_rank_bound(f[0].vars(), d, f.size())};
        v.ranks.push_back(rec);
        if (rec.rank > rec.bound) {
            v.status = CoprimalityVerdict::Status::coprime_certified;
            v.witness_d = d;
            return v;
        }
    }
    v.status = CoprimalityVerdict::Status::composite_consistent;
    v.witness_d = d_max;
    return v;
}

// Valuation bounds on the cofactors h_l of a composite family:
// eps_l(f) = sum_{j != l} nu(f_j) - nu(prod f_j / (gcd^{k-1} lcm)).
// Polynomial inputs only; gcd and lcm are computed exactly.
inline std::vector<long> epsilon_bounds(const std::vector<Poly>& f)
{
    if (f.size() < 2) throw domain_error("epsilon_bounds needs at least two members");
    for (const auto& fl : f)
        if (fl.is_zero()) throw domain_error("epsilon_bounds: zero member is degenerate");

    Poly g = poly_gcd(f);
    Poly l = poly_lcm(f);
    Poly prod = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) prod = pmul(prod, f[i]);
    Poly denom = l;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) denom = pmul(denom, g);
    auto w = divexact(prod, denom);
    if (!w) throw domain_error("epsilon_bounds: internal divisibility failure");
    long nu_w = static_cast<long>(w->valuation().value());

    std::vector<long> eps(f.size());
    long total = 0;
    std::vector<long> nu(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        nu[i] = static_cast<long>(f[i].valuation().value());
        total += nu[i];
    }
    for (std::size_t i = 0; i < f.size(); ++i) eps[i] = total - nu[i] - nu_w;
    return eps;
}

struct MilnorEstimate {
    unsigned long dim = 0;   // dim Pol_{<=N} / J_N(sum f_l Pol_{<=N})
    bool stabilized = false; // equal value at N-1 and N
};

// Truncated Milnor-number estimate: cokernel dimension of the multiplication
// map into degree <= N.  Finite stable values witness coprime families.
template <class S>
MilnorEstimate milnor_dim_estimate(const std::vector<Series<S>>& f, unsigned N)
{
    static_assert(scalar_traits<S>::exact, "milnor_dim_estimate requires exact scalars");
    if (f.empty()) throw domain_error("milnor_dim_estimate: empty family");
    std::size_t m = f[0].vars();
    for (const auto& fl : f) {
        if (!scalar_traits<S>::is_zero(fl.constant_term()))
            throw domain_error("milnor_dim_estimate: members must lie in the maximal ideal");
        if (fl.trunc() < N) throw truncation_error("milnor_dim_estimate: truncation < N");
    }

    auto image_dim = [&](unsigned n) -> unsigned long {
        auto basis = enumerate_upto(m, n);
        std::vector<std::vector<S>> mat;
        for (const auto& fl : f) {
            for (const auto& p : basis) {
                Series<S> prod = fl.jet(n).mul_monomial(p, scalar_traits<S>::one()).jet(n);
                std::vector<S> col(basis.size(), scalar_traits<S>::zero());
                for (std::size_t i = 0; i < basis.size(); ++i) col[i] = prod.coeff(basis[i]);
                mat.push_back(std::move(col)); // rows of the transpose; rank is the same
            }
        }
        return exact_rank(mat);
    };

    MilnorEstimate est;
    unsigned long total = count_upto(m, N);
    est.dim = total - image_dim(N);
    if (N >= 1) {
        unsigned long prev = count_upto(m, N - 1) - image_dim(N - 1);
        est.stabilized = prev == est.dim;
    }
    return est;
}

} // namespace germcalc

#endif
