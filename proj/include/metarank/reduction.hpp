#ifndef METARANK_REDUCTION_HPP
#define METARANK_REDUCTION_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/error.hpp"
#include "metarank/gf2.hpp"

namespace metarank {

/// Death position of an interval whose class never dies inside the grid.
constexpr int implicit_death = std::numeric_limits<int>::max();

/// Boundary matrix of simplices listed in filtration order: column j holds
/// the positions of the facets of order[j].
inline std::vector<Column> boundary_matrix(const GradedComplex& c,
                                           std::span<const int> order)
{
    std::vector<int> position(c.size(), -1);
    for (std::size_t j = 0; j < order.size(); ++j)
        position[order[j]] = static_cast<int>(j);

    std::vector<Column> d(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        for (int f : c.facets(order[j])) {
            const int p = position[f];
            if (p < 0 || p >= static_cast<int>(j))
                throw InternalError("face " + to_string(c.simplex(f)) +
                                    " does not precede " +
                                    to_string(c.simplex(order[j])));
            d[j].rows.push_back(p);
        }
        std::sort(d[j].rows.begin(), d[j].rows.end());
    }
    return d;
}

/// D = R U over GF(2) for a filtration order, with R reduced and U upper
/// unitriangular. Row and column indices are filtration positions; order()
/// maps a position to the caller's simplex id.
class RUDecomposition
{
public:
    RUDecomposition() = default;

    int size() const { return n_; }

    const BitMatrix& D() const { return d_; }
    const BitMatrix& R() const { return r_; }
    const BitMatrix& U() const { return u_; }

    int simplex_at(int pos) const { return order_[pos]; }
    int position_of(int simplex) const { return position_[simplex]; }
    const std::vector<int>& order() const { return order_; }

    /// low(R_j), or -1 if column j of R is zero.
    int low(int col) const { return low_[col]; }

    /// Column whose low is `row`, or -1.
    int pivot_column(int row) const { return pivot_[row]; }

    bool is_negative(int pos) const { return low_[pos] >= 0; }

    /// Position paired with `pos` (death if pos is a birth and vice versa),
    /// or -1 when pos is an unpaired creator.
    int partner(int pos) const
    {
        return low_[pos] >= 0 ? low_[pos] : pivot_[pos];
    }

    /// Throws InternalError unless D = R U, R is reduced, U is upper
    /// unitriangular and the cached lows are current.
    void check() const
    {
        if (!u_.is_upper_unitriangular())
            throw InternalError("U is not upper unitriangular");
        if (!(r_.multiply(u_) == d_))
            throw InternalError("D != R U");
        std::vector<int> seen(n_, -1);
        for (int j = 0; j < n_; ++j) {
            const int l = r_.low(j);
            if (l != low_[j])
                throw InternalError("stale low at column " + std::to_string(j));
            if (l < 0)
                continue;
            if (seen[l] >= 0)
                throw InternalError("R not reduced: columns " +
                                    std::to_string(seen[l]) + " and " +
                                    std::to_string(j) + " share low " +
                                    std::to_string(l));
            seen[l] = j;
            if (pivot_[l] != j)
                throw InternalError("stale pivot for row " + std::to_string(l));
        }
    }

    /// Swaps filtration positions i and i+1, restoring D = R U with R
    /// reduced. The two simplices must not be face and coface.
    void transpose(int i);

private:
    friend RUDecomposition ru_decompose(const std::vector<Column>&, std::vector<int>);

    void refresh_low(int col)
    {
        const int old = low_[col];
        if (old >= 0 && pivot_[old] == col)
            pivot_[old] = -1;
        const int l = r_.low(col);
        low_[col] = l;
        if (l >= 0)
            pivot_[l] = col;
    }

    int n_ = 0;
    BitMatrix d_, r_, u_;
    std::vector<int> order_;
    std::vector<int> position_;
    std::vector<int> low_;
    std::vector<int> pivot_;
};

/// Standard left-to-right reduction. `order` names the simplex at each
/// column (identity if empty).
inline RUDecomposition ru_decompose(const std::vector<Column>& d,
                                    std::vector<int> order = {})
{
    const int n = static_cast<int>(d.size());
    RUDecomposition ru;
    ru.n_ = n;
    ru.d_ = BitMatrix(n);
    for (int j = 0; j < n; ++j)
        ru.d_.set_column(j, d[j]);
    ru.r_ = ru.d_;
    ru.u_ = BitMatrix::identity(n);
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }
    ru.order_ = std::move(order);
    ru.position_.assign(n, -1);
    for (int j = 0; j < n; ++j)
        ru.position_[ru.order_[j]] = j;
    ru.low_.assign(n, -1);
    ru.pivot_.assign(n, -1);

    for (int j = 0; j < n; ++j) {
        int l = ru.r_.low(j);
        while (l >= 0 && ru.pivot_[l] >= 0) {
            const int k = ru.pivot_[l];
            ru.r_.add_column(k, j);
            // R' = R E with E adding column k to column j, so U' = E U:
            // row k += row j, and row j is still e_j here.
            ru.u_.flip(k, j);
            l = ru.r_.low(j);
        }
        ru.low_[j] = l;
        if (l >= 0)
            ru.pivot_[l] = j;
    }
    return ru;
}

inline void RUDecomposition::transpose(int i)
{
    const int a = i, b = i + 1;
    if (a < 0 || b >= n_)
        throw InternalError("transposition out of range");
    if (d_.get(a, b))
        throw InternalError("cannot transpose a face with its coface");

    // Columns whose lows sit on the two swapped rows.
    const int ka = pivot_[a];
    const int kb = pivot_[b];

    if (u_.get(a, b)) {
        // Clear U[a][b]: R W, W U with W adding column a to column b.
        if (low_[a] >= 0)
            r_.add_column(a, b);
        u_.add_row(b, a);
    }

    r_.swap_columns(a, b);
    r_.swap_rows(a, b);
    u_.swap_columns(a, b);
    u_.swap_rows(a, b);
    d_.swap_columns(a, b);
    d_.swap_rows(a, b);
    std::swap(order_[a], order_[b]);
    position_[order_[a]] = a;
    position_[order_[b]] = b;

    // Recompute lows for every column that may have changed, after
    // clearing their old pivots.
    int cand[4] = {a, b, ka, kb};
    for (int c : cand)
        if (c >= 0 && low_[c] >= 0 && pivot_[low_[c]] == c)
            pivot_[low_[c]] = -1;
    for (int c : cand)
        if (c >= 0)
            low_[c] = r_.low(c);

    // At most one collision can arise; resolve by adding the earlier column
    // to the later one.
    for (int x = 0; x < 4; ++x) {
        for (int y = x + 1; y < 4; ++y) {
            int p = cand[x], q = cand[y];
            if (p < 0 || q < 0 || p == q || low_[p] < 0 || low_[p] != low_[q])
                continue;
            if (p > q)
                std::swap(p, q);
            r_.add_column(p, q);
            u_.add_row(q, p);
            low_[q] = r_.low(q);
        }
    }
    for (int c : cand)
        if (c >= 0 && low_[c] >= 0) {
            if (pivot_[low_[c]] >= 0 && pivot_[low_[c]] != c)
                throw InternalError("transposition left R unreduced");
            pivot_[low_[c]] = c;
        }
}

/// One persistence interval on a staircase path. `slot` is stable for the
/// life of a sweep.
struct Interval
{
    int slot = 0;
    int birth_simplex = -1;
    int death_simplex = -1; ///< -1 for an implicit (never-dying) class
    int birth = 0;          ///< path position, 1-based
    int death = implicit_death;
    int dim = 0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// The ordered list of intervals on one path.
struct PairingList
{
    std::vector<Interval> entries;

    std::size_t size() const { return entries.size(); }
};

/// Pairs read off R's lows, mapped through arrival positions (indexed by
/// simplex id). Ordered by birth position, ties by slot id; slots are
/// numbered in that order.
inline PairingList extract_pairs(const RUDecomposition& ru,
                                 std::span<const int> arrival,
                                 const GradedComplex& complex)
{
    PairingList out;
    for (int pos = 0; pos < ru.size(); ++pos) {
        if (ru.is_negative(pos))
            continue;
        Interval iv;
        iv.birth_simplex = ru.simplex_at(pos);
        const int killer = ru.pivot_column(pos);
        iv.death_simplex = killer >= 0 ? ru.simplex_at(killer) : -1;
        iv.birth = arrival[iv.birth_simplex];
        iv.death = killer >= 0 ? arrival[iv.death_simplex] : implicit_death;
        iv.dim = complex.dimension(iv.birth_simplex);
        out.entries.push_back(iv);
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const Interval& l, const Interval& r) {
                         return l.birth < r.birth;
                     });
    for (std::size_t s = 0; s < out.entries.size(); ++s)
        out.entries[s].slot = static_cast<int>(s);
    return out;
}

} // namespace metarank

#endif
