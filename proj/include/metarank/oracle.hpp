#ifndef METARANK_ORACLE_HPP
#define METARANK_ORACLE_HPP

// Brute-force ground truth. Nothing here touches the vineyard engine or the
// RU decomposition: rank values come from a separate reduction of explicit
// two-step filtrations.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/error.hpp"
#include "metarank/metarank.hpp"
#include "metarank/reduction.hpp"

namespace metarank::oracle {

constexpr int default_size_cap = 40;

/// rank((a,b) -> (c,d)) for every comparable pair of grid points and every
/// requested homology dimension. Entries for incomparable pairs read -1.
class RankFunction
{
public:
    RankFunction() = default;
    RankFunction(int n, std::vector<int> dims)
        : n_(n), dims_(std::move(dims)),
          values_(dims_.size(), std::vector<int>(static_cast<std::size_t>(n) * n * n * n, -1))
    {
    }

    int n() const { return n_; }
    const std::vector<int>& dims() const { return dims_; }

    /// Out-of-grid points (any coordinate 0 or n+1) have rank 0.
    int operator()(int dim, int a, int b, int c, int d) const
    {
        if (a < 1 || b < 1 || c > n_ || d > n_)
            return 0;
        return values_[slot(dim)][index(a, b, c, d)];
    }

    void set(int dim, int a, int b, int c, int d, int v)
    {
        values_[slot(dim)][index(a, b, c, d)] = v;
    }

private:
    std::size_t index(int a, int b, int c, int d) const
    {
        return ((static_cast<std::size_t>(a - 1) * n_ + (b - 1)) * n_ + (c - 1)) * n_ + (d - 1);
    }

    std::size_t slot(int dim) const
    {
        auto it = std::find(dims_.begin(), dims_.end(), dim);
        if (it == dims_.end())
            throw Error("dimension " + std::to_string(dim) + " not in rank function");
        return static_cast<std::size_t>(it - dims_.begin());
    }

    int n_ = 0;
    std::vector<int> dims_;
    std::vector<std::vector<int>> values_;
};

namespace detail {

/// Reduces the boundary matrix of `order` and returns, for each position,
/// the position of the simplex that kills it (or -1 if it never dies or is
/// itself a killer). Plain bitset columns, left-to-right.
inline std::vector<int> death_positions(const GradedComplex& c, const std::vector<int>& order)
{
    const int m = static_cast<int>(order.size());
    const int words = (m + 63) / 64;
    std::vector<int> where(c.size(), -1);
    for (int p = 0; p < m; ++p)
        where[order[p]] = p;

    std::vector<std::vector<std::uint64_t>> col(m, std::vector<std::uint64_t>(words, 0));
    for (int p = 0; p < m; ++p)
        for (int f : c.facets(order[p]))
            col[p][where[f] >> 6] ^= std::uint64_t{1} << (where[f] & 63);

    auto top = [&](const std::vector<std::uint64_t>& v) {
        for (int w = words - 1; w >= 0; --w)
            if (v[w])
                return w * 64 + 63 - __builtin_clzll(v[w]);
        return -1;
    };

    std::vector<int> owner(m, -1);
    std::vector<int> killer(m, -1);
    for (int p = 0; p < m; ++p) {
        int l = top(col[p]);
        while (l >= 0 && owner[l] >= 0) {
            const auto& src = col[owner[l]];
            for (int w = 0; w < words; ++w)
                col[p][w] ^= src[w];
            l = top(col[p]);
        }
        if (l >= 0) {
            owner[l] = p;
            killer[l] = p;
        }
    }
    return killer;
}

} // namespace detail

/// Rank invariant by direct reduction of F(a,b) followed by F(c,d).
inline RankFunction rank_invariant(const GradedComplex& c, std::vector<int> dims = {})
{
    const int n = c.size();
    if (dims.empty())
        for (int k = 0; k <= c.max_dimension(); ++k)
            dims.push_back(k);
    RankFunction rk(n, dims);

    std::vector<int> by_dim(n);
    std::iota(by_dim.begin(), by_dim.end(), 0);
    std::stable_sort(by_dim.begin(), by_dim.end(),
                     [&](int l, int r) { return c.dimension(l) < c.dimension(r); });

    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            std::vector<int> source;
            for (int s : by_dim)
                if (c.contains(s, a, b))
                    source.push_back(s);

            for (int cc = a; cc <= n; ++cc) {
                std::vector<int> rest;
                for (int g = 1; g <= n; ++g) {
                    const int s = c.simplex_at_y(g);
                    if (c.xgrade(s) <= cc && !c.contains(s, a, b))
                        rest.push_back(s);
                }
                std::vector<int> order = source;
                order.insert(order.end(), rest.begin(), rest.end());
                const auto killer = detail::death_positions(c, order);

                std::vector<char> kills(order.size(), 0);
                for (std::size_t p = 0; p < order.size(); ++p)
                    if (killer[p] >= 0)
                        kills[killer[p]] = 1;

                for (int dim : dims) {
                    // Death positions of the creators in the source step.
                    std::vector<int> deaths;
                    for (std::size_t p = 0; p < source.size(); ++p)
                        if (c.dimension(source[p]) == dim && !kills[p])
                            deaths.push_back(killer[p] >= 0 ? killer[p] : static_cast<int>(order.size()));
                    std::sort(deaths.begin(), deaths.end());

                    std::size_t prefix = source.size();
                    std::size_t next = 0;
                    for (int d = b; d <= n; ++d) {
                        while (next < rest.size() && c.ygrade(rest[next]) <= d) {
                            ++next;
                            ++prefix;
                        }
                        const auto alive = deaths.end() -
                            std::lower_bound(deaths.begin(), deaths.end(), static_cast<int>(prefix));
                        rk.set(dim, a, b, cc, d, static_cast<int>(alive));
                    }
                }
            }
        }
    }
    return rk;
}

/// First pair where enlarging the span raises the rank, as "dim (a,b)->(c,d)";
/// empty when the rank function is monotone. Neighbour steps suffice.
inline std::string rank_monotonicity_violation(const RankFunction& rk)
{
    const int n = rk.n();
    for (int dim : rk.dims())
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int c = a; c <= n; ++c)
                    for (int d = b; d <= n; ++d) {
                        const int r = rk(dim, a, b, c, d);
                        const bool bad = r < 0 || (a > 1 && rk(dim, a - 1, b, c, d) > r) ||
                                         (b > 1 && rk(dim, a, b - 1, c, d) > r) ||
                                         (c < n && rk(dim, a, b, c + 1, d) > r) ||
                                         (d < n && rk(dim, a, b, c, d + 1) > r);
                        if (bad)
                            return "dim " + std::to_string(dim) + " (" + std::to_string(a) + "," +
                                   std::to_string(b) + ")->(" + std::to_string(c) + "," + std::to_string(d) + ")";
                    }
    return {};
}

/// Persistence intervals of the filtration along the staircase path through
/// `column`, by a fresh reduction: sorted (dim, birth, death) with path
/// positions, implicit_death for classes that never die.
inline std::vector<std::array<int, 3>> path_intervals(const GradedComplex& c, int column)
{
    std::vector<int> order;
    std::vector<int> position;
    for (const auto& a : filtration_along_path(c, column)) {
        order.push_back(a.simplex);
        position.push_back(a.position);
    }
    const auto killer = detail::death_positions(c, order);
    std::vector<char> kills(order.size(), 0);
    for (int k : killer)
        if (k >= 0)
            kills[k] = 1;
    std::vector<std::array<int, 3>> out;
    for (std::size_t p = 0; p < order.size(); ++p)
        if (!kills[p])
            out.push_back({c.dimension(order[p]), position[p],
                           killer[p] >= 0 ? position[killer[p]] : implicit_death});
    std::sort(out.begin(), out.end());
    return out;
}

/// Meta-rank reconstructed from the rank invariant by inclusion-exclusion on
/// the image module of each slice map. Cells hold bar multisets (no slot
/// alignment).
inline MetaRankTable mrk_from_rank(const RankFunction& rk)
{
    const int n = rk.n();
    MetaRankTable table(n, rk.dims());
    for (int dim : rk.dims()) {
        for (int t = 1; t <= n; ++t) {
            for (int s = 1; s <= t; ++s) {
                auto r = [&](int y, int y2) { return rk(dim, s, y, t, y2); };
                auto& cell = table.at(dim, s, t).bars;
                for (int lo = 1; lo <= n; ++lo) {
                    for (int hi = lo; hi <= n; ++hi) {
                        const int m = r(lo, hi) - r(lo, hi + 1) - r(lo - 1, hi) + r(lo - 1, hi + 1);
                        if (m < 0)
                            throw InternalError("inconsistent rank function: negative multiplicity at [" +
                                                std::to_string(s) + "," + std::to_string(t) + "]");
                        for (int k = 0; k < m; ++k)
                            cell.push_back(Bar{lo, hi});
                    }
                }
            }
        }
    }
    return table;
}

/// rank((s,y) -> (t,y')) read off the meta-rank: the number of bars of
/// cell [s,t] containing [y, y'].
inline int rank_from_mrk(const MetaRankTable& table, int dim, int s, int y, int t, int y2)
{
    if (s < 1 || y < 1 || t > table.n() || y2 > table.n() || s > t || y > y2)
        return 0;
    int count = 0;
    for (const auto& b : table.at(dim, s, t).bars)
        if (!b.empty() && b.lo <= y && y2 <= b.hi)
            ++count;
    return count;
}

/// The same count in real coordinates: bars of mrk([s, S>(t))) containing
/// [y, y'], i.e. the image of column S<=(s) in column S<=(t).
inline int rank_from_mrk_real(const MetaRankTable& table, const GradeMap& map, int dim,
                              double s, double y, double t, double y2)
{
    const int k = grade_lookup(map, Axis::x, Lookup::less_equal, s);
    const int i = grade_lookup(map, Axis::x, Lookup::less_equal, t);
    const int lo = grade_lookup(map, Axis::y, Lookup::less_equal, y);
    const int hi = grade_lookup(map, Axis::y, Lookup::less_equal, y2);
    if (k == below_grid || lo == below_grid)
        return 0;
    return rank_from_mrk(table, dim, k, lo, i, hi);
}

// ---------------------------------------------------------------------------
// Synthetic rectangle-sum modules

/// Closed grid rectangle [s, s2] x [t, t2].
struct Rectangle
{
    int s = 1, s2 = 1, t = 1, t2 = 1;

    bool contains(int x, int y) const { return s <= x && x <= s2 && t <= y && y <= t2; }

    friend bool operator==(const Rectangle&, const Rectangle&) = default;
    friend auto operator<=>(const Rectangle&, const Rectangle&) = default;
};

struct RectangleSumModule
{
    int n = 0;
    std::vector<Rectangle> rectangles;
};

/// Closed-form meta-rank of a rectangle sum at [a, b].
inline std::vector<Bar> synth_rectangle_mrk(const RectangleSumModule& m, int a, int b)
{
    std::vector<Bar> out;
    for (const auto& r : m.rectangles)
        if (r.s <= a && a <= b && b <= r.s2)
            out.push_back(Bar{r.t, r.t2});
    std::sort(out.begin(), out.end());
    return out;
}

/// Full table of a rectangle sum, as homology dimension 0.
inline MetaRankTable synth_rectangle_table(const RectangleSumModule& m)
{
    MetaRankTable table(m.n, {0});
    for (int b = 1; b <= m.n; ++b)
        for (int a = 1; a <= b; ++a)
            table.at(0, a, b).bars = synth_rectangle_mrk(m, a, b);
    return table;
}

// ---------------------------------------------------------------------------
// Disjoint unions

/// Where a factor's grid indices land in the union grid, per axis (1-based;
/// entry 0 unused).
struct GridEmbedding
{
    std::vector<int> x;
    std::vector<int> y;
    int simplex_offset = 0;
};

struct DisjointUnion
{
    Bifiltration bifiltration;
    GridEmbedding left;
    GridEmbedding right;
};

/// A ⊔ B with B's vertex ids shifted past A's. Each axis is a stable merge
/// by real grade, A first on ties, so each factor keeps its internal order.
inline DisjointUnion disjoint_union(const Bifiltration& A, const Bifiltration& B)
{
    const int na = A.size(), nb = B.size(), n = na + nb;
    Vertex offset = 0;
    for (const auto& s : A.complex.simplices())
        offset = std::max<Vertex>(offset, s.vertices.back() + 1);

    std::vector<Simplex> simplices = A.complex.simplices();
    for (auto s : B.complex.simplices()) {
        for (auto& v : s.vertices)
            v += offset;
        simplices.push_back(std::move(s));
    }

    DisjointUnion out;
    out.left.simplex_offset = 0;
    out.right.simplex_offset = na;
    std::vector<int> xg(n), yg(n);
    GradeMap map;

    auto merge = [&](const std::vector<double>& va, const std::vector<double>& vb,
                     std::vector<int>& emb_a, std::vector<int>& emb_b, std::vector<double>& values) {
        emb_a.assign(na + 1, 0);
        emb_b.assign(nb + 1, 0);
        values.clear();
        int i = 0, j = 0;
        while (i < na || j < nb) {
            const bool take_a = j >= nb || (i < na && va[i] <= vb[j]);
            if (take_a) {
                emb_a[++i] = static_cast<int>(values.size()) + 1;
                values.push_back(va[i - 1]);
            } else {
                emb_b[++j] = static_cast<int>(values.size()) + 1;
                values.push_back(vb[j - 1]);
            }
        }
    };
    merge(A.grades.xvalues, B.grades.xvalues, out.left.x, out.right.x, map.xvalues);
    merge(A.grades.yvalues, B.grades.yvalues, out.left.y, out.right.y, map.yvalues);

    for (int s = 0; s < na; ++s) {
        xg[s] = out.left.x[A.complex.xgrade(s)];
        yg[s] = out.left.y[A.complex.ygrade(s)];
    }
    for (int s = 0; s < nb; ++s) {
        xg[na + s] = out.right.x[B.complex.xgrade(s)];
        yg[na + s] = out.right.y[B.complex.ygrade(s)];
    }
    out.bifiltration = Bifiltration{GradedComplex(std::move(simplices), std::move(xg), std::move(yg)),
                                    std::move(map)};
    return out;
}

/// Number of factor indices placed at or before union index u.
inline int factor_index(const std::vector<int>& embedding, int u)
{
    return static_cast<int>(std::upper_bound(embedding.begin() + 1, embedding.end(), u) -
                            (embedding.begin() + 1));
}

/// A factor bar [lo, hi] expressed on the union's vertical axis.
inline Bar embed_bar(const GridEmbedding& e, int union_n, const Bar& b)
{
    const int factor_n = static_cast<int>(e.y.size()) - 1;
    const int hi = b.hi == factor_n ? union_n : e.y[b.hi + 1] - 1;
    return Bar{e.y[b.lo], hi};
}

/// The factor's meta-rank read in union coordinates: cell [k, i] of the
/// union maps to the factor cell [#factor x-indices <= k, #... <= i].
inline std::vector<Bar> embedded_cell(const MetaRankTable& factor, const GridEmbedding& e,
                                      int union_n, int dim, int k, int i)
{
    const int fk = factor_index(e.x, k);
    const int fi = factor_index(e.x, i);
    if (fk < 1 || !factor.has_dim(dim))
        return {};
    std::vector<Bar> out;
    for (const auto& b : factor.bars(dim, fk, fi))
        out.push_back(embed_bar(e, union_n, b));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace metarank::oracle

#endif
