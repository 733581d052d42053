#ifndef METARANK_SIGNED_HPP
#define METARANK_SIGNED_HPP

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metarank/error.hpp"
#include "metarank/metarank.hpp"

namespace metarank {

/// An element of the Grothendieck group of barcodes, stored in canonical
/// form: bar -> non-zero multiplicity.
class SignedBarcode
{
public:
    SignedBarcode() = default;

    void add(const Bar& b, int m)
    {
        if (b.empty() || m == 0)
            return;
        auto [it, fresh] = mult_.try_emplace(b, m);
        if (!fresh) {
            it->second += m;
            if (it->second == 0)
                mult_.erase(it);
        }
    }

    void add(const SignedBarcode& other, int sign = 1)
    {
        for (const auto& [b, m] : other.mult_)
            add(b, sign * m);
    }

    void add_all(const std::vector<Bar>& bars, int sign)
    {
        for (const auto& b : bars)
            add(b, sign);
    }

    bool empty() const { return mult_.empty(); }
    const std::map<Bar, int>& terms() const { return mult_; }

    int multiplicity(const Bar& b) const
    {
        auto it = mult_.find(b);
        return it == mult_.end() ? 0 : it->second;
    }

    /// Bars with positive multiplicity, repeated, sorted.
    std::vector<Bar> positive() const { return part(+1); }

    /// Bars with negative multiplicity, repeated, sorted.
    std::vector<Bar> negative() const { return part(-1); }

    long long positive_count() const { return count(+1); }
    long long negative_count() const { return count(-1); }

    friend bool operator==(const SignedBarcode&, const SignedBarcode&) = default;

private:
    std::vector<Bar> part(int sign) const
    {
        std::vector<Bar> out;
        for (const auto& [b, m] : mult_)
            if (m * sign > 0)
                out.insert(out.end(), static_cast<std::size_t>(std::abs(m)), b);
        return out;
    }

    long long count(int sign) const
    {
        long long c = 0;
        for (const auto& [b, m] : mult_)
            if (m * sign > 0)
                c += std::abs(m);
        return c;
    }

    std::map<Bar, int> mult_;
};

/// pos - neg with common bars cancelled.
inline SignedBarcode canonicalize(const std::vector<Bar>& pos, const std::vector<Bar>& neg)
{
    SignedBarcode out;
    out.add_all(pos, +1);
    out.add_all(neg, -1);
    return out;
}

/// "[0,4] + [2,4] - [3,4]" style, positive terms first.
inline std::string to_string(const SignedBarcode& sb)
{
    std::string out;
    auto term = [&](const Bar& b, bool negative) {
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        out += "[" + std::to_string(b.lo) + "," + std::to_string(b.hi) + "]";
    };
    for (const auto& b : sb.positive())
        term(b, false);
    for (const auto& b : sb.negative())
        term(b, true);
    return out.empty() ? "0" : out;
}

/// Möbius inversion of one cell: +[s,t] - [s,t+1] + [s-1,t+1] - [s-1,t],
/// each argument a sorted bar multiset (empty when out of range).
inline SignedBarcode mobius_cell(const std::vector<Bar>& here, const std::vector<Bar>& right,
                                 const std::vector<Bar>& diag, const std::vector<Bar>& left)
{
    SignedBarcode out;
    out.add_all(here, +1);
    out.add_all(right, -1);
    out.add_all(diag, +1);
    out.add_all(left, -1);
    return out;
}

/// Signed bar counts of one Möbius cell without building the barcode: a
/// four-way merge of sorted multisets.
inline std::pair<long long, long long> mobius_cell_count(const std::vector<Bar>& here,
                                                         const std::vector<Bar>& right,
                                                         const std::vector<Bar>& diag,
                                                         const std::vector<Bar>& left)
{
    const std::vector<Bar>* lists[4] = {&here, &right, &diag, &left};
    const int sign[4] = {+1, -1, +1, -1};
    std::size_t at[4] = {0, 0, 0, 0};
    long long pos = 0, neg = 0;
    for (;;) {
        const Bar* least = nullptr;
        for (int k = 0; k < 4; ++k)
            if (at[k] < lists[k]->size() && (!least || (*lists[k])[at[k]] < *least))
                least = &(*lists[k])[at[k]];
        if (!least)
            break;
        const Bar b = *least;
        long long m = 0;
        for (int k = 0; k < 4; ++k)
            while (at[k] < lists[k]->size() && (*lists[k])[at[k]] == b) {
                m += sign[k];
                ++at[k];
            }
        if (m > 0)
            pos += m;
        else
            neg -= m;
    }
    return {pos, neg};
}

/// Per homology dimension, the non-zero cells of the meta-diagram on
/// Int([n]).
class MetaDiagram
{
public:
    MetaDiagram() = default;
    MetaDiagram(int n, std::vector<int> dims) : n_(n), dims_(std::move(dims)), cells_(dims_.size()) {}

    int n() const { return n_; }
    const std::vector<int>& dims() const { return dims_; }

    bool has_dim(int dim) const
    {
        return std::find(dims_.begin(), dims_.end(), dim) != dims_.end();
    }

    const SignedBarcode& at(int dim, int s, int t) const
    {
        static const SignedBarcode zero;
        const auto& m = cells_[index(dim)];
        auto it = m.find({s, t});
        return it == m.end() ? zero : it->second;
    }

    void set(int dim, int s, int t, SignedBarcode value)
    {
        auto& m = cells_[index(dim)];
        if (value.empty())
            m.erase({s, t});
        else
            m[{s, t}] = std::move(value);
    }

    /// Non-zero cells of one dimension, ordered by (s, t).
    const std::map<std::pair<int, int>, SignedBarcode>& cells(int dim) const { return cells_[index(dim)]; }

    friend bool operator==(const MetaDiagram&, const MetaDiagram&) = default;

private:
    std::size_t index(int dim) const
    {
        auto it = std::find(dims_.begin(), dims_.end(), dim);
        if (it == dims_.end())
            throw Error("dimension " + std::to_string(dim) + " not in meta-diagram");
        return static_cast<std::size_t>(it - dims_.begin());
    }

    int n_ = 0;
    std::vector<int> dims_;
    std::vector<std::map<std::pair<int, int>, SignedBarcode>> cells_;
};

/// The meta-diagram of a full meta-rank table. Out-of-range neighbours
/// count as zero, which yields the boundary and corner forms.
inline MetaDiagram mobius_invert(const MetaRankTable& table)
{
    const int n = table.n();
    MetaDiagram out(n, table.dims());
    for (int dim : table.dims()) {
        // Rows t and t+1 of sorted multisets, reused across cells.
        std::vector<std::vector<Bar>> next_row;
        for (int t = n; t >= 1; --t) {
            std::vector<std::vector<Bar>> row(t + 1);
            for (int s = 1; s <= t; ++s)
                row[s] = table.bars(dim, s, t);
            static const std::vector<Bar> none;
            for (int s = 1; s <= t; ++s) {
                const auto& right = t < n ? next_row[s] : none;
                const auto& diag = (t < n && s > 1) ? next_row[s - 1] : none;
                const auto& left = s > 1 ? row[s - 1] : none;
                out.set(dim, s, t, mobius_cell(row[s], right, diag, left));
            }
            next_row = std::move(row);
        }
    }
    return out;
}

/// Sum of mdgm over all grid intervals [a, b] containing [s, t]. Throws
/// InternalError if a bar ends with negative multiplicity.
inline std::vector<Bar> mrk_from_mdgm(const MetaDiagram& mdgm, int dim, int s, int t)
{
    if (s < 1 || t > mdgm.n() || s > t)
        throw Error("cell [" + std::to_string(s) + "," + std::to_string(t) + "] outside the grid");
    SignedBarcode sum;
    for (const auto& [cell, sb] : mdgm.cells(dim))
        if (cell.first <= s && t <= cell.second)
            sum.add(sb);
    if (!sum.negative().empty())
        throw InternalError("negative multiplicity reconstructing cell [" + std::to_string(s) + "," +
                            std::to_string(t) + "]");
    return sum.positive();
}

/// All cells at once by the recurrence
/// mrk[s,t] = mdgm[s,t] + mrk[s-1,t] + mrk[s,t+1] - mrk[s-1,t+1].
inline MetaRankTable mrk_table_from_mdgm(const MetaDiagram& mdgm)
{
    const int n = mdgm.n();
    MetaRankTable table(n, mdgm.dims());
    for (int dim : mdgm.dims()) {
        std::vector<SignedBarcode> below; // row t+1, indexed by s
        for (int t = n; t >= 1; --t) {
            std::vector<SignedBarcode> row(t + 1);
            for (int s = 1; s <= t; ++s) {
                SignedBarcode v = mdgm.at(dim, s, t);
                if (s > 1)
                    v.add(row[s - 1]);
                if (t < n) {
                    v.add(below[s]);
                    if (s > 1)
                        v.add(below[s - 1], -1);
                }
                if (!v.negative().empty())
                    throw InternalError("negative multiplicity reconstructing cell [" + std::to_string(s) +
                                        "," + std::to_string(t) + "]");
                auto& cell = table.at(dim, s, t);
                cell.bars = v.positive();
                cell.sources.assign(cell.bars.size(), -1);
                row[s] = std::move(v);
            }
            below = std::move(row);
        }
    }
    return table;
}

/// Closed grid rectangle [s, t] x [lo, hi]: x from s to t, y from lo to hi.
struct GridRect
{
    int s = 1, t = 1, lo = 1, hi = 1;

    bool contains(int x, int y) const { return s <= x && x <= t && lo <= y && y <= hi; }

    friend bool operator==(const GridRect&, const GridRect&) = default;
    friend auto operator<=>(const GridRect&, const GridRect&) = default;
};

/// Positive and negative rectangle multisets, one homology dimension.
struct RankDecomposition
{
    int dim = 0;
    std::vector<GridRect> R;
    std::vector<GridRect> S;

    /// rank((a,b) -> (c,d)) = #R containing both points - #S containing both.
    int rank(int a, int b, int c, int d) const
    {
        int r = 0;
        for (const auto& q : R)
            r += q.contains(a, b) && q.contains(c, d);
        for (const auto& q : S)
            r -= q.contains(a, b) && q.contains(c, d);
        return r;
    }
};

inline RankDecomposition rank_decomposition(const MetaDiagram& mdgm, int dim)
{
    RankDecomposition out;
    out.dim = dim;
    for (const auto& [cell, sb] : mdgm.cells(dim))
        for (const auto& [b, m] : sb.terms()) {
            auto& dst = m > 0 ? out.R : out.S;
            dst.insert(dst.end(), static_cast<std::size_t>(std::abs(m)),
                       GridRect{cell.first, cell.second, b.lo, b.hi});
        }
    return out;
}

struct SignedCount
{
    long long positive = 0;
    long long negative = 0;

    long long total() const { return positive + negative; }
};

inline SignedCount signed_bar_count(const MetaDiagram& mdgm)
{
    SignedCount c;
    for (int dim : mdgm.dims())
        for (const auto& [cell, sb] : mdgm.cells(dim)) {
            c.positive += sb.positive_count();
            c.negative += sb.negative_count();
        }
    return c;
}

/// Möbius inversion fed one meta-rank row at a time; keeps two rows and
/// only counts signed bars. Used where the full table would not fit.
class StreamingMobius
{
public:
    explicit StreamingMobius(int n) : n_(n) {}

    /// Row t = 1, 2, ...: element s-1 holds the entries of [s, t].
    void feed(const std::vector<std::vector<RowEntry>>& row)
    {
        std::map<int, std::vector<std::vector<Bar>>> sorted;
        const int t = static_cast<int>(row.size());
        for (int s = 1; s <= t; ++s)
            for (const auto& e : row[s - 1])
                if (!e.bar.empty()) {
                    auto& r = sorted[e.dim];
                    r.resize(t + 1);
                    r[s].push_back(e.bar);
                }
        for (auto& [dim, r] : sorted) {
            r.resize(t + 1);
            for (auto& cell : r)
                std::sort(cell.begin(), cell.end());
        }
        // A dimension seen earlier but absent now still needs its row.
        for (auto& [dim, prev] : prev_)
            sorted.try_emplace(dim, std::vector<std::vector<Bar>>(t + 1));
        if (t > 1)
            emit(t - 1, &sorted);
        prev_ = std::move(sorted);
    }

    /// Closes the last row; call once after row n.
    void finish() { emit(n_, nullptr); }

    const std::map<int, SignedCount>& counts() const { return counts_; }

    SignedCount total() const
    {
        SignedCount c;
        for (const auto& [dim, v] : counts_) {
            c.positive += v.positive;
            c.negative += v.negative;
        }
        return c;
    }

private:
    void emit(int t, const std::map<int, std::vector<std::vector<Bar>>>* next)
    {
        static const std::vector<Bar> none;
        for (const auto& [dim, row] : prev_) {
            const std::vector<std::vector<Bar>>* nr = nullptr;
            if (next) {
                auto it = next->find(dim);
                if (it != next->end())
                    nr = &it->second;
            }
            auto& c = counts_[dim];
            for (int s = 1; s <= t; ++s) {
                const auto& right = nr ? (*nr)[s] : none;
                const auto& diag = (nr && s > 1) ? (*nr)[s - 1] : none;
                const auto& left = s > 1 ? row[s - 1] : none;
                const auto [p, q] = mobius_cell_count(row[s], right, diag, left);
                c.positive += p;
                c.negative += q;
            }
        }
    }

    int n_;
    std::map<int, std::vector<std::vector<Bar>>> prev_;
    std::map<int, SignedCount> counts_;
};

} // namespace metarank

#endif
