#ifndef METARANK_METARANK_HPP
#define METARANK_METARANK_HPP

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/error.hpp"
#include "metarank/reduction.hpp"
#include "metarank/vineyard.hpp"

namespace metarank {

/// Closed range [lo, hi] of grid heights, 1 <= lo <= hi <= n. Any bar with
/// lo > hi is the empty placeholder.
struct Bar
{
    int lo = 1;
    int hi = 0;

    static constexpr Bar empty_bar() { return Bar{1, 0}; }

    constexpr bool empty() const { return lo > hi; }
    constexpr bool contains(int y) const { return lo <= y && y <= hi; }
    constexpr bool contains(const Bar& b) const
    {
        return b.empty() || (lo <= b.lo && b.hi <= hi);
    }

    friend constexpr bool operator==(const Bar& l, const Bar& r)
    {
        return (l.empty() && r.empty()) || (l.lo == r.lo && l.hi == r.hi);
    }
    friend constexpr bool operator<(const Bar& l, const Bar& r)
    {
        return l.lo != r.lo ? l.lo < r.lo : l.hi < r.hi;
    }
};

constexpr Bar intersect(const Bar& a, const Bar& b)
{
    return Bar{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

/// The bars of one meta-rank cell for one homology dimension. `sources`
/// runs parallel to `bars` and names where each bar came from: a pairing
/// list slot (slot intersection, placeholders kept) or the birth simplex of
/// the image class (image sweep, non-empty bars only).
struct BarcodeList
{
    int dim = 0;
    std::vector<Bar> bars;
    std::vector<int> sources;

    std::size_t size() const { return bars.size(); }

    /// Non-empty bars, sorted.
    std::vector<Bar> multiset() const
    {
        std::vector<Bar> out;
        for (const auto& b : bars)
            if (!b.empty())
                out.push_back(b);
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// Index of cell (k, i), 1 <= k <= i <= n, in row-major triangular order.
inline std::size_t cell_index(int k, int i) { return static_cast<std::size_t>(i) * (i - 1) / 2 + (k - 1); }

/// The meta-rank on Int([n]): for every homology dimension and every grid
/// interval [k, i], the barcode of the image of the slice map from column k
/// to column i.
class MetaRankTable
{
public:
    MetaRankTable() = default;
    MetaRankTable(int n, std::vector<int> dims) : n_(n), dims_(std::move(dims))
    {
        cells_.resize(dims_.size());
        for (std::size_t d = 0; d < dims_.size(); ++d)
            cells_[d].assign(static_cast<std::size_t>(n_) * (n_ + 1) / 2, BarcodeList{dims_[d], {}, {}});
    }

    int n() const { return n_; }
    const std::vector<int>& dims() const { return dims_; }

    bool has_dim(int dim) const
    {
        return std::find(dims_.begin(), dims_.end(), dim) != dims_.end();
    }

    const BarcodeList& at(int dim, int k, int i) const
    {
        check_cell(k, i);
        return cells_[dim_index(dim)][cell_index(k, i)];
    }

    BarcodeList& at(int dim, int k, int i)
    {
        check_cell(k, i);
        return cells_[dim_index(dim)][cell_index(k, i)];
    }

    /// Sorted non-empty bars of cell [k, i]; empty for out-of-range cells
    /// (k < 1 or i > n), matching the zero extension used by the Möbius
    /// inversion.
    std::vector<Bar> bars(int dim, int k, int i) const
    {
        if (k < 1 || i > n_ || k > i)
            return {};
        return at(dim, k, i).multiset();
    }

    friend bool operator==(const MetaRankTable& l, const MetaRankTable& r)
    {
        if (l.n_ != r.n_ || l.dims_ != r.dims_)
            return false;
        for (int d : l.dims_)
            for (int i = 1; i <= l.n_; ++i)
                for (int k = 1; k <= i; ++k)
                    if (l.bars(d, k, i) != r.bars(d, k, i))
                        return false;
        return true;
    }

private:
    std::size_t dim_index(int dim) const
    {
        auto it = std::find(dims_.begin(), dims_.end(), dim);
        if (it == dims_.end())
            throw Error("dimension " + std::to_string(dim) + " not in table");
        return static_cast<std::size_t>(it - dims_.begin());
    }

    void check_cell(int k, int i) const
    {
        if (k < 1 || k > i || i > n_)
            throw Error("cell [" + std::to_string(k) + "," + std::to_string(i) +
                        "] outside Int([" + std::to_string(n_) + "])");
    }

    int n_ = 0;
    std::vector<int> dims_;
    std::vector<std::vector<BarcodeList>> cells_;
};

/// Alive range of each path interval inside the vertical segment of
/// column i, shifted into [1, n]. One bar per slot.
inline std::vector<Bar> restrict_and_shift(const PairingList& pairs, int column, int n)
{
    std::vector<Bar> out(pairs.size());
    const int top = column + n - 1;
    for (const auto& iv : pairs.entries) {
        const int lo = std::max(iv.birth, column);
        const int hi = iv.death == implicit_death ? top : std::min(iv.death - 1, top);
        out[iv.slot] = lo <= hi ? Bar{lo - column + 1, hi - column + 1} : Bar::empty_bar();
    }
    return out;
}

/// Slot-wise intersection of the diagonal list [i, i] with [k, i-1].
inline std::vector<Bar> intersect_step(const std::vector<Bar>& curr,
                                       const std::vector<Bar>& prev)
{
    if (curr.size() != prev.size())
        throw InternalError("barcode lists are not slot-aligned");
    std::vector<Bar> out(curr.size());
    for (std::size_t s = 0; s < curr.size(); ++s)
        out[s] = intersect(curr[s], prev[s]);
    return out;
}

/// How the off-diagonal cells of a row are filled.
///
/// slot_intersection intersects the diagonal barcode with the previous row
/// slot by slot. It is exact on the diagonal but can lose or shorten bars
/// off it once the pairing switches, because the image of one column in a
/// later one need not be spanned by single bars of a fixed basis.
///
/// image_sweep reads each image barcode from the reduced matrix of the
/// current path with its rows reordered so that the source column's
/// simplices come first (image persistence). It is exact.
enum class Method { image_sweep, slot_intersection };

/// One bar of a row cell with its dimension and source (slot or birth
/// simplex, see BarcodeList).
struct RowEntry
{
    int source = -1;
    int dim = 0;
    Bar bar;
};

namespace detail {

/// Reduced matrix of K_i (columns in path order of column i) under row
/// reorderings. Rows of the first `block` logical positions form the source
/// subcomplex; moving a row out of it takes adjacent swaps, each O(1) plus at
/// most one column addition.
class RowSweep
{
public:
    RowSweep(const RUDecomposition& ru, int columns)
        : r_(columns), low_(columns, -1), pivot_(columns, -1), row_at_(columns), logical_(columns)
    {
        for (int c = 0; c < columns; ++c) {
            auto src = ru.R().column(c);
            auto dst = r_.column(c);
            // Columns of K_i only reach rows of K_i.
            std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
            low_[c] = ru.low(c);
            if (low_[c] >= 0)
                pivot_[low_[c]] = c;
        }
        std::iota(row_at_.begin(), row_at_.end(), 0);
        std::iota(logical_.begin(), logical_.end(), 0);
    }

    /// Moves the row at logical position `from` to logical position `to`
    /// (to >= from) by adjacent swaps.
    void sink(int from, int to)
    {
        for (int r = from; r < to; ++r)
            swap(r);
    }

    int logical_row(int physical) const { return logical_[physical]; }

    /// Column whose low sits on the given logical row, or -1.
    int pivot(int logical) const { return pivot_[logical]; }

private:
    void swap(int r)
    {
        const int pr = row_at_[r], pq = row_at_[r + 1];
        const int ka = pivot_[r], kb = pivot_[r + 1];
        std::swap(row_at_[r], row_at_[r + 1]);
        logical_[pr] = r + 1;
        logical_[pq] = r;
        pivot_[r] = pivot_[r + 1] = -1;
        const bool kb_hits = kb >= 0 && r_.get(pr, kb);
        if (ka >= 0 && kb_hits) {
            // Both lows land on r+1; the later column absorbs the earlier
            // one and drops to r.
            const int early = std::min(ka, kb), late = std::max(ka, kb);
            r_.add_column(early, late);
            set(early, r + 1);
            set(late, r);
            return;
        }
        if (ka >= 0)
            set(ka, r + 1);
        if (kb >= 0)
            set(kb, kb_hits ? r + 1 : r);
    }

    void set(int col, int row)
    {
        low_[col] = row;
        pivot_[row] = col;
    }

    BitMatrix r_;
    std::vector<int> low_;
    std::vector<int> pivot_;
    std::vector<int> row_at_;
    std::vector<int> logical_;
};

} // namespace detail

/// Drives the column sweep and produces one row [1..i, i] of the meta-rank
/// per call. Keeps only what the next row needs, so memory is O(n^2).
class MetaRankSweep
{
public:
    explicit MetaRankSweep(const GradedComplex& complex, bool check_invariants = false,
                           Method method = Method::image_sweep)
        : complex_(complex), state_(complex, check_invariants), method_(method)
    {
        slot_dims_.reserve(state_.pairs().size());
        for (const auto& iv : state_.pairs().entries)
            slot_dims_.push_back(iv.dim);
        creators_.resize(complex.size() + 1);
    }

    int n() const { return complex_.size(); }
    Method method() const { return method_; }

    /// Homology dimension of each pairing list slot.
    const std::vector<int>& slot_dims() const { return slot_dims_; }

    const VineyardState& state() const { return state_; }

    bool done() const { return next_ > n(); }

    /// Row i (1-based, increasing): element k-1 holds the bars of [k, i].
    const std::vector<std::vector<RowEntry>>& next_row()
    {
        const int i = next_++;
        if (i > n())
            throw InternalError("meta-rank sweep already finished");
        if (i > 1)
            state_.sweep_column();
        if (method_ == Method::slot_intersection)
            slot_row(i);
        else
            image_row(i);
        return row_;
    }

private:
    void slot_row(int i)
    {
        std::vector<Bar> diag = restrict_and_shift(state_.pairs(), i, n());
        std::vector<std::vector<Bar>> bars;
        bars.reserve(i);
        for (int k = 1; k < i; ++k)
            bars.push_back(intersect_step(diag, slot_bars_[k - 1]));
        bars.push_back(std::move(diag));
        slot_bars_ = std::move(bars);

        row_.assign(i, {});
        for (int k = 1; k <= i; ++k) {
            auto& cell = row_[k - 1];
            cell.reserve(slot_bars_[k - 1].size());
            for (std::size_t s = 0; s < slot_bars_[k - 1].size(); ++s)
                cell.push_back(RowEntry{static_cast<int>(s), slot_dims_[s], slot_bars_[k - 1][s]});
        }
    }

    void image_row(int i)
    {
        const auto& ru = state_.ru();
        // The first i path positions of column i hold K_i sorted by height.
        auto& mine = creators_[i];
        for (int p = 0; p < i; ++p)
            if (!ru.is_negative(p))
                mine.push_back(ru.simplex_at(p));

        detail::RowSweep sweep(ru, i);
        row_.assign(i, {});
        for (int k = i; k >= 1; --k) {
            if (k < i) {
                const int leaving = complex_.simplex_at_x(k + 1);
                sweep.sink(sweep.logical_row(ru.position_of(leaving)), k);
            }
            auto& cell = row_[k - 1];
            for (int sigma : creators_[k]) {
                const int c = sweep.pivot(sweep.logical_row(ru.position_of(sigma)));
                const int lo = complex_.ygrade(sigma);
                const int hi = c >= 0 ? complex_.ygrade(ru.simplex_at(c)) - 1 : n();
                cell.push_back(RowEntry{sigma, complex_.dimension(sigma), Bar{lo, hi}});
            }
        }
    }

    const GradedComplex& complex_;
    VineyardState state_;
    Method method_;
    std::vector<int> slot_dims_;
    std::vector<std::vector<Bar>> slot_bars_;
    std::vector<std::vector<int>> creators_; ///< creators of K_k in its own filtration
    std::vector<std::vector<RowEntry>> row_;
    int next_ = 1;
};

/// Homology dimensions 0..max simplex dimension.
inline std::vector<int> default_dims(const GradedComplex& c)
{
    std::vector<int> d;
    for (int k = 0; k <= c.max_dimension(); ++k)
        d.push_back(k);
    return d;
}

/// Full triangular meta-rank table for the requested dimensions.
inline MetaRankTable compute_metarank(const GradedComplex& complex,
                                      std::vector<int> dims = {},
                                      bool check_invariants = false,
                                      Method method = Method::image_sweep)
{
    if (dims.empty())
        dims = default_dims(complex);
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

    MetaRankSweep sweep(complex, check_invariants, method);
    MetaRankTable table(complex.size(), dims);
    for (int i = 1; i <= complex.size(); ++i) {
        const auto& row = sweep.next_row();
        for (int k = 1; k <= i; ++k)
            for (const auto& e : row[k - 1]) {
                if (!table.has_dim(e.dim))
                    continue;
                auto& cell = table.at(e.dim, k, i);
                cell.bars.push_back(e.bar);
                cell.sources.push_back(e.source);
            }
    }
    if (check_invariants && !sweep.state().monotonicity().clean())
        throw InternalError("interval endpoint monotonicity violated during sweep");
    return table;
}

/// Swaps the roles of the two axes; the meta-rank of the result is the
/// vertical meta-rank of the input.
inline GradedComplex transpose_axes(const GradedComplex& c)
{
    return GradedComplex(c.simplices(), c.ygrades(), c.xgrades());
}

inline Bifiltration transpose_axes(const Bifiltration& b)
{
    return Bifiltration{transpose_axes(b.complex), GradeMap{b.grades.yvalues, b.grades.xvalues}};
}

} // namespace metarank

#endif
