#ifndef METARANK_GF2_HPP
#define METARANK_GF2_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace metarank {

/// Sparse GF(2) column: strictly increasing row indices of the non-zero
/// entries.
struct Column
{
    std::vector<int> rows;

    bool empty() const { return rows.empty(); }

    /// Largest row index, or -1 for the zero column.
    int low() const { return rows.empty() ? -1 : rows.back(); }

    Column& operator+=(const Column& other)
    {
        std::vector<int> out;
        out.reserve(rows.size() + other.rows.size());
        std::set_symmetric_difference(rows.begin(), rows.end(),
                                      other.rows.begin(), other.rows.end(),
                                      std::back_inserter(out));
        rows = std::move(out);
        return *this;
    }

    friend bool operator==(const Column&, const Column&) = default;
};

/// Square GF(2) matrix stored column-major as packed 64-bit words.
///
/// Column additions cost O(n/64); swapping two adjacent rows or adding one
/// row to another costs O(n), which is what the transposition updates need.
class BitMatrix
{
public:
    BitMatrix() = default;

    explicit BitMatrix(int n)
        : n_(n), words_((n + 63) / 64), data_(static_cast<std::size_t>(n) * words_, 0)
    {
    }

    static BitMatrix identity(int n)
    {
        BitMatrix m(n);
        for (int i = 0; i < n; ++i)
            m.set(i, i, true);
        return m;
    }

    int size() const { return n_; }

    bool get(int row, int col) const
    {
        return (word(col, row >> 6) >> (row & 63)) & 1u;
    }

    void set(int row, int col, bool value)
    {
        auto& w = word(col, row >> 6);
        const std::uint64_t bit = std::uint64_t{1} << (row & 63);
        w = value ? (w | bit) : (w & ~bit);
    }

    void flip(int row, int col) { word(col, row >> 6) ^= std::uint64_t{1} << (row & 63); }

    std::span<std::uint64_t> column(int col)
    {
        return {data_.data() + static_cast<std::size_t>(col) * words_,
                static_cast<std::size_t>(words_)};
    }

    std::span<const std::uint64_t> column(int col) const
    {
        return {data_.data() + static_cast<std::size_t>(col) * words_,
                static_cast<std::size_t>(words_)};
    }

    bool column_empty(int col) const
    {
        for (auto w : column(col))
            if (w)
                return false;
        return true;
    }

    /// Largest row index with a non-zero entry in the column, or -1.
    int low(int col) const
    {
        auto c = column(col);
        for (int w = words_ - 1; w >= 0; --w)
            if (c[w])
                return w * 64 + 63 - std::countl_zero(c[w]);
        return -1;
    }

    /// column(dst) += column(src)
    void add_column(int src, int dst)
    {
        auto s = column(src);
        auto d = column(dst);
        for (int w = 0; w < words_; ++w)
            d[w] ^= s[w];
    }

    /// row(dst) += row(src)
    void add_row(int src, int dst)
    {
        for (int c = 0; c < n_; ++c)
            if (get(src, c))
                flip(dst, c);
    }

    void swap_columns(int a, int b)
    {
        auto ca = column(a);
        auto cb = column(b);
        std::swap_ranges(ca.begin(), ca.end(), cb.begin());
    }

    void swap_rows(int a, int b)
    {
        const int wa = a >> 6, wb = b >> 6;
        const std::uint64_t ba = std::uint64_t{1} << (a & 63);
        const std::uint64_t bb = std::uint64_t{1} << (b & 63);
        for (int c = 0; c < n_; ++c) {
            auto col = column(c);
            const bool va = col[wa] & ba;
            const bool vb = col[wb] & bb;
            if (va != vb) {
                col[wa] ^= ba;
                col[wb] ^= bb;
            }
        }
    }

    Column sparse_column(int col) const
    {
        Column out;
        for (int r = 0; r < n_; ++r)
            if (get(r, col))
                out.rows.push_back(r);
        return out;
    }

    void set_column(int col, const Column& c)
    {
        auto span = column(col);
        std::fill(span.begin(), span.end(), 0);
        for (int r : c.rows)
            set(r, col, true);
    }

    /// this * other over GF(2).
    BitMatrix multiply(const BitMatrix& other) const
    {
        BitMatrix out(n_);
        for (int c = 0; c < n_; ++c)
            for (int k = 0; k < n_; ++k)
                if (other.get(k, c))
                    out.add_column_from(*this, k, c);
        return out;
    }

    bool is_upper_unitriangular() const
    {
        for (int c = 0; c < n_; ++c) {
            if (!get(c, c))
                return false;
            if (low(c) != c)
                return false;
        }
        return true;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::uint64_t& word(int col, int w)
    {
        return data_[static_cast<std::size_t>(col) * words_ + w];
    }
    std::uint64_t word(int col, int w) const
    {
        return data_[static_cast<std::size_t>(col) * words_ + w];
    }

    void add_column_from(const BitMatrix& src, int src_col, int dst_col)
    {
        auto s = src.column(src_col);
        auto d = column(dst_col);
        for (int w = 0; w < words_; ++w)
            d[w] ^= s[w];
    }

    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> data_;
};

} // namespace metarank

#endif
