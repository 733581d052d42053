#ifndef METARANK_METRICS_HPP
#define METARANK_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/metarank.hpp"
#include "metarank/signed.hpp"

namespace metarank {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Half-open real interval [lo, hi); hi may be +infinity.
struct RealBar
{
    double lo = 0.0;
    double hi = infinity;

    bool contains(const RealBar& o) const { return lo <= o.lo && o.hi <= hi; }

    friend bool operator==(const RealBar&, const RealBar&) = default;
    friend auto operator<=>(const RealBar&, const RealBar&) = default;
};

/// Multiset of real bars, kept sorted.
using RealBarcode = std::vector<RealBar>;

/// Grid bar [lo, hi] -> [value(lo), value(hi + 1)). Bars that collapse to
/// zero length under tied grade values are dropped.
inline RealBarcode to_real_barcode(const std::vector<Bar>& bars, const GradeMap& map, Axis axis = Axis::y)
{
    RealBarcode out;
    for (const auto& b : bars) {
        if (b.empty())
            continue;
        const double lo = map.value(axis, b.lo);
        const double hi = map.value(axis, b.hi + 1);
        if (lo < hi)
            out.push_back({lo, hi});
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// [s, t) -> [s + eps, t); bars with t - s <= eps disappear.
inline RealBarcode truncate(const RealBarcode& b, double eps)
{
    RealBarcode out;
    for (const auto& bar : b)
        if (bar.hi - bar.lo > eps)
            out.push_back({bar.lo + eps, bar.hi});
    std::sort(out.begin(), out.end());
    return out;
}

/// Barcode of the shifted module M^eps: both endpoints move down by eps.
inline RealBarcode shift_down(const RealBarcode& b, double eps)
{
    RealBarcode out;
    out.reserve(b.size());
    for (const auto& bar : b)
        out.push_back({bar.lo - eps, bar.hi - eps});
    return out;
}

namespace detail {

// Is there an injection J -> K with every J contained in its image?
// J in order of left endpoint; each takes the available K (K.lo <= J.lo)
// with the smallest right endpoint still covering J. Every K available to
// one J stays available to all later ones, so the usual exchange argument
// makes the greedy choice optimal.
inline bool injects(RealBarcode J, RealBarcode K)
{
    if (J.size() > K.size())
        return false;
    std::sort(J.begin(), J.end());
    std::sort(K.begin(), K.end());
    std::multiset<double> open;
    std::size_t k = 0;
    for (const auto& j : J) {
        while (k < K.size() && K[k].lo <= j.lo)
            open.insert(K[k++].hi);
        auto it = open.lower_bound(j.hi);
        if (it == open.end())
            return false;
        open.erase(it);
    }
    return true;
}

inline bool injects_by_matching(const RealBarcode& J, const RealBarcode& K)
{
    if (J.size() > K.size())
        return false;
    std::vector<int> owner(K.size(), -1);
    std::vector<char> seen;
    auto augment = [&](auto&& self, std::size_t j) -> bool {
        for (std::size_t k = 0; k < K.size(); ++k) {
            if (seen[k] || !K[k].contains(J[j]))
                continue;
            seen[k] = 1;
            if (owner[k] < 0 || self(self, static_cast<std::size_t>(owner[k]))) {
                owner[k] = static_cast<int>(j);
                return true;
            }
        }
        return false;
    };
    for (std::size_t j = 0; j < J.size(); ++j) {
        seen.assign(K.size(), 0);
        if (!augment(augment, j))
            return false;
    }
    return true;
}

} // namespace detail

/// a ≼_eps b: truncate(a, eps) injects into b by containment.
inline bool dominates(const RealBarcode& a, const RealBarcode& b, double eps)
{
    return detail::injects(truncate(a, eps), b);
}

/// Same predicate by maximum bipartite matching; the reference for the
/// greedy version.
inline bool dominates_by_matching(const RealBarcode& a, const RealBarcode& b, double eps)
{
    return detail::injects_by_matching(truncate(a, eps), b);
}

/// The erosion comparison src^eps ≼_{2 eps} dst. Shifting down by eps and
/// truncating by 2 eps sends [b, d) to [b + eps, d - eps), computed in that
/// form so that grades moved by exactly eps compare equal.
inline bool eroded_dominates(const RealBarcode& src, const RealBarcode& dst, double eps)
{
    RealBarcode J;
    for (const auto& bar : src)
        if (bar.hi - bar.lo > 2 * eps)
            J.push_back({bar.lo + eps, bar.hi - eps});
    return detail::injects(std::move(J), dst);
}

/// A meta-rank table seen as a function of real intervals [s, t) on the
/// x-axis, with bars in real y coordinates.
class RealMetaRank
{
public:
    RealMetaRank(const MetaRankTable& table, GradeMap map, int dim)
        : table_(&table), map_(std::move(map)), dim_(dim)
    {
        const auto n = static_cast<std::size_t>(table.n());
        cache_.resize(n * (n + 1) / 2);
    }

    /// The table is referenced, not copied.
    RealMetaRank(MetaRankTable&&, GradeMap, int) = delete;

    const GradeMap& grades() const { return map_; }

    /// Grid cell [k, i] realising [s, t), or nullopt when the slice at s is
    /// zero. t = +infinity selects the last column.
    std::optional<std::pair<int, int>> cell(double s, double t) const
    {
        const int k = grade_lookup(map_, Axis::x, Lookup::less_equal, s);
        const int i = std::isinf(t) ? map_.size() : grade_lookup(map_, Axis::x, Lookup::less, t);
        if (k == below_grid || k > i)
            return std::nullopt;
        return std::make_pair(k, i);
    }

    const RealBarcode& at(double s, double t) const
    {
        static const RealBarcode none;
        const auto c = cell(s, t);
        return c ? grid(c->first, c->second) : none;
    }

    /// Real bars of grid cell [k, i]; empty outside Int([n]).
    const RealBarcode& grid(int k, int i) const
    {
        static const RealBarcode none;
        if (k < 1 || i > table_->n() || k > i || !table_->has_dim(dim_))
            return none;
        auto& slot = cache_[cell_index(k, i)];
        if (!slot)
            slot = to_real_barcode(table_->bars(dim_, k, i), map_, Axis::y);
        return *slot;
    }

private:
    const MetaRankTable* table_;
    GradeMap map_;
    int dim_;
    mutable std::vector<std::optional<RealBarcode>> cache_;
};

/// {0} ∪ {|u - v|} ∪ {|u - v| / 2} over all grade values of both inputs,
/// ascending and deduplicated.
inline std::vector<double> erosion_candidates(const GradeMap& a, const GradeMap& b)
{
    std::vector<double> values;
    for (const GradeMap* m : {&a, &b})
        for (Axis axis : {Axis::x, Axis::y})
            for (double v : m->values(axis))
                values.push_back(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> out{0.0};
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double d = values[j] - values[i];
            out.push_back(d);
            out.push_back(d / 2);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Feasibility only changes at candidates, but the feasible set may be
/// open at its left end. Each probe is either a candidate or a point inside
/// the gap above it (one unit past the top for the last); both report the
/// candidate, since the distance is an infimum.
struct Probe
{
    double eps;
    double value;
};

inline std::vector<Probe> erosion_probes(const std::vector<double>& cand)
{
    std::vector<Probe> out;
    for (std::size_t k = 0; k < cand.size(); ++k) {
        out.push_back({cand[k], cand[k]});
        const double next = k + 1 < cand.size() ? cand[k + 1] : cand[k] + 1.0;
        out.push_back({(cand[k] + next) / 2, cand[k]});
    }
    return out;
}

/// Smallest positive gap between distinct grade values of both inputs; the
/// candidate-set resolution.
inline double candidate_resolution(const GradeMap& a, const GradeMap& b)
{
    std::vector<double> values;
    for (const GradeMap* m : {&a, &b})
        for (Axis axis : {Axis::x, Axis::y})
            for (double v : m->values(axis))
                values.push_back(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    double gap = infinity;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        gap = std::min(gap, values[i + 1] - values[i]);
    return gap;
}

namespace detail {

inline std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// src([s - eps, t + eps))^eps ≼_{2 eps} dst([s, t)) for every real s < t.
// Both sides are step functions of s (right-continuous) and t
// (left-continuous) with breakpoints at grade values, so it is enough to
// test left ends of the s-pieces against right ends of the t-pieces.
inline bool mrk_one_way(const RealMetaRank& src, const RealMetaRank& dst, double eps)
{
    // Index lookups compare against the same shifted values that serve as
    // breakpoints, so a representative never rounds into the wrong piece.
    std::vector<double> src_plus, src_minus;
    for (double v : src.grades().xvalues) {
        src_plus.push_back(v + eps);
        src_minus.push_back(v - eps);
    }
    const auto& dst_x = dst.grades().xvalues;
    auto ss = src_plus;
    ss.insert(ss.end(), dst_x.begin(), dst_x.end());
    auto ts = src_minus;
    ts.insert(ts.end(), dst_x.begin(), dst_x.end());
    ss = sorted_unique(std::move(ss));
    ts = sorted_unique(std::move(ts));
    ts.push_back(infinity);

    auto count_le = [](const std::vector<double>& v, double x) {
        return static_cast<int>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
    };
    auto count_lt = [](const std::vector<double>& v, double x) {
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };
    const int n_src = static_cast<int>(src_plus.size());
    const int n_dst = static_cast<int>(dst_x.size());
    for (double s : ss) {
        const int k_src = count_le(src_plus, s);
        if (k_src == 0)
            continue;
        const int k_dst = count_le(dst_x, s);
        for (auto it = std::upper_bound(ts.begin(), ts.end(), s); it != ts.end(); ++it) {
            const double t = *it;
            const bool top = std::isinf(t);
            const auto& a = src.grid(k_src, top ? n_src : count_lt(src_minus, t));
            if (a.empty())
                continue;
            // grid() returns the empty barcode for k_dst == 0.
            const auto& b = dst.grid(k_dst, top ? n_dst : count_lt(dst_x, t));
            if (!eroded_dominates(a, b, eps))
                return false;
        }
    }
    return true;
}

} // namespace detail

/// Does eps satisfy the meta-rank erosion condition in both directions?
inline bool erosion_mrk_feasible(const RealMetaRank& a, const RealMetaRank& b, double eps)
{
    return detail::mrk_one_way(a, b, eps) && detail::mrk_one_way(b, a, eps);
}

/// Erosion distance between meta-ranks of one homology dimension: the
/// infimum of the feasible set, found by bisection over the probes
/// (feasibility is monotone in eps). Infinity when no probe works.
inline double erosion_mrk(const MetaRankTable& ta, const GradeMap& ma, const MetaRankTable& tb,
                          const GradeMap& mb, int dim)
{
    RealMetaRank a(ta, ma, dim), b(tb, mb, dim);
    const auto probes = erosion_probes(erosion_candidates(ma, mb));
    std::size_t lo = 0, hi = probes.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (erosion_mrk_feasible(a, b, probes[mid].eps))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo < probes.size() ? probes[lo].value : infinity;
}

/// Same value by scanning every candidate in order.
inline double erosion_mrk_linear(const MetaRankTable& ta, const GradeMap& ma, const MetaRankTable& tb,
                                 const GradeMap& mb, int dim)
{
    RealMetaRank a(ta, ma, dim), b(tb, mb, dim);
    for (const auto& p : erosion_probes(erosion_candidates(ma, mb)))
        if (erosion_mrk_feasible(a, b, p.eps))
            return p.value;
    return infinity;
}

/// Signed multiset of real bars.
using RealSignedBarcode = std::map<RealBar, int>;

/// Meta-diagram of one dimension over a real x-grid S = {s_1 < ... < s_m},
/// with s_{m+1} = infinity. Cell (i, j), 1 <= i < j <= m + 1, stands for
/// [s_i, s_j).
class RealMetaDiagram
{
public:
    RealMetaDiagram(const RealMetaRank& mrk, std::vector<double> grid) : grid_(std::move(grid))
    {
        const int m = static_cast<int>(grid_.size());
        cells_.assign(static_cast<std::size_t>(m + 2) * (m + 2), {});
        // R(i, j) for 0 <= i <= m, 1 <= j <= m + 2; i = 0 and j = m + 2 are zero.
        auto R = [&](int i, int j) -> const RealBarcode& {
            static const RealBarcode none;
            if (i < 1 || j > m + 1 || i >= j)
                return none;
            return mrk.at(grid_[i - 1], point(j));
        };
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m + 1; ++j) {
                RealSignedBarcode c;
                auto add = [&c](const RealBarcode& bars, int sign) {
                    for (const auto& b : bars) {
                        auto it = c.try_emplace(b, 0).first;
                        it->second += sign;
                        if (it->second == 0)
                            c.erase(it);
                    }
                };
                add(R(i, j), +1);
                add(R(i, j + 1), -1);
                add(R(i - 1, j + 1), +1);
                add(R(i - 1, j), -1);
                auto& cell = cells_[index(i, j)];
                for (const auto& [b, mult] : c) {
                    auto& dst = mult > 0 ? cell.first : cell.second;
                    dst.insert(dst.end(), static_cast<std::size_t>(std::abs(mult)), b);
                }
            }
    }

    int size() const { return static_cast<int>(grid_.size()); }
    const std::vector<double>& grid() const { return grid_; }

    /// s_j, with s_{m+1} = infinity.
    double point(int j) const { return j == size() + 1 ? infinity : grid_[j - 1]; }

    /// Positive and negative bars of cell [s_i, s_j); empty outside the grid.
    const RealBarcode& positive(int i, int j) const { return cell(i, j).first; }
    const RealBarcode& negative(int i, int j) const { return cell(i, j).second; }

private:
    const std::pair<RealBarcode, RealBarcode>& cell(int i, int j) const
    {
        static const std::pair<RealBarcode, RealBarcode> none;
        if (i < 1 || j > size() + 1 || i >= j)
            return none;
        return cells_[index(i, j)];
    }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * (size() + 2) + j; }

    std::vector<double> grid_;
    std::vector<std::pair<RealBarcode, RealBarcode>> cells_;
};

/// PN(M, N) at one cell: M's positive bars together with N's negative bars.
inline RealBarcode pn(const RealMetaDiagram& m, const RealMetaDiagram& n, int i, int j)
{
    RealBarcode out = m.positive(i, j);
    const auto& neg = n.negative(i, j);
    out.insert(out.end(), neg.begin(), neg.end());
    std::sort(out.begin(), out.end());
    return out;
}

struct MdgmDistance
{
    double distance = infinity;
    double irreg = 0.0; ///< irreg of the common x-grid S
};

/// Erosion distance between meta-diagrams of one homology dimension over
/// the common x-grid S (union of both inputs' x-values). The eroded cell is
/// [S_<=(s - eps), S_>=(t + eps)); with strict_s_form the right end is
/// S_>=(s + eps) instead.
class MdgmErosion
{
public:
    MdgmErosion(const MetaRankTable& ta, const GradeMap& ma, const MetaRankTable& tb, const GradeMap& mb,
                int dim, bool strict_s_form = false)
        : strict_(strict_s_form), grid_(common_grid(ma, mb)),
          a_(RealMetaRank(ta, ma, dim), grid_), b_(RealMetaRank(tb, mb, dim), grid_)
    {
        const int m = static_cast<int>(grid_.size());
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m + 1; ++j) {
                pn_ab_[{i, j}] = pn(a_, b_, i, j);
                pn_ba_[{i, j}] = pn(b_, a_, i, j);
            }
    }

    const std::vector<double>& grid() const { return grid_; }
    double irreg() const { return GradeMap::irregularity(grid_); }

    bool feasible(double eps)
    {
        if (last_failure_ && !check_cell(last_failure_->first, last_failure_->second, eps))
            return false;
        const int m = static_cast<int>(grid_.size());
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m + 1; ++j)
                if (!check_cell(i, j, eps)) {
                    last_failure_ = std::make_pair(i, j);
                    return false;
                }
        return true;
    }

    /// Grid index of S_<=(x): largest s_k <= x, 0 below the grid.
    int index_le(double x) const
    {
        return static_cast<int>(std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin());
    }

    /// Grid index of S_>=(x): smallest s_k >= x, m + 1 (infinity) past the top.
    int index_ge(double x) const
    {
        return static_cast<int>(std::lower_bound(grid_.begin(), grid_.end(), x) - grid_.begin()) + 1;
    }

private:
    static std::vector<double> common_grid(const GradeMap& a, const GradeMap& b)
    {
        std::vector<double> v = a.xvalues;
        v.insert(v.end(), b.xvalues.begin(), b.xvalues.end());
        return detail::sorted_unique(std::move(v));
    }

    bool check_cell(int i, int j, double eps) const
    {
        const double s = a_.point(i), t = a_.point(j);
        const int lo = index_le(s - eps);
        const int hi = strict_ ? index_ge(s + eps) : (std::isinf(t) ? size() + 1 : index_ge(t + eps));
        return eroded_dominates(pn_at(pn_ab_, lo, hi), pn_at(pn_ba_, i, j), eps) &&
               eroded_dominates(pn_at(pn_ba_, lo, hi), pn_at(pn_ab_, i, j), eps);
    }

    int size() const { return static_cast<int>(grid_.size()); }

    static const RealBarcode& pn_at(const std::map<std::pair<int, int>, RealBarcode>& table, int i, int j)
    {
        static const RealBarcode none;
        auto it = table.find({i, j});
        return it == table.end() ? none : it->second;
    }

    bool strict_;
    std::vector<double> grid_;
    RealMetaDiagram a_, b_;
    std::map<std::pair<int, int>, RealBarcode> pn_ab_, pn_ba_;
    std::optional<std::pair<int, int>> last_failure_;
};

/// Infimum of the feasible set, scanning probes in ascending order
/// (feasibility is not monotone here).
inline MdgmDistance erosion_mdgm(const MetaRankTable& ta, const GradeMap& ma, const MetaRankTable& tb,
                                 const GradeMap& mb, int dim, bool strict_s_form = false)
{
    MdgmErosion e(ta, ma, tb, mb, dim, strict_s_form);
    MdgmDistance out;
    out.irreg = e.irreg();
    for (const auto& p : erosion_probes(erosion_candidates(ma, mb)))
        if (e.feasible(p.eps)) {
            out.distance = p.value;
            break;
        }
    return out;
}

/// Homology dimensions present in either table.
inline std::vector<int> common_dims(const MetaRankTable& a, const MetaRankTable& b)
{
    std::vector<int> d = a.dims();
    d.insert(d.end(), b.dims().begin(), b.dims().end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

/// Maximum over all homology dimensions.
inline double erosion_mrk(const MetaRankTable& ta, const GradeMap& ma, const MetaRankTable& tb,
                          const GradeMap& mb)
{
    double d = 0.0;
    for (int dim : common_dims(ta, tb))
        d = std::max(d, erosion_mrk(ta, ma, tb, mb, dim));
    return d;
}

inline MdgmDistance erosion_mdgm(const MetaRankTable& ta, const GradeMap& ma, const MetaRankTable& tb,
                                 const GradeMap& mb, bool strict_s_form = false)
{
    MdgmDistance out;
    out.distance = 0.0;
    for (int dim : common_dims(ta, tb)) {
        const auto r = erosion_mdgm(ta, ma, tb, mb, dim, strict_s_form);
        out.distance = std::max(out.distance, r.distance);
        out.irreg = r.irreg;
    }
    return out;
}

/// The same bifiltration with every grade moved by (dx, dy).
inline Bifiltration shift_grades(const Bifiltration& b, double dx, double dy)
{
    Bifiltration out = b;
    for (double& v : out.grades.xvalues)
        v += dx;
    for (double& v : out.grades.yvalues)
        v += dy;
    return out;
}

} // namespace metarank

#endif
