#ifndef METARANK_BIFILTRATION_HPP
#define METARANK_BIFILTRATION_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metarank/error.hpp"

namespace metarank {

using Vertex = std::uint32_t;

enum class Axis { x, y };

/// A simplex given by its sorted vertex ids.
struct Simplex
{
    std::vector<Vertex> vertices;

    int dimension() const { return static_cast<int>(vertices.size()) - 1; }

    /// The codimension-one faces, in the order obtained by dropping vertex
    /// 0, 1, ..., k.
    std::vector<Simplex> facets() const
    {
        std::vector<Simplex> out;
        if (vertices.size() < 2)
            return out;
        out.reserve(vertices.size());
        for (std::size_t drop = 0; drop < vertices.size(); ++drop) {
            Simplex f;
            f.vertices.reserve(vertices.size() - 1);
            for (std::size_t v = 0; v < vertices.size(); ++v)
                if (v != drop)
                    f.vertices.push_back(vertices[v]);
            out.push_back(std::move(f));
        }
        return out;
    }

    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

inline std::string to_string(const Simplex& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(s.vertices[i]);
    }
    return out + "}";
}

/// A simplex with its real bigrade, as read from input.
struct RawSimplex
{
    Simplex simplex;
    double x = 0.0;
    double y = 0.0;
};

/// Simplicial complex with one integer bigrade per simplex such that both
/// grade vectors are permutations of 1..n, faces precede cofaces on both
/// axes, and the complex is closed under taking facets. Immutable.
class GradedComplex
{
public:
    GradedComplex() = default;

    /// Validates every invariant; throws ValidationError on violation.
    GradedComplex(std::vector<Simplex> simplices, std::vector<int> xgrade,
                  std::vector<int> ygrade)
        : simplices_(std::move(simplices)), xgrade_(std::move(xgrade)),
          ygrade_(std::move(ygrade))
    {
        const int n = size();
        if (static_cast<int>(xgrade_.size()) != n ||
            static_cast<int>(ygrade_.size()) != n)
            throw ValidationError("grade vectors do not match simplex count");

        by_x_.assign(n + 1, -1);
        by_y_.assign(n + 1, -1);
        for (int s = 0; s < n; ++s) {
            check_grade(xgrade_[s], by_x_, s, "x");
            check_grade(ygrade_[s], by_y_, s, "y");
        }

        std::map<std::vector<Vertex>, int> index;
        for (int s = 0; s < n; ++s) {
            const auto& v = simplices_[s].vertices;
            if (v.empty())
                throw ValidationError("empty simplex");
            if (!std::is_sorted(v.begin(), v.end()) ||
                std::adjacent_find(v.begin(), v.end()) != v.end())
                throw ValidationError("simplex " + to_string(simplices_[s]) +
                                      " has unsorted or repeated vertices");
            if (!index.emplace(v, s).second)
                throw ValidationError("duplicate simplex " +
                                      to_string(simplices_[s]));
        }

        facets_.resize(n);
        for (int s = 0; s < n; ++s) {
            for (const auto& f : simplices_[s].facets()) {
                auto it = index.find(f.vertices);
                if (it == index.end())
                    throw ValidationError("complex is not closed: facet " +
                                          to_string(f) + " of " +
                                          to_string(simplices_[s]) +
                                          " is missing");
                const int t = it->second;
                if (xgrade_[t] >= xgrade_[s] || ygrade_[t] >= ygrade_[s])
                    throw ValidationError(
                        "face monotonicity violated: " + to_string(f) +
                        " does not precede " + to_string(simplices_[s]));
                facets_[s].push_back(t);
            }
            std::sort(facets_[s].begin(), facets_[s].end());
        }
    }

    int size() const { return static_cast<int>(simplices_.size()); }
    bool empty() const { return simplices_.empty(); }

    const std::vector<Simplex>& simplices() const { return simplices_; }
    const Simplex& simplex(int s) const { return simplices_[s]; }
    int dimension(int s) const { return simplices_[s].dimension(); }
    int xgrade(int s) const { return xgrade_[s]; }
    int ygrade(int s) const { return ygrade_[s]; }
    const std::vector<int>& xgrades() const { return xgrade_; }
    const std::vector<int>& ygrades() const { return ygrade_; }

    /// Simplex ids of the facets of s.
    const std::vector<int>& facets(int s) const { return facets_[s]; }

    /// The simplex whose x-grade (resp. y-grade) is g, for g in 1..n.
    int simplex_at_x(int g) const { return by_x_[g]; }
    int simplex_at_y(int g) const { return by_y_[g]; }

    int max_dimension() const
    {
        int d = -1;
        for (const auto& s : simplices_)
            d = std::max(d, s.dimension());
        return d;
    }

    /// True iff the simplex is present at grid point (a, b).
    bool contains(int s, int a, int b) const
    {
        return xgrade_[s] <= a && ygrade_[s] <= b;
    }

    friend bool operator==(const GradedComplex& l, const GradedComplex& r)
    {
        return l.simplices_ == r.simplices_ && l.xgrade_ == r.xgrade_ &&
               l.ygrade_ == r.ygrade_;
    }

private:
    void check_grade(int g, std::vector<int>& slot, int s, const char* axis)
    {
        const int n = size();
        if (g < 1 || g > n)
            throw ValidationError(std::string(axis) + "-grade " +
                                  std::to_string(g) + " out of range 1.." +
                                  std::to_string(n));
        if (slot[g] != -1)
            throw ValidationError(std::string(axis) + "-grade " +
                                  std::to_string(g) +
                                  " used twice; grades must be a permutation");
        slot[g] = s;
    }

    std::vector<Simplex> simplices_;
    std::vector<int> xgrade_;
    std::vector<int> ygrade_;
    std::vector<int> by_x_;
    std::vector<int> by_y_;
    std::vector<std::vector<int>> facets_;
};

/// Real grade value of each grid index, per axis. Index i (1-based) holds
/// the real grade of the simplex placed at i. Ties from refinement show up
/// as repeated values.
struct GradeMap
{
    std::vector<double> xvalues;
    std::vector<double> yvalues;

    int size() const { return static_cast<int>(xvalues.size()); }

    const std::vector<double>& values(Axis axis) const
    {
        return axis == Axis::x ? xvalues : yvalues;
    }

    /// Real value at grid index i in 1..n+1; index n+1 maps to +infinity.
    double value(Axis axis, int i) const
    {
        const auto& v = values(axis);
        if (i == static_cast<int>(v.size()) + 1)
            return std::numeric_limits<double>::infinity();
        return v.at(i - 1);
    }

    /// Distinct values of one axis, ascending.
    std::vector<double> distinct(Axis axis) const
    {
        auto v = values(axis);
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    /// (max consecutive gap) - (min consecutive gap); 0 for fewer than two
    /// values.
    double irreg(Axis axis) const { return irregularity(values(axis)); }

    static double irregularity(const std::vector<double>& v)
    {
        if (v.size() < 2)
            return 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double gap = v[i + 1] - v[i];
            lo = std::min(lo, gap);
            hi = std::max(hi, gap);
        }
        return hi - lo;
    }

    friend bool operator==(const GradeMap&, const GradeMap&) = default;
};

/// A graded complex together with the real values of its grid.
struct Bifiltration
{
    GradedComplex complex;
    GradeMap grades;

    int size() const { return complex.size(); }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const char* ws = " \t\r\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool parse_real(std::string_view tok, double& out)
{
    // std::from_chars for double is available in libstdc++ 11.
    const auto* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && p == end && std::isfinite(out);
}

} // namespace detail

/// Reads the `v0 v1 ... vk ; x y` text format. `#` starts a comment. No
/// validation beyond syntax and duplicate detection.
inline std::vector<RawSimplex> parse_bifiltration(std::string_view text)
{
    std::vector<RawSimplex> out;
    std::map<std::vector<Vertex>, std::size_t> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;

        const auto semi = line.find(';');
        if (semi == std::string_view::npos)
            throw ParseError(line_no, "missing ';' between vertices and grade");
        if (line.find(';', semi + 1) != std::string_view::npos)
            throw ParseError(line_no, "more than one ';'");

        RawSimplex raw;
        for (auto tok : detail::split_ws(line.substr(0, semi))) {
            Vertex v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || p != tok.data() + tok.size())
                throw ParseError(line_no, "bad vertex id '" + std::string(tok) + "'");
            raw.simplex.vertices.push_back(v);
        }
        if (raw.simplex.vertices.empty())
            throw ParseError(line_no, "simplex has no vertices");
        std::sort(raw.simplex.vertices.begin(), raw.simplex.vertices.end());
        if (std::adjacent_find(raw.simplex.vertices.begin(),
                               raw.simplex.vertices.end()) !=
            raw.simplex.vertices.end())
            throw ParseError(line_no, "repeated vertex in simplex");

        auto grade = detail::split_ws(line.substr(semi + 1));
        if (grade.size() != 2)
            throw ParseError(line_no, "malformed grade: expected two reals, got " +
                                          std::to_string(grade.size()));
        if (!detail::parse_real(grade[0], raw.x) ||
            !detail::parse_real(grade[1], raw.y))
            throw ParseError(line_no, "malformed grade: not a finite real");

        auto [it, fresh] = seen.emplace(raw.simplex.vertices, line_no);
        if (!fresh)
            throw ParseError(line_no,
                             "duplicate simplex " + to_string(raw.simplex) +
                                 " (first on line " + std::to_string(it->second) +
                                 "); multi-critical input is not supported");
        out.push_back(std::move(raw));
    }
    return out;
}

/// Assigns distinct integer grades 1..n on each axis by sorting on
/// (real grade, dimension, input index). Throws ValidationError when the
/// input is not closed or not face-monotone in its real grades.
inline Bifiltration refine_to_simplexwise(const std::vector<RawSimplex>& raw)
{
    const int n = static_cast<int>(raw.size());

    std::map<std::vector<Vertex>, int> index;
    for (int s = 0; s < n; ++s)
        index.emplace(raw[s].simplex.vertices, s);
    for (int s = 0; s < n; ++s) {
        for (const auto& f : raw[s].simplex.facets()) {
            auto it = index.find(f.vertices);
            if (it == index.end())
                throw ValidationError("complex is not closed: facet " +
                                      to_string(f) + " of " +
                                      to_string(raw[s].simplex) + " is missing");
            const auto& face = raw[it->second];
            if (face.x > raw[s].x || face.y > raw[s].y)
                throw ValidationError("face monotonicity violated: " +
                                      to_string(f) + " grade exceeds " +
                                      to_string(raw[s].simplex));
        }
    }

    auto rank_axis = [&](auto key, std::vector<int>& grade,
                         std::vector<double>& values) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double ka = key(raw[a]), kb = key(raw[b]);
            if (ka != kb)
                return ka < kb;
            return raw[a].simplex.dimension() < raw[b].simplex.dimension();
        });
        grade.assign(n, 0);
        values.assign(n, 0.0);
        for (int pos = 0; pos < n; ++pos) {
            grade[order[pos]] = pos + 1;
            values[pos] = key(raw[order[pos]]);
        }
    };

    std::vector<int> xg, yg;
    GradeMap map;
    rank_axis([](const RawSimplex& r) { return r.x; }, xg, map.xvalues);
    rank_axis([](const RawSimplex& r) { return r.y; }, yg, map.yvalues);

    std::vector<Simplex> simplices;
    simplices.reserve(n);
    for (const auto& r : raw)
        simplices.push_back(r.simplex);
    return Bifiltration{GradedComplex(std::move(simplices), std::move(xg),
                                      std::move(yg)),
                        std::move(map)};
}

inline Bifiltration load_bifiltration(std::string_view text)
{
    return refine_to_simplexwise(parse_bifiltration(text));
}

// ---------------------------------------------------------------------------
// Staircase paths

/// Position of simplex s along the path (1,1) -> (i,1) -> (i,n) -> (n,n).
/// Positions run 1..2n-1; every position receives at most one simplex.
inline int path_position(const GradedComplex& c, int s, int column)
{
    const int n = c.size();
    const int x = c.xgrade(s), y = c.ygrade(s);
    if (x <= column)
        return y == 1 ? x : column + y - 1;
    return x + n - 1;
}

struct PathArrival
{
    int simplex;
    int position;
};

/// All simplices ordered by arrival along the staircase path through
/// column i (1-based).
inline std::vector<PathArrival> filtration_along_path(const GradedComplex& c,
                                                      int column)
{
    std::vector<PathArrival> out;
    out.reserve(c.size());
    for (int s = 0; s < c.size(); ++s)
        out.push_back({s, path_position(c, s, column)});
    std::sort(out.begin(), out.end(),
              [](const PathArrival& a, const PathArrival& b) {
                  return a.position < b.position;
              });
    return out;
}

// ---------------------------------------------------------------------------
// Grade lookup

enum class Lookup { less, less_equal, greater_equal, greater };

/// Sentinels returned by grade_lookup: 0 means "below every value",
/// n+1 means "past the top" (the point at infinity).
constexpr int below_grid = 0;
inline int infinity_index(const GradeMap& map) { return map.size() + 1; }

/// Grid index selected by S_<, S_<=, S_>= or S_> on one axis.
inline int grade_lookup(const GradeMap& map, Axis axis, Lookup mode, double t)
{
    const auto& v = map.values(axis);
    const int n = static_cast<int>(v.size());
    switch (mode) {
    case Lookup::less:
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), t) - v.begin());
    case Lookup::less_equal:
        return static_cast<int>(std::upper_bound(v.begin(), v.end(), t) - v.begin());
    case Lookup::greater_equal: {
        const int i = static_cast<int>(std::lower_bound(v.begin(), v.end(), t) - v.begin());
        return i == n ? n + 1 : i + 1;
    }
    case Lookup::greater: {
        const int i = static_cast<int>(std::upper_bound(v.begin(), v.end(), t) - v.begin());
        return i == n ? n + 1 : i + 1;
    }
    }
    return below_grid;
}

} // namespace metarank

#endif
