#ifndef METARANK_IO_HPP
#define METARANK_IO_HPP

// JSON and text serialisation of computed invariants, and the two SVG
// renderings (diagram of signed diagrams, signed barcode of rectangles).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "metarank/bifiltration.hpp"
#include "metarank/error.hpp"
#include "metarank/metarank.hpp"
#include "metarank/signed.hpp"

namespace metarank {

/// Everything `compute` writes: the grid, the meta-rank table, its
/// meta-diagram and the rank decomposition per dimension.
struct ComputeResult
{
    GradeMap grades;
    MetaRankTable mrk;
    MetaDiagram mdgm;
    std::vector<RankDecomposition> decompositions;

    friend bool operator==(const ComputeResult& l, const ComputeResult& r)
    {
        if (!(l.grades == r.grades) || !(l.mrk == r.mrk) || !(l.mdgm == r.mdgm) ||
            l.decompositions.size() != r.decompositions.size())
            return false;
        for (std::size_t k = 0; k < l.decompositions.size(); ++k) {
            const auto& a = l.decompositions[k];
            const auto& b = r.decompositions[k];
            if (a.dim != b.dim || a.R != b.R || a.S != b.S)
                return false;
        }
        return true;
    }
};

inline ComputeResult assemble(const GradeMap& grades, MetaRankTable table)
{
    ComputeResult out;
    out.grades = grades;
    out.mdgm = mobius_invert(table);
    for (int dim : table.dims())
        out.decompositions.push_back(rank_decomposition(out.mdgm, dim));
    out.mrk = std::move(table);
    return out;
}

namespace detail {

using nlohmann::json;

inline json bars_json(const std::vector<Bar>& bars)
{
    json out = json::array();
    for (const auto& b : bars)
        out.push_back({b.lo, b.hi});
    return out;
}

inline std::vector<Bar> bars_from_json(const json& j)
{
    std::vector<Bar> out;
    for (const auto& b : j)
        out.push_back(Bar{b.at(0).get<int>(), b.at(1).get<int>()});
    std::sort(out.begin(), out.end());
    return out;
}

inline json rects_json(const std::vector<GridRect>& rects)
{
    json out = json::array();
    for (const auto& q : rects)
        out.push_back({q.s, q.t, q.lo, q.hi});
    return out;
}

inline std::vector<GridRect> rects_from_json(const json& j)
{
    std::vector<GridRect> out;
    for (const auto& q : j)
        out.push_back(GridRect{q.at(0).get<int>(), q.at(1).get<int>(), q.at(2).get<int>(), q.at(3).get<int>()});
    return out;
}

} // namespace detail

inline nlohmann::json meta_json(const GradeMap& grades, const std::vector<int>& dims)
{
    return {{"n", grades.size()},
            {"dims", dims},
            {"grade_values_x", grades.xvalues},
            {"grade_values_y", grades.yvalues}};
}

/// Cells with no bars are omitted from "mrk"; zero cells from "mdgm".
inline nlohmann::json to_json(const ComputeResult& r)
{
    using nlohmann::json;
    json out;
    out["meta"] = meta_json(r.grades, r.mrk.dims());
    json mrk = json::array();
    for (int dim : r.mrk.dims())
        for (int t = 1; t <= r.mrk.n(); ++t)
            for (int s = 1; s <= t; ++s) {
                const auto bars = r.mrk.bars(dim, s, t);
                if (!bars.empty())
                    mrk.push_back({{"dim", dim}, {"s", s}, {"t", t}, {"bars", detail::bars_json(bars)}});
            }
    out["mrk"] = std::move(mrk);
    json mdgm = json::array();
    for (int dim : r.mdgm.dims())
        for (const auto& [cell, sb] : r.mdgm.cells(dim))
            mdgm.push_back({{"dim", dim},
                            {"s", cell.first},
                            {"t", cell.second},
                            {"pos", detail::bars_json(sb.positive())},
                            {"neg", detail::bars_json(sb.negative())}});
    out["mdgm"] = std::move(mdgm);
    json dec = json::array();
    for (const auto& d : r.decompositions)
        dec.push_back({{"dim", d.dim}, {"R", detail::rects_json(d.R)}, {"S", detail::rects_json(d.S)}});
    out["rank_decomposition"] = std::move(dec);
    return out;
}

inline ComputeResult from_json(const nlohmann::json& j)
{
    try {
        ComputeResult r;
        const auto& meta = j.at("meta");
        const int n = meta.at("n").get<int>();
        const auto dims = meta.at("dims").get<std::vector<int>>();
        r.grades.xvalues = meta.at("grade_values_x").get<std::vector<double>>();
        r.grades.yvalues = meta.at("grade_values_y").get<std::vector<double>>();
        r.mrk = MetaRankTable(n, dims);
        for (const auto& c : j.at("mrk")) {
            auto& cell = r.mrk.at(c.at("dim").get<int>(), c.at("s").get<int>(), c.at("t").get<int>());
            cell.bars = detail::bars_from_json(c.at("bars"));
            cell.sources.assign(cell.bars.size(), -1);
        }
        r.mdgm = MetaDiagram(n, dims);
        for (const auto& c : j.at("mdgm"))
            r.mdgm.set(c.at("dim").get<int>(), c.at("s").get<int>(), c.at("t").get<int>(),
                       canonicalize(detail::bars_from_json(c.at("pos")), detail::bars_from_json(c.at("neg"))));
        for (const auto& d : j.at("rank_decomposition"))
            r.decompositions.push_back(RankDecomposition{d.at("dim").get<int>(), detail::rects_from_json(d.at("R")),
                                                         detail::rects_from_json(d.at("S"))});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed result document: ") + e.what());
    }
}

inline std::string bar_string(const Bar& b)
{
    return "[" + std::to_string(b.lo) + "," + std::to_string(b.hi) + "]";
}

/// One line per non-empty meta-rank cell and per non-zero meta-diagram cell.
inline std::string to_text(const ComputeResult& r)
{
    std::ostringstream out;
    out << "n " << r.mrk.n() << "\n";
    for (int dim : r.mrk.dims()) {
        out << "# dim " << dim << " meta-rank\n";
        for (int t = 1; t <= r.mrk.n(); ++t)
            for (int s = 1; s <= t; ++s) {
                const auto bars = r.mrk.bars(dim, s, t);
                if (bars.empty())
                    continue;
                out << "mrk [" << s << "," << t << "]:";
                for (const auto& b : bars)
                    out << " " << bar_string(b);
                out << "\n";
            }
        out << "# dim " << dim << " meta-diagram\n";
        for (const auto& [cell, sb] : r.mdgm.cells(dim))
            out << "mdgm [" << cell.first << "," << cell.second << "]: " << to_string(sb) << "\n";
    }
    const auto c = signed_bar_count(r.mdgm);
    out << "signed bars +" << c.positive << " -" << c.negative << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline double infinity_v() { return std::numeric_limits<double>::infinity(); }

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Real grade values of one axis onto [lo, hi] pixels; +infinity lands on
/// a band past the last value.
class AxisScale
{
public:
    AxisScale(const std::vector<double>& values, double lo, double hi, bool flip)
        : lo_(lo), hi_(hi), flip_(flip)
    {
        if (!values.empty()) {
            min_ = *std::min_element(values.begin(), values.end());
            max_ = *std::max_element(values.begin(), values.end());
        }
        if (max_ <= min_)
            max_ = min_ + 1.0;
        // One extra tenth of the range holds infinity.
        span_ = (max_ - min_) * 1.1;
    }

    double operator()(double v) const
    {
        const double f = std::isinf(v) ? 1.0 : (v - min_) / span_;
        return flip_ ? hi_ - f * (hi_ - lo_) : lo_ + f * (hi_ - lo_);
    }

    double min() const { return min_; }
    double max() const { return max_; }

private:
    double lo_, hi_;
    bool flip_;
    double min_ = 0.0, max_ = 1.0, span_ = 1.1;
};

constexpr double canvas = 480.0;
constexpr double margin = 48.0;
constexpr double glyph = 24.0;
constexpr const char* positive_colour = "#d62728";
constexpr const char* negative_colour = "#1f77b4";

inline void svg_open(std::ostringstream& out, const std::string& title)
{
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(canvas) << "\" height=\"" << num(canvas)
        << "\" viewBox=\"0 0 " << num(canvas) << " " << num(canvas) << "\">\n";
    out << "<title>" << title << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << num(canvas) << "\" height=\"" << num(canvas)
        << "\" fill=\"white\"/>\n";
}

inline void svg_axes(std::ostringstream& out, const AxisScale& x, const AxisScale& y, const std::string& xlabel,
                     const std::string& ylabel)
{
    const double x0 = margin, y0 = canvas - margin, x1 = canvas - margin, y1 = margin;
    out << "<g stroke=\"black\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y0)
        << "\"/>\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y1)
        << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<text x=\"" << num(x(x.min())) << "\" y=\"" << num(y0 + 14) << "\">" << num(x.min()) << "</text>\n";
    out << "<text x=\"" << num(x(x.max())) << "\" y=\"" << num(y0 + 14) << "\">" << num(x.max()) << "</text>\n";
    out << "<text x=\"" << num(x(infinity_v())) << "\" y=\"" << num(y0 + 14) << "\">inf</text>\n";
    out << "<text x=\"4\" y=\"" << num(y(y.min())) << "\">" << num(y.min()) << "</text>\n";
    out << "<text x=\"4\" y=\"" << num(y(y.max())) << "\">" << num(y.max()) << "</text>\n";
    out << "<text x=\"4\" y=\"" << num(y(infinity_v())) << "\">inf</text>\n";
    out << "<text x=\"" << num(canvas / 2) << "\" y=\"" << num(canvas - 8) << "\">" << xlabel << "</text>\n";
    out << "<text x=\"4\" y=\"" << num(margin / 2) << "\">" << ylabel << "</text>\n";
    out << "</g>\n";
}

} // namespace detail

/// Diagram of signed diagrams: one glyph per non-zero meta-diagram cell
/// [s, t], placed at (x_s, x_{t+1}) in real x coordinates, holding the
/// cell's signed barcode (positive red, negative blue) drawn over the
/// real y range.
inline std::string render_diagram_svg(const ComputeResult& r, int dim)
{
    using namespace detail;
    std::ostringstream out;
    svg_open(out, "meta-diagram, dim " + std::to_string(dim));
    const AxisScale x(r.grades.xvalues, margin, canvas - margin, false);
    const AxisScale y(r.grades.xvalues, margin, canvas - margin, true);
    const AxisScale bar(r.grades.yvalues, 0.0, glyph, false);
    svg_axes(out, x, y, "s", "t");
    out << "<line x1=\"" << num(x(x.min())) << "\" y1=\"" << num(y(y.min())) << "\" x2=\"" << num(x(x.max()))
        << "\" y2=\"" << num(y(y.max())) << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    if (r.mdgm.has_dim(dim)) {
        for (const auto& [cell, sb] : r.mdgm.cells(dim)) {
            const double cx = x(r.grades.value(Axis::x, cell.first));
            const double cy = y(r.grades.value(Axis::x, cell.second + 1));
            const double gx = cx - glyph / 2, gy = cy - glyph / 2;
            out << "<g class=\"glyph\" data-s=\"" << cell.first << "\" data-t=\"" << cell.second << "\">\n";
            out << "<rect x=\"" << num(gx) << "\" y=\"" << num(gy) << "\" width=\"" << num(glyph)
                << "\" height=\"" << num(glyph) << "\" fill=\"white\" stroke=\"#444444\" stroke-width=\"0.5\"/>\n";
            const auto& terms = sb.terms();
            const double step = glyph / (static_cast<double>(terms.size()) + 1.0);
            int row = 0;
            for (const auto& [b, m] : terms) {
                ++row;
                const double lo = bar(r.grades.value(Axis::y, b.lo));
                const double hi = bar(r.grades.value(Axis::y, b.hi + 1));
                const double width = std::min(std::abs(m), 3);
                const double yy = gy + row * step;
                out << "<line x1=\"" << num(gx + lo) << "\" y1=\"" << num(yy) << "\" x2=\"" << num(gx + hi)
                    << "\" y2=\"" << num(yy) << "\" stroke=\"" << (m > 0 ? positive_colour : negative_colour)
                    << "\" stroke-width=\"" << num(width) << "\"/>\n";
            }
            out << "</g>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

/// Rectangles of the rank decomposition drawn by their diagonals: lower
/// left (x_s, y_lo) to upper right (x_{t+1}, y_{hi+1}); R red, S blue, one
/// stroke per copy up to three.
inline std::string render_signed_barcode_svg(const ComputeResult& r, int dim)
{
    using namespace detail;
    std::ostringstream out;
    svg_open(out, "signed barcode, dim " + std::to_string(dim));
    const AxisScale x(r.grades.xvalues, margin, canvas - margin, false);
    const AxisScale y(r.grades.yvalues, margin, canvas - margin, true);
    svg_axes(out, x, y, "x", "y");
    for (const auto& d : r.decompositions) {
        if (d.dim != dim)
            continue;
        auto draw = [&](const std::vector<GridRect>& rects, const char* colour, const char* cls) {
            // Copies of one rectangle sit next to each other in the list.
            for (std::size_t k = 0; k < rects.size();) {
                std::size_t e = k;
                while (e < rects.size() && rects[e] == rects[k])
                    ++e;
                const auto& q = rects[k];
                const int copies = static_cast<int>(std::min<std::size_t>(e - k, 3));
                const double x0 = x(r.grades.value(Axis::x, q.s)), y0 = y(r.grades.value(Axis::y, q.lo));
                const double x1 = x(r.grades.value(Axis::x, q.t + 1)), y1 = y(r.grades.value(Axis::y, q.hi + 1));
                out << "<g class=\"" << cls << "\" data-multiplicity=\"" << (e - k) << "\">\n";
                for (int c = 0; c < copies; ++c) {
                    const double off = 2.0 * c;
                    out << "<line x1=\"" << num(x0 + off) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1 + off)
                        << "\" y2=\"" << num(y1) << "\" stroke=\"" << colour << "\" stroke-width=\"1\"/>\n";
                }
                out << "</g>\n";
                k = e;
            }
        };
        auto sorted = [](std::vector<GridRect> v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        draw(sorted(d.R), positive_colour, "R");
        draw(sorted(d.S), negative_colour, "S");
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace metarank

#endif
