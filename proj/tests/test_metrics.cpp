#include <gtest/gtest.h>

#include <random>

#include "metarank/bifiltration.hpp"
#include "metarank/generate.hpp"
#include "metarank/metarank.hpp"
#include "metarank/metrics.hpp"
#include "metarank/oracle.hpp"

using namespace metarank;

namespace {

Bifiltration segment()
{
    return load_bifiltration("0 ; 0 0\n1 ; 1 1\n0 1 ; 2 2\n");
}

GradeMap integer_grid(int n, double offset)
{
    GradeMap m;
    for (int i = 0; i < n; ++i) {
        m.xvalues.push_back(i + offset);
        m.yvalues.push_back(i + offset);
    }
    return m;
}

} // namespace

TEST(RealBarcodes, GridBarsMapToHalfOpenIntervals)
{
    const auto b = segment();
    const auto got = to_real_barcode({{1, 3}, {2, 2}, {3, 2}}, b.grades);
    EXPECT_EQ(got, (RealBarcode{{0, infinity}, {1, 2}}));
    // Repeated grade values give zero-length bars, which vanish.
    GradeMap tied{{0, 0, 1}, {0, 0, 1}};
    EXPECT_EQ(to_real_barcode({{1, 1}, {1, 2}}, tied), (RealBarcode{{0, 1}}));
}

TEST(RealBarcodes, TruncateAndShift)
{
    const RealBarcode b{{0, 1}, {0, 3}, {1, infinity}};
    // Truncation drops the first eps of every bar.
    EXPECT_EQ(truncate(b, 1), (RealBarcode{{1, 3}, {2, infinity}}));
    EXPECT_EQ(shift_down(b, 0.5), (RealBarcode{{-0.5, 0.5}, {-0.5, 2.5}, {0.5, infinity}}));
}

TEST(Dominance, GreedyAgreesWithMatching)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 8);
    auto barcode = [&] {
        RealBarcode out;
        for (int k = pick(rng) % 6; k > 0; --k) {
            const int a = pick(rng), b = pick(rng);
            out.push_back({static_cast<double>(std::min(a, b)),
                           a == b ? infinity : static_cast<double>(std::max(a, b))});
        }
        return out;
    };
    int yes = 0;
    for (int it = 0; it < 3000; ++it) {
        const auto a = barcode(), b = barcode();
        const double eps = pick(rng) / 4.0;
        const bool g = dominates(a, b, eps);
        ASSERT_EQ(g, dominates_by_matching(a, b, eps)) << "iteration " << it;
        yes += g;
    }
    EXPECT_GT(yes, 100);
}

TEST(Dominance, ErodedBarsMustFit)
{
    EXPECT_TRUE(eroded_dominates({{0, 4}}, {{1, 3}}, 1));
    EXPECT_FALSE(eroded_dominates({{0, 4}}, {{1, 2.5}}, 1));
    EXPECT_TRUE(eroded_dominates({{0, 2}, {5, 7}}, {}, 1));
    EXPECT_FALSE(eroded_dominates({{0, infinity}}, {{1, 9}}, 1));
    EXPECT_FALSE(eroded_dominates({{0, 4}, {0, 4}}, {{1, 3}}, 1));
}

TEST(RealMetaRankTest, LookupUsesGradeValues)
{
    const auto b = segment();
    const auto t = compute_metarank(b.complex);
    const RealMetaRank m(t, b.grades, 0);
    EXPECT_EQ(m.at(1, infinity), (RealBarcode{{0, infinity}, {1, 2}}));
    EXPECT_EQ(m.at(1, 2), (RealBarcode{{0, infinity}, {1, infinity}}));
    EXPECT_EQ(m.at(0.5, 1.5), (RealBarcode{{0, infinity}}));
    EXPECT_TRUE(m.at(-1, 2).empty());
    EXPECT_FALSE(m.cell(-1, 2).has_value());
    EXPECT_EQ(m.cell(1, infinity), std::make_pair(2, 3));
}

TEST(Probes, GapPointsReportTheCandidateBelow)
{
    const auto p = erosion_probes({0, 1});
    ASSERT_EQ(p.size(), 4u);
    EXPECT_DOUBLE_EQ(p[1].eps, 0.5);
    EXPECT_DOUBLE_EQ(p[1].value, 0.0);
    EXPECT_DOUBLE_EQ(p[3].eps, 1.5);
    EXPECT_DOUBLE_EQ(p[3].value, 1.0);
}

TEST(Candidates, DifferencesAndHalves)
{
    GradeMap a{{0, 2}, {0, 2}}, b{{3}, {3}};
    EXPECT_EQ(erosion_candidates(a, b), (std::vector<double>{0, 0.5, 1, 1.5, 2, 3}));
    EXPECT_DOUBLE_EQ(candidate_resolution(a, b), 1.0);
}

TEST(ErosionMrk, ZeroAgainstItself)
{
    generate::Rng rng(41);
    for (int it = 0; it < 15; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + it);
        const auto t = compute_metarank(b.complex);
        EXPECT_EQ(erosion_mrk(t, b.grades, t, b.grades), 0.0);
        EXPECT_EQ(erosion_mdgm(t, b.grades, t, b.grades).distance, 0.0);
    }
}

TEST(ErosionMrk, DiagonalShiftCostsTheShift)
{
    generate::Rng rng(43);
    for (int it = 0; it < 15; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + it);
        const auto t = compute_metarank(b.complex);
        for (double delta : {1.0, 2.0, 0.75}) {
            const auto s = shift_grades(b, delta, delta);
            const double d = erosion_mrk(t, b.grades, t, s.grades);
            EXPECT_LE(d, delta) << "complex " << it;
            for (int dim : t.dims())
                EXPECT_EQ(erosion_mrk(t, b.grades, t, s.grades, dim),
                          erosion_mrk_linear(t, b.grades, t, s.grades, dim));
        }
    }
}

TEST(ErosionMrk, EmptyVersusRectangle)
{
    // A rectangle of side L against nothing: its bars vanish once eroded by
    // half their length.
    const int n = 14;
    for (int side : {2, 4, 8}) {
        oracle::RectangleSumModule m{n, {{3, 2 + side, 3, 2 + side}}};
        const auto t = oracle::synth_rectangle_table(m);
        const auto zero = oracle::synth_rectangle_table({n, {}});
        const auto g = integer_grid(n, 0);
        EXPECT_DOUBLE_EQ(erosion_mrk(t, g, zero, g, 0), side / 2.0);
    }
}

TEST(ErosionMdgm, ShiftedRectangleExceedsTheShift)
{
    // One rectangle moved one step diagonally. The meta-rank erosion is the
    // shift; the meta-diagram erosion grows with the rectangle.
    const int n = 14;
    oracle::RectangleSumModule m{n, {{3, 10, 3, 10}}};
    const auto t = oracle::synth_rectangle_table(m);
    const auto a = integer_grid(n, 0), b = integer_grid(n, 1);
    EXPECT_DOUBLE_EQ(erosion_mrk(t, a, t, b, 0), 1.0);
    const auto d = erosion_mdgm(t, a, t, b, 0);
    EXPECT_DOUBLE_EQ(d.distance, 3.0);
    EXPECT_DOUBLE_EQ(d.irreg, 0.0);
    EXPECT_DOUBLE_EQ(erosion_mdgm(t, a, t, b, 0, true).distance, 0.0);
}

TEST(ErosionMdgm, PositiveAndNegativeParts)
{
    const auto b = segment();
    const auto t = compute_metarank(b.complex);
    const RealMetaRank r(t, b.grades, 0);
    const RealMetaDiagram d(r, {0, 1, 2});
    // Grid cell [1,1] of the segment is [2,3] - [2,2]; in real terms the
    // cell [1, 2) holds [1, inf) - [1, 2).
    EXPECT_EQ(d.positive(2, 3), (RealBarcode{{1, infinity}}));
    EXPECT_EQ(d.negative(2, 3), (RealBarcode{{1, 2}}));
    EXPECT_EQ(d.positive(1, 4), (RealBarcode{{0, infinity}}));
    EXPECT_EQ(pn(d, d, 2, 3), (RealBarcode{{1, 2}, {1, infinity}}));
}
