#include <gtest/gtest.h>

#include "metarank/bifiltration.hpp"
#include "metarank/generate.hpp"
#include "metarank/metarank.hpp"
#include "metarank/metrics.hpp"
#include "metarank/oracle.hpp"

using namespace metarank;

namespace {

// Two vertices and the edge between them, in general position.
Bifiltration segment()
{
    return load_bifiltration("0 ; 0 0\n1 ; 1 1\n0 1 ; 2 2\n");
}

using Bars = std::vector<Bar>;

} // namespace

TEST(BarTest, EmptyBarsAreEqual)
{
    EXPECT_TRUE(Bar::empty_bar().empty());
    EXPECT_EQ(Bar::empty_bar(), (Bar{5, 2}));
    EXPECT_FALSE((Bar{2, 2}).empty());
    EXPECT_TRUE((Bar{1, 4}).contains(Bar{2, 3}));
    EXPECT_TRUE((Bar{1, 4}).contains(Bar::empty_bar()));
    EXPECT_FALSE((Bar{2, 4}).contains(Bar{1, 3}));
    EXPECT_EQ(intersect(Bar{1, 3}, Bar{2, 5}), (Bar{2, 3}));
    EXPECT_TRUE(intersect(Bar{1, 2}, Bar{3, 5}).empty());
}

TEST(MetaRank, SegmentByHand)
{
    const auto b = segment();
    const auto t = compute_metarank(b.complex);
    ASSERT_EQ(t.n(), 3);
    EXPECT_EQ(t.bars(0, 1, 1), (Bars{{1, 3}}));
    EXPECT_EQ(t.bars(0, 1, 2), (Bars{{1, 3}}));
    EXPECT_EQ(t.bars(0, 2, 2), (Bars{{1, 3}, {2, 3}}));
    EXPECT_EQ(t.bars(0, 1, 3), (Bars{{1, 3}}));
    EXPECT_EQ(t.bars(0, 2, 3), (Bars{{1, 3}, {2, 2}}));
    EXPECT_EQ(t.bars(0, 3, 3), (Bars{{1, 3}, {2, 2}}));
    EXPECT_TRUE(t.bars(1, 1, 3).empty());
    EXPECT_TRUE(t.bars(0, 3, 2).empty());
}

TEST(MetaRank, SquareCycleDiffersAcrossAxes)
{
    const auto b = load_bifiltration("0 ; 0 0\n1 ; 0 0\n2 ; 0 0\n3 ; 0 0\n"
                                     "0 1 ; 0 0\n1 2 ; 0 0\n2 3 ; 0 0\n0 3 ; 0 0\n"
                                     "0 2 ; 1 0\n0 1 2 ; 1 0\n0 2 3 ; 1 0\n"
                                     "1 3 ; 0 2\n0 1 3 ; 0 2\n1 2 3 ; 0 2\n");
    const auto tx = compute_metarank(b.complex, {1});
    const auto v = transpose_axes(b);
    const auto ty = compute_metarank(v.complex, {1});
    const RealMetaRank x(tx, b.grades, 1), y(ty, v.grades, 1);
    EXPECT_EQ(x.at(0, 1), (RealBarcode{{0, 2}}));
    EXPECT_EQ(y.at(0, 1), (RealBarcode{{0, 1}}));
}

TEST(MetaRank, AgreesWithTheOracle)
{
    generate::Rng rng(17);
    for (int it = 0; it < 60; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + it % 25);
        const auto fast = compute_metarank(b.complex, {}, true);
        const auto slow = oracle::mrk_from_rank(oracle::rank_invariant(b.complex));
        ASSERT_TRUE(fast == slow) << "complex " << it;
    }
}

TEST(MetaRank, DimensionSelection)
{
    generate::Rng rng(2);
    const auto b = generate::random_corpus_entry(rng, 20);
    const auto all = compute_metarank(b.complex);
    const auto one = compute_metarank(b.complex, {1, 1});
    EXPECT_EQ(one.dims(), (std::vector<int>{1}));
    EXPECT_FALSE(one.has_dim(0));
    for (int t = 1; t <= b.size(); ++t)
        for (int s = 1; s <= t; ++s)
            EXPECT_EQ(one.bars(1, s, t), all.bars(1, s, t));
    EXPECT_THROW(one.bars(0, 1, b.size()), Error);
}

TEST(MetaRank, DiagonalIsTheColumnBarcode)
{
    generate::Rng rng(12);
    const auto b = generate::random_corpus_entry(rng, 25);
    const auto t = compute_metarank(b.complex);
    const int n = b.size();
    for (int i = 1; i <= n; ++i) {
        // Along the path through column i, positions 1..i sit at height 1
        // and position p in (i, i+n-1] sits at height p-i+1; later
        // positions are outside K_i.
        std::map<int, Bars> want;
        for (const auto& [dim, birth, death] : oracle::path_intervals(b.complex, i)) {
            if (birth > i + n - 1)
                continue;
            const int lo = birth <= i ? 1 : birth - i + 1;
            const int hi = death >= i + n ? n : death - i;
            if (lo <= hi)
                want[dim].push_back(Bar{lo, hi});
        }
        for (int dim : t.dims()) {
            auto& bars = want[dim];
            std::sort(bars.begin(), bars.end());
            EXPECT_EQ(t.bars(dim, i, i), bars) << "dim " << dim << " column " << i;
        }
    }
}

TEST(MetaRank, RowsArriveInOrder)
{
    generate::Rng rng(6);
    const auto b = generate::random_corpus_entry(rng, 15);
    MetaRankSweep sweep(b.complex);
    for (int i = 1; i <= b.size(); ++i) {
        EXPECT_FALSE(sweep.done());
        EXPECT_EQ(static_cast<int>(sweep.next_row().size()), i);
    }
    EXPECT_TRUE(sweep.done());
    EXPECT_THROW(sweep.next_row(), InternalError);
}

TEST(MetaRank, SlotIntersectionMissesAnImageBar)
{
    // Smallest complex found where slot-wise intersection is not exact.
    GradedComplex c({{{2}}, {{1}}, {{0}}, {{3}}, {{0, 2}}, {{1, 3}}, {{0, 1}}, {{1, 2}}},
                    {1, 2, 4, 3, 5, 7, 8, 6}, {4, 1, 2, 7, 5, 8, 3, 6});
    const auto image = compute_metarank(c, {0});
    const auto slot = compute_metarank(c, {0}, false, Method::slot_intersection);
    EXPECT_EQ(image.bars(0, 2, 8), (Bars{{1, 8}, {4, 4}}));
    EXPECT_EQ(slot.bars(0, 2, 8), (Bars{{1, 8}}));
    EXPECT_TRUE(image == oracle::mrk_from_rank(oracle::rank_invariant(c, {0})));
}

TEST(MetaRank, TransposeSwapsAxes)
{
    const auto b = segment();
    const auto t = transpose_axes(b);
    for (int s = 0; s < b.size(); ++s) {
        EXPECT_EQ(t.complex.xgrade(s), b.complex.ygrade(s));
        EXPECT_EQ(t.complex.ygrade(s), b.complex.xgrade(s));
    }
    EXPECT_EQ(t.grades.xvalues, b.grades.yvalues);
}
