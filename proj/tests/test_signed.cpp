#include <gtest/gtest.h>

#include <random>

#include "metarank/generate.hpp"
#include "metarank/metarank.hpp"
#include "metarank/oracle.hpp"
#include "metarank/signed.hpp"

using namespace metarank;

using Bars = std::vector<Bar>;

TEST(SignedBarcodeTest, CanonicalFormCancelsCommonBars)
{
    const auto sb = canonicalize({{0, 4}, {1, 3}, {2, 4}}, {{1, 3}, {3, 4}});
    EXPECT_EQ(sb.positive(), (Bars{{0, 4}, {2, 4}}));
    EXPECT_EQ(sb.negative(), (Bars{{3, 4}}));
    EXPECT_EQ(to_string(sb), "[0,4] + [2,4] - [3,4]");
}

TEST(SignedBarcodeTest, MultiplicitiesAndEmptyBars)
{
    SignedBarcode sb;
    sb.add(Bar{1, 2}, 2);
    sb.add(Bar{1, 2}, -2);
    EXPECT_TRUE(sb.empty());
    sb.add(Bar::empty_bar(), 3);
    EXPECT_TRUE(sb.empty());
    sb.add(Bar{2, 5}, -3);
    EXPECT_EQ(sb.multiplicity(Bar{2, 5}), -3);
    EXPECT_EQ(sb.negative_count(), 3);
    EXPECT_EQ(sb.positive_count(), 0);
    EXPECT_EQ(sb.negative(), (Bars{{2, 5}, {2, 5}, {2, 5}}));
    EXPECT_EQ(to_string(SignedBarcode{}), "0");
}

TEST(Mobius, SegmentByHand)
{
    // Table of two vertices joined by an edge, worked out by hand.
    MetaRankTable t(3, {0});
    t.at(0, 1, 1).bars = {{1, 3}};
    t.at(0, 1, 2).bars = {{1, 3}};
    t.at(0, 2, 2).bars = {{1, 3}, {2, 3}};
    t.at(0, 1, 3).bars = {{1, 3}};
    t.at(0, 2, 3).bars = {{1, 3}, {2, 2}};
    t.at(0, 3, 3).bars = {{1, 3}, {2, 2}};
    const auto m = mobius_invert(t);
    EXPECT_TRUE(m.at(0, 1, 1).empty());
    EXPECT_TRUE(m.at(0, 1, 2).empty());
    EXPECT_TRUE(m.at(0, 3, 3).empty());
    EXPECT_EQ(to_string(m.at(0, 1, 3)), "[1,3]");
    EXPECT_EQ(to_string(m.at(0, 2, 2)), "[2,3] - [2,2]");
    EXPECT_EQ(to_string(m.at(0, 2, 3)), "[2,2]");

    const auto dec = rank_decomposition(m, 0);
    EXPECT_EQ(dec.R.size(), 3u);
    ASSERT_EQ(dec.S.size(), 1u);
    EXPECT_EQ(dec.S[0], (GridRect{2, 2, 2, 2}));
    EXPECT_EQ(dec.rank(2, 2, 2, 2), 2);
    EXPECT_EQ(dec.rank(2, 2, 3, 3), 1);
    EXPECT_EQ(dec.rank(2, 2, 2, 3), 2);
    EXPECT_EQ(dec.rank(1, 1, 3, 3), 1);

    const auto c = signed_bar_count(m);
    EXPECT_EQ(c.positive, 3);
    EXPECT_EQ(c.negative, 1);
}

TEST(Mobius, CellCountMatchesTheCell)
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pick(1, 6);
    auto bars = [&] {
        Bars out;
        for (int k = pick(rng) % 4; k > 0; --k) {
            int a = pick(rng), b = pick(rng);
            out.push_back(Bar{std::min(a, b), std::max(a, b)});
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    for (int it = 0; it < 200; ++it) {
        const auto a = bars(), b = bars(), c = bars(), d = bars();
        const auto cell = mobius_cell(a, b, c, d);
        const auto [pos, neg] = mobius_cell_count(a, b, c, d);
        EXPECT_EQ(pos, cell.positive_count());
        EXPECT_EQ(neg, cell.negative_count());
    }
}

TEST(Mobius, RoundTripOnRandomComplexes)
{
    generate::Rng rng(31);
    for (int it = 0; it < 40; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + it % 30);
        const auto t = compute_metarank(b.complex);
        const auto m = mobius_invert(t);
        EXPECT_TRUE(mrk_table_from_mdgm(m) == t) << "complex " << it;
    }
}

TEST(Mobius, NegativeReconstructionThrows)
{
    MetaDiagram m(2, {0});
    SignedBarcode neg;
    neg.add(Bar{1, 2}, -1);
    m.set(0, 1, 2, neg);
    EXPECT_THROW(mrk_from_mdgm(m, 0, 1, 2), InternalError);
}

TEST(Mobius, RectanglesComeBackWithNoNegativePart)
{
    std::mt19937_64 rng(44);
    for (int it = 0; it < 50; ++it) {
        const int n = 2 + static_cast<int>(rng() % 11);
        std::uniform_int_distribution<int> pick(1, n);
        oracle::RectangleSumModule mod{n, {}};
        for (int k = static_cast<int>(rng() % 5); k > 0; --k) {
            int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
            mod.rectangles.push_back({std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)});
        }
        const auto dec = rank_decomposition(mobius_invert(oracle::synth_rectangle_table(mod)), 0);
        EXPECT_TRUE(dec.S.empty());
        std::vector<GridRect> want;
        for (const auto& r : mod.rectangles)
            want.push_back({r.s, r.s2, r.t, r.t2});
        auto got = dec.R;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        EXPECT_EQ(got, want);
    }
}

TEST(StreamingMobiusTest, CountsMatchTheFullInversion)
{
    generate::Rng rng(13);
    for (int it = 0; it < 20; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + it);
        const auto full = signed_bar_count(mobius_invert(compute_metarank(b.complex)));
        MetaRankSweep sweep(b.complex);
        StreamingMobius s(b.size());
        for (int i = 1; i <= b.size(); ++i)
            s.feed(sweep.next_row());
        s.finish();
        EXPECT_EQ(s.total().positive, full.positive);
        EXPECT_EQ(s.total().negative, full.negative);
    }
}
