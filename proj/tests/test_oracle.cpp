#include <gtest/gtest.h>

#include "metarank/bifiltration.hpp"
#include "metarank/generate.hpp"
#include "metarank/metarank.hpp"
#include "metarank/oracle.hpp"
#include "metarank/verify.hpp"

using namespace metarank;

namespace {

Bifiltration segment()
{
    return load_bifiltration("0 ; 0 0\n1 ; 1 1\n0 1 ; 2 2\n");
}

} // namespace

TEST(RankInvariant, SegmentByHand)
{
    const auto rk = oracle::rank_invariant(segment().complex);
    // Vertex 0 lives everywhere; vertex 1 from (2,2) until the edge at (3,3).
    EXPECT_EQ(rk(0, 1, 1, 3, 3), 1);
    EXPECT_EQ(rk(0, 2, 2, 2, 2), 2);
    EXPECT_EQ(rk(0, 2, 2, 3, 2), 2);
    EXPECT_EQ(rk(0, 2, 2, 3, 3), 1);
    EXPECT_EQ(rk(0, 1, 3, 1, 3), 1);
    EXPECT_EQ(rk(0, 3, 1, 3, 1), 1);
    EXPECT_EQ(rk(1, 3, 3, 3, 3), 0);
    EXPECT_TRUE(oracle::rank_monotonicity_violation(rk).empty());
}

TEST(RankInvariant, MonotonicityCheckFindsAViolation)
{
    oracle::RankFunction rk(2, {0});
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int c = a; c <= 2; ++c)
                for (int d = b; d <= 2; ++d)
                    rk.set(0, a, b, c, d, 1);
    EXPECT_TRUE(oracle::rank_monotonicity_violation(rk).empty());
    rk.set(0, 1, 1, 2, 2, 2);
    EXPECT_FALSE(oracle::rank_monotonicity_violation(rk).empty());
}

TEST(RankInvariant, MetaRankRoundTrip)
{
    generate::Rng rng(3);
    for (int it = 0; it < 20; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + it);
        const auto rk = oracle::rank_invariant(b.complex);
        const auto t = oracle::mrk_from_rank(rk);
        const int n = b.size();
        for (int dim : rk.dims())
            for (int a = 1; a <= n; ++a)
                for (int y = 1; y <= n; ++y)
                    for (int c = a; c <= n; ++c)
                        for (int y2 = y; y2 <= n; ++y2)
                            ASSERT_EQ(oracle::rank_from_mrk(t, dim, a, y, c, y2), rk(dim, a, y, c, y2));
    }
}

TEST(RankInvariant, RealQueriesSnapToTheGrid)
{
    const auto b = segment();
    const auto t = compute_metarank(b.complex);
    // Grid values are 0, 1, 2 on both axes.
    EXPECT_EQ(oracle::rank_from_mrk_real(t, b.grades, 0, 1.5, 1.5, 1.7, 1.9), 2);
    EXPECT_EQ(oracle::rank_from_mrk_real(t, b.grades, 0, 1.0, 1.0, 2.0, 2.0), 1);
    EXPECT_EQ(oracle::rank_from_mrk_real(t, b.grades, 0, -1.0, 0.0, 5.0, 5.0), 0);
}

TEST(SynthRectangles, ClosedForm)
{
    oracle::RectangleSumModule m{5, {{1, 3, 2, 4}, {2, 5, 1, 1}}};
    EXPECT_EQ(oracle::synth_rectangle_mrk(m, 1, 3), (std::vector<Bar>{{2, 4}}));
    EXPECT_EQ(oracle::synth_rectangle_mrk(m, 2, 3), (std::vector<Bar>{{1, 1}, {2, 4}}));
    EXPECT_EQ(oracle::synth_rectangle_mrk(m, 2, 5), (std::vector<Bar>{{1, 1}}));
    EXPECT_TRUE(oracle::synth_rectangle_mrk(m, 1, 4).empty());
}

TEST(DisjointUnionTest, TablesAdd)
{
    generate::Rng rng(19);
    for (int it = 0; it < 15; ++it) {
        const auto A = generate::random_corpus_entry(rng, 5 + it % 10);
        const auto B = generate::random_corpus_entry(rng, 5 + (it * 7) % 10);
        const auto u = oracle::disjoint_union(A, B);
        const auto tu = compute_metarank(u.bifiltration.complex);
        const auto ta = compute_metarank(A.complex);
        const auto tb = compute_metarank(B.complex);
        const int n = u.bifiltration.size();
        for (int dim : tu.dims())
            for (int i = 1; i <= n; ++i)
                for (int k = 1; k <= i; ++k) {
                    auto want = oracle::embedded_cell(ta, u.left, n, dim, k, i);
                    const auto right = oracle::embedded_cell(tb, u.right, n, dim, k, i);
                    want.insert(want.end(), right.begin(), right.end());
                    want.erase(std::remove_if(want.begin(), want.end(), [](const Bar& b) { return b.empty(); }),
                               want.end());
                    std::sort(want.begin(), want.end());
                    ASSERT_EQ(tu.bars(dim, k, i), want) << "pair " << it << " dim " << dim;
                }
    }
}

TEST(Verify, PassesOnCorrectTables)
{
    generate::Rng rng(23);
    for (int it = 0; it < 10; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + 2 * it);
        const auto report = oracle::verify_table(b.complex, compute_metarank(b.complex), it % 2 ? 3 : 1);
        ASSERT_EQ(report.checks.size(), 5u);
        for (const auto& c : report.checks)
            EXPECT_TRUE(c.passed) << c.name << ": " << c.first_failure;
    }
}

TEST(Verify, NamesTheCorruptedCell)
{
    const auto b = segment();
    auto t = compute_metarank(b.complex);
    t.at(0, 2, 3).bars.push_back(Bar{1, 3});
    const auto report = oracle::verify_table(b.complex, t);
    EXPECT_FALSE(report.passed());
    EXPECT_EQ(report.checks[1].first_failure, "dim 0 cell [2,3]");
    EXPECT_TRUE(report.checks[0].passed);
}
