#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "metarank/bifiltration.hpp"
#include "metarank/generate.hpp"

using namespace metarank;

namespace {

const char* triangle = R"(# boundary first, then the face
0 ; 0 0
1 ; 1 0
2 ; 0 1
0 1 ; 1 1
0 2 ; 1 1
1 2 ; 2 1
0 1 2 ; 2 2
)";

std::size_t parse_error_line(const std::string& text)
{
    try {
        parse_bifiltration(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(Parse, ReadsSimplicesAndGrades)
{
    const auto raw = parse_bifiltration(triangle);
    ASSERT_EQ(raw.size(), 7u);
    EXPECT_EQ(raw[6].simplex.vertices, (std::vector<Vertex>{0, 1, 2}));
    EXPECT_DOUBLE_EQ(raw[5].x, 2.0);
    EXPECT_DOUBLE_EQ(raw[5].y, 1.0);
}

TEST(Parse, SortsVerticesWithinASimplex)
{
    const auto raw = parse_bifiltration("3 ; 0 0\n1 ; 0 0\n3 1 ; 1 1\n");
    EXPECT_EQ(raw[2].simplex.vertices, (std::vector<Vertex>{1, 3}));
}

TEST(Parse, ReportsTheOffendingLine)
{
    EXPECT_EQ(parse_error_line("0 ; 0 0\n1 0 0\n"), 2u);
    EXPECT_EQ(parse_error_line("0 ; 0 0\n\n# note\nx ; 1 1\n"), 4u);
    EXPECT_EQ(parse_error_line("0 ; 0\n"), 1u);
    EXPECT_EQ(parse_error_line("0 ; 0 nan\n"), 1u);
    EXPECT_EQ(parse_error_line("0 ; 0 inf\n"), 1u);
    EXPECT_EQ(parse_error_line("0 ; 0 0 ; 1\n"), 1u);
    EXPECT_EQ(parse_error_line("0 0 ; 0 0\n"), 1u);
    EXPECT_EQ(parse_error_line(" ; 0 0\n"), 1u);
}

TEST(Parse, RejectsMultiCriticalInput)
{
    EXPECT_EQ(parse_error_line("0 ; 0 0\n1 ; 0 0\n0 ; 1 1\n"), 3u);
    EXPECT_EQ(parse_error_line("0 1 ; 0 0\n1 0 ; 1 1\n"), 2u);
}

TEST(Refine, RejectsOpenOrNonMonotoneInput)
{
    EXPECT_THROW(load_bifiltration("0 ; 0 0\n0 1 ; 1 1\n"), ValidationError);
    EXPECT_THROW(load_bifiltration("0 ; 0 0\n1 ; 2 0\n0 1 ; 1 1\n"), ValidationError);
    EXPECT_NO_THROW(load_bifiltration("0 ; 0 0\n1 ; 1 1\n0 1 ; 1 1\n"));
}

TEST(Refine, GivesDistinctGradesPerAxis)
{
    const auto b = load_bifiltration(triangle);
    ASSERT_EQ(b.size(), 7);
    std::set<int> xs(b.complex.xgrades().begin(), b.complex.xgrades().end());
    std::set<int> ys(b.complex.ygrades().begin(), b.complex.ygrades().end());
    EXPECT_EQ(xs.size(), 7u);
    EXPECT_EQ(ys.size(), 7u);
    EXPECT_EQ(*xs.begin(), 1);
    EXPECT_EQ(*xs.rbegin(), 7);
    EXPECT_EQ(b.grades.xvalues, (std::vector<double>{0, 0, 1, 1, 1, 2, 2}));
    EXPECT_EQ(b.grades.yvalues, (std::vector<double>{0, 0, 1, 1, 1, 1, 2}));
}

TEST(Refine, TiesGoFacesFirstThenInputOrder)
{
    // Vertex 1 and the edge share a grade; the vertex must come first even
    // though it is listed after the edge's other vertex.
    const auto b = load_bifiltration("0 ; 0 0\n1 ; 1 1\n0 1 ; 1 1\n");
    EXPECT_EQ(b.complex.xgrade(0), 1);
    EXPECT_EQ(b.complex.xgrade(1), 2);
    EXPECT_EQ(b.complex.xgrade(2), 3);
    EXPECT_LT(b.complex.ygrade(1), b.complex.ygrade(2));
}

TEST(GradedComplexTest, ValidatesInvariants)
{
    std::vector<Simplex> s{{{0}}, {{1}}, {{0, 1}}};
    EXPECT_NO_THROW(GradedComplex(s, {1, 2, 3}, {2, 1, 3}));
    EXPECT_THROW(GradedComplex(s, {1, 1, 3}, {1, 2, 3}), ValidationError);
    EXPECT_THROW(GradedComplex(s, {1, 3, 2}, {1, 2, 3}), ValidationError);
    EXPECT_THROW(GradedComplex(s, {1, 2, 4}, {1, 2, 3}), ValidationError);
    EXPECT_THROW(GradedComplex({{{0}}, {{0, 1}}}, {1, 2}, {1, 2}), ValidationError);
    EXPECT_THROW(GradedComplex({{{1, 0}}}, {1}, {1}), ValidationError);
}

TEST(GradedComplexTest, LooksUpByGrade)
{
    const auto b = load_bifiltration(triangle);
    const auto& c = b.complex;
    for (int s = 0; s < c.size(); ++s) {
        EXPECT_EQ(c.simplex_at_x(c.xgrade(s)), s);
        EXPECT_EQ(c.simplex_at_y(c.ygrade(s)), s);
        EXPECT_EQ(static_cast<int>(c.facets(s).size()), c.dimension(s) == 0 ? 0 : c.dimension(s) + 1);
    }
    EXPECT_EQ(c.max_dimension(), 2);
    EXPECT_TRUE(c.contains(6, 7, 7));
    EXPECT_FALSE(c.contains(6, 6, 7));
}

TEST(GradeMapTest, IndexPastTheTopIsInfinite)
{
    GradeMap m{{0, 1, 3}, {0, 2, 2}};
    EXPECT_DOUBLE_EQ(m.value(Axis::x, 3), 3.0);
    EXPECT_TRUE(std::isinf(m.value(Axis::x, 4)));
    EXPECT_EQ(m.distinct(Axis::y), (std::vector<double>{0, 2}));
    EXPECT_DOUBLE_EQ(m.irreg(Axis::x), 1.0);
    EXPECT_DOUBLE_EQ(m.irreg(Axis::y), 2.0);
    EXPECT_DOUBLE_EQ(GradeMap::irregularity({5.0}), 0.0);
}

TEST(GradeLookup, FourModes)
{
    GradeMap m{{0, 1, 1, 3}, {0, 1, 1, 3}};
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::less, 1.0), 1);
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::less_equal, 1.0), 3);
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::greater_equal, 1.0), 2);
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::greater, 1.0), 4);
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::less_equal, -1.0), below_grid);
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::greater, 3.0), infinity_index(m));
    EXPECT_EQ(grade_lookup(m, Axis::x, Lookup::greater_equal, 2.0), 4);
}

TEST(Path, PositionsAreDistinctAndContiguous)
{
    generate::Rng rng(3);
    for (int it = 0; it < 20; ++it) {
        const auto b = generate::random_corpus_entry(rng, 6 + it);
        const int n = b.size();
        for (int i = 1; i <= n; ++i) {
            const auto arrivals = filtration_along_path(b.complex, i);
            std::set<int> seen;
            for (const auto& a : arrivals) {
                EXPECT_GE(a.position, 1);
                EXPECT_LE(a.position, 2 * n - 1);
                EXPECT_TRUE(seen.insert(a.position).second);
            }
            // Faces arrive first along any monotone path.
            std::vector<int> pos(n);
            for (const auto& a : arrivals)
                pos[a.simplex] = a.position;
            for (int s = 0; s < n; ++s)
                for (int f : b.complex.facets(s))
                    EXPECT_LT(pos[f], pos[s]);
        }
    }
}

TEST(Path, PositionFormula)
{
    const auto b = load_bifiltration(triangle);
    const auto& c = b.complex;
    const int n = c.size();
    for (int s = 0; s < n; ++s) {
        // Left of the column: along the bottom edge or up the column.
        EXPECT_EQ(path_position(c, s, n), c.ygrade(s) == 1 ? c.xgrade(s) : n + c.ygrade(s) - 1);
        if (c.xgrade(s) > 1)
            EXPECT_EQ(path_position(c, s, 1), c.xgrade(s) + n - 1);
    }
}
