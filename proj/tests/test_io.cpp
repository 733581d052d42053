#include <gtest/gtest.h>

#include "metarank/bifiltration.hpp"
#include "metarank/generate.hpp"
#include "metarank/io.hpp"
#include "metarank/metarank.hpp"

using namespace metarank;

namespace {

ComputeResult segment_result()
{
    const auto b = load_bifiltration("0 ; 0 0\n1 ; 1 1\n0 1 ; 2 2\n");
    return assemble(b.grades, compute_metarank(b.complex));
}

} // namespace

TEST(Json, Schema)
{
    const auto j = to_json(segment_result());
    EXPECT_EQ(j["meta"]["n"], 3);
    EXPECT_EQ(j["meta"]["dims"], nlohmann::json::array({0, 1}));
    EXPECT_EQ(j["meta"]["grade_values_x"], nlohmann::json::array({0.0, 1.0, 2.0}));
    ASSERT_TRUE(j.contains("mrk"));
    ASSERT_TRUE(j.contains("mdgm"));
    ASSERT_TRUE(j["rank_decomposition"].is_array());
    EXPECT_EQ(j["rank_decomposition"][0]["dim"], 0);
    EXPECT_EQ(j["rank_decomposition"][0]["S"], nlohmann::json::parse("[[2,2,2,2]]"));
}

TEST(Json, RoundTrip)
{
    generate::Rng rng(5);
    for (int it = 0; it < 10; ++it) {
        const auto b = generate::random_corpus_entry(rng, 5 + 3 * it);
        const auto r = assemble(b.grades, compute_metarank(b.complex));
        const auto text = to_json(r).dump();
        EXPECT_TRUE(from_json(nlohmann::json::parse(text)) == r) << "complex " << it;
    }
}

TEST(Json, MalformedInputThrows)
{
    EXPECT_THROW(from_json(nlohmann::json::parse("{}")), Error);
    EXPECT_THROW(from_json(nlohmann::json::parse(R"({"meta":{"n":"x"}})")), Error);
    auto j = to_json(segment_result());
    j["mrk"] = 5;
    EXPECT_THROW(from_json(j), Error);
}

TEST(Text, ListsCells)
{
    const auto text = to_text(segment_result());
    EXPECT_NE(text.find("mrk [2,3]: [1,3] [2,2]"), std::string::npos);
    EXPECT_NE(text.find("[2,3] - [2,2]"), std::string::npos);
}

TEST(Svg, DiagramGlyphsAndColours)
{
    const auto r = segment_result();
    const auto svg = render_diagram_svg(r, 0);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("#d62728"), std::string::npos);
    EXPECT_NE(svg.find("#1f77b4"), std::string::npos);
    const auto bars = render_signed_barcode_svg(r, 0);
    EXPECT_NE(bars.find("class=\"R\""), std::string::npos);
    EXPECT_NE(bars.find("class=\"S\""), std::string::npos);
}
