// metarank: compute, verify, compare and draw meta-ranks of bifiltrations.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "metarank/bench.hpp"
#include "metarank/bifiltration.hpp"
#include "metarank/error.hpp"
#include "metarank/generate.hpp"
#include "metarank/io.hpp"
#include "metarank/metarank.hpp"
#include "metarank/metrics.hpp"
#include "metarank/signed.hpp"
#include "metarank/verify.hpp"

namespace {

using namespace metarank;

constexpr int exit_input = 1;
constexpr int exit_internal = 2;
constexpr int exit_mismatch = 3;

struct Config
{
    std::string input;
    std::string input_b;
    std::vector<int> dims;
    std::string axis = "x";
    std::string format = "json";
    std::string out;
    bool stream = false;
    int oracle_cap = oracle::default_size_cap;
    bool strict_s_endpoint = false;
    int threads = 1;
    std::uint64_t seed = 1;
    std::string kind = "mrk";
    std::string target = "diagram";
    std::string method = "image";
    bool check = false;
    std::vector<int> corrupt_cell;
    std::vector<int> sizes{100, 200, 400, 800};
    int repeat = 1;
};

std::shared_ptr<spdlog::logger> logger()
{
    static auto log = [] {
        auto l = spdlog::stderr_color_mt("metarank");
        l->set_pattern("%^%l%$: %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("METARANK_LOG"))
            l->set_level(spdlog::level::from_str(env));
        return l;
    }();
    return log;
}

Bifiltration read_input(const std::string& path, const std::string& axis)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto b = load_bifiltration(buf.str());
    logger()->info("{}: {} simplices", path, b.size());
    return axis == "y" ? transpose_axes(b) : b;
}

void write_output(const Config& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out)
        throw Error("cannot write " + cfg.out);
    out << text;
}

Method method_of(const Config& cfg)
{
    return cfg.method == "slot" ? Method::slot_intersection : Method::image_sweep;
}

int cmd_compute(const Config& cfg)
{
    const auto b = read_input(cfg.input, cfg.axis);
    if (cfg.stream) {
        // One JSON object per line: meta, then a row per column, then the
        // signed bar counts of the meta-diagram.
        std::ostringstream out;
        auto dims = cfg.dims.empty() ? default_dims(b.complex) : cfg.dims;
        out << nlohmann::json{{"meta", meta_json(b.grades, dims)}}.dump() << "\n";
        MetaRankSweep sweep(b.complex, cfg.check, method_of(cfg));
        StreamingMobius mobius(b.size());
        for (int t = 1; t <= b.size(); ++t) {
            const auto& row = sweep.next_row();
            nlohmann::json cells = nlohmann::json::array();
            for (int s = 1; s <= t; ++s)
                for (const auto& e : row[s - 1])
                    if (!e.bar.empty() && std::find(dims.begin(), dims.end(), e.dim) != dims.end())
                        cells.push_back({{"dim", e.dim}, {"s", s}, {"bar", {e.bar.lo, e.bar.hi}}});
            out << nlohmann::json{{"t", t}, {"mrk", cells}}.dump() << "\n";
            mobius.feed(row);
        }
        mobius.finish();
        nlohmann::json counts = nlohmann::json::array();
        for (const auto& [dim, c] : mobius.counts())
            if (std::find(dims.begin(), dims.end(), dim) != dims.end())
                counts.push_back({{"dim", dim}, {"positive", c.positive}, {"negative", c.negative}});
        out << nlohmann::json{{"signed_bar_count", counts}}.dump() << "\n";
        write_output(cfg, out.str());
        return 0;
    }
    const auto result = assemble(b.grades, compute_metarank(b.complex, cfg.dims, cfg.check, method_of(cfg)));
    if (cfg.format == "text")
        write_output(cfg, to_text(result));
    else
        write_output(cfg, to_json(result).dump(2) + "\n");
    return 0;
}

int cmd_verify(const Config& cfg)
{
    const auto b = read_input(cfg.input, cfg.axis);
    if (b.size() > cfg.oracle_cap) {
        std::cerr << "complex has " << b.size() << " simplices, over the oracle cap of " << cfg.oracle_cap
                  << " (raise --oracle-cap to force)\n";
        return exit_input;
    }
    auto table = compute_metarank(b.complex, cfg.dims, true, method_of(cfg));
    if (cfg.corrupt_cell.size() == 3) {
        const int dim = cfg.corrupt_cell[0], s = cfg.corrupt_cell[1], t = cfg.corrupt_cell[2];
        table.at(dim, s, t).bars.push_back(Bar{1, b.size()});
        table.at(dim, s, t).sources.push_back(-1);
        logger()->warn("corrupted cell dim {} [{},{}]", dim, s, t);
    }
    const auto report = oracle::verify_table(b.complex, table, cfg.threads);
    for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed)
            std::cout << ": first mismatch at " << c.first_failure;
        std::cout << "\n";
    }
    return report.passed() ? 0 : exit_mismatch;
}

std::string real_string(double v)
{
    if (std::isinf(v))
        return "inf";
    std::ostringstream o;
    o << v;
    return o.str();
}

int cmd_distance(const Config& cfg)
{
    const auto a = read_input(cfg.input, cfg.axis);
    const auto b = read_input(cfg.input_b, cfg.axis);
    const auto ta = compute_metarank(a.complex, cfg.dims);
    const auto tb = compute_metarank(b.complex, cfg.dims);
    auto dims = common_dims(ta, tb);

    // One work item per dimension; results are combined in dimension order.
    std::vector<std::future<MdgmDistance>> jobs;
    std::vector<MdgmDistance> results;
    auto run = [&](int dim) {
        if (cfg.kind == "mdgm")
            return erosion_mdgm(ta, a.grades, tb, b.grades, dim, cfg.strict_s_endpoint);
        MdgmDistance d;
        d.distance = erosion_mrk(ta, a.grades, tb, b.grades, dim);
        return d;
    };
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (cfg.threads > 1)
            jobs.push_back(std::async(std::launch::async, run, dims[k]));
        else
            results.push_back(run(dims[k]));
        if (static_cast<int>(jobs.size()) >= cfg.threads || k + 1 == dims.size()) {
            for (auto& j : jobs)
                results.push_back(j.get());
            jobs.clear();
        }
    }
    double distance = 0.0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        std::cout << "dim " << dims[k] << " distance " << real_string(results[k].distance) << "\n";
        distance = std::max(distance, results[k].distance);
    }
    std::cout << "distance " << real_string(distance) << "\n";
    std::cout << "resolution " << real_string(candidate_resolution(a.grades, b.grades)) << "\n";
    std::cout << "irreg_x " << real_string(a.grades.irreg(Axis::x)) << " " << real_string(b.grades.irreg(Axis::x))
              << "\n";
    std::cout << "irreg_y " << real_string(a.grades.irreg(Axis::y)) << " " << real_string(b.grades.irreg(Axis::y))
              << "\n";
    if (cfg.kind == "mdgm" && !results.empty())
        std::cout << "irreg_common_grid " << real_string(results.front().irreg) << "\n";
    return 0;
}

int cmd_render(const Config& cfg)
{
    const auto b = read_input(cfg.input, cfg.axis);
    const auto result = assemble(b.grades, compute_metarank(b.complex, cfg.dims));
    const int dim = cfg.dims.empty() ? 0 : cfg.dims.front();
    if (cfg.target == "signed-barcode")
        write_output(cfg, render_signed_barcode_svg(result, dim));
    else
        write_output(cfg, render_diagram_svg(result, dim));
    return 0;
}

int cmd_bench(const Config& cfg)
{
    std::ostringstream out;
    out << "n,seconds,mobius_seconds,positive,negative\n";
    generate::Rng rng(cfg.seed);
    for (int n : cfg.sizes) {
        const auto b = generate::grid_bifiltration(rng, n);
        for (int r = 0; r < cfg.repeat; ++r) {
            const auto row = bench_once(b);
            out << row.n << "," << row.seconds << "," << row.mobius_seconds << "," << row.counts.positive << ","
                << row.counts.negative << "\n";
            logger()->info("n={} sweep {:.3f}s", n, row.seconds);
        }
    }
    write_output(cfg, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    Config cfg;
    CLI::App app{"Meta-rank, meta-diagram and rank decomposition of simplex-wise bifiltrations"};
    app.require_subcommand(1);

    auto input = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "bifiltration file")->required()->check(CLI::ExistingFile);
    };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--dim", cfg.dims, "homology dimensions (default: all)");
        sub->add_option("--axis", cfg.axis, "slice direction")->check(CLI::IsMember({"x", "y"}));
        sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto method = [&](CLI::App* sub) {
        sub->add_option("--method", cfg.method, "image (exact) or slot (slot-aligned intersection)")
            ->check(CLI::IsMember({"image", "slot"}));
        sub->add_flag("--check", cfg.check, "assert D = RU and endpoint monotonicity after every square");
    };

    auto* compute = app.add_subcommand("compute", "meta-rank, meta-diagram and rank decomposition");
    input(compute);
    common(compute);
    method(compute);
    compute->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));
    compute->add_option("--out", cfg.out, "output file (default stdout)");
    compute->add_flag("--stream", cfg.stream, "emit rows as JSON lines without keeping the table");

    auto* verify = app.add_subcommand("verify", "check against the brute-force oracle");
    input(verify);
    common(verify);
    method(verify);
    verify->add_option("--oracle-cap", cfg.oracle_cap, "largest complex the oracle accepts");
    verify->add_option("--corrupt-cell", cfg.corrupt_cell, "DIM S T: add a bogus bar before checking")
        ->expected(3);

    auto* distance = app.add_subcommand("distance", "erosion distance between two inputs");
    input(distance);
    distance->add_option("--input-b", cfg.input_b, "second bifiltration")->required()->check(CLI::ExistingFile);
    common(distance);
    distance->add_option("--kind", cfg.kind)->check(CLI::IsMember({"mrk", "mdgm"}));
    distance->add_flag("--strict-s-endpoint", cfg.strict_s_endpoint,
                       "mdgm: erode cells to [S<=(s-e), S>=(s+e)) instead of [S<=(s-e), S>=(t+e))");

    auto* render = app.add_subcommand("render", "SVG drawing");
    input(render);
    common(render);
    render->add_option("--target", cfg.target)->check(CLI::IsMember({"diagram", "signed-barcode"}));
    render->add_option("--format", cfg.format)->check(CLI::IsMember({"svg"}));
    render->add_option("--out", cfg.out, "output file (default stdout)");

    auto* bench = app.add_subcommand("bench", "time the sweep on triangulated grids (CSV)");
    bench->add_option("--sizes", cfg.sizes, "values of n")->delimiter(',');
    bench->add_option("--seed", cfg.seed);
    bench->add_option("--repeat", cfg.repeat)->check(CLI::PositiveNumber);
    bench->add_option("--out", cfg.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input;
    }

    try {
        if (*compute)
            return cmd_compute(cfg);
        if (*verify)
            return cmd_verify(cfg);
        if (*distance)
            return cmd_distance(cfg);
        if (*render)
            return cmd_render(cfg);
        return cmd_bench(cfg);
    } catch (const InternalError& e) {
        logger()->critical("internal error: {}", e.what());
        return exit_internal;
    } catch (const Error& e) {
        logger()->error("{}", e.what());
        return exit_input;
    }
}
