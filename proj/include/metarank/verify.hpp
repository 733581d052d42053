#ifndef METARANK_VERIFY_HPP
#define METARANK_VERIFY_HPP

#include <functional>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/metarank.hpp"
#include "metarank/oracle.hpp"
#include "metarank/signed.hpp"

namespace metarank::oracle {

struct CheckResult
{
    std::string name;
    bool passed = true;
    std::string first_failure; ///< offending cell or pair, empty on success
};

struct VerifyReport
{
    std::vector<CheckResult> checks;

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.passed)
                return false;
        return true;
    }
};

inline std::string cell_name(int dim, int s, int t)
{
    return "dim " + std::to_string(dim) + " cell [" + std::to_string(s) + "," + std::to_string(t) + "]";
}

inline std::string pair_name(int dim, int a, int b, int c, int d)
{
    return "dim " + std::to_string(dim) + " (" + std::to_string(a) + "," + std::to_string(b) + ")->(" +
           std::to_string(c) + "," + std::to_string(d) + ")";
}

/// First cell where two tables differ as bar multisets; empty if equal.
inline std::string first_table_difference(const MetaRankTable& got, const MetaRankTable& want)
{
    if (got.n() != want.n())
        return "grid size " + std::to_string(got.n()) + " vs " + std::to_string(want.n());
    for (int dim : want.dims()) {
        if (!got.has_dim(dim))
            return "dim " + std::to_string(dim) + " missing";
        for (int t = 1; t <= want.n(); ++t)
            for (int s = 1; s <= t; ++s)
                if (got.bars(dim, s, t) != want.bars(dim, s, t))
                    return cell_name(dim, s, t);
    }
    return {};
}

/// First pair where the table's bar count disagrees with the rank function.
inline std::string first_rank_from_mrk_difference(const MetaRankTable& table, const RankFunction& rk)
{
    const int n = rk.n();
    for (int dim : rk.dims())
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int c = a; c <= n; ++c)
                    for (int d = b; d <= n; ++d)
                        if (rank_from_mrk(table, dim, a, b, c, d) != rk(dim, a, b, c, d))
                            return pair_name(dim, a, b, c, d);
    return {};
}

/// First cell where summing the meta-diagram over supersets misses the
/// table (or goes negative).
inline std::string first_mobius_difference(const MetaRankTable& table, const MetaDiagram& mdgm)
{
    for (int dim : table.dims())
        for (int t = 1; t <= table.n(); ++t)
            for (int s = 1; s <= t; ++s) {
                try {
                    if (mrk_from_mdgm(mdgm, dim, s, t) != table.bars(dim, s, t))
                        return cell_name(dim, s, t);
                } catch (const InternalError&) {
                    return cell_name(dim, s, t) + " (negative multiplicity)";
                }
            }
    return {};
}

/// rank((a,b) -> (c,d)) = #R - #S over rectangles containing both points,
/// for every comparable pair. For each source point the rectangles through
/// it are spread over their target regions with a 2D difference array.
inline std::string first_decomposition_difference(const RankDecomposition& dec, const RankFunction& rk)
{
    const int n = rk.n();
    std::vector<int> grid(static_cast<std::size_t>(n + 2) * (n + 2));
    auto at = [&](int c, int d) -> int& { return grid[static_cast<std::size_t>(c) * (n + 2) + d]; };
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            std::fill(grid.begin(), grid.end(), 0);
            auto spread = [&](const std::vector<GridRect>& rects, int sign) {
                for (const auto& q : rects)
                    if (q.contains(a, b)) {
                        at(a, b) += sign;
                        at(q.t + 1, b) -= sign;
                        at(a, q.hi + 1) -= sign;
                        at(q.t + 1, q.hi + 1) += sign;
                    }
            };
            spread(dec.R, +1);
            spread(dec.S, -1);
            for (int c = 1; c <= n; ++c)
                for (int d = 1; d <= n; ++d)
                    at(c, d) += at(c - 1, d) + at(c, d - 1) - at(c - 1, d - 1);
            for (int c = a; c <= n; ++c)
                for (int d = b; d <= n; ++d)
                    if (at(c, d) != rk(dec.dim, a, b, c, d))
                        return pair_name(dec.dim, a, b, c, d);
        }
    return {};
}

/// The oracle equivalences for one computed table: rank -> meta-rank,
/// meta-rank -> rank, Möbius roundtrip, rank decomposition identity, and
/// monotonicity of the brute-force rank function. With threads > 1 the
/// checks run concurrently; the report order is fixed either way.
inline VerifyReport verify_table(const GradedComplex& complex, const MetaRankTable& table, int threads = 1)
{
    const auto rk = rank_invariant(complex, table.dims());
    const auto mdgm = mobius_invert(table);

    std::vector<std::pair<std::string, std::function<std::string()>>> checks;
    checks.emplace_back("rank monotonicity", [&] { return rank_monotonicity_violation(rk); });
    checks.emplace_back("meta-rank from rank invariant", [&]() -> std::string {
        try {
            return first_table_difference(table, mrk_from_rank(rk));
        } catch (const InternalError& e) {
            return e.what();
        }
    });
    checks.emplace_back("rank invariant from meta-rank", [&] { return first_rank_from_mrk_difference(table, rk); });
    checks.emplace_back("Möbius roundtrip", [&] { return first_mobius_difference(table, mdgm); });
    checks.emplace_back("rank decomposition identity", [&] {
        std::string failure;
        for (int dim : table.dims())
            if (failure.empty())
                failure = first_decomposition_difference(rank_decomposition(mdgm, dim), rk);
        return failure;
    });

    std::vector<std::string> failures(checks.size());
    if (threads > 1) {
        std::vector<std::future<std::string>> jobs;
        for (auto& c : checks)
            jobs.push_back(std::async(std::launch::async, c.second));
        for (std::size_t k = 0; k < jobs.size(); ++k)
            failures[k] = jobs[k].get();
    } else {
        for (std::size_t k = 0; k < checks.size(); ++k)
            failures[k] = checks[k].second();
    }

    VerifyReport report;
    for (std::size_t k = 0; k < checks.size(); ++k)
        report.checks.push_back({checks[k].first, failures[k].empty(), failures[k]});
    return report;
}

} // namespace metarank::oracle

#endif
