#ifndef METARANK_BENCH_HPP
#define METARANK_BENCH_HPP

#include <chrono>
#include <cmath>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/metarank.hpp"
#include "metarank/signed.hpp"

namespace metarank {

struct BenchRow
{
    int n = 0;
    double seconds = 0.0;        ///< the meta-rank sweep
    double mobius_seconds = 0.0; ///< streaming inversion of its rows
    SignedCount counts;
};

/// Runs the sweep row by row without keeping the table, so large n fits in
/// memory. The two phases are timed apart.
inline BenchRow bench_once(const Bifiltration& b)
{
    using clock = std::chrono::steady_clock;
    BenchRow out;
    out.n = b.size();
    MetaRankSweep sweep(b.complex);
    StreamingMobius mobius(b.size());
    for (int t = 1; t <= b.size(); ++t) {
        const auto t0 = clock::now();
        const auto& row = sweep.next_row();
        const auto t1 = clock::now();
        mobius.feed(row);
        const auto t2 = clock::now();
        out.seconds += std::chrono::duration<double>(t1 - t0).count();
        out.mobius_seconds += std::chrono::duration<double>(t2 - t1).count();
    }
    mobius.finish();
    out.counts = mobius.total();
    return out;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace metarank

#endif
