#ifndef METARANK_GENERATE_HPP
#define METARANK_GENERATE_HPP

// Seeded random bifiltrations for tests, the acceptance corpus and benches.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "metarank/bifiltration.hpp"

namespace metarank::generate {

using Rng = std::mt19937_64;

/// Clique complex of G(v, p), up to max_dim, listed by dimension.
inline std::vector<Simplex> random_flag_complex(Rng& rng, int vertices, double edge_prob, int max_dim)
{
    std::bernoulli_distribution coin(edge_prob);
    std::vector<std::vector<char>> adj(vertices, std::vector<char>(vertices, 0));
    for (int u = 0; u < vertices; ++u)
        for (int v = u + 1; v < vertices; ++v)
            adj[u][v] = adj[v][u] = coin(rng);

    std::vector<Simplex> out;
    std::vector<std::vector<Vertex>> layer;
    for (int v = 0; v < vertices; ++v)
        layer.push_back({static_cast<Vertex>(v)});
    for (int dim = 0; dim <= max_dim && !layer.empty(); ++dim) {
        std::vector<std::vector<Vertex>> next;
        for (const auto& s : layer) {
            out.push_back(Simplex{s});
            for (int w = static_cast<int>(s.back()) + 1; w < vertices; ++w) {
                bool ok = true;
                for (Vertex u : s)
                    ok = ok && adj[u][w];
                if (ok) {
                    auto t = s;
                    t.push_back(static_cast<Vertex>(w));
                    next.push_back(std::move(t));
                }
            }
        }
        layer = std::move(next);
    }
    return out;
}

/// Triangles glued one at a time along an existing edge, either to a fresh
/// vertex or to an existing one. Closed under faces.
inline std::vector<Simplex> random_shelling(Rng& rng, int triangles)
{
    std::set<std::vector<Vertex>> all;
    std::vector<std::pair<Vertex, Vertex>> edges;
    Vertex next = 0;
    auto add = [&](std::vector<Vertex> s) {
        std::sort(s.begin(), s.end());
        if (all.insert(s).second && s.size() == 2)
            edges.emplace_back(s[0], s[1]);
    };
    auto add_triangle = [&](Vertex a, Vertex b, Vertex c) {
        add({a});
        add({b});
        add({c});
        add({a, b});
        add({a, c});
        add({b, c});
        add({a, b, c});
    };
    add_triangle(0, 1, 2);
    next = 3;
    std::bernoulli_distribution fresh(0.7);
    for (int t = 1; t < triangles; ++t) {
        const auto [u, v] = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
        Vertex w = next;
        if (!fresh(rng) && next > 3) {
            w = static_cast<Vertex>(std::uniform_int_distribution<Vertex>(0, next - 1)(rng));
            std::vector<Vertex> tri{u, v, w};
            std::sort(tri.begin(), tri.end());
            if (w == u || w == v || all.count(tri))
                w = next;
        }
        if (w == next)
            ++next;
        add_triangle(u, v, w);
    }
    std::vector<Simplex> out;
    for (const auto& s : all)
        out.push_back(Simplex{s});
    std::stable_sort(out.begin(), out.end(),
                     [](const Simplex& a, const Simplex& b) { return a.dimension() < b.dimension(); });
    return out;
}

/// Facet ids of each simplex within a closed list.
inline std::vector<std::vector<int>> facet_ids(const std::vector<Simplex>& simplices)
{
    std::map<std::vector<Vertex>, int> index;
    for (std::size_t s = 0; s < simplices.size(); ++s)
        index.emplace(simplices[s].vertices, static_cast<int>(s));
    std::vector<std::vector<int>> out(simplices.size());
    for (std::size_t s = 0; s < simplices.size(); ++s)
        for (const auto& f : simplices[s].facets())
            out[s].push_back(index.at(f.vertices));
    return out;
}

/// Uniformly chosen available simplex at each step: a random linear
/// extension of the face poset.
inline std::vector<int> random_linear_extension(Rng& rng, const std::vector<Simplex>& simplices)
{
    const auto facets = facet_ids(simplices);
    const int n = static_cast<int>(simplices.size());
    std::vector<std::vector<int>> cofaces(n);
    std::vector<int> missing(n, 0);
    for (int s = 0; s < n; ++s) {
        missing[s] = static_cast<int>(facets[s].size());
        for (int f : facets[s])
            cofaces[f].push_back(s);
    }
    std::vector<int> ready;
    for (int s = 0; s < n; ++s)
        if (missing[s] == 0)
            ready.push_back(s);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng);
        const int s = ready[k];
        ready[k] = ready.back();
        ready.pop_back();
        order.push_back(s);
        for (int c : cofaces[s])
            if (--missing[c] == 0)
                ready.push_back(c);
    }
    return order;
}

/// A random subcomplex with exactly n simplices (or all of them if fewer).
inline std::vector<Simplex> random_subcomplex(Rng& rng, const std::vector<Simplex>& simplices, int n)
{
    auto order = random_linear_extension(rng, simplices);
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(n)));
    std::vector<Simplex> out;
    for (int s : order)
        out.push_back(simplices[s]);
    return out;
}

/// Bigrades from two independent linear extensions. With bucket > 1 the
/// real grade is floor(position / bucket), so ties appear.
inline Bifiltration random_bifiltration(Rng& rng, const std::vector<Simplex>& simplices, int bucket = 1)
{
    const auto ox = random_linear_extension(rng, simplices);
    const auto oy = random_linear_extension(rng, simplices);
    std::vector<RawSimplex> raw(simplices.size());
    for (std::size_t p = 0; p < simplices.size(); ++p) {
        raw[ox[p]].simplex = simplices[ox[p]];
        raw[ox[p]].x = static_cast<double>(static_cast<int>(p) / bucket);
        raw[oy[p]].y = static_cast<double>(static_cast<int>(p) / bucket);
    }
    return refine_to_simplexwise(raw);
}

/// Lower-star bigrades: each simplex takes the max of its vertex values.
inline Bifiltration lower_star(const std::vector<Simplex>& simplices, const std::vector<double>& fx,
                               const std::vector<double>& fy)
{
    std::vector<RawSimplex> raw;
    raw.reserve(simplices.size());
    for (const auto& s : simplices) {
        RawSimplex r{s, -INFINITY, -INFINITY};
        for (Vertex v : s.vertices) {
            r.x = std::max(r.x, fx[v]);
            r.y = std::max(r.y, fy[v]);
        }
        raw.push_back(std::move(r));
    }
    return refine_to_simplexwise(raw);
}

/// The first n simplices of a triangulated k x k vertex grid, k as small as
/// possible, listed so that every prefix is closed.
inline std::vector<Simplex> triangulated_grid(int n)
{
    int k = 2;
    while (3 * (k - 1) * (k - 1) + 2 * (k - 1) + 1 + (k - 1) * (k - 1) < n)
        ++k;
    std::vector<Simplex> all;
    auto id = [k](int r, int c) { return static_cast<Vertex>(r * k + c); };
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            all.push_back(Simplex{{id(r, c)}});
            if (c > 0)
                all.push_back(Simplex{{id(r, c - 1), id(r, c)}});
            if (r > 0)
                all.push_back(Simplex{{id(r - 1, c), id(r, c)}});
            if (r > 0 && c > 0) {
                all.push_back(Simplex{{id(r - 1, c - 1), id(r, c)}});
                all.push_back(Simplex{{id(r - 1, c - 1), id(r - 1, c), id(r, c)}});
                all.push_back(Simplex{{id(r - 1, c - 1), id(r, c - 1), id(r, c)}});
            }
        }
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(n)));
    return all;
}

/// Grid complex with n simplices and lower-star grades from uniform random
/// vertex functions rounded to `levels` values per axis (ties when small).
inline Bifiltration grid_bifiltration(Rng& rng, int n, int levels = 1 << 20)
{
    auto simplices = triangulated_grid(n);
    Vertex vmax = 0;
    for (const auto& s : simplices)
        vmax = std::max(vmax, s.vertices.back());
    std::uniform_int_distribution<int> level(0, levels - 1);
    std::vector<double> fx(vmax + 1), fy(vmax + 1);
    for (Vertex v = 0; v <= vmax; ++v) {
        fx[v] = level(rng);
        fy[v] = level(rng);
    }
    return lower_star(simplices, fx, fy);
}

/// One corpus member with exactly n simplices, drawn from a mix of flag
/// complexes and shellings, with and without tied real grades.
inline Bifiltration random_corpus_entry(Rng& rng, int n)
{
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    std::vector<Simplex> base;
    for (int grow = 0; static_cast<int>(base.size()) < n; ++grow) {
        if (kind <= 1) {
            const int v = std::max(3, n / 3 + grow + std::uniform_int_distribution<int>(0, 3)(rng));
            base = random_flag_complex(rng, v, 0.5, kind == 0 ? 2 : 3);
        } else {
            base = random_shelling(rng, std::max(1, n / 4 + grow));
        }
    }
    auto simplices = random_subcomplex(rng, base, n);
    const int bucket = (kind % 2 == 1) ? 3 : 1;
    return random_bifiltration(rng, simplices, bucket);
}

} // namespace metarank::generate

#endif
