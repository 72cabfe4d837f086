#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <set>

#include "amenable/boundary.hpp"
#include "amenable/errors.hpp"
#include "amenable/percolation.hpp"
#include "support.hpp"

using namespace amenable;

namespace {

std::vector<FiniteSubset> random_partition(const FiniteSubset& s, std::mt19937_64& rng, std::size_t parts) {
    std::vector<std::vector<Element>> out(parts);
    for (const auto& x : s) out[rng() % parts].push_back(x);
    std::vector<FiniteSubset> r;
    for (auto& p : out)
        if (!p.empty()) r.emplace_back(std::move(p));
    return r;
}

}  // namespace

TEST_CASE("parameters") {
    auto z = GroupModel::lattice(1);
    auto p = PercolationParams::make(z, {0.5, 0.8}, 3);
    CHECK(p.edge_probability(0) == doctest::Approx(0.4));
    CHECK(p.edge_probability(1) == doctest::Approx(0.4));
    CHECK(PercolationParams::from_edge_probability(z, 0.5, 1).edge_probability(0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(PercolationParams::uniform(z, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(PercolationParams::make(z, {0.5}, 1), std::invalid_argument);
}

TEST_CASE("cluster report of a hand-made configuration") {
    auto z = GroupModel::lattice(1);
    auto lam = folner_set(z, 10);
    auto r = clusters_in(lam, {{0, 1}, {1, 2}});
    CHECK(r.k == 8);
    std::vector<std::uint32_t> sizes = r.sizes;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::uint32_t>{1, 1, 1, 1, 1, 1, 1, 3});
    CHECK(r.f(1) == 7);
    CHECK(r.f(2) == 7);
    CHECK(r.f(3) == 8);
    CHECK(r.f(10) == static_cast<double>(r.k));

    auto none = clusters_in(lam, {});
    CHECK(none.k == 10);
}

TEST_CASE("sampling") {
    auto z2 = GroupModel::lattice(2);
    auto lam = folner_set(z2, 20);
    CHECK(sample_configuration(PercolationParams::uniform(z2, 0.0, 1), lam, 0).open_edges.empty());
    auto all = sample_configuration(PercolationParams::uniform(z2, 0.999, 1), lam, 0);
    CHECK(all.open_edges.size() >= 2 * 20 * 19 - 10);

    // both endpoints in Λ, no duplicates
    auto cfg = sample_configuration(PercolationParams::uniform(z2, 0.7, 9), lam, 4);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen(cfg.open_edges.begin(), cfg.open_edges.end());
    CHECK(seen.size() == cfg.open_edges.size());

    // activity rate of one edge class
    auto z = GroupModel::lattice(1);
    auto par = PercolationParams::make(z, {0.6, 0.7}, 5);
    auto big = folner_set(z, 1000001);
    auto c = sample_configuration(par, big, 0);
    const double n = 1e6, q = 0.42;
    CHECK(std::abs(static_cast<double>(c.open_edges.size()) / n - q) < 4 * std::sqrt(q * (1 - q) / n));

    // conservation and determinism
    auto rep = clusters_in(cfg);
    std::size_t total = 0;
    for (auto s : rep.sizes) total += s;
    CHECK(total == lam.size());
    CHECK(rep.f(static_cast<double>(lam.size())) == static_cast<double>(rep.k));
    CHECK(sample_configuration(PercolationParams::uniform(z2, 0.7, 9), lam, 4).open_edges == cfg.open_edges);
}

TEST_CASE("clusters match a breadth-first search") {
    auto h = GroupModel::heisenberg();
    auto lam = ball(h, 4);
    auto cfg = sample_configuration(PercolationParams::uniform(h, 0.75, 2), lam, 1);
    auto rep = clusters_in(cfg);
    std::vector<std::vector<std::uint32_t>> adj(lam.size());
    for (auto [a, b] : cfg.open_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> comp(lam.size(), -1);
    int next = 0;
    for (std::uint32_t i = 0; i < lam.size(); ++i) {
        if (comp[i] >= 0) continue;
        std::vector<std::uint32_t> stack{i};
        comp[i] = next;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    CHECK(rep.k == static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t k = 0; k < lam.size(); ++k) CHECK((rep.label[i] == rep.label[k]) == (comp[i] == comp[k]));
}

TEST_CASE("exhaustive expectation on two sites") {
    auto z = GroupModel::lattice(1);
    auto lam = folner_set(z, 2);
    auto e = expected_f(PercolationParams::from_edge_probability(z, 0.5, 1), lam, ExpectationMode::Exhaustive);
    CHECK(e.expected_k == doctest::Approx(1.5));
    CHECK(e.mean(1) == doctest::Approx(1.0));
    CHECK(e.mean(2) == doctest::Approx(1.5));

    auto zero = expected_f(PercolationParams::uniform(z, 0.0, 1), folner_set(z, 5), ExpectationMode::Exhaustive);
    CHECK(zero.mean(1) == doctest::Approx(5.0));
    CHECK(zero.mean(4) == doctest::Approx(5.0));
    CHECK_THROWS_AS(expected_f(PercolationParams::uniform(z, 0.5, 1), folner_set(z, 12), ExpectationMode::Exhaustive),
                    ResourceCapExceeded);
}

TEST_CASE("Monte Carlo expectation agrees with enumeration") {
    for (const auto& g : {GroupModel::lattice(1), GroupModel::lattice(2)}) {
        FiniteSubset lam = g.rank() == 1 ? folner_set(g, 3)
                                         : FiniteSubset{g.element({0, 0}), g.element({1, 0}), g.element({0, 1})};
        auto par = PercolationParams::make(g, std::vector<double>(g.generators().size(), 0.6), 11);
        if (g.rank() == 1) par.p = {0.5, 0.9};
        auto ex = expected_f(par, lam, ExpectationMode::Exhaustive);
        auto mc = expected_f(par, lam, ExpectationMode::MonteCarlo, 20000);
        for (std::size_t m = 1; m <= 3; ++m) {
            const double x = static_cast<double>(m);
            CHECK(std::abs(mc.mean(x) - ex.mean(x)) <= 4 * mc.se[m - 1] + 1e-12);
        }
    }
}

TEST_CASE("cluster statistics on Z") {
    auto z = GroupModel::lattice(1);
    auto lam = folner_set(z, 20000);
    auto st = cluster_statistics(PercolationParams::from_edge_probability(z, 0.5, 3), lam, 16, 8);
    CHECK(std::abs(st.kappa - 0.5) < 4 * st.kappa_se + 1e-4);
    for (std::size_t m = 1; m <= 8; ++m) {
        const double c = 0.5 * std::pow(0.5, static_cast<double>(m - 1));
        const double d = static_cast<double>(m) * 0.25 * std::pow(0.5, static_cast<double>(m - 1));
        CHECK(std::abs(st.c[m - 1] - c) < 4 * st.c_se[m - 1] + 1e-4);
        CHECK(std::abs(st.d[m - 1] - d) < 4 * st.d_se[m - 1] + 1e-4);
        CHECK(std::abs(st.phi[m - 1] - (1 - std::pow(0.5, static_cast<double>(m)))) < 4 * st.phi_se[m - 1] + 1e-4);
    }
    CHECK(st.d_inf_proxy < 1e-3);
    auto phi = st.phi_function();
    CHECK(phi.nondecreasing());
    CHECK(phi.at_infinity() == doctest::Approx(1.0));

    auto none = cluster_statistics(PercolationParams::uniform(z, 0.0, 3), folner_set(z, 100), 4, 3);
    CHECK(none.kappa == 1.0);
    CHECK(none.c[0] == 1.0);
    CHECK(none.d[0] == 1.0);
    CHECK(none.c[1] == 0.0);
    CHECK(none.phi[0] == 1.0);
}

TEST_CASE("d_m is exact through the thickened window") {
    // compare with clusters computed on a much larger window
    auto z2 = GroupModel::lattice(2);
    auto par = PercolationParams::from_edge_probability(z2, 0.4, 21);
    auto lam = folner_set(z2, 12);
    auto st = cluster_statistics(par, lam, 3, 4);
    auto huge = set_product(z2, ball(z2, 20), lam);
    std::vector<double> d(4, 0.0);
    for (std::uint64_t s = 0; s < 3; ++s) {
        auto rep = clusters_in(sample_configuration(par, huge, s));
        for (const auto& x : lam) {
            auto sz = rep.sizes[rep.label[static_cast<std::size_t>(huge.index_of(x))]];
            if (sz <= 4) d[sz - 1] += 1.0 / (3.0 * static_cast<double>(lam.size()));
        }
    }
    for (std::size_t m = 0; m < 4; ++m) CHECK(st.d[m] == doctest::Approx(d[m]));
}

TEST_CASE("cluster counting is almost additive") {
    std::mt19937_64 rng(83);
    for (const auto& g : {GroupModel::lattice(1), GroupModel::lattice(2)}) {
        auto lam = g.rank() == 1 ? folner_set(g, 300) : folner_set(g, 14);
        for (int trial = 0; trial < 50; ++trial) {
            auto par = PercolationParams::from_edge_probability(g, 0.1 * (trial % 10), 100 + trial);
            auto r = check_percolation_additivity(par, 0, random_partition(lam, rng, 1 + rng() % 6));
            CHECK(r.holds());
        }
    }
}

TEST_CASE("raising a bond probability never closes an edge") {
    auto z2 = GroupModel::lattice(2);
    auto lam = folner_set(z2, 15);
    auto lo = PercolationParams::make(z2, {0.5, 0.5, 0.5, 0.5}, 7);
    auto hi = lo;
    hi.p[2] = 0.8;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto a = sample_configuration(lo, lam, s), b = sample_configuration(hi, lam, s);
        std::set<std::pair<std::uint32_t, std::uint32_t>> bs(b.open_edges.begin(), b.open_edges.end());
        for (const auto& e : a.open_edges) CHECK(bs.count(e) == 1);
        CHECK(clusters_in(b).k <= clusters_in(a).k);
    }
}

TEST_CASE("continuity scan") {
    auto z = GroupModel::lattice(1);
    auto rows = continuity_scan(z, {0.0, 0.3, 0.6}, folner_set(z, 5000), 8, 1);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].kappa == 1.0);
    CHECK(rows[0].increment == 0.0);
    for (const auto& r : rows) CHECK(std::abs(r.kappa - (1 - r.q)) < 4 * r.kappa_se + 1e-3);
    CHECK(rows[1].increment > 0.0);
    auto same = continuity_scan(z, {0.4, 0.4}, folner_set(z, 2000), 4, 1);
    CHECK(same[1].increment == 0.0);
}
