#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "amenable/boundary.hpp"
#include "amenable/tiling.hpp"

using namespace amenable;

namespace {

void require_all_passed(const Report& rep) {
    for (const auto& c : rep.checks())
        if (c.asserted) CHECK_MESSAGE(c.passed, c.name << ": measured " << c.measured << " " << c.relation << " " << c.bound);
}

FiniteSubset interval(const GroupModel& z1, std::int64_t from, std::int64_t to) {
    std::vector<Element> v;
    for (auto i = from; i < to; ++i) v.push_back(z1.element({i}));
    return FiniteSubset(std::move(v));
}

// Every assignment of each shared point to "dropped from a", "dropped from b"
// or both, searched exhaustively.
bool eps_disjoint_by_search(std::size_t na, std::size_t nb, std::size_t shared, double eps) {
    for (std::uint32_t mask = 0; mask < (1u << shared); ++mask) {
        const auto from_a = static_cast<std::size_t>(std::popcount(mask));
        const auto from_b = shared - from_a;
        if (static_cast<double>(na - from_a) >= (1.0 - eps) * static_cast<double>(na) - 1e-9 &&
            static_cast<double>(nb - from_b) >= (1.0 - eps) * static_cast<double>(nb) - 1e-9)
            return true;
    }
    return false;
}

}  // namespace

TEST_CASE("number of tiles") {
    CHECK(n_of_eps(0.4) == 2);
    CHECK(n_of_eps(0.5) == 1);
    CHECK(n_of_eps(0.25) == 5);
    CHECK(n_of_eps(0.1) == 22);
    CHECK_THROWS_AS(n_of_eps(0.0), std::invalid_argument);
    CHECK_THROWS_AS(n_of_eps(1.0), std::invalid_argument);
    for (int k = 1; k <= 99; ++k) {
        const double eps = k / 200.0;
        int n = 1;
        while (std::pow(1.0 - eps, n) > eps + 1e-15) ++n;
        CHECK_MESSAGE(n_of_eps(eps) == n, "eps = " << eps);
    }
}

TEST_CASE("tile densities") {
    CHECK(eta(2, 0.4) == doctest::Approx(0.4));
    CHECK(eta(1, 0.4) == doctest::Approx(0.24));
    CHECK_THROWS_AS(eta(3, 0.4), std::out_of_range);
    CHECK(weighted_null_sum({1.0, 1.0}, 0.4) == doctest::Approx(0.64));
    CHECK_THROWS_AS(weighted_null_sum({1.0}, 0.4), std::invalid_argument);
    // Σ η_i = 1 - (1-ε)^N
    for (double eps : {0.1, 0.2, 0.3, 0.45}) {
        std::vector<double> ones(static_cast<std::size_t>(n_of_eps(eps)), 1.0);
        CHECK(weighted_null_sum(ones, eps) == doctest::Approx(1.0 - std::pow(1.0 - eps, n_of_eps(eps))));
    }
}

TEST_CASE("eps-disjointness against exhaustive search") {
    auto z1 = GroupModel::lattice(1);
    CHECK(eps_disjoint_pair(interval(z1, 0, 10), interval(z1, 8, 18), 0.1));
    CHECK_FALSE(eps_disjoint_pair(interval(z1, 0, 10), interval(z1, 7, 17), 0.1));
    CHECK(are_eps_disjoint({interval(z1, 0, 10), interval(z1, 10, 20), interval(z1, 19, 29)}, 0.1));
    for (std::int64_t la = 1; la <= 12; ++la)
        for (std::int64_t lb = 1; lb <= 12; ++lb)
            for (std::int64_t shift = 0; shift <= la; ++shift)
                for (double eps : {0.1, 0.25, 0.4}) {
                    auto a = interval(z1, 0, la);
                    auto b = interval(z1, shift, shift + lb);
                    auto shared = intersection_size(a, b);
                    CHECK(eps_disjoint_pair(a, b, eps) ==
                          eps_disjoint_by_search(a.size(), b.size(), shared, eps));
                }
}

TEST_CASE("parameter validation") {
    auto z1 = GroupModel::lattice(1);
    CHECK_THROWS_AS(TilingParams::make(z1, 0.6, 0.1, 0.01, 0.001), std::invalid_argument);
    CHECK_THROWS_AS(TilingParams::make(z1, 0.4, 0.4, 0.01, 0.001), std::invalid_argument);
    CHECK_THROWS_AS(TilingParams::make(z1, 0.4, 0.1, 1.0, 0.001), std::invalid_argument);
    CHECK_THROWS_AS(TilingParams::make(z1, 0.4, 0.1, 0.01, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TilingParams::make(z1, 0.4, 0.1, 0.01, 0.001, FiniteSubset{z1.element({1})}),
                    std::invalid_argument);
    auto p = TilingParams::make(z1, 0.4, 0.1, 0.01, 0.001);
    CHECK(p.control == FiniteSubset{z1.identity()});
    CHECK_FALSE(p.in_guaranteed_regime());
    CHECK(TilingParams::make(z1, 0.1, 1e-8, 1e-27, 1e-30).in_guaranteed_regime());
}

TEST_CASE("covering an interval") {
    auto z1 = GroupModel::lattice(1);
    auto t = folner_set(z1, 1000);
    auto k = folner_set(z1, 10);
    auto p = TilingParams::make(z1, 0.25, 0.1, 0.05, 0.02, ball(z1, 1));
    auto r = ow_cover(z1, t, k, p);
    CHECK(r.covered >= 200);
    CHECK(r.seeded == r.centers.size());
    require_all_passed(verify_cover(z1, t, k, p, r));

    p.seed = SeedMode::None;
    auto r2 = ow_cover(z1, t, k, p);
    CHECK(r2.seeded == 0);
    require_all_passed(verify_cover(z1, t, k, p, r2));

    auto single = ow_cover(z1, t, FiniteSubset{z1.identity()}, p);
    CHECK(single.covered == single.centers.size());
    require_all_passed(verify_cover(z1, t, FiniteSubset{z1.identity()}, p, single));
}

TEST_CASE("covering in the hypothesis regime") {
    auto z1 = GroupModel::lattice(1);
    auto t = folner_set(z1, 2000);
    auto k = folner_set(z1, 60);
    auto p = TilingParams::make(z1, 0.3, 0.1, 0.4, 0.19, FiniteSubset{z1.identity(), z1.element({1})});
    for (auto mode : {SeedMode::GreedyDisjoint, SeedMode::None}) {
        p.seed = mode;
        auto r = ow_cover(z1, t, k, p);
        CHECK(all_hold(r.hypotheses));
        auto rep = verify_cover(z1, t, k, p, r);
        require_all_passed(rep);
        CHECK(rep.find("coverage_upper")->asserted);
    }
}

TEST_CASE("covering failed hypotheses are reported or enforced") {
    auto z1 = GroupModel::lattice(1);
    auto t = folner_set(z1, 100);
    auto k = folner_set(z1, 10);
    auto p = TilingParams::make(z1, 0.25, 0.1, 0.05, 0.02, ball(z1, 1));
    auto r = ow_cover(z1, t, k, p);
    CHECK_FALSE(all_hold(r.hypotheses));
    CHECK(describe_failures(r.hypotheses) != "none");
    p.enforce_hypotheses = true;
    CHECK_THROWS_AS(ow_cover(z1, t, k, p), TilingError);
}

TEST_CASE("covering boxes in Z^2 and the Heisenberg group") {
    auto z2 = GroupModel::lattice(2);
    auto t = folner_set(z2, 60);
    auto k = folner_set(z2, 5);
    auto p = TilingParams::make(z2, 0.3, 0.1, 0.1, 0.04, ball(z2, 1));
    auto r = ow_cover(z2, t, k, p);
    require_all_passed(verify_cover(z2, t, k, p, r));
    p.seed = SeedMode::None;
    p.control = FiniteSubset{z2.identity()};
    require_all_passed(verify_cover(z2, t, k, p, ow_cover(z2, t, k, p)));

    auto h = GroupModel::heisenberg();
    auto th = folner_set(h, 8);
    auto kh = folner_set(h, 2);
    auto ph = TilingParams::make(h, 0.3, 0.1, 0.1, 0.04);
    for (auto mode : {SeedMode::GreedyDisjoint, SeedMode::None}) {
        ph.seed = mode;
        require_all_passed(verify_cover(h, th, kh, ph, ow_cover(h, th, kh, ph)));
    }
}

TEST_CASE("tile step leaves an invariant remainder") {
    auto z1 = GroupModel::lattice(1);
    auto t = folner_set(z1, 10000);
    auto k = folner_set(z1, 100);
    auto l = folner_set(z1, 10);
    auto p = TilingParams::make(z1, 0.15, 0.1, 0.1, 0.02);
    auto r = tile_step(z1, t, k, l, p, 0.4);
    CHECK(all_hold(r.hypotheses));
    CHECK(r.remainder_ratio < r.remainder_bound);
    CHECK(r.covered.size() + r.remainder.size() == t.size());
    CHECK(are_disjoint(r.covered, r.remainder));
}

TEST_CASE("tile selection") {
    auto z1 = GroupModel::lattice(1);
    FolnerSequence seq(z1);
    CHECK(select_tiles(seq, 2, 1e-3) == std::vector<std::size_t>{1, 2});
    // T_2 = [0,2): boundary of [0,n) under {-1,0,1} has 4 points
    CHECK(select_tiles(seq, 3, 0.1) == std::vector<std::size_t>{1, 2, 41});
    CHECK_THROWS_AS(select_tiles(seq, 3, 0.1, 1, 30), TilingError);
}

TEST_CASE("quasi tiling of an interval") {
    auto z1 = GroupModel::lattice(1);
    auto t = folner_set(z1, 10000);
    FolnerSequence seq(z1);
    auto p = TilingParams::make(z1, 0.4, 0.09, 1e-3, 1e-4);
    auto q = stp_tiling(z1, t, seq, p);
    CHECK(q.tiles.size() == 2);
    CHECK(q.relaxed);
    auto rep = verify_quasi_tiling(z1, q);
    require_all_passed(rep);
    CHECK(rep.find("coverage")->asserted);

    auto p1 = TilingParams::make(z1, 0.5, 0.2, 1e-3, 1e-4);
    auto q1 = stp_tiling(z1, t, seq, p1);
    CHECK(q1.tiles.size() == 1);
    require_all_passed(verify_quasi_tiling(z1, q1));

    auto big = TilingParams::make(z1, 0.4, 0.09, 0.2, 1e-4);
    CHECK_THROWS_AS(stp_tiling(z1, t, seq, big), TilingError);
}

TEST_CASE("tiling verifier rejects corrupted tilings") {
    auto z1 = GroupModel::lattice(1);
    auto t = folner_set(z1, 2000);
    FolnerSequence seq(z1);
    auto q = stp_tiling(z1, t, seq, TilingParams::make(z1, 0.4, 0.09, 1e-3, 1e-4));
    REQUIRE(q.centers[1].size() > 2);

    auto outside = q;
    outside.centers[1][0] = z1.element({5000});
    CHECK_FALSE(verify_quasi_tiling(z1, outside).find("containment")->passed);

    auto doubled = q;
    doubled.centers[1].push_back(doubled.centers[1][0]);
    doubled.subtiles[1].push_back(doubled.subtiles[1][0]);
    CHECK_FALSE(verify_quasi_tiling(z1, doubled).find("eps_disjoint_witness")->passed);

    auto clash = q;
    clash.centers[0].push_back(q.centers[1][0]);
    clash.subtiles[0].push_back(FiniteSubset{z1.identity()});
    CHECK_FALSE(verify_quasi_tiling(z1, clash).find("tiles_disjoint")->passed);
}

TEST_CASE("relaxed uniform tiling family on Z") {
    auto z1 = GroupModel::lattice(1);
    FolnerSequence seq(z1);
    UstpParams p;
    p.base = TilingParams::make(z1, 0.4, 0.09, 0.1, 1e-4);
    p.aux_eps = 0.5;
    p.aux_beta = 0.25;
    p.aux_select_delta = 0.5;
    p.aux_delta = 0.02;
    auto uk = folner_set(z1, 40);
    auto fam = ustp_family(z1, uk, seq, p);
    CHECK(fam.tiles.size() == 2);
    CHECK(fam.aux_tiles.size() == 1);
    CHECK(fam.lambdas.size() > 0);
    CHECK(fam.lambdas.size() <= fam.fitting_translates);
    for (std::size_t i = 0; i < fam.lambda_pieces.size(); ++i)
        for (auto w : fam.lambda_pieces[i])
            CHECK(is_subset(fam.pieces[w], set_translate(z1, uk, fam.lambdas[i])));
    auto rep = verify_uniform_family(z1, fam);
    require_all_passed(rep);
    CHECK(rep.find("uniformity_defect_1") != nullptr);
}
