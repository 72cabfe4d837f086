#include <doctest.h>

#include <algorithm>
#include <map>
#include <cmath>
#include <numbers>
#include <random>

#include "amenable/errors.hpp"
#include "amenable/spectral.hpp"
#include "amenable/tiling.hpp"
#include "support.hpp"

using namespace amenable;

namespace {

// random partition of a box into sub-boxes by cutting each axis
std::vector<FiniteSubset> box_partition(const GroupModel& g, std::int64_t n, std::mt19937_64& rng) {
    const int d = g.rank();
    std::vector<std::vector<std::int64_t>> cuts(d);
    for (int a = 0; a < d; ++a) {
        cuts[a] = {0};
        for (std::int64_t x = 1; x < n; ++x)
            if (rng() % 4 == 0) cuts[a].push_back(x);
        cuts[a].push_back(n);
    }
    std::map<std::vector<std::size_t>, std::vector<Element>> cells;
    for (const auto& x : folner_set(g, n)) {
        std::vector<std::size_t> key;
        for (int a = 0; a < d; ++a)
            key.push_back(static_cast<std::size_t>(std::upper_bound(cuts[a].begin(), cuts[a].end(), x.c[a]) -
                                                   cuts[a].begin()));
        cells[key].push_back(x);
    }
    std::vector<FiniteSubset> out;
    for (auto& [k, v] : cells) out.emplace_back(std::move(v));
    return out;
}

}  // namespace

TEST_CASE("restriction of the adjacency operator on Z is the path matrix") {
    auto z = GroupModel::lattice(1);
    auto c = Coloring::constant(1, 0);
    auto m = restrict_operator(adjacency_operator(z), folner_set(z, 6), c);
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k) CHECK(m(i, k) == (std::abs(i - k) == 1 ? 1.0 : 0.0));
}

TEST_CASE("potential-only operator is diagonal") {
    auto z2 = GroupModel::lattice(2);
    auto col = Coloring::iid(3, {0.5, 0.5});
    auto lam = folner_set(z2, 5);
    auto m = restrict_operator(anderson_operator(z2, {-1.0, 2.5}, 0.0), lam, col);
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t k = 0; k < lam.size(); ++k)
            CHECK(m(i, k) == (i == k ? (col(lam[i]) == 0 ? -1.0 : 2.5) : 0.0));
    auto a = restrict_operator(anderson_operator(z2, {-1.0, 2.5}), lam, col);
    CHECK(a == a.transpose());
    CHECK((a - m).sum() == doctest::Approx(2.0 * 2 * 5 * 4));
}

TEST_CASE("asymmetric kernels are rejected") {
    auto z = GroupModel::lattice(1);
    auto h = adjacency_operator(z);
    h.block = [z](const Element& x, const Element& y, const ColorLookup&) {
        return Eigen::MatrixXd::Constant(1, 1, y == z.multiply(z.element({1}), x) ? 1.0 : 0.0);
    };
    CHECK_THROWS_AS(restrict_operator(h, folner_set(z, 4), Coloring::constant(1, 0)), std::invalid_argument);
}

TEST_CASE("eigenvalue counting") {
    auto n_id = eigen_count(Eigen::MatrixXd::Identity(5, 5));
    CHECK(n_id(0.999) == 0.0);
    CHECK(n_id(1.0) == 5.0);

    auto z = GroupModel::lattice(1);
    auto m = restrict_operator(adjacency_operator(z), folner_set(z, 4), Coloring::constant(1, 0));
    auto s = solve_spectrum(m, true);
    REQUIRE(s.eigenvalues.size() == 4);
    for (int k = 1; k <= 4; ++k)
        CHECK(s.eigenvalues[4 - k] == doctest::Approx(2 * std::cos(k * std::numbers::pi / 5)));
    REQUIRE(s.residual.has_value());
    CHECK(*s.residual < 1e-12);
    auto n = counting_function(s.eigenvalues);
    CHECK(n(0.0) == 2.0);
    // the convention counts an eigenvalue at E itself
    CHECK(n(s.eigenvalues[2]) == 3.0);

    CHECK_THROWS_AS(eigen_count(Eigen::MatrixXd::Identity(10, 10), 9), ResourceCapExceeded);
    CHECK(eigen_count(Eigen::MatrixXd(0, 0)).at_infinity() == 0.0);
}

TEST_CASE("zero operator IDS is a unit step at zero") {
    auto z2 = GroupModel::lattice(2);
    auto f = ids_approximant(scalar_operator(z2, 0.0, 2), Coloring::constant(1, 0), FolnerSequence(z2), 6);
    CHECK(f(-1e-12) == 0.0);
    CHECK(f(0.0) == doctest::Approx(1.0));
}

TEST_CASE("IDS of the adjacency operator on Z follows the arccos law") {
    auto z = GroupModel::lattice(1);
    auto col = Coloring::constant(1, 0);
    auto f = ids_approximant(adjacency_operator(z), col, FolnerSequence(z), 2000);
    CHECK(f.nondecreasing());
    CHECK(f.at_infinity() == doctest::Approx(1.0));
    CHECK(f(0.0) == doctest::Approx(0.5));
    CHECK(sup_distance(f, z_adjacency_ids, -2.0, 2.0) <= 0.01);
    // closed form of the finite path: n(E) = #{k : 2cos(kπ/(n+1)) <= E}
    for (double e : {-1.5, -0.3, 0.7, 1.9}) {
        int count = 0;
        for (int k = 1; k <= 2000; ++k) count += 2 * std::cos(k * std::numbers::pi / 2001) <= e;
        CHECK(f(e) * 2000 == doctest::Approx(count));
    }
}

TEST_CASE("a scalar shift moves the counting function rigidly") {
    auto z2 = GroupModel::lattice(2);
    auto col = Coloring::iid(3, {0.5, 0.5});
    auto h = anderson_operator(z2, {0.0, 1.0});
    auto a = ids_approximant(h, col, FolnerSequence(z2), 8);
    auto b = ids_approximant(shifted(h, 0.75), col, FolnerSequence(z2), 8);
    REQUIRE(a.breakpoints().size() == b.breakpoints().size());
    for (std::size_t i = 0; i < a.breakpoints().size(); ++i)
        CHECK(b.breakpoints()[i] == doctest::Approx(a.breakpoints()[i] + 0.75));
}

TEST_CASE("eigenvalue counting is almost additive") {
    std::mt19937_64 rng(71);
    auto col = Coloring::iid(5, {0.5, 0.5});
    for (const auto& g : {GroupModel::lattice(1), GroupModel::lattice(2)}) {
        auto h = anderson_operator(g, {-1.0, 1.0});
        const std::int64_t n = g.rank() == 1 ? 60 : 9;
        for (int trial = 0; trial < 50; ++trial) {
            auto parts = trial % 2 ? box_partition(g, n, rng) : [&] {
                std::vector<std::vector<Element>> v(3);
                for (const auto& x : folner_set(g, n)) v[rng() % 3].push_back(x);
                std::vector<FiniteSubset> r;
                for (auto& p : v)
                    if (!p.empty()) r.emplace_back(std::move(p));
                return r;
            }();
            auto r = check_count_additivity(h, col, parts);
            CHECK(r.defect <= r.budget);
            CHECK(r.defect <= static_cast<double>(r.coupling_rows));
        }
    }
}

TEST_CASE("counting as an almost additive function") {
    auto z = GroupModel::lattice(1);
    auto h = anderson_operator(z, {0.0, 2.0});
    auto f = eigen_counting_function(h);
    CHECK(f.c == 1.0);
    CHECK(f.boundary.d == 4.0 * 5);
    auto col = Coloring::iid(2, {0.5, 0.5});
    auto lam = folner_set(z, 30);
    CHECK(f(col, lam).step() == eigen_count(restrict_operator(h, lam, col)));
}

TEST_CASE("IDS error report") {
    auto z = GroupModel::lattice(1);
    FolnerSequence seq(z);
    const double eps = 0.4;
    auto idx = select_tiles(seq, n_of_eps(eps), 0.3, 4);
    std::vector<FiniteSubset> tiles;
    for (auto i : idx) tiles.push_back(seq.at(i));
    IdsReference ref;
    ref.exact = z_adjacency_ids;
    ref.lo = -2;
    ref.hi = 2;
    auto rep = ids_error_report(adjacency_operator(z), Coloring::iid(1, {1.0}), seq, 500, tiles, eps, ref);
    CHECK(rep.report.all_passed());
    CHECK(rep.measured < 0.01);
    CHECK(rep.leading == doctest::Approx((24 + 264 * 5) * eps));
    CHECK(rep.bound == doctest::Approx(rep.leading + rep.frequency + rep.window_term + rep.tile_term));
    // one pattern per tile, seen at |U| - |T_i| + 1 translates
    double gaps = 0;
    for (std::size_t i = 0; i < tiles.size(); ++i)
        gaps += eta(static_cast<int>(i) + 1, eps) * static_cast<double>(tiles[i].size() - 1) / 500.0;
    CHECK(rep.frequency == doctest::Approx(gaps));
}
