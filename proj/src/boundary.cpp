#include "amenable/boundary.hpp"

#include "product_counts.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace amenable {

FiniteSubset k_boundary(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k) {
    if (t.empty() || k.empty()) throw std::invalid_argument("k_boundary needs nonempty T and K");
    std::vector<Element> kinv;
    kinv.reserve(k.size());
    for (const auto& y : k) kinv.push_back(g.inverse(y));
    // x is in the boundary iff #{y ∈ K : yx ∈ T} lies strictly between 0 and |K|
    if (auto pc = detail::count_products(g, kinv, t.elements())) {
        std::vector<Element> out;
        for (std::size_t v = 0; v < pc->count.size(); ++v)
            if (pc->count[v] != 0 && pc->count[v] != kinv.size()) out.push_back(pc->element_at(g, v));
        return FiniteSubset(std::move(out));
    }

    // K^{-1}T is close to |T| for invariant sets, so dedupe by hashing
    std::unordered_set<Element, ElementHash> seen;
    seen.reserve(2 * t.size());
    std::vector<Element> out;
    for (const auto& y : kinv)
        for (const auto& x0 : t) {
            const auto x = g.multiply(y, x0);
            if (!seen.insert(x).second) continue;
            if (std::any_of(k.begin(), k.end(), [&](const Element& z) { return !t.contains(g.multiply(z, x)); }))
                out.push_back(x);
        }
    return FiniteSubset(std::move(out));
}

FiniteSubset boundary_in_window(const GroupModel& g, const std::function<bool(const Element&)>& member,
                                const FiniteSubset& k, const FiniteSubset& window) {
    std::vector<Element> out;
    for (const auto& x : window) {
        bool in = false, out_of = false;
        for (const auto& y : k) {
            if (member(g.multiply(y, x)))
                in = true;
            else
                out_of = true;
            if (in && out_of) break;
        }
        if (in && out_of) out.push_back(x);
    }
    return FiniteSubset(std::move(out));
}

FiniteSubset r_boundary(const GroupModel& g, const FiniteSubset& lambda, int r) {
    if (r < 1) throw std::invalid_argument("r_boundary needs r >= 1");
    if (lambda.empty()) return {};

    // Outward: complement points within distance r of Λ. The first r steps of
    // a shortest path from Λ into the complement never re-enter Λ.
    std::unordered_set<Element, ElementHash> outer;
    std::vector<Element> frontier(lambda.begin(), lambda.end());
    std::vector<Element> shell1;
    for (int step = 1; step <= r; ++step) {
        std::vector<Element> next;
        for (const auto& y : frontier)
            for (const auto& s : g.generators()) {
                auto z = g.multiply(s, y);
                if (lambda.contains(z) || !outer.insert(z).second) continue;
                next.push_back(z);
            }
        if (step == 1) shell1 = next;
        frontier = std::move(next);
    }

    // Inward: Λ points within distance r of the complement, by search from the
    // first outer shell through Λ only.
    std::unordered_set<Element, ElementHash> inner;
    frontier = shell1;
    for (int step = 1; step <= r; ++step) {
        std::vector<Element> next;
        for (const auto& y : frontier)
            for (const auto& s : g.generators()) {
                auto z = g.multiply(s, y);
                if (!lambda.contains(z) || !inner.insert(z).second) continue;
                next.push_back(z);
            }
        frontier = std::move(next);
    }

    std::vector<Element> out(outer.begin(), outer.end());
    out.insert(out.end(), inner.begin(), inner.end());
    return FiniteSubset(std::move(out));
}

double boundary_ratio(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k) {
    if (t.empty()) throw std::invalid_argument("invariance ratio of an empty set");
    return static_cast<double>(k_boundary(g, t, k).size()) / static_cast<double>(t.size());
}

bool is_invariant(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("invariance parameter must lie in (0,1)");
    return boundary_ratio(g, t, k) < delta;
}

namespace {

FiniteSubset boundary_or_empty(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k) {
    return t.empty() ? FiniteSubset{} : k_boundary(g, t, k);
}

}  // namespace

Report check_boundary_identities(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& s,
                                 const FiniteSubset& k, const FiniteSubset& extra, const Element& x) {
    Report rep;
    const auto bt = boundary_or_empty(g, t, k);
    const auto bs = boundary_or_empty(g, s, k);
    const auto kinv = set_inverse(g, k);

    {
        auto window = set_union(set_union(set_product(g, kinv, t), t), set_union(set_product(g, kinv, s), s));
        auto in_t = [&](const Element& y) { return t.contains(y); };
        auto in_complement = [&](const Element& y) { return !t.contains(y); };
        auto lhs = boundary_in_window(g, in_t, k, window);
        auto rhs = boundary_in_window(g, in_complement, k, window);
        rep.add_flag("complement", lhs == rhs && lhs == bt);
    }

    const auto b_union = set_union(bs, bt);
    rep.add_flag("union", is_subset(boundary_or_empty(g, set_union(s, t), k), b_union));

    const auto s_minus_t = set_difference(s, t);
    const auto b_diff = boundary_or_empty(g, s_minus_t, k);
    rep.add_flag("difference", is_subset(b_diff, b_union));
    rep.add("difference_size", static_cast<double>(b_diff.size()), "<=", static_cast<double>(bt.size() + bs.size()));

    const auto l = set_union(k, extra);
    rep.add_flag("monotone", is_subset(bt, boundary_or_empty(g, t, l)));

    rep.add_flag("translation", boundary_or_empty(g, set_translate(g, t, x), k) == set_translate(g, bt, x));

    if (!t.empty() && !s.empty())
        rep.add_flag("product", is_subset(k_boundary(g, set_product(g, t, s), k), set_product(g, bt, s)));
    else
        rep.add_flag("product", true);

    const auto k_id = set_union(k, FiniteSubset{g.identity()});
    const auto bt_id = boundary_or_empty(g, t, k_id);
    const auto bs_id = boundary_or_empty(g, s, k_id);
    rep.add_flag("interior",
                 is_subset(boundary_or_empty(g, set_difference(t, s), k_id), set_union(bt_id, set_intersection(bs_id, t))));
    return rep;
}

}  // namespace amenable
