#include "amenable/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "amenable/boundary.hpp"
#include "amenable/errors.hpp"

namespace amenable {

int n_of_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    const double r = std::log(eps) / std::log1p(-eps);
    const double nearest = std::round(r);
    if (std::abs(r - nearest) <= 1e-12 * std::max(1.0, nearest)) return std::max(1, static_cast<int>(nearest));
    return std::max(1, static_cast<int>(std::ceil(r)));
}

double eta(int i, double eps) {
    const int n = n_of_eps(eps);
    if (i < 1 || i > n) throw std::out_of_range("eta index outside 1..N(eps)");
    return eps * std::pow(1.0 - eps, n - i);
}

double weighted_null_sum(const std::vector<double>& alpha, double eps) {
    const int n = n_of_eps(eps);
    if (alpha.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("weighted_null_sum needs N(eps) = " + std::to_string(n) + " terms");
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += eta(i, eps) * alpha[static_cast<std::size_t>(i - 1)];
    return s;
}

std::size_t eps_slack(std::size_t n, double eps) {
    return static_cast<std::size_t>(std::floor(eps * static_cast<double>(n) + 1e-9));
}

bool eps_disjoint_pair(const FiniteSubset& a, const FiniteSubset& b, double eps) {
    return intersection_size(a, b) <= eps_slack(a.size(), eps) + eps_slack(b.size(), eps);
}

bool are_eps_disjoint(const std::vector<FiniteSubset>& family, double eps) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (!eps_disjoint_pair(family[i], family[j], eps)) return false;
    return true;
}

std::string describe_failures(const std::vector<HypothesisCheck>& hyps) {
    std::ostringstream os;
    bool first = true;
    for (const auto& h : hyps) {
        if (h.holds) continue;
        os << (first ? "" : "; ") << h.name << " (measured " << h.measured << ", threshold " << h.threshold << ")";
        first = false;
    }
    return first ? "none" : os.str();
}

bool all_hold(const std::vector<HypothesisCheck>& hyps) {
    return std::all_of(hyps.begin(), hyps.end(), [](const HypothesisCheck& h) { return h.holds; });
}

TilingParams TilingParams::make(const GroupModel& g, double eps, double beta, double delta, double zeta,
                                FiniteSubset control) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2]");
    if (!(beta > 0.0 && beta < eps)) throw std::invalid_argument("beta must lie in (0, epsilon)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
    if (control.empty()) control = FiniteSubset{g.identity()};
    if (!control.contains(g.identity())) throw std::invalid_argument("control set must contain the identity");
    TilingParams p;
    p.eps = eps;
    p.beta = beta;
    p.delta = delta;
    p.zeta = zeta;
    p.control = std::move(control);
    return p;
}

bool TilingParams::in_guaranteed_regime() const {
    const int n = n_of_eps(eps);
    return eps <= 0.1 && beta < std::ldexp(eps, -n) && delta < std::pow(6.0, -n) * beta / 4.0;
}

namespace {

HypothesisCheck below(std::string name, double measured, double threshold) {
    return {std::move(name), measured < threshold, measured, threshold};
}

HypothesisCheck flag(std::string name, bool ok) { return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, "=="}; }

std::vector<HypothesisCheck> cover_hypotheses(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k,
                                              const TilingParams& p) {
    std::vector<HypothesisCheck> h;
    h.push_back(flag("identity_in_K", k.contains(g.identity())));
    h.push_back(flag("identity_in_B", p.control.contains(g.identity())));
    h.push_back(below("T_invariance_KKinv", boundary_ratio(g, t, difference_set(g, k)), p.delta));
    h.push_back(below("K_invariance_B", boundary_ratio(g, k, p.control), p.zeta * p.zeta));
    h.push_back(below("eps", p.eps, 0.5));
    h.push_back(below("delta", p.delta, 0.5));
    h.push_back(below("zeta", p.zeta, p.delta / 2.0));
    return h;
}

// Incremental state for the covering loop. All sets live inside T, so points
// are addressed by their position in T.
class CoverState {
public:
    CoverState(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const FiniteSubset& b)
        : g_(g), t_(t), k_(k), b_(b), in_a_(t.size(), 0), hits_(t.size(), 0) {
        for (const auto& y : b) binv_.push_back(g.inverse(y));
    }

    // position of k_j x in T, or -1
    std::ptrdiff_t at(std::size_t j, const Element& x) const { return t_.index_of(g_.multiply(k_[j], x)); }

    bool fits(const Element& x) const {
        for (std::size_t j = 0; j < k_.size(); ++j)
            if (at(j, x) < 0) return false;
        return true;
    }

    bool in_a(std::size_t pos) const { return in_a_[pos] != 0; }
    // B-boundary of A, restricted to T: Bg meets A and leaves A
    bool on_boundary(std::size_t pos) const { return hits_[pos] > 0 && hits_[pos] < b_.size(); }
    std::size_t covered() const { return covered_; }

    // Adds K x ∖ A; returns the subtile {k : kx ∉ A}.
    FiniteSubset add(const Element& x) {
        std::vector<Element> sub;
        for (std::size_t j = 0; j < k_.size(); ++j) {
            auto pos = static_cast<std::size_t>(at(j, x));
            if (in_a_[pos]) continue;
            sub.push_back(k_[j]);
            in_a_[pos] = 1;
            ++covered_;
            // g with bg = a for some b ∈ B gain one hit
            for (const auto& bi : binv_) {
                auto q = t_.index_of(g_.multiply(bi, t_[pos]));
                if (q >= 0) ++hits_[static_cast<std::size_t>(q)];
            }
        }
        return FiniteSubset(std::move(sub));
    }

private:
    const GroupModel& g_;
    const FiniteSubset& t_;
    const FiniteSubset& k_;
    const FiniteSubset& b_;
    std::vector<Element> binv_;
    std::vector<char> in_a_;
    std::vector<std::size_t> hits_;
    std::size_t covered_ = 0;
};

CoverResult cover_impl(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const TilingParams& p,
                       std::vector<HypothesisCheck> hyps) {
    if (t.empty() || k.empty()) throw std::invalid_argument("ow_cover needs nonempty T and K");
    if (p.enforce_hypotheses && !all_hold(hyps))
        throw TilingError("covering hypotheses fail: " + describe_failures(hyps));

    CoverResult res;
    res.hypotheses = std::move(hyps);
    CoverState st(g, t, k, p.control);

    const double tsize = static_cast<double>(t.size());
    const double ksize = static_cast<double>(k.size());
    const double target = p.eps * (1.0 - 2.0 * p.delta) * tsize;

    std::vector<std::size_t> fitting;  // S = {g ∈ T : Kg ⊆ T}, canonical order
    for (std::size_t i = 0; i < t.size(); ++i)
        if (st.fits(t[i])) fitting.push_back(i);

    auto overlap_with_a = [&](const Element& x, std::size_t limit) {
        std::size_t n = 0;
        for (std::size_t j = 0; j < k.size() && n <= limit; ++j)
            if (st.in_a(static_cast<std::size_t>(st.at(j, x)))) ++n;
        return n;
    };

    if (p.seed == SeedMode::GreedyDisjoint) {
        const double cap = (p.eps + p.delta) * tsize;
        for (auto pos : fitting) {
            if (static_cast<double>(st.covered()) >= target) break;
            if (static_cast<double>(res.centers.size() + 1) * ksize > cap) break;
            const auto& x = t[pos];
            if (overlap_with_a(x, 0) != 0) continue;
            res.subtiles.push_back(st.add(x));
            res.centers.push_back(x);
        }
        res.seeded = res.centers.size();
    }

    const std::size_t a_limit = eps_slack(k.size(), p.eps);
    const double b_limit = p.zeta * ksize + 1e-9;
    const auto cap = static_cast<std::size_t>(std::ceil(tsize / ((1.0 - p.eps) * ksize))) + 1;
    std::vector<char> dead(fitting.size(), 0);

    while (static_cast<double>(st.covered()) < target) {
        if (res.centers.size() >= cap) throw TilingError("covering exceeded its iteration cap");
        std::ptrdiff_t chosen = -1;
        for (std::size_t f = 0; f < fitting.size(); ++f) {
            if (dead[f]) continue;
            const auto& x = t[fitting[f]];
            // A only grows, so a candidate that overlaps A too much never recovers
            if (overlap_with_a(x, a_limit) > a_limit) {
                dead[f] = 1;
                continue;
            }
            std::size_t on_b = 0;
            bool ok = true;
            for (std::size_t j = 0; j < k.size(); ++j) {
                if (st.on_boundary(static_cast<std::size_t>(st.at(j, x))) && static_cast<double>(++on_b) > b_limit) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                chosen = static_cast<std::ptrdiff_t>(f);
                break;
            }
        }
        if (chosen < 0)
            throw TilingError("no admissible center before reaching the coverage target; failed hypotheses: " +
                              describe_failures(res.hypotheses));
        dead[static_cast<std::size_t>(chosen)] = 1;
        const auto& x = t[fitting[static_cast<std::size_t>(chosen)]];
        res.subtiles.push_back(st.add(x));
        res.centers.push_back(x);
    }
    res.covered = st.covered();
    return res;
}

}  // namespace

CoverResult ow_cover(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const TilingParams& p) {
    return cover_impl(g, t, k, p, cover_hypotheses(g, t, k, p));
}

Report verify_cover(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const TilingParams& p,
                    const CoverResult& r) {
    Report rep;
    const bool regime = all_hold(cover_hypotheses(g, t, k, p));
    auto s = verify_tiling_structure(g, t, {k}, {r.centers}, {r.subtiles}, p.eps);
    rep.append(s);

    std::vector<Element> all;
    for (const auto& c : r.centers) {
        auto tr = set_translate(g, k, c);
        all.insert(all.end(), tr.begin(), tr.end());
    }
    const FiniteSubset covered(std::move(all));
    const double n = static_cast<double>(covered.size());
    const double tsize = static_cast<double>(t.size());
    rep.add("covered_count", static_cast<double>(r.covered), "==", n);
    rep.add("coverage_lower", n, ">=", (p.eps - p.delta) * tsize);
    rep.add("coverage_upper", n, "<=", (p.eps + p.delta) * tsize, regime);

    const double kb = static_cast<double>(k_boundary(g, k, p.control).size());
    const double ksize = static_cast<double>(k.size());
    double worst_excess = -kb, worst_ratio = 0.0;
    for (const auto& sub : r.subtiles) {
        if (sub.empty()) continue;
        const double b = static_cast<double>(k_boundary(g, sub, p.control).size());
        worst_excess = std::max(worst_excess, b - kb);
        worst_ratio = std::max(worst_ratio, b / static_cast<double>(sub.size()));
    }
    rep.add("subtile_boundary_growth", worst_excess, "<=", p.zeta * ksize + 1e-9);
    rep.add("subtile_invariance", worst_ratio, "<", 4.0 * p.zeta, regime);
    rep.add("iteration_cap", static_cast<double>(r.centers.size()), "<=",
            std::ceil(tsize / ((1.0 - p.eps) * ksize)));
    return rep;
}

TileStepResult tile_step(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const FiniteSubset& l,
                         const TilingParams& p, double eta_l) {
    auto hyps = cover_hypotheses(g, t, k, p);
    const auto llinv = difference_set(g, l);
    hyps.push_back(flag("identity_in_L", l.contains(g.identity())));
    hyps.push_back(flag("L_subset_K", is_subset(l, k)));
    hyps.push_back(below("K_invariance_LLinv", boundary_ratio(g, k, llinv), eta_l));
    hyps.push_back(below("eps_sixth", p.eps, 1.0 / 6.0));
    hyps.push_back(below("delta_sixth", p.delta, 1.0 / 6.0));
    hyps.push_back(below("zeta_quarter_delta", p.zeta, p.delta / 4.0));

    TileStepResult res;
    res.hypotheses = hyps;
    res.cover = cover_impl(g, t, k, p, hyps);

    std::vector<Element> all;
    for (const auto& c : res.cover.centers) {
        auto tr = set_translate(g, k, c);
        all.insert(all.end(), tr.begin(), tr.end());
    }
    res.covered = FiniteSubset(std::move(all));
    res.remainder = set_difference(t, res.covered);
    res.remainder_bound = 2.0 * p.delta + eta_l;
    res.remainder_ratio = res.remainder.empty() ? 0.0 : boundary_ratio(g, res.remainder, llinv);
    if (all_hold(hyps) && !(res.remainder_ratio < res.remainder_bound))
        throw TilingError("remainder is not (LL^-1, 2delta+eta)-invariant: ratio " +
                          std::to_string(res.remainder_ratio));
    return res;
}

std::vector<std::size_t> select_tiles(const FolnerSequence& seq, int count, double delta, std::size_t first_index,
                                      std::size_t max_index) {
    if (count < 1) throw std::invalid_argument("need at least one tile");
    std::vector<std::size_t> idx{first_index};
    auto current = seq.at(first_index);
    while (static_cast<int>(idx.size()) < count) {
        const auto q = difference_set(seq.model(), current);
        bool found = false;
        for (std::size_t n = idx.back() + 1; n <= max_index; ++n) {
            auto cand = seq.at(n);
            if (boundary_ratio(seq.model(), cand, q) < delta) {
                idx.push_back(n);
                current = std::move(cand);
                found = true;
                break;
            }
        }
        if (!found)
            throw TilingError("Folner sequence exhausted at index " + std::to_string(max_index) +
                              " while selecting tile " + std::to_string(idx.size() + 1));
    }
    return idx;
}

QuasiTiling stp_tiling_with_tiles(const GroupModel& g, const FiniteSubset& t, const std::vector<FiniteSubset>& tiles,
                                  const TilingParams& p) {
    const int n = n_of_eps(p.eps);
    if (static_cast<int>(tiles.size()) != n)
        throw std::invalid_argument("expected N(eps) = " + std::to_string(n) + " tiles");
    QuasiTiling q;
    q.target = t;
    q.tiles = tiles;
    q.tile_indices.assign(tiles.size(), 0);
    q.params = p;
    q.centers.resize(tiles.size());
    q.subtiles.resize(tiles.size());

    FiniteSubset rest = t;
    const FiniteSubset id_only{g.identity()};
    for (int step = 0; step < n; ++step) {
        const auto ki = static_cast<std::size_t>(n - 1 - step);
        const FiniteSubset& l = ki > 0 ? tiles[ki - 1] : id_only;
        TilingParams ps = p;
        // δ_{l+1} = 2δ_l + δ
        ps.delta = (std::ldexp(1.0, step + 1) - 1.0) * p.delta;
        if (ps.delta >= 0.5)
            throw TilingError("delta_" + std::to_string(step) + " = " + std::to_string(ps.delta) +
                              " is too large to keep covering");
        if (rest.empty()) throw TilingError("nothing left to tile at step " + std::to_string(step));
        auto r = tile_step(g, rest, tiles[ki], l, ps, p.delta);
        for (auto& h : r.hypotheses)
            if (!h.holds) {
                h.name = "step" + std::to_string(step) + "." + h.name;
                q.warnings.push_back(h);
            }
        q.centers[ki] = std::move(r.cover.centers);
        q.subtiles[ki] = std::move(r.cover.subtiles);
        rest = std::move(r.remainder);
    }
    q.relaxed = !p.in_guaranteed_regime() || !q.warnings.empty();
    return q;
}

QuasiTiling stp_tiling(const GroupModel& g, const FiniteSubset& t, const FolnerSequence& seq, const TilingParams& p,
                       std::size_t max_index) {
    const auto idx = select_tiles(seq, n_of_eps(p.eps), p.delta, 1, max_index);
    std::vector<FiniteSubset> tiles;
    for (auto i : idx) tiles.push_back(seq.at(i));
    auto q = stp_tiling_with_tiles(g, t, tiles, p);
    q.tile_indices = idx;
    return q;
}

Report verify_tiling_structure(const GroupModel& g, const FiniteSubset& target, const std::vector<FiniteSubset>& tiles,
                               const std::vector<std::vector<Element>>& centers,
                               const std::vector<std::vector<FiniteSubset>>& subtiles, double eps) {
    Report rep;
    bool inside = true, witness = true, pairwise = true, sizes = true;
    std::unordered_map<Element, std::size_t, ElementHash> owner;  // point → tile index

    bool cross = true;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& ti = tiles[i];
        const auto& ci = centers[i];
        const std::size_t slack = eps_slack(ti.size(), eps);
        if (subtiles[i].size() != ci.size()) witness = false;

        // point → translates of T_i containing it
        std::unordered_map<Element, std::vector<std::uint32_t>, ElementHash> cover;
        for (std::size_t c = 0; c < ci.size(); ++c)
            for (const auto& y : ti) {
                auto z = g.multiply(y, ci[c]);
                if (!target.contains(z)) inside = false;
                cover[z].push_back(static_cast<std::uint32_t>(c));
            }

        // disjointified witnesses: subsets of T_i, large, disjoint translates
        // that exactly cover T_i C_i
        std::unordered_set<Element, ElementHash> wit;
        std::size_t wit_total = 0;
        for (std::size_t c = 0; c < ci.size() && c < subtiles[i].size(); ++c) {
            const auto& sub = subtiles[i][c];
            if (!is_subset(sub, ti)) witness = false;
            if (sub.size() + slack < ti.size()) sizes = false;
            for (const auto& y : sub) wit.insert(g.multiply(y, ci[c]));
            wit_total += sub.size();
        }
        if (wit.size() != wit_total || wit.size() != cover.size()) witness = false;

        // pairwise criterion on every overlapping pair of translates
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> overlaps;
        for (const auto& [z, list] : cover)
            for (std::size_t a = 0; a < list.size(); ++a)
                for (std::size_t b = a + 1; b < list.size(); ++b) ++overlaps[{list[a], list[b]}];
        for (const auto& [pr, cnt] : overlaps)
            if (cnt > 2 * slack) pairwise = false;

        for (const auto& [z, list] : cover) {
            auto [it, fresh] = owner.emplace(z, i);
            if (!fresh && it->second != i) cross = false;
        }
    }
    rep.add_flag("containment", inside);
    rep.add_flag("eps_disjoint_witness", witness);
    rep.add_flag("eps_disjoint_pairs", pairwise);
    rep.add_flag("subtile_size", sizes);
    rep.add_flag("tiles_disjoint", cross);
    return rep;
}

Report verify_quasi_tiling(const GroupModel& g, const QuasiTiling& q) {
    Report rep = verify_tiling_structure(g, q.target, q.tiles, q.centers, q.subtiles, q.params.eps);
    const int n = n_of_eps(q.params.eps);
    rep.add("tile_count", static_cast<double>(q.tiles.size()), "==", static_cast<double>(n));
    bool nested = true;
    for (std::size_t i = 0; i + 1 < q.tiles.size(); ++i) nested = nested && is_subset(q.tiles[i], q.tiles[i + 1]);
    rep.add_flag("tiles_nested", nested);
    bool indices = true;
    for (std::size_t i = 0; i < q.tile_indices.size(); ++i)
        if (q.tile_indices[i] != 0 && q.tile_indices[i] < i + 1) indices = false;
    rep.add_flag("tile_indices", indices);

    const double tsize = static_cast<double>(q.target.size());
    std::unordered_set<Element, ElementHash> all;
    for (std::size_t i = 0; i < q.tiles.size(); ++i) {
        std::unordered_set<Element, ElementHash> ti_ci;
        for (const auto& c : q.centers[i])
            for (const auto& y : q.tiles[i]) ti_ci.insert(g.multiply(y, c));
        all.insert(ti_ci.begin(), ti_ci.end());
        const double density = static_cast<double>(ti_ci.size()) / tsize;
        rep.add("density_gap_" + std::to_string(i + 1), std::abs(density - eta(static_cast<int>(i) + 1, q.params.eps)),
                "<", q.params.beta);
    }
    const bool corollary = q.params.beta < std::ldexp(q.params.eps, -n);
    rep.add("coverage", static_cast<double>(all.size()) / tsize, ">=", 1.0 - 2.0 * q.params.eps, corollary);
    return rep;
}

// ---------------------------------------------------------------------------
// Uniform families

std::vector<Element> UniformTilingFamily::member_centers(const GroupModel& g, std::size_t lambda,
                                                         std::size_t i) const {
    std::vector<Element> out;
    const auto linv = g.inverse(lambdas[lambda]);
    for (auto w : lambda_pieces[lambda]) {
        const auto [b, e] = piece_ranges[w][i];
        for (auto k = b; k < e; ++k) out.push_back(g.multiply(grand_centers[i][k], linv));
    }
    return out;
}

std::vector<FiniteSubset> UniformTilingFamily::member_subtiles(std::size_t lambda, std::size_t i) const {
    std::vector<FiniteSubset> out;
    for (auto w : lambda_pieces[lambda]) {
        const auto [b, e] = piece_ranges[w][i];
        for (auto k = b; k < e; ++k) out.push_back(grand_subtiles[i][k]);
    }
    return out;
}

namespace {

// first S_n with n >= start, n doubling, meeting every invariance requirement
std::size_t search_hat(const FolnerSequence& seq, std::size_t start, std::size_t max_index,
                       const std::vector<std::pair<FiniteSubset, double>>& reqs) {
    for (std::size_t n = std::max<std::size_t>(start, 1); n <= max_index; n *= 2) {
        const auto cand = seq.at(n);
        bool ok = std::all_of(reqs.begin(), reqs.end(),
                              [&](const auto& r) { return boundary_ratio(seq.model(), cand, r.first) < r.second; });
        if (ok) return n;
    }
    throw TilingError("no Folner set up to index " + std::to_string(max_index) + " is invariant enough to serve as T-hat");
}

}  // namespace

UniformTilingFamily ustp_family(const GroupModel& g, const FiniteSubset& uk, const FolnerSequence& seq,
                                const UstpParams& p) {
    if (uk.empty()) throw std::invalid_argument("ustp_family needs a nonempty target");
    UniformTilingFamily fam;
    fam.params = p;
    fam.target = uk;
    const double eps = p.base.eps;
    const int n = n_of_eps(eps);
    const int m = n_of_eps(p.aux_eps);

    fam.tile_indices = select_tiles(seq, n, p.base.delta, p.tile_first_index, p.max_index);
    for (auto i : fam.tile_indices) fam.tiles.push_back(seq.at(i));
    const auto top = difference_set(g, fam.tiles.back());

    // auxiliary tiles: T̄_1 ⊇ T_N invariant under T_N T_N^{-1}, then nested selection
    {
        std::size_t first = 0;
        for (std::size_t k = fam.tile_indices.back() + 1; k <= p.max_index && !first; ++k)
            if (boundary_ratio(g, seq.at(k), top) < p.aux_select_delta) first = k;
        if (!first) throw TilingError("no auxiliary tile found below the Folner index cap");
        fam.aux_indices = select_tiles(seq, m, p.aux_select_delta, first, p.max_index);
        for (auto i : fam.aux_indices) fam.aux_tiles.push_back(seq.at(i));
    }
    fam.control = difference_set(g, fam.aux_tiles.back());

    const auto ttinv = difference_set(g, uk);
    fam.hat_index = search_hat(seq, fam.aux_indices.back() + 1, p.max_index,
                               {{ttinv, p.aux_eps}, {fam.control, p.aux_delta}});
    fam.hat = seq.at(fam.hat_index);
    const double hat_size = static_cast<double>(fam.hat.size());

    // named conditions on the auxiliary parameter
    const double d0sq = p.base.delta * p.base.delta;
    for (std::size_t l = 0; l < fam.aux_tiles.size(); ++l) {
        const double r = boundary_ratio(g, fam.aux_tiles[l], top);
        fam.conditions.push_back({"aux_tile_" + std::to_string(l + 1) + "_base_invariance", r < d0sq, r, d0sq});
    }
    for (std::size_t l = 0; l < fam.aux_tiles.size(); ++l) {
        const double r = boundary_ratio(g, uk, difference_set(g, fam.aux_tiles[l]));
        const double thr = std::ldexp(p.aux_eps, -static_cast<int>(l + 1));
        fam.conditions.push_back({"target_aux_invariance_" + std::to_string(l + 1), r < thr, r, thr});
    }
    {
        const double r = boundary_ratio(g, fam.hat, ttinv);
        fam.conditions.push_back({"hat_target_invariance", r < p.aux_eps, r, p.aux_eps});
    }

    // auxiliary tiling of T̂ with disjointified pieces
    TilingParams aux = p.base;
    aux.eps = p.aux_eps;
    aux.beta = p.aux_beta;
    aux.delta = p.aux_delta;
    aux.enforce_hypotheses = false;
    const QuasiTiling hat_tiling = stp_tiling_with_tiles(g, fam.hat, fam.aux_tiles, aux);

    std::vector<char> in_b(fam.hat.size(), 0);
    fam.grand_centers.resize(static_cast<std::size_t>(n));
    fam.grand_subtiles.resize(static_cast<std::size_t>(n));
    std::size_t inner_failures = 0;
    for (std::size_t l = 0; l < hat_tiling.tiles.size(); ++l) {
        for (std::size_t c = 0; c < hat_tiling.centers[l].size(); ++c) {
            const auto piece = set_translate(g, hat_tiling.subtiles[l][c], hat_tiling.centers[l][c]);
            for (const auto& z : piece) in_b[static_cast<std::size_t>(fam.hat.index_of(z))] = 1;
            std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges(static_cast<std::size_t>(n), {0, 0});
            try {
                TilingParams inner = p.base;
                inner.enforce_hypotheses = false;
                auto qt = stp_tiling_with_tiles(g, piece, fam.tiles, inner);
                for (std::size_t i = 0; i < qt.centers.size(); ++i) {
                    auto b = static_cast<std::uint32_t>(fam.grand_centers[i].size());
                    fam.grand_centers[i].insert(fam.grand_centers[i].end(), qt.centers[i].begin(), qt.centers[i].end());
                    fam.grand_subtiles[i].insert(fam.grand_subtiles[i].end(), qt.subtiles[i].begin(),
                                                 qt.subtiles[i].end());
                    ranges[i] = {b, static_cast<std::uint32_t>(fam.grand_centers[i].size())};
                }
            } catch (const TilingError&) {
                ++inner_failures;
            }
            fam.pieces.push_back(piece);
            fam.piece_ranges.push_back(std::move(ranges));
        }
    }
    fam.conditions.push_back(
        {"inner_tilings_succeed", inner_failures == 0, static_cast<double>(inner_failures), 0.0, "<="});
    {
        double covered = static_cast<double>(std::count(in_b.begin(), in_b.end(), 1)) / hat_size;
        fam.conditions.push_back({"aux_cover", covered >= 1.0 - 2.0 * p.aux_eps, covered, 1.0 - 2.0 * p.aux_eps, ">="});
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        fam.gammas.push_back(static_cast<double>(fam.grand_centers[i].size()) / hat_size);

    // A = {a : T a ⊆ T̂}, Λ = {a ∈ A : |Ta ∖ B| / |T| <= sqrt(aux_eps)}
    const auto t0inv = g.inverse(uk[0]);
    const double tsize = static_cast<double>(uk.size());
    const double x_limit = std::sqrt(p.aux_eps);
    for (const auto& h : fam.hat) {
        const auto a = g.multiply(t0inv, h);
        std::size_t outside_b = 0;
        bool fits = true;
        for (const auto& t : uk) {
            auto pos = fam.hat.index_of(g.multiply(t, a));
            if (pos < 0) {
                fits = false;
                break;
            }
            if (!in_b[static_cast<std::size_t>(pos)]) ++outside_b;
        }
        if (!fits) continue;
        ++fam.fitting_translates;
        if (static_cast<double>(outside_b) / tsize <= x_limit) fam.lambdas.push_back(a);
    }
    if (fam.lambdas.size() > p.max_family)
        throw ResourceCapExceeded("family size " + std::to_string(fam.lambdas.size()) + " exceeds cap " +
                                  std::to_string(p.max_family));
    {
        const double frac = fam.fitting_translates
                                ? static_cast<double>(fam.lambdas.size()) / static_cast<double>(fam.fitting_translates)
                                : 0.0;
        const double need = 1.0 - 4.0 * std::sqrt(p.aux_eps);
        fam.conditions.push_back({"lambda_mass", frac >= need, frac, need, ">="});
    }

    // pieces lying inside T λ: W ⊆ Ta iff a ∈ ∩_{w∈W} T^{-1}w
    std::unordered_map<Element, std::uint32_t, ElementHash> lambda_pos;
    for (std::size_t i = 0; i < fam.lambdas.size(); ++i) lambda_pos.emplace(fam.lambdas[i], static_cast<std::uint32_t>(i));
    fam.lambda_pieces.assign(fam.lambdas.size(), {});
    for (std::size_t w = 0; w < fam.pieces.size(); ++w) {
        const auto& piece = fam.pieces[w];
        const auto& w0 = piece[0];
        for (const auto& t : uk) {
            const auto a = g.multiply(g.inverse(t), w0);
            auto it = lambda_pos.find(a);
            if (it == lambda_pos.end()) continue;
            const auto ainv = g.inverse(a);
            bool inside = std::all_of(piece.begin(), piece.end(),
                                      [&](const Element& z) { return uk.contains(g.multiply(z, ainv)); });
            if (inside) fam.lambda_pieces[it->second].push_back(static_cast<std::uint32_t>(w));
        }
    }
    return fam;
}

Report verify_uniform_family(const GroupModel& g, const UniformTilingFamily& fam) {
    Report rep;
    const auto& p = fam.params;
    const double eps = p.base.eps;
    const std::size_t n = fam.tiles.size();
    const double usize = static_cast<double>(fam.target.size());

    std::size_t bad_inside = 0, bad_witness = 0, bad_pairs = 0, bad_sizes = 0, bad_cross = 0;
    double min_cov = 1.0;

    const auto interior = set_difference(fam.target, k_boundary(g, fam.target, fam.control));
    std::vector<std::vector<std::uint32_t>> hits(n, std::vector<std::uint32_t>(interior.size(), 0));

    for (std::size_t lam = 0; lam < fam.lambdas.size(); ++lam) {
        std::vector<std::vector<Element>> centers(n);
        std::vector<std::vector<FiniteSubset>> subs(n);
        for (std::size_t i = 0; i < n; ++i) {
            centers[i] = fam.member_centers(g, lam, i);
            subs[i] = fam.member_subtiles(lam, i);
            for (const auto& c : centers[i]) {
                auto pos = interior.index_of(c);
                if (pos >= 0) ++hits[i][static_cast<std::size_t>(pos)];
            }
        }
        auto r = verify_tiling_structure(g, fam.target, fam.tiles, centers, subs, eps);
        bad_inside += !r.find("containment")->passed;
        bad_witness += !r.find("eps_disjoint_witness")->passed;
        bad_pairs += !r.find("eps_disjoint_pairs")->passed;
        bad_sizes += !r.find("subtile_size")->passed;
        bad_cross += !r.find("tiles_disjoint")->passed;

        std::unordered_set<Element, ElementHash> cov;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& c : centers[i])
                for (const auto& y : fam.tiles[i]) cov.insert(g.multiply(y, c));
        min_cov = std::min(min_cov, static_cast<double>(cov.size()) / usize);
    }

    rep.add("family_size", static_cast<double>(fam.lambdas.size()), ">", 0.0);
    rep.add("members_containment_failures", static_cast<double>(bad_inside), "==", 0.0);
    rep.add("members_eps_disjoint_witness_failures", static_cast<double>(bad_witness), "==", 0.0);
    rep.add("members_eps_disjoint_pair_failures", static_cast<double>(bad_pairs), "==", 0.0);
    rep.add("members_subtile_size_failures", static_cast<double>(bad_sizes), "==", 0.0);
    rep.add("members_tiles_disjoint_failures", static_cast<double>(bad_cross), "==", 0.0);

    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) weighted += fam.gammas[i] * static_cast<double>(fam.tiles[i].size());
    rep.add("gamma_weighted_sum", weighted, "<=", 2.0);

    const bool guaranteed = p.base.in_guaranteed_regime() && all_hold(fam.conditions);
    rep.add("coverage_min", min_cov, ">=", 1.0 - 4.0 * eps, guaranteed);
    rep.add("coverage_min_relaxed", min_cov, ">=", 1.0 - 4.0 * eps - 0.05);

    rep.add("interior_size", static_cast<double>(interior.size()), ">=", 0.0, false);
    const double lam_count = static_cast<double>(fam.lambdas.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = static_cast<double>(fam.tiles[i].size());
        const double target = eta(static_cast<int>(i) + 1, eps) / ti;
        double defect = 0.0, gamma_defect = 0.0;
        for (auto h : hits[i]) {
            const double freq = lam_count > 0 ? static_cast<double>(h) / lam_count : 0.0;
            defect = std::max(defect, std::abs(freq - target));
            gamma_defect = std::max(gamma_defect, std::abs(freq - fam.gammas[i]));
        }
        const std::string tag = std::to_string(i + 1);
        rep.add("uniformity_defect_" + tag, defect, "<", 3.0 * p.base.beta / ti + eps * fam.gammas[i], guaranteed);
        rep.add("gamma_defect_" + tag, gamma_defect, "<=", p.base.beta / ti, guaranteed);
    }
    for (const auto& c : fam.conditions)
        rep.add("condition." + c.name, c.measured, c.relation, c.threshold, false);
    return rep;
}

}  // namespace amenable
