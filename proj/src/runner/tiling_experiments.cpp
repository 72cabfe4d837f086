#include <cmath>
#include <map>

#include "amenable/boundary.hpp"
#include "amenable/tiling.hpp"
#include "internal.hpp"

namespace amenable::runner::detail {

namespace {

FiniteSubset random_subset(const FiniteSubset& from, double p, std::uint64_t seed, std::int64_t instance,
                           std::int64_t which) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < from.size(); ++i)
        if (unit(seed, {instance, which, static_cast<std::int64_t>(i)}) < p) out.push_back(from[i]);
    return FiniteSubset(std::move(out));
}

// ---- boundary-suite

void resolve_boundary_suite(Section& s, const Json&) {
    auto groups = s.has("groups") ? s.raw("groups") : Json::array({"Z2", "H"});
    if (!groups.is_array() || groups.empty()) s.fail("groups", "expected a nonempty list of group names");
    for (const auto& g : groups)
        if (!g.is_string() || (g != "Z" && g != "Z2" && g != "Z3" && g != "H"))
            s.fail("groups", "entries must be Z, Z2, Z3 or H");
    s.put("groups", groups);
    s.integer("instances_per_group", 500, 1, 1000000);
    s.integer("ball_radius", 6, 1, 12);
    s.integer("k_radius", 2, 1, 4);
    s.number("density", 0.1, 0.0, 1.0);
    s.number("k_density", 0.4, 0.0, 1.0);
    s.number("extra_density", 0.3, 0.0, 1.0);
}

RunArtifacts run_boundary_suite(const Json& p, const Common& c) {
    RunArtifacts a;
    Csv csv({"group", "check", "instances", "failures"});
    Json per_group = Json::object();
    const auto n = p.at("instances_per_group").get<std::int64_t>();
    std::int64_t total = 0, failures = 0;
    std::int64_t gi = 0;
    for (const auto& gname : p.at("groups")) {
        const auto g = group_by_name(gname.get<std::string>());
        const auto big = ball(g, p.at("ball_radius").get<int>());
        const auto small = ball(g, p.at("k_radius").get<int>());
        std::map<std::string, std::pair<std::int64_t, std::int64_t>> tally;  // name → (instances, failures)
        std::vector<std::string> order;
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t key = gi * 1000000 + i;
            auto t = random_subset(big, p.at("density").get<double>(), c.seed, key, 0);
            auto sset = random_subset(big, p.at("density").get<double>(), c.seed, key, 1);
            auto k = random_subset(small, p.at("k_density").get<double>(), c.seed, key, 2);
            auto extra = random_subset(small, p.at("extra_density").get<double>(), c.seed, key, 3);
            if (t.empty()) t = FiniteSubset{big[static_cast<std::size_t>(i) % big.size()]};
            if (k.empty()) k = FiniteSubset{g.identity()};
            const auto x = big[static_cast<std::size_t>(unit(c.seed, {key, 4}) * static_cast<double>(big.size()))];
            const auto rep = check_boundary_identities(g, t, sset, k, extra, x);
            for (const auto& ch : rep.checks()) {
                if (!tally.count(ch.name)) order.push_back(ch.name);
                auto& e = tally[ch.name];
                ++e.first;
                e.second += ch.passed ? 0 : 1;
            }
            ++total;
        }
        Json gj = Json::object();
        for (const auto& name : order) {
            const auto& [inst, fail] = tally[name];
            csv.row({gname.get<std::string>(), name, num(static_cast<std::uint64_t>(inst)),
                     num(static_cast<std::uint64_t>(fail))});
            a.verification.add(gname.get<std::string>() + "." + name + ".failures", static_cast<double>(fail), "==", 0);
            gj[name] = fail;
            failures += fail;
        }
        per_group[gname.get<std::string>()] = gj;
        ++gi;
    }
    a.results["instances"] = total;
    a.results["failures"] = failures;
    a.results["failures_by_group"] = per_group;
    a.files["boundary_suite.csv"] = csv.str();
    return a;
}

// ---- tile

FiniteSubset control_set(const GroupModel& g, const std::string& name) {
    if (name == "identity") return FiniteSubset{g.identity()};
    if (name == "ball1") return ball(g, 1);
    // forward: {id, first generator direction}
    std::vector<std::int64_t> e(static_cast<std::size_t>(g.rank()), 0);
    e[0] = 1;
    return FiniteSubset{g.identity(), g.element(std::span<const std::int64_t>(e))};
}

void resolve_tile(Section& s, const Json&) {
    const auto random = s.integer("random_instances", 0, 0, 10000);
    if (random > 0) {
        const auto g = group_choice(s, "group", "Z", {"Z", "Z2"});
        (void)g;
        s.choice("control", "forward", {"forward"});
        return;
    }
    const auto g = group_choice(s, "group", "Z");
    shape_of(s, "target_shape", g, g == "Z" ? std::vector<std::int64_t>{2000} : std::vector<std::int64_t>{});
    shape_of(s, "k_shape", g, g == "Z" ? std::vector<std::int64_t>{60} : std::vector<std::int64_t>{});
    const double eps = s.number("eps", 0.3, 0.0, 0.5, true, true);
    (void)eps;
    s.number("beta", 0.1, 0.0, 1.0, true, true);
    const double delta = s.number("delta", 0.4, 0.0, 0.5, true, true);
    s.number("zeta", 0.19, 0.0, delta / 2.0, true, true);
    s.choice("control", "forward", {"forward", "ball1", "identity"});
    s.flag("enforce_hypotheses", false);
}

struct TileInstance {
    GroupModel g = GroupModel::lattice(1);
    FiniteSubset t, k;
    TilingParams p;
};

// random instance inside the covering hypotheses: |∂_B K| < ζ²|K|,
// |∂_{KK^{-1}} T| < δ|T|, ζ < δ/2
TileInstance random_tile_instance(const std::string& group, std::uint64_t seed, std::int64_t i) {
    auto u = [&](std::int64_t w) { return unit(seed, {i, w}); };
    TileInstance in;
    in.g = group_by_name(group);
    const std::int64_t len = 60 + static_cast<std::int64_t>(u(0) * 41);
    const std::int64_t h = group == "Z" ? 1 : 1 + static_cast<std::int64_t>(u(1) * 3);
    const double delta = 0.4 + 0.08 * u(2);
    const double eps = 0.05 + 0.4 * u(3);
    const auto b = control_set(in.g, "forward");
    in.k = group == "Z" ? shape_set(in.g, {len}) : shape_set(in.g, {len, h});
    const double zeta_min = std::sqrt(boundary_ratio(in.g, in.k, b));
    const double zeta = zeta_min + (0.05 + 0.9 * u(4)) * (delta / 2.0 - zeta_min);
    // KK^{-1} is the box [-a,a]x[-b,b]; count its boundary on a W x H box directly
    const double a = static_cast<double>(len - 1), bb = static_cast<double>(h - 1);
    auto ratio = [&](double w, double ht) {
        return ((w + 2 * a) * (ht + 2 * bb) - std::max(0.0, w - 2 * a) * std::max(0.0, ht - 2 * bb)) / (w * ht);
    };
    const std::int64_t height =
        group == "Z" ? 1 : static_cast<std::int64_t>(std::ceil(4.0 * static_cast<double>(h) / delta * (1.1 + u(6))));
    std::int64_t width = static_cast<std::int64_t>(std::ceil(4.0 * static_cast<double>(len) / delta * (1.05 + u(5))));
    while (!(ratio(static_cast<double>(width), static_cast<double>(height)) < delta)) width += width / 16 + 1;
    in.t = group == "Z" ? shape_set(in.g, {width}) : shape_set(in.g, {width, height});
    in.p = TilingParams::make(in.g, eps, eps / 2, delta, zeta, b);
    in.p.enforce_hypotheses = true;
    return in;
}

RunArtifacts run_tile(const Json& p, const Common& c) {
    RunArtifacts a;
    const auto random = p.at("random_instances").get<std::int64_t>();
    std::vector<TileInstance> instances;
    if (random > 0) {
        for (std::int64_t i = 0; i < random; ++i)
            instances.push_back(random_tile_instance(p.at("group").get<std::string>(), c.seed, i));
    } else {
        TileInstance in;
        in.g = group_by_name(p.at("group").get<std::string>());
        in.t = shape_set(in.g, p.at("target_shape").get<std::vector<std::int64_t>>());
        in.k = shape_set(in.g, p.at("k_shape").get<std::vector<std::int64_t>>());
        in.p = TilingParams::make(in.g, p.at("eps").get<double>(), p.at("beta").get<double>(),
                                  p.at("delta").get<double>(), p.at("zeta").get<double>(),
                                  control_set(in.g, p.at("control").get<std::string>()));
        in.p.enforce_hypotheses = p.at("enforce_hypotheses").get<bool>();
        instances.push_back(std::move(in));
    }

    Csv csv({"instance", "T_size", "K_size", "eps", "delta", "zeta", "centers", "covered", "coverage_low",
             "coverage_high", "min_subtile", "in_regime", "passed"});
    Json tilings = Json::array();
    std::size_t passed = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& in = instances[i];
        const auto cover = ow_cover(in.g, in.t, in.k, in.p);
        const auto rep = verify_cover(in.g, in.t, in.k, in.p, cover);
        const std::string prefix = instances.size() > 1 ? "instance" + std::to_string(i) + "." : "";
        a.verification.append(rep, prefix);
        const bool regime = all_hold(cover.hypotheses);
        if (random > 0) a.verification.add_flag(prefix + "in_regime", regime);
        std::size_t min_sub = in.k.size();
        for (const auto& sub : cover.subtiles) min_sub = std::min(min_sub, sub.size());
        const double ts = static_cast<double>(in.t.size());
        csv.row({num(static_cast<std::uint64_t>(i)), num(static_cast<std::uint64_t>(in.t.size())),
                 num(static_cast<std::uint64_t>(in.k.size())), num(in.p.eps), num(in.p.delta), num(in.p.zeta),
                 num(static_cast<std::uint64_t>(cover.centers.size())), num(static_cast<std::uint64_t>(cover.covered)),
                 num((in.p.eps - in.p.delta) * ts), num((in.p.eps + in.p.delta) * ts),
                 num(static_cast<std::uint64_t>(min_sub)), regime ? "1" : "0", rep.all_passed() ? "1" : "0"});
        passed += rep.all_passed();

        Json tj;
        tj["group"] = in.g.name();
        tj["target_size"] = in.t.size();
        tj["k_size"] = in.k.size();
        tj["eps"] = in.p.eps;
        tj["delta"] = in.p.delta;
        tj["zeta"] = in.p.zeta;
        tj["seeded"] = cover.seeded;
        tj["covered"] = cover.covered;
        Json centers = Json::array(), subs = Json::array();
        for (std::size_t j = 0; j < cover.centers.size(); ++j) {
            centers.push_back(element_json(cover.centers[j], in.g));
            subs.push_back(cover.subtiles[j].size());
        }
        tj["centers"] = centers;
        tj["subtile_sizes"] = subs;
        Json hyps = Json::array();
        for (const auto& h : cover.hypotheses)
            hyps.push_back({{"name", h.name}, {"holds", h.holds}, {"measured", h.measured}, {"threshold", h.threshold}});
        tj["hypotheses"] = hyps;
        tilings.push_back(std::move(tj));
    }
    a.results["instances"] = instances.size();
    a.results["instances_passed"] = passed;
    a.files["tile_instances.csv"] = csv.str();
    a.files["tiling.json"] = (instances.size() == 1 ? tilings[0] : tilings).dump(2) + "\n";
    return a;
}

// ---- stp

void resolve_stp(Section& s, const Json&) {
    const auto g = group_choice(s, "group", "Z");
    shape_of(s, "target_shape", g, g == "Z" ? std::vector<std::int64_t>{10000} : std::vector<std::int64_t>{});
    s.number("eps", 0.4, 0.0, 0.5, true, true);
    s.number("beta", 0.09, 0.0, 1.0, true, true);
    const double delta = s.number("delta", 1e-3, 0.0, 0.5, true, true);
    s.number("zeta", 1e-4, 0.0, delta / 2.0, true, true);
    s.choice("control", "identity", {"forward", "ball1", "identity"});
    s.integer("first_index", 1, 1, 100000);
    s.integer("max_index", 4096, 1, 1000000);
}

Json tiling_json(const GroupModel& g, const QuasiTiling& q) {
    Json j;
    j["group"] = g.name();
    j["target_size"] = q.target.size();
    j["relaxed"] = q.relaxed;
    Json tiles = Json::array();
    for (std::size_t i = 0; i < q.tiles.size(); ++i) {
        Json t;
        t["index"] = i + 1;
        t["folner_index"] = i < q.tile_indices.size() ? q.tile_indices[i] : 0;
        t["size"] = q.tiles[i].size();
        Json centers = Json::array();
        for (const auto& x : q.centers[i]) centers.push_back(element_json(x, g));
        t["centers"] = centers;
        tiles.push_back(std::move(t));
    }
    j["tiles"] = tiles;
    Json warn = Json::array();
    for (const auto& w : q.warnings) warn.push_back({{"name", w.name}, {"measured", w.measured}, {"threshold", w.threshold}});
    j["warnings"] = warn;
    return j;
}

RunArtifacts run_stp(const Json& p, const Common&) {
    RunArtifacts a;
    const auto g = group_by_name(p.at("group").get<std::string>());
    const auto t = shape_set(g, p.at("target_shape").get<std::vector<std::int64_t>>());
    const auto par = TilingParams::make(g, p.at("eps").get<double>(), p.at("beta").get<double>(),
                                        p.at("delta").get<double>(), p.at("zeta").get<double>(),
                                        control_set(g, p.at("control").get<std::string>()));
    FolnerSequence seq(g);
    const auto idx = select_tiles(seq, n_of_eps(par.eps), par.delta, p.at("first_index").get<std::size_t>(),
                                  p.at("max_index").get<std::size_t>());
    std::vector<FiniteSubset> tiles;
    for (auto i : idx) tiles.push_back(seq.at(i));
    auto q = stp_tiling_with_tiles(g, t, tiles, par);
    q.tile_indices = idx;
    a.verification = verify_quasi_tiling(g, q);

    Csv csv({"i", "folner_index", "tile_size", "centers", "eta", "density", "gap", "beta"});
    Json dens = Json::array(), etas = Json::array();
    double covered = 0;
    for (std::size_t i = 0; i < q.tiles.size(); ++i) {
        std::vector<Element> pts;
        for (std::size_t c = 0; c < q.centers[i].size(); ++c)
            for (const auto& y : q.subtiles[i][c]) pts.push_back(g.multiply(y, q.centers[i][c]));
        const double d = static_cast<double>(FiniteSubset(std::move(pts)).size()) / static_cast<double>(t.size());
        const double e = eta(static_cast<int>(i) + 1, par.eps);
        covered += d;
        dens.push_back(d);
        etas.push_back(e);
        csv.row({num(static_cast<std::uint64_t>(i + 1)), num(static_cast<std::uint64_t>(idx[i])),
                 num(static_cast<std::uint64_t>(q.tiles[i].size())), num(static_cast<std::uint64_t>(q.centers[i].size())),
                 num(e), num(d), num(std::abs(d - e)), num(par.beta)});
    }
    a.results["tiles"] = q.tiles.size();
    a.results["tile_indices"] = idx;
    a.results["eta"] = etas;
    a.results["densities"] = dens;
    a.results["coverage"] = covered;
    a.results["in_guaranteed_regime"] = par.in_guaranteed_regime();
    a.files["stp_densities.csv"] = csv.str();
    a.files["tiling.json"] = tiling_json(g, q).dump(2) + "\n";
    return a;
}

// ---- ustp

void resolve_ustp(Section& s, const Json&) {
    const auto g = group_choice(s, "group", "Z");
    shape_of(s, "target_shape", g, g == "Z" ? std::vector<std::int64_t>{40} : std::vector<std::int64_t>{});
    s.number("eps", 0.4, 0.0, 0.5, true, true);
    s.number("beta", 0.09, 0.0, 1.0, true, true);
    const double delta = s.number("delta", 0.1, 0.0, 0.5, true, true);
    s.number("zeta", 1e-4, 0.0, delta / 2.0, true, true);
    s.number("aux_eps", 0.5, 0.0, 0.5, true, false);
    s.number("aux_beta", 0.25, 0.0, 1.0, true, true);
    s.number("aux_select_delta", 0.5, 0.0, 1.0, true, true);
    s.number("aux_delta", 0.02, 0.0, 0.5, true, true);
    s.integer("tile_first_index", 1, 1, 100000);
    s.integer("max_index", 4096, 1, 1000000);
}

RunArtifacts run_ustp(const Json& p, const Common& c) {
    RunArtifacts a;
    const auto g = group_by_name(p.at("group").get<std::string>());
    const auto uk = shape_set(g, p.at("target_shape").get<std::vector<std::int64_t>>());
    UstpParams up;
    up.base = TilingParams::make(g, p.at("eps").get<double>(), p.at("beta").get<double>(), p.at("delta").get<double>(),
                                 p.at("zeta").get<double>());
    up.aux_eps = p.at("aux_eps").get<double>();
    up.aux_beta = p.at("aux_beta").get<double>();
    up.aux_select_delta = p.at("aux_select_delta").get<double>();
    up.aux_delta = p.at("aux_delta").get<double>();
    up.tile_first_index = p.at("tile_first_index").get<std::size_t>();
    up.max_index = p.at("max_index").get<std::size_t>();
    up.max_family = c.max_family;
    FolnerSequence seq(g);
    const auto fam = ustp_family(g, uk, seq, up);
    a.verification = verify_uniform_family(g, fam);

    Csv csv({"i", "tile_size", "gamma", "gamma_times_size", "eta_over_size"});
    double mass = 0;
    for (std::size_t i = 0; i < fam.tiles.size(); ++i) {
        const double sz = static_cast<double>(fam.tiles[i].size());
        mass += fam.gammas[i] * sz;
        csv.row({num(static_cast<std::uint64_t>(i + 1)), num(fam.tiles[i].size()), num(fam.gammas[i]),
                 num(fam.gammas[i] * sz), num(eta(static_cast<int>(i) + 1, up.base.eps) / sz)});
    }
    a.results["target_size"] = uk.size();
    a.results["hat_size"] = fam.hat.size();
    a.results["hat_index"] = fam.hat_index;
    a.results["tile_indices"] = fam.tile_indices;
    a.results["aux_indices"] = fam.aux_indices;
    a.results["members"] = fam.lambdas.size();
    a.results["fitting_translates"] = fam.fitting_translates;
    a.results["gammas"] = fam.gammas;
    a.results["gamma_mass"] = mass;
    Json conds = Json::array();
    for (const auto& h : fam.conditions)
        conds.push_back({{"name", h.name}, {"holds", h.holds}, {"measured", h.measured}, {"threshold", h.threshold}});
    a.results["conditions"] = conds;
    a.files["ustp_gammas.csv"] = csv.str();
    return a;
}

}  // namespace

std::vector<ExperimentKind> tiling_kinds() {
    return {
        {"boundary-suite", "randomized boundary set relations in the chosen groups", resolve_boundary_suite,
         run_boundary_suite},
        {"tile", "one or many eps-disjoint covers with their postconditions", resolve_tile, run_tile},
        {"stp", "quasi tiling of a box by nested Folner tiles with density checks", resolve_stp, run_stp},
        {"ustp", "relaxed uniform tiling family with structure and uniformity checks", resolve_ustp, run_ustp},
    };
}

}  // namespace amenable::runner::detail
