#include <algorithm>
#include <cmath>

#include "amenable/ergodic.hpp"
#include "amenable/errors.hpp"
#include "amenable/percolation.hpp"
#include "amenable/spectral.hpp"
#include "amenable/tiling.hpp"
#include "internal.hpp"

namespace amenable::runner::detail {

namespace {

std::size_t rank_of(const std::string& group) { return group == "Z" ? 1 : group == "Z2" ? 2 : 3; }

std::size_t alphabet_of(const Json& coloring) {
    const auto rule = coloring.at("rule").get<std::string>();
    if (rule == "iid") return coloring.at("weights").size();
    if (rule == "bits") return std::size_t{1} << coloring.at("probs").size();
    return coloring.at("alphabet").get<std::size_t>();
}

std::vector<std::int64_t> sorted_js(Section& s, const std::vector<std::int64_t>& def, const std::string& group) {
    auto js = s.integers("js", def, 1, 5000000);
    if (!std::is_sorted(js.begin(), js.end())) s.fail("js", "indices must be ascending");
    const double rank = group == "H" ? 4.0 : static_cast<double>(rank_of(group));
    if (std::pow(static_cast<double>(js.back()), rank) > 5e6) s.fail("js", "largest window exceeds 5e6 elements");
    return js;
}

void resolve_tiles(Section s, Section& parent, double first_delta) {
    s.integer("first_index", 4, 1, 100000);
    s.number("delta", first_delta, 0.0, 1.0, true, true);
    s.integer("max_index", 100000, 1, 5000000);
    parent.put("tiles", s.finish());
}

std::vector<FiniteSubset> make_tiles(const FolnerSequence& seq, const Json& t, double eps, std::vector<std::size_t>& idx) {
    idx = select_tiles(seq, n_of_eps(eps), t.at("delta").get<double>(), t.at("first_index").get<std::size_t>(),
                       t.at("max_index").get<std::size_t>());
    std::vector<FiniteSubset> tiles;
    for (auto i : idx) tiles.push_back(seq.at(i));
    return tiles;
}

std::vector<FiniteSubset> random_partition(const FiniteSubset& set, std::uint64_t seed, std::int64_t k,
                                           std::size_t max_pieces) {
    const auto pieces = 1 + static_cast<std::size_t>(unit(seed, {k, 0}) * static_cast<double>(max_pieces));
    std::vector<std::vector<Element>> parts(pieces);
    if (k % 2 == 0) {
        for (std::size_t i = 0; i < set.size(); ++i)
            parts[static_cast<std::size_t>(unit(seed, {k, 1, static_cast<std::int64_t>(i)}) *
                                           static_cast<double>(pieces))]
                .push_back(set[i]);
    } else {
        // contiguous runs in canonical order
        std::vector<double> cuts;
        for (std::size_t c = 1; c < pieces; ++c) cuts.push_back(unit(seed, {k, 2, static_cast<std::int64_t>(c)}));
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i < set.size(); ++i) {
            const double pos = static_cast<double>(i) / static_cast<double>(set.size());
            parts[static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), pos) - cuts.begin())].push_back(
                set[i]);
        }
    }
    std::vector<FiniteSubset> out;
    for (auto& p : parts)
        if (!p.empty()) out.emplace_back(std::move(p));
    return out;
}

// ---- ergodic

void resolve_ergodic(Section& s, const Json& common) {
    const auto group = group_choice(s, "group", "Z");
    const auto seed = common.at("seed").get<std::uint64_t>();
    auto col = resolve_coloring(s.section("coloring"), seed, true);
    s.put("coloring", col);
    const auto alphabet = alphabet_of(col);

    auto f = s.section("function");
    const auto kind = f.choice("kind", "occurrences", {"occurrences", "cardinality"});
    if (kind == "occurrences") {
        Json sites = f.has("sites") ? f.raw("sites") : Json::array({Json::array({0}), Json::array({1})});
        if (!sites.is_array() || sites.empty()) f.fail("sites", "expected a nonempty list of coordinate lists");
        const auto rank = group == "H" ? 3 : rank_of(group);
        for (const auto& x : sites)
            if (!x.is_array() || x.size() != rank || !std::all_of(x.begin(), x.end(), [](const Json& v) {
                    return v.is_number_integer();
                }))
                f.fail("sites", "each site lists " + std::to_string(rank) + " integer coordinates");
        f.put("sites", sites);
        auto values = f.integers("values", std::vector<std::int64_t>(sites.size(), 0), 0,
                                 static_cast<std::int64_t>(alphabet) - 1);
        if (values.size() != sites.size()) f.fail("values", "needs one color per site");
    }
    s.put("function", f.finish());

    const double eps = s.number("eps", 0.4, 0.0, 0.5, true, true);
    (void)eps;
    resolve_tiles(s.section("tiles"), s, 0.55);
    sorted_js(s, {1000, 10000, 100000}, group);
    s.number("j0_invariance", 0.01, 0.0, 1.0, true, true);
    s.choice("source", "exhaustive", {"exhaustive", "monte_carlo"});
    s.integer("samples", 2000, 2, 100000000);
    s.number("average_tolerance", 0.005, 0.0, 1.0, true, false);
}

RunArtifacts run_ergodic(const Json& p, const Common& c) {
    RunArtifacts a;
    const auto g = group_by_name(p.at("group").get<std::string>());
    const auto col = make_coloring(p.at("coloring"));
    const auto& fj = p.at("function");
    AlmostAdditiveFunction f;
    double oracle = 1.0;
    if (fj.at("kind") == "occurrences") {
        std::vector<Element> sites;
        for (const auto& x : fj.at("sites")) sites.push_back(g.element(std::span<const std::int64_t>(
            x.get<std::vector<std::int64_t>>().data(), static_cast<std::size_t>(g.rank()))));
        const FiniteSubset dom(sites);
        if (dom.size() != sites.size()) throw ConfigError("params.function.sites: repeated site");
        std::vector<Color> values(dom.size());
        const auto vals = fj.at("values").get<std::vector<Color>>();
        for (std::size_t i = 0; i < sites.size(); ++i) values[static_cast<std::size_t>(dom.index_of(sites[i]))] = vals[i];
        const Pattern pat(dom, values);
        f = occurrence_function(g, pat);
        oracle = pattern_frequency(pat, col);
    } else {
        f = cardinality_function();
    }

    const double eps = p.at("eps").get<double>();
    FolnerSequence seq(g);
    std::vector<std::size_t> idx;
    const auto tiles = make_tiles(seq, p.at("tiles"), eps, idx);
    SemiExplicitOptions opt;
    opt.source = p.at("source") == "exhaustive" ? FrequencySource::Exhaustive : FrequencySource::MonteCarlo;
    opt.samples = p.at("samples").get<std::size_t>();
    opt.seed = c.seed;
    opt.max_pattern_bits = c.max_pattern_bits;
    std::vector<std::size_t> js;
    for (auto j : p.at("js")) js.push_back(j.get<std::size_t>());

    const auto st = ergodic_study(g, f, col, seq, js, tiles, eps, p.at("j0_invariance").get<double>(), opt);
    a.verification = st.report;
    const auto& last = st.rows.back();
    a.verification.add("average_vs_frequency_j" + std::to_string(last.j), std::abs(last.average.scalar() - oracle), "<=",
                       p.at("average_tolerance").get<double>());

    Csv csv({"j", "window", "average", "delta", "window_ratio", "leading", "frequency", "tile_boundary", "window_term",
             "total", "average_bound", "limit_bound", "past_j0"});
    for (const auto& r : st.rows)
        csv.row({num(static_cast<std::uint64_t>(r.j)), num(static_cast<std::uint64_t>(r.window)), num(r.average.scalar()),
                 num(r.delta), num(r.window_ratio), num(r.bound.leading), num(r.bound.frequency),
                 num(r.bound.tile_boundary), num(r.bound.window), num(r.bound.total), num(r.bound.average_bound),
                 num(r.bound.limit_bound), r.past_j0 ? "1" : "0"});
    a.files["ergodic_rows.csv"] = csv.str();

    Json sizes = Json::array();
    for (const auto& t : tiles) sizes.push_back(t.size());
    a.results["function"] = f.name;
    a.results["c"] = f.c;
    a.results["d"] = f.boundary.d;
    a.results["tile_indices"] = idx;
    a.results["tile_sizes"] = sizes;
    a.results["semi_explicit_limit"] = st.limit.value.scalar();
    a.results["semi_explicit_std_error"] = st.limit.std_error ? Json(*st.limit.std_error) : Json(nullptr);
    a.results["pattern_evaluations"] = st.limit.evaluations;
    a.results["frequency_oracle"] = oracle;
    a.results["j0"] = st.j0 ? Json(*st.j0) : Json(nullptr);
    a.results["last_window"] = last.window;
    a.results["last_average"] = last.average.scalar();
    a.results["last_delta"] = last.delta;
    a.results["last_limit_bound"] = last.bound.limit_bound;
    a.results["last_estimate_bound"] = last.bound.total;
    return a;
}

// ---- ids

void resolve_ids(Section& s, const Json& common) {
    const auto group = group_choice(s, "group", "Z");
    auto op = s.section("operator");
    const auto kind = op.choice("kind", "adjacency", {"adjacency", "anderson"});
    std::size_t needed = 1;
    if (kind == "anderson") {
        auto pot = op.numbers("potential", {-1.0, 1.0}, -1e6, 1e6);
        needed = pot.size();
        op.number("hopping", 1.0, -1e6, 1e6);
    }
    s.put("operator", op.finish());

    Json dflt = Json::object();
    if (kind == "adjacency") dflt = {{"rule", "iid"}, {"weights", {1.0}}};
    auto cs = s.has("coloring") ? s.section("coloring") : Section(dflt, "params.coloring");
    auto col = resolve_coloring(std::move(cs), common.at("seed").get<std::uint64_t>(), true);
    if (kind == "anderson" && alphabet_of(col) > needed)
        s.fail("coloring", "the potential table needs one value per color");
    s.put("coloring", col);

    s.number("eps", 0.4, 0.0, 0.5, true, true);
    resolve_tiles(s.section("tiles"), s, 0.3);
    sorted_js(s, {500, 1000, 2000}, group);
    const auto ref = s.choice("reference", kind == "adjacency" && group == "Z" ? "z_adjacency" : "largest_window",
                              {"z_adjacency", "largest_window"});
    if (ref == "z_adjacency" && (kind != "adjacency" || group != "Z"))
        s.fail("reference", "the arccos law is the IDS of the adjacency operator on Z only");
    s.number("sup_tolerance", 0.01, 0.0, 1.0, true, false);

    auto add = s.section("additivity");
    add.integer("partitions", 100, 0, 100000);
    shape_of(add, "shape", group, group == "Z" ? std::vector<std::int64_t>{60} : std::vector<std::int64_t>{8, 8});
    add.integer("max_pieces", 6, 1, 1000);
    s.put("additivity", add.finish());
}

FiniteHoppingOperator make_operator(const GroupModel& g, const Json& op) {
    if (op.at("kind") == "adjacency") return adjacency_operator(g);
    return anderson_operator(g, op.at("potential").get<std::vector<double>>(), op.at("hopping").get<double>());
}

RunArtifacts run_ids(const Json& p, const Common& c) {
    RunArtifacts a;
    const auto g = group_by_name(p.at("group").get<std::string>());
    const auto h = make_operator(g, p.at("operator"));
    const auto col = make_coloring(p.at("coloring"));
    const double eps = p.at("eps").get<double>();
    FolnerSequence seq(g);
    std::vector<std::size_t> idx;
    const auto tiles = make_tiles(seq, p.at("tiles"), eps, idx);
    std::vector<std::size_t> js;
    for (auto j : p.at("js")) js.push_back(j.get<std::size_t>());
    for (auto j : js)
        if (seq.at(j).size() * h.dim > c.max_matrix_size)
            throw ResourceCapExceeded("window j=" + std::to_string(j) + " needs a matrix above max_matrix_size");

    IdsReference ref;
    const bool exact = p.at("reference") == "z_adjacency";
    if (exact) {
        ref.exact = z_adjacency_ids;
        ref.lo = -2.0;
        ref.hi = 2.0;
    } else {
        IdsReference self;
        self.step = ids_approximant(h, col, seq, js.back(), c.max_matrix_size);
        const auto top = ids_error_report(h, col, seq, js.back(), tiles, eps, self);
        ref.step = self.step;
        ref.bound_slack = top.bound;
    }

    Csv errs({"j", "window", "measured", "leading", "frequency", "window_term", "tile_term", "bound"});
    Json rows = Json::array();
    for (auto j : js) {
        const auto rep = ids_error_report(h, col, seq, j, tiles, eps, ref);
        a.verification.append(rep.report);
        if (exact)
            a.verification.add("arccos_sup_distance_j" + std::to_string(j), rep.measured, "<=",
                               p.at("sup_tolerance").get<double>(), j == js.back());
        errs.row({num(static_cast<std::uint64_t>(j)), num(static_cast<std::uint64_t>(rep.window)), num(rep.measured),
                  num(rep.leading), num(rep.frequency), num(rep.window_term), num(rep.tile_term), num(rep.bound)});
        a.files["ids_j" + std::to_string(j) + ".csv"] = step_csv(rep.approximant, "E", "ids");
        rows.push_back({{"j", j}, {"window", rep.window}, {"measured", rep.measured}, {"bound", rep.bound}});
    }
    a.files["ids_errors.csv"] = errs.str();

    const auto& add = p.at("additivity");
    const auto box = shape_set(g, add.at("shape").get<std::vector<std::int64_t>>());
    Csv ac({"partition", "pieces", "defect", "budget", "coupling_rows"});
    const auto n = add.at("partitions").get<std::int64_t>();
    double worst = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        const auto parts = random_partition(box, c.seed ^ 0x1d5, k, add.at("max_pieces").get<std::size_t>());
        const auto r = check_count_additivity(h, col, parts);
        const std::string tag = "additivity_" + std::to_string(k);
        a.verification.add(tag + ".budget", r.defect, "<=", r.budget);
        a.verification.add(tag + ".interlacing", r.defect, "<=", static_cast<double>(r.coupling_rows));
        worst = std::max(worst, r.budget > 0 ? r.defect / r.budget : r.defect);
        ac.row({num(static_cast<std::uint64_t>(k)), num(static_cast<std::uint64_t>(parts.size())), num(r.defect),
                num(r.budget), num(static_cast<std::uint64_t>(r.coupling_rows))});
    }
    a.files["additivity.csv"] = ac.str();

    a.results["operator"] = h.name;
    a.results["range"] = h.range();
    a.results["tile_indices"] = idx;
    a.results["windows"] = rows;
    a.results["additivity_partitions"] = n;
    a.results["additivity_worst_defect_ratio"] = worst;
    return a;
}

// ---- percolation

void resolve_percolation(Section& s, const Json&) {
    const auto group = group_choice(s, "group", "Z");
    if (s.has("p")) {
        const std::size_t gens = group_by_name(group).generators().size();
        auto pv = s.numbers("p", {}, 0.0, 1.0);
        if (pv.size() != gens) s.fail("p", "needs one probability per generator (" + std::to_string(gens) + ")");
        for (double x : pv)
            if (x >= 1.0) s.fail("p", "bond probabilities must be below 1");
    } else {
        s.number("q", 0.5, 0.0, 1.0, false, true);
    }
    shape_of(s, "window_shape", group, group == "Z" ? std::vector<std::int64_t>{100000} : std::vector<std::int64_t>{64, 64});
    s.integer("samples", 64, 2, 1000000);
    const auto m_max = s.integer("m_max", 30, 1, 10000);
    s.integer("check_m", 10, 1, m_max);
    s.number("sigma", 3.0, 0.0, 100.0, true, false);
    s.number("kappa_abs_tolerance", 0.005, 0.0, 1.0, true, false);
    s.number("c_sum_floor", 0.999, 0.0, 1.0);

    auto add = s.section("additivity");
    add.integer("partitions_per_group", 100, 0, 100000);
    add.integer("max_pieces", 6, 1, 1000);
    add.number("q", 0.5, 0.0, 1.0, false, true);
    Json groups = add.has("groups") ? add.raw("groups")
                                    : Json::array({{{"group", "Z"}, {"shape", {300}}}, {{"group", "Z2"}, {"shape", {14, 14}}}});
    if (!groups.is_array()) add.fail("groups", "expected a list of {group, shape}");
    Json resolved = Json::array();
    for (std::size_t i = 0; i < groups.size(); ++i) {
        Section gs(groups[i], add.path() + ".groups[" + std::to_string(i) + "]");
        const auto gname = group_choice(gs, "group", "Z");
        shape_of(gs, "shape", gname, {});
        resolved.push_back(gs.finish());
    }
    add.put("groups", resolved);
    s.put("additivity", add.finish());
}

RunArtifacts run_percolation(const Json& p, const Common& c) {
    RunArtifacts a;
    const auto gname = p.at("group").get<std::string>();
    const auto g = group_by_name(gname);
    const auto par = p.contains("p") ? PercolationParams::make(g, p.at("p").get<std::vector<double>>(), c.seed)
                                     : PercolationParams::from_edge_probability(g, p.at("q").get<double>(), c.seed);
    const auto lam = shape_set(g, p.at("window_shape").get<std::vector<std::int64_t>>());
    const auto m_max = p.at("m_max").get<std::size_t>();
    const auto check_m = p.at("check_m").get<std::size_t>();
    const double sigma = p.at("sigma").get<double>();
    const auto st = cluster_statistics(par, lam, p.at("samples").get<std::size_t>(), m_max);

    // exact one-dimensional laws with q = p_{+1} p_{-1}
    const bool line = gname == "Z";
    const double q = par.edge_probability(0);
    Csv dens({"m", "c", "c_se", "c_exact", "d", "d_se", "d_exact", "phi", "phi_se", "phi_exact"});
    for (std::size_t m = 1; m <= m_max; ++m) {
        const double md = static_cast<double>(m);
        const double ce = (1 - q) * std::pow(q, md - 1), de = md * (1 - q) * (1 - q) * std::pow(q, md - 1),
                     pe = 1 - std::pow(q, md);
        const double phi = m <= st.phi.size() ? st.phi[m - 1] : 1.0;
        const double phi_se = m <= st.phi_se.size() ? st.phi_se[m - 1] : 0.0;
        dens.row({num(static_cast<std::uint64_t>(m)), num(st.c[m - 1]), num(st.c_se[m - 1]), line ? num(ce) : "",
                  num(st.d[m - 1]), num(st.d_se[m - 1]), line ? num(de) : "", num(phi), num(phi_se),
                  line ? num(pe) : ""});
        if (line && m <= check_m) {
            const auto tag = std::to_string(m);
            a.verification.add("c_" + tag, std::abs(st.c[m - 1] - ce), "<=", sigma * st.c_se[m - 1]);
            a.verification.add("d_" + tag, std::abs(st.d[m - 1] - de), "<=", sigma * st.d_se[m - 1]);
            a.verification.add("phi_" + tag, std::abs(phi - pe), "<=", sigma * phi_se);
        }
    }
    if (line) {
        a.verification.add("kappa_sigma", std::abs(st.kappa - (1 - q)), "<=", sigma * st.kappa_se);
        a.verification.add("kappa_abs", std::abs(st.kappa - (1 - q)), "<=", p.at("kappa_abs_tolerance").get<double>());
    }
    a.verification.add("c_sum", st.c_sum, ">=", p.at("c_sum_floor").get<double>() - sigma * st.c_sum_se);
    a.files["percolation_densities.csv"] = dens.str();
    a.files["phi.csv"] = step_csv(st.phi_function(), "m", "phi");

    const auto& add = p.at("additivity");
    Csv ac({"group", "partition", "pieces", "defect", "budget"});
    std::int64_t count = 0;
    for (const auto& ge : add.at("groups")) {
        const auto gg = group_by_name(ge.at("group").get<std::string>());
        const auto box = shape_set(gg, ge.at("shape").get<std::vector<std::int64_t>>());
        const auto apar = PercolationParams::from_edge_probability(gg, add.at("q").get<double>(), c.seed);
        for (std::int64_t k = 0; k < add.at("partitions_per_group").get<std::int64_t>(); ++k) {
            const auto parts = random_partition(box, c.seed ^ 0xa11, count, add.at("max_pieces").get<std::size_t>());
            const auto r = check_percolation_additivity(apar, static_cast<std::uint64_t>(k), parts);
            a.verification.add("additivity_" + ge.at("group").get<std::string>() + "_" + std::to_string(k), r.defect,
                               "<=", r.budget);
            ac.row({ge.at("group").get<std::string>(), num(static_cast<std::uint64_t>(k)),
                    num(static_cast<std::uint64_t>(parts.size())), num(r.defect), num(r.budget)});
            ++count;
        }
    }
    a.files["additivity.csv"] = ac.str();

    Json qs = Json::array();
    for (std::size_t s = 0; s < g.generators().size(); ++s) qs.push_back(par.edge_probability(s));
    a.results["params"] = par.describe();
    a.results["edge_probabilities"] = qs;
    a.results["window"] = st.window;
    a.results["samples"] = st.samples;
    a.results["kappa"] = st.kappa;
    a.results["kappa_se"] = st.kappa_se;
    a.results["kappa_exact"] = line ? Json(1 - q) : Json(nullptr);
    a.results["c_sum"] = st.c_sum;
    a.results["c_sum_se"] = st.c_sum_se;
    a.results["d_inf_proxy"] = st.d_inf_proxy;
    a.results["d_inf_proxy_se"] = st.d_inf_se;
    a.results["additivity_partitions"] = count;
    return a;
}

// ---- continuity

std::vector<double> grid_points(double lo, double hi, double step) {
    std::vector<double> v;
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::int64_t k = 0; k <= n; ++k) v.push_back(lo + static_cast<double>(k) * step);
    return v;
}

void resolve_continuity(Section& s, const Json&) {
    const auto group = group_choice(s, "group", "Z");
    auto grid = s.section("grid");
    const double lo = grid.number("min", 0.0, 0.0, 1.0, false, true);
    const double hi = grid.number("max", 0.9, lo, 1.0, false, true);
    grid.number("step", 0.1, 0.0, 1.0, true, false);
    s.put("grid", grid.finish());
    (void)hi;
    shape_of(s, "window_shape", group, group == "Z" ? std::vector<std::int64_t>{20000} : std::vector<std::int64_t>{64, 64});
    s.integer("samples", 32, 4, 1000000);
    s.flag("refine", true);
    s.number("sigma", 3.0, 0.0, 100.0, true, false);
}

RunArtifacts run_continuity(const Json& p, const Common& c) {
    RunArtifacts a;
    const auto gname = p.at("group").get<std::string>();
    const auto g = group_by_name(gname);
    const auto lam = shape_set(g, p.at("window_shape").get<std::vector<std::int64_t>>());
    const auto& gr = p.at("grid");
    const double lo = gr.at("min").get<double>(), hi = gr.at("max").get<double>(), step = gr.at("step").get<double>();
    const auto samples = p.at("samples").get<std::size_t>();
    const double sigma = p.at("sigma").get<double>();

    const auto coarse = continuity_scan(g, grid_points(lo, hi, step), lam, samples, c.seed);
    Csv csv({"grid", "q", "kappa", "kappa_se", "kappa_exact", "increment", "increment_noise"});
    double max_coarse = 0;
    for (const auto& r : coarse) {
        const std::string qs = num(r.q);
        if (gname == "Z")
            a.verification.add("kappa_q" + qs, std::abs(r.kappa - (1 - r.q)), "<=", sigma * r.kappa_se);
        max_coarse = std::max(max_coarse, r.increment);
        csv.row({"coarse", qs, num(r.kappa), num(r.kappa_se), gname == "Z" ? num(1 - r.q) : "", num(r.increment),
                 num(r.increment_noise)});
    }
    a.results["max_increment_coarse"] = max_coarse;
    if (p.at("refine").get<bool>()) {
        // same total sample budget on twice as many points
        const auto fine = continuity_scan(g, grid_points(lo, hi, step / 2), lam, std::max<std::size_t>(2, samples / 2),
                                          c.seed);
        double max_fine = 0, noise = 0;
        for (const auto& r : fine) {
            max_fine = std::max(max_fine, r.increment);
            noise = std::max(noise, r.increment_noise);
            csv.row({"fine", num(r.q), num(r.kappa), num(r.kappa_se), gname == "Z" ? num(1 - r.q) : "",
                     num(r.increment), num(r.increment_noise)});
        }
        a.verification.add("refined_max_increment", max_fine, "<=", max_coarse + 2 * noise);
        a.results["max_increment_fine"] = max_fine;
        a.results["increment_noise_fine"] = noise;
        a.results["refinement_ratio"] = max_coarse > 0 ? Json(max_fine / max_coarse) : Json(nullptr);
    }
    a.files["continuity.csv"] = csv.str();
    return a;
}

}  // namespace

std::vector<ExperimentKind> analysis_kinds() {
    return {
        {"ergodic", "ergodic averages, semi-explicit limit and the explicit error estimate", resolve_ergodic,
         run_ergodic},
        {"ids", "eigenvalue counting approximants, their error estimate and additivity", resolve_ids, run_ids},
        {"percolation", "cluster statistics with exact one-dimensional oracles and additivity", resolve_percolation,
         run_percolation},
        {"continuity", "cluster statistics along a grid of edge probabilities", resolve_continuity, run_continuity},
    };
}

}  // namespace amenable::runner::detail
