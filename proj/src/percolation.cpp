#include "amenable/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "amenable/boundary.hpp"
#include "amenable/errors.hpp"
#include "amenable/parallel.hpp"
#include "amenable/rng.hpp"

namespace amenable {

PercolationParams PercolationParams::make(const GroupModel& g, std::vector<double> p, std::uint64_t seed) {
    if (p.size() != g.generators().size())
        throw std::invalid_argument("expected one bond probability per generator (" +
                                    std::to_string(g.generators().size()) + ")");
    for (double x : p)
        if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("bond probabilities must lie in [0, 1)");
    return {g, std::move(p), seed};
}

PercolationParams PercolationParams::uniform(const GroupModel& g, double p, std::uint64_t seed) {
    return make(g, std::vector<double>(g.generators().size(), p), seed);
}

PercolationParams PercolationParams::from_edge_probability(const GroupModel& g, double q, std::uint64_t seed) {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1)");
    return uniform(g, std::sqrt(q), seed);
}

double PercolationParams::edge_probability(std::size_t s) const {
    return p.at(s) * p.at(group.inverse_generator_index().at(s));
}

std::string PercolationParams::describe() const {
    std::ostringstream os;
    os << group.name() << " seed=" << seed << " p=[";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << "]";
    return os.str();
}

bool bond_variable(const PercolationParams& par, std::uint64_t sample, const Element& v, std::size_t s) {
    const CounterRng rng(par.seed);
    return rng.uniform({static_cast<std::int64_t>(sample), v.c[0], v.c[1], v.c[2], static_cast<std::int64_t>(s)}) <
           par.p[s];
}

Configuration sample_configuration(const PercolationParams& par, const FiniteSubset& lambda, std::uint64_t sample) {
    Configuration cfg;
    cfg.lambda = lambda;
    const auto& gens = par.group.generators();
    const auto& inv = par.group.inverse_generator_index();
    const auto id = par.group.identity();
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const auto& x = lambda[i];
        for (std::size_t s = 0; s < gens.size(); ++s) {
            if (gens[s] == id) continue;
            const auto k = lambda.index_of(par.group.multiply(gens[s], x));
            if (k <= static_cast<std::ptrdiff_t>(i)) continue;
            if (bond_variable(par, sample, x, s) && bond_variable(par, sample, lambda[static_cast<std::size_t>(k)], inv[s]))
                cfg.open_edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k));
        }
    }
    return cfg;
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent, size;
    explicit UnionFind(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

// labels and sizes only
void label_clusters(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& open,
                    std::vector<std::uint32_t>& label, std::vector<std::uint32_t>& sizes) {
    UnionFind uf(n);
    for (const auto& [a, b] : open) uf.unite(a, b);
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> id(n, unset);
    label.assign(n, 0);
    sizes.clear();
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto r = uf.find(i);
        if (id[r] == unset) {
            id[r] = static_cast<std::uint32_t>(sizes.size());
            sizes.push_back(0);
        }
        label[i] = id[r];
        ++sizes[id[r]];
    }
}

StepFunction count_function(const std::vector<std::uint32_t>& sizes) {
    std::vector<double> pts(sizes.begin(), sizes.end());
    return StepFunction::counting(std::move(pts));
}

struct SampleStats {
    double k_ratio = 0.0;
    std::vector<double> phi;  // F(m)/K, m = 1..max size
    std::vector<double> c;    // m = 1..m_max
    std::vector<double> d;
    double d_inf = 0.0;
};

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// column j of a ragged table, padding missing entries with `pad`
std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j, double pad) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(j < r.size() ? r[j] : pad);
    return out;
}

struct Window {
    FiniteSubset lambda, thick;
    std::vector<std::int64_t> lam_of_thick;  // index in Λ or -1
    std::vector<char> inner_boundary;        // per site of Λ
};

constexpr std::size_t kMaxThickWindow = 20000000;

// B_m Λ grown one generator layer at a time so oversized windows fail early
FiniteSubset thicken(const GroupModel& g, const FiniteSubset& lambda, std::size_t m) {
    std::unordered_set<Element, ElementHash> all(lambda.begin(), lambda.end());
    std::vector<Element> frontier(lambda.begin(), lambda.end());
    for (std::size_t r = 0; r < m && !frontier.empty(); ++r) {
        std::vector<Element> next;
        for (const auto& x : frontier)
            for (const auto& s : g.generators()) {
                const auto y = g.multiply(s, x);
                if (all.insert(y).second) next.push_back(y);
            }
        if (all.size() > kMaxThickWindow)
            throw ResourceCapExceeded("window thickened by B_" + std::to_string(m) + " exceeds " +
                                      std::to_string(kMaxThickWindow) + " sites");
        frontier = std::move(next);
    }
    return FiniteSubset(std::vector<Element>(all.begin(), all.end()));
}

Window make_window(const GroupModel& g, const FiniteSubset& lambda, std::size_t m_max) {
    Window w;
    w.lambda = lambda;
    w.thick = thicken(g, lambda, m_max);
    w.lam_of_thick.resize(w.thick.size());
    for (std::size_t i = 0; i < w.thick.size(); ++i) w.lam_of_thick[i] = lambda.index_of(w.thick[i]);
    w.inner_boundary.assign(lambda.size(), 0);
    for (const auto& x : r_boundary(g, lambda, 1)) {
        const auto i = lambda.index_of(x);
        if (i >= 0) w.inner_boundary[static_cast<std::size_t>(i)] = 1;
    }
    return w;
}

SampleStats sample_stats(const PercolationParams& par, const Window& w, std::size_t m_max, std::uint64_t sample) {
    const auto cfg = sample_configuration(par, w.thick, sample);
    SampleStats st;
    const std::size_t n = w.lambda.size();

    std::vector<std::uint32_t> label, sizes;
    label_clusters(w.thick.size(), cfg.open_edges, label, sizes);
    st.d.assign(m_max, 0.0);
    for (std::size_t i = 0; i < w.thick.size(); ++i) {
        if (w.lam_of_thick[i] < 0) continue;
        const auto sz = sizes[label[i]];
        if (sz <= m_max) st.d[sz - 1] += 1.0;
    }
    for (auto& x : st.d) x /= static_cast<double>(n);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> inner;
    for (const auto& [a, b] : cfg.open_edges) {
        const auto la = w.lam_of_thick[a], lb = w.lam_of_thick[b];
        if (la >= 0 && lb >= 0)
            inner.emplace_back(static_cast<std::uint32_t>(std::min(la, lb)), static_cast<std::uint32_t>(std::max(la, lb)));
    }
    label_clusters(n, inner, label, sizes);
    const double k = static_cast<double>(sizes.size());
    st.k_ratio = k / static_cast<double>(n);
    const std::uint32_t biggest = *std::max_element(sizes.begin(), sizes.end());
    std::vector<double> hist(biggest, 0.0);
    for (auto sz : sizes) hist[sz - 1] += 1.0;
    st.phi.resize(biggest);
    double run = 0.0;
    for (std::size_t m = 0; m < biggest; ++m) {
        run += hist[m];
        st.phi[m] = run / k;
    }
    st.c.assign(m_max, 0.0);
    for (std::size_t m = 0; m < std::min<std::size_t>(m_max, biggest); ++m) st.c[m] = hist[m] / k;

    std::vector<char> touches(sizes.size(), 0);
    for (std::size_t i = 0; i < n; ++i)
        if (w.inner_boundary[i]) touches[label[i]] = 1;
    double hit = 0.0;
    for (std::size_t i = 0; i < n; ++i) hit += touches[label[i]];
    st.d_inf = hit / static_cast<double>(n);
    return st;
}

std::vector<SampleStats> all_samples(const PercolationParams& par, const Window& w, std::size_t samples,
                                     std::size_t m_max) {
    return parallel_map(samples, [&](std::size_t s) { return sample_stats(par, w, m_max, s); });
}

ClusterStatistics summarize(const std::vector<SampleStats>& runs, std::size_t window, std::size_t m_max) {
    ClusterStatistics out;
    out.window = window;
    out.samples = runs.size();
    out.m_max = m_max;
    std::vector<double> k;
    std::vector<std::vector<double>> phi, c, d;
    std::vector<double> dinf;
    std::size_t longest = 0;
    for (const auto& r : runs) {
        k.push_back(r.k_ratio);
        phi.push_back(r.phi);
        c.push_back(r.c);
        d.push_back(r.d);
        dinf.push_back(r.d_inf);
        longest = std::max(longest, r.phi.size());
    }
    out.kappa = mean_of(k);
    out.kappa_se = se_of(k);
    for (std::size_t m = 0; m < longest; ++m) {
        const auto col = column(phi, m, 1.0);
        out.phi.push_back(mean_of(col));
        out.phi_se.push_back(se_of(col));
    }
    for (std::size_t m = 0; m < m_max; ++m) {
        const auto cc = column(c, m, 0.0), dd = column(d, m, 0.0);
        out.c.push_back(mean_of(cc));
        out.c_se.push_back(se_of(cc));
        out.d.push_back(mean_of(dd));
        out.d_se.push_back(se_of(dd));
    }
    std::vector<double> csum;
    for (const auto& r : runs) csum.push_back(std::accumulate(r.c.begin(), r.c.end(), 0.0));
    out.c_sum = mean_of(csum);
    out.c_sum_se = se_of(csum);
    out.d_inf_proxy = mean_of(dinf);
    out.d_inf_se = se_of(dinf);
    return out;
}

}  // namespace

ClusterReport clusters_in(const FiniteSubset& lambda,
                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& open) {
    ClusterReport r;
    for (const auto& [a, b] : open)
        if (a >= lambda.size() || b >= lambda.size()) throw std::invalid_argument("edge outside the window");
    label_clusters(lambda.size(), open, r.label, r.sizes);
    r.k = r.sizes.size();
    r.f = count_function(r.sizes);
    return r;
}

ClusterReport clusters_in(const Configuration& cfg) { return clusters_in(cfg.lambda, cfg.open_edges); }

StepFunction ClusterStatistics::phi_function() const {
    std::vector<double> xs(phi.size());
    std::iota(xs.begin(), xs.end(), 1.0);
    return StepFunction::from_levels(0.0, xs, phi);
}

ClusterStatistics cluster_statistics(const PercolationParams& par, const FiniteSubset& lambda, std::size_t samples,
                                     std::size_t m_max) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    if (m_max < 1) throw std::invalid_argument("m_max must be positive");
    if (lambda.empty()) throw std::invalid_argument("empty window");
    const auto w = make_window(par.group, lambda, m_max);
    return summarize(all_samples(par, w, samples, m_max), lambda.size(), m_max);
}

ExpectedF expected_f(const PercolationParams& par, const FiniteSubset& lambda, ExpectationMode mode,
                     std::size_t samples, std::size_t max_bits) {
    const std::size_t n = lambda.size();
    if (n == 0) throw std::invalid_argument("empty window");
    const auto& gens = par.group.generators();
    const auto& inv = par.group.inverse_generator_index();
    const std::size_t ns = gens.size();
    ExpectedF out;
    std::vector<double> hist(n, 0.0);  // expected number of clusters of each size

    // candidate edges (i, s, k) with k = index of s x_i, i < k
    struct Cand {
        std::uint32_t i, k;
        std::size_t s;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < ns; ++s) {
            if (gens[s] == par.group.identity()) continue;
            const auto k = lambda.index_of(par.group.multiply(gens[s], lambda[i]));
            if (k > static_cast<std::ptrdiff_t>(i))
                cands.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k), s});
        }

    std::vector<std::uint32_t> label, sizes;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> open;
    if (mode == ExpectationMode::Exhaustive) {
        const std::size_t bits = n * ns;
        if (bits > max_bits)
            throw ResourceCapExceeded(std::to_string(bits) + " bond variables exceed the enumeration cap " +
                                      std::to_string(max_bits));
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
            double w = 1.0;
            for (std::size_t b = 0; b < bits && w > 0.0; ++b) {
                const double p = par.p[b % ns];
                w *= (code >> b) & 1 ? p : 1.0 - p;
            }
            if (w == 0.0) continue;
            open.clear();
            for (const auto& e : cands)
                if ((code >> (e.i * ns + e.s) & 1) && (code >> (e.k * ns + inv[e.s]) & 1)) open.emplace_back(e.i, e.k);
            label_clusters(n, open, label, sizes);
            for (auto sz : sizes) hist[sz - 1] += w;
        }
    } else {
        if (samples < 2) throw std::invalid_argument("Monte Carlo mode needs at least two samples");
        std::vector<std::vector<double>> runs;
        for (std::size_t smp = 0; smp < samples; ++smp) {
            open.clear();
            for (const auto& e : cands)
                if (bond_variable(par, smp, lambda[e.i], e.s) && bond_variable(par, smp, lambda[e.k], inv[e.s]))
                    open.emplace_back(e.i, e.k);
            label_clusters(n, open, label, sizes);
            std::vector<double> h(n, 0.0);
            for (auto sz : sizes) h[sz - 1] += 1.0;
            std::vector<double> f(n);
            std::partial_sum(h.begin(), h.end(), f.begin());
            runs.push_back(std::move(f));
            for (std::size_t m = 0; m < n; ++m) hist[m] += h[m] / static_cast<double>(samples);
        }
        for (std::size_t m = 0; m < n; ++m) out.se.push_back(se_of(column(runs, m, 0.0)));
    }
    std::vector<double> xs(n), levels(n);
    std::iota(xs.begin(), xs.end(), 1.0);
    std::partial_sum(hist.begin(), hist.end(), levels.begin());
    out.mean = StepFunction::from_levels(0.0, xs, levels);
    out.expected_k = levels.back();
    return out;
}

PercolationAdditivity check_percolation_additivity(const PercolationParams& par, std::uint64_t sample,
                                                   const std::vector<FiniteSubset>& parts) {
    std::vector<Element> all;
    for (const auto& q : parts) all.insert(all.end(), q.begin(), q.end());
    const FiniteSubset whole(all);
    if (whole.size() != all.size()) throw std::invalid_argument("partition parts overlap");
    PercolationAdditivity r;
    StepFunction sum;
    const double s = static_cast<double>(par.group.generators().size());
    for (const auto& q : parts) {
        if (q.empty()) continue;
        sum += clusters_in(sample_configuration(par, q, sample)).f;
        r.budget += 2.0 * s * static_cast<double>(r_boundary(par.group, q, 1).size());
    }
    r.defect = sup_distance(clusters_in(sample_configuration(par, whole, sample)).f, sum);
    return r;
}

std::vector<ContinuityRow> continuity_scan(const GroupModel& g, const std::vector<double>& q_grid,
                                           const FiniteSubset& lambda, std::size_t samples, std::uint64_t seed) {
    if (q_grid.empty()) throw std::invalid_argument("empty grid");
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    if (!std::is_sorted(q_grid.begin(), q_grid.end())) throw std::invalid_argument("grid must be sorted");
    const auto w = make_window(g, lambda, 1);
    std::vector<ContinuityRow> rows;
    std::vector<SampleStats> prev;
    for (double q : q_grid) {
        const auto par = PercolationParams::from_edge_probability(g, q, seed);
        auto runs = all_samples(par, w, samples, 1);
        const auto st = summarize(runs, lambda.size(), 1);
        ContinuityRow row;
        row.q = q;
        row.kappa = st.kappa;
        row.kappa_se = st.kappa_se;
        row.phi = st.phi_function();
        row.phi_noise = st.phi_se.empty() ? 0.0 : *std::max_element(st.phi_se.begin(), st.phi_se.end());
        if (!prev.empty()) {
            // per-sample differences, since the samples are coupled
            std::size_t longest = 0;
            for (std::size_t s = 0; s < samples; ++s)
                longest = std::max({longest, runs[s].phi.size(), prev[s].phi.size()});
            for (std::size_t m = 0; m < longest; ++m) {
                std::vector<double> diff;
                for (std::size_t s = 0; s < samples; ++s) {
                    const double a = m < runs[s].phi.size() ? runs[s].phi[m] : 1.0;
                    const double b = m < prev[s].phi.size() ? prev[s].phi[m] : 1.0;
                    diff.push_back(a - b);
                }
                row.increment = std::max(row.increment, std::abs(mean_of(diff)));
                row.increment_noise = std::max(row.increment_noise, se_of(diff));
            }
        }
        rows.push_back(std::move(row));
        prev = std::move(runs);
    }
    return rows;
}

}  // namespace amenable
