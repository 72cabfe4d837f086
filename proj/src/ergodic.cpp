#include "amenable/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "amenable/boundary.hpp"
#include "amenable/errors.hpp"
#include "amenable/parallel.hpp"
#include "amenable/tiling.hpp"

namespace amenable {

double NormedValue::scalar() const {
    if (!is_scalar()) throw std::logic_error("value is a step function");
    return std::get<double>(v_);
}

const StepFunction& NormedValue::step() const {
    if (is_scalar()) throw std::logic_error("value is a scalar");
    return std::get<StepFunction>(v_);
}

StepFunction NormedValue::as_step() const { return is_scalar() ? StepFunction::constant(scalar()) : step(); }

NormedValue NormedValue::operator+(const NormedValue& o) const {
    if (is_scalar() && o.is_scalar()) return scalar() + o.scalar();
    return as_step() + o.as_step();
}

NormedValue NormedValue::operator-(const NormedValue& o) const { return *this + o * -1.0; }

NormedValue NormedValue::operator*(double a) const {
    if (is_scalar()) return scalar() * a;
    return step() * a;
}

double NormedValue::norm() const { return is_scalar() ? std::abs(scalar()) : step().sup_norm(); }

BoundaryTerm zero_boundary() {
    return {"zero", [](const FiniteSubset&) { return 0.0; }, 0.0};
}

BoundaryTerm k_boundary_term(const GroupModel& g, const FiniteSubset& k, double factor) {
    if (k.empty()) throw std::invalid_argument("boundary set must be nonempty");
    return {"k_boundary",
            [g, k, factor](const FiniteSubset& q) {
                return q.empty() ? 0.0 : factor * static_cast<double>(k_boundary(g, q, k).size());
            },
            factor * static_cast<double>(k.size())};
}

BoundaryTerm r_boundary_term(const GroupModel& g, int r, double factor) {
    const double br = static_cast<double>(ball(g, r).size());
    return {"r_boundary",
            [g, r, factor](const FiniteSubset& q) { return factor * static_cast<double>(r_boundary(g, q, r).size()); },
            factor * br};
}

AlmostAdditiveFunction cardinality_function() {
    return {"cardinality", [](const Pattern& p) { return NormedValue(static_cast<double>(p.size())); },
            zero_boundary(), 1.0};
}

AlmostAdditiveFunction occurrence_function(const GroupModel& g, const Pattern& p) {
    return {"occurrences",
            [g, p](const Pattern& in) {
                return NormedValue(in.size() == 0 ? 0.0 : static_cast<double>(count_occurrences(g, p, in)));
            },
            k_boundary_term(g, p.domain(), 1.0), 1.0};
}

namespace {

FiniteSubset union_of(const std::vector<FiniteSubset>& parts) {
    std::vector<Element> all;
    for (const auto& q : parts) all.insert(all.end(), q.begin(), q.end());
    return FiniteSubset(std::move(all));
}

AdditivityDefect defect_of(const AlmostAdditiveFunction& f, const Coloring& col, const std::vector<FiniteSubset>& parts,
                           const FiniteSubset& whole) {
    NormedValue sum;
    AdditivityDefect d;
    for (const auto& q : parts) {
        sum += f(col, q);
        d.budget += f.boundary(q);
    }
    d.defect = (f(col, whole) - sum).norm();
    return d;
}

}  // namespace

AdditivityDefect check_almost_additive(const AlmostAdditiveFunction& f, const Coloring& col,
                                       const std::vector<FiniteSubset>& parts) {
    const auto whole = union_of(parts);
    std::size_t total = 0;
    for (const auto& q : parts) total += q.size();
    if (total != whole.size()) throw std::invalid_argument("partition parts overlap");
    return defect_of(f, col, parts, whole);
}

AdditivityDefect eps_additive_defect(const AlmostAdditiveFunction& f, const Coloring& col,
                                     const std::vector<FiniteSubset>& family, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    if (!are_eps_disjoint(family, eps)) throw std::invalid_argument("family is not eps-disjoint");
    const auto whole = union_of(family);
    auto d = defect_of(f, col, family, whole);
    d.budget = (3.0 * f.c + 9.0 * f.boundary.d) * eps * static_cast<double>(whole.size()) + 3.0 * d.budget;
    return d;
}

NormedValue ergodic_average(const AlmostAdditiveFunction& f, const Coloring& col, const FolnerSequence& seq,
                            std::size_t j) {
    if (j < 1) throw std::invalid_argument("Folner index starts at 1");
    const auto u = seq.at(j);
    return f(col, u) * (1.0 / static_cast<double>(u.size()));
}

SemiExplicitResult semi_explicit_limit(const AlmostAdditiveFunction& f, const Coloring& col,
                                       const std::vector<FiniteSubset>& tiles, double eps,
                                       const SemiExplicitOptions& opt) {
    if (!col.is_random()) throw std::invalid_argument("the semi-explicit formula needs an iid or bit coloring");
    const int n = n_of_eps(eps);
    if (static_cast<int>(tiles.size()) != n)
        throw std::invalid_argument("expected N(eps) = " + std::to_string(n) + " tiles");
    const double a = static_cast<double>(col.alphabet());

    SemiExplicitResult res;
    constexpr std::size_t chunks = 64;
    double variance = 0.0;
    bool scalar = true;

    if (opt.source == FrequencySource::Exhaustive) {
        double total = 0.0;
        for (const auto& t : tiles) total += std::pow(a, static_cast<double>(t.size()));
        if (std::log2(total) > opt.max_pattern_bits + 1e-9)
            throw ResourceCapExceeded("pattern space of 2^" + std::to_string(std::log2(total)) +
                                      " colorings exceeds the enumeration cap 2^" +
                                      std::to_string(opt.max_pattern_bits));
    } else if (opt.samples < 2) {
        throw std::invalid_argument("Monte Carlo mode needs at least two samples");
    }

    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto dom = std::make_shared<const FiniteSubset>(tiles[i]);
        const std::size_t sz = dom->size();
        NormedValue mean;
        if (opt.source == FrequencySource::Exhaustive) {
            const auto count = static_cast<std::uint64_t>(std::llround(std::pow(a, static_cast<double>(sz))));
            auto partial = parallel_map(chunks, [&](std::size_t ch) {
                NormedValue acc;
                const std::uint64_t lo = count * ch / chunks, hi = count * (ch + 1) / chunks;
                for (std::uint64_t code = lo; code < hi; ++code) {
                    Pattern p(dom, decode_pattern(code, sz, col.alphabet()));
                    const double nu = pattern_frequency(p, col);
                    if (nu == 0.0) continue;
                    acc += f.on_pattern(p) * nu;
                }
                return acc;
            });
            for (auto& v : partial) mean += v;
            res.evaluations += count;
        } else {
            const CounterRng rng = CounterRng(opt.seed).derive(i);
            struct Acc {
                NormedValue sum;
                double sq = 0.0;
            };
            auto partial = parallel_map(chunks, [&](std::size_t ch) {
                Acc acc;
                const std::size_t lo = opt.samples * ch / chunks, hi = opt.samples * (ch + 1) / chunks;
                for (std::size_t s = lo; s < hi; ++s) {
                    std::vector<Color> v(sz);
                    for (std::size_t k = 0; k < sz; ++k)
                        v[k] = col.draw(rng, static_cast<std::int64_t>(s), static_cast<std::int64_t>(k));
                    auto val = f.on_pattern(Pattern(dom, std::move(v)));
                    if (val.is_scalar()) acc.sq += val.scalar() * val.scalar();
                    acc.sum += val;
                }
                return acc;
            });
            double sq = 0.0;
            for (auto& p : partial) {
                mean += p.sum;
                sq += p.sq;
            }
            const double m = static_cast<double>(opt.samples);
            mean = mean * (1.0 / m);
            if (mean.is_scalar()) {
                const double var = std::max(0.0, (sq - m * mean.scalar() * mean.scalar()) / (m - 1.0));
                const double w = eta(static_cast<int>(i) + 1, eps) / static_cast<double>(sz);
                variance += w * w * var / m;
            } else {
                scalar = false;
            }
            res.evaluations += opt.samples;
        }
        res.tile_means.push_back(mean);
        res.value += mean * (eta(static_cast<int>(i) + 1, eps) / static_cast<double>(sz));
    }
    if (opt.source == FrequencySource::MonteCarlo && scalar) res.std_error = std::sqrt(variance);
    return res;
}

ErrorBound error_bound(const ErrorBoundInputs& in) {
    const int n = n_of_eps(in.eps);
    const auto need = static_cast<std::size_t>(n);
    if (in.tile_sizes.size() != need || in.tile_boundaries.size() != need || in.frequency_gaps.size() != need)
        throw std::invalid_argument("error bound needs N(eps) entries per tile list");
    ErrorBound b;
    double sizes = 0.0, weighted_b = 0.0, weighted_gap = 0.0;
    for (std::size_t i = 0; i < need; ++i) {
        const double e = eta(static_cast<int>(i) + 1, in.eps);
        sizes += in.tile_sizes[i];
        weighted_b += e * in.tile_boundaries[i] / in.tile_sizes[i];
        weighted_gap += e * in.frequency_gaps[i];
    }
    b.leading = (12.0 * in.c + 33.0 * in.d) * in.eps;
    b.frequency = in.c * weighted_gap;
    b.tile_boundary = 4.0 * weighted_b;
    b.window = (in.c + 4.0 * in.d) * in.window_ratio * sizes;
    b.total = b.leading + b.frequency + b.tile_boundary + b.window;
    b.average_bound = 2.0 * b.leading + b.frequency + 2.0 * b.tile_boundary + b.window;
    b.limit_bound = b.leading + b.tile_boundary;
    return b;
}

ErgodicStudy ergodic_study(const GroupModel& g, const AlmostAdditiveFunction& f, const Coloring& col,
                           const FolnerSequence& seq, const std::vector<std::size_t>& js,
                           const std::vector<FiniteSubset>& tiles, double eps, double j0_invariance,
                           const SemiExplicitOptions& opt) {
    if (tiles.empty()) throw std::invalid_argument("no tiles");
    ErgodicStudy st;
    st.tiles = tiles;
    st.limit = semi_explicit_limit(f, col, tiles, eps, opt);
    const auto q = difference_set(g, tiles.back());

    ErrorBoundInputs in;
    in.eps = eps;
    in.c = f.c;
    in.d = f.boundary.d;
    for (const auto& t : tiles) {
        in.tile_sizes.push_back(static_cast<double>(t.size()));
        in.tile_boundaries.push_back(f.boundary(t));
    }

    for (auto j : js) {
        ErgodicRow row;
        row.j = j;
        const auto u = seq.at(j);
        row.window = u.size();
        row.average = f(col, u) * (1.0 / static_cast<double>(u.size()));
        row.delta = (row.average - st.limit.value).norm();
        row.window_ratio = boundary_ratio(g, u, q);
        in.window_ratio = row.window_ratio;
        in.frequency_gaps.clear();
        for (const auto& t : tiles) in.frequency_gaps.push_back(frequency_gap_sum(g, t, col, u));
        row.bound = error_bound(in);
        if (!st.j0 && row.window_ratio < j0_invariance) st.j0 = j;
        row.past_j0 = st.j0.has_value();

        const std::string tag = "_j" + std::to_string(j);
        st.report.add("estimate" + tag, row.delta, "<=", row.bound.total, row.past_j0);
        st.report.add("limit_vs_average" + tag, row.delta, "<=", row.bound.limit_bound, row.past_j0);
        st.rows.push_back(std::move(row));
    }
    // nothing is asserted unless some window reaches the invariance threshold
    st.report.add("j0_found", st.j0 ? 1.0 : 0.0, "==", 1.0);
    return st;
}

}  // namespace amenable
