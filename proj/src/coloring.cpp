#include "amenable/coloring.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "amenable/errors.hpp"

namespace amenable {

namespace {

void check_law(const std::vector<double>& w) {
    if (w.empty()) throw std::invalid_argument("empty weight vector");
    double s = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
}

Color pick(const std::vector<double>& cumulative, double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto k = static_cast<std::size_t>(it - cumulative.begin());
    return static_cast<Color>(std::min(k, cumulative.size() - 1));
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    auto r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

Coloring Coloring::explicit_map(Color alphabet, std::unordered_map<Element, Color, ElementHash> colors) {
    if (alphabet == 0) throw std::invalid_argument("alphabet must be nonempty");
    for (const auto& [x, v] : colors)
        if (v >= alphabet) throw std::invalid_argument("color outside the alphabet");
    Coloring c;
    c.rule_ = ColoringRule::Explicit;
    c.alphabet_ = alphabet;
    c.explicit_ = std::move(colors);
    return c;
}

Coloring Coloring::periodic(Color alphabet, std::vector<std::int64_t> periods, std::vector<Color> table) {
    if (alphabet == 0) throw std::invalid_argument("alphabet must be nonempty");
    if (periods.size() > 3) throw std::invalid_argument("at most three periods");
    periods.resize(3, 1);
    std::int64_t cells = 1;
    for (auto p : periods) {
        if (p < 1) throw std::invalid_argument("periods must be positive");
        cells *= p;
    }
    if (static_cast<std::int64_t>(table.size()) != cells)
        throw std::invalid_argument("periodic table needs one color per residue class");
    for (auto v : table)
        if (v >= alphabet) throw std::invalid_argument("color outside the alphabet");
    Coloring c;
    c.rule_ = ColoringRule::Periodic;
    c.alphabet_ = alphabet;
    c.periods_ = std::move(periods);
    c.table_ = std::move(table);
    return c;
}

Coloring Coloring::iid(std::uint64_t seed, std::vector<double> weights) {
    check_law(weights);
    Coloring c;
    c.rule_ = ColoringRule::Iid;
    c.alphabet_ = static_cast<Color>(weights.size());
    c.seed_ = seed;
    c.site_law_ = weights;
    std::partial_sum(weights.begin(), weights.end(), std::back_inserter(c.cumulative_));
    c.cumulative_.back() = 1.0;
    return c;
}

Coloring Coloring::bernoulli_bits(std::uint64_t seed, std::vector<double> probs) {
    if (probs.empty() || probs.size() > 16) throw std::invalid_argument("bit colorings use 1 to 16 bits");
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bit probabilities must lie in [0,1]");
    Coloring c;
    c.rule_ = ColoringRule::BernoulliBits;
    c.alphabet_ = Color{1} << probs.size();
    c.seed_ = seed;
    c.bit_probs_ = probs;
    c.site_law_.assign(c.alphabet_, 1.0);
    for (Color a = 0; a < c.alphabet_; ++a)
        for (std::size_t s = 0; s < probs.size(); ++s) c.site_law_[a] *= ((a >> s) & 1u) ? probs[s] : 1.0 - probs[s];
    return c;
}

Coloring Coloring::constant(Color alphabet, Color value) { return periodic(alphabet, {1, 1, 1}, {value}); }

Color Coloring::operator()(const Element& x) const {
    switch (rule_) {
        case ColoringRule::Explicit: {
            auto it = explicit_.find(x);
            if (it == explicit_.end()) throw std::out_of_range("explicit coloring is undefined at this element");
            return it->second;
        }
        case ColoringRule::Periodic: {
            const auto i = floor_mod(x.c[0], periods_[0]) +
                           periods_[0] * (floor_mod(x.c[1], periods_[1]) + periods_[1] * floor_mod(x.c[2], periods_[2]));
            return table_[static_cast<std::size_t>(i)];
        }
        case ColoringRule::Iid: {
            const CounterRng rng(seed_);
            return pick(cumulative_, rng.uniform({x.model, x.c[0], x.c[1], x.c[2]}));
        }
        case ColoringRule::BernoulliBits: {
            const CounterRng rng(seed_);
            Color v = 0;
            for (std::size_t s = 0; s < bit_probs_.size(); ++s)
                if (rng.uniform({x.model, x.c[0], x.c[1], x.c[2], static_cast<std::int64_t>(s)}) < bit_probs_[s])
                    v |= Color{1} << s;
            return v;
        }
    }
    return 0;
}

Color Coloring::draw(const CounterRng& rng, std::int64_t sample, std::int64_t site) const {
    if (rule_ == ColoringRule::Iid) return pick(cumulative_, rng.uniform({sample, site}));
    if (rule_ == ColoringRule::BernoulliBits) {
        Color v = 0;
        for (std::size_t s = 0; s < bit_probs_.size(); ++s)
            if (rng.uniform({sample, site, static_cast<std::int64_t>(s)}) < bit_probs_[s]) v |= Color{1} << s;
        return v;
    }
    throw std::logic_error("only random colorings can be sampled");
}

std::string Coloring::describe() const {
    std::ostringstream os;
    os.precision(17);
    auto list = [&](const auto& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ']';
    };
    switch (rule_) {
        case ColoringRule::Explicit: os << "explicit(alphabet=" << alphabet_ << ",sites=" << explicit_.size() << ')'; break;
        case ColoringRule::Periodic:
            os << "periodic(alphabet=" << alphabet_ << ",periods=";
            list(periods_);
            os << ",table=";
            list(table_);
            os << ')';
            break;
        case ColoringRule::Iid:
            os << "iid(seed=" << seed_ << ",weights=";
            list(site_law_);
            os << ')';
            break;
        case ColoringRule::BernoulliBits:
            os << "bits(seed=" << seed_ << ",probs=";
            list(bit_probs_);
            os << ')';
            break;
    }
    return os.str();
}

Pattern::Pattern(FiniteSubset domain, std::vector<Color> values)
    : Pattern(std::make_shared<const FiniteSubset>(std::move(domain)), std::move(values)) {}

Pattern::Pattern(std::shared_ptr<const FiniteSubset> domain, std::vector<Color> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (!domain_) throw std::invalid_argument("pattern needs a domain");
    if (domain_->size() != values_.size()) throw std::invalid_argument("pattern needs one value per domain element");
}

Color Pattern::at(const Element& x) const {
    auto i = domain_->index_of(x);
    if (i < 0) throw std::out_of_range("element outside the pattern domain");
    return values_[static_cast<std::size_t>(i)];
}

Pattern Pattern::translate(const GroupModel& g, const Element& x) const {
    std::vector<std::pair<Element, Color>> moved;
    moved.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) moved.emplace_back(g.multiply((*domain_)[i], x), values_[i]);
    std::sort(moved.begin(), moved.end());
    std::vector<Element> d;
    std::vector<Color> v;
    for (auto& [e, c] : moved) {
        d.push_back(e);
        v.push_back(c);
    }
    return Pattern(FiniteSubset(std::move(d)), std::move(v));
}

Pattern Pattern::restrict(const FiniteSubset& q) const {
    std::vector<Color> v;
    v.reserve(q.size());
    for (const auto& x : q) {
        auto i = domain_->index_of(x);
        if (i < 0) throw std::invalid_argument("restriction set is not inside the domain");
        v.push_back(values_[static_cast<std::size_t>(i)]);
    }
    return Pattern(q, std::move(v));
}

Pattern Pattern::normalized(const GroupModel& g) const {
    if (domain_->empty()) return *this;
    return translate(g, g.inverse((*domain_)[0]));
}

bool Pattern::equivalent(const GroupModel& g, const Pattern& o) const {
    return size() == o.size() && normalized(g) == o.normalized(g);
}

Pattern restrict_coloring(const Coloring& c, const FiniteSubset& q) {
    std::vector<Color> v;
    v.reserve(q.size());
    for (const auto& x : q) v.push_back(c(x));
    return Pattern(q, std::move(v));
}

namespace {

// x ranges over d_0^{-1} λ, the only candidates with d_0 x ∈ Λ
template <class ColorAt>
std::size_t count_impl(const GroupModel& g, const Pattern& p, const FiniteSubset& lambda, ColorAt color_at) {
    if (p.size() == 0) throw std::invalid_argument("pattern domain must be nonempty");
    const auto& d = p.domain();
    const auto d0inv = g.inverse(d[0]);
    std::size_t n = 0;
    for (const auto& l : lambda) {
        const auto x = g.multiply(d0inv, l);
        bool ok = true;
        for (std::size_t i = 0; i < d.size() && ok; ++i) {
            const auto y = g.multiply(d[i], x);
            auto pos = lambda.index_of(y);
            ok = pos >= 0 && color_at(y, static_cast<std::size_t>(pos)) == p.values()[i];
        }
        n += ok;
    }
    return n;
}

}  // namespace

std::size_t count_occurrences(const GroupModel& g, const Pattern& p, const Coloring& c, const FiniteSubset& lambda) {
    return count_impl(g, p, lambda, [&](const Element& y, std::size_t) { return c(y); });
}

std::size_t count_occurrences(const GroupModel& g, const Pattern& p, const Pattern& in) {
    return count_impl(g, p, in.domain(), [&](const Element&, std::size_t pos) { return in.values()[pos]; });
}

double empirical_frequency(const GroupModel& g, const Pattern& p, const Coloring& c, const FolnerSequence& seq,
                           std::size_t j) {
    if (j < 1) throw std::invalid_argument("Folner index starts at 1");
    const auto u = seq.at(j);
    return static_cast<double>(count_occurrences(g, p, c, u)) / static_cast<double>(u.size());
}

double iid_frequency(const Pattern& p, const std::vector<double>& weights) {
    check_law(weights);
    double f = 1.0;
    for (auto v : p.values()) {
        if (v >= weights.size()) return 0.0;
        f *= weights[v];
    }
    return f;
}

double bits_frequency(const Pattern& p, const std::vector<double>& probs) {
    double f = 1.0;
    for (auto v : p.values())
        for (std::size_t s = 0; s < probs.size(); ++s) f *= ((v >> s) & 1u) ? probs[s] : 1.0 - probs[s];
    return f;
}

double pattern_frequency(const Pattern& p, const Coloring& c) {
    if (c.rule() == ColoringRule::Iid) return iid_frequency(p, c.site_distribution());
    if (c.rule() == ColoringRule::BernoulliBits) return bits_frequency(p, c.bit_probabilities());
    throw std::invalid_argument("pattern frequencies are known in closed form only for random colorings");
}

PatternHistogram pattern_histogram(const GroupModel& g, const FiniteSubset& t, const Coloring& c,
                                   const FiniteSubset& u) {
    if (t.empty()) throw std::invalid_argument("tile must be nonempty");
    const double bits = static_cast<double>(t.size()) * std::log2(static_cast<double>(c.alphabet()));
    if (bits > 63.0) throw std::invalid_argument("pattern codes for this tile do not fit in 64 bits");
    PatternHistogram h;
    const auto t0inv = g.inverse(t[0]);
    for (const auto& l : u) {
        const auto x = g.multiply(t0inv, l);
        std::uint64_t code = 0, radix = 1;
        bool inside = true;
        for (const auto& y : t) {
            const auto z = g.multiply(y, x);
            if (!u.contains(z)) {
                inside = false;
                break;
            }
            code += radix * c(z);
            radix *= c.alphabet();
        }
        if (!inside) continue;
        ++h.counts[code];
        ++h.translates;
    }
    return h;
}

std::vector<Color> decode_pattern(std::uint64_t code, std::size_t size, Color alphabet) {
    std::vector<Color> v(size);
    for (auto& x : v) {
        x = static_cast<Color>(code % alphabet);
        code /= alphabet;
    }
    return v;
}

namespace {

constexpr Color kOutside = ~Color{0};
constexpr std::size_t kMaxGridCells = std::size_t{1} << 26;
constexpr std::size_t kMaxMaterialized = std::size_t{1} << 26;

// Colors of every translate Tx ⊆ U, addressed as at(k, i) = C(t_i x_k).
struct TranslateTable {
    std::vector<Color> store;
    std::vector<std::ptrdiff_t> offsets;  // grid mode: cell(t_i x) - cell(t_0 x)
    std::vector<std::size_t> anchors;     // grid mode: cell(t_0 x); flat mode: k |T|
    bool grid = false;

    Color at(std::size_t k, std::size_t i) const {
        return grid ? store[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(anchors[k]) + offsets[i])]
                    : store[anchors[k] + i];
    }
};

// Lattice windows: colors laid out on the coordinate box of U.
bool fill_grid(const GroupModel& g, const FiniteSubset& t, const Coloring& c, const FiniteSubset& u,
               TranslateTable& tab) {
    if (g.kind() != GroupKind::IntegerLattice) return false;
    const int r = g.rank();
    std::array<std::int64_t, 3> lo{}, hi{}, tlo{}, thi{};
    lo.fill(INT64_MAX);
    hi.fill(INT64_MIN);
    tlo = lo;
    thi = hi;
    for (const auto& x : u)
        for (int i = 0; i < r; ++i) lo[i] = std::min(lo[i], x.c[i]), hi[i] = std::max(hi[i], x.c[i]);
    for (const auto& y : t)
        for (int i = 0; i < r; ++i)
            tlo[i] = std::min(tlo[i], y.c[i] - t[0].c[i]), thi[i] = std::max(thi[i], y.c[i] - t[0].c[i]);
    std::array<std::size_t, 3> stride{};
    std::size_t cells = 1;
    for (int i = r - 1; i >= 0; --i) {
        stride[i] = cells;
        cells *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
        if (cells > kMaxGridCells || cells > 4 * u.size() + 1024) return false;
    }
    auto cell = [&](const std::array<std::int64_t, 3>& co) {
        std::size_t v = 0;
        for (int i = 0; i < r; ++i) v += stride[i] * static_cast<std::size_t>(co[i] - lo[i]);
        return v;
    };
    tab.grid = true;
    tab.store.assign(cells, kOutside);
    for (const auto& x : u) tab.store[cell(x.c)] = c(x);
    for (const auto& y : t) {
        std::ptrdiff_t off = 0;
        for (int i = 0; i < r; ++i) off += static_cast<std::ptrdiff_t>(stride[i]) * (y.c[i] - t[0].c[i]);
        tab.offsets.push_back(off);
    }
    for (const auto& l : u) {
        bool inside = true;
        for (int i = 0; i < r && inside; ++i) inside = l.c[i] + tlo[i] >= lo[i] && l.c[i] + thi[i] <= hi[i];
        if (!inside) continue;
        const auto base = static_cast<std::ptrdiff_t>(cell(l.c));
        for (auto off : tab.offsets)
            if (tab.store[static_cast<std::size_t>(base + off)] == kOutside) {
                inside = false;
                break;
            }
        if (inside) tab.anchors.push_back(static_cast<std::size_t>(base));
    }
    return true;
}

void fill_flat(const GroupModel& g, const FiniteSubset& t, const Coloring& c, const FiniteSubset& u,
               TranslateTable& tab) {
    const auto t0inv = g.inverse(t[0]);
    std::vector<Color> v(t.size());
    for (const auto& l : u) {
        const auto x = g.multiply(t0inv, l);
        bool inside = true;
        for (std::size_t i = 0; i < t.size() && inside; ++i) {
            const auto z = g.multiply(t[i], x);
            if (!u.contains(z))
                inside = false;
            else
                v[i] = c(z);
        }
        if (!inside) continue;
        if (tab.store.size() + v.size() > kMaxMaterialized)
            throw ResourceCapExceeded("pattern table of " + std::to_string(t.size()) + "-site translates exceeds " +
                                      std::to_string(kMaxMaterialized) + " colors");
        tab.anchors.push_back(tab.store.size());
        tab.store.insert(tab.store.end(), v.begin(), v.end());
    }
}

}  // namespace

double frequency_gap_sum(const GroupModel& g, const FiniteSubset& t, const Coloring& c, const FiniteSubset& u) {
    if (t.empty()) throw std::invalid_argument("tile must be nonempty");
    const double usize = static_cast<double>(u.size());
    const auto dom = std::make_shared<const FiniteSubset>(t);
    double gap = 0.0, seen_mass = 0.0;
    auto add = [&](std::uint64_t n, std::vector<Color> values) {
        const double nu = pattern_frequency(Pattern(dom, std::move(values)), c);
        gap += std::abs(static_cast<double>(n) / usize - nu);
        seen_mass += nu;
    };
    if (static_cast<double>(t.size()) * std::log2(static_cast<double>(c.alphabet())) <= 63.0) {
        const auto h = pattern_histogram(g, t, c, u);
        // sorted keys so the floating sum does not depend on hash order
        std::vector<std::pair<std::uint64_t, std::uint64_t>> seen(h.counts.begin(), h.counts.end());
        std::sort(seen.begin(), seen.end());
        for (const auto& [code, n] : seen) add(n, decode_pattern(code, t.size(), c.alphabet()));
        return gap + std::max(0.0, 1.0 - seen_mass);
    }

    // patterns too large for a 64-bit code: sort the translates by pattern
    TranslateTable tab;
    if (!fill_grid(g, t, c, u, tab)) fill_flat(g, t, c, u, tab);
    const std::size_t n = tab.anchors.size(), m = t.size();
    auto compare = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < m; ++i) {
            const Color x = tab.at(a, i), y = tab.at(b, i);
            if (x != y) return x < y ? -1 : 1;
        }
        return 0;
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return compare(a, b) < 0; });
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n && compare(order[lo], order[hi]) == 0) ++hi;
        std::vector<Color> values(m);
        for (std::size_t i = 0; i < m; ++i) values[i] = tab.at(order[lo], i);
        add(hi - lo, std::move(values));
        lo = hi;
    }
    return gap + std::max(0.0, 1.0 - seen_mass);
}

}  // namespace amenable
