#include "amenable/group.hpp"

#include "product_counts.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "amenable/rng.hpp"

namespace amenable {

namespace {
constexpr std::uint8_t kHeisenbergTag = 16;
}

std::size_t ElementHash::operator()(const Element& x) const noexcept {
    std::uint64_t h = mix64(x.model);
    for (auto v : x.c) h = mix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
}

GroupModel::GroupModel(GroupKind kind, int rank, bool id_in_s)
    : kind_(kind), rank_(rank), id_in_s_(id_in_s) {
    tag_ = kind == GroupKind::Heisenberg ? kHeisenbergTag : static_cast<std::uint8_t>(rank);
    int free_dims = kind == GroupKind::Heisenberg ? 2 : rank;
    for (int i = 0; i < free_dims; ++i) {
        for (int sign : {1, -1}) {
            Element e{tag_, {}};
            e.c[static_cast<std::size_t>(i)] = sign;
            gens_.push_back(e);
        }
    }
    if (id_in_s) gens_.push_back(identity());
    for (const auto& s : gens_) {
        auto inv = inverse(s);
        auto it = std::find(gens_.begin(), gens_.end(), inv);
        inv_index_.push_back(static_cast<std::size_t>(it - gens_.begin()));
    }
}

GroupModel GroupModel::lattice(int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
    return GroupModel(GroupKind::IntegerLattice, d, false);
}

GroupModel GroupModel::heisenberg() { return GroupModel(GroupKind::Heisenberg, 3, false); }

GroupModel GroupModel::with_identity_generator() const {
    if (id_in_s_) return *this;
    return GroupModel(kind_, rank_, true);
}

std::string GroupModel::name() const {
    std::string base = kind_ == GroupKind::Heisenberg ? "heisenberg" : "Z" + std::to_string(rank_);
    return id_in_s_ ? base + "+id" : base;
}

Element GroupModel::identity() const { return Element{tag_, {}}; }

Element GroupModel::element(std::initializer_list<std::int64_t> coords) const {
    return element(std::span<const std::int64_t>(coords.begin(), coords.size()));
}

Element GroupModel::element(std::span<const std::int64_t> coords) const {
    if (coords.size() != static_cast<std::size_t>(rank_))
        throw std::invalid_argument("expected " + std::to_string(rank_) + " coordinates for " + name());
    Element e{tag_, {}};
    std::copy(coords.begin(), coords.end(), e.c.begin());
    return e;
}

bool GroupModel::owns(const Element& x) const {
    if (x.model != tag_) return false;
    for (int i = rank_; i < 3; ++i)
        if (x.c[static_cast<std::size_t>(i)] != 0) return false;
    return true;
}

void GroupModel::check(const Element& x) const {
    if (!owns(x)) throw std::invalid_argument("element does not belong to " + name());
}

Element GroupModel::multiply(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element r{tag_, {x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2]}};
    if (kind_ == GroupKind::Heisenberg) r.c[2] += x.c[0] * y.c[1];
    return r;
}

Element GroupModel::inverse(const Element& x) const {
    check(x);
    Element r{tag_, {-x.c[0], -x.c[1], -x.c[2]}};
    if (kind_ == GroupKind::Heisenberg) r.c[2] += x.c[0] * x.c[1];
    return r;
}

FiniteSubset::FiniteSubset(std::vector<Element> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    index_.reserve(elems_.size());
    for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], static_cast<std::uint32_t>(i));
}

std::ptrdiff_t FiniteSubset::index_of(const Element& x) const {
    auto it = index_.find(x);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
    std::vector<Element> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(std::move(out));
}

FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b) {
    std::vector<Element> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(std::move(out));
}

FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b) {
    std::vector<Element> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(std::move(out));
}

bool is_subset(const FiniteSubset& a, const FiniteSubset& b) {
    if (a.size() > b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](const Element& x) { return b.contains(x); });
}

bool are_disjoint(const FiniteSubset& a, const FiniteSubset& b) { return intersection_size(a, b) == 0; }

std::size_t intersection_size(const FiniteSubset& a, const FiniteSubset& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    return static_cast<std::size_t>(
        std::count_if(small.begin(), small.end(), [&](const Element& x) { return large.contains(x); }));
}

FiniteSubset set_product(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k) {
    if (auto pc = detail::count_products(g, t.elements(), k.elements())) {
        std::vector<Element> out;
        for (std::size_t v = 0; v < pc->count.size(); ++v)
            if (pc->count[v] != 0) out.push_back(pc->element_at(g, v));
        return FiniteSubset(std::move(out));
    }
    std::vector<Element> out;
    out.reserve(t.size() * k.size());
    for (const auto& x : t)
        for (const auto& y : k) out.push_back(g.multiply(x, y));
    return FiniteSubset(std::move(out));
}

FiniteSubset set_translate(const GroupModel& g, const FiniteSubset& t, const Element& x) {
    std::vector<Element> out;
    out.reserve(t.size());
    for (const auto& y : t) out.push_back(g.multiply(y, x));
    return FiniteSubset(std::move(out));
}

FiniteSubset set_left_translate(const GroupModel& g, const Element& x, const FiniteSubset& t) {
    std::vector<Element> out;
    out.reserve(t.size());
    for (const auto& y : t) out.push_back(g.multiply(x, y));
    return FiniteSubset(std::move(out));
}

FiniteSubset set_inverse(const GroupModel& g, const FiniteSubset& k) {
    std::vector<Element> out;
    out.reserve(k.size());
    for (const auto& y : k) out.push_back(g.inverse(y));
    return FiniteSubset(std::move(out));
}

FiniteSubset difference_set(const GroupModel& g, const FiniteSubset& k) {
    return set_product(g, k, set_inverse(g, k));
}

FiniteSubset ball(const GroupModel& g, int r) {
    if (r < 0) throw std::invalid_argument("ball radius must be nonnegative");
    std::vector<Element> seen{g.identity()};
    std::unordered_set<Element, ElementHash> index{g.identity()};
    std::vector<Element> frontier{g.identity()};
    for (int step = 0; step < r; ++step) {
        std::vector<Element> next;
        for (const auto& y : frontier)
            for (const auto& s : g.generators()) {
                auto z = g.multiply(s, y);
                if (index.insert(z).second) next.push_back(z);
            }
        seen.insert(seen.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return FiniteSubset(std::move(seen));
}

std::optional<int> word_length(const GroupModel& g, const Element& x, int max_r) {
    if (x == g.identity()) return 0;
    std::unordered_set<Element, ElementHash> index{g.identity()};
    std::vector<Element> frontier{g.identity()};
    for (int step = 1; step <= max_r; ++step) {
        std::vector<Element> next;
        for (const auto& y : frontier)
            for (const auto& s : g.generators()) {
                auto z = g.multiply(s, y);
                if (z == x) return step;
                if (index.insert(z).second) next.push_back(z);
            }
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::optional<int> word_distance(const GroupModel& g, const Element& x, const Element& y, int max_r) {
    return word_length(g, g.multiply(x, g.inverse(y)), max_r);
}

FiniteSubset folner_set(const GroupModel& g, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("Folner index must be positive");
    std::vector<Element> out;
    if (g.kind() == GroupKind::Heisenberg) {
        out.reserve(static_cast<std::size_t>(n * n * n * n));
        for (std::int64_t a = 0; a < n; ++a)
            for (std::int64_t b = 0; b < n; ++b)
                for (std::int64_t c = 0; c < n * n; ++c) out.push_back(g.element({a, b, c}));
        return FiniteSubset(std::move(out));
    }
    const int d = g.rank();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    out.reserve(total);
    std::array<std::int64_t, 3> idx{};
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rest = k;
        for (int i = d - 1; i >= 0; --i) {
            idx[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
        }
        out.push_back(g.element(std::span<const std::int64_t>(idx.data(), static_cast<std::size_t>(d))));
    }
    return FiniteSubset(std::move(out));
}

FolnerSequence::FolnerSequence(GroupModel model, std::int64_t first) : model_(std::move(model)), first_(first) {
    if (first < 1) throw std::invalid_argument("Folner sequence must start at a positive side length");
}

FiniteSubset FolnerSequence::at(std::size_t n) const {
    if (n < 1) throw std::invalid_argument("Folner sequence is indexed from 1");
    return folner_set(model_, side(n));
}

std::string to_string(const Element& x, const GroupModel& g) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < g.rank(); ++i) {
        if (i) os << ',';
        os << x.c[static_cast<std::size_t>(i)];
    }
    os << ')';
    return os.str();
}

}  // namespace amenable
