#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace amenable {

enum class GroupKind : std::uint8_t { IntegerLattice, Heisenberg };

// Group element in coordinates. Unused coordinates stay zero.
// `model` tags the owning model so that mixing elements of different
// groups is caught at multiplication time.
struct Element {
    std::uint8_t model = 0;
    std::array<std::int64_t, 3> c{};

    friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
    std::size_t operator()(const Element& x) const noexcept;
};

// Z^d (d <= 3) with generators ±e_i, or the discrete Heisenberg group with
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab') and generators ±x, ±y.
class GroupModel {
public:
    static GroupModel lattice(int d);
    static GroupModel heisenberg();

    // Same group, generator set S ∪ {id}. Only percolation uses this.
    GroupModel with_identity_generator() const;

    GroupKind kind() const { return kind_; }
    int rank() const { return rank_; }
    std::uint8_t tag() const { return tag_; }
    std::string name() const;
    bool identity_in_generators() const { return id_in_s_; }

    Element identity() const;
    Element element(std::initializer_list<std::int64_t> coords) const;
    Element element(std::span<const std::int64_t> coords) const;

    Element multiply(const Element& x, const Element& y) const;
    Element inverse(const Element& x) const;
    bool owns(const Element& x) const;

    const std::vector<Element>& generators() const { return gens_; }
    // index of s^{-1} in generators() for each generator s
    const std::vector<std::size_t>& inverse_generator_index() const { return inv_index_; }

    bool operator==(const GroupModel& o) const {
        return kind_ == o.kind_ && rank_ == o.rank_ && id_in_s_ == o.id_in_s_;
    }
    bool same_group(const GroupModel& o) const { return tag_ == o.tag_; }

private:
    GroupModel(GroupKind kind, int rank, bool id_in_s);
    void check(const Element& x) const;

    GroupKind kind_;
    int rank_;
    std::uint8_t tag_;
    bool id_in_s_;
    std::vector<Element> gens_;
    std::vector<std::size_t> inv_index_;
};

// Finite set of elements. Iteration is in canonical (lexicographic) order;
// membership and position lookups go through a hash index.
class FiniteSubset {
public:
    FiniteSubset() = default;
    explicit FiniteSubset(std::vector<Element> elems);
    FiniteSubset(std::initializer_list<Element> elems)
        : FiniteSubset(std::vector<Element>(elems)) {}

    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(const Element& x) const { return index_.count(x) != 0; }
    // position in canonical order, or -1
    std::ptrdiff_t index_of(const Element& x) const;

    const Element& operator[](std::size_t i) const { return elems_[i]; }
    const std::vector<Element>& elements() const { return elems_; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool operator==(const FiniteSubset& o) const { return elems_ == o.elems_; }

private:
    std::vector<Element> elems_;
    std::unordered_map<Element, std::uint32_t, ElementHash> index_;
};

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b);
bool is_subset(const FiniteSubset& a, const FiniteSubset& b);
bool are_disjoint(const FiniteSubset& a, const FiniteSubset& b);
std::size_t intersection_size(const FiniteSubset& a, const FiniteSubset& b);

// {tk : t ∈ T, k ∈ K}
FiniteSubset set_product(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k);
// {tx : t ∈ T}
FiniteSubset set_translate(const GroupModel& g, const FiniteSubset& t, const Element& x);
// {xt : t ∈ T}
FiniteSubset set_left_translate(const GroupModel& g, const Element& x, const FiniteSubset& t);
FiniteSubset set_inverse(const GroupModel& g, const FiniteSubset& k);
// K K^{-1}
FiniteSubset difference_set(const GroupModel& g, const FiniteSubset& k);

// B_r = {y : |y|_S <= r}, by breadth-first search from the identity.
FiniteSubset ball(const GroupModel& g, int r);

// |x|_S if it is at most max_r.
std::optional<int> word_length(const GroupModel& g, const Element& x, int max_r);
// d_S(x, y) = |x y^{-1}|_S
std::optional<int> word_distance(const GroupModel& g, const Element& x, const Element& y, int max_r);

// Boxes [0,n)^d in Z^d; {0<=a,b<n, 0<=c<n^2} in the Heisenberg group.
FiniteSubset folner_set(const GroupModel& g, std::int64_t n);

// S_n = folner_set(first + n - 1), n >= 1. Nested, id ∈ S_1.
class FolnerSequence {
public:
    FolnerSequence(GroupModel model, std::int64_t first = 1);
    FiniteSubset at(std::size_t n) const;
    std::int64_t side(std::size_t n) const { return first_ + static_cast<std::int64_t>(n) - 1; }
    const GroupModel& model() const { return model_; }
    std::int64_t first() const { return first_; }

private:
    GroupModel model_;
    std::int64_t first_;
};

std::string to_string(const Element& x, const GroupModel& g);

}  // namespace amenable
