#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "amenable/group.hpp"
#include "amenable/rng.hpp"

namespace amenable {

using Color = std::uint32_t;

enum class ColoringRule { Explicit, Periodic, Iid, BernoulliBits };

// A map G → {0, ..., alphabet-1}. Immutable; evaluation is a pure function
// of the element, so random colorings are evaluated lazily on any window.
class Coloring {
public:
    // Colors given on a finite window; evaluating outside it throws.
    static Coloring explicit_map(Color alphabet, std::unordered_map<Element, Color, ElementHash> colors);
    // table[(c_0 mod p_0) + p_0 (c_1 mod p_1) + p_0 p_1 (c_2 mod p_2)]; unused periods are 1
    static Coloring periodic(Color alphabet, std::vector<std::int64_t> periods, std::vector<Color> table);
    // independent colors with the given weights, keyed on (seed, coordinates)
    static Coloring iid(std::uint64_t seed, std::vector<double> weights);
    // color bit s is 1 with probability probs[s], independently over (site, s);
    // alphabet {0,1}^k encoded as bitmasks
    static Coloring bernoulli_bits(std::uint64_t seed, std::vector<double> probs);
    static Coloring constant(Color alphabet, Color value);

    Color operator()(const Element& x) const;
    Color alphabet() const { return alphabet_; }
    ColoringRule rule() const { return rule_; }
    std::uint64_t seed() const { return seed_; }

    // single-site color law for iid and bit colorings; empty otherwise
    const std::vector<double>& site_distribution() const { return site_law_; }
    bool is_random() const { return rule_ == ColoringRule::Iid || rule_ == ColoringRule::BernoulliBits; }
    const std::vector<double>& bit_probabilities() const { return bit_probs_; }

    // Draws an independent site color from the single-site law using the
    // uniform u in [0,1). Bit colorings use one uniform per bit instead.
    Color draw(const CounterRng& rng, std::int64_t sample, std::int64_t site) const;

    std::string describe() const;

private:
    ColoringRule rule_ = ColoringRule::Periodic;
    Color alphabet_ = 1;
    std::uint64_t seed_ = 0;
    std::unordered_map<Element, Color, ElementHash> explicit_;
    std::vector<std::int64_t> periods_;
    std::vector<Color> table_;
    std::vector<double> cumulative_;
    std::vector<double> site_law_;
    std::vector<double> bit_probs_;
};

// P : D(P) → A, values aligned with the canonical order of the domain
class Pattern {
public:
    Pattern() : domain_(std::make_shared<const FiniteSubset>()) {}
    Pattern(FiniteSubset domain, std::vector<Color> values);
    // shares the domain, so enumerating colorings of one set copies no elements
    Pattern(std::shared_ptr<const FiniteSubset> domain, std::vector<Color> values);

    const FiniteSubset& domain() const { return *domain_; }
    const std::shared_ptr<const FiniteSubset>& shared_domain() const { return domain_; }
    const std::vector<Color>& values() const { return values_; }
    std::size_t size() const { return domain_->size(); }
    Color at(const Element& x) const;

    // Px : D(P)x → A, yx ↦ P(y)
    Pattern translate(const GroupModel& g, const Element& x) const;
    // P|_Q for Q ⊆ D(P)
    Pattern restrict(const FiniteSubset& q) const;
    // canonical representative of the translation class: least domain element moved to id
    Pattern normalized(const GroupModel& g) const;
    bool equivalent(const GroupModel& g, const Pattern& o) const;

    bool operator==(const Pattern& o) const { return *domain_ == *o.domain_ && values_ == o.values_; }

private:
    std::shared_ptr<const FiniteSubset> domain_;
    std::vector<Color> values_;
};

// C|_Q
Pattern restrict_coloring(const Coloring& c, const FiniteSubset& q);

// ♯_P(C|_Λ) = #{x : D(P)x ⊆ Λ, C|_{D(P)x} = Px}
std::size_t count_occurrences(const GroupModel& g, const Pattern& p, const Coloring& c, const FiniteSubset& lambda);
// ♯_P(P')
std::size_t count_occurrences(const GroupModel& g, const Pattern& p, const Pattern& in);

// ♯_P(C|_{U_j}) / |U_j|
double empirical_frequency(const GroupModel& g, const Pattern& p, const Coloring& c, const FolnerSequence& seq,
                           std::size_t j);

// Π_{g ∈ D(P)} μ(P(g))
double iid_frequency(const Pattern& p, const std::vector<double>& weights);
// Π_v Π_s (p_s [bit s of P(v)] + (1-p_s) [not bit s of P(v)])
double bits_frequency(const Pattern& p, const std::vector<double>& probs);
// the almost-sure frequency for a random coloring
double pattern_frequency(const Pattern& p, const Coloring& c);

// Histogram of the patterns C|_{Tx} over the translates Tx ⊆ U, keyed by the
// mixed-radix code of the values in canonical order of T.
struct PatternHistogram {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t translates = 0;
};
PatternHistogram pattern_histogram(const GroupModel& g, const FiniteSubset& t, const Coloring& c,
                                   const FiniteSubset& u);
std::vector<Color> decode_pattern(std::uint64_t code, std::size_t size, Color alphabet);

// Σ_{P ∈ P(T)} |♯_P(C|_U)/|U| - ν_P| for a random coloring; patterns never
// seen in U contribute ν_P, summed as 1 - Σ_{seen} ν_P.
double frequency_gap_sum(const GroupModel& g, const FiniteSubset& t, const Coloring& c, const FiniteSubset& u);

}  // namespace amenable
