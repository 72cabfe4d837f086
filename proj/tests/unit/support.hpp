#pragma once

#include <random>
#include <vector>

#include "amenable/group.hpp"

namespace testsupport {

// Each element of `from` kept independently with probability p.
inline amenable::FiniteSubset random_subset(const amenable::FiniteSubset& from, std::mt19937_64& rng, double p) {
    std::bernoulli_distribution keep(p);
    std::vector<amenable::Element> out;
    for (const auto& x : from)
        if (keep(rng)) out.push_back(x);
    return amenable::FiniteSubset(std::move(out));
}

}  // namespace testsupport
