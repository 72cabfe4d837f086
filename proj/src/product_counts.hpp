#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "amenable/group.hpp"

namespace amenable::detail {

// count[v] = #{(y, x) ∈ L × R : y x = v} over the coordinate box of L R
struct ProductCounts {
    int rank = 0;
    std::array<std::int64_t, 3> lo{};
    std::array<std::size_t, 3> ext{1, 1, 1};
    std::vector<std::uint32_t> count;

    Element element_at(const GroupModel& g, std::size_t v) const;
};

// Empty when the box exceeds 2^24 cells or 16 |L| |R|.
std::optional<ProductCounts> count_products(const GroupModel& g, const std::vector<Element>& left,
                                            const std::vector<Element>& right);

}  // namespace amenable::detail
