#include "product_counts.hpp"

#include <algorithm>
#include <climits>
#include <span>

namespace amenable::detail {

namespace {

constexpr std::size_t kMaxDenseCells = std::size_t{1} << 24;

void bounding_box(const std::vector<Element>& s, std::array<std::int64_t, 3>& l, std::array<std::int64_t, 3>& h) {
    l.fill(INT64_MAX);
    h.fill(INT64_MIN);
    for (const auto& x : s)
        for (int i = 0; i < 3; ++i) {
            l[i] = std::min(l[i], x.c[i]);
            h[i] = std::max(h[i], x.c[i]);
        }
}

}  // namespace

Element ProductCounts::element_at(const GroupModel& g, std::size_t v) const {
    std::array<std::int64_t, 3> co{};
    for (int i = rank - 1; i >= 0; --i) {
        co[i] = lo[i] + static_cast<std::int64_t>(v % ext[i]);
        v /= ext[i];
    }
    return g.element(std::span<const std::int64_t>(co.data(), static_cast<std::size_t>(rank)));
}

std::optional<ProductCounts> count_products(const GroupModel& g, const std::vector<Element>& left,
                                            const std::vector<Element>& right) {
    if (left.empty() || right.empty()) return std::nullopt;
    ProductCounts pc;
    pc.rank = g.rank();
    const int r = pc.rank;
    std::array<std::int64_t, 3> ylo{}, yhi{}, xlo{}, xhi{}, hi{};
    bounding_box(left, ylo, yhi);
    bounding_box(right, xlo, xhi);
    for (int i = 0; i < 3; ++i) {
        pc.lo[i] = ylo[i] + xlo[i];
        hi[i] = yhi[i] + xhi[i];
    }
    if (g.kind() == GroupKind::Heisenberg) {
        // c picks up a_y * b_x
        const std::int64_t corners[4] = {ylo[0] * xlo[1], ylo[0] * xhi[1], yhi[0] * xlo[1], yhi[0] * xhi[1]};
        pc.lo[2] += *std::min_element(corners, corners + 4);
        hi[2] += *std::max_element(corners, corners + 4);
    }
    std::size_t cells = 1;
    for (int i = 0; i < r; ++i) {
        const auto e = static_cast<std::size_t>(hi[i] - pc.lo[i] + 1);
        if (e > kMaxDenseCells || cells * e > kMaxDenseCells || cells * e > 16 * left.size() * right.size())
            return std::nullopt;
        pc.ext[i] = e;
        cells *= e;
    }
    auto cell = [&](const Element& x) {
        std::size_t v = 0;
        for (int i = 0; i < r; ++i) v = v * pc.ext[i] + static_cast<std::size_t>(x.c[i] - pc.lo[i]);
        return v;
    };
    pc.count.assign(cells, 0);
    if (g.kind() == GroupKind::IntegerLattice) {
        // cells are linear in the coordinates: cell(y + x) = cell(ylo + x) + cell(y + xlo) - cell(ylo + xlo)
        const Element ymin = g.element(std::span<const std::int64_t>(ylo.data(), static_cast<std::size_t>(r)));
        const Element xmin = g.element(std::span<const std::int64_t>(xlo.data(), static_cast<std::size_t>(r)));
        const std::size_t corner = cell(g.multiply(ymin, xmin));
        std::vector<std::size_t> base;
        base.reserve(right.size());
        for (const auto& x : right) base.push_back(cell(g.multiply(ymin, x)));
        for (const auto& y : left) {
            const std::size_t off = cell(g.multiply(y, xmin)) - corner;
            for (auto b : base) ++pc.count[b + off];
        }
    } else {
        for (const auto& y : left)
            for (const auto& x : right) ++pc.count[cell(g.multiply(y, x))];
    }
    return pc;
}

}  // namespace amenable::detail
