#include "amenable/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "amenable/boundary.hpp"
#include "amenable/errors.hpp"
#include "amenable/tiling.hpp"

namespace amenable {

namespace {

double hops(const GroupModel& g, const Element& x, const Element& y) {
    double n = 0;
    for (const auto& s : g.generators()) n += g.multiply(s, x) == y;
    return n;
}

}  // namespace

FiniteHoppingOperator adjacency_operator(const GroupModel& g) {
    FiniteHoppingOperator h;
    h.name = "adjacency";
    h.group = g;
    h.hopping_range = 2;
    h.block = [g](const Element& x, const Element& y, const ColorLookup&) {
        return Eigen::MatrixXd::Constant(1, 1, hops(g, x, y));
    };
    return h;
}

FiniteHoppingOperator anderson_operator(const GroupModel& g, std::vector<double> potential, double hopping) {
    if (potential.empty()) throw std::invalid_argument("potential table is empty");
    FiniteHoppingOperator h;
    h.name = "anderson";
    h.group = g;
    h.hopping_range = 2;
    h.pattern_range = 0;
    h.block = [g, potential = std::move(potential), hopping](const Element& x, const Element& y,
                                                             const ColorLookup& color) {
        double v = hopping * hops(g, x, y);
        if (x == y) {
            const Color a = color(x);
            if (a >= potential.size()) throw std::out_of_range("color outside the potential table");
            v += potential[a];
        }
        return Eigen::MatrixXd::Constant(1, 1, v);
    };
    return h;
}

FiniteHoppingOperator scalar_operator(const GroupModel& g, double c, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("fiber dimension must be positive");
    FiniteHoppingOperator h;
    h.name = "scalar";
    h.group = g;
    h.dim = dim;
    h.hopping_range = 1;
    h.block = [c, dim](const Element& x, const Element& y, const ColorLookup&) -> Eigen::MatrixXd {
        if (x == y) return Eigen::MatrixXd::Identity(dim, dim) * c;
        return Eigen::MatrixXd::Zero(dim, dim);
    };
    return h;
}

FiniteHoppingOperator shifted(const FiniteHoppingOperator& h, double c) {
    auto out = h;
    out.name = h.name + "+shift";
    const std::size_t dim = h.dim;
    out.block = [inner = h.block, c, dim](const Element& x, const Element& y, const ColorLookup& color) {
        Eigen::MatrixXd b = inner(x, y, color);
        if (x == y) b += Eigen::MatrixXd::Identity(dim, dim) * c;
        return b;
    };
    return out;
}

Eigen::MatrixXd restrict_operator(const FiniteHoppingOperator& h, const FiniteSubset& lambda,
                                  const ColorLookup& color) {
    const std::size_t dim = h.dim, n = lambda.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim * n), static_cast<Eigen::Index>(dim * n));
    const auto near = ball(h.group, h.hopping_range - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = lambda[i];
        for (const auto& b : near) {
            const auto y = h.group.multiply(b, x);
            const auto k = lambda.index_of(y);
            if (k < 0) continue;
            const Eigen::MatrixXd blk = h.block(x, y, color);
            if (blk.rows() != static_cast<Eigen::Index>(dim) || blk.cols() != static_cast<Eigen::Index>(dim))
                throw std::invalid_argument("kernel block has the wrong size");
            m.block(static_cast<Eigen::Index>(i * dim), static_cast<Eigen::Index>(k * dim), dim, dim) = blk;
        }
    }
    if (m != m.transpose()) throw std::invalid_argument("operator '" + h.name + "' is not symmetric on the window");
    return m;
}

Eigen::MatrixXd restrict_operator(const FiniteHoppingOperator& h, const FiniteSubset& lambda, const Coloring& col) {
    return restrict_operator(h, lambda, [&col](const Element& x) { return col(x); });
}

Spectrum solve_spectrum(const Eigen::MatrixXd& m, bool with_vectors, std::size_t max_size) {
    const auto n = static_cast<std::size_t>(m.rows());
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
    if (n > max_size)
        throw ResourceCapExceeded("matrix size " + std::to_string(n) + " exceeds the dense cap " +
                                  std::to_string(max_size));
    Spectrum s;
    if (n == 0) return s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, with_vectors ? Eigen::ComputeEigenvectors
                                                                       : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigensolverError("symmetric eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    s.eigenvalues.assign(ev.data(), ev.data() + ev.size());

    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    s.trace_error = std::abs(m.trace() - ev.sum());
    s.frobenius_error = std::abs(m.squaredNorm() - ev.squaredNorm());
    const double tol = 1e-9 * scale * static_cast<double>(n);
    if (s.trace_error > tol) throw EigensolverError("trace check failed: " + std::to_string(s.trace_error));
    if (s.frobenius_error > tol * scale)
        throw EigensolverError("Frobenius check failed: " + std::to_string(s.frobenius_error));
    if (with_vectors) {
        const auto& v = es.eigenvectors();
        s.residual = (m * v - v * ev.asDiagonal()).colwise().norm().maxCoeff();
        if (*s.residual > tol) throw EigensolverError("residual check failed: " + std::to_string(*s.residual));
    }
    return s;
}

StepFunction counting_function(const std::vector<double>& eigenvalues) { return StepFunction::counting(eigenvalues); }

StepFunction eigen_count(const Eigen::MatrixXd& m, std::size_t max_size) {
    return counting_function(solve_spectrum(m, false, max_size).eigenvalues);
}

StepFunction ids_approximant(const FiniteHoppingOperator& h, const Coloring& col, const FolnerSequence& seq,
                             std::size_t j, std::size_t max_size) {
    if (j < 1) throw std::invalid_argument("Folner index starts at 1");
    const auto u = seq.at(j);
    if (u.size() * h.dim > max_size)
        throw ResourceCapExceeded("window of " + std::to_string(u.size() * h.dim) + " rows exceeds the dense cap " +
                                  std::to_string(max_size));
    return eigen_count(restrict_operator(h, u, col), max_size) * (1.0 / static_cast<double>(h.dim * u.size()));
}

AlmostAdditiveFunction eigen_counting_function(const FiniteHoppingOperator& h) {
    return {"eigen_count",
            [h](const Pattern& p) {
                if (p.size() == 0) return NormedValue(StepFunction::constant(0.0));
                return NormedValue(
                    eigen_count(restrict_operator(h, p.domain(), [&p](const Element& x) { return p.at(x); })));
            },
            r_boundary_term(h.group, h.range(), 4.0 * static_cast<double>(h.dim)), static_cast<double>(h.dim)};
}

CountAdditivity check_count_additivity(const FiniteHoppingOperator& h, const Coloring& col,
                                       const std::vector<FiniteSubset>& parts) {
    std::vector<Element> all;
    for (const auto& q : parts) all.insert(all.end(), q.begin(), q.end());
    const FiniteSubset whole(all);
    if (whole.size() != all.size()) throw std::invalid_argument("partition parts overlap");

    CountAdditivity r;
    const auto m = restrict_operator(h, whole, col);
    StepFunction sum;
    std::vector<std::size_t> owner(whole.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (const auto& x : parts[i]) owner[static_cast<std::size_t>(whole.index_of(x))] = i;
        if (parts[i].empty()) continue;
        sum += eigen_count(restrict_operator(h, parts[i], col));
        r.budget += 4.0 * static_cast<double>(h.dim) * static_cast<double>(r_boundary(h.group, parts[i], h.range()).size());
    }
    r.defect = sup_distance(eigen_count(m), sum);

    const std::size_t dim = h.dim;
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        bool coupled = false;
        for (Eigen::Index b = 0; b < m.cols() && !coupled; ++b)
            coupled = m(a, b) != 0.0 && owner[static_cast<std::size_t>(a) / dim] != owner[static_cast<std::size_t>(b) / dim];
        r.coupling_rows += coupled;
    }
    return r;
}

double z_adjacency_ids(double e) {
    if (e <= -2.0) return 0.0;
    if (e >= 2.0) return 1.0;
    return 1.0 - std::acos(e / 2.0) / std::numbers::pi;
}

IdsErrorReport ids_error_report(const FiniteHoppingOperator& h, const Coloring& col, const FolnerSequence& seq,
                                std::size_t j, const std::vector<FiniteSubset>& tiles, double eps,
                                const IdsReference& ref) {
    if (tiles.empty()) throw std::invalid_argument("no tiles");
    IdsErrorReport rep;
    rep.j = j;
    const auto u = seq.at(j);
    rep.window = u.size();
    rep.approximant = ids_approximant(h, col, seq, j);
    const auto& f = rep.approximant;

    if (ref.step) {
        rep.measured = sup_distance(f, *ref.step);
    } else if (ref.exact) {
        // the reference is 0 below lo and 1 above hi
        rep.measured = sup_distance(f, ref.exact, ref.lo, ref.hi);
        double below = std::abs(f.base()), above = std::abs(1.0 - f.at_infinity());
        for (double x : f.breakpoints()) {
            if (x < ref.lo) below = std::max(below, std::abs(f(x)));
            if (x >= ref.hi) above = std::max(above, std::abs(1.0 - f(x)));
        }
        rep.measured = std::max({rep.measured, below, above});
    } else {
        throw std::invalid_argument("IDS reference is empty");
    }

    const double br = static_cast<double>(ball(h.group, h.range()).size());
    ErrorBoundInputs in;
    in.eps = eps;
    in.c = 1.0;
    in.d = 4.0 * br;
    for (const auto& t : tiles) {
        in.tile_sizes.push_back(static_cast<double>(t.size()));
        in.tile_boundaries.push_back(4.0 * static_cast<double>(r_boundary(h.group, t, h.range()).size()));
        in.frequency_gaps.push_back(frequency_gap_sum(h.group, t, col, u));
    }
    in.window_ratio = boundary_ratio(h.group, u, difference_set(h.group, tiles.back()));
    const auto b = error_bound(in);
    rep.leading = 2.0 * b.leading;
    rep.frequency = b.frequency;
    rep.window_term = b.window;
    rep.tile_term = 2.0 * b.tile_boundary;
    rep.bound = b.average_bound;
    rep.report.add("ids_estimate_j" + std::to_string(j), rep.measured, "<=", rep.bound + ref.bound_slack);
    rep.report.add_flag("approximant_monotone_j" + std::to_string(j), f.nondecreasing());
    rep.report.add("approximant_mass_error_j" + std::to_string(j), std::abs(f.at_infinity() - 1.0), "<=", 1e-9);
    return rep;
}

}  // namespace amenable
