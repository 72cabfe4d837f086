#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amenable/coloring.hpp"
#include "amenable/ergodic.hpp"
#include "amenable/group.hpp"
#include "amenable/report.hpp"
#include "amenable/step_function.hpp"

namespace amenable {

using ColorLookup = std::function<Color(const Element&)>;

// Self-adjoint operator on ℓ²(G, C^dim). H(g,h) vanishes once d(g,h) >= M and
// depends only on the colors in B_N g ∪ B_N h.
struct FiniteHoppingOperator {
    std::string name;
    GroupModel group = GroupModel::lattice(1);
    std::size_t dim = 1;
    int hopping_range = 1;  // M
    int pattern_range = 0;  // N
    std::function<Eigen::MatrixXd(const Element& g, const Element& h, const ColorLookup& color)> block;

    int range() const { return std::max(hopping_range, pattern_range); }  // R
};

// (Hu)(g) = Σ_{s ∈ S} u(sg)
FiniteHoppingOperator adjacency_operator(const GroupModel& g);
// hopping·Σ_s u(sg) + V(C(g)) u(g), potential[a] = V(a)
FiniteHoppingOperator anderson_operator(const GroupModel& g, std::vector<double> potential, double hopping = 1.0);
// c·Id in every fiber
FiniteHoppingOperator scalar_operator(const GroupModel& g, double c, std::size_t dim = 1);
// H + c·Id
FiniteHoppingOperator shifted(const FiniteHoppingOperator& h, double c);

// H[Λ] = p_Λ H i_Λ, rows and columns in canonical order of Λ times the fiber.
// Throws std::invalid_argument unless the result is exactly symmetric.
Eigen::MatrixXd restrict_operator(const FiniteHoppingOperator& h, const FiniteSubset& lambda, const ColorLookup& color);
Eigen::MatrixXd restrict_operator(const FiniteHoppingOperator& h, const FiniteSubset& lambda, const Coloring& col);

class EigensolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Spectrum {
    std::vector<double> eigenvalues;  // ascending, with multiplicity
    double trace_error = 0.0;         // |tr M - Σλ|
    double frobenius_error = 0.0;     // |‖M‖_F² - Σλ²|
    std::optional<double> residual;   // max column norm of MV - VΛ, when vectors were computed
};

constexpr std::size_t kMaxDenseSize = 6000;

// Dense symmetric eigensolve with sanity checks; throws EigensolverError when
// the solver fails or a check exceeds its tolerance.
Spectrum solve_spectrum(const Eigen::MatrixXd& m, bool with_vectors = false, std::size_t max_size = kMaxDenseSize);

// n(M)(E) = #{i : λ_i <= E}
StepFunction eigen_count(const Eigen::MatrixXd& m, std::size_t max_size = kMaxDenseSize);
StepFunction counting_function(const std::vector<double>& eigenvalues);

// n(H[U_j]) / (dim |U_j|)
StepFunction ids_approximant(const FiniteHoppingOperator& h, const Coloring& col, const FolnerSequence& seq,
                             std::size_t j, std::size_t max_size = kMaxDenseSize);

// Q ↦ n(H[Q]) as an almost additive function with b(Q) = 4 dim |∂^R Q| and C = dim.
AlmostAdditiveFunction eigen_counting_function(const FiniteHoppingOperator& h);

struct CountAdditivity {
    double defect = 0.0;          // sup_E |n(H[∪Q_i]) - Σ n(H[Q_i])|
    double budget = 0.0;          // Σ 4 dim |∂^R Q_i|
    std::size_t coupling_rows = 0;  // nonzero rows of H[∪Q_i] - ⊕H[Q_i], bounds the defect by interlacing
    bool holds() const { return defect <= budget && defect <= static_cast<double>(coupling_rows); }
};

CountAdditivity check_count_additivity(const FiniteHoppingOperator& h, const Coloring& col,
                                       const std::vector<FiniteSubset>& parts);

// Reference the approximant is compared against: an exact IDS on [lo, hi]
// (0 below, 1 above) or another step function.
struct IdsReference {
    std::function<double(double)> exact;
    double lo = 0.0;
    double hi = 0.0;
    std::optional<StepFunction> step;
    // added to the bound when the reference is itself an approximation
    double bound_slack = 0.0;
};

struct IdsErrorReport {
    std::size_t j = 0;
    std::size_t window = 0;
    double measured = 0.0;  // ‖approximant - reference‖_∞
    double leading = 0.0;   // (24+264|B_R|)ε
    double frequency = 0.0;  // Σ η_i gap_i
    double window_term = 0.0;  // (1+16|B_R|) ratio Σ|T_i|
    double tile_term = 0.0;  // 32 Σ η_i |∂^R T_i| / |T_i|
    double bound = 0.0;
    StepFunction approximant;
    Report report;
};

// Evaluates the explicit uniform estimate for the normalized counting
// function on U_j with Q = T_N T_N^{-1} and compares it to the measured
// sup-norm distance.
IdsErrorReport ids_error_report(const FiniteHoppingOperator& h, const Coloring& col, const FolnerSequence& seq,
                                std::size_t j, const std::vector<FiniteSubset>& tiles, double eps,
                                const IdsReference& ref);

// 1 - arccos(E/2)/π, the IDS of the adjacency operator on Z
double z_adjacency_ids(double e);

}  // namespace amenable
