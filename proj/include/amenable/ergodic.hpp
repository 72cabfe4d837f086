#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "amenable/coloring.hpp"
#include "amenable/group.hpp"
#include "amenable/report.hpp"
#include "amenable/step_function.hpp"

namespace amenable {

// Element of the value space: a real number or a bounded right-continuous
// step function, both with their sup norms. Reals act as constant functions
// when mixed with step functions.
class NormedValue {
public:
    NormedValue(double x = 0.0) : v_(x) {}
    NormedValue(StepFunction f) : v_(std::move(f)) {}

    bool is_scalar() const { return std::holds_alternative<double>(v_); }
    double scalar() const;
    const StepFunction& step() const;
    StepFunction as_step() const;

    NormedValue operator+(const NormedValue& o) const;
    NormedValue operator-(const NormedValue& o) const;
    NormedValue operator*(double a) const;
    NormedValue& operator+=(const NormedValue& o) { return *this = *this + o; }
    double norm() const;

private:
    std::variant<double, StepFunction> v_;
};

// b : F(G) → [0,∞), translation invariant, with b(Q) <= D|Q|
struct BoundaryTerm {
    std::string name;
    std::function<double(const FiniteSubset&)> eval;
    double d = 0.0;

    double operator()(const FiniteSubset& q) const { return eval(q); }
};

BoundaryTerm zero_boundary();
// factor·|∂_K(Q)|, D = factor·|K|
BoundaryTerm k_boundary_term(const GroupModel& g, const FiniteSubset& k, double factor);
// factor·|∂^r(Q)|, D = factor·|B_r|
BoundaryTerm r_boundary_term(const GroupModel& g, int r, double factor);

// F : F(G) → X, given through its values on colored patterns so that
// C-invariance holds by construction: F(Q) = on_pattern(C|_Q).
struct AlmostAdditiveFunction {
    std::string name;
    std::function<NormedValue(const Pattern&)> on_pattern;
    BoundaryTerm boundary;
    double c = 1.0;  // ‖F(Q)‖ <= C|Q|

    NormedValue operator()(const Coloring& col, const FiniteSubset& q) const {
        return on_pattern(restrict_coloring(col, q));
    }
};

// F(Q) = |Q|
AlmostAdditiveFunction cardinality_function();
// F(Q) = ♯_P(C|_Q) with b(Q) = |∂_{D(P)}(Q)|
AlmostAdditiveFunction occurrence_function(const GroupModel& g, const Pattern& p);

struct AdditivityDefect {
    double defect = 0.0;  // ‖F(∪Q_i) - Σ F(Q_i)‖
    double budget = 0.0;
    bool holds() const { return defect <= budget; }
};

// Disjoint family: budget Σ b(Q_i). Throws on overlapping parts.
AdditivityDefect check_almost_additive(const AlmostAdditiveFunction& f, const Coloring& col,
                                       const std::vector<FiniteSubset>& parts);
// ε-disjoint family: budget (3C+9D)ε|∪Q_i| + 3Σ b(Q_i). Throws if the family is not ε-disjoint.
AdditivityDefect eps_additive_defect(const AlmostAdditiveFunction& f, const Coloring& col,
                                     const std::vector<FiniteSubset>& family, double eps);

// F(U_j) / |U_j|
NormedValue ergodic_average(const AlmostAdditiveFunction& f, const Coloring& col, const FolnerSequence& seq,
                            std::size_t j);

enum class FrequencySource { Exhaustive, MonteCarlo };

struct SemiExplicitOptions {
    FrequencySource source = FrequencySource::Exhaustive;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    double max_pattern_bits = 24.0;  // exhaustive cap on log2 Σ_i |A|^{|T_i|}
};

struct SemiExplicitResult {
    NormedValue value;
    std::vector<NormedValue> tile_means;  // Σ_P ν_P F̃(P) per tile
    std::optional<double> std_error;      // Monte Carlo, scalar values only
    std::size_t evaluations = 0;
};

// Σ_i η_i(ε) Σ_{P ∈ P(T_i)} ν_P F̃(P) / |T_i| for a random coloring. For such
// colorings Σ_P ν_P F̃(P) = E[F(T_i colored at random)], so Monte Carlo mode
// samples colorings of each tile.
SemiExplicitResult semi_explicit_limit(const AlmostAdditiveFunction& f, const Coloring& col,
                                       const std::vector<FiniteSubset>& tiles, double eps,
                                       const SemiExplicitOptions& opt = {});

struct ErrorBoundInputs {
    double eps = 0.1;
    double c = 1.0;
    double d = 0.0;
    std::vector<double> tile_sizes;       // |T_i|
    std::vector<double> tile_boundaries;  // b(T_i)
    std::vector<double> frequency_gaps;   // Σ_P |♯_P/|U_j| - ν_P| per tile
    double window_ratio = 0.0;            // |∂_Q(U_j)| / |U_j|
};

struct ErrorBound {
    double leading = 0.0;        // (12C+33D)ε
    double frequency = 0.0;      // C Σ η_i gap_i
    double tile_boundary = 0.0;  // 4 Σ η_i b(T_i)/|T_i|
    double window = 0.0;         // (C+4D) ratio Σ|T_i|
    double total = 0.0;
    // ‖F̄ - F(U_j)/|U_j|‖ <= (24C+66D)ε + C Σ η_i gap_i + 8 Σ η_i b(T_i)/|T_i| + window
    double average_bound = 0.0;
    // ‖F̄ - semi-explicit value‖ <= (12C+33D)ε + 4 Σ η_i b(T_i)/|T_i|
    double limit_bound = 0.0;
};

ErrorBound error_bound(const ErrorBoundInputs& in);

struct ErgodicRow {
    std::size_t j = 0;
    std::size_t window = 0;
    NormedValue average;
    double delta = 0.0;  // ‖F(U_j)/|U_j| - semi-explicit value‖
    double window_ratio = 0.0;
    ErrorBound bound;
    bool past_j0 = false;
};

struct ErgodicStudy {
    SemiExplicitResult limit;
    std::vector<FiniteSubset> tiles;
    std::vector<ErgodicRow> rows;
    std::optional<std::size_t> j0;  // first listed j whose U_j is (Q, invariance)-invariant
    Report report;
};

// Runs the estimate along U_j for each listed j. Q = T_N T_N^{-1}; the bound
// is asserted only from the first j whose window is (Q, j0_invariance)-invariant.
ErgodicStudy ergodic_study(const GroupModel& g, const AlmostAdditiveFunction& f, const Coloring& col,
                           const FolnerSequence& seq, const std::vector<std::size_t>& js,
                           const std::vector<FiniteSubset>& tiles, double eps, double j0_invariance,
                           const SemiExplicitOptions& opt = {});

}  // namespace amenable
