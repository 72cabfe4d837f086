#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "amenable/group.hpp"
#include "amenable/report.hpp"

namespace amenable {

// ⌈log ε / log(1-ε)⌉
int n_of_eps(double eps);
// η_i(ε) = ε(1-ε)^{N(ε)-i}, 1 <= i <= N(ε)
double eta(int i, double eps);
// Σ_{i<=N(ε)} η_i(ε) α_i
double weighted_null_sum(const std::vector<double>& alpha, double eps);

// Largest r with r <= ε|T|, i.e. how many points may be dropped from a set of
// size n while keeping at least (1-ε)n of them.
std::size_t eps_slack(std::size_t n, double eps);

// Two sets are ε-disjoint iff their overlap can be split between them within
// both slacks: |T1 ∩ T2| <= slack(T1) + slack(T2).
bool eps_disjoint_pair(const FiniteSubset& a, const FiniteSubset& b, double eps);
bool are_eps_disjoint(const std::vector<FiniteSubset>& family, double eps);

struct HypothesisCheck {
    std::string name;
    bool holds = true;
    double measured = 0;
    double threshold = 0;
    std::string relation = "<";
};

std::string describe_failures(const std::vector<HypothesisCheck>& hyps);
bool all_hold(const std::vector<HypothesisCheck>& hyps);

enum class SeedMode { GreedyDisjoint, None };

struct TilingParams {
    double eps = 0.1;
    double beta = 0.05;
    double delta = 0.01;
    double zeta = 0.001;
    FiniteSubset control;  // the invariance-control set B, id ∈ B
    SeedMode seed = SeedMode::GreedyDisjoint;
    // Throw instead of warning when a construction hypothesis fails.
    bool enforce_hypotheses = false;

    // Validates ranges; control defaults to {id}.
    static TilingParams make(const GroupModel& g, double eps, double beta, double delta, double zeta,
                             FiniteSubset control = {});
    // ε <= 1/10, β < 2^{-N}ε, δ < 6^{-N}β/4
    bool in_guaranteed_regime() const;
};

class TilingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CoverResult {
    std::vector<Element> centers;        // in construction order
    std::vector<FiniteSubset> subtiles;  // K_j ⊆ K, disjoint translates K_j c_j
    std::size_t seeded = 0;              // centers from the initial disjoint packing
    std::size_t covered = 0;             // |∪ K c_j|
    std::vector<HypothesisCheck> hypotheses;
};

// Covers an ε-fraction of T by ε-disjoint translates K c_j ⊆ T whose
// disjointified pieces K_j c_j stay large and have controlled B-boundary.
// Centers are taken as the first admissible candidates in canonical order.
CoverResult ow_cover(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const TilingParams& p);

// Recomputes every conclusion of ow_cover from the raw sets.
Report verify_cover(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const TilingParams& p,
                    const CoverResult& r);

struct TileStepResult {
    CoverResult cover;
    FiniteSubset covered;    // K C
    FiniteSubset remainder;  // T ∖ K C
    double remainder_ratio = 0;  // |∂_{LL^{-1}}(remainder)| / |remainder|
    double remainder_bound = 0;  // 2δ + η
    std::vector<HypothesisCheck> hypotheses;
};

TileStepResult tile_step(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, const FiniteSubset& l,
                         const TilingParams& p, double eta);

struct QuasiTiling {
    FiniteSubset target;
    std::vector<FiniteSubset> tiles;           // T_1 ⊆ ... ⊆ T_N
    std::vector<std::size_t> tile_indices;     // T_i = S_{n_i}, 0 when unknown
    std::vector<std::vector<Element>> centers; // C_i
    std::vector<std::vector<FiniteSubset>> subtiles;  // T_i^{(c)}, aligned with centers
    TilingParams params;
    std::vector<HypothesisCheck> warnings;
    bool relaxed = false;
};

// T_1 = S_1, T_{i+1} = first later S_n that is (T_i T_i^{-1}, δ)-invariant.
// Returns the Følner indices n_1 < ... < n_count.
std::vector<std::size_t> select_tiles(const FolnerSequence& seq, int count, double delta, std::size_t first_index = 1,
                                      std::size_t max_index = 4096);

// Quasi tiling by the given nested tiles: peel off T_N, then T_{N-1}, ...
QuasiTiling stp_tiling_with_tiles(const GroupModel& g, const FiniteSubset& t, const std::vector<FiniteSubset>& tiles,
                                  const TilingParams& p);
QuasiTiling stp_tiling(const GroupModel& g, const FiniteSubset& t, const FolnerSequence& seq, const TilingParams& p,
                       std::size_t max_index = 4096);

// Independent check of the tiling conclusions from raw sets: containment,
// ε-disjointness, disjointness across tiles, densities within β of η_i,
// subtile sizes, and (1-2ε) coverage when β < 2^{-N}ε.
Report verify_quasi_tiling(const GroupModel& g, const QuasiTiling& q);

// Containment, ε-disjointness and cross-tile disjointness only.
Report verify_tiling_structure(const GroupModel& g, const FiniteSubset& target, const std::vector<FiniteSubset>& tiles,
                               const std::vector<std::vector<Element>>& centers,
                               const std::vector<std::vector<FiniteSubset>>& subtiles, double eps);

struct UstpParams {
    TilingParams base;         // ε, β and δ_0 for the tilings inside auxiliary pieces
    double aux_eps = 0.5;      // the auxiliary tiling parameter (M = N(aux_eps) auxiliary tiles)
    double aux_beta = 0.25;
    double aux_select_delta = 0.5;  // invariance used to pick auxiliary tiles
    double aux_delta = 0.01;        // δ of the auxiliary tiling of T̂
    std::size_t tile_first_index = 1;
    std::size_t max_index = 4096;
    std::size_t max_family = 200000;
};

struct UniformTilingFamily {
    FiniteSubset target;                   // U_k
    FiniteSubset hat;                      // T̂
    std::vector<FiniteSubset> tiles;       // T_1..T_N
    std::vector<std::size_t> tile_indices;
    std::vector<FiniteSubset> aux_tiles;   // T̄_1..T̄_M
    std::vector<std::size_t> aux_indices;
    std::size_t hat_index = 0;
    // disjointified auxiliary pieces T̄'_l(c)c, each tiled by T_1..T_N
    std::vector<FiniteSubset> pieces;
    // piece_ranges[w][i] = [begin, end) of the centers of piece w in grand_centers[i]
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> piece_ranges;
    // grand center sets Ĉ_i with the witness subtile of each center
    std::vector<std::vector<Element>> grand_centers;
    std::vector<std::vector<FiniteSubset>> grand_subtiles;
    std::vector<Element> lambdas;          // Λ
    // pieces inside T λ; their centers form C̃_i(λ), and C_i^λ = C̃_i(λ)λ^{-1}
    std::vector<std::vector<std::uint32_t>> lambda_pieces;
    FiniteSubset control;                  // Q = T̄_M T̄_M^{-1}
    std::vector<double> gammas;            // γ_i = |Ĉ_i| / |T̂|
    std::size_t fitting_translates = 0;    // |A|
    std::vector<HypothesisCheck> conditions;
    UstpParams params;

    std::vector<Element> member_centers(const GroupModel& g, std::size_t lambda, std::size_t i) const;
    std::vector<FiniteSubset> member_subtiles(std::size_t lambda, std::size_t i) const;
};

UniformTilingFamily ustp_family(const GroupModel& g, const FiniteSubset& uk, const FolnerSequence& seq,
                                const UstpParams& p);

// Structure of every member, Σγ_i|T_i| <= 2, coverage per member, and the
// uniform-frequency defect on U_k ∖ ∂_Q(U_k).
Report verify_uniform_family(const GroupModel& g, const UniformTilingFamily& fam);

}  // namespace amenable
